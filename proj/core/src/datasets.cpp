#include "pnu/datasets.hpp"

#include <algorithm>
#include <bit>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string_view>

#include "pnu/numerics.hpp"

namespace pnu {
namespace {

void check_prior(double pi) {
  if (!(pi > 0.0 && pi < 1.0)) {
    std::ostringstream os;
    os << "class prior must lie strictly inside (0, 1), got " << pi;
    throw std::invalid_argument(os.str());
  }
}

void fill_gaussian(Matrix& out, Eigen::Index row, Label y, std::mt19937_64& rng,
                   std::normal_distribution<double>& normal) {
  const double mu = sign_of(y) / std::sqrt(2.0);
  out(row, 0) = mu + normal(rng);
  out(row, 1) = mu + normal(rng);
}

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  s = s.substr(first, last - first + 1);
  if (s.size() >= 2 && s.front() == '"' && s.back() == '"') s = s.substr(1, s.size() - 2);
  return s;
}

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> fields;
  std::string_view rest(line);
  while (true) {
    const auto comma = rest.find(',');
    fields.emplace_back(trim(rest.substr(0, comma)));
    if (comma == std::string_view::npos) break;
    rest.remove_prefix(comma + 1);
  }
  return fields;
}

std::optional<double> parse_number(std::string_view s) {
  if (s.empty()) return std::nullopt;
  if (s.front() == '+') s.remove_prefix(1);
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc{} || ptr != s.data() + s.size() || !std::isfinite(v)) return std::nullopt;
  return v;
}

std::size_t resolve_label_column(const std::vector<std::string>& header, const std::string& column) {
  if (auto it = std::find(header.begin(), header.end(), column); it != header.end()) {
    return static_cast<std::size_t>(it - header.begin());
  }
  if (!column.empty() && std::all_of(column.begin(), column.end(), [](char c) { return c >= '0' && c <= '9'; })) {
    const auto idx = std::stoul(column);
    if (idx < header.size()) return idx;
  }
  throw std::invalid_argument("label column '" + column + "' matches neither a header name nor a column index");
}

}  // namespace

std::size_t SampleTriple::dim() const {
  for (const Matrix* m : {&x_pos, &x_neg, &x_unl}) {
    if (m->rows() > 0) return static_cast<std::size_t>(m->cols());
  }
  return static_cast<std::size_t>(x_pos.cols());
}

void SampleTriple::validate() const {
  check_prior(pi);
  const auto d = dim();
  for (const Matrix* m : {&x_pos, &x_neg, &x_unl}) {
    if (m->rows() > 0 && static_cast<std::size_t>(m->cols()) != d) {
      throw std::invalid_argument("sample sets disagree on feature dimension");
    }
  }
}

std::uint64_t fingerprint(const SampleTriple& triple) {
  std::uint64_t h = splitmix64(std::bit_cast<std::uint64_t>(triple.pi));
  auto mix = [&h](std::uint64_t v) { h = splitmix64(h ^ v); };
  for (const Matrix* m : {&triple.x_pos, &triple.x_neg, &triple.x_unl}) {
    mix(static_cast<std::uint64_t>(m->rows()));
    mix(static_cast<std::uint64_t>(m->cols()));
    for (Eigen::Index i = 0; i < m->size(); ++i) mix(std::bit_cast<std::uint64_t>(m->data()[i]));
  }
  return h;
}

std::size_t LabeledPool::positive_count() const {
  return static_cast<std::size_t>(std::count(labels.begin(), labels.end(), Label::positive));
}

double LabeledPool::positive_ratio() const {
  return labels.empty() ? 0.0 : static_cast<double>(positive_count()) / static_cast<double>(labels.size());
}

void LabeledPool::validate() const {
  if (static_cast<std::size_t>(features.rows()) != labels.size()) {
    throw std::invalid_argument("pool has mismatched feature rows and labels");
  }
  const auto pos = positive_count();
  if (labels.size() < 2 || pos == 0 || pos == labels.size()) {
    throw std::invalid_argument("pool needs at least two rows and both classes");
  }
}

ArtificialDraw draw_gaussian_artificial(std::size_t n_pos, std::size_t n_neg, std::size_t n_unl,
                                        double pi, std::uint64_t seed) {
  check_prior(pi);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::bernoulli_distribution coin(pi);

  ArtificialDraw draw;
  auto& t = draw.triple;
  t.pi = pi;
  t.x_pos.resize(static_cast<Eigen::Index>(n_pos), 2);
  t.x_neg.resize(static_cast<Eigen::Index>(n_neg), 2);
  t.x_unl.resize(static_cast<Eigen::Index>(n_unl), 2);
  for (Eigen::Index i = 0; i < t.x_pos.rows(); ++i) fill_gaussian(t.x_pos, i, Label::positive, rng, normal);
  for (Eigen::Index i = 0; i < t.x_neg.rows(); ++i) fill_gaussian(t.x_neg, i, Label::negative, rng, normal);
  draw.latent_unl.reserve(n_unl);
  for (Eigen::Index i = 0; i < t.x_unl.rows(); ++i) {
    const Label y = coin(rng) ? Label::positive : Label::negative;
    draw.latent_unl.push_back(y);
    fill_gaussian(t.x_unl, i, y, rng, normal);
  }
  return draw;
}

SampleTriple gen_gaussian_artificial(std::size_t n_pos, std::size_t n_neg, std::size_t n_unl,
                                     double pi, std::uint64_t seed) {
  return draw_gaussian_artificial(n_pos, n_neg, n_unl, pi, seed).triple;
}

LabeledPool gen_gaussian_labeled(std::size_t n, double pi, std::uint64_t seed) {
  auto draw = draw_gaussian_artificial(0, 0, n, pi, seed);
  return {std::move(draw.triple.x_unl), std::move(draw.latent_unl)};
}

Vector artificial_class_mean(Label y) {
  return Vector::Constant(2, sign_of(y) / std::sqrt(2.0));
}

LabeledPool load_csv(const std::filesystem::path& path, const std::string& label_column) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open CSV file " + path.string());

  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error(path.string() + ": empty file");
  const auto header = split_csv(line);
  const auto label_idx = resolve_label_column(header, label_column);
  const auto d = header.size() - 1;
  if (d == 0) throw std::runtime_error(path.string() + ": no feature columns");

  std::vector<double> values;
  std::vector<std::string> raw_labels;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (trim(line).empty()) continue;
    const auto fields = split_csv(line);
    if (fields.size() != header.size()) {
      std::ostringstream os;
      os << path.string() << ":" << line_no << ": expected " << header.size() << " fields, got "
         << fields.size();
      throw std::runtime_error(os.str());
    }
    for (std::size_t j = 0; j < fields.size(); ++j) {
      if (j == label_idx) {
        raw_labels.push_back(fields[j]);
        continue;
      }
      const auto v = parse_number(fields[j]);
      if (!v) {
        std::ostringstream os;
        os << path.string() << ":" << line_no << ": non-numeric feature '" << fields[j] << "' in column '"
           << header[j] << "'";
        throw std::runtime_error(os.str());
      }
      values.push_back(*v);
    }
  }

  std::vector<std::string> distinct = raw_labels;
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() != 2) {
    std::ostringstream os;
    os << path.string() << ": label column must hold exactly two distinct values, found " << distinct.size();
    throw std::runtime_error(os.str());
  }
  const auto a = parse_number(distinct[0]);
  const auto b = parse_number(distinct[1]);
  if (a && b && *b < *a) std::swap(distinct[0], distinct[1]);
  const std::string& negative_value = distinct[0];

  const auto m = raw_labels.size();
  LabeledPool pool;
  pool.features = Eigen::Map<Matrix>(values.data(), static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(d));
  pool.labels.reserve(m);
  for (const auto& s : raw_labels) pool.labels.push_back(s == negative_value ? Label::negative : Label::positive);

  for (Eigen::Index j = 0; j < pool.features.cols(); ++j) {
    auto col = pool.features.col(j);
    const double mean = col.mean();
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / static_cast<double>(m));
    if (sd > 0.0) col /= sd;
  }
  pool.validate();
  return pool;
}

PoolSplit sample_triple_from_pool(const LabeledPool& pool, std::size_t n_pos, std::size_t n_neg,
                                  std::size_t n_unl, double pi, std::uint64_t seed) {
  check_prior(pi);
  pool.validate();
  std::mt19937_64 rng(seed);

  std::vector<std::size_t> positives, negatives;
  for (std::size_t i = 0; i < pool.size(); ++i) {
    (pool.labels[i] == Label::positive ? positives : negatives).push_back(i);
  }
  std::shuffle(positives.begin(), positives.end(), rng);
  std::shuffle(negatives.begin(), negatives.end(), rng);

  std::size_t next_pos = 0, next_neg = 0;
  auto take = [&](Label y) {
    auto& rows = y == Label::positive ? positives : negatives;
    auto& next = y == Label::positive ? next_pos : next_neg;
    if (next >= rows.size()) {
      throw std::runtime_error(std::string("pool exhausted: not enough ") +
                               (y == Label::positive ? "positive" : "negative") + " rows for the requested draw");
    }
    return rows[next++];
  };

  PoolSplit split;
  for (std::size_t i = 0; i < n_pos; ++i) split.pos_rows.push_back(take(Label::positive));
  for (std::size_t i = 0; i < n_neg; ++i) split.neg_rows.push_back(take(Label::negative));
  std::bernoulli_distribution coin(pi);
  for (std::size_t i = 0; i < n_unl; ++i) split.unl_rows.push_back(take(coin(rng) ? Label::positive : Label::negative));

  split.holdout_rows.assign(positives.begin() + static_cast<std::ptrdiff_t>(next_pos), positives.end());
  split.holdout_rows.insert(split.holdout_rows.end(), negatives.begin() + static_cast<std::ptrdiff_t>(next_neg),
                            negatives.end());
  std::sort(split.holdout_rows.begin(), split.holdout_rows.end());
  if (split.holdout_rows.size() > kMaxHoldout) {
    std::vector<std::size_t> kept;
    kept.reserve(kMaxHoldout);
    std::sample(split.holdout_rows.begin(), split.holdout_rows.end(), std::back_inserter(kept), kMaxHoldout, rng);
    split.holdout_rows = std::move(kept);
  }

  auto gather = [&pool](const std::vector<std::size_t>& rows) {
    Matrix out(static_cast<Eigen::Index>(rows.size()), pool.features.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
      out.row(static_cast<Eigen::Index>(i)) = pool.features.row(static_cast<Eigen::Index>(rows[i]));
    }
    return out;
  };
  split.triple.pi = pi;
  split.triple.x_pos = gather(split.pos_rows);
  split.triple.x_neg = gather(split.neg_rows);
  split.triple.x_unl = gather(split.unl_rows);
  split.holdout.features = gather(split.holdout_rows);
  split.holdout.labels.reserve(split.holdout_rows.size());
  for (auto r : split.holdout_rows) split.holdout.labels.push_back(pool.labels[r]);
  return split;
}

}  // namespace pnu
