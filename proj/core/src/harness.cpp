#include "pnu/harness.hpp"

#include <atomic>
#include <bit>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <mutex>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "pnu/losses.hpp"
#include "pnu/numerics.hpp"
#include "pnu/risk.hpp"

namespace pnu {
namespace {

constexpr std::uint64_t kDataStream = 0;
constexpr std::uint64_t kTestStream = 1;
constexpr std::uint64_t kTrainStream = 2;

void parallel_for(std::size_t count, std::size_t threads, const std::function<void(std::size_t)>& fn) {
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, count);
  if (threads <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::exception_ptr> errors(threads);
  {
    std::vector<std::jthread> pool;
    for (std::size_t t = 0; t < threads; ++t) {
      pool.emplace_back([&, t] {
        try {
          for (std::size_t i = next++; i < count; i = next++) fn(i);
        } catch (...) {
          errors[t] = std::current_exception();
          next = count;
        }
      });
    }
  }
  for (auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

std::size_t mode_index(Mode mode) {
  for (std::size_t i = 0; i < kAllModes.size(); ++i) {
    if (kAllModes[i] == mode) return i;
  }
  throw std::logic_error("unknown mode");
}

struct TrialOutcome {
  std::array<double, 3> errors{};
  std::size_t runs = 0;
  double max_increase = -INFINITY;
};

std::string format6(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

}  // namespace

void ExperimentGrid::validate() const {
  if (trials < 1) throw std::invalid_argument("trials must be >= 1");
  if (values.empty()) throw std::invalid_argument("sweep list must be non-empty");
  for (std::size_t i = 1; i < values.size(); ++i) {
    if (!(values[i] > values[i - 1])) throw std::invalid_argument("sweep list must be strictly increasing");
  }
  if (sweep == SweepKind::vary_pi) {
    for (double v : values) {
      if (!(v > 0.0 && v < 1.0)) throw std::invalid_argument("swept priors must lie in (0, 1)");
    }
  } else {
    if (!(pi > 0.0 && pi < 1.0)) throw std::invalid_argument("class prior must lie in (0, 1)");
    for (double v : values) {
      if (!(v >= 1.0) || v != std::floor(v)) throw std::invalid_argument("swept n_u values must be positive integers");
    }
  }
  if (n_pos < 1 || n_neg < 1) throw std::invalid_argument("n_pos and n_neg must be >= 1");
  if (data.is_artificial() && test_size < 1) throw std::invalid_argument("test_size must be >= 1");
}

std::size_t ExperimentGrid::n_unl_at(double sweep_value) const {
  return sweep == SweepKind::vary_nu ? static_cast<std::size_t>(sweep_value) : n_unl;
}

std::pair<double, double> mean_and_std_error(const std::vector<double>& errors) {
  if (errors.empty()) return {0.0, 0.0};
  CompensatedSum sum;
  for (double e : errors) sum.add(e);
  const auto n = static_cast<double>(errors.size());
  const double mean = sum.value() / n;
  if (errors.size() < 2) return {mean, 0.0};
  CompensatedSum sq;
  for (double e : errors) sq.add((e - mean) * (e - mean));
  return {mean, std::sqrt(sq.value() / (n - 1.0)) / std::sqrt(n)};
}

SweepResult run_sweep(const ExperimentGrid& grid, const TrainConfig& train_config,
                      const std::optional<CvConfig>& cv_config, const ProgressFn& progress) {
  grid.validate();
  train_config.validate();

  std::optional<LabeledPool> pool;
  if (!grid.data.is_artificial()) pool = load_csv(*grid.data.csv, grid.data.label_column);
  const CvConfig cv = cv_config.value_or(CvConfig{});
  const LossDescriptor zero_one = zero_one_loss();

  const std::size_t points = grid.values.size();
  const std::size_t units = points * grid.trials;
  std::vector<TrialOutcome> outcomes(units);
  std::atomic<std::size_t> done{0};
  std::mutex progress_mutex;

  parallel_for(units, grid.threads, [&](std::size_t unit) {
    const std::size_t p = unit / grid.trials;
    const std::size_t trial = unit % grid.trials;
    const double value = grid.values[p];
    const double pi = grid.pi_at(value);
    const std::size_t n_unl = grid.n_unl_at(value);
    const std::uint64_t value_key = std::bit_cast<std::uint64_t>(value);

    SampleTriple triple;
    LabeledPool eval;
    try {
      if (pool) {
        auto split = sample_triple_from_pool(*pool, grid.n_pos, grid.n_neg, n_unl, pi,
                                             derive_seed(grid.seed, {value_key, trial, kDataStream}));
        triple = std::move(split.triple);
        eval = std::move(split.holdout);
      } else {
        triple = gen_gaussian_artificial(grid.n_pos, grid.n_neg, n_unl, pi,
                                         derive_seed(grid.seed, {value_key, trial, kDataStream}));
        eval = gen_gaussian_labeled(grid.test_size, pi, derive_seed(grid.seed, {value_key, trial, kTestStream}));
      }
    } catch (const std::exception& e) {
      std::ostringstream os;
      os << "sweep_value=" << value << " trial=" << trial << ": " << e.what();
      throw std::runtime_error(os.str());
    }
    const std::uint64_t print = fingerprint(triple);

    TrialOutcome& out = outcomes[unit];
    for (Mode mode : kAllModes) {
      try {
        if (fingerprint(triple) != print) throw std::logic_error("training sample changed between modes");
        TrainConfig config = train_config;
        config.seed = derive_seed(grid.seed, {value_key, trial, kTrainStream, mode_index(mode)});
        TrainResult fitted = [&] {
          if (!pool) return train(mode, triple, ModelTemplate::linear(), config);
          const CvResult sel = cross_validate(mode, triple, ModelTemplate::gaussian_kernel(1.0), cv, config);
          config.lambda = sel.best_lambda;
          return train(mode, triple, ModelTemplate::gaussian_kernel(sel.best_width), config);
        }();
        out.runs += 1;
        out.max_increase = std::max(out.max_increase, fitted.max_objective_increase);
        out.errors[mode_index(mode)] = risk_true(fitted.model, eval, zero_one);
      } catch (const std::exception& e) {
        std::ostringstream os;
        os << "sweep_value=" << value << " trial=" << trial << " mode=" << to_string(mode) << ": " << e.what();
        throw std::runtime_error(os.str());
      }
    }
    const std::size_t finished = ++done;
    if (progress) {
      std::lock_guard lock(progress_mutex);
      progress(finished, units);
    }
  });

  SweepResult result;
  result.trial_errors.resize(points);
  for (std::size_t p = 0; p < points; ++p) {
    const double value = grid.values[p];
    ComparatorInput input;
    input.pi = grid.pi_at(value);
    input.n_pos = grid.n_pos;
    input.n_neg = grid.n_neg;
    input.n_unl = UnlabeledSize::finite(grid.n_unl_at(value));
    const double a_pu = alpha_pu_pn(input);
    const double a_nu = alpha_nu_pn(input);
    for (std::size_t m = 0; m < kAllModes.size(); ++m) {
      auto& errs = result.trial_errors[p][m];
      for (std::size_t trial = 0; trial < grid.trials; ++trial) {
        const TrialOutcome& o = outcomes[p * grid.trials + trial];
        errs.push_back(o.errors[m]);
        if (m == 0) {
          result.training_runs += o.runs;
          result.max_objective_increase = std::max(result.max_objective_increase, o.max_increase);
        }
      }
      const auto [mean, se] = mean_and_std_error(errs);
      result.table.rows.push_back({value, kAllModes[m], mean, se, a_pu, a_nu});
    }
  }
  return result;
}

TableFormat table_format_from_string(const std::string& text) {
  if (text == "csv") return TableFormat::csv;
  if (text == "json") return TableFormat::json;
  throw std::invalid_argument("unknown table format '" + text + "' (expected csv or json)");
}

std::string table_to_csv(const ResultTable& table) {
  std::string out = "sweep_value,mode,mean_error,std_error,alpha_pu_pn,alpha_nu_pn\n";
  for (const auto& r : table.rows) {
    out += format6(r.sweep_value) + ',' + std::string(to_string(r.mode)) + ',' + format6(r.mean_error) + ',' +
           format6(r.std_error) + ',' + format6(r.alpha_pu_pn) + ',' + format6(r.alpha_nu_pn) + '\n';
  }
  return out;
}

nlohmann::json table_to_json(const ResultTable& table) {
  nlohmann::json rows = nlohmann::json::array();
  for (const auto& r : table.rows) {
    rows.push_back({{"sweep_value", r.sweep_value},
                    {"mode", std::string(to_string(r.mode))},
                    {"mean_error", r.mean_error},
                    {"std_error", r.std_error},
                    {"alpha_pu_pn", r.alpha_pu_pn},
                    {"alpha_nu_pn", r.alpha_nu_pn}});
  }
  return {{"columns", {"sweep_value", "mode", "mean_error", "std_error", "alpha_pu_pn", "alpha_nu_pn"}},
          {"rows", std::move(rows)}};
}

ResultTable table_from_json(const nlohmann::json& doc) {
  ResultTable table;
  for (const auto& r : doc.at("rows")) {
    table.rows.push_back({r.at("sweep_value").get<double>(), mode_from_string(r.at("mode").get<std::string>()),
                          r.at("mean_error").get<double>(), r.at("std_error").get<double>(),
                          r.at("alpha_pu_pn").get<double>(), r.at("alpha_nu_pn").get<double>()});
  }
  return table;
}

void emit(const ResultTable& table, TableFormat format, const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  if (format == TableFormat::csv) {
    out << table_to_csv(table);
  } else {
    out << table_to_json(table).dump(2) << '\n';
  }
  out.flush();
  if (!out) throw std::runtime_error("failed writing " + path.string());
}

nlohmann::json advise(double pi, std::uint64_t n_pos, std::uint64_t n_neg, UnlabeledSize n_unl,
                      const BoundParams& params) {
  ComparatorInput input;
  input.pi = pi;
  input.n_pos = n_pos;
  input.n_neg = n_neg;
  input.n_unl = n_unl;
  input.validate();

  const double a_pu = alpha_pu_pn(input);
  const double a_nu = alpha_nu_pn(input);
  const AlphaStar star = alpha_star(input, AsymptoticCase::a);
  const BoundValues v = bound_values(input, params, InfinitePolicy::limit);

  std::string mode;
  std::string text;
  switch (star.verdict) {
    case Verdict::pu_promising:
      mode = "PU";
      text = "alpha* < 1: PU learning is promising; collect more unlabeled data and train the PU minimizer";
      break;
    case Verdict::nu_promising:
      mode = "NU";
      text = "alpha* > 1: NU learning is promising; collect more unlabeled data and train the NU minimizer";
      break;
    case Verdict::degenerate_tie:
      mode = "PN";
      text = "degenerate tie: n+/n- equals pi^2/(1-pi)^2, so neither PU nor NU improves on PN in the limit; "
             "PN remains competitive";
      break;
  }
  if (a_pu < 1.0) text += ". The PU bound is already tighter than the PN bound at the current sizes";
  if (a_nu < 1.0) text += ". The NU bound is already tighter than the PN bound at the current sizes";

  return {{"pi", pi},
          {"n_pos", n_pos},
          {"n_neg", n_neg},
          {"n_unl", n_unl.is_infinite() ? nlohmann::json("infinity") : nlohmann::json(n_unl.count())},
          {"alpha_pu_pn", a_pu},
          {"alpha_nu_pn", a_nu},
          {"pu_bound_tighter", a_pu < 1.0},
          {"nu_bound_tighter", a_nu < 1.0},
          {"alpha_star", {{"case", "a"}, {"pu", star.pu}, {"nu", star.nu}, {"verdict", to_string(star.verdict)}}},
          {"bounds",
           {{"delta", params.delta},
            {"lipschitz", params.lipschitz},
            {"complexity_const", params.complexity_const},
            {"f_delta", f_delta(params)},
            {"pn", v.pn},
            {"pu", v.pu},
            {"nu", v.nu}}},
          {"recommendation_mode", mode},
          {"recommendation", text}};
}

}  // namespace pnu
