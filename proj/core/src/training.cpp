#include "pnu/training.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <optional>
#include <random>
#include <set>
#include <sstream>

#include <nlohmann/json.hpp>

#include "pnu/losses.hpp"
#include "pnu/numerics.hpp"
#include "pnu/risk.hpp"

namespace pnu {
namespace {

constexpr int kConsecutiveIncreaseLimit = 10;
constexpr int kStallWindow = 100;
constexpr int kMaxStepHalvings = 50;

Vector scores_of(const RampObjective& obj, const Vector& params) {
  const Eigen::Index d = obj.feature_dim();
  Vector s = obj.features * params.head(d);
  s.array() += params(d);
  return s;
}

double regularizer(const RampObjective& obj, const Vector& params) {
  return 0.5 * obj.lambda * params.head(obj.feature_dim()).squaredNorm();
}

/// Convex majorizer of the ramp objective at a fixed set of saturated terms:
/// sum_i c_i [max(0, (1 - z_i)/2) + active_i (1 + z_i)/2] + offset + reg.
class Majorizer {
 public:
  Majorizer(const RampObjective& obj, std::vector<char> active) : obj_(obj), active_(std::move(active)) {}

  double value(const Vector& params) const {
    const Vector z = obj_.margins(params);
    CompensatedSum sum;
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      double term = std::max(0.0, (1.0 - z(i)) / 2.0);
      if (active_[static_cast<std::size_t>(i)]) term += (1.0 + z(i)) / 2.0;
      sum.add(obj_.weights(i) * term);
    }
    return obj_.offset + sum.value() + regularizer(obj_, params);
  }

  Vector subgradient(const Vector& params) const {
    const Vector z = obj_.margins(params);
    Vector coef(z.size());
    for (Eigen::Index i = 0; i < z.size(); ++i) {
      double dz = z(i) < 1.0 ? -0.5 : 0.0;
      if (active_[static_cast<std::size_t>(i)]) dz += 0.5;
      coef(i) = obj_.weights(i) * obj_.labels(i) * dz;
    }
    const Eigen::Index d = obj_.feature_dim();
    Vector g(d + 1);
    g.head(d) = obj_.features.transpose() * coef + obj_.lambda * params.head(d);
    g(d) = coef.sum();
    return g;
  }

 private:
  const RampObjective& obj_;
  std::vector<char> active_;
};

void check_finite(double v, const char* where) {
  if (!std::isfinite(v)) throw std::runtime_error(std::string("non-finite objective in ") + where);
}

void require_sets(Mode mode, const SampleTriple& triple) {
  auto need = [](std::size_t n, const char* what) {
    if (n == 0) throw std::invalid_argument(std::string("training needs a non-empty ") + what + " set");
  };
  switch (mode) {
    case Mode::pn: need(triple.n_pos(), "positive"); need(triple.n_neg(), "negative"); break;
    case Mode::pu: need(triple.n_pos(), "positive"); need(triple.n_unl(), "unlabeled"); break;
    case Mode::nu: need(triple.n_unl(), "unlabeled"); need(triple.n_neg(), "negative"); break;
  }
}

std::pair<const Matrix*, const Matrix*> mode_sets(Mode mode, const SampleTriple& triple) {
  switch (mode) {
    case Mode::pn: return {&triple.x_pos, &triple.x_neg};
    case Mode::pu: return {&triple.x_pos, &triple.x_unl};
    case Mode::nu: return {&triple.x_unl, &triple.x_neg};
  }
  throw std::logic_error("unreachable mode");
}

Matrix vstack(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() + b.rows(), std::max(a.cols(), b.cols()));
  if (a.rows() > 0) out.topRows(a.rows()) = a;
  if (b.rows() > 0) out.bottomRows(b.rows()) = b;
  return out;
}

Matrix select_rows(const Matrix& x, const std::vector<std::size_t>& rows) {
  Matrix out(static_cast<Eigen::Index>(rows.size()), x.cols());
  for (std::size_t i = 0; i < rows.size(); ++i) out.row(static_cast<Eigen::Index>(i)) = x.row(static_cast<Eigen::Index>(rows[i]));
  return out;
}

std::vector<double> dedup_sorted(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  v.erase(std::unique(v.begin(), v.end()), v.end());
  return v;
}

struct FittedModel {
  DecisionModel model;
  TrainResult result;
};

}  // namespace

void TrainConfig::validate() const {
  if (!(lambda >= 0.0) || !std::isfinite(lambda)) throw std::invalid_argument("lambda must be finite and >= 0");
  if (cccp_max_outer < 1 || inner_max_iter < 1 || restarts < 1) {
    throw std::invalid_argument("iteration caps and restarts must be >= 1");
  }
  if (!(inner_tol > 0.0) || !(outer_tol > 0.0)) throw std::invalid_argument("tolerances must be > 0");
}

void CvConfig::validate() const {
  if (folds < 2) throw std::invalid_argument("cross-validation needs at least 2 folds");
  if (lambda_grid.empty()) throw std::invalid_argument("lambda grid must be non-empty");
  for (double v : lambda_grid) {
    if (!(v > 0.0)) throw std::invalid_argument("lambda grid entries must be > 0");
  }
  for (double v : width_grid) {
    if (!(v > 0.0)) throw std::invalid_argument("width grid entries must be > 0");
  }
}

TrainConfig train_config_from_json(const nlohmann::json& doc) {
  TrainConfig c;
  c.lambda = doc.value("lambda", c.lambda);
  c.cccp_max_outer = doc.value("cccp_max_outer", c.cccp_max_outer);
  c.inner_max_iter = doc.value("inner_max_iter", c.inner_max_iter);
  c.inner_tol = doc.value("inner_tol", c.inner_tol);
  c.outer_tol = doc.value("outer_tol", c.outer_tol);
  c.restarts = doc.value("restarts", c.restarts);
  c.seed = doc.value("seed", c.seed);
  c.validate();
  return c;
}

CvConfig cv_config_from_json(const nlohmann::json& doc) {
  CvConfig c;
  c.folds = doc.value("folds", c.folds);
  c.width_grid = doc.value("width_grid", c.width_grid);
  c.lambda_grid = doc.value("lambda_grid", c.lambda_grid);
  c.validate();
  return c;
}

nlohmann::json to_json(const TrainConfig& c) {
  return {{"lambda", c.lambda},         {"cccp_max_outer", c.cccp_max_outer}, {"inner_max_iter", c.inner_max_iter},
          {"inner_tol", c.inner_tol},   {"outer_tol", c.outer_tol},           {"restarts", c.restarts},
          {"seed", c.seed}};
}

nlohmann::json to_json(const CvConfig& c) {
  return {{"folds", c.folds}, {"width_grid", c.width_grid}, {"lambda_grid", c.lambda_grid}};
}

Vector RampObjective::margins(const Vector& params) const {
  return labels.cwiseProduct(scores_of(*this, params));
}

double RampObjective::value(const Vector& params) const {
  const Vector z = margins(params);
  CompensatedSum sum;
  for (Eigen::Index i = 0; i < z.size(); ++i) sum.add(weights(i) * scaled_ramp(z(i), Label::positive));
  return offset + sum.value() + regularizer(*this, params);
}

RampObjective build_objective(Mode mode, const Matrix& first, const Matrix& second, double pi, double lambda) {
  if (first.rows() == 0 || second.rows() == 0) throw std::invalid_argument("objective needs two non-empty sets");
  const auto n1 = static_cast<double>(first.rows());
  const auto n2 = static_cast<double>(second.rows());
  double c1 = 0.0, c2 = 0.0, offset = 0.0;
  switch (mode) {
    case Mode::pn: c1 = pi / n1; c2 = (1.0 - pi) / n2; break;
    case Mode::pu: c1 = 2.0 * pi / n1; c2 = 1.0 / n2; offset = -pi; break;
    case Mode::nu: c1 = 1.0 / n1; c2 = 2.0 * (1.0 - pi) / n2; offset = -(1.0 - pi); break;
  }
  RampObjective obj;
  obj.features = vstack(first, second);
  obj.labels.resize(obj.features.rows());
  obj.weights.resize(obj.features.rows());
  obj.labels.head(first.rows()).setConstant(1.0);
  obj.labels.tail(second.rows()).setConstant(-1.0);
  obj.weights.head(first.rows()).setConstant(c1);
  obj.weights.tail(second.rows()).setConstant(c2);
  obj.offset = offset;
  obj.lambda = lambda;
  return obj;
}

OuterStep cccp_outer_step(const RampObjective& objective, const Vector& params, const TrainConfig& config) {
  const double j0 = objective.value(params);
  check_finite(j0, "CCCP outer step");

  const Vector z0 = objective.margins(params);
  std::vector<char> active(static_cast<std::size_t>(z0.size()));
  for (Eigen::Index i = 0; i < z0.size(); ++i) active[static_cast<std::size_t>(i)] = z0(i) < -1.0;
  const Majorizer major(objective, std::move(active));

  OuterStep step{params, j0, j0, 0};
  const double s0 = major.value(params);
  Vector g = major.subgradient(params);
  double gnorm = g.norm();
  if (gnorm == 0.0) return step;

  // Backtracking over c = c0 / 2^k; keep the c with the lowest majorizer value.
  double c = 0.0;
  double best_first = s0;
  for (int k = 0; k <= kMaxStepHalvings; ++k) {
    const double trial_c = 4.0 * (1.0 + params.norm()) * std::ldexp(1.0, -k);
    const double v = major.value(params - (trial_c / gnorm) * g);
    if (v < best_first) {
      best_first = v;
      c = trial_c;
    } else if (c > 0.0) {
      break;
    }
  }
  if (c == 0.0) return step;

  Vector best = params;
  double best_value = s0;
  Vector current = params;
  double previous = s0;
  int consecutive_increases = 0;
  std::vector<double> recent;
  int t = 1;
  int since_improvement = 0;
  double window_start_best = s0;

  for (int it = 1; it <= config.inner_max_iter; ++it, ++t) {
    current -= (c / std::sqrt(static_cast<double>(t)) / gnorm) * g;
    const double v = major.value(current);
    check_finite(v, "CCCP inner solve");
    step.inner_iterations = it;

    recent.push_back(v);
    if (recent.size() > static_cast<std::size_t>(kConsecutiveIncreaseLimit) + 1) recent.erase(recent.begin());
    consecutive_increases = v > previous ? consecutive_increases + 1 : 0;
    previous = v;
    if (consecutive_increases >= kConsecutiveIncreaseLimit && v > s0) {
      std::ostringstream os;
      os << "subgradient solver diverged: objective rose for " << consecutive_increases
         << " consecutive steps to " << v << " (start " << s0 << ")";
      throw DivergenceError(os.str(), recent);
    }

    if (v < best_value) {
      best_value = v;
      best = current;
      since_improvement = 0;
    } else {
      ++since_improvement;
    }

    if (it % kStallWindow == 0) {
      if (window_start_best - best_value < config.inner_tol) break;
      window_start_best = best_value;
    }
    if (since_improvement >= kStallWindow / 2) {
      // Restart the c/sqrt(t) schedule from the best point with a smaller c.
      current = best;
      c *= 0.5;
      t = 0;
      since_improvement = 0;
      consecutive_increases = 0;
      previous = best_value;
    }
    g = major.subgradient(current);
    gnorm = g.norm();
    if (gnorm == 0.0) break;
  }

  const double j1 = objective.value(best);
  check_finite(j1, "CCCP outer step");
  if (j1 <= j0) {
    step.params = std::move(best);
    step.objective_after = j1;
  }
  return step;
}

FitTrace fit_cccp(const RampObjective& objective, Vector start, const TrainConfig& config) {
  FitTrace trace{std::move(start), {}};
  trace.objectives.push_back(objective.value(trace.params));
  check_finite(trace.objectives.back(), "CCCP start");
  for (int k = 0; k < config.cccp_max_outer; ++k) {
    OuterStep step = cccp_outer_step(objective, trace.params, config);
    trace.params = std::move(step.params);
    trace.objectives.push_back(step.objective_after);
    if (step.objective_before - step.objective_after < config.outer_tol) break;
  }
  return trace;
}

Matrix anchor_rows(Mode mode, const SampleTriple& triple) {
  const auto [first, second] = mode_sets(mode, triple);
  return vstack(*first, *second);
}

TrainResult train(Mode mode, const SampleTriple& triple, const ModelTemplate& model_template,
                  const TrainConfig& config) {
  config.validate();
  triple.validate();
  require_sets(mode, triple);
  const auto [first, second] = mode_sets(mode, triple);

  std::optional<EmpiricalKernelMap> map;
  RampObjective objective;
  if (model_template.kind == ModelTemplate::Kind::gaussian_kernel) {
    map.emplace(vstack(*first, *second), model_template.width);
    const Matrix k = map->map_rows(map->anchors());
    objective = build_objective(mode, k.topRows(first->rows()), k.bottomRows(second->rows()), triple.pi, config.lambda);
  } else {
    objective = build_objective(mode, *first, *second, triple.pi, config.lambda);
  }

  const Eigen::Index n_params = objective.feature_dim() + 1;
  TrainResult result{DecisionModel::linear(Vector::Zero(1), 0.0), 0.0, {}, {}, 0, -INFINITY, 0};
  Vector best_params;
  double best_objective = INFINITY;
  for (int r = 0; r < config.restarts; ++r) {
    Vector start = Vector::Zero(n_params);
    if (r > 0) {
      std::mt19937_64 rng(derive_seed(config.seed, {static_cast<std::uint64_t>(r)}));
      std::normal_distribution<double> normal(0.0, 0.1);
      for (Eigen::Index i = 0; i < n_params; ++i) start(i) = normal(rng);
    }
    FitTrace fit = fit_cccp(objective, std::move(start), config);
    for (std::size_t k = 1; k < fit.objectives.size(); ++k) {
      result.max_objective_increase = std::max(result.max_objective_increase, fit.objectives[k] - fit.objectives[k - 1]);
    }
    result.outer_steps += fit.objectives.size() - 1;
    const double final_objective = fit.objectives.back();
    result.restart_objectives.push_back(final_objective);
    if (final_objective < best_objective) {
      best_objective = final_objective;
      best_params = std::move(fit.params);
      result.objective_trace = std::move(fit.objectives);
      result.selected_restart = r;
    }
  }
  if (result.max_objective_increase > 1e-12) {
    throw std::logic_error("CCCP objective increased across an outer iteration");
  }

  const Eigen::Index d = objective.feature_dim();
  Vector w = best_params.head(d);
  const double b = best_params(d);
  result.model = map ? DecisionModel::kernel(std::move(*map), std::move(w), b) : DecisionModel::linear(std::move(w), b);
  result.objective = best_objective;
  return result;
}

double median_pairwise_distance(const Matrix& rows) {
  const Eigen::Index n = std::min<Eigen::Index>(rows.rows(), 500);
  std::vector<double> d;
  d.reserve(static_cast<std::size_t>(n * (n - 1) / 2));
  for (Eigen::Index i = 0; i < n; ++i) {
    for (Eigen::Index j = i + 1; j < n; ++j) d.push_back((rows.row(i) - rows.row(j)).norm());
  }
  if (d.empty()) return 1.0;
  auto mid = d.begin() + static_cast<std::ptrdiff_t>(d.size() / 2);
  std::nth_element(d.begin(), mid, d.end());
  return *mid > 0.0 ? *mid : 1.0;
}

CvResult cross_validate(Mode mode, const SampleTriple& triple, const ModelTemplate& model_template,
                        const CvConfig& cv_config, const TrainConfig& train_config) {
  cv_config.validate();
  train_config.validate();
  triple.validate();
  require_sets(mode, triple);

  const bool kernel = model_template.kind == ModelTemplate::Kind::gaussian_kernel;
  std::vector<double> widths;
  if (!kernel) {
    widths = {model_template.width};
  } else if (cv_config.width_grid.empty()) {
    const double m = median_pairwise_distance(anchor_rows(mode, triple));
    widths = {m / 4.0, m / 2.0, m, 2.0 * m, 4.0 * m};
  } else {
    widths = dedup_sorted(cv_config.width_grid);
  }
  const auto lambdas = dedup_sorted(cv_config.lambda_grid);

  // Independent fold assignment per set: position k in a seeded shuffle goes to fold k % folds.
  const auto folds = static_cast<std::size_t>(cv_config.folds);
  auto assign = [&](std::size_t n, std::uint64_t stream) {
    if (n < folds) {
      std::ostringstream os;
      os << "cross-validation with " << folds << " folds would empty a set of " << n << " rows";
      throw std::invalid_argument(os.str());
    }
    std::vector<std::size_t> order(n);
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::mt19937_64 rng(derive_seed(train_config.seed, {0xcf, stream}));
    std::shuffle(order.begin(), order.end(), rng);
    std::vector<std::size_t> fold_of(n);
    for (std::size_t k = 0; k < n; ++k) fold_of[order[k]] = k % folds;
    return fold_of;
  };
  const bool uses_pos = mode != Mode::nu;
  const bool uses_neg = mode != Mode::pu;
  const bool uses_unl = mode != Mode::pn;
  const auto fold_pos = uses_pos ? assign(triple.n_pos(), 1) : std::vector<std::size_t>{};
  const auto fold_neg = uses_neg ? assign(triple.n_neg(), 2) : std::vector<std::size_t>{};
  const auto fold_unl = uses_unl ? assign(triple.n_unl(), 3) : std::vector<std::size_t>{};

  auto split_set = [](const Matrix& x, const std::vector<std::size_t>& fold_of, std::size_t f, bool held_out) {
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < fold_of.size(); ++i) {
      if ((fold_of[i] == f) == held_out) rows.push_back(i);
    }
    return select_rows(x, rows);
  };

  std::vector<std::pair<SampleTriple, SampleTriple>> splits;
  for (std::size_t f = 0; f < folds; ++f) {
    SampleTriple fit_part, val_part;
    fit_part.pi = val_part.pi = triple.pi;
    if (uses_pos) {
      fit_part.x_pos = split_set(triple.x_pos, fold_pos, f, false);
      val_part.x_pos = split_set(triple.x_pos, fold_pos, f, true);
    }
    if (uses_neg) {
      fit_part.x_neg = split_set(triple.x_neg, fold_neg, f, false);
      val_part.x_neg = split_set(triple.x_neg, fold_neg, f, true);
    }
    if (uses_unl) {
      fit_part.x_unl = split_set(triple.x_unl, fold_unl, f, false);
      val_part.x_unl = split_set(triple.x_unl, fold_unl, f, true);
    }
    splits.emplace_back(std::move(fit_part), std::move(val_part));
  }

  const LossDescriptor zero_one = zero_one_loss();
  CvResult out;
  double best = INFINITY;
  for (double width : widths) {
    const ModelTemplate cell_template = kernel ? ModelTemplate::gaussian_kernel(width) : model_template;
    for (double lambda : lambdas) {
      TrainConfig cell_config = train_config;
      cell_config.lambda = lambda;
      CompensatedSum risk;
      for (const auto& [fit_part, val_part] : splits) {
        const TrainResult fitted = train(mode, fit_part, cell_template, cell_config);
        risk.add(risk_estimate(mode, fitted.model, val_part, zero_one));
      }
      const double cv_risk = risk.value() / static_cast<double>(folds);
      out.table.push_back({width, lambda, cv_risk});
      // Cells arrive in ascending (width, lambda) order, so accepting ties
      // prefers the larger width and then the larger lambda.
      if (cv_risk <= best + 1e-12) {
        best = std::min(best, cv_risk);
        out.best_width = width;
        out.best_lambda = lambda;
      }
    }
  }
  return out;
}

}  // namespace pnu
