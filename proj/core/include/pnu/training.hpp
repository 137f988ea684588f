#pragma once

#include <cstdint>
#include <stdexcept>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pnu/datasets.hpp"
#include "pnu/models.hpp"

namespace pnu {

struct TrainConfig {
  double lambda = 1e-3;  // weight of (lambda/2)|w|^2; the bias is not regularized
  int cccp_max_outer = 50;
  int inner_max_iter = 2000;
  double inner_tol = 1e-9;
  double outer_tol = 1e-7;
  int restarts = 2;  // restart 0 starts at zero, the rest from N(0, 0.1^2)
  std::uint64_t seed = 0;

  void validate() const;
};

struct CvConfig {
  int folds = 5;
  std::vector<double> width_grid;   // empty: median heuristic x {1/4, 1/2, 1, 2, 4}
  std::vector<double> lambda_grid = {1e-5, 1e-4, 1e-3, 1e-2, 1e-1};

  void validate() const;
};

TrainConfig train_config_from_json(const nlohmann::json& doc);
CvConfig cv_config_from_json(const nlohmann::json& doc);
nlohmann::json to_json(const TrainConfig& config);
nlohmann::json to_json(const CvConfig& config);

/// offset + sum_i c_i * l_sr(<w, phi_i> + b, y_i) + (lambda/2)|w|^2
///
/// The estimators of every mode reduce to this form: PN weighs positives by
/// pi/n+ and negatives by (1-pi)/n-; PU weighs positives by 2pi/n+ and treats
/// unlabeled rows as negatives with weight 1/nu, offset -pi; NU mirrors PU.
/// Parameters are packed as [w; b].
struct RampObjective {
  Matrix features;
  Vector labels;
  Vector weights;
  double offset = 0.0;
  double lambda = 0.0;

  Eigen::Index feature_dim() const { return features.cols(); }
  /// y_i * g(x_i) for every row.
  Vector margins(const Vector& params) const;
  double value(const Vector& params) const;
};

/// `first`/`second` are the mapped rows of (P, N), (P, U) or (U, N).
RampObjective build_objective(Mode mode, const Matrix& first, const Matrix& second, double pi, double lambda);

class DivergenceError : public std::runtime_error {
 public:
  DivergenceError(const std::string& what, std::vector<double> trace)
      : std::runtime_error(what), trace_(std::move(trace)) {}
  const std::vector<double>& trace() const { return trace_; }

 private:
  std::vector<double> trace_;
};

struct OuterStep {
  Vector params;
  double objective_before = 0.0;
  double objective_after = 0.0;
  int inner_iterations = 0;
};

/// One CCCP iteration: the concave half of every ramp term is linearized at
/// the current margins and the convex majorizer is minimized by full-batch
/// subgradient descent with step c/sqrt(t) (c picked by a backtracking search
/// on the first step), keeping the best iterate. The incoming point is
/// returned unchanged if the majorizer produced no true-objective decrease,
/// so objective_after <= objective_before always holds.
OuterStep cccp_outer_step(const RampObjective& objective, const Vector& params, const TrainConfig& config);

struct FitTrace {
  Vector params;
  std::vector<double> objectives;  // true objective before and after each outer step
};

/// CCCP to convergence from `start`.
FitTrace fit_cccp(const RampObjective& objective, Vector start, const TrainConfig& config);

struct TrainResult {
  DecisionModel model;
  double objective = 0.0;
  std::vector<double> objective_trace;     // selected restart
  std::vector<double> restart_objectives;  // final objective of each restart
  int selected_restart = 0;
  /// Largest step-to-step change of the objective over every restart;
  /// non-positive for a monotone run.
  double max_objective_increase = 0.0;
  std::size_t outer_steps = 0;
};

/// Minimizes the mode's regularized scaled-ramp risk estimator. For a kernel
/// template the anchors are the union of the two sets the mode uses.
/// Throws std::invalid_argument if a required set is empty and
/// std::runtime_error on a non-finite objective.
TrainResult train(Mode mode, const SampleTriple& triple, const ModelTemplate& model_template,
                  const TrainConfig& config);

/// Rows of the two sets `mode` trains on, stacked first-then-second.
Matrix anchor_rows(Mode mode, const SampleTriple& triple);

/// Median pairwise Euclidean distance (over at most the first 500 rows).
double median_pairwise_distance(const Matrix& rows);

struct CvCell {
  double width = 0.0;
  double lambda = 0.0;
  double cv_risk = 0.0;
};

struct CvResult {
  double best_width = 0.0;
  double best_lambda = 0.0;
  std::vector<CvCell> table;
};

/// k-fold selection of (width, lambda). Each set the mode uses is split into
/// folds independently; a cell is scored by the mode's own estimator with the
/// zero-one loss on the held-out folds, averaged over folds. Ties go to the
/// larger width, then the larger lambda. For a linear template the width axis
/// collapses to the template's width.
CvResult cross_validate(Mode mode, const SampleTriple& triple, const ModelTemplate& model_template,
                        const CvConfig& cv_config, const TrainConfig& train_config);

}  // namespace pnu
