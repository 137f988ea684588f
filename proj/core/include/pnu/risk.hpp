#pragma once

#include <cstdint>
#include <string>

#include "pnu/datasets.hpp"
#include "pnu/losses.hpp"
#include "pnu/models.hpp"

namespace pnu {

/// Empirical estimators of R(g) = pi E_+[l(g,+1)] + (1-pi) E_-[l(g,-1)].
///
/// The PU and NU forms replace the missing class through the symmetric
/// condition and are unbiased but not non-negative; no clamping is applied.
/// All sums are compensated.

/// pi * mean_+ l(g,+1) + (1-pi) * mean_- l(g,-1)
double risk_pn(const DecisionModel& model, const Matrix& x_pos, const Matrix& x_neg, double pi,
               const LossDescriptor& loss);

/// -pi + 2 pi * mean_+ l(g,+1) + mean_u l(g,-1). Requires a symmetric loss.
double risk_pu(const DecisionModel& model, const Matrix& x_pos, const Matrix& x_unl, double pi,
               const LossDescriptor& loss);

/// -(1-pi) + mean_u l(g,+1) + 2(1-pi) * mean_- l(g,-1). Requires a symmetric loss.
double risk_nu(const DecisionModel& model, const Matrix& x_unl, const Matrix& x_neg, double pi,
               const LossDescriptor& loss);

/// Dispatches on mode using the sets of `triple` that the mode needs.
double risk_estimate(Mode mode, const DecisionModel& model, const SampleTriple& triple,
                     const LossDescriptor& loss);

/// Score-level form shared by the model-level estimators and the trainer.
/// `first`/`second` are the scores of (P, N), (P, U) or (U, N) respectively.
double risk_from_scores(Mode mode, const Vector& first, const Vector& second, double pi,
                        const LossDescriptor& loss);

/// mean of l(g(x), y) over a labeled evaluation set; with the zero-one loss
/// this is the misclassification rate (a zero score counts as half an error).
double risk_true(const DecisionModel& model, const LabeledPool& eval, const LossDescriptor& loss);

/// risk_true on a fresh draw of `n_points` from the artificial joint density.
double risk_true_mc(const DecisionModel& model, std::size_t n_points, double pi, std::uint64_t seed,
                    const LossDescriptor& loss);

enum class RiskKind { pn, pu, nu, true_risk };

struct RiskReport {
  double value = 0.0;
  RiskKind kind = RiskKind::true_risk;
  std::string loss_name;
  double pi = 0.5;

  /// Range implied by a loss in [0, 1]: PN/TRUE in [0, 1],
  /// PU in [-pi, 1 + pi], NU in [-(1-pi), 2 - pi].
  bool within_declared_range() const;
};

RiskReport make_report(Mode mode, const DecisionModel& model, const SampleTriple& triple,
                       const LossDescriptor& loss);

}  // namespace pnu
