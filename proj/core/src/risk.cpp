#include "pnu/risk.hpp"

#include <stdexcept>

#include "pnu/numerics.hpp"

namespace pnu {
namespace {

double mean_loss(const Vector& scores, Label y, const LossDescriptor& loss) {
  CompensatedSum sum;
  for (Eigen::Index i = 0; i < scores.size(); ++i) sum.add(loss(scores(i), y));
  return sum.value() / static_cast<double>(scores.size());
}

void require_rows(const Matrix& x, const char* what) {
  if (x.rows() == 0) throw std::invalid_argument(std::string("risk estimator needs a non-empty ") + what + " sample");
}

void require_symmetric(const LossDescriptor& loss, const char* estimator) {
  if (!loss.is_symmetric) {
    throw std::invalid_argument(std::string(estimator) + " is unbiased only for symmetric losses; '" + loss.name +
                                "' is not symmetric");
  }
}

}  // namespace

double risk_from_scores(Mode mode, const Vector& first, const Vector& second, double pi,
                        const LossDescriptor& loss) {
  if (first.size() == 0 || second.size() == 0) throw std::invalid_argument("risk estimator got an empty sample");
  switch (mode) {
    case Mode::pn:
      return pi * mean_loss(first, Label::positive, loss) + (1.0 - pi) * mean_loss(second, Label::negative, loss);
    case Mode::pu:
      require_symmetric(loss, "PU risk");
      return -pi + 2.0 * pi * mean_loss(first, Label::positive, loss) + mean_loss(second, Label::negative, loss);
    case Mode::nu:
      require_symmetric(loss, "NU risk");
      return -(1.0 - pi) + mean_loss(first, Label::positive, loss) +
             2.0 * (1.0 - pi) * mean_loss(second, Label::negative, loss);
  }
  throw std::logic_error("unreachable mode");
}

double risk_pn(const DecisionModel& model, const Matrix& x_pos, const Matrix& x_neg, double pi,
               const LossDescriptor& loss) {
  require_rows(x_pos, "positive");
  require_rows(x_neg, "negative");
  return risk_from_scores(Mode::pn, model.predict_rows(x_pos), model.predict_rows(x_neg), pi, loss);
}

double risk_pu(const DecisionModel& model, const Matrix& x_pos, const Matrix& x_unl, double pi,
               const LossDescriptor& loss) {
  require_symmetric(loss, "PU risk");
  require_rows(x_pos, "positive");
  require_rows(x_unl, "unlabeled");
  return risk_from_scores(Mode::pu, model.predict_rows(x_pos), model.predict_rows(x_unl), pi, loss);
}

double risk_nu(const DecisionModel& model, const Matrix& x_unl, const Matrix& x_neg, double pi,
               const LossDescriptor& loss) {
  require_symmetric(loss, "NU risk");
  require_rows(x_unl, "unlabeled");
  require_rows(x_neg, "negative");
  return risk_from_scores(Mode::nu, model.predict_rows(x_unl), model.predict_rows(x_neg), pi, loss);
}

double risk_estimate(Mode mode, const DecisionModel& model, const SampleTriple& triple,
                     const LossDescriptor& loss) {
  switch (mode) {
    case Mode::pn: return risk_pn(model, triple.x_pos, triple.x_neg, triple.pi, loss);
    case Mode::pu: return risk_pu(model, triple.x_pos, triple.x_unl, triple.pi, loss);
    case Mode::nu: return risk_nu(model, triple.x_unl, triple.x_neg, triple.pi, loss);
  }
  throw std::logic_error("unreachable mode");
}

double risk_true(const DecisionModel& model, const LabeledPool& eval, const LossDescriptor& loss) {
  if (eval.size() == 0) throw std::invalid_argument("risk_true needs a non-empty evaluation set");
  const Vector scores = model.predict_rows(eval.features);
  CompensatedSum sum;
  for (std::size_t i = 0; i < eval.size(); ++i) sum.add(loss(scores(static_cast<Eigen::Index>(i)), eval.labels[i]));
  return sum.value() / static_cast<double>(eval.size());
}

double risk_true_mc(const DecisionModel& model, std::size_t n_points, double pi, std::uint64_t seed,
                    const LossDescriptor& loss) {
  return risk_true(model, gen_gaussian_labeled(n_points, pi, seed), loss);
}

bool RiskReport::within_declared_range() const {
  switch (kind) {
    case RiskKind::pn:
    case RiskKind::true_risk: return value >= 0.0 && value <= 1.0;
    case RiskKind::pu: return value >= -pi && value <= 1.0 + pi;
    case RiskKind::nu: return value >= -(1.0 - pi) && value <= 2.0 - pi;
  }
  return false;
}

RiskReport make_report(Mode mode, const DecisionModel& model, const SampleTriple& triple,
                       const LossDescriptor& loss) {
  const RiskKind kind = mode == Mode::pn ? RiskKind::pn : (mode == Mode::pu ? RiskKind::pu : RiskKind::nu);
  return {risk_estimate(mode, model, triple, loss), kind, loss.name, triple.pi};
}

}  // namespace pnu
