#include "pnu/verify.hpp"

#include <cmath>
#include <random>
#include <sstream>

#include "pnu/bounds.hpp"
#include "pnu/datasets.hpp"
#include "pnu/losses.hpp"
#include "pnu/models.hpp"
#include "pnu/numerics.hpp"
#include "pnu/risk.hpp"

namespace pnu {
namespace {

CheckOutcome check_unbiasedness(const VerifyOptions& opt) {
  const double pi = 0.5;
  const LossDescriptor loss = scaled_ramp_loss();
  std::mt19937_64 rng(derive_seed(opt.seed, {1}));
  std::normal_distribution<double> normal;
  Vector w(2);
  w << normal(rng), normal(rng);
  const DecisionModel model = DecisionModel::linear(w, 0.5 * normal(rng));

  const LabeledPool truth_set = gen_gaussian_labeled(opt.truth_points, pi, derive_seed(opt.seed, {2}));
  const Vector scores = model.predict_rows(truth_set.features);
  CompensatedSum sum, sum_sq;
  for (std::size_t i = 0; i < truth_set.size(); ++i) {
    const double l = loss(scores(static_cast<Eigen::Index>(i)), truth_set.labels[i]);
    sum.add(l);
    sum_sq.add(l * l);
  }
  const auto m = static_cast<double>(truth_set.size());
  const double truth = sum.value() / m;
  const double truth_se = std::sqrt(std::max(0.0, sum_sq.value() / m - truth * truth) / m);

  std::ostringstream detail;
  bool pass = true;
  for (Mode mode : kAllModes) {
    CompensatedSum est, est_sq;
    for (std::size_t k = 0; k < opt.unbiased_resamples; ++k) {
      const SampleTriple t = gen_gaussian_artificial(50, 50, 50, pi, derive_seed(opt.seed, {3, k}));
      const double r = risk_estimate(mode, model, t, loss);
      est.add(r);
      est_sq.add(r * r);
    }
    const auto k = static_cast<double>(opt.unbiased_resamples);
    const double mean = est.value() / k;
    const double se = std::sqrt(std::max(0.0, est_sq.value() / k - mean * mean) / k);
    const double z = std::abs(mean - truth) / std::hypot(se, truth_se);
    pass = pass && z <= 5.0;
    detail << to_string(mode) << " mean=" << mean << " z=" << z << "; ";
  }
  detail << "true risk=" << truth;
  return {"estimator unbiasedness", pass, detail.str()};
}

CheckOutcome check_calibration() {
  const auto pis = uniform_grid(0.0, 1.0, 0.05);
  const auto gs = uniform_grid(-2.0, 2.0, 0.01);
  const CalibrationReport r = verify_calibration(pis, gs);
  return {"scaled ramp calibration", r.calibrated, r.calibrated ? "grid certificate holds" : r.detail};
}

ComparatorInput random_input(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unif_pi(0.01, 0.99);
  std::uniform_int_distribution<std::uint64_t> counts(1, 10'000);
  ComparatorInput in;
  in.pi = unif_pi(rng);
  in.n_pos = counts(rng);
  in.n_neg = counts(rng);
  in.n_unl = UnlabeledSize::finite(counts(rng));
  return in;
}

CheckOutcome check_comparators(const VerifyOptions& opt) {
  std::mt19937_64 rng(derive_seed(opt.seed, {4}));
  std::size_t violations = 0;
  double worst_product = 0.0;
  for (std::size_t k = 0; k < opt.comparator_cases; ++k) {
    const ComparatorInput in = random_input(rng);
    const BoundValues v = bound_values(in, BoundParams{});
    if ((alpha_pu_pn(in) < 1.0) != (v.pu < v.pn)) ++violations;
    if ((alpha_nu_pn(in) < 1.0) != (v.nu < v.pn)) ++violations;
    const AlphaStar s = alpha_star(in, AsymptoticCase::a);
    worst_product = std::max(worst_product, std::abs(s.pu * s.nu - 1.0));
  }
  std::ostringstream os;
  os << violations << " equivalence violations, max |alpha*_pu alpha*_nu - 1| = " << worst_product;
  return {"comparator equivalence and reciprocity", violations == 0 && worst_product <= 1e-12, os.str()};
}

CheckOutcome check_monotonicity(const VerifyOptions& opt) {
  std::mt19937_64 rng(derive_seed(opt.seed, {5}));
  std::size_t violations = 0;
  for (std::size_t k = 0; k < 1000; ++k) {
    ComparatorInput in = random_input(rng);
    in.pi = std::min(in.pi, 0.98);
    const double pu = alpha_pu_pn(in);
    const double nu = alpha_nu_pn(in);
    ComparatorInput up = in;
    up.pi += 0.01;
    if (!(alpha_pu_pn(up) > pu) || !(alpha_nu_pn(up) < nu)) ++violations;
    up = in;
    up.n_pos += 1;
    if (!(alpha_pu_pn(up) < pu) || !(alpha_nu_pn(up) > nu)) ++violations;
    up = in;
    up.n_neg += 1;
    if (!(alpha_pu_pn(up) > pu) || !(alpha_nu_pn(up) < nu)) ++violations;
    up = in;
    up.n_unl = UnlabeledSize::finite(in.n_unl.count() + 1);
    if (!(alpha_pu_pn(up) < pu) || !(alpha_nu_pn(up) < nu)) ++violations;
  }
  return {"comparator monotonicity", violations == 0, std::to_string(violations) + " violations"};
}

CheckOutcome check_rademacher(const VerifyOptions& opt) {
  std::mt19937_64 rng(derive_seed(opt.seed, {6}));
  std::normal_distribution<double> normal;
  bool pass = true;
  std::ostringstream os;
  for (std::size_t n : {1, 10, 100, 1000}) {
    Matrix x(static_cast<Eigen::Index>(n), 3);
    for (Eigen::Index i = 0; i < x.size(); ++i) x.data()[i] = normal(rng);
    const double c_phi = x.rowwise().norm().maxCoeff();
    const RademacherCheck r = rademacher_mc_check(x, 1.0, c_phi, 2000, derive_seed(opt.seed, {7, n}));
    pass = pass && r.pass;
    os << "n=" << n << " est=" << r.estimate << " bound=" << r.bound << "; ";
  }
  return {"Rademacher bound", pass, os.str()};
}

}  // namespace

std::vector<CheckOutcome> run_invariant_suite(const VerifyOptions& options) {
  return {check_unbiasedness(options), check_calibration(), check_comparators(options),
          check_monotonicity(options), check_rademacher(options)};
}

}  // namespace pnu
