#include "pnu/bounds.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

#include "pnu/numerics.hpp"

namespace pnu {
namespace {

void check_pi(double pi) {
  if (!(pi > 0.0 && pi < 1.0)) throw std::invalid_argument("class prior must lie in (0, 1)");
}

void check_ratio(double rho, const char* name) {
  if (!(rho > 0.0) || !std::isfinite(rho)) {
    throw std::invalid_argument(std::string(name) + " must be positive and finite");
  }
}

double inv_sqrt(std::uint64_t n) { return 1.0 / std::sqrt(static_cast<double>(n)); }

Verdict verdict_for(double alpha) {
  if (std::abs(alpha - 1.0) <= kTieTolerance) return Verdict::degenerate_tie;
  return alpha < 1.0 ? Verdict::pu_promising : Verdict::nu_promising;
}

}  // namespace

UnlabeledSize UnlabeledSize::finite(std::uint64_t n) {
  if (n == 0) throw std::invalid_argument("unlabeled sample size must be positive");
  return UnlabeledSize(n, false);
}

std::uint64_t UnlabeledSize::count() const {
  if (infinite_) throw std::logic_error("infinite unlabeled size has no count");
  return n_;
}

double UnlabeledSize::inv_sqrt() const { return infinite_ ? 0.0 : 1.0 / std::sqrt(static_cast<double>(n_)); }

std::string UnlabeledSize::to_string() const { return infinite_ ? "infinity" : std::to_string(n_); }

void ComparatorInput::validate() const {
  check_pi(pi);
  if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("n_pos and n_neg must be positive");
  if (rho_pn) check_ratio(*rho_pn, "rho_pn");
  if (rho_pu) check_ratio(*rho_pu, "rho_pu");
  if (rho_nu) check_ratio(*rho_nu, "rho_nu");
  if (rho_pn && rho_pu && rho_nu) {
    const double implied = *rho_pu / *rho_nu;
    if (std::abs(*rho_pn - implied) > 1e-9 * std::max(1.0, std::abs(implied))) {
      throw std::invalid_argument("inconsistent ratios: rho_pn must equal rho_pu / rho_nu");
    }
  }
}

BoundParams BoundParams::bounded_hyperplanes(double c_w, double c_phi, double delta, double lipschitz) {
  BoundParams p{delta, lipschitz, c_w * c_phi};
  p.validate();
  return p;
}

void BoundParams::validate() const {
  if (!(delta > 0.0 && delta < 1.0)) throw std::invalid_argument("delta must lie in (0, 1)");
  if (!(lipschitz > 0.0) || !(complexity_const > 0.0)) {
    throw std::invalid_argument("Lipschitz and complexity constants must be positive");
  }
}

double f_delta(const BoundParams& params) {
  params.validate();
  return 4.0 * params.lipschitz * params.complexity_const + std::sqrt(2.0 * std::log(4.0 / params.delta));
}

BoundValues bound_values(const ComparatorInput& input, const BoundParams& params, InfinitePolicy policy) {
  input.validate();
  if (input.n_unl.is_infinite() && policy == InfinitePolicy::reject) {
    throw std::invalid_argument("infinite unlabeled size needs InfinitePolicy::limit");
  }
  const double f = f_delta(params);
  const double pi = input.pi;
  const double ip = inv_sqrt(input.n_pos);
  const double in = inv_sqrt(input.n_neg);
  const double iu = input.n_unl.inv_sqrt();
  return {f * (pi * ip + (1.0 - pi) * in), f * (2.0 * pi * ip + iu), f * (iu + 2.0 * (1.0 - pi) * in)};
}

double alpha_pu_pn(const ComparatorInput& input) {
  input.validate();
  const double pi = input.pi;
  return (pi * inv_sqrt(input.n_pos) + input.n_unl.inv_sqrt()) / ((1.0 - pi) * inv_sqrt(input.n_neg));
}

double alpha_nu_pn(const ComparatorInput& input) {
  input.validate();
  const double pi = input.pi;
  return ((1.0 - pi) * inv_sqrt(input.n_neg) + input.n_unl.inv_sqrt()) / (pi * inv_sqrt(input.n_pos));
}

AlphaPair alpha_ratio_forms(double pi, double rho_pn, double rho_pu, double rho_nu) {
  ComparatorInput check;
  check.pi = pi;
  check.rho_pn = rho_pn;
  check.rho_pu = rho_pu;
  check.rho_nu = rho_nu;
  check.validate();
  return {(pi + std::sqrt(rho_pu)) / ((1.0 - pi) * std::sqrt(rho_pn)),
          (1.0 - pi + std::sqrt(rho_nu)) / (pi / std::sqrt(rho_pn))};
}

double constrained_alpha_pu_pn(double pi, double rho_pu) {
  check_pi(pi);
  check_ratio(rho_pu, "rho_pu");
  return (pi + std::sqrt(rho_pu)) / std::sqrt(pi * (1.0 - pi));
}

double constrained_alpha_nu_pn(double pi, double rho_nu) {
  check_pi(pi);
  check_ratio(rho_nu, "rho_nu");
  return (1.0 - pi + std::sqrt(rho_nu)) / std::sqrt(pi * (1.0 - pi));
}

double constrained_minimum(double rho) {
  check_ratio(rho, "rho");
  return 2.0 * std::sqrt(rho + std::sqrt(rho));
}

double pi_bar(double rho_pu) {
  check_ratio(rho_pu, "rho_pu");
  const double s = std::sqrt(rho_pu);
  return s / (2.0 * s + 1.0);
}

std::string to_string(Verdict verdict) {
  switch (verdict) {
    case Verdict::pu_promising: return "pu_promising";
    case Verdict::nu_promising: return "nu_promising";
    case Verdict::degenerate_tie: return "degenerate_tie";
  }
  return "?";
}

AlphaStar alpha_star(const ComparatorInput& input, AsymptoticCase which) {
  input.validate();
  const double pi = input.pi;
  AlphaStar out;
  if (which == AsymptoticCase::a) {
    const double sp = std::sqrt(static_cast<double>(input.n_pos));
    const double sn = std::sqrt(static_cast<double>(input.n_neg));
    out.pu = (pi * sn) / ((1.0 - pi) * sp);
    out.nu = ((1.0 - pi) * sp) / (pi * sn);
  } else {
    const double rho = input.rho_pn.value_or(static_cast<double>(input.n_pos) / static_cast<double>(input.n_neg));
    check_ratio(rho, "rho*_pn");
    out.pu = pi / ((1.0 - pi) * std::sqrt(rho));
    out.nu = ((1.0 - pi) * std::sqrt(rho)) / pi;
  }
  out.verdict = verdict_for(out.pu);
  return out;
}

RademacherCheck rademacher_mc_check(const Matrix& x, double c_w, double c_phi, std::size_t num_sigma_draws,
                                    std::uint64_t seed) {
  if (x.rows() == 0) throw std::invalid_argument("Rademacher check needs at least one row");
  if (!(c_w > 0.0) || !(c_phi > 0.0)) throw std::invalid_argument("c_w and c_phi must be positive");
  if (num_sigma_draws < 1000) throw std::invalid_argument("Rademacher check needs at least 1000 sigma draws");
  for (Eigen::Index i = 0; i < x.rows(); ++i) {
    if (x.row(i).norm() > c_phi * (1.0 + 1e-12)) {
      std::ostringstream os;
      os << "row " << i << " has norm " << x.row(i).norm() << " > c_phi = " << c_phi;
      throw std::invalid_argument(os.str());
    }
  }

  const auto n = static_cast<double>(x.rows());
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution coin(0.5);
  CompensatedSum sum, sum_sq;
  Eigen::RowVectorXd acc(x.cols());
  for (std::size_t draw = 0; draw < num_sigma_draws; ++draw) {
    acc.setZero();
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      if (coin(rng)) acc += x.row(i);
      else acc -= x.row(i);
    }
    const double v = c_w * acc.norm() / n;
    sum.add(v);
    sum_sq.add(v * v);
  }
  const auto draws = static_cast<double>(num_sigma_draws);
  RademacherCheck out;
  out.estimate = sum.value() / draws;
  const double var = std::max(0.0, (sum_sq.value() - draws * out.estimate * out.estimate) / (draws - 1.0));
  out.std_error = std::sqrt(var / draws);
  out.bound = c_w * c_phi / std::sqrt(n);
  out.pass = out.estimate <= out.bound + 3.0 * out.std_error;
  return out;
}

}  // namespace pnu
