#pragma once

#include <cstdint>
#include <optional>
#include <string>

#include "pnu/types.hpp"

namespace pnu {

/// Size of the unlabeled sample: a positive count or symbolic infinity.
class UnlabeledSize {
 public:
  static UnlabeledSize finite(std::uint64_t n);
  static UnlabeledSize infinite() { return UnlabeledSize(0, true); }

  bool is_infinite() const { return infinite_; }
  /// Throws std::logic_error for the infinite size.
  std::uint64_t count() const;
  /// 1/sqrt(n_u); exactly 0 for the infinite size.
  double inv_sqrt() const;
  /// Decimal count or "infinity".
  std::string to_string() const;

 private:
  UnlabeledSize(std::uint64_t n, bool inf) : n_(n), infinite_(inf) {}
  std::uint64_t n_;
  bool infinite_;
};

struct ComparatorInput {
  double pi = 0.5;
  std::uint64_t n_pos = 1;
  std::uint64_t n_neg = 1;
  UnlabeledSize n_unl = UnlabeledSize::finite(1);
  std::optional<double> rho_pn;  // n+/n-
  std::optional<double> rho_pu;  // n+/nu
  std::optional<double> rho_nu;  // n-/nu

  /// pi in (0,1), positive counts, positive ratios, and rho_pn == rho_pu/rho_nu
  /// (relative 1e-9) when all three ratios are given.
  void validate() const;
};

struct BoundParams {
  double delta = 0.05;
  double lipschitz = 0.5;         // L of the scaled ramp
  double complexity_const = 1.0;  // C_G, or C_w * C_phi for bounded hyperplanes

  static BoundParams bounded_hyperplanes(double c_w, double c_phi, double delta = 0.05, double lipschitz = 0.5);
  void validate() const;
};

/// 4 L C_G + sqrt(2 ln(4 / delta))
double f_delta(const BoundParams& params);

struct BoundValues {
  double pn = 0.0;
  double pu = 0.0;
  double nu = 0.0;
};

enum class InfinitePolicy { reject, limit };

/// Simplified estimation-error bounds for the three minimizers:
///   PN: f * (pi/sqrt(n+) + (1-pi)/sqrt(n-))
///   PU: f * (2 pi/sqrt(n+) + 1/sqrt(nu))
///   NU: f * (1/sqrt(nu) + 2(1-pi)/sqrt(n-))
/// An infinite nu is rejected unless `policy` asks for the limiting values.
BoundValues bound_values(const ComparatorInput& input, const BoundParams& params,
                         InfinitePolicy policy = InfinitePolicy::reject);

/// (pi/sqrt(n+) + 1/sqrt(nu)) / ((1-pi)/sqrt(n-)); PU's bound is tighter than
/// PN's exactly when this is below one.
double alpha_pu_pn(const ComparatorInput& input);
/// ((1-pi)/sqrt(n-) + 1/sqrt(nu)) / (pi/sqrt(n+))
double alpha_nu_pn(const ComparatorInput& input);

struct AlphaPair {
  double pu_pn = 0.0;
  double nu_pn = 0.0;
};

/// Closed forms when the sizes are proportional:
///   alpha_pu,pn = (pi + sqrt(rho_pu)) / ((1-pi) sqrt(rho_pn))
///   alpha_nu,pn = (1 - pi + sqrt(rho_nu)) / (pi / sqrt(rho_pn))
/// Throws std::invalid_argument when rho_pn != rho_pu / rho_nu.
AlphaPair alpha_ratio_forms(double pi, double rho_pn, double rho_pu, double rho_nu);

/// alpha_pu,pn under rho_pn = pi/(1-pi): (pi + sqrt(rho_pu)) / sqrt(pi (1-pi)).
double constrained_alpha_pu_pn(double pi, double rho_pu);
/// alpha_nu,pn under rho_pn = pi/(1-pi): (1 - pi + sqrt(rho_nu)) / sqrt(pi (1-pi)).
double constrained_alpha_nu_pn(double pi, double rho_nu);
/// 2 sqrt(rho + sqrt(rho)), the minimum over pi of either constrained form.
double constrained_minimum(double rho);
/// sqrt(rho_pu) / (2 sqrt(rho_pu) + 1), where the constrained alpha_pu,pn is minimal.
double pi_bar(double rho_pu);

enum class Verdict { pu_promising, nu_promising, degenerate_tie };
std::string to_string(Verdict verdict);

enum class AsymptoticCase {
  a,  // n+, n- finite and nu -> infinity
  b,  // n+, n- -> infinity at a fixed ratio, nu faster
};

struct AlphaStar {
  double pu = 0.0;  // limit of alpha_pu,pn
  double nu = 0.0;  // limit of alpha_nu,pn; pu * nu == 1
  Verdict verdict = Verdict::degenerate_tie;
};

/// Relative tolerance around alpha* == 1 reported as a degenerate tie.
inline constexpr double kTieTolerance = 1e-12;

/// Case a: alpha* = pi sqrt(n-) / ((1-pi) sqrt(n+)).
/// Case b: alpha* = pi / ((1-pi) sqrt(rho*_pn)), with rho*_pn taken from
/// input.rho_pn or else n+/n-.
AlphaStar alpha_star(const ComparatorInput& input, AsymptoticCase which);

struct RademacherCheck {
  double estimate = 0.0;
  double std_error = 0.0;
  double bound = 0.0;  // c_w c_phi / sqrt(n)
  bool pass = false;
};

/// Monte-Carlo estimate of the empirical Rademacher complexity of
/// {x -> <w, x> : |w| <= c_w} on the rows of `x`, which equals
/// (c_w / n) E_sigma |sum_i sigma_i x_i|. Passes when the estimate is within
/// three standard errors of c_w c_phi / sqrt(n) or below it.
/// Throws std::invalid_argument if a row norm exceeds c_phi or fewer than
/// 1000 draws are requested.
RademacherCheck rademacher_mc_check(const Matrix& x, double c_w, double c_phi, std::size_t num_sigma_draws,
                                    std::uint64_t seed);

}  // namespace pnu
