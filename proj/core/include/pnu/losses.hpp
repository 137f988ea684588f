#pragma once

#include <functional>
#include <span>
#include <string>
#include <vector>

#include "pnu/types.hpp"

namespace pnu {

/// A loss l(t, y) on a real-valued score t and a label y.
///
/// Every descriptor shipped by the library maps into [0, 1], is Lipschitz in t
/// with constant `lipschitz`, and reports whether l(t,+1) + l(t,-1) == 1.
/// The PU and NU estimators refuse losses without that symmetry.
struct LossDescriptor {
  std::string name;
  std::function<double(double, Label)> value;
  double lipschitz = 0.0;
  bool is_symmetric = false;

  double operator()(double t, Label y) const { return value(t, y); }
};

/// max(0, min(1, (1 - t y) / 2)).
///
/// The negative-label branch is evaluated as 1 - l(t,+1) so that the symmetric
/// condition holds bit-exactly, not just up to rounding.
double scaled_ramp(double t, Label y);

/// (1 - sign(t y)) / 2 with sign(0) = 0, so a zero score costs 1/2.
double zero_one(double t, Label y);

struct DcParts {
  double convex;   // max(0, (1 - t y) / 2)
  double concave;  // -max(0, (-1 - t y) / 2)
};

/// Splits the scaled ramp into a convex hinge plus a concave (negated) hinge.
DcParts dc_split(double t, Label y);

LossDescriptor scaled_ramp_loss();
LossDescriptor zero_one_loss();

/// E_Y[l_sr(g, Y) | x] for a point whose positive posterior is `pi_plus`.
double conditional_risk(double pi_plus, double g_val);

struct CalibrationReport {
  bool calibrated = true;
  /// Populated when `calibrated` is false.
  double failing_pi = 0.0;
  double failing_g = 0.0;
  std::string detail;
};

/// Grid certificate that minimizing the conditional risk of the scaled ramp
/// recovers the Bayes decision sign(pi_+ - pi_-) and the Bayes value
/// min(pi_+, pi_-). For pi_+ == 1/2 every g must tie at 1/2.
///
/// Throws std::invalid_argument if a grid is empty or `g_grid` does not cover
/// [-2, 2].
CalibrationReport verify_calibration(std::span<const double> pi_plus_grid,
                                     std::span<const double> g_grid);

/// lo, lo + step, ... up to hi (inclusive within half a step). Points are
/// computed as lo + k * step to avoid accumulated drift.
std::vector<double> uniform_grid(double lo, double hi, double step);

}  // namespace pnu
