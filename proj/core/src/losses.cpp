#include "pnu/losses.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace pnu {
namespace {

constexpr double kCalibrationTol = 1e-12;

double ramp_positive(double t) { return std::clamp((1.0 - t) / 2.0, 0.0, 1.0); }

double sign(double v) { return v > 0.0 ? 1.0 : (v < 0.0 ? -1.0 : 0.0); }

}  // namespace

double scaled_ramp(double t, Label y) {
  const double pos = ramp_positive(t);
  return y == Label::positive ? pos : 1.0 - pos;
}

double zero_one(double t, Label y) { return (1.0 - sign(t * sign_of(y))) / 2.0; }

DcParts dc_split(double t, Label y) {
  const double margin = t * sign_of(y);
  return {std::max(0.0, (1.0 - margin) / 2.0), -std::max(0.0, (-1.0 - margin) / 2.0)};
}

LossDescriptor scaled_ramp_loss() {
  return {"scaled_ramp", &scaled_ramp, 0.5, true};
}

LossDescriptor zero_one_loss() {
  // Not Lipschitz; the constant is reported as infinity.
  return {"zero_one", &zero_one, INFINITY, true};
}

double conditional_risk(double pi_plus, double g_val) {
  const double pi_minus = 1.0 - pi_plus;
  if (g_val <= -1.0) return pi_plus;
  if (g_val >= 1.0) return pi_minus;
  return 0.5 - (pi_plus - pi_minus) * g_val / 2.0;
}

CalibrationReport verify_calibration(std::span<const double> pi_plus_grid,
                                     std::span<const double> g_grid) {
  if (pi_plus_grid.empty() || g_grid.empty()) {
    throw std::invalid_argument("verify_calibration: grids must be non-empty");
  }
  const auto [g_lo, g_hi] = std::minmax_element(g_grid.begin(), g_grid.end());
  if (*g_lo > -2.0 || *g_hi < 2.0) {
    throw std::invalid_argument("verify_calibration: g grid must span at least [-2, 2]");
  }

  auto fail = [](double pi, double g, const std::string& why) {
    std::ostringstream os;
    os << "pi_plus=" << pi << " g=" << g << ": " << why;
    return CalibrationReport{false, pi, g, os.str()};
  };

  for (double pi : pi_plus_grid) {
    if (!(pi >= 0.0 && pi <= 1.0)) {
      throw std::invalid_argument("verify_calibration: pi_plus outside [0, 1]");
    }
    const double pi_minus = 1.0 - pi;

    if (std::abs(pi - pi_minus) <= kCalibrationTol) {
      for (double g : g_grid) {
        if (std::abs(conditional_risk(pi, g) - 0.5) > kCalibrationTol) {
          return fail(pi, g, "degenerate prior should give 1/2 for every g");
        }
      }
      continue;
    }

    double best_g = g_grid.front();
    double best_val = conditional_risk(pi, best_g);
    for (double g : g_grid) {
      const double val = conditional_risk(pi, g);
      if (val < best_val) {
        best_val = val;
        best_g = g;
      }
    }
    if (sign(best_g) != sign(pi - pi_minus)) {
      return fail(pi, best_g, "minimizer has the wrong sign");
    }
    if (std::abs(best_val - std::min(pi, pi_minus)) > kCalibrationTol) {
      return fail(pi, best_g, "minimum differs from min(pi_+, pi_-)");
    }
  }
  return {};
}

std::vector<double> uniform_grid(double lo, double hi, double step) {
  if (!(step > 0.0) || hi < lo) {
    throw std::invalid_argument("uniform_grid: need step > 0 and hi >= lo");
  }
  const auto count = static_cast<std::size_t>(std::floor((hi - lo) / step + 0.5)) + 1;
  std::vector<double> grid(count);
  for (std::size_t k = 0; k < count; ++k) grid[k] = lo + static_cast<double>(k) * step;
  return grid;
}

}  // namespace pnu
