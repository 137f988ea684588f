#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include <Eigen/Dense>

namespace pnu {

/// Row-major so that a sample row is a contiguous span of doubles.
using Matrix = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using Vector = Eigen::VectorXd;

enum class Label : int { negative = -1, positive = +1 };

constexpr double sign_of(Label y) { return static_cast<double>(static_cast<int>(y)); }

constexpr Label flip(Label y) { return y == Label::positive ? Label::negative : Label::positive; }

/// Which pair of samples a risk estimator (or minimizer) is built from.
enum class Mode { pn, pu, nu };

inline constexpr std::array<Mode, 3> kAllModes{Mode::pn, Mode::pu, Mode::nu};

std::string_view to_string(Mode mode);

/// Accepts "PN"/"PU"/"NU" in either case; throws std::invalid_argument otherwise.
Mode mode_from_string(std::string_view text);

}  // namespace pnu
