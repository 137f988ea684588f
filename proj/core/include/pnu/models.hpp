#pragma once

#include <optional>
#include <span>

#include <nlohmann/json_fwd.hpp>

#include "pnu/types.hpp"

namespace pnu {

/// x -> (k(x, a_1), ..., k(x, a_m)) for the Gaussian kernel
/// k(x, a) = exp(-|x - a|^2 / (2 width^2)).
class EmpiricalKernelMap {
 public:
  /// Throws std::invalid_argument if width <= 0 or there are no anchors.
  EmpiricalKernelMap(Matrix anchors, double width);

  Vector map(std::span<const double> x) const;
  /// Maps every row of `x`; returns an x.rows() x output_dim() matrix.
  Matrix map_rows(const Matrix& x) const;

  std::size_t input_dim() const { return static_cast<std::size_t>(anchors_.cols()); }
  std::size_t output_dim() const { return static_cast<std::size_t>(anchors_.rows()); }
  const Matrix& anchors() const { return anchors_; }
  double width() const { return width_; }

 private:
  Matrix anchors_;
  double width_;
  Vector anchor_sq_norms_;
};

Vector kernel_map(const Matrix& anchors, double width, std::span<const double> x);

/// g(x) = <w, phi(x)> + b with phi either the identity or an empirical kernel map.
class DecisionModel {
 public:
  static DecisionModel linear(Vector weights, double bias);
  static DecisionModel kernel(EmpiricalKernelMap map, Vector weights, double bias);

  /// Throws std::invalid_argument on an input dimension mismatch.
  double predict(std::span<const double> x) const;
  Vector predict_rows(const Matrix& x) const;

  /// phi applied to every row (a copy of `x` for the identity map).
  Matrix features(const Matrix& x) const;

  const Vector& weights() const { return weights_; }
  double bias() const { return bias_; }
  const std::optional<EmpiricalKernelMap>& kernel_map() const { return map_; }
  bool is_kernel() const { return map_.has_value(); }
  std::size_t input_dim() const;

 private:
  DecisionModel(std::optional<EmpiricalKernelMap> map, Vector weights, double bias);

  std::optional<EmpiricalKernelMap> map_;
  Vector weights_;
  double bias_ = 0.0;
};

/// What to train: a plain linear model or a Gaussian empirical-kernel-map model
/// whose anchors are taken from the training samples.
struct ModelTemplate {
  enum class Kind { linear, gaussian_kernel };
  Kind kind = Kind::linear;
  double width = 1.0;

  static ModelTemplate linear() { return {Kind::linear, 1.0}; }
  static ModelTemplate gaussian_kernel(double width) { return {Kind::gaussian_kernel, width}; }
};

/// {"kind": "linear"|"gaussian_kernel", "weights": [...], "bias": b,
///  "input_dim": d, "width": s, "anchors": [[...], ...]}
nlohmann::json model_to_json(const DecisionModel& model);
DecisionModel model_from_json(const nlohmann::json& doc);

}  // namespace pnu
