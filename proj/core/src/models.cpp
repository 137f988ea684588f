#include "pnu/models.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

#include <nlohmann/json.hpp>

namespace pnu {
namespace {

void check_dim(std::size_t got, std::size_t want) {
  if (got != want) {
    std::ostringstream os;
    os << "input dimension " << got << " does not match model input dimension " << want;
    throw std::invalid_argument(os.str());
  }
}

}  // namespace

EmpiricalKernelMap::EmpiricalKernelMap(Matrix anchors, double width)
    : anchors_(std::move(anchors)), width_(width) {
  if (!(width_ > 0.0) || !std::isfinite(width_)) {
    throw std::invalid_argument("kernel width must be positive and finite");
  }
  if (anchors_.rows() == 0) throw std::invalid_argument("empirical kernel map needs at least one anchor");
  anchor_sq_norms_ = anchors_.rowwise().squaredNorm();
}

Vector EmpiricalKernelMap::map(std::span<const double> x) const {
  check_dim(x.size(), input_dim());
  const Eigen::Map<const Eigen::RowVectorXd> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  const double scale = -1.0 / (2.0 * width_ * width_);
  Vector out(anchors_.rows());
  for (Eigen::Index j = 0; j < anchors_.rows(); ++j) {
    out(j) = std::exp(scale * (xv - anchors_.row(j)).squaredNorm());
  }
  return out;
}

Matrix EmpiricalKernelMap::map_rows(const Matrix& x) const {
  check_dim(static_cast<std::size_t>(x.cols()), input_dim());
  // |x - a|^2 = |x|^2 + |a|^2 - 2 x.a, clamped at 0 against cancellation.
  Matrix sq = (-2.0 * x * anchors_.transpose());
  sq.colwise() += x.rowwise().squaredNorm();
  sq.rowwise() += anchor_sq_norms_.transpose();
  const double scale = -1.0 / (2.0 * width_ * width_);
  return (sq.array().max(0.0) * scale).exp().matrix();
}

Vector kernel_map(const Matrix& anchors, double width, std::span<const double> x) {
  return EmpiricalKernelMap(anchors, width).map(x);
}

DecisionModel::DecisionModel(std::optional<EmpiricalKernelMap> map, Vector weights, double bias)
    : map_(std::move(map)), weights_(std::move(weights)), bias_(bias) {
  if (map_ && static_cast<std::size_t>(weights_.size()) != map_->output_dim()) {
    throw std::invalid_argument("weight dimension does not match the kernel map output dimension");
  }
}

DecisionModel DecisionModel::linear(Vector weights, double bias) {
  return DecisionModel(std::nullopt, std::move(weights), bias);
}

DecisionModel DecisionModel::kernel(EmpiricalKernelMap map, Vector weights, double bias) {
  return DecisionModel(std::move(map), std::move(weights), bias);
}

std::size_t DecisionModel::input_dim() const {
  return map_ ? map_->input_dim() : static_cast<std::size_t>(weights_.size());
}

double DecisionModel::predict(std::span<const double> x) const {
  if (map_) return weights_.dot(map_->map(x)) + bias_;
  check_dim(x.size(), input_dim());
  const Eigen::Map<const Vector> xv(x.data(), static_cast<Eigen::Index>(x.size()));
  return weights_.dot(xv) + bias_;
}

Vector DecisionModel::predict_rows(const Matrix& x) const {
  check_dim(static_cast<std::size_t>(x.cols()), input_dim());
  Vector scores = map_ ? Vector(map_->map_rows(x) * weights_) : Vector(x * weights_);
  scores.array() += bias_;
  return scores;
}

Matrix DecisionModel::features(const Matrix& x) const {
  check_dim(static_cast<std::size_t>(x.cols()), input_dim());
  return map_ ? map_->map_rows(x) : x;
}

nlohmann::json model_to_json(const DecisionModel& model) {
  nlohmann::json doc;
  doc["kind"] = model.is_kernel() ? "gaussian_kernel" : "linear";
  doc["weights"] = std::vector<double>(model.weights().data(), model.weights().data() + model.weights().size());
  doc["bias"] = model.bias();
  doc["input_dim"] = model.input_dim();
  if (const auto& map = model.kernel_map()) {
    doc["width"] = map->width();
    auto anchors = nlohmann::json::array();
    for (Eigen::Index i = 0; i < map->anchors().rows(); ++i) {
      const auto row = map->anchors().row(i);
      anchors.push_back(std::vector<double>(row.data(), row.data() + row.size()));
    }
    doc["anchors"] = std::move(anchors);
  }
  return doc;
}

DecisionModel model_from_json(const nlohmann::json& doc) {
  const auto w = doc.at("weights").get<std::vector<double>>();
  Vector weights = Eigen::Map<const Vector>(w.data(), static_cast<Eigen::Index>(w.size()));
  const double bias = doc.at("bias").get<double>();
  const auto kind = doc.at("kind").get<std::string>();
  if (kind == "linear") return DecisionModel::linear(std::move(weights), bias);
  if (kind != "gaussian_kernel") throw std::invalid_argument("unknown model kind '" + kind + "'");

  const auto rows = doc.at("anchors").get<std::vector<std::vector<double>>>();
  const auto d = doc.at("input_dim").get<std::size_t>();
  Matrix anchors(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != d) throw std::invalid_argument("anchor row has the wrong dimension");
    for (std::size_t j = 0; j < d; ++j) anchors(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return DecisionModel::kernel(EmpiricalKernelMap(std::move(anchors), doc.at("width").get<double>()),
                               std::move(weights), bias);
}

}  // namespace pnu
