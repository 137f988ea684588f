#include "doctest.h"

#include <cmath>
#include <vector>

#include <nlohmann/json.hpp>

#include "gen.hpp"
#include "pnu/models.hpp"

using namespace pnu;
using pnu::testing::Gen;

namespace {
std::span<const double> row(const Matrix& m, Eigen::Index i) {
  return {m.data() + i * m.cols(), static_cast<std::size_t>(m.cols())};
}
}  // namespace

TEST_CASE("linear predictions") {
  const auto m = DecisionModel::linear(Vector::Unit(2, 0), 0.0);
  const std::vector<double> x{2.0, 5.0};
  CHECK(m.predict(x) == 2.0);

  const auto c = DecisionModel::linear(Vector::Zero(2), 0.3);
  CHECK(c.predict(x) == 0.3);

  const std::vector<double> wrong{1.0};
  CHECK_THROWS_AS(m.predict(wrong), std::invalid_argument);
}

TEST_CASE("kernel map at anchors and at the half-height distance") {
  Matrix anchors(3, 2);
  anchors << 0, 0, 1, 2, -1, 0.5;
  const double width = 0.7;
  const EmpiricalKernelMap map(anchors, width);
  for (Eigen::Index i = 0; i < 3; ++i) {
    const Vector v = map.map(row(anchors, i));
    CHECK(v(i) == 1.0);
  }
  const double r = width * std::sqrt(2.0 * std::log(2.0));
  const std::vector<double> x{r, 0.0};
  CHECK(map.map(x)(0) == doctest::Approx(0.5).epsilon(1e-14));

  const Matrix rows = map.map_rows(anchors);
  CHECK(rows.rows() == 3);
  CHECK(rows.cols() == 3);
  CHECK(rows(1, 1) == doctest::Approx(1.0));
  CHECK(kernel_map(anchors, width, x)(0) == doctest::Approx(0.5));
}

TEST_CASE("kernel is symmetric and bounded") {
  Gen gen(3);
  const Matrix a = gen.gaussian_rows(20, 4);
  const EmpiricalKernelMap map(a, 1.3);
  const Matrix k = map.map_rows(a);
  for (Eigen::Index i = 0; i < 20; ++i)
    for (Eigen::Index j = 0; j < 20; ++j) {
      CHECK(k(i, j) == doctest::Approx(k(j, i)).epsilon(1e-13));
      CHECK(k(i, j) > 0.0);
      CHECK(k(i, j) <= 1.0);
    }
}

TEST_CASE("map_rows matches map") {
  Gen gen(4);
  const Matrix a = gen.gaussian_rows(7, 3);
  const Matrix x = gen.gaussian_rows(5, 3);
  const EmpiricalKernelMap map(a, 0.9);
  const Matrix rows = map.map_rows(x);
  for (Eigen::Index i = 0; i < 5; ++i) {
    const Vector v = map.map(row(x, i));
    for (Eigen::Index j = 0; j < 7; ++j) CHECK(rows(i, j) == doctest::Approx(v(j)).epsilon(1e-12));
  }
}

TEST_CASE("prediction is linear in the weights") {
  Gen gen(5);
  const Matrix a = gen.gaussian_rows(6, 2);
  const EmpiricalKernelMap map(a, 1.0);
  const Vector w1 = Vector::Random(6), w2 = Vector::Random(6);
  const auto m1 = DecisionModel::kernel(map, w1, 0.0);
  const auto m2 = DecisionModel::kernel(map, w2, 0.0);
  const auto m12 = DecisionModel::kernel(map, 2.0 * w1 - w2, 0.0);
  const Matrix x = gen.gaussian_rows(10, 2);
  const Vector p = m12.predict_rows(x);
  const Vector q = 2.0 * m1.predict_rows(x) - m2.predict_rows(x);
  for (Eigen::Index i = 0; i < 10; ++i) CHECK(p(i) == doctest::Approx(q(i)).epsilon(1e-12));
}

TEST_CASE("json round trip") {
  Gen gen(6);
  const Matrix a = gen.gaussian_rows(4, 3);
  const auto k = DecisionModel::kernel(EmpiricalKernelMap(a, 0.8), Vector::Random(4), -0.25);
  const auto k2 = model_from_json(model_to_json(k));
  CHECK(k2.is_kernel());
  CHECK(k2.kernel_map()->width() == 0.8);
  CHECK(k2.kernel_map()->anchors() == a);
  CHECK(k2.weights() == k.weights());
  CHECK(k2.bias() == k.bias());

  const auto l = DecisionModel::linear(Vector::Random(3), 1.5);
  const auto l2 = model_from_json(model_to_json(l));
  CHECK_FALSE(l2.is_kernel());
  CHECK(l2.weights() == l.weights());
  CHECK(l2.input_dim() == 3);

  nlohmann::json bad = model_to_json(l);
  bad["kind"] = "spline";
  CHECK_THROWS_AS(model_from_json(bad), std::invalid_argument);
}

TEST_CASE("kernel construction errors") {
  const Matrix a = Matrix::Zero(2, 2);
  CHECK_THROWS_AS(EmpiricalKernelMap(a, 0.0), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalKernelMap(a, -1.0), std::invalid_argument);
  CHECK_THROWS_AS(EmpiricalKernelMap(Matrix(0, 2), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(DecisionModel::kernel(EmpiricalKernelMap(a, 1.0), Vector::Zero(3), 0.0), std::invalid_argument);
}
