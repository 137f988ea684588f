#include "doctest.h"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <random>
#include <set>
#include <string>

#include "pnu/datasets.hpp"

using namespace pnu;
namespace fs = std::filesystem;

namespace {

fs::path write_file(const std::string& name, const std::string& body) {
  const fs::path p = fs::path(PNU_TEST_TMP) / name;
  std::ofstream(p) << body;
  return p;
}

// Two interleaved moons with 5300 rows, roughly the shape of the banana benchmark.
fs::path write_banana(const std::string& name) {
  std::mt19937_64 rng(5300);
  std::normal_distribution<double> noise(0.0, 0.2);
  std::ofstream out(fs::path(PNU_TEST_TMP) / name);
  out << "x1,x2,label\n";
  for (int i = 0; i < 5300; ++i) {
    const bool pos = i % 100 < 45;
    const double t = 3.14159 * (i % 97) / 97.0;
    const double x = pos ? std::cos(t) : 1.0 - std::cos(t);
    const double y = pos ? std::sin(t) : 0.5 - std::sin(t);
    out << x + noise(rng) << "," << y + noise(rng) << "," << (pos ? 1 : -1) << "\n";
  }
  return fs::path(PNU_TEST_TMP) / name;
}

}  // namespace

TEST_CASE("artificial triple shapes") {
  const auto t = gen_gaussian_artificial(45, 5, 100, 0.5, 1);
  CHECK(t.x_pos.rows() == 45);
  CHECK(t.x_neg.rows() == 5);
  CHECK(t.x_unl.rows() == 100);
  CHECK(t.dim() == 2);
  CHECK(t.pi == 0.5);
  CHECK_NOTHROW(t.validate());
}

TEST_CASE("unlabeled mixture mean is the weighted class mean") {
  const std::size_t n = 1'000'000;
  const auto t = gen_gaussian_artificial(0, 0, n, 0.5, 7);
  const Eigen::RowVectorXd mean = t.x_unl.colwise().mean();
  // Each coordinate of the mixture has variance 1 + 1/2 (unit noise plus mean spread).
  const double tol = 3.0 * std::sqrt(1.5 / static_cast<double>(n));
  CHECK(std::abs(mean(0)) < tol);
  CHECK(std::abs(mean(1)) < tol);
}

TEST_CASE("class means") {
  const Vector mp = artificial_class_mean(Label::positive);
  const Vector mn = artificial_class_mean(Label::negative);
  CHECK((mp - mn).norm() == doctest::Approx(2.0));
  CHECK(mp(0) == doctest::Approx(1.0 / std::sqrt(2.0)));
}

TEST_CASE("same seed gives identical triples") {
  const auto a = gen_gaussian_artificial(10, 10, 30, 0.3, 42);
  const auto b = gen_gaussian_artificial(10, 10, 30, 0.3, 42);
  const auto c = gen_gaussian_artificial(10, 10, 30, 0.3, 43);
  CHECK(a.x_pos == b.x_pos);
  CHECK(a.x_neg == b.x_neg);
  CHECK(a.x_unl == b.x_unl);
  CHECK(fingerprint(a) == fingerprint(b));
  CHECK(fingerprint(a) != fingerprint(c));
}

TEST_CASE("latent label frequency follows the prior") {
  const double pi = 0.3;
  const std::size_t n = 10'000;
  std::size_t pos = 0;
  for (std::size_t r = 0; r < n; ++r) {
    const auto d = draw_gaussian_artificial(0, 0, 1, pi, 99 + r);
    pos += d.latent_unl.at(0) == Label::positive ? 1 : 0;
  }
  const double freq = static_cast<double>(pos) / static_cast<double>(n);
  CHECK(std::abs(freq - pi) < 4.0 * std::sqrt(pi * (1.0 - pi) / static_cast<double>(n)));
}

TEST_CASE("labeled pool from the joint density") {
  const auto pool = gen_gaussian_labeled(20000, 0.7, 5);
  CHECK(pool.size() == 20000);
  CHECK(pool.dim() == 2);
  CHECK(std::abs(pool.positive_ratio() - 0.7) < 4.0 * std::sqrt(0.21 / 20000.0));
}

TEST_CASE("prior outside (0,1) is rejected") {
  CHECK_THROWS_AS(gen_gaussian_artificial(1, 1, 1, 0.0, 1), std::invalid_argument);
  CHECK_THROWS_AS(gen_gaussian_artificial(1, 1, 1, 1.0, 1), std::invalid_argument);
}

TEST_CASE("csv loading") {
  SUBCASE("0/1 labels map 0 to -1") {
    const auto p = write_file("zero_one.csv", "a,b,y\n1,2,0\n3,4,1\n5,6,1\n");
    const auto pool = load_csv(p, "y");
    REQUIRE(pool.size() == 3);
    CHECK(pool.labels[0] == Label::negative);
    CHECK(pool.labels[1] == Label::positive);
    CHECK(pool.dim() == 2);
    // standardized columns
    CHECK(pool.features.col(0).mean() == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(pool.features.col(0).squaredNorm() / 3.0 == doctest::Approx(1.0));
  }
  SUBCASE("label column by index") {
    const auto p = write_file("by_index.csv", "y,a\n2,1\n10,2\n");
    const auto pool = load_csv(p, "0");
    CHECK(pool.labels[0] == Label::negative);  // numeric order, not lexicographic
    CHECK(pool.labels[1] == Label::positive);
  }
  SUBCASE("constant column is only centered") {
    const auto p = write_file("constant.csv", "a,b,y\n1,7,0\n2,7,1\n");
    const auto pool = load_csv(p, "y");
    CHECK(pool.features(0, 1) == 0.0);
    CHECK(pool.features(1, 1) == 0.0);
  }
  SUBCASE("three label values") {
    const auto p = write_file("three.csv", "a,y\n1,0\n2,1\n3,2\n");
    CHECK_THROWS_AS(load_csv(p, "y"), std::runtime_error);
  }
  SUBCASE("single class") {
    const auto p = write_file("single.csv", "a,y\n1,0\n2,0\n");
    CHECK_THROWS_AS(load_csv(p, "y"), std::runtime_error);
  }
  SUBCASE("non-numeric feature names the offending cell") {
    const auto p = write_file("nonnum.csv", "a,y\n1,0\nfoo,1\n");
    try {
      load_csv(p, "y");
      FAIL("expected an error");
    } catch (const std::runtime_error& e) {
      CHECK(std::string(e.what()).find("foo") != std::string::npos);
    }
  }
  SUBCASE("malformed row") {
    const auto p = write_file("short.csv", "a,b,y\n1,2,0\n3,1\n");
    CHECK_THROWS_AS(load_csv(p, "y"), std::runtime_error);
  }
  SUBCASE("unknown label column") {
    const auto p = write_file("unknown.csv", "a,y\n1,0\n2,1\n");
    CHECK_THROWS(load_csv(p, "label"));
  }
}

TEST_CASE("banana-shaped pool split") {
  const auto pool = load_csv(write_banana("banana.csv"), "label");
  REQUIRE(pool.size() == 5300);
  CHECK(pool.dim() == 2);

  const auto split = sample_triple_from_pool(pool, 25, 5, 300, 0.5, 3);
  CHECK(split.triple.x_pos.rows() == 25);
  CHECK(split.triple.x_neg.rows() == 5);
  CHECK(split.triple.x_unl.rows() == 300);
  CHECK(split.holdout.size() <= 4970);
  CHECK(split.holdout.size() == 4970);

  std::set<std::size_t> seen;
  for (const auto* rows : {&split.pos_rows, &split.neg_rows, &split.unl_rows, &split.holdout_rows}) {
    for (std::size_t r : *rows) CHECK(seen.insert(r).second);
  }
  CHECK(seen.size() == 5300);
  for (std::size_t r : split.pos_rows) CHECK(pool.labels[r] == Label::positive);
  for (std::size_t r : split.neg_rows) CHECK(pool.labels[r] == Label::negative);
  for (std::size_t i = 0; i < split.pos_rows.size(); ++i) {
    CHECK(split.triple.x_pos.row(static_cast<Eigen::Index>(i)) == pool.features.row(static_cast<Eigen::Index>(split.pos_rows[i])));
  }

  const auto again = sample_triple_from_pool(pool, 25, 5, 300, 0.5, 3);
  CHECK(again.unl_rows == split.unl_rows);
  CHECK(again.holdout_rows == split.holdout_rows);
  CHECK(fingerprint(again.triple) == fingerprint(split.triple));
}

TEST_CASE("large holdout is capped") {
  const auto pool = gen_gaussian_labeled(12000, 0.5, 1);
  const auto split = sample_triple_from_pool(pool, 5, 5, 5, 0.5, 1);
  CHECK(split.holdout.size() == kMaxHoldout);
}

TEST_CASE("exhausting a class names it") {
  LabeledPool pool;
  pool.features = Matrix::Zero(20, 1);
  for (int i = 0; i < 20; ++i) pool.labels.push_back(i < 2 ? Label::positive : Label::negative);
  try {
    sample_triple_from_pool(pool, 1, 1, 10, 0.95, 1);
    FAIL("expected exhaustion");
  } catch (const std::runtime_error& e) {
    CHECK(std::string(e.what()).find("positive") != std::string::npos);
  }
}
