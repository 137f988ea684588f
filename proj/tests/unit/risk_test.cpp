#include "doctest.h"

#include <cmath>
#include <vector>

#include "gen.hpp"
#include "pnu/risk.hpp"

using namespace pnu;
using pnu::testing::Gen;

namespace {

LossDescriptor hinge() {
  return {"hinge", [](double t, Label y) { return std::max(0.0, 1.0 - t * sign_of(y)); }, 1.0, false};
}

DecisionModel constant(double b) { return DecisionModel::linear(Vector::Zero(2), b); }

// A loss that reads the score as an index into fixed per-point values, so the
// mean losses of a set can be chosen by hand.
LossDescriptor lookup(std::vector<double> pos, std::vector<double> neg) {
  return {"lookup",
          [pos, neg](double t, Label y) {
            const auto i = static_cast<std::size_t>(t);
            return y == Label::positive ? pos[i] : neg[i];
          },
          0.0, true};
}

}  // namespace

TEST_CASE("constant zero model gives one half everywhere") {
  Gen gen(1);
  const auto sr = scaled_ramp_loss();
  for (int rep = 0; rep < 20; ++rep) {
    const double pi = gen.prior();
    const auto t = gen_gaussian_artificial(gen.count(1, 30), gen.count(1, 30), gen.count(1, 30), pi, gen.count(0, 1000));
    const auto g = constant(0.0);
    CHECK(risk_pn(g, t.x_pos, t.x_neg, pi, sr) == 0.5);
    CHECK(risk_pu(g, t.x_pos, t.x_unl, pi, sr) == doctest::Approx(0.5).epsilon(1e-15));
    CHECK(risk_nu(g, t.x_unl, t.x_neg, pi, sr) == doctest::Approx(0.5).epsilon(1e-15));
  }
}

TEST_CASE("saturated models") {
  const auto sr = scaled_ramp_loss();
  const double pi = 0.3;
  const auto t = gen_gaussian_artificial(10, 10, 40, pi, 2);
  CHECK(risk_pu(constant(3.0), t.x_pos, t.x_unl, pi, sr) == doctest::Approx(1.0 - pi));
  CHECK(risk_nu(constant(-3.0), t.x_unl, t.x_neg, pi, sr) == doctest::Approx(pi));

  // Perfect separation: +3 on positives, -3 on negatives.
  Matrix xp = Matrix::Constant(5, 1, 1.0), xn = Matrix::Constant(5, 1, -1.0);
  const auto g = DecisionModel::linear(Vector::Constant(1, 3.0), 0.0);
  CHECK(risk_pn(g, xp, xn, 0.5, sr) == 0.0);
}

TEST_CASE("convex combination by hand") {
  // mean positive loss 0.2, mean negative loss 0.6, pi = 0.3 -> 0.3*0.2 + 0.7*0.6 = 0.48
  const auto loss = lookup({0.1, 0.3}, {0.5, 0.7});
  Matrix xp(2, 1), xn(2, 1);
  xp << 0, 1;
  xn << 0, 1;
  const auto g = DecisionModel::linear(Vector::Ones(1), 0.0);
  CHECK(risk_pn(g, xp, xn, 0.3, loss) == doctest::Approx(0.48).epsilon(1e-15));
}

TEST_CASE("non-symmetric losses are refused by PU and NU") {
  const auto t = gen_gaussian_artificial(5, 5, 5, 0.5, 3);
  const auto g = constant(0.0);
  CHECK_THROWS_AS(risk_pu(g, t.x_pos, t.x_unl, 0.5, hinge()), std::invalid_argument);
  CHECK_THROWS_AS(risk_nu(g, t.x_unl, t.x_neg, 0.5, hinge()), std::invalid_argument);
  CHECK_NOTHROW(risk_pn(g, t.x_pos, t.x_neg, 0.5, hinge()));
  CHECK_THROWS_AS(risk_pn(g, Matrix(0, 2), t.x_neg, 0.5, scaled_ramp_loss()), std::invalid_argument);
}

TEST_CASE("dispatch and score-level forms agree") {
  const auto t = gen_gaussian_artificial(12, 8, 30, 0.4, 4);
  const auto g = DecisionModel::linear((Vector(2) << 0.7, -0.2).finished(), 0.1);
  const auto sr = scaled_ramp_loss();
  CHECK(risk_estimate(Mode::pn, g, t, sr) == risk_pn(g, t.x_pos, t.x_neg, 0.4, sr));
  CHECK(risk_estimate(Mode::pu, g, t, sr) == risk_pu(g, t.x_pos, t.x_unl, 0.4, sr));
  CHECK(risk_estimate(Mode::nu, g, t, sr) == risk_nu(g, t.x_unl, t.x_neg, 0.4, sr));
  CHECK(risk_from_scores(Mode::pu, g.predict_rows(t.x_pos), g.predict_rows(t.x_unl), 0.4, sr) ==
        risk_pu(g, t.x_pos, t.x_unl, 0.4, sr));
}

TEST_CASE("estimates lie in the declared ranges") {
  Gen gen(5);
  for (int rep = 0; rep < 200; ++rep) {
    const double pi = gen.prior();
    const auto t = gen_gaussian_artificial(gen.count(1, 20), gen.count(1, 20), gen.count(1, 20), pi, gen.count(0, 1u << 30));
    const auto g = DecisionModel::linear((Vector(2) << gen.normal(0, 3), gen.normal(0, 3)).finished(), gen.normal());
    for (const auto& loss : {scaled_ramp_loss(), zero_one_loss()}) {
      for (Mode m : kAllModes) CHECK(make_report(m, g, t, loss).within_declared_range());
    }
  }
}

TEST_CASE("true risk") {
  LabeledPool pool;
  pool.features = Matrix::Zero(4, 2);
  pool.labels = {Label::positive, Label::positive, Label::negative, Label::negative};
  CHECK(risk_true(constant(3.0), pool, zero_one_loss()) == 0.5);
  CHECK(risk_true(constant(0.0), pool, zero_one_loss()) == 0.5);

  // Bayes rule for the artificial task is sign(x1 + x2).
  const auto bayes = DecisionModel::linear(Vector::Ones(2), 0.0);
  const double err = risk_true_mc(bayes, 1'000'000, 0.5, 17, zero_one_loss());
  CHECK(std::abs(err - 0.158655) < 0.0012);
}

TEST_CASE("scaled ramp and zero-one disagree on the same model") {
  const auto t = gen_gaussian_artificial(30, 30, 0, 0.5, 6);
  const auto g = DecisionModel::linear(Vector::Ones(2), 0.0);
  CHECK(risk_pn(g, t.x_pos, t.x_neg, 0.5, scaled_ramp_loss()) != risk_pn(g, t.x_pos, t.x_neg, 0.5, zero_one_loss()));
}

TEST_CASE("PU spread shrinks like one over root n") {
  const auto g = DecisionModel::linear((Vector(2) << 0.8, 0.3).finished(), -0.1);
  const auto sr = scaled_ramp_loss();
  auto spread = [&](std::size_t n, std::uint64_t seed) {
    const int reps = 4000;
    std::vector<double> v;
    for (int r = 0; r < reps; ++r) {
      const auto t = gen_gaussian_artificial(n, 0, n, 0.5, seed + static_cast<std::uint64_t>(r));
      v.push_back(risk_pu(g, t.x_pos, t.x_unl, 0.5, sr));
    }
    double m = 0.0;
    for (double x : v) m += x;
    m /= reps;
    double s = 0.0;
    for (double x : v) s += (x - m) * (x - m);
    return std::sqrt(s / (reps - 1));
  };
  const double ratio = spread(100, 1'000'000) / spread(50, 0);
  CHECK(std::abs(ratio - 1.0 / std::sqrt(2.0)) < 0.2 / std::sqrt(2.0));
}
