#include "doctest.h"

#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

#include <nlohmann/json.hpp>

#include "pnu/harness.hpp"

using namespace pnu;
namespace fs = std::filesystem;

namespace {

std::size_t count_lines(const std::string& s) {
  std::size_t n = 0;
  for (char c : s) n += c == '\n';
  return n;
}

ExperimentGrid small_grid() {
  ExperimentGrid g;
  g.values = {10, 20, 40};
  g.trials = 3;
  g.test_size = 2000;
  g.seed = 5;
  g.threads = 2;
  return g;
}

TrainConfig quick() {
  TrainConfig c;
  c.restarts = 1;
  c.inner_max_iter = 300;
  return c;
}

}  // namespace

TEST_CASE("empty table is a header-only CSV") {
  CHECK(table_to_csv({}) == "sweep_value,mode,mean_error,std_error,alpha_pu_pn,alpha_nu_pn\n");
}

TEST_CASE("csv and json output") {
  ResultTable t;
  for (int i = 0; i < 10; ++i)
    for (Mode m : kAllModes) t.rows.push_back({10.0 * (i + 1), m, 0.123456789 + i, 1.0 / 3.0, 0.7805, 4.342});
  const std::string csv = table_to_csv(t);
  CHECK(count_lines(csv) == 31);
  CHECK(csv.find("10,PN,0.123457,0.333333,0.7805,4.342\n") != std::string::npos);

  CHECK(table_from_json(table_to_json(t)) == t);
  CHECK(table_from_json(nlohmann::json::parse(table_to_json(t).dump())) == t);

  const fs::path path = fs::path(PNU_TEST_TMP) / "table.json";
  emit(t, TableFormat::json, path);
  std::ifstream in(path);
  CHECK(table_from_json(nlohmann::json::parse(in)) == t);

  const fs::path cpath = fs::path(PNU_TEST_TMP) / "table.csv";
  emit(t, TableFormat::csv, cpath);
  std::stringstream ss;
  ss << std::ifstream(cpath).rdbuf();
  CHECK(ss.str() == csv);

  CHECK_THROWS_AS(emit(t, TableFormat::csv, fs::path(PNU_TEST_TMP) / "missing-dir" / "x.csv"), std::runtime_error);
  CHECK(table_format_from_string("json") == TableFormat::json);
  CHECK_THROWS(table_format_from_string("xml"));
}

TEST_CASE("mean and standard error") {
  const auto [m, se] = mean_and_std_error({1.0, 2.0, 3.0, 4.0});
  CHECK(m == 2.5);
  CHECK(se == doctest::Approx(std::sqrt(5.0 / 3.0) / 2.0));
  CHECK(mean_and_std_error({0.3}).second == 0.0);
}

TEST_CASE("sweep shape, determinism and error bars") {
  const auto grid = small_grid();
  const auto a = run_sweep(grid, quick());
  REQUIRE(a.table.rows.size() == 9);
  CHECK(a.training_runs == 27);
  CHECK(a.max_objective_increase <= 1e-12);

  for (std::size_t p = 0; p < 3; ++p) {
    for (std::size_t k = 0; k < 3; ++k) {
      const auto& row = a.table.rows[p * 3 + k];
      CHECK(row.sweep_value == grid.values[p]);
      CHECK(row.mode == kAllModes[k]);
      const auto [m, se] = mean_and_std_error(a.trial_errors[p][k]);
      CHECK(row.mean_error == m);
      CHECK(row.std_error == se);
      CHECK(a.trial_errors[p][k].size() == 3);
    }
  }

  auto single = grid;
  single.threads = 1;
  const auto b = run_sweep(single, quick());
  CHECK(a.table == b.table);

  auto other = grid;
  other.seed = 6;
  CHECK_FALSE(run_sweep(other, quick()).table == a.table);
}

TEST_CASE("alpha columns follow the comparator") {
  auto grid = small_grid();
  grid.sweep = SweepKind::vary_pi;
  grid.values = {0.2, 0.5, 0.8};
  grid.trials = 1;
  const auto r = run_sweep(grid, quick());
  double prev_pu = 0.0, prev_nu = INFINITY;
  for (std::size_t p = 0; p < 3; ++p) {
    const auto& row = r.table.rows[p * 3];
    CHECK(row.alpha_pu_pn > prev_pu);
    CHECK(row.alpha_nu_pn < prev_nu);
    prev_pu = row.alpha_pu_pn;
    prev_nu = row.alpha_nu_pn;
  }
}

TEST_CASE("grid validation") {
  auto g = small_grid();
  g.values = {20, 10};
  CHECK_THROWS(run_sweep(g, quick()));
  g = small_grid();
  g.trials = 0;
  CHECK_THROWS(run_sweep(g, quick()));
  g = small_grid();
  g.values.clear();
  CHECK_THROWS(run_sweep(g, quick()));
}

TEST_CASE("csv sweep with cross validation") {
  const fs::path path = fs::path(PNU_TEST_TMP) / "pool.csv";
  {
    const auto pool = gen_gaussian_labeled(400, 0.5, 3);
    std::ofstream out(path);
    out << "f1,f2,label\n";
    for (std::size_t i = 0; i < pool.size(); ++i) {
      out << pool.features(static_cast<Eigen::Index>(i), 0) << "," << pool.features(static_cast<Eigen::Index>(i), 1)
          << "," << (pool.labels[i] == Label::positive ? "yes" : "no") << "\n";
    }
  }
  ExperimentGrid g;
  g.values = {20};
  g.n_pos = 10;
  g.n_neg = 10;
  g.trials = 1;
  g.data.csv = path;
  CvConfig cv;
  cv.folds = 2;
  cv.lambda_grid = {1e-2};
  cv.width_grid = {1.0};
  const auto r = run_sweep(g, quick(), cv);
  REQUIRE(r.table.rows.size() == 3);
  for (const auto& row : r.table.rows) CHECK(row.mean_error < 0.5);
}

TEST_CASE("errors carry sweep context") {
  const fs::path path = fs::path(PNU_TEST_TMP) / "few_positives.csv";
  {
    std::ofstream out(path);
    out << "f,label\n";
    for (int i = 0; i < 40; ++i) out << i << "," << (i < 4 ? 1 : 0) << "\n";
  }
  ExperimentGrid g;
  g.values = {10};
  g.trials = 1;
  g.n_pos = 8;
  g.data.csv = path;
  try {
    run_sweep(g, quick());
    FAIL("expected an error");
  } catch (const std::exception& e) {
    const std::string what = e.what();
    CHECK(what.find("trial") != std::string::npos);
    CHECK(what.find("positive") != std::string::npos);
  }
}

TEST_CASE("advise") {
  auto doc = advise(0.5, 45, 5, UnlabeledSize::finite(100));
  CHECK(doc["alpha_pu_pn"].get<double>() == doctest::Approx(0.7805).epsilon(1e-4));
  CHECK(doc["alpha_star"]["pu"].get<double>() == doctest::Approx(1.0 / 3.0));
  CHECK(doc["recommendation_mode"] == "PU");
  CHECK(doc["pu_bound_tighter"] == true);

  doc = advise(0.5, 5, 45, UnlabeledSize::finite(100));
  CHECK(doc["recommendation_mode"] == "NU");
  CHECK(doc["alpha_nu_pn"].get<double>() == doctest::Approx(0.7805).epsilon(1e-4));

  doc = advise(0.25, 1, 9, UnlabeledSize::finite(100));
  CHECK(doc["alpha_star"]["verdict"] == "degenerate_tie");
  CHECK(doc["recommendation"].get<std::string>().find("degenerate tie") != std::string::npos);

  doc = advise(0.5, 45, 5, UnlabeledSize::infinite());
  CHECK(doc["n_unl"] == "infinity");
  CHECK(doc["bounds"]["pu"].get<double>() > 0.0);
}
