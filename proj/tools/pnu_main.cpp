// pnu: PN / PU / NU experiment runner and estimation-error comparator.

#include <fstream>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "pnu/bounds.hpp"
#include "pnu/harness.hpp"
#include "pnu/losses.hpp"
#include "pnu/verify.hpp"

namespace {

struct SweepOptions {
  std::optional<double> pi;
  std::optional<std::size_t> n_pos;
  std::optional<std::size_t> n_neg;
  std::optional<std::size_t> n_unl;
  std::optional<std::size_t> trials;
  std::optional<std::size_t> test_size;
  std::vector<double> values;
  std::uint64_t seed = 0;
  std::string data;
  std::string label_col = "label";
  std::string out;
  std::string format = "csv";
  std::string config;
  std::size_t threads = 0;
  bool full_scale = false;
  bool quiet = false;
};

void add_sweep_flags(CLI::App* cmd, SweepOptions& o) {
  cmd->add_option("--pi", o.pi, "Class prior (fixed when sweeping n_u)");
  cmd->add_option("--n-pos", o.n_pos, "Number of positive training points");
  cmd->add_option("--n-neg", o.n_neg, "Number of negative training points");
  cmd->add_option("--n-unl", o.n_unl, "Number of unlabeled points (fixed when sweeping pi)");
  cmd->add_option("--values", o.values, "Sweep values (strictly increasing)")->delimiter(',');
  cmd->add_option("--trials", o.trials, "Random samplings per sweep value");
  cmd->add_option("--test-size", o.test_size, "Artificial test points per trial");
  cmd->add_option("--seed", o.seed, "Master seed");
  cmd->add_option("--data", o.data, "Benchmark CSV (header row, comma separated)");
  cmd->add_option("--label-col", o.label_col, "Label column name or 0-based index");
  cmd->add_option("--out", o.out, "Output path (stdout when omitted)");
  cmd->add_option("--format", o.format, "csv or json")->check(CLI::IsMember({"csv", "json"}));
  cmd->add_option("--config", o.config, "JSON file with \"train\" and \"cv\" sections");
  cmd->add_option("--threads", o.threads, "Worker threads (0 = all cores)");
  cmd->add_flag("--full-scale", o.full_scale, "100 trials and 10^6 test points");
  cmd->add_flag("--quiet", o.quiet, "No progress output on stderr");
}

std::vector<double> default_values(pnu::SweepKind kind, bool artificial) {
  if (kind == pnu::SweepKind::vary_pi) return pnu::uniform_grid(0.05, 0.95, 0.05);
  if (artificial) return {5, 10, 20, 30, 45, 60, 80, 100, 150, 200};
  return {10, 25, 50, 100, 150, 200, 300};
}

int run_sweep_command(pnu::SweepKind kind, const SweepOptions& o) {
  pnu::ExperimentGrid grid;
  grid.sweep = kind;
  if (!o.data.empty()) grid.data.csv = o.data;
  grid.data.label_column = o.label_col;
  const bool artificial = grid.data.is_artificial();

  // Artificial defaults follow the n+=45, n-=5 setup; benchmarks use n+=25, n-=5, n_u=200.
  grid.n_pos = o.n_pos.value_or(artificial ? 45 : 25);
  grid.n_neg = o.n_neg.value_or(5);
  grid.n_unl = o.n_unl.value_or(artificial ? 100 : 200);
  grid.pi = o.pi.value_or(0.5);
  grid.values = o.values.empty() ? default_values(kind, artificial) : o.values;
  grid.trials = o.trials.value_or(o.full_scale ? 100 : 50);
  grid.test_size = o.test_size.value_or(o.full_scale ? 1'000'000 : 100'000);
  grid.seed = o.seed;
  grid.threads = o.threads;

  pnu::TrainConfig train;
  std::optional<pnu::CvConfig> cv;
  if (!o.config.empty()) {
    std::ifstream in(o.config);
    if (!in) throw std::runtime_error("cannot open config " + o.config);
    const auto doc = nlohmann::json::parse(in);
    if (doc.contains("train")) train = pnu::train_config_from_json(doc.at("train"));
    if (doc.contains("cv")) cv = pnu::cv_config_from_json(doc.at("cv"));
  }

  pnu::ProgressFn progress;
  if (!o.quiet) {
    progress = [](std::size_t done, std::size_t total) {
      if (done == total || done % 10 == 0) std::cerr << "\r" << done << "/" << total << " trials" << std::flush;
      if (done == total) std::cerr << "\n";
    };
  }
  const pnu::SweepResult result = pnu::run_sweep(grid, train, cv, progress);

  const auto format = pnu::table_format_from_string(o.format);
  if (!o.out.empty()) {
    pnu::emit(result.table, format, o.out);
  } else if (format == pnu::TableFormat::csv) {
    std::cout << pnu::table_to_csv(result.table);
  } else {
    std::cout << pnu::table_to_json(result.table).dump(2) << '\n';
  }
  return 0;
}

pnu::UnlabeledSize parse_unlabeled(const std::string& text) {
  if (text == "inf" || text == "infinity") return pnu::UnlabeledSize::infinite();
  std::size_t used = 0;
  const unsigned long long n = std::stoull(text, &used);
  if (used != text.size()) throw std::invalid_argument("--n-unl expects a count or 'inf'");
  return pnu::UnlabeledSize::finite(n);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PN / PU / NU learning: unbiased risk minimization and estimation-error comparators"};
  app.require_subcommand(1);

  SweepOptions nu_opts, pi_opts;
  auto* sweep_nu = app.add_subcommand("sweep-nu", "Vary the unlabeled sample size");
  add_sweep_flags(sweep_nu, nu_opts);
  auto* sweep_pi = app.add_subcommand("sweep-pi", "Vary the class prior");
  add_sweep_flags(sweep_pi, pi_opts);

  double adv_pi = 0.5;
  std::uint64_t adv_pos = 0, adv_neg = 0;
  std::string adv_unl;
  pnu::BoundParams bound_params;
  auto* advise = app.add_subcommand("advise", "Compare estimation-error bounds for (pi, n+, n-, n_u)");
  advise->add_option("--pi", adv_pi, "Class prior")->required();
  advise->add_option("--n-pos", adv_pos, "Positive sample size")->required();
  advise->add_option("--n-neg", adv_neg, "Negative sample size")->required();
  advise->add_option("--n-unl", adv_unl, "Unlabeled sample size or 'inf'")->required();
  advise->add_option("--delta", bound_params.delta, "Confidence parameter of the bounds");
  advise->add_option("--complexity", bound_params.complexity_const, "Rademacher constant C_G");

  pnu::VerifyOptions verify_opts;
  auto* verify = app.add_subcommand("verify", "Run the invariant suites");
  verify->add_option("--seed", verify_opts.seed, "Seed for the Monte-Carlo checks");
  verify->add_option("--resamples", verify_opts.unbiased_resamples, "Resamples for the unbiasedness check");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep_nu) return run_sweep_command(pnu::SweepKind::vary_nu, nu_opts);
    if (*sweep_pi) return run_sweep_command(pnu::SweepKind::vary_pi, pi_opts);
    if (*advise) {
      std::cout << pnu::advise(adv_pi, adv_pos, adv_neg, parse_unlabeled(adv_unl), bound_params).dump(2) << '\n';
      return 0;
    }
    if (*verify) {
      bool ok = true;
      for (const auto& c : pnu::run_invariant_suite(verify_opts)) {
        std::cout << (c.pass ? "PASS " : "FAIL ") << c.name << ": " << c.detail << '\n';
        ok = ok && c.pass;
      }
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "pnu: " << e.what() << '\n';
    return 2;
  }
  return 0;
}
