#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "pnu/bounds.hpp"
#include "pnu/training.hpp"

namespace pnu {

enum class SweepKind { vary_nu, vary_pi };

struct DataSource {
  std::optional<std::filesystem::path> csv;  // empty: artificial Gaussians
  std::string label_column = "label";

  bool is_artificial() const { return !csv.has_value(); }
};

struct ExperimentGrid {
  SweepKind sweep = SweepKind::vary_nu;
  std::vector<double> values;  // n_u values or priors, strictly increasing
  double pi = 0.5;             // used when sweeping n_u
  std::size_t n_unl = 100;     // used when sweeping pi
  std::size_t n_pos = 45;
  std::size_t n_neg = 5;
  std::size_t trials = 50;
  DataSource data;
  std::size_t test_size = 100'000;  // artificial source only
  std::uint64_t seed = 0;
  std::size_t threads = 0;  // 0: one per hardware thread

  void validate() const;
  double pi_at(double sweep_value) const { return sweep == SweepKind::vary_pi ? sweep_value : pi; }
  std::size_t n_unl_at(double sweep_value) const;
};

struct ResultRow {
  double sweep_value = 0.0;
  Mode mode = Mode::pn;
  double mean_error = 0.0;
  double std_error = 0.0;  // sample standard deviation / sqrt(trials)
  double alpha_pu_pn = 0.0;
  double alpha_nu_pn = 0.0;

  bool operator==(const ResultRow&) const = default;
};

struct ResultTable {
  std::vector<ResultRow> rows;

  bool operator==(const ResultTable&) const = default;
};

struct SweepResult {
  ResultTable table;
  /// trial_errors[point][mode index in kAllModes][trial]
  std::vector<std::array<std::vector<double>, 3>> trial_errors;
  std::size_t training_runs = 0;
  /// Largest outer-step objective increase over every CCCP run in the sweep.
  double max_objective_increase = -INFINITY;
};

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

/// For each sweep value and trial, draws one SampleTriple, trains PN, PU and
/// NU on that same triple and scores each with the zero-one loss on the
/// trial's evaluation set (a fresh artificial draw of test_size points, or
/// the pool split's holdout). Artificial sweeps train linear models at the
/// configured lambda; CSV sweeps train Gaussian kernel models with k-fold
/// selection of width and lambda per trial and mode. Trials run on a worker
/// pool; results do not depend on the thread count.
SweepResult run_sweep(const ExperimentGrid& grid, const TrainConfig& train_config,
                      const std::optional<CvConfig>& cv_config = std::nullopt, const ProgressFn& progress = {});

/// Mean and standard error over per-trial errors.
std::pair<double, double> mean_and_std_error(const std::vector<double>& errors);

enum class TableFormat { csv, json };
TableFormat table_format_from_string(const std::string& text);

/// Header `sweep_value,mode,mean_error,std_error,alpha_pu_pn,alpha_nu_pn`,
/// values printed with 6 significant digits.
std::string table_to_csv(const ResultTable& table);
/// {"columns": [...], "rows": [{...}, ...]} at full precision.
nlohmann::json table_to_json(const ResultTable& table);
ResultTable table_from_json(const nlohmann::json& doc);

/// Writes the table to `path`; throws std::runtime_error on I/O failure.
void emit(const ResultTable& table, TableFormat format, const std::filesystem::path& path);

/// Comparator report for (pi, n+, n-, nu): both alphas, the case-a alpha*
/// with its verdict, the bound values under `params`, and a recommendation.
nlohmann::json advise(double pi, std::uint64_t n_pos, std::uint64_t n_neg, UnlabeledSize n_unl,
                      const BoundParams& params = {});

}  // namespace pnu
