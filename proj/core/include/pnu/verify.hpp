#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace pnu {

struct CheckOutcome {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct VerifyOptions {
  std::uint64_t seed = 2016;
  std::size_t unbiased_resamples = 2000;
  std::size_t truth_points = 200'000;
  std::size_t comparator_cases = 10'000;
};

/// Invariant suite behind `pnu verify`: estimator unbiasedness by Monte Carlo,
/// the calibration grid certificate, comparator equivalence, alpha* reciprocity,
/// monotonicity of the comparators and the Rademacher bound.
std::vector<CheckOutcome> run_invariant_suite(const VerifyOptions& options);

}  // namespace pnu
