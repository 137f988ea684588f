#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "pnu/types.hpp"

namespace pnu {

/// Independent positive, negative and unlabeled samples plus the known class
/// prior. Any of the three sets may be empty; trainers check what they need.
struct SampleTriple {
  Matrix x_pos;
  Matrix x_neg;
  Matrix x_unl;
  double pi = 0.5;

  std::size_t dim() const;
  std::size_t n_pos() const { return static_cast<std::size_t>(x_pos.rows()); }
  std::size_t n_neg() const { return static_cast<std::size_t>(x_neg.rows()); }
  std::size_t n_unl() const { return static_cast<std::size_t>(x_unl.rows()); }

  /// Throws std::invalid_argument unless pi is in (0, 1) and all non-empty
  /// sets share one column count.
  void validate() const;
};

/// 64-bit content hash over priors, shapes and every coordinate.
std::uint64_t fingerprint(const SampleTriple& triple);

struct LabeledPool {
  Matrix features;
  std::vector<Label> labels;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(features.cols()); }
  std::size_t positive_count() const;
  double positive_ratio() const;

  /// Labels match rows, at least two rows and both classes present.
  void validate() const;
};

/// Unlabeled draws together with the latent labels used to generate them.
struct ArtificialDraw {
  SampleTriple triple;
  std::vector<Label> latent_unl;
};

/// Two unit-covariance Gaussians in R^2 with means +-(1,1)/sqrt(2).
ArtificialDraw draw_gaussian_artificial(std::size_t n_pos, std::size_t n_neg, std::size_t n_unl,
                                        double pi, std::uint64_t seed);

/// Same as draw_gaussian_artificial with the latent labels discarded.
SampleTriple gen_gaussian_artificial(std::size_t n_pos, std::size_t n_neg, std::size_t n_unl,
                                     double pi, std::uint64_t seed);

/// n labeled points from the joint p(x, y) of the artificial task.
LabeledPool gen_gaussian_labeled(std::size_t n, double pi, std::uint64_t seed);

/// Mean of each artificial class-conditional Gaussian.
Vector artificial_class_mean(Label y);

/// Reads a comma-separated file with a header row. `label_column` is either a
/// header name or a 0-based column index. The label column must hold exactly
/// two distinct values: numeric labels map the smaller value to -1, other
/// labels map the lexicographically smaller one to -1. Features are
/// standardized per column with the pool mean and population standard
/// deviation (constant columns are only centered).
LabeledPool load_csv(const std::filesystem::path& path, const std::string& label_column);

struct PoolSplit {
  SampleTriple triple;
  LabeledPool holdout;
  /// Pool row indices backing each set, in the order they appear.
  std::vector<std::size_t> pos_rows;
  std::vector<std::size_t> neg_rows;
  std::vector<std::size_t> unl_rows;
  std::vector<std::size_t> holdout_rows;
};

inline constexpr std::size_t kMaxHoldout = 10'000;

/// Draws P and N rows without replacement from the matching class. Each
/// unlabeled row flips a pi-coin for its latent class and then takes an
/// unused row of that class. Every remaining row goes to the holdout, which
/// is uniformly subsampled down to kMaxHoldout when larger.
PoolSplit sample_triple_from_pool(const LabeledPool& pool, std::size_t n_pos, std::size_t n_neg,
                                  std::size_t n_unl, double pi, std::uint64_t seed);

}  // namespace pnu
