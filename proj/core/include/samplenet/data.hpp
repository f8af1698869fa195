#pragma once
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "samplenet/ops.hpp"

namespace samplenet {

struct WhiteningStats {
  std::vector<double> mean;      // per input dimension
  std::vector<double> stddev;    // population convention, floored at 1e-8
  std::vector<bool> degenerate;  // constant columns, whitened to zeros
};

struct Dataset {
  Tensor X;  // [N,c]
  Tensor Y;  // [N,d]
  std::vector<std::string> x_names;
  std::vector<std::string> y_names;
  std::optional<WhiteningStats> whitening;  // present iff X was whitened
  std::vector<int64_t> outlier_rows;        // synthetic-outlier bookkeeping

  int64_t n() const { return X.dim(0); }
  int64_t c() const { return X.dim(1); }
  int64_t d() const { return Y.dim(1); }
};

struct SplitSpec {
  double test_fraction = 0.2;
  int64_t n_splits = 1;
  uint64_t base_seed = 0;

  void validate() const;
};

// Noiseless curves behind the toy generators; exposed so tests can pin exact
// values and plots can draw ground truth.
double unimodal_curve(double x);          // x sin x
double unimodal_outlier_curve(double x);  // x + 7
double multimodal_branch1(double x);      // cos x - 5
double multimodal_branch2(double x);      // x + 5

// y = x sin x + e1 x + e2 with x ~ U[0,10] and e1, e2 ~ N(0, sigma^2) drawn
// independently per row. Optional outlier rows along y = x + 7 are appended
// and their indices recorded.
Dataset gen_unimodal_toy(int64_t n, Rng& rng, int64_t outliers = 0, double noise_sigma = 0.3);

// Each row follows one of two branches with probability 1/2:
//   y = cos x + e1 x + e2 - 5   or   y = (e1 + 1) x + e2 + 5.
Dataset gen_multimodal_toy(int64_t n, Rng& rng, double noise_sigma = 0.3);

// RFC-4180-style CSV with a mandatory header; all cells numeric. Target
// columns become Y in the order given, every other column becomes X in file
// order. Parse failures report the row and column.
Dataset load_csv(const std::string& path, const std::vector<std::string>& target_columns);
void write_csv(const std::string& path, const Dataset& data);

// Deterministic permutation from (base_seed, split_index); the test partition
// takes round(N * fraction) rows.
std::pair<Dataset, Dataset> split(const Dataset& data, const SplitSpec& spec, int64_t split_index);

// Standardize inputs with statistics from the train partition only; targets
// are untouched. Constant columns whiten to zero and are flagged.
struct WhitenResult {
  Dataset train;
  Dataset test;
  WhiteningStats stats;
};
WhitenResult whiten_inputs(const Dataset& train, const Dataset& test);

// Apply existing stats to new inputs (plot grids, extra eval data).
Tensor apply_whitening(const Tensor& X, const WhiteningStats& stats);

}  // namespace samplenet
