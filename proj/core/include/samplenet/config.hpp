#pragma once
#include <cstdint>

#include "samplenet/errors.hpp"

namespace samplenet {

// Reference distribution that normalized predicted samples are pulled toward.
enum class Prior { Uniform, Gaussian };

// Hyperparameters of the sample-based training loss: M predicted samples,
// subsets of size K drawn L times per input, regularization strength eta,
// and the entropic-transport solver controls.
struct LossConfig {
  int64_t M = 100;
  int64_t K = 100;
  int64_t L = 1;
  double eta = 0.0;
  Prior prior = Prior::Gaussian;
  double epsilon = 0.0025;
  int64_t sinkhorn_iters = 200;
  double sinkhorn_tol = 1e-6;

  void validate() const {
    if (M < 1) throw ConfigError("LossConfig: M must be >= 1");
    if (K < 1 || K > M) throw ConfigError("LossConfig: need 1 <= K <= M");
    if (L < 1) throw ConfigError("LossConfig: L must be >= 1");
    if (eta < 0.0) throw ConfigError("LossConfig: eta must be >= 0");
    if (epsilon <= 0.0) throw ConfigError("LossConfig: epsilon must be > 0");
    if (sinkhorn_iters < 1) throw ConfigError("LossConfig: sinkhorn_iters must be >= 1");
    if (sinkhorn_tol < 0.0) throw ConfigError("LossConfig: sinkhorn_tol must be >= 0");
  }
};

struct BaselineConfig {
  double beta = 0.0;

  void validate() const {
    if (beta < 0.0 || beta > 1.0) throw ConfigError("BaselineConfig: beta must be in [0,1]");
  }
};

}  // namespace samplenet
