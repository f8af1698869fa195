#pragma once
#include <vector>

#include "samplenet/config.hpp"
#include "samplenet/ops.hpp"

namespace samplenet {

// Weighted empirical measure over K points in R^d. Weights default to 1/K
// and are validated to be nonnegative with unit total mass.
struct PointCloud {
  Tensor points;                 // [K,d]
  std::vector<double> weights;   // length K, sums to 1

  explicit PointCloud(Tensor pts);
  PointCloud(Tensor pts, std::vector<double> w);

  int64_t size() const { return points.dim(0); }
  int64_t dim() const { return points.dim(1); }
};

struct SinkhornOptions {
  double epsilon = 0.0025;
  int64_t max_iters = 200;
  double tol = 1e-6;  // max potential change per iteration; 0 runs max_iters

  static SinkhornOptions from(const LossConfig& cfg) {
    return SinkhornOptions{cfg.epsilon, cfg.sinkhorn_iters, cfg.sinkhorn_tol};
  }
};

struct SinkhornResult {
  Tensor value;            // scalar <f, a.weights> + <g, b.weights>; taped when requested
  std::vector<double> f;   // potential on a
  std::vector<double> g;   // potential on b
  int64_t iterations = 0;
  bool converged = false;
};

// Per-dimension normalization of one input's M samples. Uniform prior maps
// min/max to [0,1]; gaussian prior standardizes with the population std.
// Statistics come from the same M samples and stay on the tape, so gradients
// flow through them. A dimension whose range/std is below 1e-8 is flagged
// degenerate and mapped to zeros (a floored division would inject an
// arbitrary scale).
struct NormalizeResult {
  Tensor normalized;              // [M,d]
  std::vector<bool> degenerate;   // per dimension

  bool fully_degenerate() const {
    for (bool b : degenerate)
      if (!b) return false;
    return true;
  }
};
NormalizeResult normalize_samples(const Tensor& samples /*[M,d]*/, Prior prior,
                                  Tape* tape = nullptr);

// K fresh draws from U((0,1)^d) or N(0, I), uniform weights.
PointCloud sample_prior(Prior prior, int64_t K, int64_t d, Rng& rng);

// Entropy-regularized transport cost with ground cost C(x,y) = 0.5 ||x-y||^2,
// solved by simultaneous averaged log-domain updates:
//   f <- (f - eps * LSE_j(log q_j + (g_j - C_ij)/eps)) / 2   (and symmetrically g)
// until the max potential change drops below tol. The value is the dual
// objective at the final potentials. When taped, the gradient is the exact
// derivative of the executed (unrolled) iterations with respect to both point
// sets.
SinkhornResult entropic_ot(const PointCloud& a, const PointCloud& b,
                           const SinkhornOptions& opt, Tape* tape = nullptr);

struct SinkhornDiagnostics {
  int64_t solves = 0;
  int64_t nonconverged = 0;
};

// Debiased divergence S = W(a,b) - (W(a,a) + W(b,b)) / 2; zero at a = b,
// nonnegative at convergence, symmetric.
Tensor sinkhorn_divergence(const PointCloud& a, const PointCloud& b,
                           const SinkhornOptions& opt, Tape* tape = nullptr,
                           SinkhornDiagnostics* diag = nullptr);

struct MinibatchSinkhornStats {
  int64_t degenerate_skipped = 0;
  int64_t nonconverged = 0;
};

// Regularization loss: for each input n and repetition l, subsample K of the
// M predicted samples without replacement, normalize them, draw K fresh prior
// points, and accumulate the divergence; average with 1/(N*L). Inputs whose
// subset is degenerate in every dimension are skipped and counted.
Tensor minibatch_sinkhorn(const Tensor& samples /*[N,M,d]*/, const LossConfig& cfg,
                          Rng& rng, Tape* tape = nullptr,
                          MinibatchSinkhornStats* stats = nullptr);

}  // namespace samplenet
