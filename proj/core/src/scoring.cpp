#include "samplenet/scoring.hpp"

#include <cmath>
#include <numeric>

namespace samplenet {
namespace {

constexpr double kTwoPi = 6.28318530717958647692;

void check_sample_shapes(const Tensor& samples, const Tensor& targets, const char* op) {
  if (samples.rank() != 3)
    throw ShapeError(std::string(op) + ": samples must be [N,M,d], got " + shape_str(samples.shape()));
  if (targets.rank() != 2)
    throw ShapeError(std::string(op) + ": targets must be [N,d], got " + shape_str(targets.shape()));
  if (samples.dim(0) != targets.dim(0) || samples.dim(2) != targets.dim(1))
    throw ShapeError(std::string(op) + ": samples " + shape_str(samples.shape()) +
                     " vs targets " + shape_str(targets.shape()));
}

// Score of one subset against one target, as plain doubles.
double subset_score(const Tensor& samples, const Tensor& targets, int64_t n,
                    const std::vector<int64_t>& idx) {
  const int64_t M = samples.dim(1), d = samples.dim(2);
  const int64_t K = static_cast<int64_t>(idx.size());
  const double* s = samples.data() + n * M * d;
  const double* y = targets.data() + n * d;
  double term1 = 0.0;
  for (int64_t i : idx) {
    double sq = 0.0;
    for (int64_t c = 0; c < d; ++c) {
      const double t = s[i * d + c] - y[c];
      sq += t * t;
    }
    term1 += std::sqrt(sq);
  }
  double term2 = 0.0;
  for (int64_t a = 0; a < K; ++a)
    for (int64_t b = a + 1; b < K; ++b) {
      double sq = 0.0;
      for (int64_t c = 0; c < d; ++c) {
        const double t = s[idx[static_cast<size_t>(a)] * d + c] - s[idx[static_cast<size_t>(b)] * d + c];
        sq += t * t;
      }
      term2 += std::sqrt(sq);
    }
  term2 *= 2.0;  // ordered pairs
  const double Kd = static_cast<double>(K);
  return term1 / Kd - term2 / (2.0 * Kd * Kd);
}

}  // namespace

std::vector<int64_t> sample_subset(Rng& rng, int64_t m, int64_t k) {
  std::vector<int64_t> pool(static_cast<size_t>(m));
  std::iota(pool.begin(), pool.end(), int64_t{0});
  for (int64_t i = 0; i < k; ++i) {
    const int64_t j = i + static_cast<int64_t>(rng.below(static_cast<uint64_t>(m - i)));
    std::swap(pool[static_cast<size_t>(i)], pool[static_cast<size_t>(j)]);
  }
  pool.resize(static_cast<size_t>(k));
  return pool;
}

double energy_score(const Tensor& samples, const Tensor& targets) {
  check_sample_shapes(samples, targets, "energy_score");
  const int64_t N = samples.dim(0), M = samples.dim(1);
  std::vector<int64_t> all(static_cast<size_t>(M));
  std::iota(all.begin(), all.end(), int64_t{0});
  double total = 0.0;
  for (int64_t n = 0; n < N; ++n) total += subset_score(samples, targets, n, all);
  return total / static_cast<double>(N);
}

Tensor energy_score_over_subsets(
    const Tensor& samples, const Tensor& targets,
    const std::vector<std::vector<std::vector<int64_t>>>& subsets, Tape* tape) {
  check_sample_shapes(samples, targets, "energy_score_over_subsets");
  const int64_t N = samples.dim(0), M = samples.dim(1), d = samples.dim(2);
  if (static_cast<int64_t>(subsets.size()) != N)
    throw ConfigError("energy_score_over_subsets: need one subset list per input");
  const size_t L = subsets[0].size();
  for (const auto& per_n : subsets) {
    if (per_n.size() != L)
      throw ConfigError("energy_score_over_subsets: repetition counts differ across inputs");
    for (const auto& idx : per_n) {
      if (idx.empty() || static_cast<int64_t>(idx.size()) > M)
        throw ConfigError("energy_score_over_subsets: subset size must be in [1, M]");
      for (int64_t i : idx)
        if (i < 0 || i >= M) throw ConfigError("energy_score_over_subsets: index out of range");
    }
  }

  const bool tracked = tape && tape->tracks(samples);
  if (!tracked) {
    double total = 0.0;
    for (int64_t n = 0; n < N; ++n)
      for (const auto& idx : subsets[static_cast<size_t>(n)])
        total += subset_score(samples, targets, n, idx);
    return Tensor::scalar(total / static_cast<double>(N * static_cast<int64_t>(L)));
  }

  // One fused node for the whole batch; backward redistributes unit
  // directions. Far fewer nodes (and no MxM buffers) than composing from
  // pairwise_distance per input.
  double total = 0.0;
  for (int64_t n = 0; n < N; ++n)
    for (const auto& idx : subsets[static_cast<size_t>(n)])
      total += subset_score(samples, targets, n, idx);
  const double norm = 1.0 / static_cast<double>(N * static_cast<int64_t>(L));
  Tensor out = Tensor::scalar(total * norm);

  auto sd = samples.impl();
  auto td = targets.impl();
  auto od = out.impl();
  tape->record({sd}, od, [sd, td, od, subsets, N, M, d, norm] {
    const double g0 = ensure_grad(*od)[0];
    if (g0 == 0.0) return;
    auto& sg = ensure_grad(*sd);
    const double* sv = sd->values.data();
    const double* tv = td->values.data();
    for (int64_t n = 0; n < N; ++n) {
      const double* s = sv + n * M * d;
      const double* y = tv + n * d;
      double* gs = sg.data() + n * M * d;
      for (const auto& idx : subsets[static_cast<size_t>(n)]) {
        const double Kd = static_cast<double>(idx.size());
        const double w1 = g0 * norm / Kd;
        const double w2 = g0 * norm / (2.0 * Kd * Kd);
        for (int64_t i : idx) {
          double sq = 0.0;
          for (int64_t c = 0; c < d; ++c) {
            const double t = s[i * d + c] - y[c];
            sq += t * t;
          }
          const double dist = std::sqrt(sq);
          if (dist == 0.0) continue;
          for (int64_t c = 0; c < d; ++c)
            gs[i * d + c] += w1 * (s[i * d + c] - y[c]) / dist;
        }
        const int64_t K = static_cast<int64_t>(idx.size());
        for (int64_t a = 0; a < K; ++a)
          for (int64_t b = a + 1; b < K; ++b) {
            const int64_t i = idx[static_cast<size_t>(a)], j = idx[static_cast<size_t>(b)];
            double sq = 0.0;
            for (int64_t c = 0; c < d; ++c) {
              const double t = s[i * d + c] - s[j * d + c];
              sq += t * t;
            }
            const double dist = std::sqrt(sq);
            if (dist == 0.0) continue;
            const double w = 2.0 * w2 / dist;  // both orderings
            for (int64_t c = 0; c < d; ++c) {
              const double diff = s[i * d + c] - s[j * d + c];
              gs[i * d + c] -= w * diff;
              gs[j * d + c] += w * diff;
            }
          }
      }
    }
  });
  return out;
}

Tensor minibatch_energy_score(const Tensor& samples, const Tensor& targets,
                              int64_t K, int64_t L, Rng& rng, Tape* tape) {
  check_sample_shapes(samples, targets, "minibatch_energy_score");
  const int64_t N = samples.dim(0), M = samples.dim(1);
  if (K < 1 || K > M) throw ConfigError("minibatch_energy_score: need 1 <= K <= M");
  if (L < 1) throw ConfigError("minibatch_energy_score: need L >= 1");

  std::vector<std::vector<std::vector<int64_t>>> subsets(static_cast<size_t>(N));
  std::vector<int64_t> all;
  if (K == M) {
    all.resize(static_cast<size_t>(M));
    std::iota(all.begin(), all.end(), int64_t{0});
  }
  for (int64_t n = 0; n < N; ++n) {
    auto& per_n = subsets[static_cast<size_t>(n)];
    per_n.reserve(static_cast<size_t>(L));
    for (int64_t l = 0; l < L; ++l)
      per_n.push_back(K == M ? all : sample_subset(rng, M, K));
  }
  return energy_score_over_subsets(samples, targets, subsets, tape);
}

double gaussian_nll(const Tensor& mean, const Tensor& var, const Tensor& targets) {
  if (mean.shape() != var.shape() || mean.shape() != targets.shape())
    throw ShapeError("gaussian_nll: mean/var/targets shapes differ");
  const int64_t n_total = mean.numel();
  const int64_t N = mean.rank() >= 1 ? mean.dim(0) : 1;
  double total = 0.0;
  for (int64_t i = 0; i < n_total; ++i) {
    const double v = var.at(i);
    if (v <= 0.0) throw NumericError("gaussian_nll: variance must be positive");
    const double r = targets.at(i) - mean.at(i);
    total += 0.5 * std::log(kTwoPi * v) + r * r / (2.0 * v);
  }
  return total / static_cast<double>(N);
}

Tensor beta_nll(const Tensor& mean, const Tensor& var, const Tensor& targets,
                double beta, Tape* tape) {
  if (mean.shape() != var.shape() || mean.shape() != targets.shape())
    throw ShapeError("beta_nll: mean/var/targets shapes differ");
  if (beta < 0.0 || beta > 1.0) throw ConfigError("beta_nll: beta must be in [0,1]");
  for (int64_t i = 0; i < var.numel(); ++i)
    if (var.at(i) <= 0.0) throw NumericError("beta_nll: variance must be positive");

  // Detached weights: computed from values only, entering the graph as a
  // constant factor.
  Tensor weight(mean.shape());
  for (int64_t i = 0; i < var.numel(); ++i)
    weight.at(i) = beta == 0.0 ? 1.0 : std::pow(var.at(i), beta);

  const int64_t N = mean.dim(0);
  Tensor log_term = affine(log_op(affine(var, kTwoPi, 0.0, tape), tape), 0.5, 0.0, tape);
  Tensor resid = sub(targets, mean, tape);
  Tensor quad = mul(mul(resid, resid, tape), reciprocal(affine(var, 2.0, 0.0, tape), tape), tape);
  Tensor per_term = mul(add(log_term, quad, tape), weight, tape);
  return affine(sum(per_term, tape), 1.0 / static_cast<double>(N), 0.0, tape);
}

double rmse(const Tensor& predictions, const Tensor& targets) {
  if (predictions.shape() != targets.shape())
    throw ShapeError("rmse: predictions " + shape_str(predictions.shape()) +
                     " vs targets " + shape_str(targets.shape()));
  double total = 0.0;
  for (int64_t i = 0; i < predictions.numel(); ++i) {
    const double r = predictions.at(i) - targets.at(i);
    total += r * r;
  }
  return std::sqrt(total / static_cast<double>(predictions.numel()));
}

}  // namespace samplenet
