#pragma once
#include <vector>

#include "samplenet/config.hpp"
#include "samplenet/ops.hpp"

namespace samplenet {

// Energy score of an empirical predictive distribution against point targets:
//   mean_n [ (1/M) sum_i ||yhat_i - y|| - 1/(2 M^2) sum_{i,j} ||yhat_i - yhat_j|| ].
// The double sum keeps the zero i=j terms; this makes the K=M minibatch
// identity below exact.
double energy_score(const Tensor& samples /*[N,M,d]*/, const Tensor& targets /*[N,d]*/);

// Subsampled estimator: for each input n and repetition l, score a size-K
// subset drawn without replacement, then average with 1/(N*L). K=M and L=1
// reproduce energy_score exactly (the full set is the only subset).
Tensor minibatch_energy_score(const Tensor& samples, const Tensor& targets,
                              int64_t K, int64_t L, Rng& rng, Tape* tape = nullptr);

// Same estimator with caller-chosen subsets (subsets[n][l] lists sample
// indices); the rng overload draws them. Exposed so tests can enumerate
// every subset exhaustively.
Tensor energy_score_over_subsets(
    const Tensor& samples, const Tensor& targets,
    const std::vector<std::vector<std::vector<int64_t>>>& subsets,
    Tape* tape = nullptr);

// Factored-Gaussian negative log-likelihood:
//   mean_n sum_dims [ 0.5 log(2 pi var) + (y - mean)^2 / (2 var) ].
double gaussian_nll(const Tensor& mean, const Tensor& var, const Tensor& targets);

// beta-weighted NLL training loss. Each per-example, per-dimension NLL term
// is scaled by var^beta with the weight detached from the graph, so no
// gradient flows through the weighting path. beta = 0 is the plain NLL.
Tensor beta_nll(const Tensor& mean, const Tensor& var, const Tensor& targets,
                double beta, Tape* tape = nullptr);

double rmse(const Tensor& predictions, const Tensor& targets);

// Without-replacement index subset of size k from [0, m), partial
// Fisher-Yates on the given stream.
std::vector<int64_t> sample_subset(Rng& rng, int64_t m, int64_t k);

}  // namespace samplenet
