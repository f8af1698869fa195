#include "samplenet/summaries.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "samplenet/errors.hpp"

namespace samplenet {
namespace {

constexpr double kVarReportFloor = 1e-8;

struct Histogram {
  double lo = 0.0;
  double width = 0.0;
  std::vector<int64_t> counts;
};

Histogram build_histogram(std::span<const double> samples, int64_t bins) {
  if (bins < 1) throw ContractError("histogram: need at least one bin");
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  Histogram h;
  h.lo = *mn;
  h.width = (*mx - *mn) / static_cast<double>(bins);
  h.counts.assign(static_cast<size_t>(bins), 0);
  if (h.width == 0.0) {
    // All samples identical: one occupied bin.
    h.counts[0] = static_cast<int64_t>(samples.size());
    return h;
  }
  for (double v : samples) {
    auto b = static_cast<int64_t>((v - h.lo) / h.width);
    b = std::clamp<int64_t>(b, 0, bins - 1);  // right edge lands in the last bin
    ++h.counts[static_cast<size_t>(b)];
  }
  return h;
}

}  // namespace

Moments sample_moments(const Tensor& samples) {
  if (samples.rank() != 2) throw ShapeError("sample_moments: expected [M,d]");
  const int64_t M = samples.dim(0), d = samples.dim(1);
  if (M < 2) throw ContractError("sample_moments: need M >= 2");
  Moments out;
  out.mean.resize(static_cast<size_t>(d));
  out.var.resize(static_cast<size_t>(d));
  for (int64_t j = 0; j < d; ++j) {
    double mu = 0.0;
    for (int64_t i = 0; i < M; ++i) mu += samples.at2(i, j);
    mu /= static_cast<double>(M);
    double ss = 0.0;
    for (int64_t i = 0; i < M; ++i) {
      const double t = samples.at2(i, j) - mu;
      ss += t * t;
    }
    out.mean[static_cast<size_t>(j)] = mu;
    out.var[static_cast<size_t>(j)] = std::max(ss / static_cast<double>(M - 1), kVarReportFloor);
  }
  return out;
}

PerInputMoments per_input_moments(const Tensor& samples) {
  if (samples.rank() != 3) throw ShapeError("per_input_moments: expected [N,M,d]");
  const int64_t N = samples.dim(0), M = samples.dim(1), d = samples.dim(2);
  if (M < 2) throw ContractError("per_input_moments: need M >= 2");
  PerInputMoments out{Tensor(Shape{N, d}), Tensor(Shape{N, d})};
  for (int64_t n = 0; n < N; ++n)
    for (int64_t j = 0; j < d; ++j) {
      double mu = 0.0;
      for (int64_t i = 0; i < M; ++i) mu += samples.at3(n, i, j);
      mu /= static_cast<double>(M);
      double ss = 0.0;
      for (int64_t i = 0; i < M; ++i) {
        const double t = samples.at3(n, i, j) - mu;
        ss += t * t;
      }
      out.mean.at2(n, j) = mu;
      out.var.at2(n, j) = std::max(ss / static_cast<double>(M - 1), kVarReportFloor);
    }
  return out;
}

double empirical_quantile(std::span<const double> sorted, double p) {
  const int64_t m = static_cast<int64_t>(sorted.size());
  if (m == 0) throw ContractError("empirical_quantile: empty sample");
  if (m == 1) return sorted[0];
  const double h = p * static_cast<double>(m - 1);
  const auto lo = static_cast<int64_t>(std::floor(h));
  const auto hi = std::min<int64_t>(lo + 1, m - 1);
  const double frac = h - static_cast<double>(lo);
  return sorted[static_cast<size_t>(lo)] +
         frac * (sorted[static_cast<size_t>(hi)] - sorted[static_cast<size_t>(lo)]);
}

Interval central_interval(std::span<const double> samples, double level) {
  if (samples.size() < 2) throw ContractError("central_interval: need M >= 2");
  if (!(level > 0.0 && level < 1.0)) throw ContractError("central_interval: level must be in (0,1)");
  std::vector<double> sorted(samples.begin(), samples.end());
  std::sort(sorted.begin(), sorted.end());
  return Interval{empirical_quantile(sorted, (1.0 - level) / 2.0),
                  empirical_quantile(sorted, (1.0 + level) / 2.0)};
}

IntervalSet hpd_intervals(std::span<const double> samples, double level, int64_t bins) {
  if (samples.size() < 10) throw ContractError("hpd_intervals: need M >= 10");
  if (!(level > 0.0 && level < 1.0)) throw ContractError("hpd_intervals: level must be in (0,1)");
  const Histogram h = build_histogram(samples, bins);
  const auto total = static_cast<double>(samples.size());

  std::vector<int64_t> order(h.counts.size());
  std::iota(order.begin(), order.end(), int64_t{0});
  // Decreasing density, ties to the lower bin index.
  std::stable_sort(order.begin(), order.end(), [&](int64_t a, int64_t b) {
    return h.counts[static_cast<size_t>(a)] > h.counts[static_cast<size_t>(b)];
  });

  std::vector<bool> selected(h.counts.size(), false);
  int64_t mass = 0;
  for (int64_t b : order) {
    if (static_cast<double>(mass) / total >= level) break;
    if (h.counts[static_cast<size_t>(b)] == 0) break;  // only occupied bins can add mass
    selected[static_cast<size_t>(b)] = true;
    mass += h.counts[static_cast<size_t>(b)];
  }

  IntervalSet out;
  out.level = level;
  out.achieved_mass = static_cast<double>(mass) / total;
  const double width = h.width == 0.0 ? 0.0 : h.width;
  for (size_t b = 0; b < selected.size(); ++b) {
    if (!selected[b]) continue;
    const double lo = h.lo + static_cast<double>(b) * width;
    const double hi = h.lo + static_cast<double>(b + 1) * width;
    if (!out.intervals.empty() && out.intervals.back().hi == lo)
      out.intervals.back().hi = hi;  // merge adjacent bins
    else
      out.intervals.push_back(Interval{lo, hi});
  }
  return out;
}

double mode_estimate(std::span<const double> samples, int64_t bins) {
  if (samples.size() < 10) throw ContractError("mode_estimate: need M >= 10");
  const Histogram h = build_histogram(samples, bins);
  size_t best = 0;
  for (size_t b = 1; b < h.counts.size(); ++b)
    if (h.counts[b] > h.counts[best]) best = b;
  if (h.width == 0.0) return h.lo;
  return h.lo + (static_cast<double>(best) + 0.5) * h.width;
}

}  // namespace samplenet
