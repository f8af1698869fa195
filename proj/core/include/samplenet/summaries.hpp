#pragma once
#include <span>
#include <vector>

#include "samplenet/tensor.hpp"

namespace samplenet {

struct Interval {
  double lo = 0.0;
  double hi = 0.0;
};

// Disjoint, sorted intervals for one output dimension. `achieved_mass` is the
// sample fraction actually inside the intervals (>= level by construction).
struct IntervalSet {
  double level = 0.0;
  double achieved_mass = 0.0;
  std::vector<Interval> intervals;
};

struct Moments {
  std::vector<double> mean;  // per dimension
  std::vector<double> var;   // 1/(M-1) convention, floored at 1e-8
};

// Per-dimension mean and variance of one input's sample set [M,d], M >= 2.
Moments sample_moments(const Tensor& samples);

// Row-wise moments over [N,M,d], returned as [N,d] tensors; this is the point
// prediction and dispersion used to score a sample model with Gaussian tools.
struct PerInputMoments {
  Tensor mean;
  Tensor var;
};
PerInputMoments per_input_moments(const Tensor& samples);

// Central interval [q_(1-level)/2, q_(1+level)/2] with type-7 interpolated
// empirical quantiles.
Interval central_interval(std::span<const double> samples, double level);
double empirical_quantile(std::span<const double> sorted, double p);

// Highest-density region from an equal-width histogram over [min, max]:
// bins are taken in decreasing density order until their mass reaches the
// level, then adjacent selected bins merge into intervals. Multimodal sample
// sets can yield several disjoint intervals.
IntervalSet hpd_intervals(std::span<const double> samples, double level, int64_t bins);

// Center of the highest-count bin (ties resolve to the lowest bin).
double mode_estimate(std::span<const double> samples, int64_t bins);

inline int64_t default_bins(int64_t m) {
  int64_t b = 1;
  while (b * b < m) ++b;
  return b;
}

}  // namespace samplenet
