#include <doctest.h>

#include <algorithm>
#include <cmath>

#include "samplenet/ops.hpp"
#include "samplenet/summaries.hpp"

using namespace samplenet;

namespace {

// Density-threshold oracle: independently pick the smallest count threshold
// whose super-level bins reach the target mass.
std::vector<bool> hpd_oracle_selection(const std::vector<double>& samples, double level,
                                       int64_t bins) {
  const auto [mn, mx] = std::minmax_element(samples.begin(), samples.end());
  const double width = (*mx - *mn) / static_cast<double>(bins);
  std::vector<int64_t> counts(static_cast<size_t>(bins), 0);
  for (double v : samples) {
    auto b = static_cast<int64_t>((v - *mn) / width);
    b = std::clamp<int64_t>(b, 0, bins - 1);
    ++counts[static_cast<size_t>(b)];
  }
  std::vector<int64_t> sorted = counts;
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  int64_t mass = 0, threshold = 0;
  for (int64_t c : sorted) {
    mass += c;
    threshold = c;
    if (static_cast<double>(mass) >= level * static_cast<double>(samples.size())) break;
  }
  std::vector<bool> take(static_cast<size_t>(bins), false);
  // Bins strictly above the threshold always belong; bins at the threshold
  // join in low-index order until the mass is reached (same tie rule).
  int64_t got = 0;
  for (size_t b = 0; b < counts.size(); ++b)
    if (counts[b] > threshold) {
      take[b] = true;
      got += counts[b];
    }
  for (size_t b = 0; b < counts.size() && static_cast<double>(got) < level * static_cast<double>(samples.size()); ++b)
    if (counts[b] == threshold && !take[b] && counts[b] > 0) {
      take[b] = true;
      got += counts[b];
    }
  return take;
}

}  // namespace

TEST_SUITE_BEGIN("summaries");

TEST_CASE("sample_moments: hand values and floor") {
  Tensor s({2, 1}, {1.0, 3.0});
  auto m = sample_moments(s);
  CHECK(m.mean[0] == 2.0);
  CHECK(m.var[0] == 2.0);  // 1/(M-1) convention

  Tensor flat = Tensor::full({5, 1}, 4.0);
  CHECK(sample_moments(flat).var[0] == 1e-8);
  CHECK_THROWS_AS(sample_moments(Tensor({1, 1}, {0.0})), ContractError);
}

TEST_CASE("sample_moments: Monte Carlo") {
  Rng rng(5);
  Tensor s = rng_draw(rng, Dist::StandardNormal, {10000, 1});
  auto m = sample_moments(s);
  CHECK(std::fabs(m.mean[0]) < 0.05);
  CHECK(std::fabs(m.var[0] - 1.0) < 0.05);
}

TEST_CASE("per_input_moments: agrees with the per-set computation") {
  Rng rng(7);
  Tensor s = rng_draw(rng, Dist::StandardNormal, {3, 20, 2});
  auto all = per_input_moments(s);
  for (int64_t n = 0; n < 3; ++n) {
    Tensor block(Shape{20, 2});
    for (int64_t m = 0; m < 20; ++m)
      for (int64_t c = 0; c < 2; ++c) block.at2(m, c) = s.at3(n, m, c);
    auto one = sample_moments(block);
    for (int64_t c = 0; c < 2; ++c) {
      CHECK(all.mean.at2(n, c) == one.mean[static_cast<size_t>(c)]);
      CHECK(all.var.at2(n, c) == one.var[static_cast<size_t>(c)]);
    }
  }
}

TEST_CASE("central_interval: interpolated quantiles") {
  std::vector<double> v(100);
  for (int i = 0; i < 100; ++i) v[static_cast<size_t>(i)] = static_cast<double>(i + 1);
  Interval iv = central_interval(v, 0.5);
  CHECK(iv.lo == doctest::Approx(25.75).epsilon(1e-12));
  CHECK(iv.hi == doctest::Approx(75.25).epsilon(1e-12));

  Interval wide = central_interval(v, 0.999999);
  CHECK(std::fabs(wide.lo - 1.0) < 1e-3);
  CHECK(std::fabs(wide.hi - 100.0) < 1e-3);

  // symmetric samples give a symmetric interval
  std::vector<double> sym{-3, -2, -1, -0.5, 0.5, 1, 2, 3};
  Interval si = central_interval(sym, 0.8);
  CHECK(std::fabs(si.lo + si.hi) <= 1e-12);

  CHECK_THROWS_AS(central_interval(std::vector<double>{1.0}, 0.5), ContractError);
  CHECK_THROWS_AS(central_interval(v, 1.5), ContractError);
}

TEST_CASE("central_interval: endpoints are monotone in the level") {
  Rng rng(11);
  std::vector<double> v(257);
  for (auto& x : v) x = rng.next_normal();
  double prev_lo = -1e300, prev_hi = -1e300;
  bool first = true;
  for (double level = 0.1; level < 0.99; level += 0.07) {
    Interval iv = central_interval(v, level);
    if (!first) {
      CHECK(iv.lo <= prev_lo + 1e-12);
      CHECK(iv.hi >= prev_hi - 1e-12);
    }
    prev_lo = iv.lo;
    prev_hi = iv.hi;
    first = false;
  }
}

TEST_CASE("hpd_intervals: two clusters give two disjoint intervals") {
  Rng rng(3);
  std::vector<double> v;
  for (int i = 0; i < 40; ++i) v.push_back(0.0 + 0.2 * (rng.next_uniform() - 0.5));
  for (int i = 0; i < 40; ++i) v.push_back(10.0 + 0.2 * (rng.next_uniform() - 0.5));
  const int64_t bins = 9;
  IntervalSet set = hpd_intervals(v, 0.75, bins);
  REQUIRE(set.intervals.size() == 2);
  CHECK(set.intervals[0].hi < set.intervals[1].lo);
  CHECK(set.achieved_mass >= 0.75);

  // matches the independent density-threshold oracle bin for bin
  const auto take = hpd_oracle_selection(v, 0.75, bins);
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  const double width = (*mx - *mn) / static_cast<double>(bins);
  std::vector<bool> mine(static_cast<size_t>(bins), false);
  for (const auto& iv : set.intervals) {
    const auto first = static_cast<int64_t>(std::round((iv.lo - *mn) / width));
    const auto last = static_cast<int64_t>(std::round((iv.hi - *mn) / width));
    for (int64_t b = first; b < last; ++b) mine[static_cast<size_t>(b)] = true;
  }
  CHECK(mine == take);
}

TEST_CASE("hpd_intervals: unimodal case stays close to the central interval") {
  Rng rng(19);
  std::vector<double> v(4000);
  for (auto& x : v) x = rng.next_normal();
  const int64_t bins = default_bins(static_cast<int64_t>(v.size()));
  IntervalSet set = hpd_intervals(v, 0.95, bins);
  REQUIRE(set.intervals.size() == 1);
  Interval central = central_interval(v, 0.95);
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  const double width = (*mx - *mn) / static_cast<double>(bins);
  CHECK(std::fabs(set.intervals[0].lo - central.lo) <= width);
  CHECK(std::fabs(set.intervals[0].hi - central.hi) <= width);
  // total length bound for unimodal histograms
  CHECK(set.intervals[0].hi - set.intervals[0].lo <=
        central.hi - central.lo + 2.0 * width);
}

TEST_CASE("hpd_intervals: level near one spans the sample range") {
  Rng rng(23);
  std::vector<double> v(500);
  for (auto& x : v) x = rng.next_normal();
  IntervalSet set = hpd_intervals(v, 0.9999, 16);
  REQUIRE(set.intervals.size() >= 1);
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  CHECK(set.intervals.front().lo == doctest::Approx(*mn).epsilon(1e-12));
  CHECK(set.intervals.back().hi == doctest::Approx(*mx).epsilon(1e-12));
  CHECK(set.achieved_mass == 1.0);
}

TEST_CASE("hpd_intervals: achieved mass always reaches the level") {
  Rng rng(29);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<double> v(50 + rng.below(200));
    for (auto& x : v) x = rng.next_normal() + (rng.next_uniform() < 0.3 ? 6.0 : 0.0);
    const double level = 0.2 + 0.75 * rng.next_uniform();
    IntervalSet set = hpd_intervals(v, level, default_bins(static_cast<int64_t>(v.size())));
    CHECK(set.achieved_mass >= level);
    for (size_t i = 1; i < set.intervals.size(); ++i)
      CHECK(set.intervals[i - 1].hi < set.intervals[i].lo);
  }
}

TEST_CASE("mode_estimate: degenerate, bimodal and Gaussian cases") {
  std::vector<double> same(12, 2.5);
  CHECK(mode_estimate(same, 5) == 2.5);

  // clusters of 40 and 41 points: the larger cluster wins
  std::vector<double> v;
  Rng rng(31);
  for (int i = 0; i < 40; ++i) v.push_back(0.0 + 0.1 * rng.next_uniform());
  for (int i = 0; i < 41; ++i) v.push_back(8.0 + 0.1 * rng.next_uniform());
  const double mode = mode_estimate(v, 8);
  CHECK(mode > 7.0);

  // One histogram's argmax wobbles a bin or two; the median over independent
  // draws is the stable Monte Carlo statement.
  std::vector<double> modes;
  for (int rep = 0; rep < 11; ++rep) {
    std::vector<double> z(10000);
    for (auto& x : z) x = rng.next_normal();
    modes.push_back(std::fabs(mode_estimate(z, 50)));
  }
  std::sort(modes.begin(), modes.end());
  CHECK(modes[5] < 0.2);

  CHECK_THROWS_AS(mode_estimate(std::vector<double>{1, 2, 3}, 4), ContractError);
}

TEST_SUITE_END();
