// Acceptance suite: one self-contained check per criterion, each printing a
// single [PASS]/[FAIL] line. Run all or a single one with --only N.
#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "cli.hpp"
#include "oracles.hpp"
#include "samplenet/data.hpp"
#include "samplenet/evaluation.hpp"
#include "samplenet/network.hpp"
#include "samplenet/scoring.hpp"
#include "samplenet/summaries.hpp"
#include "samplenet/transport.hpp"

using namespace samplenet;
namespace fs = std::filesystem;

namespace {

struct Criterion {
  int id;
  const char* title;
  std::function<bool(std::string&)> run;
};

#define EXPECT(cond)                                                  \
  do {                                                                \
    if (!(cond)) {                                                    \
      detail += std::string(" failed: ") + #cond;                     \
      return false;                                                   \
    }                                                                 \
  } while (0)

// ---------------------------------------------------------------- criterion 1
// Reverse-mode gradients of every loss match central finite differences on
// random small instances.
bool crit_gradient_oracle(std::string& detail) {
  int instances = 0;
  double worst_plain = 0.0, worst_sinkhorn = 0.0;
  for (uint64_t seed = 0; seed < 20; ++seed) {
    Rng rng(1000 + seed);
    const int64_t N = 1 + static_cast<int64_t>(rng.below(4));
    const int64_t M = 2 + static_cast<int64_t>(rng.below(5));
    const int64_t d = 1 + static_cast<int64_t>(rng.below(3));
    const int64_t K = 1 + static_cast<int64_t>(rng.below(static_cast<uint64_t>(M)));
    const int64_t L = 1 + static_cast<int64_t>(rng.below(2));

    Tensor samples = rng_draw(rng, Dist::StandardNormal, {N, M, d});
    Tensor targets = rng_draw(rng, Dist::StandardNormal, {N, d});
    samples.set_requires_grad(true);

    // Gaussian NLL wrt mean and raw variance
    Tensor mean = rng_draw(rng, Dist::StandardNormal, {N, d});
    Tensor var = affine(rng_draw(rng, Dist::Uniform01, {N, d}), 1.5, 0.3);
    mean.set_requires_grad(true);
    var.set_requires_grad(true);
    auto nll_res = oracles::check_gradients({mean, var}, [&](Tape* tape) {
      return beta_nll(mean, var, targets, 0.0, tape);
    });
    worst_plain = std::max(worst_plain, nll_res.max_rel_err);

    // full score (K=M subsets), minibatch score, combined eta=0
    auto es_res = oracles::check_gradients({samples}, [&](Tape* tape) {
      Rng stream(7);
      return minibatch_energy_score(samples, targets, M, 1, stream, tape);
    });
    worst_plain = std::max(worst_plain, es_res.max_rel_err);
    auto mb_res = oracles::check_gradients({samples}, [&](Tape* tape) {
      Rng stream(8);
      return minibatch_energy_score(samples, targets, K, L, stream, tape);
    });
    worst_plain = std::max(worst_plain, mb_res.max_rel_err);

    // transport paths: divergence, minibatch regularizer, combined loss
    const SinkhornOptions opt{0.0025, 60, 0.0};
    Tensor cloud_a = rng_draw(rng, Dist::StandardNormal, {M, d});
    Tensor cloud_b = rng_draw(rng, Dist::StandardNormal, {K, d});
    cloud_a.set_requires_grad(true);
    auto div_res = oracles::check_gradients({cloud_a}, [&](Tape* tape) {
      return sinkhorn_divergence(PointCloud(cloud_a), PointCloud(cloud_b), opt, tape);
    });
    worst_sinkhorn = std::max(worst_sinkhorn, div_res.max_rel_err);

    LossConfig cfg;
    cfg.M = M;
    cfg.K = K;
    cfg.L = L;
    cfg.eta = 0.5;
    cfg.prior = seed % 2 ? Prior::Uniform : Prior::Gaussian;
    cfg.sinkhorn_iters = 60;
    cfg.sinkhorn_tol = 0.0;
    auto reg_res = oracles::check_gradients({samples}, [&](Tape* tape) {
      Rng stream(9);
      return minibatch_sinkhorn(samples, cfg, stream, tape);
    });
    worst_sinkhorn = std::max(worst_sinkhorn, reg_res.max_rel_err);
    auto total_res = oracles::check_gradients({samples}, [&](Tape* tape) {
      Rng stream(10);
      return combined_loss(samples, targets, cfg, stream, tape);
    });
    worst_sinkhorn = std::max(worst_sinkhorn, total_res.max_rel_err);
    ++instances;
  }
  {
    std::ostringstream ss;
    ss << " instances=" << instances << " rel_err: plain=" << worst_plain
       << " sinkhorn=" << worst_sinkhorn;
    detail += ss.str();
  }
  EXPECT(instances >= 20);
  EXPECT(worst_plain < 1e-4);
  EXPECT(worst_sinkhorn < 1e-3);
  return true;
}

// ---------------------------------------------------------------- criterion 2
bool crit_es_hand_values(std::string& detail) {
  Tensor s1({1, 2, 1}, {-1.0, 1.0});
  Tensor y1({1, 1}, {0.0});
  EXPECT(std::fabs(energy_score(s1, y1) - 0.5) <= 1e-12);

  Tensor s2({1, 3, 2}, {1, 2, 1, 2, 1, 2});
  Tensor y2({1, 2}, {1, 2});
  EXPECT(energy_score(s2, y2) == 0.0);

  Tensor s3({3, 1, 1}, {2.0, -3.0, 0.5});
  Tensor y3({3, 1}, {0.0, 0.0, 0.0});
  EXPECT(std::fabs(energy_score(s3, y3) - (2.0 + 3.0 + 0.5) / 3.0) <= 1e-12);

  Rng rng(5);
  Tensor s = rng_draw(rng, Dist::StandardNormal, {3, 4, 2});
  Tensor y = rng_draw(rng, Dist::StandardNormal, {3, 2});
  Rng sub(1);
  EXPECT(std::fabs(minibatch_energy_score(s, y, 4, 1, sub).value() - energy_score(s, y)) <= 1e-12);

  // M=3, K=2 exhaustive enumeration
  Tensor se = rng_draw(rng, Dist::StandardNormal, {2, 3, 2});
  Tensor ye = rng_draw(rng, Dist::StandardNormal, {2, 2});
  const auto subsets = oracles::all_subsets(3, 2);
  std::vector<std::vector<std::vector<int64_t>>> per_n(2, subsets);
  const double impl = energy_score_over_subsets(se, ye, per_n).value();
  double oracle = 0.0;
  for (int64_t n = 0; n < 2; ++n)
    for (const auto& idx : subsets) oracle += oracles::es_subset(se, ye, n, idx);
  oracle /= static_cast<double>(2 * subsets.size());
  EXPECT(std::fabs(impl - oracle) <= 1e-12);
  return true;
}

// ---------------------------------------------------------------- criterion 3
bool crit_sinkhorn_axioms(std::string& detail) {
  Rng rng(2025);
  const SinkhornOptions opt{0.0025, 1000, 1e-9};
  double worst_neg = 1e9, worst_asym = 0.0, worst_self = 0.0;
  for (int trial = 0; trial < 100; ++trial) {
    const int64_t K = 2 + static_cast<int64_t>(rng.below(15));
    const int64_t d = 1 + static_cast<int64_t>(rng.below(3));
    PointCloud a(rng_draw(rng, Dist::StandardNormal, {K, d}));
    PointCloud b(trial % 5 == 0 ? a.points.clone() : rng_draw(rng, Dist::StandardNormal, {K, d}));
    if (trial % 5 == 0)  // near-identical pair stresses the nonnegativity margin
      for (int64_t i = 0; i < b.points.numel(); ++i) b.points.at(i) += 1e-4 * rng.next_normal();
    const double sab = sinkhorn_divergence(a, b, opt).value();
    const double sba = sinkhorn_divergence(b, a, opt).value();
    const double saa = sinkhorn_divergence(a, a, opt).value();
    worst_neg = std::min(worst_neg, sab);
    worst_asym = std::max(worst_asym, std::fabs(sab - sba));
    worst_self = std::max(worst_self, std::fabs(saa));
  }
  PointCloud d0(Tensor({1, 1}, {0.0}));
  PointCloud d2(Tensor({1, 1}, {2.0}));
  const double dirac = sinkhorn_divergence(d0, d2, opt).value();
  {
    std::ostringstream ss;
    ss << " min S(a,b)=" << worst_neg << " max |S(a,b)-S(b,a)|=" << worst_asym
       << " max |S(a,a)|=" << worst_self << " dirac=" << dirac;
    detail += ss.str();
  }
  EXPECT(worst_self < 1e-6);
  EXPECT(worst_neg >= -1e-6);
  EXPECT(worst_asym < 1e-9);
  EXPECT(std::fabs(dirac - 2.0) <= 1e-6);
  return true;
}

// ---------------------------------------------------------------- criterion 4
bool crit_shape_only(std::string& detail) {
  Rng rng(77);
  Tensor s = rng_draw(rng, Dist::StandardNormal, {1, 16, 2});
  LossConfig cfg;
  cfg.M = 16;
  cfg.K = 12;
  cfg.L = 2;
  cfg.prior = Prior::Gaussian;
  cfg.sinkhorn_iters = 200;

  Rng base_stream(123);
  const double base = minibatch_sinkhorn(s, cfg, base_stream).value();
  double worst = 0.0;
  for (const auto [scale, shift] : std::vector<std::pair<double, double>>{
           {2.0, 0.0}, {0.1, 3.0}, {25.0, -12.0}, {1.0, 100.0}}) {
    Tensor t = s.clone();
    for (int64_t i = 0; i < t.numel(); ++i) t.at(i) = scale * t.at(i) + shift;
    Rng stream(123);
    worst = std::max(worst, std::fabs(minibatch_sinkhorn(t, cfg, stream).value() - base));
  }
  {
    std::ostringstream ss;
    ss << " max |delta|=" << worst;
    detail += ss.str();
  }
  EXPECT(worst < 1e-8);
  return true;
}

// Shared training helper for the toy criteria.
struct ToyRun {
  SampleNetModel model;
  WhiteningStats whitening;
  Dataset test;       // whitened
  Dataset train_raw;  // original scale
  MetricsRecord record;
};

ToyRun train_toy(bool multimodal, uint64_t seed, int64_t n_train, int64_t n_test,
                 int64_t outliers, const LossConfig& loss, int64_t steps,
                 int64_t minibatch) {
  Rng gen_train(9000 + seed);
  Dataset train_raw = multimodal ? gen_multimodal_toy(n_train, gen_train)
                                 : gen_unimodal_toy(n_train, gen_train, outliers);
  Rng gen_test(5000 + seed);
  Dataset test_raw = multimodal ? gen_multimodal_toy(n_test, gen_test)
                                : gen_unimodal_toy(n_test, gen_test, 0);
  auto wh = whiten_inputs(train_raw, test_raw);
  auto [tr, val] = split(wh.train, SplitSpec{0.2, 1, 700 + seed}, 0);

  MlpConfig mc;
  mc.input_dim = 1;
  mc.hidden_sizes = {50};
  mc.activation = Activation::Tanh;
  mc.head = HeadSamples{loss.M, 1};
  Rng init(100 + seed);
  SampleNetModel model(mc, init);

  Objective obj;
  obj.method = Method::SampleNet;
  obj.loss = loss;
  TrainSchedule sched;
  sched.max_steps = steps;
  sched.minibatch_size = minibatch;
  sched.learning_rate = 1e-2;
  sched.check_every = 100;
  sched.patience = 1000000;
  sched.val_metric = ValMetric::EnergyScore;
  sched.seed = 40 + seed;
  train(model, tr, val, obj, sched);

  Rng eval_rng(3);
  MetricsRecord rec = evaluate_model(model, wh.test, loss.M, eval_rng);
  return ToyRun{std::move(model), wh.stats, std::move(wh.test), std::move(train_raw), rec};
}

// ---------------------------------------------------------------- criterion 5
bool crit_multimodal_fit(std::string& detail) {
  LossConfig loss;
  loss.M = 100;
  loss.K = 100;
  loss.L = 1;
  loss.eta = 0.0;
  int wins = 0, both_branches = 0;
  for (uint64_t seed = 0; seed < 5; ++seed) {
    ToyRun sn = train_toy(true, seed, 500, 2000, 0, loss, 2500, 0);

    // beta-NLL on the same data and budget
    Rng gen_train(9000 + seed);
    Dataset train_raw = gen_multimodal_toy(500, gen_train);
    Rng gen_test(5000 + seed);
    Dataset test_raw = gen_multimodal_toy(2000, gen_test);
    auto wh = whiten_inputs(train_raw, test_raw);
    auto [tr, val] = split(wh.train, SplitSpec{0.2, 1, 700 + seed}, 0);
    MlpConfig mc;
    mc.input_dim = 1;
    mc.hidden_sizes = {50};
    mc.activation = Activation::Tanh;
    mc.head = HeadGaussian{1};
    Rng init(100 + seed);
    SampleNetModel baseline(mc, init);
    Objective obj;
    obj.method = Method::BetaNll;
    obj.baseline.beta = 0.0;
    TrainSchedule sched;
    sched.max_steps = 2500;
    sched.minibatch_size = 0;
    sched.learning_rate = 1e-2;
    sched.check_every = 100;
    sched.patience = 1000000;
    sched.val_metric = ValMetric::Nll;
    sched.seed = 40 + seed;
    train(baseline, tr, val, obj, sched);
    Rng eval_rng(3);
    MetricsRecord brec = evaluate_model(baseline, wh.test, 100, eval_rng);

    if (sn.record.es < brec.es) ++wins;

    // predicted samples at x=5 must populate both branches
    Tensor x5({1, 1}, {(5.0 - sn.whitening.mean[0]) / sn.whitening.stddev[0]});
    Tensor s5 = forward_samples(sn.model, x5);
    int near1 = 0, near2 = 0;
    for (int64_t m = 0; m < 100; ++m) {
      if (std::fabs(s5.at(m) - multimodal_branch1(5.0)) <= 1.5) ++near1;
      if (std::fabs(s5.at(m) - multimodal_branch2(5.0)) <= 1.5) ++near2;
    }
    if (near1 >= 10 && near2 >= 10) ++both_branches;
    {
      std::ostringstream ss;
      ss << " [seed " << seed << ": sn=" << sn.record.es << " beta=" << brec.es
         << " branches=" << near1 << "/" << near2 << "]";
      detail += ss.str();
    }
  }
  EXPECT(wins >= 4);
  EXPECT(both_branches >= 4);
  return true;
}

// ---------------------------------------------------------------- criterion 6
bool crit_regularization_outliers(std::string& detail) {
  auto outlier_fraction = [](const ToyRun& run) {
    Tensor whitened = apply_whitening(run.train_raw.X, run.whitening);
    Tensor s = forward_samples(run.model, whitened);
    int64_t near = 0, total = 0;
    for (int64_t n = 0; n < run.train_raw.n(); ++n) {
      const double x = run.train_raw.X.at2(n, 0);
      for (int64_t m = 0; m < s.dim(1); ++m) {
        ++total;
        if (std::fabs(s.at3(n, m, 0) - unimodal_outlier_curve(x)) < 1.0) ++near;
      }
    }
    return static_cast<double>(near) / static_cast<double>(total);
  };

  int frac_ok = 0, underfit_ok = 0;
  for (uint64_t seed = 0; seed < 3; ++seed) {
    LossConfig base;
    base.M = 100;
    base.K = 16;
    base.L = 1;
    base.prior = Prior::Gaussian;
    base.sinkhorn_iters = 60;
    base.sinkhorn_tol = 1e-4;

    LossConfig l0 = base, l2 = base, l200 = base;
    l0.eta = 0.0;
    l2.eta = 2.0;
    l200.eta = 200.0;
    ToyRun r0 = train_toy(false, seed, 500, 1000, 20, l0, 1000, 64);
    ToyRun r2 = train_toy(false, seed, 500, 1000, 20, l2, 1000, 64);
    ToyRun r200 = train_toy(false, seed, 500, 1000, 20, l200, 1000, 64);

    const double f0 = outlier_fraction(r0), f2 = outlier_fraction(r2);
    if (f0 > f2) ++frac_ok;
    if (r200.record.es > r2.record.es) ++underfit_ok;
    {
      std::ostringstream ss;
      ss << " [seed " << seed << ": frac " << f0 << " vs " << f2 << "; es " << r2.record.es
         << " vs " << r200.record.es << "]";
      detail += ss.str();
    }
  }
  EXPECT(frac_ok >= 2);
  EXPECT(underfit_ok >= 2);
  return true;
}

// ---------------------------------------------------------------- criterion 7
bool crit_calibration(std::string& detail) {
  LossConfig loss;
  loss.M = 100;
  loss.K = 100;
  loss.L = 1;
  loss.eta = 0.0;
  double coverage_sum = 0.0;
  for (uint64_t seed = 0; seed < 3; ++seed) {
    ToyRun run = train_toy(false, seed, 500, 1000, 0, loss, 2500, 0);
    Tensor s = forward_samples(run.model, run.test.X);
    int64_t covered = 0;
    for (int64_t n = 0; n < run.test.n(); ++n) {
      std::vector<double> col(100);
      for (int64_t m = 0; m < 100; ++m) col[static_cast<size_t>(m)] = s.at3(n, m, 0);
      const Interval iv = central_interval(col, 0.95);
      const double y = run.test.Y.at2(n, 0);
      if (y >= iv.lo && y <= iv.hi) ++covered;
    }
    coverage_sum += static_cast<double>(covered) / static_cast<double>(run.test.n());
  }
  const double coverage = coverage_sum / 3.0;
  {
    std::ostringstream ss;
    ss << " mean coverage=" << coverage;
    detail += ss.str();
  }
  EXPECT(coverage >= 0.90);
  EXPECT(coverage <= 0.98);
  return true;
}

// ---------------------------------------------------------------- criterion 8
bool crit_hpd(std::string& detail) {
  Rng rng(3);
  std::vector<double> v;
  for (int i = 0; i < 40; ++i) v.push_back(0.0 + 0.2 * (rng.next_uniform() - 0.5));
  for (int i = 0; i < 40; ++i) v.push_back(10.0 + 0.2 * (rng.next_uniform() - 0.5));
  const int64_t bins = 9;
  IntervalSet set = hpd_intervals(v, 0.75, bins);
  EXPECT(set.intervals.size() == 2);
  EXPECT(set.intervals[0].hi < set.intervals[1].lo);
  EXPECT(set.achieved_mass >= 0.75);

  // brute-force density-threshold oracle over the same histogram
  const auto [mn, mx] = std::minmax_element(v.begin(), v.end());
  const double width = (*mx - *mn) / static_cast<double>(bins);
  std::vector<int64_t> counts(static_cast<size_t>(bins), 0);
  for (double x : v) {
    auto b = static_cast<int64_t>((x - *mn) / width);
    b = std::clamp<int64_t>(b, 0, bins - 1);
    ++counts[static_cast<size_t>(b)];
  }
  std::vector<int64_t> desc = counts;
  std::sort(desc.begin(), desc.end(), std::greater<>());
  int64_t mass = 0, threshold = 0;
  for (int64_t c : desc) {
    mass += c;
    threshold = c;
    if (static_cast<double>(mass) >= 0.75 * static_cast<double>(v.size())) break;
  }
  std::vector<std::pair<double, double>> oracle;
  for (size_t b = 0; b < counts.size(); ++b) {
    if (counts[b] < threshold || counts[b] == 0) continue;
    const double lo = *mn + static_cast<double>(b) * width;
    const double hi = lo + width;
    if (!oracle.empty() && std::fabs(oracle.back().second - lo) < 1e-12)
      oracle.back().second = hi;
    else
      oracle.emplace_back(lo, hi);
  }
  EXPECT(oracle.size() == set.intervals.size());
  for (size_t i = 0; i < oracle.size(); ++i) {
    EXPECT(std::fabs(oracle[i].first - set.intervals[i].lo) <= 1e-12);
    EXPECT(std::fabs(oracle[i].second - set.intervals[i].hi) <= 1e-12);
  }
  return true;
}

// ---------------------------------------------------------------- criterion 9
bool crit_ks(std::string& detail) {
  std::vector<double> a{1, 2, 3, 4};
  auto same = ks_two_sided(a, a);
  EXPECT(same.d_stat == 0.0);
  EXPECT(same.p_value == 1.0);

  std::vector<double> neg{-5, -4, -3}, pos{3, 4, 5};
  EXPECT(ks_two_sided(neg, pos).d_stat == 1.0);

  std::vector<double> b{2, 3, 4, 5};
  auto res = ks_two_sided(a, b);
  EXPECT(std::fabs(res.d_stat - 0.25) <= 1e-12);

  // exhaustive permutation oracle over all 70 pooled relabelings
  std::vector<double> pool(a);
  pool.insert(pool.end(), b.begin(), b.end());
  std::vector<bool> pick(8, false);
  std::fill(pick.begin(), pick.begin() + 4, true);
  std::sort(pick.begin(), pick.end());
  int64_t total = 0, at_least = 0;
  do {
    std::vector<double> pa, pb;
    for (size_t i = 0; i < 8; ++i) (pick[i] ? pa : pb).push_back(pool[i]);
    ++total;
    if (ks_two_sided(pa, pb).d_stat >= res.d_stat - 1e-12) ++at_least;
  } while (std::next_permutation(pick.begin(), pick.end()));
  const double perm_p = static_cast<double>(at_least) / static_cast<double>(total);
  {
    std::ostringstream ss;
    ss << " D=" << res.d_stat << " p=" << res.p_value << " perm_p=" << perm_p
       << " (n=" << total << ")";
    detail += ss.str();
  }
  EXPECT(total == 70);
  EXPECT(std::fabs(res.p_value - perm_p) < 0.05);
  return true;
}

// --------------------------------------------------------------- criterion 10
bool crit_determinism(std::string& detail) {
  const fs::path tmp = fs::temp_directory_path() / "samplenet_acceptance_det";
  fs::remove_all(tmp);
  fs::create_directories(tmp);

  auto slurp = [](const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
  };

  cli::json cfg = cli::default_config();
  cfg["dataset"]["n"] = 150;
  cfg["loss"]["M"] = 20;
  cfg["loss"]["K"] = 12;
  cfg["loss"]["L"] = 1;
  cfg["loss"]["eta"] = 0.5;
  cfg["loss"]["sinkhorn_iters"] = 40;
  cfg["train"]["max_steps"] = 150;
  cfg["train"]["minibatch_size"] = 32;
  cfg["train"]["learning_rate"] = 0.01;
  cfg["train"]["val_metric"] = "es";
  cfg["seed"] = 31;

  cfg["out"] = (tmp / "r1").string();
  cli::cmd_train(cli::parse_run_config(cfg));
  cli::cmd_evaluate((tmp / "r1").string(), cli::json::object(), (tmp / "r1").string());
  cfg["out"] = (tmp / "r2").string();
  cli::cmd_train(cli::parse_run_config(cfg));
  cli::cmd_evaluate((tmp / "r2").string(), cli::json::object(), (tmp / "r2").string());

  const bool train_same = slurp(tmp / "r1/metrics.jsonl") == slurp(tmp / "r2/metrics.jsonl");
  const bool eval_same =
      slurp(tmp / "r1/eval_metrics.jsonl") == slurp(tmp / "r2/eval_metrics.jsonl");
  const bool ckpt_same = slurp(tmp / "r1/checkpoint.json") == slurp(tmp / "r2/checkpoint.json");
  fs::remove_all(tmp);
  EXPECT(train_same);
  EXPECT(eval_same);
  EXPECT(ckpt_same);
  return true;
}

// --------------------------------------------------------------- criterion 11
bool crit_sweep_cardinality(std::string& detail) {
  cli::json grids{{"M", {50, 100, 200, 400}},
                  {"K", {50, 100, 200}},
                  {"L", {1, 2, 3, 4}},
                  {"eta", {0.0, 0.1, 0.5, 1.0, 5.0}}};
  const auto grid = cli::expand_sweep_grid(grids);
  {
    std::ostringstream ss;
    ss << " valid=" << grid.points.size() << " skipped=" << grid.skipped.size();
    detail += ss.str();
  }
  EXPECT(grid.points.size() == 180);
  EXPECT(grid.skipped.size() == 60);
  for (const auto& p : grid.points) EXPECT(p.K <= p.M);
  for (const auto& p : grid.skipped) EXPECT(p.K > p.M);
  return true;
}

const std::vector<Criterion> kCriteria = {
    {1, "gradient oracle: all losses vs central finite differences", crit_gradient_oracle},
    {2, "energy score hand values and minibatch identities", crit_es_hand_values},
    {3, "sinkhorn divergence axioms at eps=0.0025", crit_sinkhorn_axioms},
    {4, "shape-only regularization under affine changes", crit_shape_only},
    {5, "multimodal toy: beats beta-NLL and covers both branches", crit_multimodal_fit},
    {6, "outlier regularization: eta=0 vs 2 vs 200 directions", crit_regularization_outliers},
    {7, "central 95% interval calibration on the gaussian toy", crit_calibration},
    {8, "HPD intervals on the two-cluster example", crit_hpd},
    {9, "two-sample KS test vs the exhaustive permutation oracle", crit_ks},
    {10, "train+evaluate rerun is byte-identical", crit_determinism},
    {11, "sweep grid expands to exactly 180 valid runs", crit_sweep_cardinality},
};

}  // namespace

int main(int argc, char** argv) {
  int only = 0;
  for (int i = 1; i < argc; ++i)
    if (std::strcmp(argv[i], "--only") == 0 && i + 1 < argc) only = std::atoi(argv[i + 1]);

  int failures = 0, ran = 0;
  for (const auto& c : kCriteria) {
    if (only != 0 && c.id != only) continue;
    ++ran;
    const auto t0 = std::chrono::steady_clock::now();
    std::string detail;
    bool ok = false;
    try {
      ok = c.run(detail);
    } catch (const std::exception& e) {
      detail += std::string(" exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("[%s] criterion %2d: %s (%.1fs)%s\n", ok ? "PASS" : "FAIL", c.id, c.title, secs,
                detail.c_str());
    std::fflush(stdout);
    if (!ok) ++failures;
  }
  if (ran == 0) {
    std::printf("no criterion selected (use --only 1..11)\n");
    return 2;
  }
  if (only == 0)
    std::printf("%d/%d criteria passed\n", ran - failures, ran);
  return failures == 0 ? 0 : 1;
}
