#include "samplenet/transport.hpp"

#include <cmath>
#include <limits>

#include "samplenet/scoring.hpp"

namespace samplenet {
namespace {

constexpr double kDegenerateFloor = 1e-8;

std::vector<double> uniform_weights(int64_t k) {
  return std::vector<double>(static_cast<size_t>(k), 1.0 / static_cast<double>(k));
}

void validate_weights(const std::vector<double>& w, int64_t k) {
  if (static_cast<int64_t>(w.size()) != k)
    throw ShapeError("PointCloud: weight count does not match point count");
  double total = 0.0;
  for (double x : w) {
    if (x < 0.0) throw ConfigError("PointCloud: weights must be nonnegative");
    total += x;
  }
  if (std::fabs(total - 1.0) > 1e-9)
    throw ConfigError("PointCloud: weights must sum to 1");
}

}  // namespace

PointCloud::PointCloud(Tensor pts) : points(std::move(pts)) {
  if (points.rank() != 2) throw ShapeError("PointCloud: points must be [K,d]");
  weights = uniform_weights(points.dim(0));
}

PointCloud::PointCloud(Tensor pts, std::vector<double> w) : points(std::move(pts)) {
  if (points.rank() != 2) throw ShapeError("PointCloud: points must be [K,d]");
  validate_weights(w, points.dim(0));
  weights = std::move(w);
}

NormalizeResult normalize_samples(const Tensor& samples, Prior prior, Tape* tape) {
  if (samples.rank() != 2) throw ShapeError("normalize_samples: expected [M,d]");
  const int64_t M = samples.dim(0), d = samples.dim(1);

  // Degeneracy mask from values only; it enters the graph as a constant.
  std::vector<bool> degenerate(static_cast<size_t>(d), false);
  Tensor mask(Shape{d});
  for (int64_t j = 0; j < d; ++j) {
    double lo = samples.at2(0, j), hi = lo, sum = 0.0;
    for (int64_t i = 0; i < M; ++i) {
      const double v = samples.at2(i, j);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
      sum += v;
    }
    double scale;
    if (prior == Prior::Uniform) {
      scale = hi - lo;
    } else {
      const double mu = sum / static_cast<double>(M);
      double ss = 0.0;
      for (int64_t i = 0; i < M; ++i) {
        const double c = samples.at2(i, j) - mu;
        ss += c * c;
      }
      scale = std::sqrt(ss / static_cast<double>(M));
    }
    degenerate[static_cast<size_t>(j)] = scale < kDegenerateFloor;
    mask.at(j) = degenerate[static_cast<size_t>(j)] ? 0.0 : 1.0;
  }

  Tensor normalized;
  if (prior == Prior::Uniform) {
    Tensor lo = colwise_min(samples, tape);
    Tensor range = sub(colwise_max(samples, tape), lo, tape);
    Tensor inv = reciprocal(clamp_min(range, kDegenerateFloor, tape), tape);
    normalized = mul_rowvec(sub_rowvec(samples, lo, tape), inv, tape);
  } else {
    Tensor mu = colwise_mean(samples, tape);
    Tensor centered = sub_rowvec(samples, mu, tape);
    Tensor var = colwise_mean(mul(centered, centered, tape), tape);
    // Floor the variance before sqrt so clamped dims don't see the infinite
    // sqrt slope at zero.
    Tensor std_dev = sqrt_op(clamp_min(var, kDegenerateFloor * kDegenerateFloor, tape), tape);
    normalized = mul_rowvec(centered, reciprocal(std_dev, tape), tape);
  }
  normalized = mul_rowvec(normalized, mask, tape);
  return NormalizeResult{normalized, std::move(degenerate)};
}

PointCloud sample_prior(Prior prior, int64_t K, int64_t d, Rng& rng) {
  if (K < 1) throw ConfigError("sample_prior: K must be >= 1");
  return PointCloud(rng_draw(
      rng, prior == Prior::Uniform ? Dist::Uniform01 : Dist::StandardNormal, Shape{K, d}));
}

namespace {

// -eps * LSE_j(logw_j + (h_j - C_ij)/eps) for each row i (or each column when
// over_rows is false). Plain doubles; the solver node handles the tape.
void half_update(const std::vector<double>& cost, int64_t ka, int64_t kb,
                 const std::vector<double>& h, const std::vector<double>& logw,
                 double eps, bool over_rows, std::vector<double>& out) {
  const int64_t n_out = over_rows ? ka : kb;
  const int64_t n_in = over_rows ? kb : ka;
  out.resize(static_cast<size_t>(n_out));
  for (int64_t i = 0; i < n_out; ++i) {
    double peak = -std::numeric_limits<double>::infinity();
    for (int64_t j = 0; j < n_in; ++j) {
      const double c = over_rows ? cost[static_cast<size_t>(i * kb + j)]
                                 : cost[static_cast<size_t>(j * kb + i)];
      peak = std::max(peak, logw[static_cast<size_t>(j)] + (h[static_cast<size_t>(j)] - c) / eps);
    }
    double acc = 0.0;
    for (int64_t j = 0; j < n_in; ++j) {
      const double c = over_rows ? cost[static_cast<size_t>(i * kb + j)]
                                 : cost[static_cast<size_t>(j * kb + i)];
      acc += std::exp(logw[static_cast<size_t>(j)] + (h[static_cast<size_t>(j)] - c) / eps - peak);
    }
    out[static_cast<size_t>(i)] = -eps * (peak + std::log(acc));
  }
}

}  // namespace

SinkhornResult entropic_ot(const PointCloud& a, const PointCloud& b,
                           const SinkhornOptions& opt, Tape* tape) {
  if (a.dim() != b.dim())
    throw ShapeError("entropic_ot: point dimensions differ, " + shape_str(a.points.shape()) +
                     " vs " + shape_str(b.points.shape()));
  if (opt.epsilon <= 0.0) throw ConfigError("entropic_ot: epsilon must be > 0");
  if (opt.max_iters < 1) throw ConfigError("entropic_ot: max_iters must be >= 1");

  const int64_t ka = a.size(), kb = b.size(), d = a.dim();
  const double eps = opt.epsilon;

  std::vector<double> cost(static_cast<size_t>(ka * kb));
  for (int64_t i = 0; i < ka; ++i)
    for (int64_t j = 0; j < kb; ++j) {
      double sq = 0.0;
      for (int64_t c = 0; c < d; ++c) {
        const double t = a.points.at2(i, c) - b.points.at2(j, c);
        sq += t * t;
      }
      cost[static_cast<size_t>(i * kb + j)] = 0.5 * sq;
    }

  std::vector<double> logp(static_cast<size_t>(ka)), logq(static_cast<size_t>(kb));
  for (int64_t i = 0; i < ka; ++i)
    logp[static_cast<size_t>(i)] = a.weights[static_cast<size_t>(i)] > 0.0
                                       ? std::log(a.weights[static_cast<size_t>(i)])
                                       : -std::numeric_limits<double>::infinity();
  for (int64_t j = 0; j < kb; ++j)
    logq[static_cast<size_t>(j)] = b.weights[static_cast<size_t>(j)] > 0.0
                                       ? std::log(b.weights[static_cast<size_t>(j)])
                                       : -std::numeric_limits<double>::infinity();

  const bool want_grad = tape && (tape->tracks(a.points) || tape->tracks(b.points));

  std::vector<double> f(static_cast<size_t>(ka), 0.0), g(static_cast<size_t>(kb), 0.0);
  // History of post-update potentials, needed to replay the iterations in
  // reverse during backward.
  std::vector<std::vector<double>> f_hist, g_hist;
  if (want_grad) {
    f_hist.reserve(static_cast<size_t>(opt.max_iters));
    g_hist.reserve(static_cast<size_t>(opt.max_iters));
  }

  std::vector<double> f_half, g_half;
  bool converged = false;
  int64_t iters = 0;
  while (iters < opt.max_iters) {
    half_update(cost, ka, kb, g, logq, eps, /*over_rows=*/true, f_half);
    half_update(cost, ka, kb, f, logp, eps, /*over_rows=*/false, g_half);
    double err = 0.0;
    for (int64_t i = 0; i < ka; ++i) {
      const double next = 0.5 * (f[static_cast<size_t>(i)] + f_half[static_cast<size_t>(i)]);
      err = std::max(err, std::fabs(next - f[static_cast<size_t>(i)]));
      f[static_cast<size_t>(i)] = next;
    }
    for (int64_t j = 0; j < kb; ++j) {
      const double next = 0.5 * (g[static_cast<size_t>(j)] + g_half[static_cast<size_t>(j)]);
      err = std::max(err, std::fabs(next - g[static_cast<size_t>(j)]));
      g[static_cast<size_t>(j)] = next;
    }
    ++iters;
    if (!std::isfinite(err)) throw NumericError("entropic_ot: update produced NaN/Inf");
    if (want_grad) {
      f_hist.push_back(f);
      g_hist.push_back(g);
    }
    if (err < opt.tol && opt.tol > 0.0) {
      converged = true;
      break;
    }
  }

  double value = 0.0;
  for (int64_t i = 0; i < ka; ++i) value += f[static_cast<size_t>(i)] * a.weights[static_cast<size_t>(i)];
  for (int64_t j = 0; j < kb; ++j) value += g[static_cast<size_t>(j)] * b.weights[static_cast<size_t>(j)];
  if (!std::isfinite(value)) throw NumericError("entropic_ot: non-finite transport value");

  SinkhornResult result;
  result.value = Tensor::scalar(value);
  result.f = f;
  result.g = g;
  result.iterations = iters;
  result.converged = converged;

  if (want_grad) {
    const bool tx = tape->tracks(a.points), ty = tape->tracks(b.points);
    auto xd = a.points.impl();
    auto yd = b.points.impl();
    auto od = result.value.impl();
    auto pw = a.weights;
    auto qw = b.weights;
    auto fh = std::move(f_hist);
    auto gh = std::move(g_hist);
    auto cost_c = std::move(cost);
    auto logp_c = std::move(logp);
    auto logq_c = std::move(logq);
    const int64_t T = iters;
    tape->record(tracked_inputs({{xd, tx}, {yd, ty}}), od, [=] {
        const double gout = ensure_grad(*od)[0];
        if (gout == 0.0) return;
        std::vector<double> df(static_cast<size_t>(ka)), dg(static_cast<size_t>(kb));
        for (int64_t i = 0; i < ka; ++i) df[static_cast<size_t>(i)] = gout * pw[static_cast<size_t>(i)];
        for (int64_t j = 0; j < kb; ++j) dg[static_cast<size_t>(j)] = gout * qw[static_cast<size_t>(j)];
        std::vector<double> dcost(static_cast<size_t>(ka * kb), 0.0);
        std::vector<double> df_prev(static_cast<size_t>(ka)), dg_prev(static_cast<size_t>(kb));
        static const std::vector<double> kEmpty;
        for (int64_t t = T - 1; t >= 0; --t) {
          const auto& f_prev = t > 0 ? fh[static_cast<size_t>(t - 1)] : kEmpty;
          const auto& g_prev = t > 0 ? gh[static_cast<size_t>(t - 1)] : kEmpty;
          auto fp = [&](int64_t i) { return t > 0 ? f_prev[static_cast<size_t>(i)] : 0.0; };
          auto gp = [&](int64_t j) { return t > 0 ? g_prev[static_cast<size_t>(j)] : 0.0; };
          // Recover the pre-average update targets: fnew = (f_prev + phi)/2.
          // phi_i = -eps*LSE_i, so the row LSE is -phi_i/eps.
          for (int64_t i = 0; i < ka; ++i) df_prev[static_cast<size_t>(i)] = 0.5 * df[static_cast<size_t>(i)];
          for (int64_t j = 0; j < kb; ++j) dg_prev[static_cast<size_t>(j)] = 0.5 * dg[static_cast<size_t>(j)];
          for (int64_t i = 0; i < ka; ++i) {
            const double phi = 2.0 * fh[static_cast<size_t>(t)][static_cast<size_t>(i)] - fp(i);
            const double dfi = 0.5 * df[static_cast<size_t>(i)];
            if (dfi == 0.0) continue;
            for (int64_t j = 0; j < kb; ++j) {
              // softmax weight of entry j in the f-update row i
              const double s = std::exp(logq_c[static_cast<size_t>(j)] +
                                        (gp(j) - cost_c[static_cast<size_t>(i * kb + j)] + phi) / eps);
              dcost[static_cast<size_t>(i * kb + j)] += dfi * s;
              dg_prev[static_cast<size_t>(j)] -= dfi * s;
            }
          }
          for (int64_t j = 0; j < kb; ++j) {
            const double psi = 2.0 * gh[static_cast<size_t>(t)][static_cast<size_t>(j)] - gp(j);
            const double dgj = 0.5 * dg[static_cast<size_t>(j)];
            for (int64_t i = 0; i < ka; ++i) {
              const double z = std::exp(logp_c[static_cast<size_t>(i)] +
                                        (fp(i) - cost_c[static_cast<size_t>(i * kb + j)] + psi) / eps);
              dcost[static_cast<size_t>(i * kb + j)] += dgj * z;
              df_prev[static_cast<size_t>(i)] -= dgj * z;
            }
          }
          df.swap(df_prev);
          dg.swap(dg_prev);
        }
        auto* xg = tx ? ensure_grad(*xd).data() : nullptr;
        auto* yg = ty ? ensure_grad(*yd).data() : nullptr;
        for (int64_t i = 0; i < ka; ++i)
          for (int64_t j = 0; j < kb; ++j) {
            const double dc = dcost[static_cast<size_t>(i * kb + j)];
            if (dc == 0.0) continue;
            for (int64_t c = 0; c < d; ++c) {
              const double diff = xd->values[static_cast<size_t>(i * d + c)] -
                                  yd->values[static_cast<size_t>(j * d + c)];
              if (xg) xg[i * d + c] += dc * diff;
              if (yg) yg[j * d + c] -= dc * diff;
            }
          }
    });
  }
  return result;
}

Tensor sinkhorn_divergence(const PointCloud& a, const PointCloud& b,
                           const SinkhornOptions& opt, Tape* tape,
                           SinkhornDiagnostics* diag) {
  SinkhornResult ab = entropic_ot(a, b, opt, tape);
  SinkhornResult aa = entropic_ot(a, a, opt, tape);
  SinkhornResult bb = entropic_ot(b, b, opt, tape);
  if (diag) {
    diag->solves += 3;
    diag->nonconverged += (ab.converged ? 0 : 1) + (aa.converged ? 0 : 1) + (bb.converged ? 0 : 1);
  }
  Tensor self_mean = affine(add(aa.value, bb.value, tape), -0.5, 0.0, tape);
  return add(ab.value, self_mean, tape);
}

Tensor minibatch_sinkhorn(const Tensor& samples, const LossConfig& cfg, Rng& rng,
                          Tape* tape, MinibatchSinkhornStats* stats) {
  if (samples.rank() != 3) throw ShapeError("minibatch_sinkhorn: samples must be [N,M,d]");
  cfg.validate();
  const int64_t N = samples.dim(0), M = samples.dim(1), d = samples.dim(2);
  if (cfg.M != M)
    throw ConfigError("minibatch_sinkhorn: cfg.M=" + std::to_string(cfg.M) +
                      " but samples carry M=" + std::to_string(M));
  const SinkhornOptions opt = SinkhornOptions::from(cfg);
  SinkhornDiagnostics diag;

  Tensor acc;
  for (int64_t n = 0; n < N; ++n) {
    for (int64_t l = 0; l < cfg.L; ++l) {
      Tensor block = row_block(samples, n, tape);
      Tensor chosen = cfg.K == M ? block : gather_rows(block, sample_subset(rng, M, cfg.K), tape);
      NormalizeResult norm = normalize_samples(chosen, cfg.prior, tape);
      if (norm.fully_degenerate()) {
        if (stats) ++stats->degenerate_skipped;
        continue;
      }
      PointCloud prior_cloud = sample_prior(cfg.prior, cfg.K, d, rng);
      Tensor div = sinkhorn_divergence(prior_cloud, PointCloud(norm.normalized), opt, tape, &diag);
      acc = acc.defined() ? add(acc, div, tape) : div;
    }
  }
  if (stats) stats->nonconverged += diag.nonconverged;
  if (!acc.defined()) return Tensor::scalar(0.0);
  return affine(acc, 1.0 / static_cast<double>(N * cfg.L), 0.0, tape);
}

}  // namespace samplenet
