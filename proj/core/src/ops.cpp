#include "samplenet/ops.hpp"

#include <cmath>
#include <utility>

namespace samplenet {
namespace {

using Data = std::shared_ptr<TensorData>;

void check_same_shape(const Tensor& a, const Tensor& b, const char* op) {
  if (a.shape() != b.shape())
    throw ShapeError(std::string(op) + ": shape mismatch " + shape_str(a.shape()) +
                     " vs " + shape_str(b.shape()));
}

void check_rank(const Tensor& t, int rank, const char* op) {
  if (t.rank() != rank)
    throw ShapeError(std::string(op) + ": expected rank " + std::to_string(rank) +
                     ", got " + shape_str(t.shape()));
}

// Records an elementwise unary node: dx += dy * dfn(x, y).
template <class Fn, class Dfn>
Tensor unary_op(const Tensor& a, Tape* tape, Fn fn, Dfn dfn) {
  Tensor out(a.shape());
  const double* x = a.data();
  double* y = out.data();
  const int64_t n = a.numel();
  for (int64_t i = 0; i < n; ++i) y[i] = fn(x[i]);
  if (tape && tape->tracks(a)) {
    Data ad = a.impl(), od = out.impl();
    tape->record({ad}, od, [ad, od, dfn] {
      auto& og = ensure_grad(*od);
      auto& ag = ensure_grad(*ad);
      for (size_t i = 0; i < ag.size(); ++i)
        ag[i] += og[i] * dfn(ad->values[i], od->values[i]);
    });
  }
  return out;
}

}  // namespace

Tensor rng_draw(Rng& rng, Dist dist, const Shape& shape) {
  Tensor out(shape);  // shape_numel validates positivity
  for (auto& v : out.values())
    v = dist == Dist::Uniform01 ? rng.next_uniform() : rng.next_normal();
  return out;
}

Tensor add(const Tensor& a, const Tensor& b, Tape* tape) {
  check_same_shape(a, b, "add");
  Tensor out(a.shape());
  for (int64_t i = 0; i < a.numel(); ++i) out.at(i) = a.at(i) + b.at(i);
  if (tape) {
    const bool ta = tape->tracks(a), tb = tape->tracks(b);
    if (ta || tb) {
      Data ad = a.impl(), bd = b.impl(), od = out.impl();
      tape->record(tracked_inputs({{ad, ta}, {bd, tb}}), od, [ad, bd, od, ta, tb] {
        auto& og = ensure_grad(*od);
        if (ta) {
          auto& g = ensure_grad(*ad);
          for (size_t i = 0; i < g.size(); ++i) g[i] += og[i];
        }
        if (tb) {
          auto& g = ensure_grad(*bd);
          for (size_t i = 0; i < g.size(); ++i) g[i] += og[i];
        }
      });
    }
  }
  return out;
}

Tensor sub(const Tensor& a, const Tensor& b, Tape* tape) {
  check_same_shape(a, b, "sub");
  Tensor out(a.shape());
  for (int64_t i = 0; i < a.numel(); ++i) out.at(i) = a.at(i) - b.at(i);
  if (tape) {
    const bool ta = tape->tracks(a), tb = tape->tracks(b);
    if (ta || tb) {
      Data ad = a.impl(), bd = b.impl(), od = out.impl();
      tape->record(tracked_inputs({{ad, ta}, {bd, tb}}), od, [ad, bd, od, ta, tb] {
        auto& og = ensure_grad(*od);
        if (ta) {
          auto& g = ensure_grad(*ad);
          for (size_t i = 0; i < g.size(); ++i) g[i] += og[i];
        }
        if (tb) {
          auto& g = ensure_grad(*bd);
          for (size_t i = 0; i < g.size(); ++i) g[i] -= og[i];
        }
      });
    }
  }
  return out;
}

Tensor mul(const Tensor& a, const Tensor& b, Tape* tape) {
  check_same_shape(a, b, "mul");
  Tensor out(a.shape());
  for (int64_t i = 0; i < a.numel(); ++i) out.at(i) = a.at(i) * b.at(i);
  if (tape) {
    const bool ta = tape->tracks(a), tb = tape->tracks(b);
    if (ta || tb) {
      Data ad = a.impl(), bd = b.impl(), od = out.impl();
      tape->record(tracked_inputs({{ad, ta}, {bd, tb}}), od, [ad, bd, od, ta, tb] {
        auto& og = ensure_grad(*od);
        if (ta) {
          auto& g = ensure_grad(*ad);
          for (size_t i = 0; i < g.size(); ++i) g[i] += og[i] * bd->values[i];
        }
        if (tb) {
          auto& g = ensure_grad(*bd);
          for (size_t i = 0; i < g.size(); ++i) g[i] += og[i] * ad->values[i];
        }
      });
    }
  }
  return out;
}

Tensor affine(const Tensor& a, double scale, double shift, Tape* tape) {
  return unary_op(
      a, tape, [scale, shift](double x) { return scale * x + shift; },
      [scale](double, double) { return scale; });
}

Tensor tanh_op(const Tensor& a, Tape* tape) {
  return unary_op(
      a, tape, [](double x) { return std::tanh(x); },
      [](double, double y) { return 1.0 - y * y; });
}

Tensor elu(const Tensor& a, Tape* tape) {
  return unary_op(
      a, tape, [](double x) { return x > 0.0 ? x : std::expm1(x); },
      [](double x, double y) { return x > 0.0 ? 1.0 : y + 1.0; });
}

Tensor softplus(const Tensor& a, Tape* tape) {
  return unary_op(
      a, tape,
      [](double x) { return std::log1p(std::exp(-std::fabs(x))) + std::max(x, 0.0); },
      [](double x, double) { return 1.0 / (1.0 + std::exp(-x)); });
}

Tensor exp_op(const Tensor& a, Tape* tape) {
  return unary_op(
      a, tape, [](double x) { return std::exp(x); },
      [](double, double y) { return y; });
}

Tensor log_op(const Tensor& a, Tape* tape) {
  for (int64_t i = 0; i < a.numel(); ++i)
    if (a.at(i) <= 0.0) throw NumericError("log: non-positive argument");
  return unary_op(
      a, tape, [](double x) { return std::log(x); },
      [](double x, double) { return 1.0 / x; });
}

Tensor sqrt_op(const Tensor& a, Tape* tape) {
  for (int64_t i = 0; i < a.numel(); ++i)
    if (a.at(i) < 0.0) throw NumericError("sqrt: negative argument");
  return unary_op(
      a, tape, [](double x) { return std::sqrt(x); },
      [](double, double y) { return y > 0.0 ? 0.5 / y : 0.0; });
}

Tensor reciprocal(const Tensor& a, Tape* tape) {
  for (int64_t i = 0; i < a.numel(); ++i)
    if (a.at(i) == 0.0) throw NumericError("reciprocal: zero argument");
  return unary_op(
      a, tape, [](double x) { return 1.0 / x; },
      [](double, double y) { return -y * y; });
}

Tensor clamp_min(const Tensor& a, double lo, Tape* tape) {
  return unary_op(
      a, tape, [lo](double x) { return x > lo ? x : lo; },
      [lo](double x, double) { return x > lo ? 1.0 : 0.0; });
}

Tensor matmul(const Tensor& a, const Tensor& b, Tape* tape) {
  check_rank(a, 2, "matmul");
  check_rank(b, 2, "matmul");
  const int64_t m = a.dim(0), k = a.dim(1), n = b.dim(1);
  if (b.dim(0) != k)
    throw ShapeError("matmul: inner dims " + shape_str(a.shape()) + " vs " +
                     shape_str(b.shape()));
  Tensor out(Shape{m, n});
  {
    const double* A = a.data();
    const double* B = b.data();
    double* O = out.data();
    for (int64_t i = 0; i < m; ++i)
      for (int64_t kk = 0; kk < k; ++kk) {
        const double aik = A[i * k + kk];
        const double* brow = B + kk * n;
        double* orow = O + i * n;
        for (int64_t j = 0; j < n; ++j) orow[j] += aik * brow[j];
      }
  }
  if (tape) {
    const bool ta = tape->tracks(a), tb = tape->tracks(b);
    if (ta || tb) {
      Data ad = a.impl(), bd = b.impl(), od = out.impl();
      tape->record(tracked_inputs({{ad, ta}, {bd, tb}}), od, [ad, bd, od, ta, tb, m, k, n] {
        auto& og = ensure_grad(*od);
        if (ta) {
          auto& ag = ensure_grad(*ad);
          const double* B = bd->values.data();
          for (int64_t i = 0; i < m; ++i)
            for (int64_t kk = 0; kk < k; ++kk) {
              double acc = 0.0;
              const double* grow = og.data() + i * n;
              const double* brow = B + kk * n;
              for (int64_t j = 0; j < n; ++j) acc += grow[j] * brow[j];
              ag[static_cast<size_t>(i * k + kk)] += acc;
            }
        }
        if (tb) {
          auto& bg = ensure_grad(*bd);
          const double* A = ad->values.data();
          for (int64_t i = 0; i < m; ++i)
            for (int64_t kk = 0; kk < k; ++kk) {
              const double aik = A[i * k + kk];
              const double* grow = og.data() + i * n;
              double* brow = bg.data() + kk * n;
              for (int64_t j = 0; j < n; ++j) brow[j] += aik * grow[j];
            }
        }
      });
    }
  }
  return out;
}

namespace {

// Shared machinery for {add,sub,mul}_rowvec.
enum class RowOp { Add, Sub, Mul };

Tensor rowvec_op(RowOp which, const Tensor& m, const Tensor& v, Tape* tape,
                 const char* name) {
  check_rank(m, 2, name);
  const int64_t rows = m.dim(0), cols = m.dim(1);
  if (v.numel() != cols)
    throw ShapeError(std::string(name) + ": vector length " + std::to_string(v.numel()) +
                     " vs columns " + std::to_string(cols));
  Tensor out(m.shape());
  for (int64_t i = 0; i < rows; ++i)
    for (int64_t j = 0; j < cols; ++j) {
      const double x = m.at(i * cols + j), w = v.at(j);
      out.at(i * cols + j) = which == RowOp::Add   ? x + w
                             : which == RowOp::Sub ? x - w
                                                   : x * w;
    }
  if (tape) {
    const bool tm = tape->tracks(m), tv = tape->tracks(v);
    if (tm || tv) {
      Data md = m.impl(), vd = v.impl(), od = out.impl();
      tape->record(tracked_inputs({{md, tm}, {vd, tv}}), od, [md, vd, od, tm, tv, rows, cols, which] {
        auto& og = ensure_grad(*od);
        if (tm) {
          auto& mg = ensure_grad(*md);
          for (int64_t i = 0; i < rows * cols; ++i)
            mg[static_cast<size_t>(i)] +=
                which == RowOp::Mul ? og[static_cast<size_t>(i)] * vd->values[static_cast<size_t>(i % cols)]
                                    : og[static_cast<size_t>(i)];
        }
        if (tv) {
          auto& vg = ensure_grad(*vd);
          for (int64_t i = 0; i < rows; ++i)
            for (int64_t j = 0; j < cols; ++j) {
              const double g = og[static_cast<size_t>(i * cols + j)];
              if (which == RowOp::Add) vg[static_cast<size_t>(j)] += g;
              else if (which == RowOp::Sub) vg[static_cast<size_t>(j)] -= g;
              else vg[static_cast<size_t>(j)] += g * md->values[static_cast<size_t>(i * cols + j)];
            }
        }
      });
    }
  }
  return out;
}

}  // namespace

Tensor add_rowvec(const Tensor& m, const Tensor& v, Tape* tape) {
  return rowvec_op(RowOp::Add, m, v, tape, "add_rowvec");
}
Tensor sub_rowvec(const Tensor& m, const Tensor& v, Tape* tape) {
  return rowvec_op(RowOp::Sub, m, v, tape, "sub_rowvec");
}
Tensor mul_rowvec(const Tensor& m, const Tensor& v, Tape* tape) {
  return rowvec_op(RowOp::Mul, m, v, tape, "mul_rowvec");
}

Tensor sum(const Tensor& a, Tape* tape) {
  double s = 0.0;
  for (int64_t i = 0; i < a.numel(); ++i) s += a.at(i);
  Tensor out = Tensor::scalar(s);
  if (tape && tape->tracks(a)) {
    Data ad = a.impl(), od = out.impl();
    tape->record({ad}, od, [ad, od] {
      const double g = ensure_grad(*od)[0];
      auto& ag = ensure_grad(*ad);
      for (auto& x : ag) x += g;
    });
  }
  return out;
}

Tensor mean(const Tensor& a, Tape* tape) {
  return affine(sum(a, tape), 1.0 / static_cast<double>(a.numel()), 0.0, tape);
}

Tensor colwise_mean(const Tensor& a, Tape* tape) {
  check_rank(a, 2, "colwise_mean");
  const int64_t m = a.dim(0), n = a.dim(1);
  Tensor out(Shape{n});
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = 0; j < n; ++j) out.at(j) += a.at(i * n + j);
  for (int64_t j = 0; j < n; ++j) out.at(j) /= static_cast<double>(m);
  if (tape && tape->tracks(a)) {
    Data ad = a.impl(), od = out.impl();
    tape->record({ad}, od, [ad, od, m, n] {
      auto& og = ensure_grad(*od);
      auto& ag = ensure_grad(*ad);
      const double inv = 1.0 / static_cast<double>(m);
      for (int64_t i = 0; i < m; ++i)
        for (int64_t j = 0; j < n; ++j)
          ag[static_cast<size_t>(i * n + j)] += og[static_cast<size_t>(j)] * inv;
    });
  }
  return out;
}

namespace {

Tensor colwise_extreme(const Tensor& a, Tape* tape, bool take_max) {
  check_rank(a, 2, take_max ? "colwise_max" : "colwise_min");
  const int64_t m = a.dim(0), n = a.dim(1);
  Tensor out(Shape{n});
  std::vector<int64_t> arg(static_cast<size_t>(n), 0);
  for (int64_t j = 0; j < n; ++j) {
    double best = a.at(j);
    for (int64_t i = 1; i < m; ++i) {
      const double v = a.at(i * n + j);
      if (take_max ? v > best : v < best) {
        best = v;
        arg[static_cast<size_t>(j)] = i;
      }
    }
    out.at(j) = best;
  }
  if (tape && tape->tracks(a)) {
    Data ad = a.impl(), od = out.impl();
    tape->record({ad}, od, [ad, od, arg, n] {
      auto& og = ensure_grad(*od);
      auto& ag = ensure_grad(*ad);
      for (int64_t j = 0; j < n; ++j)
        ag[static_cast<size_t>(arg[static_cast<size_t>(j)] * n + j)] += og[static_cast<size_t>(j)];
    });
  }
  return out;
}

}  // namespace

Tensor colwise_min(const Tensor& a, Tape* tape) { return colwise_extreme(a, tape, false); }
Tensor colwise_max(const Tensor& a, Tape* tape) { return colwise_extreme(a, tape, true); }

Tensor gather_rows(const Tensor& a, const std::vector<int64_t>& rows, Tape* tape) {
  check_rank(a, 2, "gather_rows");
  const int64_t m = a.dim(0), n = a.dim(1);
  for (int64_t r : rows)
    if (r < 0 || r >= m) throw ShapeError("gather_rows: row index out of range");
  if (rows.empty()) throw ShapeError("gather_rows: empty row list");
  Tensor out(Shape{static_cast<int64_t>(rows.size()), n});
  for (size_t i = 0; i < rows.size(); ++i)
    for (int64_t j = 0; j < n; ++j)
      out.at(static_cast<int64_t>(i) * n + j) = a.at(rows[i] * n + j);
  if (tape && tape->tracks(a)) {
    Data ad = a.impl(), od = out.impl();
    tape->record({ad}, od, [ad, od, rows, n] {
      auto& og = ensure_grad(*od);
      auto& ag = ensure_grad(*ad);
      for (size_t i = 0; i < rows.size(); ++i)
        for (int64_t j = 0; j < n; ++j)
          ag[static_cast<size_t>(rows[i] * n + j)] += og[i * static_cast<size_t>(n) + static_cast<size_t>(j)];
    });
  }
  return out;
}

Tensor row_block(const Tensor& t, int64_t n, Tape* tape) {
  check_rank(t, 3, "row_block");
  const int64_t N = t.dim(0), M = t.dim(1), d = t.dim(2);
  if (n < 0 || n >= N) throw ShapeError("row_block: index out of range");
  Tensor out(Shape{M, d});
  const int64_t base = n * M * d;
  for (int64_t i = 0; i < M * d; ++i) out.at(i) = t.at(base + i);
  if (tape && tape->tracks(t)) {
    Data td = t.impl(), od = out.impl();
    tape->record({td}, od, [td, od, base, M, d] {
      auto& og = ensure_grad(*od);
      auto& tg = ensure_grad(*td);
      for (int64_t i = 0; i < M * d; ++i) tg[static_cast<size_t>(base + i)] += og[static_cast<size_t>(i)];
    });
  }
  return out;
}

Tensor reshape(const Tensor& a, Shape shape, Tape* tape) {
  if (shape_numel(shape) != a.numel())
    throw ShapeError("reshape: cannot view " + shape_str(a.shape()) + " as " + shape_str(shape));
  Tensor out(std::move(shape), a.values());
  if (tape && tape->tracks(a)) {
    Data ad = a.impl(), od = out.impl();
    tape->record({ad}, od, [ad, od] {
      auto& og = ensure_grad(*od);
      auto& ag = ensure_grad(*ad);
      for (size_t i = 0; i < ag.size(); ++i) ag[i] += og[i];
    });
  }
  return out;
}

Tensor slice_cols(const Tensor& a, int64_t begin, int64_t count, Tape* tape) {
  check_rank(a, 2, "slice_cols");
  const int64_t m = a.dim(0), n = a.dim(1);
  if (begin < 0 || count <= 0 || begin + count > n)
    throw ShapeError("slice_cols: range out of bounds");
  Tensor out(Shape{m, count});
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = 0; j < count; ++j) out.at(i * count + j) = a.at(i * n + begin + j);
  if (tape && tape->tracks(a)) {
    Data ad = a.impl(), od = out.impl();
    tape->record({ad}, od, [ad, od, m, n, begin, count] {
      auto& og = ensure_grad(*od);
      auto& ag = ensure_grad(*ad);
      for (int64_t i = 0; i < m; ++i)
        for (int64_t j = 0; j < count; ++j)
          ag[static_cast<size_t>(i * n + begin + j)] += og[static_cast<size_t>(i * count + j)];
    });
  }
  return out;
}

Tensor pairwise_distance(const Tensor& a, const Tensor& b, int exponent, Tape* tape) {
  check_rank(a, 2, "pairwise_distance");
  check_rank(b, 2, "pairwise_distance");
  if (a.dim(1) != b.dim(1))
    throw ShapeError("pairwise_distance: trailing dims differ, " + shape_str(a.shape()) +
                     " vs " + shape_str(b.shape()));
  if (exponent != 1 && exponent != 2)
    throw ConfigError("pairwise_distance: exponent must be 1 or 2");
  const int64_t m = a.dim(0), k = b.dim(0), d = a.dim(1);
  Tensor out(Shape{m, k});
  for (int64_t i = 0; i < m; ++i)
    for (int64_t j = 0; j < k; ++j) {
      double sq = 0.0;
      for (int64_t c = 0; c < d; ++c) {
        const double t = a.at(i * d + c) - b.at(j * d + c);
        sq += t * t;
      }
      out.at(i * k + j) = exponent == 2 ? sq : std::sqrt(sq);
    }
  if (tape) {
    const bool ta = tape->tracks(a), tb = tape->tracks(b);
    if (ta || tb) {
      Data ad = a.impl(), bd = b.impl(), od = out.impl();
      tape->record(tracked_inputs({{ad, ta}, {bd, tb}}), od, [ad, bd, od, ta, tb, m, k, d, exponent] {
        auto& og = ensure_grad(*od);
        auto* ag = ta ? ensure_grad(*ad).data() : nullptr;
        auto* bg = tb ? ensure_grad(*bd).data() : nullptr;
        for (int64_t i = 0; i < m; ++i)
          for (int64_t j = 0; j < k; ++j) {
            const double g = og[static_cast<size_t>(i * k + j)];
            if (g == 0.0) continue;
            const double dist = od->values[static_cast<size_t>(i * k + j)];
            for (int64_t c = 0; c < d; ++c) {
              const double diff = ad->values[static_cast<size_t>(i * d + c)] -
                                  bd->values[static_cast<size_t>(j * d + c)];
              double dd;  // d dist / d diff
              if (exponent == 2) dd = 2.0 * diff;
              else dd = dist > 0.0 ? diff / dist : 0.0;  // zero subgradient at coincidence
              if (ag) ag[i * d + c] += g * dd;
              if (bg) bg[j * d + c] -= g * dd;
            }
          }
      });
    }
  }
  return out;
}

Tensor dist_to_point_sum(const Tensor& a, const Tensor& y, Tape* tape) {
  check_rank(a, 2, "dist_to_point_sum");
  const int64_t k = a.dim(0), d = a.dim(1);
  if (y.numel() != d) throw ShapeError("dist_to_point_sum: point dim mismatch");
  double total = 0.0;
  if (d == 1) {
    const double yy = y.at(0);
    for (int64_t i = 0; i < k; ++i) total += std::fabs(a.at(i) - yy);
  } else {
    for (int64_t i = 0; i < k; ++i) {
      double sq = 0.0;
      for (int64_t c = 0; c < d; ++c) {
        const double t = a.at(i * d + c) - y.at(c);
        sq += t * t;
      }
      total += std::sqrt(sq);
    }
  }
  Tensor out = Tensor::scalar(total);
  if (tape) {
    const bool ta = tape->tracks(a), ty = tape->tracks(y);
    if (ta || ty) {
      Data ad = a.impl(), yd = y.impl(), od = out.impl();
      tape->record(tracked_inputs({{ad, ta}, {yd, ty}}), od, [ad, yd, od, ta, ty, k, d] {
        const double g = ensure_grad(*od)[0];
        if (g == 0.0) return;
        auto* ag = ta ? ensure_grad(*ad).data() : nullptr;
        auto* yg = ty ? ensure_grad(*yd).data() : nullptr;
        for (int64_t i = 0; i < k; ++i) {
          double sq = 0.0;
          for (int64_t c = 0; c < d; ++c) {
            const double t = ad->values[static_cast<size_t>(i * d + c)] - yd->values[static_cast<size_t>(c)];
            sq += t * t;
          }
          const double dist = std::sqrt(sq);
          if (dist == 0.0) continue;
          for (int64_t c = 0; c < d; ++c) {
            const double u = (ad->values[static_cast<size_t>(i * d + c)] -
                              yd->values[static_cast<size_t>(c)]) / dist;
            if (ag) ag[i * d + c] += g * u;
            if (yg) yg[c] -= g * u;
          }
        }
      });
    }
  }
  return out;
}

Tensor pair_distance_sum(const Tensor& a, Tape* tape) {
  check_rank(a, 2, "pair_distance_sum");
  const int64_t k = a.dim(0), d = a.dim(1);
  double total = 0.0;
  if (d == 1) {
    for (int64_t i = 0; i < k; ++i) {
      const double ai = a.at(i);
      for (int64_t j = i + 1; j < k; ++j) total += std::fabs(ai - a.at(j));
    }
  } else {
    for (int64_t i = 0; i < k; ++i)
      for (int64_t j = i + 1; j < k; ++j) {
        double sq = 0.0;
        for (int64_t c = 0; c < d; ++c) {
          const double t = a.at(i * d + c) - a.at(j * d + c);
          sq += t * t;
        }
        total += std::sqrt(sq);
      }
  }
  Tensor out = Tensor::scalar(2.0 * total);  // ordered pairs
  if (tape && tape->tracks(a)) {
    Data ad = a.impl(), od = out.impl();
    tape->record({ad}, od, [ad, od, k, d] {
      const double g = ensure_grad(*od)[0];
      if (g == 0.0) return;
      auto& ag = ensure_grad(*ad);
      for (int64_t i = 0; i < k; ++i)
        for (int64_t j = i + 1; j < k; ++j) {
          double sq = 0.0;
          for (int64_t c = 0; c < d; ++c) {
            const double t = ad->values[static_cast<size_t>(i * d + c)] -
                             ad->values[static_cast<size_t>(j * d + c)];
            sq += t * t;
          }
          const double dist = std::sqrt(sq);
          if (dist == 0.0) continue;
          const double w = 2.0 * g / dist;  // both orderings of the pair
          for (int64_t c = 0; c < d; ++c) {
            const double diff = ad->values[static_cast<size_t>(i * d + c)] -
                                ad->values[static_cast<size_t>(j * d + c)];
            ag[static_cast<size_t>(i * d + c)] += w * diff;
            ag[static_cast<size_t>(j * d + c)] -= w * diff;
          }
        }
    });
  }
  return out;
}

}  // namespace samplenet
