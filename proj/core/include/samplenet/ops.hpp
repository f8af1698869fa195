#pragma once
#include <vector>

#include "samplenet/rng.hpp"
#include "samplenet/tape.hpp"
#include "samplenet/tensor.hpp"

namespace samplenet {

// Differentiable primitives. Every op evaluates eagerly; when `tape` is
// non-null and an operand is tracked, the op also records a backward node.
// Ops never mutate their inputs, so recorded values stay valid for backward.

enum class Dist { StandardNormal, Uniform01 };

Tensor rng_draw(Rng& rng, Dist dist, const Shape& shape);

// Elementwise, equal shapes.
Tensor add(const Tensor& a, const Tensor& b, Tape* tape = nullptr);
Tensor sub(const Tensor& a, const Tensor& b, Tape* tape = nullptr);
Tensor mul(const Tensor& a, const Tensor& b, Tape* tape = nullptr);

// scale * a + shift, elementwise with scalar coefficients.
Tensor affine(const Tensor& a, double scale, double shift, Tape* tape = nullptr);

Tensor tanh_op(const Tensor& a, Tape* tape = nullptr);
Tensor elu(const Tensor& a, Tape* tape = nullptr);
Tensor softplus(const Tensor& a, Tape* tape = nullptr);
Tensor exp_op(const Tensor& a, Tape* tape = nullptr);
Tensor log_op(const Tensor& a, Tape* tape = nullptr);  // domain error at x <= 0
Tensor sqrt_op(const Tensor& a, Tape* tape = nullptr);
Tensor reciprocal(const Tensor& a, Tape* tape = nullptr);
Tensor clamp_min(const Tensor& a, double lo, Tape* tape = nullptr);

// 2-d matrix product [m,k] x [k,n] -> [m,n].
Tensor matmul(const Tensor& a, const Tensor& b, Tape* tape = nullptr);

// Broadcast a length-n vector across the rows of an [m,n] matrix.
Tensor add_rowvec(const Tensor& m, const Tensor& v, Tape* tape = nullptr);
Tensor sub_rowvec(const Tensor& m, const Tensor& v, Tape* tape = nullptr);
Tensor mul_rowvec(const Tensor& m, const Tensor& v, Tape* tape = nullptr);

// Full reductions to a scalar.
Tensor sum(const Tensor& a, Tape* tape = nullptr);
Tensor mean(const Tensor& a, Tape* tape = nullptr);

// Column reductions [m,n] -> [n]. Min/max route their gradient to the first
// extremal row of each column (subgradient choice at ties).
Tensor colwise_mean(const Tensor& a, Tape* tape = nullptr);
Tensor colwise_min(const Tensor& a, Tape* tape = nullptr);
Tensor colwise_max(const Tensor& a, Tape* tape = nullptr);

// Row selection [m,n] -> [rows.size(), n]; backward scatter-adds.
Tensor gather_rows(const Tensor& a, const std::vector<int64_t>& rows,
                   Tape* tape = nullptr);

// n-th [M,d] block of an [N,M,d] tensor.
Tensor row_block(const Tensor& t, int64_t n, Tape* tape = nullptr);

// Same data, new shape (copies; identity backward).
Tensor reshape(const Tensor& a, Shape shape, Tape* tape = nullptr);

// Columns [begin, begin+count) of an [m,n] matrix.
Tensor slice_cols(const Tensor& a, int64_t begin, int64_t count,
                  Tape* tape = nullptr);

// Entry (i,k) is ||A_i - B_k|| (exponent 1) or ||A_i - B_k||^2 (exponent 2).
// For exponent 1 the gradient at coincident points is the zero subgradient.
Tensor pairwise_distance(const Tensor& a, const Tensor& b, int exponent,
                         Tape* tape = nullptr);

// sum_i ||A_i - y|| for A [K,d], y [d]. Zero subgradient at coincidence.
Tensor dist_to_point_sum(const Tensor& a, const Tensor& y, Tape* tape = nullptr);

// sum_{i,j} ||A_i - A_j|| over all ordered pairs (diagonal terms are zero).
Tensor pair_distance_sum(const Tensor& a, Tape* tape = nullptr);

}  // namespace samplenet
