#pragma once

#include <memory>
#include <vector>

#include "ndgrad/tensor.hpp"

// Differentiable ops. Every backward is written in terms of these same ops, so
// gradients can themselves be differentiated (second-order meta-learning).
namespace lift::ndgrad {

// Elementwise, numpy-style broadcasting.
Tensor add(const Tensor& a, const Tensor& b);
Tensor sub(const Tensor& a, const Tensor& b);
Tensor mul(const Tensor& a, const Tensor& b);
Tensor neg(const Tensor& x);
Tensor scale(const Tensor& x, double factor);
Tensor add_scalar(const Tensor& x, double value);
Tensor square(const Tensor& x);
Tensor abs(const Tensor& x);

// sin(omega * x) and cos(omega * x).
Tensor sin_act(const Tensor& x, double omega);
Tensor cos_act(const Tensor& x, double omega);

// a: [..., p, q], b: [q, r] shared or [..., q, r] with the same batch dims.
// The flags transpose the trailing two axes of the respective operand.
Tensor matmul(const Tensor& a, const Tensor& b, bool transpose_a = false, bool transpose_b = false);
Tensor transpose_last2(const Tensor& x);

Tensor sum(const Tensor& x);
Tensor mean(const Tensor& x);
// Reduce to `shape` along broadcast axes (inverse of broadcast_to).
Tensor sum_to(const Tensor& x, const Shape& shape);
Tensor broadcast_to(const Tensor& x, const Shape& shape);

Tensor reshape(const Tensor& x, const Shape& shape);
Tensor concat(const std::vector<Tensor>& parts, std::size_t axis);
Tensor concat_lastdim(const Tensor& a, const Tensor& b);
Tensor narrow(const Tensor& x, std::size_t axis, std::size_t start, std::size_t length);
// Zero-pads along `axis` so that x occupies [start, start + x.dim(axis)) of `total`.
Tensor pad_axis(const Tensor& x, std::size_t axis, std::size_t start, std::size_t total);

// x: [s_1, ..., s_k, c] replicated to [t_1, ..., t_k, c]; every t_i must be a
// positive multiple of s_i.
Tensor nearest_upsample(const Tensor& x, const Shape& spatial_target);
Tensor nearest_upsample(const Tensor& x, std::size_t target_h, std::size_t target_w);
// Adjoint of nearest_upsample: sums each replication block.
Tensor block_sum(const Tensor& x, const Shape& spatial_source);

using IndexList = std::shared_ptr<const std::vector<std::size_t>>;

// Treats axis 0 as rows. gather: out[i] = x[index[i]]. scatter: out[index[i]] += x[i].
Tensor gather_rows(const Tensor& x, const IndexList& index);
Tensor scatter_rows(const Tensor& x, const IndexList& index, std::size_t rows);

Shape broadcast_shapes(const Shape& a, const Shape& b);

}  // namespace lift::ndgrad
