#include "ndgrad/ops.hpp"

#include <Eigen/Core>
#include <algorithm>
#include <array>
#include <cmath>

#include "common/error.hpp"
#include "ndgrad/autograd.hpp"

namespace lift::ndgrad {
namespace {

using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using ConstMap = Eigen::Map<const RowMat>;
using MutMap = Eigen::Map<RowMat>;

// Strides of `in` when viewed with the (right-aligned) rank of `out`; broadcast
// axes get stride 0.
std::vector<std::size_t> aligned_strides(const Shape& in, const Shape& out) {
  const std::size_t r = out.size();
  std::vector<std::size_t> strides(r, 0);
  std::size_t stride = 1;
  for (std::size_t k = in.size(); k-- > 0;) {
    const std::size_t o = r - in.size() + k;
    strides[o] = (in[k] == 1 && out[o] != 1) ? 0 : stride;
    stride *= in[k];
  }
  return strides;
}

// Visits every multi-index of `shape`, passing the flat offsets into each
// strided operand.
template <std::size_t N, typename F>
void for_each_index(const Shape& shape, const std::array<std::vector<std::size_t>, N>& strides, F&& f) {
  const std::size_t r = shape.size();
  const std::size_t total = numel_of(shape);
  std::vector<std::size_t> counter(r, 0);
  std::array<std::size_t, N> offset{};
  for (std::size_t flat = 0; flat < total; ++flat) {
    f(flat, offset);
    for (std::size_t k = r; k-- > 0;) {
      ++counter[k];
      for (std::size_t s = 0; s < N; ++s) offset[s] += strides[s][k];
      if (counter[k] < shape[k]) break;
      for (std::size_t s = 0; s < N; ++s) offset[s] -= strides[s][k] * shape[k];
      counter[k] = 0;
    }
  }
}

template <typename F>
std::vector<double> binary_map(const Tensor& a, const Tensor& b, const Shape& out_shape, F f) {
  const auto da = a.data();
  const auto db = b.data();
  std::vector<double> out(numel_of(out_shape));
  if (a.shape() == b.shape()) {
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(da[i], db[i]);
  } else if (b.numel() == 1 && a.shape() == out_shape) {
    const double v = db[0];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(da[i], v);
  } else if (a.numel() == 1 && b.shape() == out_shape) {
    const double v = da[0];
    for (std::size_t i = 0; i < out.size(); ++i) out[i] = f(v, db[i]);
  } else {
    const std::array<std::vector<std::size_t>, 2> strides{aligned_strides(a.shape(), out_shape),
                                                          aligned_strides(b.shape(), out_shape)};
    for_each_index<2>(out_shape, strides, [&](std::size_t flat, const std::array<std::size_t, 2>& off) {
      out[flat] = f(da[off[0]], db[off[1]]);
    });
  }
  return out;
}

template <typename F>
std::vector<double> unary_map(const Tensor& x, F f) {
  const auto d = x.data();
  std::vector<double> out(d.size());
  for (std::size_t i = 0; i < d.size(); ++i) out[i] = f(d[i]);
  return out;
}

Tensor reduce_like(const Tensor& g, const Tensor& like) {
  return g.shape() == like.shape() ? g : sum_to(g, like.shape());
}

std::size_t prod(const Shape& s, std::size_t begin, std::size_t end) {
  std::size_t n = 1;
  for (std::size_t i = begin; i < end; ++i) n *= s[i];
  return n;
}

}  // namespace

Shape broadcast_shapes(const Shape& a, const Shape& b) {
  const std::size_t r = std::max(a.size(), b.size());
  Shape out(r, 1);
  for (std::size_t k = 0; k < r; ++k) {
    const std::size_t da = k < r - a.size() ? 1 : a[k - (r - a.size())];
    const std::size_t db = k < r - b.size() ? 1 : b[k - (r - b.size())];
    if (da != db && da != 1 && db != 1) {
      fail(ErrorKind::Dimension, "cannot broadcast shapes " + shape_str(a) + " and " + shape_str(b));
    }
    out[k] = std::max(da, db);
  }
  return out;
}

Tensor add(const Tensor& a, const Tensor& b) {
  Shape shape = broadcast_shapes(a.shape(), b.shape());
  auto data = binary_map(a, b, shape, [](double x, double y) { return x + y; });
  return Tensor::from_op(std::move(shape), std::move(data), {a, b},
                         [a, b](const Tensor& g, std::vector<Tensor>& out) {
                           if (needs_grad(a)) out[0] = reduce_like(g, a);
                           if (needs_grad(b)) out[1] = reduce_like(g, b);
                         },
                         "add");
}

Tensor sub(const Tensor& a, const Tensor& b) {
  Shape shape = broadcast_shapes(a.shape(), b.shape());
  auto data = binary_map(a, b, shape, [](double x, double y) { return x - y; });
  return Tensor::from_op(std::move(shape), std::move(data), {a, b},
                         [a, b](const Tensor& g, std::vector<Tensor>& out) {
                           if (needs_grad(a)) out[0] = reduce_like(g, a);
                           if (needs_grad(b)) out[1] = reduce_like(neg(g), b);
                         },
                         "sub");
}

Tensor mul(const Tensor& a, const Tensor& b) {
  Shape shape = broadcast_shapes(a.shape(), b.shape());
  auto data = binary_map(a, b, shape, [](double x, double y) { return x * y; });
  return Tensor::from_op(std::move(shape), std::move(data), {a, b},
                         [a, b](const Tensor& g, std::vector<Tensor>& out) {
                           if (needs_grad(a)) out[0] = reduce_like(mul(g, b), a);
                           if (needs_grad(b)) out[1] = reduce_like(mul(g, a), b);
                         },
                         "mul");
}

Tensor neg(const Tensor& x) {
  return Tensor::from_op(x.shape(), unary_map(x, [](double v) { return -v; }), {x},
                         [](const Tensor& g, std::vector<Tensor>& out) { out[0] = neg(g); }, "neg");
}

Tensor scale(const Tensor& x, double factor) {
  return Tensor::from_op(x.shape(), unary_map(x, [factor](double v) { return v * factor; }), {x},
                         [factor](const Tensor& g, std::vector<Tensor>& out) { out[0] = scale(g, factor); },
                         "scale");
}

Tensor add_scalar(const Tensor& x, double value) {
  return Tensor::from_op(x.shape(), unary_map(x, [value](double v) { return v + value; }), {x},
                         [](const Tensor& g, std::vector<Tensor>& out) { out[0] = g; }, "add_scalar");
}

Tensor square(const Tensor& x) {
  return Tensor::from_op(x.shape(), unary_map(x, [](double v) { return v * v; }), {x},
                         [x](const Tensor& g, std::vector<Tensor>& out) { out[0] = mul(g, scale(x, 2.0)); },
                         "square");
}

Tensor abs(const Tensor& x) {
  return Tensor::from_op(x.shape(), unary_map(x, [](double v) { return std::fabs(v); }), {x},
                         [x](const Tensor& g, std::vector<Tensor>& out) {
                           // sign(x) is piecewise constant, so it enters the graph as data.
                           Tensor sign(x.shape(), unary_map(x, [](double v) { return v > 0 ? 1.0 : (v < 0 ? -1.0 : 0.0); }));
                           out[0] = mul(g, sign);
                         },
                         "abs");
}

Tensor sin_act(const Tensor& x, double omega) {
  require(omega > 0, ErrorKind::Domain, "sin_act needs omega > 0");
  return Tensor::from_op(x.shape(), unary_map(x, [omega](double v) { return std::sin(omega * v); }), {x},
                         [x, omega](const Tensor& g, std::vector<Tensor>& out) {
                           out[0] = mul(g, scale(cos_act(x, omega), omega));
                         },
                         "sin");
}

Tensor cos_act(const Tensor& x, double omega) {
  require(omega > 0, ErrorKind::Domain, "cos_act needs omega > 0");
  return Tensor::from_op(x.shape(), unary_map(x, [omega](double v) { return std::cos(omega * v); }), {x},
                         [x, omega](const Tensor& g, std::vector<Tensor>& out) {
                           out[0] = mul(g, scale(sin_act(x, omega), -omega));
                         },
                         "cos");
}

Tensor matmul(const Tensor& a, const Tensor& b, bool transpose_a, bool transpose_b) {
  require(a.rank() >= 2 && b.rank() >= 2, ErrorKind::Dimension,
          "matmul needs rank >= 2 operands, got " + shape_str(a.shape()) + " and " + shape_str(b.shape()));
  const Shape& sa = a.shape();
  const Shape& sb = b.shape();
  const std::size_t ra = sa[sa.size() - 2], ca = sa.back();
  const std::size_t rb = sb[sb.size() - 2], cb = sb.back();
  const std::size_t p = transpose_a ? ca : ra;
  const std::size_t q = transpose_a ? ra : ca;
  const std::size_t qb = transpose_b ? cb : rb;
  const std::size_t r = transpose_b ? rb : cb;
  const bool shared_b = b.rank() == 2;
  const Shape batch_a(sa.begin(), sa.end() - 2);
  const Shape batch_b(sb.begin(), sb.end() - 2);
  if (q != qb || (!shared_b && batch_a != batch_b)) {
    fail(ErrorKind::Dimension, "matmul shape mismatch: " + shape_str(sa) + (transpose_a ? "^T" : "") + " x " +
                                   shape_str(sb) + (transpose_b ? "^T" : ""));
  }
  const std::size_t batch = numel_of(batch_a);
  Shape out_shape = batch_a;
  out_shape.push_back(p);
  out_shape.push_back(r);
  std::vector<double> out(batch * p * r);
  const double* pa = a.data().data();
  const double* pb = b.data().data();
  for (std::size_t n = 0; n < batch; ++n) {
    ConstMap A(pa + n * ra * ca, static_cast<Eigen::Index>(ra), static_cast<Eigen::Index>(ca));
    ConstMap B(pb + (shared_b ? 0 : n * rb * cb), static_cast<Eigen::Index>(rb), static_cast<Eigen::Index>(cb));
    MutMap C(out.data() + n * p * r, static_cast<Eigen::Index>(p), static_cast<Eigen::Index>(r));
    if (!transpose_a && !transpose_b) {
      C.noalias() = A * B;
    } else if (!transpose_a && transpose_b) {
      C.noalias() = A * B.transpose();
    } else if (transpose_a && !transpose_b) {
      C.noalias() = A.transpose() * B;
    } else {
      C.noalias() = A.transpose() * B.transpose();
    }
  }
  return Tensor::from_op(
      std::move(out_shape), std::move(out), {a, b},
      [a, b, transpose_a, transpose_b, shared_b, p, q, r](const Tensor& g, std::vector<Tensor>& grads) {
        if (needs_grad(a)) {
          Tensor d_op_a = matmul(g, b, false, !transpose_b);
          grads[0] = transpose_a ? transpose_last2(d_op_a) : d_op_a;
        }
        if (needs_grad(b)) {
          Tensor d_op_b;
          if (!shared_b || a.rank() == 2) {
            d_op_b = matmul(a, g, !transpose_a, false);
          } else if (!transpose_a) {
            const std::size_t rows = a.numel() / q;
            d_op_b = matmul(reshape(a, {rows, q}), reshape(g, {rows, r}), true, false);
          } else {
            d_op_b = sum_to(matmul(a, g, false, false), {q, r});
          }
          grads[1] = transpose_b ? transpose_last2(d_op_b) : d_op_b;
        }
        (void)p;
      },
      "matmul");
}

Tensor transpose_last2(const Tensor& x) {
  require(x.rank() >= 2, ErrorKind::Rank, "transpose_last2 needs rank >= 2, got " + shape_str(x.shape()));
  const Shape& s = x.shape();
  const std::size_t rows = s[s.size() - 2], cols = s.back();
  const std::size_t batch = x.numel() / (rows * cols);
  Shape out_shape = s;
  std::swap(out_shape[s.size() - 2], out_shape[s.size() - 1]);
  std::vector<double> out(x.numel());
  const auto d = x.data();
  for (std::size_t n = 0; n < batch; ++n) {
    const double* src = d.data() + n * rows * cols;
    double* dst = out.data() + n * rows * cols;
    for (std::size_t i = 0; i < rows; ++i) {
      for (std::size_t j = 0; j < cols; ++j) dst[j * rows + i] = src[i * cols + j];
    }
  }
  return Tensor::from_op(std::move(out_shape), std::move(out), {x},
                         [](const Tensor& g, std::vector<Tensor>& grads) { grads[0] = transpose_last2(g); },
                         "transpose");
}

Tensor sum(const Tensor& x) {
  double total = 0.0;
  for (double v : x.data()) total += v;
  return Tensor::from_op({}, {total}, {x},
                         [x](const Tensor& g, std::vector<Tensor>& grads) { grads[0] = broadcast_to(g, x.shape()); },
                         "sum");
}

Tensor mean(const Tensor& x) { return scale(sum(x), 1.0 / static_cast<double>(x.numel())); }

Tensor sum_to(const Tensor& x, const Shape& shape) {
  if (broadcast_shapes(shape, x.shape()) != x.shape() || shape.size() > x.rank()) {
    fail(ErrorKind::Dimension, "cannot reduce " + shape_str(x.shape()) + " to " + shape_str(shape));
  }
  std::vector<double> out(numel_of(shape), 0.0);
  const auto d = x.data();
  if (out.size() == 1) {
    double total = 0.0;
    for (double v : d) total += v;
    out[0] = total;
  } else {
    const std::array<std::vector<std::size_t>, 1> strides{aligned_strides(shape, x.shape())};
    for_each_index<1>(x.shape(), strides, [&](std::size_t flat, const std::array<std::size_t, 1>& off) {
      out[off[0]] += d[flat];
    });
  }
  return Tensor::from_op(shape, std::move(out), {x},
                         [x](const Tensor& g, std::vector<Tensor>& grads) { grads[0] = broadcast_to(g, x.shape()); },
                         "sum_to");
}

Tensor broadcast_to(const Tensor& x, const Shape& shape) {
  if (broadcast_shapes(x.shape(), shape) != shape) {
    fail(ErrorKind::Dimension, "cannot broadcast " + shape_str(x.shape()) + " to " + shape_str(shape));
  }
  std::vector<double> out(numel_of(shape));
  const auto d = x.data();
  if (d.size() == 1) {
    std::fill(out.begin(), out.end(), d[0]);
  } else {
    const std::array<std::vector<std::size_t>, 1> strides{aligned_strides(x.shape(), shape)};
    for_each_index<1>(shape, strides, [&](std::size_t flat, const std::array<std::size_t, 1>& off) {
      out[flat] = d[off[0]];
    });
  }
  return Tensor::from_op(shape, std::move(out), {x},
                         [x](const Tensor& g, std::vector<Tensor>& grads) { grads[0] = sum_to(g, x.shape()); },
                         "broadcast_to");
}

Tensor reshape(const Tensor& x, const Shape& shape) {
  require(numel_of(shape) == x.numel(), ErrorKind::Dimension,
          "cannot reshape " + shape_str(x.shape()) + " to " + shape_str(shape));
  const auto d = x.data();
  return Tensor::from_op(shape, std::vector<double>(d.begin(), d.end()), {x},
                         [x](const Tensor& g, std::vector<Tensor>& grads) { grads[0] = reshape(g, x.shape()); },
                         "reshape");
}

Tensor concat(const std::vector<Tensor>& parts, std::size_t axis) {
  require(!parts.empty(), ErrorKind::Dimension, "concat of zero tensors");
  const Shape& first = parts.front().shape();
  require(axis < first.size(), ErrorKind::Rank, "concat axis out of range for " + shape_str(first));
  Shape out_shape = first;
  out_shape[axis] = 0;
  for (const auto& t : parts) {
    const Shape& s = t.shape();
    bool ok = s.size() == first.size();
    for (std::size_t k = 0; ok && k < s.size(); ++k) ok = (k == axis) || s[k] == first[k];
    if (!ok) fail(ErrorKind::Dimension, "concat shape mismatch: " + shape_str(first) + " vs " + shape_str(s));
    out_shape[axis] += s[axis];
  }
  const std::size_t outer = prod(first, 0, axis);
  const std::size_t inner = prod(first, axis + 1, first.size());
  const std::size_t out_row = out_shape[axis] * inner;
  std::vector<double> out(numel_of(out_shape));
  std::size_t offset = 0;
  std::vector<std::size_t> starts;
  for (const auto& t : parts) {
    starts.push_back(offset);
    const std::size_t row = t.dim(axis) * inner;
    const auto d = t.data();
    for (std::size_t o = 0; o < outer; ++o) {
      std::copy(d.begin() + static_cast<std::ptrdiff_t>(o * row), d.begin() + static_cast<std::ptrdiff_t>((o + 1) * row),
                out.begin() + static_cast<std::ptrdiff_t>(o * out_row + offset * inner));
    }
    offset += t.dim(axis);
  }
  return Tensor::from_op(std::move(out_shape), std::move(out), parts,
                         [parts, starts, axis](const Tensor& g, std::vector<Tensor>& grads) {
                           for (std::size_t i = 0; i < parts.size(); ++i) {
                             if (needs_grad(parts[i])) grads[i] = narrow(g, axis, starts[i], parts[i].dim(axis));
                           }
                         },
                         "concat");
}

Tensor concat_lastdim(const Tensor& a, const Tensor& b) { return concat({a, b}, a.rank() - 1); }

Tensor narrow(const Tensor& x, std::size_t axis, std::size_t start, std::size_t length) {
  require(axis < x.rank(), ErrorKind::Rank, "narrow axis out of range for " + shape_str(x.shape()));
  require(length > 0 && start + length <= x.dim(axis), ErrorKind::Index,
          "narrow [" + std::to_string(start) + ", " + std::to_string(start + length) + ") outside axis of size " +
              std::to_string(x.dim(axis)));
  const Shape& s = x.shape();
  const std::size_t outer = prod(s, 0, axis);
  const std::size_t inner = prod(s, axis + 1, s.size());
  Shape out_shape = s;
  out_shape[axis] = length;
  std::vector<double> out(numel_of(out_shape));
  const auto d = x.data();
  for (std::size_t o = 0; o < outer; ++o) {
    const auto src = d.begin() + static_cast<std::ptrdiff_t>((o * s[axis] + start) * inner);
    std::copy(src, src + static_cast<std::ptrdiff_t>(length * inner),
              out.begin() + static_cast<std::ptrdiff_t>(o * length * inner));
  }
  const std::size_t total = s[axis];
  return Tensor::from_op(std::move(out_shape), std::move(out), {x},
                         [axis, start, total](const Tensor& g, std::vector<Tensor>& grads) {
                           grads[0] = pad_axis(g, axis, start, total);
                         },
                         "narrow");
}

Tensor pad_axis(const Tensor& x, std::size_t axis, std::size_t start, std::size_t total) {
  require(axis < x.rank(), ErrorKind::Rank, "pad axis out of range for " + shape_str(x.shape()));
  const Shape& s = x.shape();
  const std::size_t length = s[axis];
  require(start + length <= total, ErrorKind::Index, "pad target too small");
  const std::size_t outer = prod(s, 0, axis);
  const std::size_t inner = prod(s, axis + 1, s.size());
  Shape out_shape = s;
  out_shape[axis] = total;
  std::vector<double> out(numel_of(out_shape), 0.0);
  const auto d = x.data();
  for (std::size_t o = 0; o < outer; ++o) {
    const auto src = d.begin() + static_cast<std::ptrdiff_t>(o * length * inner);
    std::copy(src, src + static_cast<std::ptrdiff_t>(length * inner),
              out.begin() + static_cast<std::ptrdiff_t>((o * total + start) * inner));
  }
  return Tensor::from_op(std::move(out_shape), std::move(out), {x},
                         [axis, start, length](const Tensor& g, std::vector<Tensor>& grads) {
                           grads[0] = narrow(g, axis, start, length);
                         },
                         "pad");
}

namespace {

// Shared index walk for nearest_upsample / block_sum: calls f(big_offset, small_offset)
// for every spatial cell of the large grid.
template <typename F>
void walk_blocks(const Shape& big, const Shape& small, F&& f) {
  const std::size_t k = big.size();
  std::vector<std::size_t> ratio(k);
  for (std::size_t i = 0; i < k; ++i) ratio[i] = big[i] / small[i];
  std::vector<std::size_t> small_strides(k, 1);
  for (std::size_t i = k; i-- > 1;) small_strides[i - 1] = small_strides[i] * small[i];
  const std::size_t cells = numel_of(big);
  std::vector<std::size_t> counter(k, 0);
  for (std::size_t flat = 0; flat < cells; ++flat) {
    std::size_t src = 0;
    for (std::size_t i = 0; i < k; ++i) src += (counter[i] / ratio[i]) * small_strides[i];
    f(flat, src);
    for (std::size_t i = k; i-- > 0;) {
      if (++counter[i] < big[i]) break;
      counter[i] = 0;
    }
  }
}

void check_ratios(const Shape& big, const Shape& small, const char* what) {
  require(big.size() == small.size(), ErrorKind::Rank, std::string(what) + ": spatial rank mismatch");
  for (std::size_t i = 0; i < big.size(); ++i) {
    if (small[i] == 0 || big[i] % small[i] != 0) {
      fail(ErrorKind::Unsupported, std::string(what) + ": unsupported ratio " + shape_str(small) + " -> " +
                                       shape_str(big) + " (target must be an integer multiple)");
    }
  }
}

}  // namespace

Tensor nearest_upsample(const Tensor& x, const Shape& spatial_target) {
  require(x.rank() >= 2, ErrorKind::Rank, "nearest_upsample needs [spatial..., channels], got " + shape_str(x.shape()));
  const Shape spatial(x.shape().begin(), x.shape().end() - 1);
  check_ratios(spatial_target, spatial, "nearest_upsample");
  const std::size_t c = x.shape().back();
  Shape out_shape = spatial_target;
  out_shape.push_back(c);
  std::vector<double> out(numel_of(out_shape));
  const auto d = x.data();
  walk_blocks(spatial_target, spatial, [&](std::size_t dst, std::size_t src) {
    std::copy(d.begin() + static_cast<std::ptrdiff_t>(src * c), d.begin() + static_cast<std::ptrdiff_t>((src + 1) * c),
              out.begin() + static_cast<std::ptrdiff_t>(dst * c));
  });
  return Tensor::from_op(std::move(out_shape), std::move(out), {x},
                         [spatial](const Tensor& g, std::vector<Tensor>& grads) { grads[0] = block_sum(g, spatial); },
                         "nearest_upsample");
}

Tensor nearest_upsample(const Tensor& x, std::size_t target_h, std::size_t target_w) {
  return nearest_upsample(x, Shape{target_h, target_w});
}

Tensor block_sum(const Tensor& x, const Shape& spatial_source) {
  require(x.rank() >= 2, ErrorKind::Rank, "block_sum needs [spatial..., channels], got " + shape_str(x.shape()));
  const Shape spatial(x.shape().begin(), x.shape().end() - 1);
  check_ratios(spatial, spatial_source, "block_sum");
  const std::size_t c = x.shape().back();
  Shape out_shape = spatial_source;
  out_shape.push_back(c);
  std::vector<double> out(numel_of(out_shape), 0.0);
  const auto d = x.data();
  walk_blocks(spatial, spatial_source, [&](std::size_t big, std::size_t small) {
    for (std::size_t j = 0; j < c; ++j) out[small * c + j] += d[big * c + j];
  });
  return Tensor::from_op(std::move(out_shape), std::move(out), {x},
                         [spatial](const Tensor& g, std::vector<Tensor>& grads) {
                           grads[0] = nearest_upsample(g, spatial);
                         },
                         "block_sum");
}

Tensor gather_rows(const Tensor& x, const IndexList& index) {
  require(x.rank() >= 1, ErrorKind::Rank, "gather_rows needs rank >= 1");
  const std::size_t rows = x.dim(0);
  const std::size_t width = x.numel() / rows;
  Shape out_shape = x.shape();
  out_shape[0] = index->size();
  std::vector<double> out(index->size() * width);
  const auto d = x.data();
  for (std::size_t i = 0; i < index->size(); ++i) {
    const std::size_t src = (*index)[i];
    require(src < rows, ErrorKind::Index, "gather index " + std::to_string(src) + " >= " + std::to_string(rows));
    std::copy(d.begin() + static_cast<std::ptrdiff_t>(src * width),
              d.begin() + static_cast<std::ptrdiff_t>((src + 1) * width),
              out.begin() + static_cast<std::ptrdiff_t>(i * width));
  }
  return Tensor::from_op(std::move(out_shape), std::move(out), {x},
                         [index, rows](const Tensor& g, std::vector<Tensor>& grads) {
                           grads[0] = scatter_rows(g, index, rows);
                         },
                         "gather_rows");
}

Tensor scatter_rows(const Tensor& x, const IndexList& index, std::size_t rows) {
  require(x.rank() >= 1 && x.dim(0) == index->size(), ErrorKind::Dimension,
          "scatter_rows: index length does not match rows of " + shape_str(x.shape()));
  const std::size_t width = x.numel() / x.dim(0);
  Shape out_shape = x.shape();
  out_shape[0] = rows;
  std::vector<double> out(rows * width, 0.0);
  const auto d = x.data();
  for (std::size_t i = 0; i < index->size(); ++i) {
    const std::size_t dst = (*index)[i];
    require(dst < rows, ErrorKind::Index, "scatter index " + std::to_string(dst) + " >= " + std::to_string(rows));
    for (std::size_t j = 0; j < width; ++j) out[dst * width + j] += d[i * width + j];
  }
  return Tensor::from_op(std::move(out_shape), std::move(out), {x},
                         [index](const Tensor& g, std::vector<Tensor>& grads) { grads[0] = gather_rows(g, index); },
                         "scatter_rows");
}

}  // namespace lift::ndgrad
