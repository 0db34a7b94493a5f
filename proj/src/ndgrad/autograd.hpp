#pragma once

#include <vector>

#include "ndgrad/tensor.hpp"

namespace lift::ndgrad {

// Linearized record of every tracked op that contributes to a root tensor.
// entries() is in topological order (inputs before the ops that consume them);
// gradient sweeps walk it back to front.
class Tape {
 public:
  static Tape record(const Tensor& root);

  const std::vector<Tensor>& entries() const { return entries_; }
  std::size_t size() const { return entries_.size(); }

 private:
  std::vector<Tensor> entries_;
};

// Gradients of a scalar `output` with respect to `inputs`. Unreached inputs get
// zeros. With create_graph the returned tensors are themselves differentiable,
// which is what unrolled inner loops need.
std::vector<Tensor> grad(const Tensor& output, const std::vector<Tensor>& inputs, bool create_graph = false);

// Accumulates d(loss)/d(t) into the grad buffer of every tracked tensor on the
// tape. Repeated calls add up until zero_grad().
void backward(const Tensor& loss, bool create_graph = false);

// Used inside backward closures: true when the gradient for `t` is wanted by
// the sweep in progress. grad() skips branches that cannot reach its inputs.
bool needs_grad(const Tensor& t);

}  // namespace lift::ndgrad
