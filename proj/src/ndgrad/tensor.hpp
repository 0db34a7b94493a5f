#pragma once

#include <cstddef>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <vector>

namespace lift::ndgrad {

using Shape = std::vector<std::size_t>;

std::size_t numel_of(const Shape& shape);
std::string shape_str(const Shape& shape);

class Tensor;

namespace detail {

// Computes the gradient contribution for each input of a recorded op. Entries
// left undefined are treated as zero.
using BackwardFn = std::function<void(const Tensor& upstream, std::vector<Tensor>& input_grads)>;

struct Node {
  Shape shape;
  std::vector<double> data;
  bool requires_grad = false;
  std::vector<double> grad;  // empty until the first backward()
  std::vector<Tensor> inputs;
  BackwardFn backward;
  const char* op = "leaf";
};

}  // namespace detail

// Dense row-major float64 array. Copies are cheap handles onto the same node;
// use clone() for a deep copy. Values are immutable once an op has produced
// them; only leaves expose mutable_data() (optimizer updates, initialization).
class Tensor {
 public:
  Tensor() = default;
  Tensor(Shape shape, std::vector<double> data, bool requires_grad = false);

  static Tensor zeros(Shape shape, bool requires_grad = false);
  static Tensor full(Shape shape, double value, bool requires_grad = false);
  static Tensor scalar(double value, bool requires_grad = false);

  // Result of an op; records `inputs` and `backward` only when grad mode is
  // on and at least one input requires grad.
  static Tensor from_op(Shape shape, std::vector<double> data, std::vector<Tensor> inputs,
                        detail::BackwardFn backward, const char* op);

  bool defined() const { return node_ != nullptr; }
  const Shape& shape() const;
  std::size_t rank() const { return shape().size(); }
  std::size_t dim(std::size_t axis) const;
  std::size_t numel() const;

  std::span<const double> data() const;
  std::span<double> mutable_data();
  double item() const;

  bool requires_grad() const;
  Tensor& set_requires_grad(bool value);
  bool is_leaf() const;
  const char* op_name() const;

  bool has_grad() const;
  Tensor grad() const;
  std::span<const double> grad_data() const;
  void zero_grad();

  Tensor detach() const;
  Tensor clone() const;

  const detail::Node* node() const { return node_.get(); }
  detail::Node* mutable_node() const { return node_.get(); }

 private:
  explicit Tensor(std::shared_ptr<detail::Node> node) : node_(std::move(node)) {}
  friend class Tape;

  std::shared_ptr<detail::Node> node_;
};

bool grad_enabled();

// Disables graph recording on this thread for the guard's lifetime.
class NoGradGuard {
 public:
  NoGradGuard();
  ~NoGradGuard();
  NoGradGuard(const NoGradGuard&) = delete;
  NoGradGuard& operator=(const NoGradGuard&) = delete;

 private:
  bool previous_;
};

class GradModeGuard {
 public:
  explicit GradModeGuard(bool enabled);
  ~GradModeGuard();
  GradModeGuard(const GradModeGuard&) = delete;
  GradModeGuard& operator=(const GradModeGuard&) = delete;

 private:
  bool previous_;
};

}  // namespace lift::ndgrad
