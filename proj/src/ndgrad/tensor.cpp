#include "ndgrad/tensor.hpp"

#include <sstream>

#include "common/error.hpp"

namespace lift::ndgrad {
namespace {
thread_local bool t_grad_enabled = true;
}

bool grad_enabled() { return t_grad_enabled; }

NoGradGuard::NoGradGuard() : previous_(t_grad_enabled) { t_grad_enabled = false; }
NoGradGuard::~NoGradGuard() { t_grad_enabled = previous_; }

GradModeGuard::GradModeGuard(bool enabled) : previous_(t_grad_enabled) { t_grad_enabled = enabled; }
GradModeGuard::~GradModeGuard() { t_grad_enabled = previous_; }

std::size_t numel_of(const Shape& shape) {
  std::size_t n = 1;
  for (auto d : shape) n *= d;
  return n;
}

std::string shape_str(const Shape& shape) {
  std::ostringstream out;
  out << '[';
  for (std::size_t i = 0; i < shape.size(); ++i) {
    if (i) out << 'x';
    out << shape[i];
  }
  out << ']';
  return out.str();
}

Tensor::Tensor(Shape shape, std::vector<double> data, bool requires_grad) {
  for (auto d : shape) {
    require(d > 0, ErrorKind::Dimension, "tensor dimensions must be positive, got " + shape_str(shape));
  }
  require(data.size() == numel_of(shape), ErrorKind::Dimension,
          "data length " + std::to_string(data.size()) + " does not match shape " + shape_str(shape));
  node_ = std::make_shared<detail::Node>();
  node_->shape = std::move(shape);
  node_->data = std::move(data);
  node_->requires_grad = requires_grad;
}

Tensor Tensor::zeros(Shape shape, bool requires_grad) { return full(std::move(shape), 0.0, requires_grad); }

Tensor Tensor::full(Shape shape, double value, bool requires_grad) {
  const auto n = numel_of(shape);
  return Tensor(std::move(shape), std::vector<double>(n, value), requires_grad);
}

Tensor Tensor::scalar(double value, bool requires_grad) { return Tensor({}, {value}, requires_grad); }

Tensor Tensor::from_op(Shape shape, std::vector<double> data, std::vector<Tensor> inputs,
                       detail::BackwardFn backward, const char* op) {
  Tensor out(std::move(shape), std::move(data));
  if (!t_grad_enabled) return out;
  bool tracked = false;
  for (const auto& in : inputs) tracked = tracked || (in.defined() && in.requires_grad());
  if (!tracked) return out;
  out.node_->requires_grad = true;
  out.node_->inputs = std::move(inputs);
  out.node_->backward = std::move(backward);
  out.node_->op = op;
  return out;
}

const Shape& Tensor::shape() const {
  require(defined(), ErrorKind::Consistency, "use of undefined tensor");
  return node_->shape;
}

std::size_t Tensor::dim(std::size_t axis) const {
  require(axis < rank(), ErrorKind::Rank, "axis " + std::to_string(axis) + " out of range for " + shape_str(shape()));
  return node_->shape[axis];
}

std::size_t Tensor::numel() const { return node_->data.size(); }

std::span<const double> Tensor::data() const {
  require(defined(), ErrorKind::Consistency, "use of undefined tensor");
  return node_->data;
}

std::span<double> Tensor::mutable_data() {
  require(defined(), ErrorKind::Consistency, "use of undefined tensor");
  require(is_leaf(), ErrorKind::Consistency, "mutable_data() is only available on leaf tensors");
  return node_->data;
}

double Tensor::item() const {
  require(numel() == 1, ErrorKind::Rank, "item() needs a single-element tensor, got " + shape_str(shape()));
  return node_->data[0];
}

bool Tensor::requires_grad() const { return defined() && node_->requires_grad; }

Tensor& Tensor::set_requires_grad(bool value) {
  require(is_leaf(), ErrorKind::Consistency, "requires_grad can only be toggled on leaves");
  node_->requires_grad = value;
  return *this;
}

bool Tensor::is_leaf() const { return defined() && !node_->backward; }

const char* Tensor::op_name() const { return defined() ? node_->op : "undefined"; }

bool Tensor::has_grad() const { return defined() && !node_->grad.empty(); }

Tensor Tensor::grad() const {
  require(has_grad(), ErrorKind::Consistency, "tensor has no gradient; call backward() first");
  return Tensor(node_->shape, node_->grad);
}

std::span<const double> Tensor::grad_data() const {
  require(defined(), ErrorKind::Consistency, "use of undefined tensor");
  return node_->grad;
}

void Tensor::zero_grad() {
  if (defined()) node_->grad.clear();
}

Tensor Tensor::detach() const { return Tensor(shape(), node_->data); }

Tensor Tensor::clone() const { return Tensor(shape(), node_->data, is_leaf() && requires_grad()); }

}  // namespace lift::ndgrad
