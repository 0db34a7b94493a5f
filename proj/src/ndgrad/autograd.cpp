#include "ndgrad/autograd.hpp"

#include <unordered_map>
#include <unordered_set>
#include <utility>

#include "common/error.hpp"
#include "ndgrad/ops.hpp"

namespace lift::ndgrad {

Tape Tape::record(const Tensor& root) {
  Tape tape;
  if (!root.requires_grad()) return tape;
  std::unordered_set<const detail::Node*> visited;
  // Iterative post-order DFS; second flag marks "children already pushed".
  std::vector<std::pair<Tensor, bool>> stack;
  stack.emplace_back(root, false);
  while (!stack.empty()) {
    auto [t, expanded] = stack.back();
    stack.pop_back();
    if (expanded) {
      tape.entries_.push_back(t);
      continue;
    }
    if (!visited.insert(t.node()).second) continue;
    stack.emplace_back(t, true);
    for (const auto& in : t.node()->inputs) {
      if (in.requires_grad() && !visited.count(in.node())) stack.emplace_back(in, false);
    }
  }
  return tape;
}

namespace {

using NodeSet = std::unordered_set<const detail::Node*>;
thread_local const NodeSet* t_filter = nullptr;

class FilterScope {
 public:
  explicit FilterScope(const NodeSet* filter) : previous_(t_filter) { t_filter = filter; }
  ~FilterScope() { t_filter = previous_; }

 private:
  const NodeSet* previous_;
};

using GradMap = std::unordered_map<const detail::Node*, Tensor>;

// `relevant`, when given, restricts propagation to nodes that depend on one of
// the requested inputs.
template <typename Visit>
void sweep(const Tensor& output, bool create_graph, const NodeSet* relevant, Visit&& visit) {
  require(output.defined(), ErrorKind::Consistency, "gradient of undefined tensor");
  require(output.numel() == 1, ErrorKind::Rank,
          "gradient root must be a scalar, got shape " + shape_str(output.shape()));
  GradModeGuard mode(create_graph);
  const Tape tape = Tape::record(output);
  GradMap grads;
  grads.emplace(output.node(), Tensor::full(output.shape(), 1.0));
  const auto& entries = tape.entries();
  std::vector<Tensor> input_grads;
  for (auto it = entries.rbegin(); it != entries.rend(); ++it) {
    const Tensor& t = *it;
    auto found = grads.find(t.node());
    if (found == grads.end()) continue;
    Tensor g = std::move(found->second);
    grads.erase(found);
    visit(t, g);
    const auto* node = t.node();
    if (!node->backward) continue;
    input_grads.assign(node->inputs.size(), Tensor());
    {
      FilterScope scope(relevant);
      node->backward(g, input_grads);
    }
    for (std::size_t i = 0; i < node->inputs.size(); ++i) {
      const Tensor& in = node->inputs[i];
      if (!in.requires_grad() || !input_grads[i].defined()) continue;
      if (relevant && !relevant->count(in.node())) continue;
      require(input_grads[i].shape() == in.shape(), ErrorKind::Consistency,
              std::string("gradient shape mismatch in op ") + node->op);
      auto slot = grads.find(in.node());
      if (slot == grads.end()) {
        grads.emplace(in.node(), std::move(input_grads[i]));
      } else {
        slot->second = add(slot->second, input_grads[i]);
      }
    }
  }
}

}  // namespace

std::vector<Tensor> grad(const Tensor& output, const std::vector<Tensor>& inputs, bool create_graph) {
  std::unordered_map<const detail::Node*, std::size_t> wanted;
  for (std::size_t i = 0; i < inputs.size(); ++i) wanted.emplace(inputs[i].node(), i);
  std::vector<Tensor> result(inputs.size());
  if (output.requires_grad()) {
    NodeSet relevant;
    const Tape tape = Tape::record(output);
    for (const auto& t : tape.entries()) {
      bool hit = wanted.count(t.node()) > 0;
      for (const auto& in : t.node()->inputs) hit = hit || relevant.count(in.node()) > 0;
      if (hit) relevant.insert(t.node());
    }
    sweep(output, create_graph, &relevant, [&](const Tensor& t, const Tensor& g) {
      auto it = wanted.find(t.node());
      if (it == wanted.end()) return;
      for (std::size_t i = 0; i < inputs.size(); ++i) {
        if (inputs[i].node() == t.node()) result[i] = g;
      }
    });
  }
  for (std::size_t i = 0; i < inputs.size(); ++i) {
    if (!result[i].defined()) result[i] = Tensor::zeros(inputs[i].shape());
  }
  return result;
}

void backward(const Tensor& loss, bool create_graph) {
  require(loss.defined() && loss.numel() == 1 && loss.rank() == 0, ErrorKind::Rank,
          "backward() needs a scalar loss, got shape " + (loss.defined() ? shape_str(loss.shape()) : "undefined"));
  require(loss.requires_grad(), ErrorKind::Consistency, "loss is not on the tape (nothing requires grad)");
  sweep(loss, create_graph, nullptr, [](const Tensor& t, const Tensor& g) {
    auto& buffer = t.mutable_node()->grad;
    const auto values = g.data();
    if (buffer.empty()) {
      buffer.assign(values.begin(), values.end());
    } else {
      for (std::size_t i = 0; i < buffer.size(); ++i) buffer[i] += values[i];
    }
  });
}

bool needs_grad(const Tensor& t) { return t.requires_grad() && (t_filter == nullptr || t_filter->count(t.node()) > 0); }

}  // namespace lift::ndgrad
