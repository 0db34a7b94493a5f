#include "ndgrad/optim.hpp"

#include <cmath>
#include <istream>
#include <ostream>

#include "common/binio.hpp"
#include "common/error.hpp"

namespace lift::ndgrad {

Adam::Adam(std::vector<Tensor> params, AdamOptions options) : params_(std::move(params)), options_(options) {
  for (const auto& p : params_) {
    require(p.is_leaf() && p.requires_grad(), ErrorKind::Consistency, "Adam parameters must be trainable leaves");
    m_.emplace_back(p.numel(), 0.0);
    v_.emplace_back(p.numel(), 0.0);
  }
}

void Adam::step() {
  ++t_;
  const double b1 = options_.beta1, b2 = options_.beta2;
  const double c1 = 1.0 - std::pow(b1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(b2, static_cast<double>(t_));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    auto& p = params_[i];
    if (!p.has_grad()) continue;
    const auto g = p.grad_data();
    auto w = p.mutable_data();
    auto& m = m_[i];
    auto& v = v_[i];
    for (std::size_t j = 0; j < w.size(); ++j) {
      m[j] = b1 * m[j] + (1.0 - b1) * g[j];
      v[j] = b2 * v[j] + (1.0 - b2) * g[j] * g[j];
      const double mhat = m[j] / c1;
      const double vhat = v[j] / c2;
      w[j] -= options_.lr * mhat / (std::sqrt(vhat) + options_.eps);
    }
  }
}

void Adam::zero_grad() {
  for (auto& p : params_) p.zero_grad();
}

void Adam::save_state(std::ostream& out) const {
  binio::write_u64(out, t_);
  binio::write_u32(out, static_cast<std::uint32_t>(params_.size()));
  for (std::size_t i = 0; i < params_.size(); ++i) {
    binio::write_u64(out, m_[i].size());
    for (double x : m_[i]) binio::write_f64(out, x);
    for (double x : v_[i]) binio::write_f64(out, x);
  }
}

void Adam::load_state(std::istream& in) {
  t_ = binio::read_u64(in);
  const auto count = binio::read_u32(in);
  require(count == params_.size(), ErrorKind::Consistency, "optimizer state has a different parameter count");
  for (std::size_t i = 0; i < params_.size(); ++i) {
    const auto n = binio::read_u64(in);
    require(n == m_[i].size(), ErrorKind::Consistency, "optimizer state has a different parameter size");
    for (auto& x : m_[i]) x = binio::read_f64(in);
    for (auto& x : v_[i]) x = binio::read_f64(in);
  }
}

}  // namespace lift::ndgrad
