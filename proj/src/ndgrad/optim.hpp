#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include "ndgrad/tensor.hpp"

namespace lift::ndgrad {

struct AdamOptions {
  double lr = 1e-3;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam over leaf tensors, reading their accumulated grad buffers. Parameters
// without a gradient are skipped for that step (their moments still decay).
class Adam {
 public:
  Adam(std::vector<Tensor> params, AdamOptions options);

  void step();
  void zero_grad();

  std::uint64_t steps() const { return t_; }
  const AdamOptions& options() const { return options_; }
  const std::vector<Tensor>& params() const { return params_; }

  void save_state(std::ostream& out) const;
  void load_state(std::istream& in);

 private:
  std::vector<Tensor> params_;
  AdamOptions options_;
  std::uint64_t t_ = 0;
  std::vector<std::vector<double>> m_;
  std::vector<std::vector<double>> v_;
};

}  // namespace lift::ndgrad
