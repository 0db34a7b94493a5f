#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "../support/gradcheck.hpp"
#include "common/error.hpp"
#include "nets/bank.hpp"
#include "nets/checkpoint.hpp"
#include "nets/layers.hpp"
#include "partition/partition.hpp"

using namespace lift;
using namespace lift::nets;
using lift::testing::random_tensor;
using ndgrad::Shape;

namespace {

// Direct-formula evaluation of an Inr from its raw parameters.
std::vector<double> reference_forward(const Inr& net, const std::vector<double>& x) {
  std::vector<double> h = x;
  for (const auto& layer : net.layers()) {
    const std::size_t out = layer.weight.dim(0), in = layer.weight.dim(1);
    std::vector<double> next(out);
    for (std::size_t o = 0; o < out; ++o) {
      double s = layer.bias.data()[o];
      for (std::size_t i = 0; i < in; ++i) s += layer.weight.data()[o * in + i] * h[i];
      next[o] = std::sin(layer.omega0 * layer.gamma * s) + (layer.residual ? h[o] : 0.0);
    }
    h = next;
  }
  const auto& w = net.head().weight;
  std::vector<double> y(w.dim(0));
  for (std::size_t o = 0; o < y.size(); ++o) {
    double s = net.head().bias.data()[o];
    for (std::size_t i = 0; i < w.dim(1); ++i) s += w.data()[o * w.dim(1) + i] * h[i];
    y[o] = s;
  }
  return y;
}

SineLayer scalar_layer(double w, double omega0, double gamma, bool residual) {
  return SineLayer{Tensor({1, 1}, {w}), Tensor({1}, {0.0}), omega0, gamma, residual};
}

}  // namespace

TEST(SineLayer, ZeroWeightsResidualIsIdentity) {
  Rng rng(1);
  Tensor h = random_tensor({5, 4}, rng);
  SineLayer l{Tensor::zeros({4, 4}), Tensor::zeros({4}), 30.0, 1.0, true};
  Tensor y = l.forward(h);
  for (std::size_t i = 0; i < h.numel(); ++i) EXPECT_EQ(y.data()[i], h.data()[i]);
  l.residual = false;
  const Tensor z = l.forward(h);
  for (double v : z.data()) EXPECT_EQ(v, 0.0);
}

TEST(SineLayer, ScalarEvaluation) {
  const SineLayer l = scalar_layer(1.0, 1.0, 2.0, false);
  EXPECT_NEAR(l.forward(Tensor({1, 1}, {0.25})).item(), 0.479426, 1e-6);
  EXPECT_DOUBLE_EQ(l.frequency(), 2.0);
}

TEST(SineLayer, ResidualWidthMismatchIsConfigError) {
  Rng rng(0);
  try {
    make_sine_layer(3, 4, 30.0, 1.0, true, false, rng);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
}

TEST(SineLayer, ShiftGradientEqualsBiasGradient) {
  Rng rng(2);
  SineLayer l = make_sine_layer(3, 4, 30.0, 1.0, false, false, rng);
  l.bias.set_requires_grad(true);
  Tensor shift = Tensor::zeros({4}, true);
  Tensor h = random_tensor({6, 3}, rng);
  Tensor r = random_tensor({6, 4}, rng);
  auto g = ndgrad::grad(ndgrad::sum(ndgrad::mul(l.forward(h, shift), r)), {l.bias, shift});
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(g[0].data()[i], g[1].data()[i], 1e-12);
}

TEST(Init, SirenBoundsHoldExactly) {
  Rng rng(3);
  EXPECT_DOUBLE_EQ(siren_weight_bound(8, 30.0, true), 1.0 / 8.0);
  EXPECT_DOUBLE_EQ(siren_weight_bound(256, 30.0, false), std::sqrt(6.0 / 256.0) / 30.0);
  const auto first = siren_weights(64, 2, 30.0, true, rng);
  for (double v : first) EXPECT_LE(std::abs(v), 0.5);
  const double hb = std::sqrt(6.0 / 64.0) / 30.0;
  double maxabs = 0;
  for (double v : siren_weights(64, 64, 30.0, false, rng)) maxabs = std::max(maxabs, std::abs(v));
  EXPECT_LE(maxabs, hb);
  EXPECT_GT(maxabs, 0.9 * hb);
}

TEST(Init, PreActivationsStayInUnitRangeAtDepth) {
  Rng rng(4);
  const Inr net = build_siren(5, 128, 30.0, rng, 2, 1);
  Tensor x = random_tensor({256, 2}, rng, 0.0, 1.0);
  for (const auto& a : net.activations(x)) {
    for (double v : a.data()) ASSERT_LE(std::abs(v), 1.0);
  }
}

TEST(Inr, SirenMatchesDirectFormula) {
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    const Inr net = build_siren(3, 16, 30.0, rng, 2, 3);
    Tensor x = random_tensor({7, 2}, rng, 0.0, 1.0);
    Tensor y = net.forward(x);
    for (std::size_t p = 0; p < 7; ++p) {
      const auto ref = reference_forward(net, {x.data()[2 * p], x.data()[2 * p + 1]});
      for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(y.data()[p * 3 + c], ref[c], 1e-12);
    }
  }
}

TEST(Inr, ReliftMatchesDirectFormulaAndScalesFirstLayer) {
  Rng rng(7);
  const Inr net = build_relift(3, 16, 30.0, 2.0, rng, 2, 3);
  EXPECT_DOUBLE_EQ(net.layers()[0].frequency(), 60.0);
  EXPECT_FALSE(net.layers()[0].residual);
  EXPECT_TRUE(net.layers()[1].residual);
  Tensor x = random_tensor({5, 2}, rng, 0.0, 1.0);
  Tensor y = net.forward(x);
  for (std::size_t p = 0; p < 5; ++p) {
    const auto ref = reference_forward(net, {x.data()[2 * p], x.data()[2 * p + 1]});
    for (std::size_t c = 0; c < 3; ++c) EXPECT_NEAR(y.data()[p * 3 + c], ref[c], 1e-12);
  }
  EXPECT_THROW(build_relift(1, 16, 30.0, 2.0, rng), Error);
}

TEST(Inr, ReliftWithZeroHiddenWeightsTelescopes) {
  Rng rng(8);
  Inr net = build_relift(4, 8, 30.0, 2.0, rng, 2, 1);
  for (std::size_t l = 1; l < net.layers().size(); ++l) {
    net.layers()[l].weight = Tensor::zeros(net.layers()[l].weight.shape());
    net.layers()[l].bias = Tensor::zeros(net.layers()[l].bias.shape());
  }
  Tensor x = random_tensor({6, 2}, rng, 0.0, 1.0);
  const auto acts = net.activations(x);
  for (std::size_t l = 1; l < acts.size(); ++l) {
    for (std::size_t i = 0; i < acts[0].numel(); ++i) EXPECT_EQ(acts[l].data()[i], acts[0].data()[i]);
  }
}

TEST(Inr, GradientsMatchFiniteDifferences) {
  for (bool relift : {false, true}) {
    Rng rng(9);
    const Inr net = relift ? build_relift(3, 6, 30.0, 2.0, rng, 2, 2) : build_siren(3, 6, 30.0, rng, 2, 2);
    Tensor x = random_tensor({5, 2}, rng, 0.0, 1.0);
    lift::testing::GradCheckOptions opt;
    opt.step = 1e-7;
    const double err = lift::testing::model_gradient_error(
        net, [&](const Inr& m, const std::vector<Tensor>&) { return m.forward(x); }, {}, opt);
    EXPECT_LT(err, 1e-6) << (relift ? "relift" : "siren");
  }
}

namespace {

BankConfig tiny_bank(std::size_t D, std::size_t M, std::size_t depth, bool residual) {
  BankConfig c;
  c.spec = partition::PartitionSpec::make(D, M);
  c.depth = depth;
  c.width = 4;
  c.out_channels = 2;
  c.omega0 = 20.0;
  c.gamma = residual ? 2.0 : 1.0;
  c.residual = residual;
  return c;
}

}  // namespace

TEST(Bank, BatchedEqualsPerRegionLoop) {
  for (bool residual : {false, true}) {
    Rng rng(10);
    const BankConfig c = tiny_bank(1, 2, 2, residual);
    PMLPBank bank(c, rng);
    const auto gp = partition::grid_partition({8}, c.spec);
    Tensor mods = random_tensor(c.modulation_shape(), rng, -0.1, 0.1);
    Tensor y = bank.forward(gp.local_coords, mods);
    ASSERT_EQ(y.shape(), (Shape{2, 4, 2}));
    for (std::size_t r = 0; r < 2; ++r) {
      Tensor coords = ndgrad::reshape(ndgrad::narrow(gp.local_coords, 0, r, 1), {4, 1});
      Tensor yr = bank.forward_region(r, coords, mods);
      for (std::size_t i = 0; i < 8; ++i) EXPECT_NEAR(y.data()[r * 8 + i], yr.data()[i], 1e-13);
    }
  }
}

TEST(Bank, ZeroModulationsAreNeutral) {
  Rng rng(11);
  const BankConfig c = tiny_bank(2, 2, 2, false);
  PMLPBank bank(c, rng);
  const auto gp = partition::grid_partition({4, 4}, c.spec);
  Tensor a = bank.forward(gp.local_coords);
  Tensor b = bank.forward(gp.local_coords, Tensor::zeros(c.modulation_shape()));
  for (std::size_t i = 0; i < a.numel(); ++i) EXPECT_EQ(a.data()[i], b.data()[i]);
  EXPECT_THROW(bank.forward(gp.local_coords, Tensor::zeros({4, 3, 4})), Error);
}

TEST(Bank, SingleRegionEqualsPlainSiren) {
  Rng rng(12);
  const BankConfig c = tiny_bank(2, 1, 2, false);
  PMLPBank bank(c, rng);
  InrConfig ic;
  ic.in_dim = 2;
  ic.out_dim = 2;
  ic.depth = 2;
  ic.width = 4;
  ic.omega0 = ic.hidden_omega = 20.0;
  Rng rng2(0);
  Inr net(ic, rng2);
  std::vector<Tensor> params;
  for (std::size_t l = 0; l < bank.weights().size(); ++l) {
    const auto& w = bank.weights()[l];
    params.push_back(ndgrad::reshape(w, {w.dim(1), w.dim(2)}));
    params.push_back(ndgrad::reshape(bank.biases()[l], {bank.biases()[l].dim(1)}));
  }
  net.set_parameters(params);
  const auto gp = partition::grid_partition({4, 4}, c.spec);
  Tensor y = bank.forward(gp.local_coords);
  Tensor z = net.forward(ndgrad::reshape(gp.global_coords, {16, 2}));
  for (std::size_t i = 0; i < y.numel(); ++i) EXPECT_NEAR(y.data()[i], z.data()[i], 1e-13);
}

TEST(Bank, GradientsMatchFiniteDifferences) {
  Rng rng(13);
  const BankConfig c = tiny_bank(2, 2, 2, true);
  PMLPBank bank(c, rng);
  const auto gp = partition::grid_partition({4, 4}, c.spec);
  lift::testing::GradCheckOptions opt;
  opt.step = 1e-7;
  const double err = lift::testing::model_gradient_error(
      bank, [&](const PMLPBank& b, const std::vector<Tensor>& x) { return b.forward(gp.local_coords, x[0]); },
      {random_tensor(c.modulation_shape(), rng, -0.1, 0.1)}, opt);
  EXPECT_LT(err, 1e-6);
}

TEST(Assemble, RoundTripAndBlockConstant) {
  Rng rng(14);
  const auto spec = partition::PartitionSpec::make(2, 2);
  const auto gp = partition::grid_partition({8, 8}, spec);
  Tensor s = random_tensor({8, 8, 3}, rng);
  Tensor back = assemble(split_regions(s, gp), gp);
  for (std::size_t i = 0; i < s.numel(); ++i) EXPECT_EQ(back.data()[i], s.data()[i]);
  std::vector<double> per(4 * 16);
  for (std::size_t r = 0; r < 4; ++r)
    for (std::size_t j = 0; j < 16; ++j) per[r * 16 + j] = static_cast<double>(r);
  Tensor img = assemble(Tensor({4, 16, 1}, per), gp);
  EXPECT_EQ(img.data()[0], 0.0);
  EXPECT_EQ(img.data()[7], 1.0);
  EXPECT_EQ(img.data()[8 * 7], 2.0);
  EXPECT_EQ(img.data()[63], 3.0);
}

TEST(Assemble, DuplicateOrMissingIndexIsAssemblyError) {
  Tensor per = Tensor::zeros({2, 2, 1});
  try {
    assemble(per, {0, 1, 1, 3}, {4});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Assembly);
  }
  EXPECT_THROW(assemble(per, {0, 1, 2, 7}, {4}), Error);
}

TEST(Checkpoint, InrRoundTripIsBitExact) {
  Rng rng(15);
  InrConfig c;
  c.depth = 3;
  c.width = 8;
  c.first_width = 5;
  c.gamma = 2.0;
  const Inr net(c, rng);
  std::stringstream s;
  write_checkpoint(s, inr_checkpoint(net, "state"));
  const Checkpoint back = read_checkpoint(s);
  EXPECT_EQ(back.state, "state");
  const Inr net2 = inr_from_checkpoint(back);
  EXPECT_EQ(net2.config().first_width, 5u);
  EXPECT_TRUE(header_for(c).same_architecture(back.header));
  Tensor x = random_tensor({4, 2}, rng);
  Tensor a = net.forward(x), b = net2.forward(x);
  for (std::size_t i = 0; i < a.numel(); ++i) EXPECT_EQ(a.data()[i], b.data()[i]);
}

TEST(Checkpoint, RejectsCorruptInput) {
  std::stringstream bad("LFTX");
  EXPECT_THROW(read_checkpoint(bad), Error);
  Rng rng(16);
  InrConfig c;
  c.width = 4;
  std::stringstream s;
  write_checkpoint(s, inr_checkpoint(Inr(c, rng)));
  const std::string bytes = s.str();
  std::stringstream cut(bytes.substr(0, bytes.size() / 2));
  EXPECT_THROW(read_checkpoint(cut), Error);
}

TEST(Checkpoint, FingerprintNamesArchitecture) {
  InrConfig a, b;
  b.width = 128;
  EXPECT_FALSE(header_for(a).same_architecture(header_for(b)));
  EXPECT_NE(header_for(a).fingerprint(), header_for(b).fingerprint());
}
