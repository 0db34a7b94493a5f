#include <gtest/gtest.h>

#include <cmath>
#include <sstream>

#include "../support/op_cases.hpp"
#include "common/error.hpp"
#include "ndgrad/optim.hpp"
#include "ndgrad/serialize.hpp"

using namespace lift;
using namespace lift::ndgrad;
using lift::testing::random_tensor;

namespace {

std::vector<double> values(const Tensor& t) { return {t.data().begin(), t.data().end()}; }

}  // namespace

TEST(Tensor, ShapeAndFactories) {
  Tensor z = Tensor::zeros({2, 3});
  EXPECT_EQ(z.rank(), 2u);
  EXPECT_EQ(z.numel(), 6u);
  EXPECT_EQ(Tensor::full({2}, 1.5).data()[1], 1.5);
  EXPECT_EQ(Tensor::scalar(4.0).item(), 4.0);
  EXPECT_THROW(Tensor({2, 2}, {1.0, 2.0}), Error);
  EXPECT_EQ(shape_str({2, 3}), "[2x3]");
}

TEST(Tensor, CloneIsDeepDetachDropsGraph) {
  Tensor a({2}, {1.0, 2.0}, true);
  Tensor b = a.clone();
  b.mutable_data()[0] = 9.0;
  EXPECT_EQ(a.data()[0], 1.0);
  Tensor y = mul(a, a);
  EXPECT_TRUE(y.requires_grad());
  EXPECT_FALSE(y.detach().requires_grad());
}

TEST(Autograd, NoGradGuardSkipsRecording) {
  Tensor a({2}, {1.0, 2.0}, true);
  {
    NoGradGuard off;
    EXPECT_FALSE(grad_enabled());
    EXPECT_FALSE(mul(a, a).requires_grad());
  }
  EXPECT_TRUE(grad_enabled());
  EXPECT_TRUE(mul(a, a).requires_grad());
}

TEST(Autograd, BackwardAccumulatesUntilZeroGrad) {
  Tensor a({2}, {1.0, -3.0}, true);
  backward(sum(square(a)));
  backward(sum(square(a)));
  EXPECT_DOUBLE_EQ(a.grad_data()[0], 4.0);
  EXPECT_DOUBLE_EQ(a.grad_data()[1], -12.0);
  a.zero_grad();
  EXPECT_FALSE(a.has_grad() && a.grad_data()[0] != 0.0);
}

TEST(Autograd, BackwardRejectsNonScalar) {
  Tensor a({2}, {1.0, 2.0}, true);
  EXPECT_THROW(backward(mul(a, a)), Error);
}

TEST(Autograd, UnreachedInputsGetZeros) {
  Tensor a({2}, {1.0, 2.0}, true), b({3}, {1.0, 2.0, 3.0}, true);
  auto g = grad(sum(a), {a, b});
  EXPECT_EQ(values(g[1]), std::vector<double>(3, 0.0));
}

TEST(Autograd, DiamondGraphSumsBothPaths) {
  Tensor x({1}, {0.3}, true);
  Tensor y = add(sin_act(x, 1.0), square(x));
  auto g = grad(sum(y), {x});
  EXPECT_NEAR(g[0].data()[0], std::cos(0.3) + 0.6, 1e-14);
}

TEST(Autograd, SecondDerivativeOfSine) {
  Tensor x({1}, {0.4}, true);
  auto g1 = grad(sum(sin_act(x, 2.0)), {x}, true);
  auto g2 = grad(sum(g1[0]), {x});
  EXPECT_NEAR(g2[0].data()[0], -4.0 * std::sin(0.8), 1e-13);
}

class OpGradient : public ::testing::TestWithParam<std::size_t> {};

TEST_P(OpGradient, MatchesFiniteDifferences) {
  const auto cases = lift::testing::op_cases();
  const auto& c = cases[GetParam()];
  for (std::uint64_t seed = 0; seed < 5; ++seed) {
    Rng rng(seed);
    lift::testing::GradCheckOptions opt;
    opt.seed = seed;
    opt.second_order = c.second_order;
    EXPECT_LT(lift::testing::gradient_error(c.f, c.inputs(rng), opt), 1e-6) << c.name << " seed " << seed;
  }
}

INSTANTIATE_TEST_SUITE_P(AllOps, OpGradient, ::testing::Range<std::size_t>(0, lift::testing::op_cases().size()),
                         [](const auto& info) { return lift::testing::op_cases()[info.param].name; });

TEST(Ops, MatmulMatchesNaiveLoop) {
  Rng rng(3);
  Tensor a = random_tensor({2, 3, 4}, rng), b = random_tensor({2, 4, 5}, rng);
  Tensor c = matmul(a, b);
  ASSERT_EQ(c.shape(), (Shape{2, 3, 5}));
  for (std::size_t r = 0; r < 2; ++r)
    for (std::size_t i = 0; i < 3; ++i)
      for (std::size_t j = 0; j < 5; ++j) {
        double s = 0;
        for (std::size_t k = 0; k < 4; ++k) s += a.data()[(r * 3 + i) * 4 + k] * b.data()[(r * 4 + k) * 5 + j];
        EXPECT_NEAR(c.data()[(r * 3 + i) * 5 + j], s, 1e-14);
      }
  Tensor ct = matmul(a, transpose_last2(b), false, true);
  for (std::size_t i = 0; i < c.numel(); ++i) EXPECT_NEAR(ct.data()[i], c.data()[i], 1e-14);
}

TEST(Ops, BroadcastShapes) {
  EXPECT_EQ(broadcast_shapes({3, 1}, {4}), (Shape{3, 4}));
  EXPECT_EQ(broadcast_shapes({2, 1, 3}, {4, 1}), (Shape{2, 4, 3}));
  EXPECT_THROW(broadcast_shapes({3}, {4}), Error);
  EXPECT_THROW(matmul(Tensor::zeros({2, 3}), Tensor::zeros({2, 3})), Error);
}

TEST(Ops, SumToInvertsBroadcast) {
  Rng rng(1);
  Tensor x = random_tensor({4, 1}, rng);
  Tensor y = sum_to(broadcast_to(x, {2, 4, 3}), {4, 1});
  for (std::size_t i = 0; i < 4; ++i) EXPECT_NEAR(y.data()[i], 6 * x.data()[i], 1e-14);
}

TEST(Ops, UpsampleAndBlockSumAreAdjoint) {
  Rng rng(2);
  Tensor x = random_tensor({2, 3, 2}, rng), y = random_tensor({4, 6, 2}, rng);
  const double lhs = sum(mul(nearest_upsample(x, {4, 6}), y)).item();
  const double rhs = sum(mul(x, block_sum(y, {2, 3}))).item();
  EXPECT_NEAR(lhs, rhs, 1e-12);
  EXPECT_THROW(nearest_upsample(x, {5, 6}), Error);
}

TEST(Ops, GatherScatterAreAdjoint) {
  Rng rng(4);
  auto idx = std::make_shared<const std::vector<std::size_t>>(std::vector<std::size_t>{3, 0, 3});
  Tensor x = random_tensor({4, 2}, rng), y = random_tensor({3, 2}, rng);
  EXPECT_NEAR(sum(mul(gather_rows(x, idx), y)).item(), sum(mul(x, scatter_rows(y, idx, 4))).item(), 1e-13);
}

TEST(Ops, PadAndNarrowRoundTrip) {
  Rng rng(5);
  Tensor x = random_tensor({2, 3}, rng);
  Tensor back = narrow(pad_axis(x, 1, 2, 7), 1, 2, 3);
  EXPECT_EQ(values(back), values(x));
}

TEST(Adam, SingleStepMatchesClosedForm) {
  Tensor p({2}, {1.0, -2.0}, true);
  Adam adam({p}, AdamOptions{0.1, 0.9, 0.999, 1e-8});
  backward(sum(square(p)));
  adam.step();
  // First step: m_hat = g, v_hat = g^2, update = lr * g / (|g| + eps).
  EXPECT_NEAR(p.data()[0], 1.0 - 0.1 * 2.0 / (2.0 + 1e-8), 1e-12);
  EXPECT_NEAR(p.data()[1], -2.0 + 0.1 * 4.0 / (4.0 + 1e-8), 1e-12);
}

TEST(Adam, StateRoundTripContinuesIdentically) {
  auto run = [](bool reload) {
    Tensor p({3}, {0.5, -1.0, 2.0}, true);
    Adam adam({p}, AdamOptions{0.05});
    for (int s = 0; s < 6; ++s) {
      if (reload && s == 3) {
        std::stringstream buf;
        adam.save_state(buf);
        Adam fresh({p}, AdamOptions{0.05});
        fresh.load_state(buf);
        adam = fresh;
      }
      adam.zero_grad();
      backward(sum(mul(square(p), sin_act(p, 1.0))));
      adam.step();
    }
    return values(p);
  };
  EXPECT_EQ(run(false), run(true));
}

TEST(Serialize, TensorRoundTripIsBitExact) {
  Rng rng(7);
  Tensor t = random_tensor({2, 3, 4}, rng, -1e6, 1e6);
  std::stringstream s;
  write_tensor(s, t);
  Tensor back = read_tensor(s);
  EXPECT_EQ(back.shape(), t.shape());
  EXPECT_EQ(values(back), values(t));
}

TEST(Serialize, RejectsBadMagicAndTruncation) {
  std::stringstream bad("LFT2xxxx");
  EXPECT_THROW(read_tensor(bad), Error);
  Rng rng(8);
  std::stringstream s;
  write_tensor(s, random_tensor({4}, rng));
  std::string bytes = s.str();
  std::stringstream cut(bytes.substr(0, bytes.size() - 3));
  EXPECT_THROW(read_tensor(cut), Error);
}
