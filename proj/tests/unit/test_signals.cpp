#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <optional>

#include <unistd.h>

#include "../support/gradcheck.hpp"
#include "app/fitting.hpp"
#include "common/error.hpp"
#include "signals/audio_io.hpp"
#include "signals/degrade.hpp"
#include "signals/image_io.hpp"
#include "signals/synth.hpp"
#include "signals/volume_io.hpp"

using namespace lift;
using namespace lift::signals;
namespace fs = std::filesystem;

namespace {

class SignalFiles : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lift_signals_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

Tensor quantized(const Shape& shape, Rng& rng) {
  std::vector<double> v(ndgrad::numel_of(shape));
  for (auto& x : v) x = static_cast<double>(rng.index(256)) / 255.0;
  return Tensor(shape, v);
}

std::optional<ErrorKind> kind_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  return std::nullopt;
}

void write_bytes(const std::string& p, const std::string& bytes) {
  std::ofstream(p, std::ios::binary) << bytes;
}

double spectral_reference(double x) {
  const double pi = std::acos(-1.0);
  const double s = (std::sin(3 * pi * x) + std::sin(5 * pi * x) + std::sin(7 * pi * x) + std::sin(9 * pi * x)) / 2;
  const double r = s >= 0 ? std::floor(s + 0.5) : -std::floor(-s + 0.5);
  return 2 * r;
}

}  // namespace

TEST_F(SignalFiles, WhitePngLoadsAsOnes) {
  save_image(path("white.png"), Tensor::full({2, 2, 3}, 1.0));
  const SignalGrid g = load_image(path("white.png"));
  EXPECT_EQ(g.values.shape(), (Shape{2, 2, 3}));
  EXPECT_EQ(g.dims(), 2u);
  for (double v : g.values.data()) EXPECT_EQ(v, 1.0);
}

TEST_F(SignalFiles, EightBitImagesRoundTripLosslessly) {
  Rng rng(1);
  for (const char* name : {"a.png", "a.ppm"}) {
    const Tensor img = quantized({5, 7, 3}, rng);
    save_image(path(name), img);
    const SignalGrid back = load_image(path(name));
    EXPECT_EQ(quantize_u8(back.values), quantize_u8(img)) << name;
    for (std::size_t i = 0; i < img.numel(); ++i) EXPECT_EQ(back.values.data()[i], img.data()[i]) << name;
  }
  const Tensor gray = quantized({4, 3, 1}, rng);
  save_image(path("g.pgm"), gray);
  const SignalGrid back = load_image(path("g.pgm"));
  ASSERT_EQ(back.values.shape(), (Shape{4, 3, 3}));
  for (std::size_t i = 0; i < 12; ++i)
    for (std::size_t c = 0; c < 3; ++c) EXPECT_EQ(back.values.data()[i * 3 + c], gray.data()[i]);
}

TEST_F(SignalFiles, CorruptImagesReportParseErrorsWithOffset) {
  save_image(path("ok.png"), Tensor::full({4, 4, 3}, 0.5));
  const auto bytes = read_file(path("ok.png"));
  write_bytes(path("cut.png"), std::string(bytes.begin(), bytes.begin() + 40));
  try {
    load_image(path("cut.png"));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Parse);
    EXPECT_NE(std::string(e.what()).find("offset"), std::string::npos);
  }
  write_bytes(path("x.png"), "GIF89a....");
  EXPECT_EQ(kind_of([&] { load_image(path("x.png")); }), ErrorKind::Parse);
  write_bytes(path("t.ppm"), "P6\n4 4\n255\nabc");
  EXPECT_EQ(kind_of([&] { load_image(path("t.ppm")); }), ErrorKind::Parse);
  EXPECT_EQ(kind_of([&] { load_image(path("missing.png")); }), ErrorKind::Io);
}

TEST_F(SignalFiles, WavRoundTripAndRange) {
  std::vector<double> v(100);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = std::sin(0.3 * static_cast<double>(i)) * 1.2;
  save_audio(path("a.wav"), Tensor({100, 1}, v), 16000);
  const Audio a = load_audio(path("a.wav"));
  EXPECT_EQ(a.sample_rate, 16000u);
  ASSERT_EQ(a.signal.values.shape(), (Shape{100, 1}));
  for (std::size_t i = 0; i < v.size(); ++i) {
    const double x = a.signal.values.data()[i];
    EXPECT_GE(x, -1.0);
    EXPECT_LE(x, 1.0);
    // Written with scale 32767, read back with 32768.
    EXPECT_NEAR(x, std::clamp(v[i], -1.0, 1.0), 2.0 / 32767);
  }
  const auto bytes = read_file(path("a.wav"));
  EXPECT_EQ(kind_of([&] { decode_wav({bytes.begin(), bytes.begin() + 30}, "cut.wav"); }), ErrorKind::Parse);
  auto stereo = bytes;
  stereo[22] = 2;
  EXPECT_EQ(kind_of([&] { decode_wav(stereo, "stereo.wav"); }), ErrorKind::Parse);
}

TEST_F(SignalFiles, VolumeRoundTrip) {
  const SignalGrid s = sphere_volume(8, {0.5, 0.5, 0.5}, 0.3);
  save_volume(path("v.lftv"), s.values);
  const SignalGrid back = load_volume(path("v.lftv"));
  ASSERT_EQ(back.values.shape(), (Shape{8, 8, 8, 1}));
  for (std::size_t i = 0; i < s.values.numel(); ++i) EXPECT_EQ(back.values.data()[i], s.values.data()[i]);
  write_bytes(path("bad.lftv"), "LFTV\x02\0\0\0\x02\0\0\0\x02\0\0\0abc");
  EXPECT_EQ(kind_of([&] { load_volume(path("bad.lftv")); }), ErrorKind::Parse);
}

TEST(Synth, SpectralTarget) {
  EXPECT_EQ(spectral_function(0.0), 0.0);
  EXPECT_EQ(spectral_function(1.0 / 6.0), 0.0);
  EXPECT_EQ(round_half_away(0.5), 1.0);
  EXPECT_EQ(round_half_away(-0.5), -1.0);
  EXPECT_EQ(round_half_away(2.5), 3.0);
  EXPECT_EQ(round_half_away(-1.49), -1.0);
  const SignalGrid t = spectral_target();
  ASSERT_EQ(t.values.shape(), (Shape{300, 1}));
  EXPECT_EQ(t.lo, -1.0);
  EXPECT_EQ(t.hi, 1.0);
  const Tensor c = t.coords();
  EXPECT_EQ(c.data()[0], -1.0);
  EXPECT_EQ(c.data()[299], 1.0);
  for (std::size_t i = 0; i < 300; ++i) EXPECT_EQ(t.values.data()[i], spectral_reference(c.data()[i])) << i;
  EXPECT_THROW(spectral_target(1), Error);
}

TEST(Synth, SyntheticSourcesAreDeterministicAndInRange) {
  const SignalGrid a = test_image(32), b = test_image(32);
  EXPECT_EQ(quantize_u8(a.values), quantize_u8(b.values));
  Rng r1(5), r2(5);
  const SignalGrid x = blob_image(16, r1), y = blob_image(16, r2);
  for (std::size_t i = 0; i < x.values.numel(); ++i) EXPECT_EQ(x.values.data()[i], y.values.data()[i]);
  for (const SignalGrid* g : {&a, &x}) {
    for (double v : g->values.data()) {
      EXPECT_GE(v, 0.0);
      EXPECT_LE(v, 1.0);
    }
  }
  const SignalGrid s = sphere_volume(9, {0.5, 0.5, 0.5}, 0.25);
  EXPECT_EQ(s.values.data()[(4 * 9 + 4) * 9 + 4], 1.0);
  EXPECT_EQ(s.values.data()[0], 0.0);
  const SignalGrid box = box_volume(5, {0.0, 0.0, 0.0}, {0.5, 1.0, 1.0});
  EXPECT_EQ(box.values.data()[0], 1.0);
  EXPECT_EQ(box.values.data()[4 * 25], 0.0);
}

TEST(Grid, CoordinateConvention) {
  const Tensor c = grid_coords({3, 5});
  ASSERT_EQ(c.shape(), (Shape{15, 2}));
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 5; ++j) {
      EXPECT_EQ(c.data()[(i * 5 + j) * 2], static_cast<double>(i) / 2.0);
      EXPECT_EQ(c.data()[(i * 5 + j) * 2 + 1], static_cast<double>(j) / 4.0);
    }
  }
  EXPECT_EQ(axis_coordinate(0, 1), 0.0);
  EXPECT_EQ(axis_coordinate(3, 7, -1.0, 1.0), 0.0);
  Rng rng(2);
  const Tensor v = lift::testing::random_tensor({3, 4, 2}, rng);
  const Tensor back = from_rows(as_rows(v), {3, 4});
  for (std::size_t i = 0; i < v.numel(); ++i) EXPECT_EQ(back.data()[i], v.data()[i]);
}

TEST(Degrade, InpaintWithholdsCeilingAndPartitionsGrid) {
  Rng rng(3);
  for (std::size_t side : {10u, 7u}) {
    const SignalGrid s = SignalGrid::make(lift::testing::random_tensor({side, side, 3}, rng, 0, 1), "r");
    const Degraded d = degrade(s, Degradation::inpaint(0.25, 9));
    const std::size_t n = side * side;
    EXPECT_EQ(d.withheld.size(), static_cast<std::size_t>(std::ceil(0.25 * static_cast<double>(n))));
    std::vector<int> seen(n, 0);
    for (auto i : d.withheld) ++seen[i];
    for (auto i : d.train.kept) ++seen[i];
    for (int c : seen) EXPECT_EQ(c, 1);
    ASSERT_EQ(d.train.values.dim(0), d.train.kept.size());
    const Tensor coords = s.coords();
    for (std::size_t r = 0; r < d.train.kept.size(); ++r) {
      const std::size_t k = d.train.kept[r];
      EXPECT_EQ(d.train.coords.data()[r * 2], coords.data()[k * 2]);
      EXPECT_EQ(d.train.values.data()[r * 3 + 2], s.values.data()[k * 3 + 2]);
    }
    EXPECT_EQ(degrade(s, Degradation::inpaint(0.25, 9)).withheld, d.withheld);
    EXPECT_NE(degrade(s, Degradation::inpaint(0.25, 10)).withheld, d.withheld);
  }
}

TEST(Degrade, PhotonNoise) {
  Rng rng(4);
  const SignalGrid s = SignalGrid::make(lift::testing::random_tensor({8, 8, 1}, rng, 0, 1), "r");
  const Degraded big = degrade(s, Degradation::photon(1e6, 2.0, 1));
  for (std::size_t i = 0; i < 64; ++i) EXPECT_NEAR(big.train.values.data()[i], s.values.data()[i], 1e-2);
  const Degraded a = degrade(s, Degradation::photon(40, 2, 7)), b = degrade(s, Degradation::photon(40, 2, 7));
  double diff = 0;
  for (std::size_t i = 0; i < 64; ++i) {
    EXPECT_EQ(a.train.values.data()[i], b.train.values.data()[i]);
    EXPECT_GE(a.train.values.data()[i], 0.0);
    EXPECT_LE(a.train.values.data()[i], 1.0);
    // Photon counts are integers, so values are multiples of 1/tau.
    EXPECT_NEAR(a.train.values.data()[i] * 40, std::round(a.train.values.data()[i] * 40), 1e-9);
    diff += std::abs(a.train.values.data()[i] - s.values.data()[i]);
  }
  EXPECT_GT(diff, 0.0);
}

TEST(Degrade, Downsample) {
  const SignalGrid s = SignalGrid::make(Tensor::full({4, 4, 2}, 0.3), "c");
  const Degraded d = degrade(s, Degradation::downsample(2));
  EXPECT_EQ(d.train.grid, (Shape{2, 2}));
  for (double v : d.train.values.data()) EXPECT_DOUBLE_EQ(v, 0.3);
  EXPECT_DOUBLE_EQ(d.train.coords.data()[0], 0.5 / 3.0);
  EXPECT_DOUBLE_EQ(d.train.coords.data()[7], 2.5 / 3.0);
  Rng rng(5);
  const Tensor v = lift::testing::random_tensor({6, 4, 1}, rng);
  const Tensor low = box_downsample(v, 2);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      double s2 = 0;
      for (std::size_t a = 0; a < 2; ++a)
        for (std::size_t b = 0; b < 2; ++b) s2 += v.data()[(2 * i + a) * 4 + 2 * j + b];
      EXPECT_NEAR(low.data()[i * 2 + j], s2 / 4, 1e-15);
    }
  }
  EXPECT_EQ(kind_of([&] { box_downsample(v, 4); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([] { Degradation::downsample(1).validate(); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([] { Degradation::inpaint(1.0, 0).validate(); }), ErrorKind::Config);
  EXPECT_EQ(kind_of([] { Degradation::photon(0.0, 2, 0).validate(); }), ErrorKind::Config);
}

TEST(DenseQuery, TrainingShapeReproducesReconstruction) {
  Rng rng(6);
  const nets::Inr net = nets::build_siren(2, 16, 30.0, rng, 2, 3);
  const SignalGrid s = SignalGrid::make(Tensor::zeros({6, 5, 3}), "z");
  const Tensor direct = from_rows(net.forward(s.coords()), {6, 5});
  const Tensor q = app::dense_query(net, {6, 5});
  ASSERT_EQ(q.shape(), direct.shape());
  for (std::size_t i = 0; i < q.numel(); ++i) EXPECT_EQ(q.data()[i], direct.data()[i]);
}

TEST(DenseQuery, RampFitQueriedAtTwiceTheResolution) {
  const SignalGrid r = ramp({8, 8});
  nets::InrConfig c;
  c.depth = 2;
  c.width = 32;
  c.omega0 = c.hidden_omega = 5.0;
  c.out_dim = 1;
  app::FitOptions opt;
  opt.steps = 300;
  opt.lr = 2e-3;
  const auto fit = app::fit_inr(c, 1, r.coords(), as_rows(r.values), opt);
  const Tensor q = app::dense_query(fit.net, {16, 16});
  double dev = 0;
  for (std::size_t i = 0; i < 16; ++i)
    for (std::size_t j = 0; j < 16; ++j)
      dev = std::max(dev, std::abs(q.data()[i * 16 + j] - (i / 15.0 + j / 15.0) / 2.0));
  RecordProperty("max_deviation", std::to_string(dev));
  EXPECT_LT(dev, 0.05);
}
