#include <gtest/gtest.h>

#include <cmath>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include <unistd.h>

#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/manifest.hpp"
#include "common/error.hpp"

using namespace lift;
using namespace lift::app;
namespace fs = std::filesystem;

namespace {

class AppRun : public ::testing::Test {
 protected:
  void SetUp() override {
    dir_ = fs::temp_directory_path() /
           ("lift_app_" + std::to_string(::getpid()) + "_" +
            ::testing::UnitTest::GetInstance()->current_test_info()->name());
    fs::remove_all(dir_);
    fs::create_directories(dir_);
  }
  void TearDown() override { fs::remove_all(dir_); }
  std::string path(const std::string& name) const { return (dir_ / name).string(); }
  fs::path dir_;
};

// manifest.txt hash lines: "hash  path".
std::map<std::string, std::string> manifest_hashes(const std::string& manifest) {
  std::ifstream in(manifest);
  std::string line;
  bool artifacts = false;
  std::map<std::string, std::string> out;
  while (std::getline(in, line)) {
    if (line.rfind("# artifacts", 0) == 0) {
      artifacts = true;
      continue;
    }
    if (!artifacts || line.empty()) continue;
    const auto sep = line.find("  ");
    out[line.substr(sep + 2)] = line.substr(0, sep);
  }
  return out;
}

RunConfig tiny_fit(const std::string& out) {
  RunConfig c;
  c.task = "image";
  c.model = "siren";
  c.input = "synthetic:test:16";
  c.output_dir = out;
  c.depth = 2;
  c.width = 16;
  c.epochs = 10;
  c.eval_every = 5;
  return c;
}

RunConfig tiny_meta(const std::string& out) {
  RunConfig c;
  c.task = "image";
  c.model = "lift";
  c.input = "synthetic:blobs:8:8";
  c.output_dir = out;
  c.depth = 1;
  c.width = 8;
  c.omega0 = 10;
  c.regions = 2;
  c.global_dim = 4;
  c.mid_side = 1;
  c.mid_dim = 4;
  c.local_side = 2;
  c.local_dim = 4;
  c.iterations = 4;
  c.batch_size = 3;
  c.k_neighbors = 2;
  c.checkpoint_every = 2;
  return c;
}

}  // namespace

TEST(Config, DefaultRoundTrip) {
  const RunConfig c;
  const std::string text = serialize_config(c);
  EXPECT_EQ(parse_config(text), c);
  EXPECT_EQ(serialize_config(parse_config(text)), text);
  EXPECT_NE(text.find("outer_lr = 0.0005\n"), std::string::npos);
}

TEST(Config, EveryFieldRoundTrips) {
  RunConfig c;
  const std::map<std::string, std::string> changes{
      {"run.task", "volume"},       {"run.model", "lift-relift"}, {"run.input", "data/x"},
      {"run.seed", "17"},           {"arch.gamma", "2"},          {"arch.omega0", "0.1"},
      {"arch.residual", "true"},    {"partition.regions", "8"},   {"latents.hlg", "false"},
      {"meta.lambda", "0.3"},       {"meta.first_order", "true"}, {"train.lr", "1e-05"},
      {"degrade.kind", "photon"},   {"degrade.tau", "12.5"},      {"io.query_shape", "32x32"},
      {"io.compare_models", "siren"}};
  for (const auto& [k, v] : changes) c.set(k, v);
  for (const auto& [k, v] : changes) EXPECT_EQ(c.get(k), v) << k;
  EXPECT_EQ(parse_config(serialize_config(c)), c);
  EXPECT_EQ(RunConfig::keys().size(), 51u);
}

TEST(Config, DiagnosticsNameOriginAndLine) {
  auto message = [](const std::string& text) {
    try {
      parse_config(text, "cfg.ini");
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::Config);
      return std::string(e.what());
    }
    return std::string("no error");
  };
  const std::string unknown = message("[run]\ntask = image\n\n[arch]\nwidht = 3\n");
  EXPECT_NE(unknown.find("cfg.ini:5"), std::string::npos) << unknown;
  EXPECT_NE(unknown.find("widht"), std::string::npos);
  EXPECT_EQ(unknown.find("configuration error"), unknown.rfind("configuration error")) << unknown;
  EXPECT_NE(message("[arch]\nwidth = many\n").find("cfg.ini:2"), std::string::npos);
  EXPECT_NE(message("width = 3\n").find("before any [section]"), std::string::npos);
  EXPECT_NE(message("[arch\n").find("malformed"), std::string::npos);
  EXPECT_NE(message("[arch]\njust text\n").find("key = value"), std::string::npos);
  EXPECT_NE(message("[arch]\nresidual = maybe\n").find("cfg.ini:2"), std::string::npos);
  EXPECT_EQ(parse_config("# comment\n[arch] # trailing\nwidth = 7 # note\n").width, 7u);
}

TEST(Config, ValidationAndDerivedConfigs) {
  RunConfig c;
  c.model = "transformer";
  EXPECT_THROW(c.validate(), Error);
  c = RunConfig();
  c.model = "lift";
  c.degrade = "inpaint";
  EXPECT_THROW(c.validate(), Error);
  c = RunConfig();
  c.model = "siren";
  c.gamma = 2;
  c.residual = true;
  const auto s = c.inr_config(2, 3);
  EXPECT_EQ(s.gamma, 1.0);
  EXPECT_FALSE(s.residual);
  c.model = "relift";
  EXPECT_TRUE(c.inr_config(2, 3).residual);
  EXPECT_EQ(c.inr_config(2, 3).gamma, 2.0);
  c.model = "lift";
  c.regions = 4;
  c.local_side = 4;
  const auto l = c.lift_config(2, 3);
  EXPECT_EQ(l.bank.spec.region_count(), 16u);
  EXPECT_EQ(l.hlg.latents.local_side, 4u);
  EXPECT_EQ(parse_shape("64x32"), (Shape{64, 32}));
  EXPECT_EQ(parse_shape("5"), (Shape{5}));
  EXPECT_THROW(parse_shape("4x0"), Error);
  EXPECT_THROW(parse_shape("2x2x2x2"), Error);
  EXPECT_THROW(parse_shape("ax3"), Error);
}

TEST(Manifest, HashesAndFormat) {
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  const fs::path d = fs::temp_directory_path() / ("lift_manifest_" + std::to_string(::getpid()));
  fs::create_directories(d);
  std::ofstream(d / "a.csv") << "iter,loss,wall_ms\n1,0.5,12\n2,0.25,40\n";
  std::ofstream(d / "b.csv") << "iter,loss,wall_ms\n1,0.5,99\n2,0.25,1\n";
  std::ofstream(d / "c.csv") << "iter,loss\n1,0.5\n2,0.25\n";
  EXPECT_EQ(sha256_csv_without((d / "a.csv").string(), "wall_ms"), sha256_csv_without((d / "b.csv").string(), "wall_ms"));
  EXPECT_EQ(sha256_csv_without((d / "a.csv").string(), "wall_ms"), sha256_file((d / "c.csv").string()));
  EXPECT_NE(sha256_file((d / "a.csv").string()), sha256_file((d / "b.csv").string()));
  Manifest m("fit", "[run]\nseed = 1\n");
  m.add(d.string(), "c.csv");
  const std::string text = m.render();
  EXPECT_EQ(text.rfind("# command: fit", 0), 0u);
  EXPECT_NE(text.find("seed = 1"), std::string::npos);
  EXPECT_NE(text.find(sha256_file((d / "c.csv").string()) + "  c.csv"), std::string::npos);
  fs::remove_all(d);
}

TEST_F(AppRun, FitWritesHashedArtifactsDeterministically) {
  const auto a = run_command("fit", tiny_fit(path("a")));
  const auto b = run_command("fit", tiny_fit(path("b")));
  for (const char* name : {"model.lftc", "loss.csv", "reconstruction.png", "metrics.csv"}) {
    EXPECT_NE(std::find(a.artifacts.begin(), a.artifacts.end(), name), a.artifacts.end()) << name;
  }
  const auto ha = manifest_hashes(a.manifest), hb = manifest_hashes(b.manifest);
  ASSERT_EQ(ha.size(), a.artifacts.size());
  for (const auto& [file, hash] : ha) {
    EXPECT_EQ(hash, sha256_file(path("a/" + file))) << file;
    EXPECT_EQ(hash, hb.at(file)) << file;
  }
  EXPECT_TRUE(std::isfinite(a.metric("psnr")));
  EXPECT_TRUE(std::isnan(a.metric("no_such_metric")));
}

TEST_F(AppRun, FitWithInpaintingReportsWithheldPsnr) {
  RunConfig c = tiny_fit(path("inp"));
  c.degrade = "inpaint";
  const auto out = run_command("fit", c);
  EXPECT_EQ(out.metric("observations"), 16.0 * 16.0 - 64.0);
  EXPECT_TRUE(std::isfinite(out.metric("withheld_psnr")));
}

TEST_F(AppRun, MetaPipeline) {
  RunConfig c = tiny_meta(path("meta"));
  const auto m = run_command("meta", c);
  EXPECT_EQ(m.metric("iterations"), 4.0);
  EXPECT_TRUE(std::isfinite(m.metric("test_psnr")));
  ASSERT_TRUE(fs::exists(path("meta/checkpoint.lftc")));

  c.output_dir = path("mod");
  c.checkpoint = path("meta/checkpoint.lftc");
  const auto mod = run_command("modulate", c);
  EXPECT_EQ(mod.metric("records"), 8.0);

  c.output_dir = path("query");
  c.modulations = path("mod/modulations.lftm");
  c.record_a = "blob_0001";
  c.query_shape = "16x16";
  const auto q = run_command("query", c);
  EXPECT_EQ(q.metric("points"), 256.0);

  c.output_dir = path("interp");
  c.record_a = "blob_0000";
  c.record_b = "blob_0003";
  c.frames = 2;
  const auto i = run_command("interp", c);
  EXPECT_EQ(i.metric("frames"), 3.0);
  EXPECT_EQ(i.metric("all_finite"), 1.0);

  RunConfig wrong = c;
  wrong.output_dir = path("resume");
  wrong.width = 16;
  try {
    run_command("meta", wrong);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
  c.record_a = "blob_9999";
  c.output_dir = path("missing");
  EXPECT_THROW(run_command("query", c), Error);
}

TEST_F(AppRun, SpectraReportsExpansionAndScaling) {
  RunConfig c;
  c.output_dir = path("spectra");
  const auto out = run_command("spectra", c);
  EXPECT_LT(out.metric("max_deviation"), 1e-6);
  EXPECT_EQ(out.metric("scaling_law_holds"), 1.0);
  EXPECT_LT(out.metric("parseval_gap"), 1e-9);
}

TEST_F(AppRun, InputErrorsAreConfigErrors) {
  RunConfig c = tiny_fit(path("x"));
  c.input = path("nope.png");
  try {
    run_command("fit", c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
    EXPECT_NE(std::string(e.what()).find("nope.png"), std::string::npos);
  }
  EXPECT_THROW(run_command("dance", c), Error);
  c.input = "synthetic:blobs:2";
  EXPECT_THROW(load_dataset(c), Error);
  EXPECT_EQ(exit_code_for(ErrorKind::Config), 2);
  EXPECT_EQ(exit_code_for(ErrorKind::Numeric), 3);
  EXPECT_EQ(exit_code_for(ErrorKind::Io), 3);
}

TEST_F(AppRun, DatasetDirectoryNeedsUniformShapes) {
  fs::create_directories(path("data"));
  RunConfig c = tiny_fit(path("o"));
  c.input = "synthetic:test:8";
  std::ofstream(path("data/readme.txt")) << "ignored";
  for (const char* name : {"a.png", "b.png"}) {
    c.output_dir = path(std::string("o_") + name);
    run_command("fit", c);
    fs::copy_file(path(std::string("o_") + name + "/reconstruction.png"), path(std::string("data/") + name));
  }
  c.input = path("data");
  const auto ds = load_dataset(c);
  ASSERT_EQ(ds.size(), 2u);
  EXPECT_EQ(ds[0].id, "a");
  c.input = "synthetic:test:12";
  c.output_dir = path("o_c");
  run_command("fit", c);
  fs::copy_file(path("o_c/reconstruction.png"), path("data/c.png"));
  c.input = path("data");
  try {
    load_dataset(c);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("c"), std::string::npos);
  }
}
