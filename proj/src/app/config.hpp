#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "meta/lift_model.hpp"
#include "meta/meta.hpp"
#include "nets/layers.hpp"
#include "signals/degrade.hpp"

namespace lift::app {

using ndgrad::Shape;

// Everything a command needs, grouped like the config file sections.
struct RunConfig {
  // [run]
  std::string task = "image";  // image | audio | volume | spectral
  std::string model = "relift";  // siren | relift | lift | lift-relift
  std::string input;           // signal file, dataset directory or "synthetic:<kind>:<count>:<size>"
  std::string output_dir = "out";
  std::uint64_t seed = 0;
  std::size_t threads = 1;

  // [arch]
  std::size_t depth = 3;
  std::size_t width = 256;
  double omega0 = 30.0;
  double hidden_omega = 30.0;
  double gamma = 1.0;
  bool residual = false;

  // [partition]
  std::size_t regions = 4;  // M per dimension

  // [latents]
  std::size_t global_dim = 32;
  std::size_t mid_side = 2;
  std::size_t mid_dim = 16;
  std::size_t local_side = 4;
  std::size_t local_dim = 8;
  std::size_t mid_out = 0;
  std::size_t alpha_dim = 0;
  bool hlg = true;
  bool linear_bias = true;

  // [meta]
  std::size_t t_inner = 3;
  double inner_lr = 1.0;
  double outer_lr = 5e-4;
  bool meta_sgd = true;
  std::size_t k_neighbors = 8;
  double lambda = 1e-4;
  std::size_t batch_size = 16;
  std::size_t iterations = 2000;
  bool first_order = false;
  std::size_t checkpoint_every = 500;
  double test_fraction = 0.25;

  // [train]
  std::size_t epochs = 500;
  double lr = 1e-4;
  std::size_t eval_every = 50;

  // [degrade]
  std::string degrade = "none";  // none | inpaint | downsample | photon
  double fraction = 0.25;
  std::size_t factor = 2;
  double tau = 40.0;
  double readout = 2.0;
  std::uint64_t degrade_seed = 0;

  // [io]
  std::string checkpoint;   // model to load (modulate, query, interp) or resume from (meta)
  std::string modulations;  // modulation dataset (query, interp)
  std::string record_a;     // record ids (query uses record_a)
  std::string record_b;
  std::size_t frames = 4;   // interp: t = k / frames
  std::string query_shape;  // e.g. "128x128"
  std::string compare_models = "siren,relift";
  std::size_t spectral_samples = 300;
  std::size_t spectral_every = 50;

  bool operator==(const RunConfig&) const = default;

  // Sets "section.key" from text; throws a config error naming the field.
  void set(const std::string& key, const std::string& value);
  std::string get(const std::string& key) const;
  static std::vector<std::string> keys();

  void validate() const;

  nets::InrConfig inr_config(std::size_t in_dim, std::size_t out_dim) const;
  meta::LiftConfig lift_config(std::size_t dims, std::size_t out_channels) const;
  meta::MetaConfig meta_config() const;
  signals::Degradation degradation() const;  // validate() guarantees degrade != "none"
  bool is_lift() const { return model == "lift" || model == "lift-relift"; }
};

// key = value lines under [section] headers; '#' starts a comment.
RunConfig parse_config(const std::string& text, const std::string& origin = "<config>");
RunConfig load_config(const std::string& path);
std::string serialize_config(const RunConfig& config);

Shape parse_shape(const std::string& text);  // "64x64" -> {64, 64}

}  // namespace lift::app
