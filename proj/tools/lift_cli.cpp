// Command-line front end. Talks to the library only through lift/lift.h.
#include <cstdio>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "lift/lift.h"

namespace {

struct Override {
  const char* flag;
  const char* key;
  const char* help;
};

const Override kValueFlags[] = {
    {"--task", "run.task", "image | audio | volume | spectral"},
    {"--model", "run.model", "siren | relift | lift | lift-relift"},
    {"--input,-i", "run.input", "signal file, dataset directory or synthetic:<kind>[:args]"},
    {"--output,-o", "run.output_dir", "output directory"},
    {"--seed", "run.seed", "random seed"},
    {"--threads", "run.threads", "worker cap for batch-parallel inner fits"},
    {"--depth", "arch.depth", "number of sine layers"},
    {"--width", "arch.width", "hidden width"},
    {"--omega0", "arch.omega0", "first-layer frequency"},
    {"--hidden-omega", "arch.hidden_omega", "hidden-layer frequency"},
    {"--gamma", "arch.gamma", "frequency scaling of the first layer (ReLIFT)"},
    {"--regions,-M", "partition.regions", "subdomains per axis"},
    {"--global-dim", "latents.global_dim", "global latent width"},
    {"--mid-side", "latents.mid_side", "intermediate latent grid side"},
    {"--mid-dim", "latents.mid_dim", "intermediate latent width"},
    {"--local-side", "latents.local_side", "local latent grid side (equals M)"},
    {"--local-dim", "latents.local_dim", "local latent width"},
    {"--t-inner", "meta.t_inner", "inner-loop steps"},
    {"--inner-lr", "meta.inner_lr", "inner-loop step size"},
    {"--outer-lr", "meta.outer_lr", "outer Adam learning rate"},
    {"--neighbors,-K", "meta.k_neighbors", "neighbours in the smoothness loss"},
    {"--lambda", "meta.lambda", "smoothness weight"},
    {"--batch-size", "meta.batch_size", "outer batch size"},
    {"--iterations", "meta.iterations", "outer iterations"},
    {"--checkpoint-every", "meta.checkpoint_every", "periodic checkpoint interval"},
    {"--test-fraction", "meta.test_fraction", "held-out share of the dataset"},
    {"--epochs", "train.epochs", "single-signal optimization steps"},
    {"--lr", "train.lr", "single-signal learning rate"},
    {"--eval-every", "train.eval_every", "evaluation interval"},
    {"--degrade", "degrade.kind", "none | inpaint | downsample | photon"},
    {"--fraction", "degrade.fraction", "inpainting: withheld share"},
    {"--factor", "degrade.factor", "downsampling factor"},
    {"--tau", "degrade.tau", "photon count scale"},
    {"--readout", "degrade.readout", "readout photon count"},
    {"--degrade-seed", "degrade.seed", "degradation seed"},
    {"--checkpoint,--resume", "io.checkpoint", "checkpoint to load or resume from"},
    {"--modulations", "io.modulations", "modulation dataset"},
    {"--record-a", "io.record_a", "record id"},
    {"--record-b", "io.record_b", "second record id (interp)"},
    {"--frames", "io.frames", "interpolation steps n (t = k/n)"},
    {"--shape", "io.query_shape", "output grid, e.g. 128x128"},
    {"--models", "io.compare_models", "comma-separated model list for compare"},
    {"--samples", "io.spectral_samples", "spectral target samples"},
    {"--spectral-every", "io.spectral_every", "spectral trace interval"},
};

struct Toggle {
  const char* flag;
  const char* key;
  const char* value;
  const char* help;
};

const Toggle kToggles[] = {
    {"--residual", "arch.residual", "true", "residual hidden layers"},
    {"--no-hlg", "latents.hlg", "false", "replace the latent generator by a local projection"},
    {"--no-bias", "latents.linear_bias", "false", "bias-free generator maps"},
    {"--first-order", "meta.first_order", "true", "first-order inner-loop gradients"},
    {"--no-meta-sgd", "meta.meta_sgd", "false", "fixed inner step size"},
};

int report(lift_status status) {
  std::fprintf(stderr, "error: %s\n", lift_last_error());
  return lift_exit_code(status);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"LIFT implicit neural representations"};
  app.require_subcommand(1);
  std::string config_path;
  std::vector<std::string> sets;
  app.add_option("--config,-c", config_path, "config file (key = value under [section] headers)");
  app.add_option("--set", sets, "override, section.key=value (repeatable)");
  std::vector<std::string> values(std::size(kValueFlags));
  for (std::size_t i = 0; i < std::size(kValueFlags); ++i) {
    app.add_option(kValueFlags[i].flag, values[i], kValueFlags[i].help);
  }
  std::vector<CLI::Option*> toggle_opts;
  for (std::size_t i = 0; i < std::size(kToggles); ++i) {
    toggle_opts.push_back(app.add_flag(kToggles[i].flag, kToggles[i].help));
  }
  bool dump = false;
  app.add_flag("--print-config", dump, "print the effective config and exit");
  app.fallthrough();

  const char* descriptions[][2] = {
      {"fit", "fit one signal (optionally degraded)"},
      {"meta", "meta-train a LIFT model on a dataset"},
      {"modulate", "fit latents for every signal with a frozen model"},
      {"query", "evaluate a model on a grid"},
      {"interp", "decode latent interpolations between two records"},
      {"spectra", "expansion oracle report and spectra"},
      {"compare", "PSNR-vs-step curves for several models"},
  };
  for (const auto& d : descriptions) app.add_subcommand(d[0], d[1]);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }
  const std::string command = app.get_subcommands().front()->get_name();

  lift_config* config = nullptr;
  lift_status s = config_path.empty() ? lift_config_new(&config) : lift_config_load(config_path.c_str(), &config);
  if (s != LIFT_OK) return report(s);
  auto apply = [&](const std::string& key, const std::string& value) {
    const lift_status st = lift_config_set(config, key.c_str(), value.c_str());
    return st;
  };
  for (const auto& kv : sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) {
      std::fprintf(stderr, "error: --set expects section.key=value, got '%s'\n", kv.c_str());
      lift_config_free(config);
      return 2;
    }
    if ((s = apply(kv.substr(0, eq), kv.substr(eq + 1))) != LIFT_OK) break;
  }
  for (std::size_t i = 0; s == LIFT_OK && i < std::size(kValueFlags); ++i) {
    if (!values[i].empty()) s = apply(kValueFlags[i].key, values[i]);
  }
  for (std::size_t i = 0; s == LIFT_OK && i < std::size(kToggles); ++i) {
    if (toggle_opts[i]->count() > 0) s = apply(kToggles[i].key, kToggles[i].value);
  }
  if (s != LIFT_OK) {
    const int code = report(s);
    lift_config_free(config);
    return code;
  }
  if (dump) {
    size_t n = 0;
    lift_config_serialize(config, nullptr, 0, &n);
    std::string text(n + 1, '\0');
    lift_config_serialize(config, text.data(), text.size(), nullptr);
    std::fputs(text.c_str(), stdout);
    lift_config_free(config);
    return 0;
  }

  lift_result* result = nullptr;
  s = lift_run(command.c_str(), config, &result);
  lift_config_free(config);
  if (s != LIFT_OK) return report(s);
  for (size_t i = 0; i < lift_result_metric_count(result); ++i) {
    const char* name = nullptr;
    double value = 0.0;
    lift_result_metric(result, i, &name, &value);
    std::printf("%s = %.6g\n", name, value);
  }
  std::printf("manifest: %s\n", lift_result_manifest(result));
  lift_result_free(result);
  return 0;
}
