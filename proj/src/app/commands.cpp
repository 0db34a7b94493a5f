#include "app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <sstream>

#include "analysis/bessel.hpp"
#include "analysis/expansion.hpp"
#include "analysis/metrics.hpp"
#include "analysis/plot.hpp"
#include "analysis/spectrum.hpp"
#include "app/fitting.hpp"
#include "app/manifest.hpp"
#include "common/error.hpp"
#include "common/log.hpp"
#include "ndgrad/autograd.hpp"
#include "ndgrad/ops.hpp"
#include "ndgrad/serialize.hpp"
#include "nets/bank.hpp"
#include "nets/checkpoint.hpp"
#include "signals/audio_io.hpp"
#include "signals/degrade.hpp"
#include "signals/image_io.hpp"
#include "signals/synth.hpp"
#include "signals/volume_io.hpp"

namespace lift::app {

namespace fs = std::filesystem;
using ndgrad::Tensor;

double CommandOutput::metric(const std::string& name) const {
  for (const auto& [k, v] : metrics) {
    if (k == name) return v;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

int exit_code_for(ErrorKind kind) { return kind == ErrorKind::Config ? 2 : 3; }

std::vector<std::string> command_names() { return {"fit", "meta", "modulate", "query", "interp", "spectra", "compare"}; }

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string part;
  while (std::getline(in, part, sep)) out.push_back(part);
  return out;
}

std::size_t parse_count(const std::string& text, const std::string& what) {
  try {
    std::size_t used = 0;
    const unsigned long v = std::stoul(text, &used);
    if (used == text.size() && v > 0) return v;
  } catch (const std::exception&) {
  }
  fail(ErrorKind::Config, what + ": expected a positive integer, got '" + text + "'");
}

std::size_t task_dims(const std::string& task) {
  if (task == "image") return 2;
  if (task == "volume") return 3;
  return 1;
}

void require_file(const std::string& path, const std::string& field) {
  require(!path.empty(), ErrorKind::Config, field + " is required");
  require(fs::exists(path), ErrorKind::Config, field + ": file not found: " + path);
}

std::string fmt(double v) {
  std::ostringstream s;
  s << std::setprecision(10) << v;
  return s.str();
}

// Collects artifacts, metrics and the manifest for one command.
class Run {
 public:
  Run(const std::string& command, const RunConfig& config) : config_(config), manifest_(command, serialize_config(config)) {
    require(!config.output_dir.empty(), ErrorKind::Config, "run.output_dir is required");
    std::error_code ec;
    fs::create_directories(config.output_dir, ec);
    require(!ec && fs::is_directory(config.output_dir), ErrorKind::Io,
            "cannot create output directory " + config.output_dir);
  }

  std::string path(const std::string& relative) const { return config_.output_dir + "/" + relative; }

  void artifact(const std::string& relative) {
    manifest_.add(config_.output_dir, relative);
    out_.artifacts.push_back(relative);
  }
  void artifact_without(const std::string& relative, const std::string& column) {
    manifest_.add_csv_without(config_.output_dir, relative, column);
    out_.artifacts.push_back(relative);
  }
  void metric(const std::string& name, double value) { out_.metrics.emplace_back(name, value); }

  CommandOutput finish() {
    std::ofstream csv(path("metrics.csv"));
    require(static_cast<bool>(csv), ErrorKind::Io, "cannot write " + path("metrics.csv"));
    csv << "metric,value\n";
    for (const auto& [k, v] : out_.metrics) csv << k << ',' << fmt(v) << '\n';
    csv.close();
    artifact("metrics.csv");
    out_.manifest = path("manifest.txt");
    manifest_.write(out_.manifest);
    return out_;
  }

 private:
  const RunConfig& config_;
  Manifest manifest_;
  CommandOutput out_;
};

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot write " + path);
  return out;
}

// Writes the reconstruction in the task's natural format plus the raw tensor.
void save_reconstruction(Run& run, const RunConfig& config, const std::string& stem, const Tensor& values,
                         const signals::SignalGrid* reference = nullptr, std::uint32_t sample_rate = 16000) {
  ndgrad::save_tensor(run.path(stem + ".lft1"), values);
  run.artifact(stem + ".lft1");
  if (config.task == "image") {
    signals::save_image(run.path(stem + ".png"), values);
    run.artifact(stem + ".png");
  } else if (config.task == "audio") {
    signals::save_audio(run.path(stem + ".wav"), values, sample_rate);
    run.artifact(stem + ".wav");
  } else if (config.task == "volume") {
    signals::save_volume(run.path(stem + ".lftv"), values);
    run.artifact(stem + ".lftv");
  } else {
    auto out = open_out(run.path(stem + ".csv"));
    const std::size_t n = values.dim(0);
    out << "x,prediction" << (reference ? ",target" : "") << '\n';
    for (std::size_t i = 0; i < n; ++i) {
      const double lo = reference ? reference->lo : 0.0, hi = reference ? reference->hi : 1.0;
      out << fmt(signals::axis_coordinate(i, n, lo, hi)) << ',' << fmt(values.data()[i * values.dim(1)]);
      if (reference && reference->values.dim(0) == n) out << ',' << fmt(reference->values.data()[i * values.dim(1)]);
      out << '\n';
    }
    out.close();
    run.artifact(stem + ".csv");
  }
}

void write_loss_csv(Run& run, const std::string& name, const std::vector<FitPoint>& history) {
  auto out = open_out(run.path(name));
  out << "step,loss,train_psnr,eval_psnr\n";
  for (const auto& p : history) {
    out << p.step << ',' << fmt(p.loss) << ',' << fmt(analysis::psnr_from_mse(p.loss)) << ',' << fmt(p.eval_psnr)
        << '\n';
  }
  out.close();
  run.artifact(name);
}

void quality_metrics(Run& run, const RunConfig& config, const Tensor& recon, const Tensor& clean,
                     const std::string& prefix = "") {
  run.metric(prefix + "psnr", analysis::psnr(recon, clean));
  if (config.task == "image") run.metric(prefix + "ssim", analysis::ssim(recon, clean));
  if (config.task == "volume") run.metric(prefix + "iou", analysis::iou(recon, clean));
}

std::uint32_t audio_rate(const RunConfig& config) {
  if (config.task != "audio" || config.input.rfind("synthetic:", 0) == 0) return 16000;
  return signals::load_audio(config.input).sample_rate;
}

Tensor rows_at(const Tensor& rows, const std::vector<std::size_t>& index) {
  return ndgrad::gather_rows(rows, std::make_shared<const std::vector<std::size_t>>(index));
}

const std::vector<double> kSpectralProbes = {1.5, 2.5, 3.5, 4.5};  // cycles per unit: 3pi, 5pi, 7pi, 9pi rad

void write_trace(Run& run, const analysis::SpectralTrace& trace) {
  auto out = open_out(run.path("spectral_trace.csv"));
  trace.write_csv(out);
  out.close();
  run.artifact("spectral_trace.csv");
  analysis::heatmap(run.path("spectral_trace.png"), trace.errors, 0.0, 1.0);
  run.artifact("spectral_trace.png");
  if (!trace.errors.empty()) {
    const auto& last = trace.errors.back();
    for (std::size_t j = 0; j < trace.probes.size(); ++j) {
      std::ostringstream name;
      name << "final_error_" << std::setprecision(3) << trace.probes[j] * 2 << "pi";
      run.metric(name.str(), last[j]);
    }
  }
}

// Per-layer histogram of sine-layer outputs over the training coordinates.
void write_activation_histograms(Run& run, const nets::Inr& net, const Tensor& coords) {
  ndgrad::NoGradGuard off;
  const auto acts = net.activations(coords);
  auto out = open_out(run.path("activations.csv"));
  for (std::size_t l = 0; l < acts.size(); ++l) {
    const std::vector<double> v(acts[l].data().begin(), acts[l].data().end());
    const double lo = net.config().residual && l > 0 ? -2.0 : -1.0;
    analysis::write_histogram_csv(out, "layer" + std::to_string(l), analysis::histogram(v, 40, lo, -lo), lo, -lo,
                                  l == 0);
  }
  out.close();
  run.artifact("activations.csv");
}

// ---- fit -----------------------------------------------------------------

CommandOutput cmd_fit(const RunConfig& config) {
  const signals::SignalGrid signal = load_signal(config);
  Run run("fit", config);
  const FitOptions options{config.epochs, config.lr, config.eval_every};
  const std::uint32_t rate = audio_rate(config);

  if (config.is_lift()) {
    require(config.task != "spectral", ErrorKind::Config, "spectral tracking needs a siren or relift model");
    const auto lift_cfg = config.lift_config(signal.dims(), signal.channels());
    LiftFitResult fit = fit_lift(lift_cfg, config.seed, signal, options);
    const auto gp = partition::grid_partition(signal.shape(), lift_cfg.bank.spec);
    Tensor recon;
    {
      ndgrad::NoGradGuard off;
      recon = fit.model.decode(fit.latents, gp);
    }
    nets::save_checkpoint(run.path("model.lftc"), fit.model.to_checkpoint());
    run.artifact("model.lftc");
    meta::ModulationRecord record;
    record.id = "signal";
    {
      ndgrad::NoGradGuard off;
      record.latents = {fit.latents.global.detach(), fit.latents.mid.detach(), fit.latents.local.detach()};
      record.alpha = fit.model.generator().alpha(record.latents);
    }
    record.mse = analysis::mse(recon, signal.values);
    meta::save_modulations(run.path("latents.lftm"), {record});
    run.artifact("latents.lftm");
    write_loss_csv(run, "loss.csv", fit.history);
    save_reconstruction(run, config, "reconstruction", recon, &signal, rate);
    quality_metrics(run, config, recon, signal.values);
    return run.finish();
  }

  const nets::InrConfig inr_cfg = config.inr_config(signal.dims(), signal.channels());
  if (config.degrade == "none") {
    FitResult fit = [&] {
      if (config.task != "spectral") {
        return fit_inr(inr_cfg, config.seed, signal.coords(), signals::as_rows(signal.values), options);
      }
      SpectralFit sf = fit_spectral(inr_cfg, config.seed, signal, kSpectralProbes, config.epochs, config.lr,
                                    config.spectral_every);
      write_trace(run, sf.trace);
      return std::move(sf.fit);
    }();
    const Tensor recon = dense_query(fit.net, signal.shape(), signal.lo, signal.hi);
    nets::save_checkpoint(run.path("model.lftc"), nets::inr_checkpoint(fit.net));
    run.artifact("model.lftc");
    write_loss_csv(run, "loss.csv", fit.history);
    write_activation_histograms(run, fit.net, signal.coords());
    save_reconstruction(run, config, "reconstruction", recon, &signal, rate);
    quality_metrics(run, config, recon, signal.values);
    return run.finish();
  }

  const signals::Degraded d = signals::degrade(signal, config.degradation());
  run.metric("observations", static_cast<double>(d.train.values.dim(0)));
  const Tensor clean_rows = signals::as_rows(signal.values);
  Tensor eval_coords = signal.coords(), eval_values = clean_rows;
  if (!d.withheld.empty()) {
    eval_coords = rows_at(eval_coords, d.withheld);
    eval_values = rows_at(clean_rows, d.withheld);
  }
  FitResult fit = fit_inr(inr_cfg, config.seed, d.train.coords, d.train.values, options, eval_coords, eval_values);
  const Tensor recon = dense_query(fit.net, signal.shape(), signal.lo, signal.hi);
  nets::save_checkpoint(run.path("model.lftc"), nets::inr_checkpoint(fit.net));
  run.artifact("model.lftc");
  write_loss_csv(run, "loss.csv", fit.history);
  write_activation_histograms(run, fit.net, d.train.coords);
  save_reconstruction(run, config, "reconstruction", recon, &signal, rate);
  quality_metrics(run, config, recon, signal.values);

  const auto& kind = d.train;
  switch (config.degradation().kind) {
    case signals::Degradation::Kind::InpaintMask: {
      // Baseline: every withheld point filled with the per-channel mean of the observations.
      const std::size_t C = signal.channels(), n = kind.values.dim(0);
      std::vector<double> mean(C, 0.0);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t c = 0; c < C; ++c) mean[c] += kind.values.data()[i * C + c] / static_cast<double>(n);
      }
      std::vector<double> fill(eval_values.numel());
      for (std::size_t i = 0; i < fill.size(); ++i) fill[i] = mean[i % C];
      ndgrad::NoGradGuard off;
      run.metric("withheld_psnr", analysis::psnr(rows_at(signals::as_rows(recon), d.withheld), eval_values));
      run.metric("mean_fill_psnr", analysis::psnr(Tensor(eval_values.shape(), std::move(fill)), eval_values));
      break;
    }
    case signals::Degradation::Kind::PhotonNoise:
      run.metric("noisy_psnr", analysis::psnr(kind.values, clean_rows));
      break;
    case signals::Degradation::Kind::Downsample: {
      ndgrad::NoGradGuard off;
      const Tensor low = signals::from_rows(kind.values, kind.grid);
      const Shape target = signal.shape();
      bool multiple = true;
      for (std::size_t a = 0; a < target.size(); ++a) multiple = multiple && target[a] % kind.grid[a] == 0;
      if (multiple) run.metric("nearest_psnr", analysis::psnr(ndgrad::nearest_upsample(low, target), signal.values));
      break;
    }
  }
  return run.finish();
}

// ---- meta ----------------------------------------------------------------

struct Split {
  std::vector<meta::NamedSignal> train, test;
};

Split split_dataset(std::vector<meta::NamedSignal> all, double test_fraction) {
  const auto n_test = static_cast<std::size_t>(std::floor(test_fraction * static_cast<double>(all.size())));
  require(n_test < all.size(), ErrorKind::Config, "meta.test_fraction leaves no training signals");
  Split s;
  s.train.assign(all.begin(), all.end() - static_cast<long>(n_test));
  s.test.assign(all.end() - static_cast<long>(n_test), all.end());
  return s;
}

double mean_fit_psnr(const meta::LiftModel& model, const std::vector<meta::NamedSignal>& signals,
                     const partition::GridPartition& gp, std::size_t t_inner) {
  double total = 0.0;
  for (const auto& s : signals) {
    const Tensor target = nets::split_regions(s.values, gp);
    const auto z = meta::inner_loop(model, target, gp, t_inner, meta::InnerMode::Inference);
    ndgrad::NoGradGuard off;
    total += analysis::psnr(model.decode_regions(z, gp), target);
  }
  return total / static_cast<double>(signals.size());
}

void check_architecture(const nets::ModelHeader& expected, const nets::ModelHeader& found, const std::string& path) {
  if (!expected.same_architecture(found)) {
    fail(ErrorKind::Config, "checkpoint " + path + " does not match the configured architecture: expected " +
                                expected.fingerprint() + ", found " + found.fingerprint());
  }
}

CommandOutput cmd_meta(const RunConfig& config) {
  require(config.is_lift(), ErrorKind::Config, "meta needs run.model = lift or lift-relift");
  const Split data = split_dataset(load_dataset(config), config.test_fraction);
  const Tensor& first = data.train.front().values;
  const Shape grid(first.shape().begin(), first.shape().end() - 1);
  const auto lift_cfg = config.lift_config(grid.size(), first.shape().back());
  const auto gp = partition::grid_partition(grid, lift_cfg.bank.spec);
  const meta::MetaConfig mcfg = config.meta_config();
  mcfg.validate();

  Rng rng = Rng(config.seed).split("model");
  meta::LiftModel model(lift_cfg, rng);
  std::string resume_state;
  if (!config.checkpoint.empty()) {
    require_file(config.checkpoint, "io.checkpoint");
    const nets::Checkpoint ckpt = nets::load_checkpoint(config.checkpoint);
    check_architecture(model.header(), ckpt.header, config.checkpoint);
    model = meta::LiftModel::from_checkpoint(ckpt);
    resume_state = ckpt.state;
  }
  Run run("meta", config);
  std::vector<Tensor> targets;
  for (const auto& s : data.train) targets.push_back(s.values);
  meta::OuterTrainer trainer(model, targets, gp, mcfg);
  if (!resume_state.empty()) trainer.restore(resume_state);
  const std::size_t start = trainer.iteration();
  require(start <= config.iterations, ErrorKind::Config,
          "checkpoint is at iteration " + std::to_string(start) + ", beyond meta.iterations");
  if (start > 0) log::info("resuming meta-training at iteration " + std::to_string(start));

  auto log_out = open_out(run.path("training_log.csv"));
  meta::write_training_log(log_out, {}, true);
  auto save = [&] { nets::save_checkpoint(run.path("checkpoint.lftc"), model.to_checkpoint(trainer.state())); };
  meta::IterationStats last;
  trainer.run(config.iterations - start, [&](const meta::IterationStats& s) {
    meta::write_training_log(log_out, {s}, false);
    last = s;
    if (s.iteration % 100 == 0 || s.iteration == config.iterations) {
      log::info("iter " + std::to_string(s.iteration) + " rec " + fmt(s.rec) + " smooth " + fmt(s.smooth));
    }
    if (config.checkpoint_every && s.iteration % config.checkpoint_every == 0) save();
  });
  log_out.close();
  save();
  run.artifact("checkpoint.lftc");
  run.artifact_without("training_log.csv", "wall_ms");
  run.metric("iterations", static_cast<double>(trainer.iteration()));
  if (trainer.iteration() > start) run.metric("final_rec_loss", last.rec);
  run.metric("train_psnr", mean_fit_psnr(model, data.train, gp, config.t_inner));
  if (!data.test.empty()) run.metric("test_psnr", mean_fit_psnr(model, data.test, gp, config.t_inner));
  return run.finish();
}

// ---- modulate / query / interp ---------------------------------------------

meta::LiftModel load_lift(const RunConfig& config) {
  require_file(config.checkpoint, "io.checkpoint");
  const nets::Checkpoint ckpt = nets::load_checkpoint(config.checkpoint);
  require(ckpt.header.kind == nets::ModelKind::Lift, ErrorKind::Config,
          "checkpoint " + config.checkpoint + " holds a plain INR (" + ckpt.header.fingerprint() +
              "); this command needs a LIFT model");
  return meta::LiftModel::from_checkpoint(ckpt);
}

partition::GridPartition grid_for(const meta::LiftModel& model, const Shape& grid) {
  const auto& spec = model.config().bank.spec;
  require(grid.size() == spec.dims, ErrorKind::Config,
          "grid " + ndgrad::shape_str(grid) + " does not match the model's " + std::to_string(spec.dims) + "D partition");
  return partition::grid_partition(grid, spec);
}

void check_channels(const meta::LiftModel& model, std::size_t channels, const std::string& what) {
  require(model.config().bank.out_channels == channels, ErrorKind::Config,
          what + " has " + std::to_string(channels) + " channels but the model (" + model.header().fingerprint() +
              ") outputs " + std::to_string(model.config().bank.out_channels));
}

CommandOutput cmd_modulate(const RunConfig& config) {
  const meta::LiftModel model = load_lift(config);
  const auto signals = load_dataset(config);
  const Tensor& first = signals.front().values;
  check_channels(model, first.shape().back(), "dataset");
  const auto gp = grid_for(model, Shape(first.shape().begin(), first.shape().end() - 1));
  Run run("modulate", config);
  const auto records = meta::build_modulation_dataset(model, signals, gp, config.t_inner);
  meta::save_modulations(run.path("modulations.lftm"), records);
  run.artifact("modulations.lftm");
  auto out = open_out(run.path("modulation_metrics.csv"));
  out << "id,mse,psnr\n";
  double total = 0.0;
  for (const auto& r : records) {
    out << r.id << ',' << fmt(r.mse) << ',' << fmt(analysis::psnr_from_mse(r.mse)) << '\n';
    total += analysis::psnr_from_mse(r.mse);
  }
  out.close();
  run.artifact("modulation_metrics.csv");
  run.metric("records", static_cast<double>(records.size()));
  run.metric("mean_psnr", total / static_cast<double>(records.size()));
  return run.finish();
}

const meta::ModulationRecord& find_record(const std::vector<meta::ModulationRecord>& records, const std::string& id,
                                          const std::string& field) {
  require(!records.empty(), ErrorKind::Config, "modulation dataset is empty");
  if (id.empty()) return records.front();
  for (const auto& r : records) {
    if (r.id == id) return r;
  }
  fail(ErrorKind::Config, field + ": no record with id '" + id + "'");
}

std::vector<meta::ModulationRecord> load_records(const RunConfig& config, const meta::LiftModel& model) {
  require_file(config.modulations, "io.modulations");
  auto records = meta::load_modulations(config.modulations);
  const auto& ls = model.latent_shape();
  for (const auto& r : records) {
    if (r.latents.global.shape() != ls.global_shape() || r.latents.mid.shape() != ls.mid_shape() ||
        r.latents.local.shape() != ls.local_shape()) {
      fail(ErrorKind::Config, "record '" + r.id + "' latents " + ndgrad::shape_str(r.latents.global.shape()) + "/" +
                                  ndgrad::shape_str(r.latents.mid.shape()) + "/" +
                                  ndgrad::shape_str(r.latents.local.shape()) + " do not fit the model (" +
                                  model.header().fingerprint() + ")");
    }
  }
  return records;
}

Shape required_shape(const RunConfig& config) {
  require(!config.query_shape.empty(), ErrorKind::Config, "io.query_shape is required (e.g. 64x64)");
  return parse_shape(config.query_shape);
}

CommandOutput cmd_query(const RunConfig& config) {
  require_file(config.checkpoint, "io.checkpoint");
  const Shape shape = required_shape(config);
  const nets::Checkpoint ckpt = nets::load_checkpoint(config.checkpoint);
  Tensor values;
  if (ckpt.header.kind == nets::ModelKind::Inr) {
    const nets::Inr net = nets::inr_from_checkpoint(ckpt);
    require(shape.size() == net.config().in_dim, ErrorKind::Config,
            "io.query_shape has " + std::to_string(shape.size()) + " axes but the model (" + ckpt.header.fingerprint() +
                ") takes " + std::to_string(net.config().in_dim) + "D coordinates");
    const bool spectral = config.task == "spectral";
    values = dense_query(net, shape, spectral ? -1.0 : 0.0, 1.0);
  } else {
    const meta::LiftModel model = meta::LiftModel::from_checkpoint(ckpt);
    const auto records = load_records(config, model);
    const auto& record = find_record(records, config.record_a, "io.record_a");
    grid_for(model, shape);
    values = dense_query(model, record.latents, shape);
  }
  Run run("query", config);
  save_reconstruction(run, config, "query", values);
  run.metric("points", static_cast<double>(values.numel() / values.shape().back()));
  return run.finish();
}

CommandOutput cmd_interp(const RunConfig& config) {
  const meta::LiftModel model = load_lift(config);
  const auto records = load_records(config, model);
  const auto& a = find_record(records, config.record_a, "io.record_a");
  const auto& b = find_record(records, config.record_b.empty() ? records.back().id : config.record_b, "io.record_b");
  require(config.frames >= 1, ErrorKind::Config, "io.frames must be >= 1");
  const auto gp = grid_for(model, required_shape(config));
  Run run("interp", config);
  save_reconstruction(run, config, "endpoint_a", meta::decode_record(model, a, gp));
  save_reconstruction(run, config, "endpoint_b", meta::decode_record(model, b, gp));
  double lo = std::numeric_limits<double>::infinity(), hi = -lo;
  bool finite = true;
  for (std::size_t k = 0; k <= config.frames; ++k) {
    const double t = static_cast<double>(k) / static_cast<double>(config.frames);
    const Tensor frame = meta::interpolate_latents(model, a, b, t, gp);
    for (double v : frame.data()) {
      finite = finite && std::isfinite(v);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    std::ostringstream stem;
    stem << "frame_" << std::setw(3) << std::setfill('0') << k;
    save_reconstruction(run, config, stem.str(), frame);
  }
  run.metric("frames", static_cast<double>(config.frames + 1));
  run.metric("all_finite", finite ? 1.0 : 0.0);
  run.metric("min_value", lo);
  run.metric("max_value", hi);
  return run.finish();
}

// ---- spectra ---------------------------------------------------------------

CommandOutput cmd_spectra(const RunConfig& config) {
  Run run("spectra", config);
  Rng rng = Rng(config.seed).split("spectra");
  const auto grid = analysis::uniform_grid(-1.0, 1.0, 1024);

  auto report = open_out(run.path("bessel_report.csv"));
  report << "net,first,hidden,gamma,residual,terms,tail_bound,max_deviation\n";
  double worst = 0.0;
  for (std::size_t i = 0; i < 16; ++i) {
    const bool residual = i % 2 == 1;
    const double gamma = (i / 2) % 2 == 0 ? 1.0 : 2.0;
    const std::size_t hidden = 1 + rng.index(4);
    const std::size_t first = residual ? std::min<std::size_t>(hidden, 2) : 1 + rng.index(2);
    const nets::Inr net = analysis::toy_network(first, residual ? first : hidden, gamma, residual, rng);
    const auto expansion = analysis::bessel_expand(net);
    const double dev = analysis::expansion_vs_direct(net, expansion, grid);
    worst = std::max(worst, dev);
    report << i << ',' << first << ',' << net.config().width << ',' << gamma << ',' << residual << ','
           << expansion.freqs.size() << ',' << fmt(expansion.tail_bound) << ',' << fmt(dev) << '\n';
  }
  if (!config.checkpoint.empty()) {
    require_file(config.checkpoint, "io.checkpoint");
    const nets::Checkpoint ckpt = nets::load_checkpoint(config.checkpoint);
    require(ckpt.header.kind == nets::ModelKind::Inr, ErrorKind::Config, "spectra expands plain INR checkpoints only");
    const nets::Inr net = nets::inr_from_checkpoint(ckpt);
    const auto expansion = analysis::bessel_expand(net);
    const double dev = analysis::expansion_vs_direct(net, expansion, grid);
    worst = std::max(worst, dev);
    report << "checkpoint," << net.config().resolved_first_width() << ',' << net.config().width << ','
           << net.config().gamma << ',' << net.config().residual << ',' << expansion.freqs.size() << ','
           << fmt(expansion.tail_bound) << ',' << fmt(dev) << '\n';
  }
  report.close();
  run.artifact("bessel_report.csv");
  run.metric("max_deviation", worst);

  // First-layer output sin(gamma * omega0 * r) on a periodic grid with 3 cycles per unit.
  const std::size_t n = 256;
  auto scaling = open_out(run.path("frequency_scaling.csv"));
  scaling << "gamma,support_bins\n";
  std::vector<std::vector<std::size_t>> supports;
  for (double gamma : {1.0, 2.0, 4.0}) {
    std::vector<double> x(n);
    for (std::size_t i = 0; i < n; ++i) {
      x[i] = std::sin(gamma * 2.0 * M_PI * 3.0 * static_cast<double>(i) / static_cast<double>(n));
    }
    supports.push_back(analysis::support_bins(x));
    scaling << gamma << ',';
    for (std::size_t j = 0; j < supports.back().size(); ++j) scaling << (j ? " " : "") << supports.back()[j];
    scaling << '\n';
  }
  scaling.close();
  run.artifact("frequency_scaling.csv");
  bool doubles = supports[0].size() == supports[1].size();
  for (std::size_t j = 0; doubles && j < supports[0].size(); ++j) doubles = supports[1][j] == 2 * supports[0][j];
  run.metric("scaling_law_holds", doubles ? 1.0 : 0.0);

  const auto target = signals::spectral_target(config.spectral_samples);
  const std::vector<double> samples(target.values.data().begin(), target.values.data().end());
  const auto mags = analysis::dft_spectrum(samples);
  auto spec = open_out(run.path("target_spectrum.csv"));
  spec << "bin,cycles_per_unit,magnitude\n";
  analysis::Series series;
  const double span = target.hi - target.lo;
  for (std::size_t k = 0; k <= samples.size() / 2; ++k) {
    spec << k << ',' << fmt(static_cast<double>(k) / span) << ',' << fmt(mags[k]) << '\n';
    series.x.push_back(static_cast<double>(k) / span);
    series.y.push_back(mags[k]);
  }
  spec.close();
  run.artifact("target_spectrum.csv");
  analysis::line_plot(run.path("target_spectrum.png"), {series});
  run.artifact("target_spectrum.png");
  run.metric("parseval_gap", analysis::parseval_gap(samples));
  return run.finish();
}

// ---- compare ---------------------------------------------------------------

CommandOutput cmd_compare(const RunConfig& config) {
  require(config.degrade == "none", ErrorKind::Config, "compare fits clean signals only; set degrade.kind = none");
  require(config.task != "spectral", ErrorKind::Config, "use fit --task spectral for spectral tracking");
  const signals::SignalGrid signal = load_signal(config);
  Run run("compare", config);
  const std::vector<analysis::Rgb> palette = {{31, 119, 180}, {214, 39, 40}, {44, 160, 44}, {148, 103, 189}};
  std::vector<analysis::Series> curves;
  auto out = open_out(run.path("compare.csv"));
  out << "model,step,psnr\n";
  const std::size_t every = config.eval_every ? config.eval_every : 50;
  for (const auto& name : split(config.compare_models, ',')) {
    RunConfig c = config;
    c.model = name;
    c.validate();
    const FitOptions options{config.epochs, config.lr, 0};
    std::vector<FitPoint> history;
    if (c.is_lift()) {
      history = fit_lift(c.lift_config(signal.dims(), signal.channels()), config.seed, signal, options).history;
    } else {
      history = fit_inr(c.inr_config(signal.dims(), signal.channels()), config.seed, signal.coords(),
                        signals::as_rows(signal.values), options)
                    .history;
    }
    analysis::Series s;
    s.colour = palette[curves.size() % palette.size()];
    for (const auto& p : history) {
      if (p.step % every != 0 && p.step != config.epochs) continue;
      const double psnr = analysis::psnr_from_mse(p.loss);
      out << name << ',' << p.step << ',' << fmt(psnr) << '\n';
      s.x.push_back(static_cast<double>(p.step));
      s.y.push_back(psnr);
    }
    run.metric("final_psnr_" + name, s.y.back());
    curves.push_back(std::move(s));
  }
  out.close();
  run.artifact("compare.csv");
  analysis::line_plot(run.path("compare.png"), curves);
  run.artifact("compare.png");
  return run.finish();
}

}  // namespace

// ---- inputs ----------------------------------------------------------------

signals::SignalGrid load_signal(const RunConfig& config) {
  const std::string& input = config.input;
  if (input.rfind("synthetic:", 0) == 0 || (input.empty() && config.task == "spectral")) {
    const auto parts = split(input.empty() ? "synthetic:spectral" : input, ':');
    const std::string kind = parts.size() > 1 ? parts[1] : "";
    const auto arg = [&](std::size_t fallback) { return parts.size() > 2 ? parse_count(parts[2], "run.input") : fallback; };
    signals::SignalGrid s;
    if (kind == "test") {
      s = signals::test_image(arg(64));
    } else if (kind == "blob") {
      Rng rng = Rng(config.seed).split("blob");
      s = signals::blob_image(arg(16), rng);
    } else if (kind == "spectral") {
      s = signals::spectral_target(arg(config.spectral_samples));
    } else if (kind == "sphere") {
      s = signals::sphere_volume(arg(32), {0.5, 0.5, 0.5}, 0.3);
    } else {
      fail(ErrorKind::Config, "run.input: unknown synthetic signal '" + input + "'");
    }
    require(s.dims() == task_dims(config.task), ErrorKind::Config,
            "run.input '" + input + "' is " + std::to_string(s.dims()) + "D but task " + config.task + " needs " +
                std::to_string(task_dims(config.task)) + "D");
    return s;
  }
  require_file(input, "run.input");
  if (config.task == "image") return signals::load_image(input);
  if (config.task == "audio") return signals::load_audio(input).signal;
  if (config.task == "volume") return signals::load_volume(input);
  fail(ErrorKind::Config, "task spectral takes synthetic:spectral[:n] as input");
}

std::vector<meta::NamedSignal> load_dataset(const RunConfig& config) {
  std::vector<meta::NamedSignal> out;
  const std::string& input = config.input;
  if (input.rfind("synthetic:", 0) == 0) {
    const auto parts = split(input, ':');
    require(parts.size() == 4 && parts[1] == "blobs", ErrorKind::Config,
            "run.input: synthetic datasets are written synthetic:blobs:<count>:<size>, got '" + input + "'");
    const std::size_t count = parse_count(parts[2], "run.input"), size = parse_count(parts[3], "run.input");
    Rng rng = Rng(config.seed).split("blobs");
    for (std::size_t i = 0; i < count; ++i) {
      std::ostringstream id;
      id << "blob_" << std::setw(4) << std::setfill('0') << i;
      out.push_back({id.str(), signals::blob_image(size, rng).values});
    }
  } else {
    require(!input.empty(), ErrorKind::Config, "run.input is required (dataset directory)");
    require(fs::is_directory(input), ErrorKind::Config, "run.input: dataset directory not found: " + input);
    std::vector<fs::path> files;
    for (const auto& e : fs::directory_iterator(input)) {
      if (!e.is_regular_file()) continue;
      const auto ext = e.path().extension().string();
      const bool wanted = config.task == "image"    ? (ext == ".png" || ext == ".ppm" || ext == ".pgm")
                          : config.task == "audio"  ? ext == ".wav"
                          : config.task == "volume" ? ext == ".lftv"
                                                    : false;
      if (wanted) files.push_back(e.path());
    }
    std::sort(files.begin(), files.end());
    for (const auto& f : files) {
      RunConfig c = config;
      c.input = f.string();
      out.push_back({f.stem().string(), load_signal(c).values});
    }
  }
  require(!out.empty(), ErrorKind::Config, "dataset " + input + " holds no " + config.task + " signals");
  std::map<std::string, std::vector<std::string>> by_shape;
  for (const auto& s : out) by_shape[ndgrad::shape_str(s.values.shape())].push_back(s.id);
  if (by_shape.size() > 1) {
    const std::string reference = ndgrad::shape_str(out.front().values.shape());
    std::string offenders;
    for (const auto& [shape, ids] : by_shape) {
      if (shape == reference) continue;
      for (const auto& id : ids) offenders += (offenders.empty() ? "" : ", ") + id + " " + shape;
    }
    fail(ErrorKind::Config, "dataset signals must share one shape (" + reference + " first); offenders: " + offenders);
  }
  return out;
}

CommandOutput run_command(const std::string& command, const RunConfig& config) {
  config.validate();
  if (command == "fit") return cmd_fit(config);
  if (command == "meta") return cmd_meta(config);
  if (command == "modulate") return cmd_modulate(config);
  if (command == "query") return cmd_query(config);
  if (command == "interp") return cmd_interp(config);
  if (command == "spectra") return cmd_spectra(config);
  if (command == "compare") return cmd_compare(config);
  fail(ErrorKind::Config, "unknown command '" + command + "'");
}

}  // namespace lift::app
