#include "app/config.hpp"

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

#include "common/error.hpp"

namespace lift::app {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

// Shortest text that parses back to the same double.
std::string format_double(double v) {
  char buf[32];
  const auto [end, ec] = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general);
  return std::string(buf, end);
}

template <typename T>
T parse_unsigned(const std::string& key, const std::string& text) {
  T value{};
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) fail(ErrorKind::Config, key + ": expected a non-negative integer, got '" + text + "'");
  return value;
}

double parse_double(const std::string& key, const std::string& text) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used == 0 || used != text.size()) fail(ErrorKind::Config, key + ": expected a number, got '" + text + "'");
  return v;
}

bool parse_bool(const std::string& key, const std::string& text) {
  if (text == "true" || text == "1" || text == "yes" || text == "on") return true;
  if (text == "false" || text == "0" || text == "no" || text == "off") return false;
  fail(ErrorKind::Config, key + ": expected true/false, got '" + text + "'");
}

struct Field {
  std::function<void(RunConfig&, const std::string&, const std::string&)> set;
  std::function<std::string(const RunConfig&)> get;
};

template <typename T>
Field field(T RunConfig::*member) {
  Field f;
  f.set = [member](RunConfig& c, const std::string& key, const std::string& text) {
    if constexpr (std::is_same_v<T, std::string>) {
      c.*member = text;
    } else if constexpr (std::is_same_v<T, bool>) {
      c.*member = parse_bool(key, text);
    } else if constexpr (std::is_same_v<T, double>) {
      c.*member = parse_double(key, text);
    } else {
      c.*member = parse_unsigned<T>(key, text);
    }
  };
  f.get = [member](const RunConfig& c) -> std::string {
    if constexpr (std::is_same_v<T, std::string>) {
      return c.*member;
    } else if constexpr (std::is_same_v<T, bool>) {
      return c.*member ? "true" : "false";
    } else if constexpr (std::is_same_v<T, double>) {
      return format_double(c.*member);
    } else {
      return std::to_string(c.*member);
    }
  };
  return f;
}

// Ordered registry; the order is the serialization order.
const std::vector<std::pair<std::string, Field>>& registry() {
  static const std::vector<std::pair<std::string, Field>> fields = {
      {"run.task", field(&RunConfig::task)},
      {"run.model", field(&RunConfig::model)},
      {"run.input", field(&RunConfig::input)},
      {"run.output_dir", field(&RunConfig::output_dir)},
      {"run.seed", field(&RunConfig::seed)},
      {"run.threads", field(&RunConfig::threads)},
      {"arch.depth", field(&RunConfig::depth)},
      {"arch.width", field(&RunConfig::width)},
      {"arch.omega0", field(&RunConfig::omega0)},
      {"arch.hidden_omega", field(&RunConfig::hidden_omega)},
      {"arch.gamma", field(&RunConfig::gamma)},
      {"arch.residual", field(&RunConfig::residual)},
      {"partition.regions", field(&RunConfig::regions)},
      {"latents.global_dim", field(&RunConfig::global_dim)},
      {"latents.mid_side", field(&RunConfig::mid_side)},
      {"latents.mid_dim", field(&RunConfig::mid_dim)},
      {"latents.local_side", field(&RunConfig::local_side)},
      {"latents.local_dim", field(&RunConfig::local_dim)},
      {"latents.mid_out", field(&RunConfig::mid_out)},
      {"latents.alpha_dim", field(&RunConfig::alpha_dim)},
      {"latents.hlg", field(&RunConfig::hlg)},
      {"latents.linear_bias", field(&RunConfig::linear_bias)},
      {"meta.t_inner", field(&RunConfig::t_inner)},
      {"meta.inner_lr", field(&RunConfig::inner_lr)},
      {"meta.outer_lr", field(&RunConfig::outer_lr)},
      {"meta.meta_sgd", field(&RunConfig::meta_sgd)},
      {"meta.k_neighbors", field(&RunConfig::k_neighbors)},
      {"meta.lambda", field(&RunConfig::lambda)},
      {"meta.batch_size", field(&RunConfig::batch_size)},
      {"meta.iterations", field(&RunConfig::iterations)},
      {"meta.first_order", field(&RunConfig::first_order)},
      {"meta.checkpoint_every", field(&RunConfig::checkpoint_every)},
      {"meta.test_fraction", field(&RunConfig::test_fraction)},
      {"train.epochs", field(&RunConfig::epochs)},
      {"train.lr", field(&RunConfig::lr)},
      {"train.eval_every", field(&RunConfig::eval_every)},
      {"degrade.kind", field(&RunConfig::degrade)},
      {"degrade.fraction", field(&RunConfig::fraction)},
      {"degrade.factor", field(&RunConfig::factor)},
      {"degrade.tau", field(&RunConfig::tau)},
      {"degrade.readout", field(&RunConfig::readout)},
      {"degrade.seed", field(&RunConfig::degrade_seed)},
      {"io.checkpoint", field(&RunConfig::checkpoint)},
      {"io.modulations", field(&RunConfig::modulations)},
      {"io.record_a", field(&RunConfig::record_a)},
      {"io.record_b", field(&RunConfig::record_b)},
      {"io.frames", field(&RunConfig::frames)},
      {"io.query_shape", field(&RunConfig::query_shape)},
      {"io.compare_models", field(&RunConfig::compare_models)},
      {"io.spectral_samples", field(&RunConfig::spectral_samples)},
      {"io.spectral_every", field(&RunConfig::spectral_every)},
  };
  return fields;
}

const Field& lookup(const std::string& key) {
  for (const auto& [name, f] : registry()) {
    if (name == key) return f;
  }
  fail(ErrorKind::Config, "unknown config field '" + key + "'");
}

bool one_of(const std::string& v, std::initializer_list<const char*> options) {
  for (const char* o : options) {
    if (v == o) return true;
  }
  return false;
}

}  // namespace

void RunConfig::set(const std::string& key, const std::string& value) { lookup(key).set(*this, key, value); }

std::string RunConfig::get(const std::string& key) const { return lookup(key).get(*this); }

std::vector<std::string> RunConfig::keys() {
  std::vector<std::string> out;
  for (const auto& [name, f] : registry()) out.push_back(name);
  return out;
}

void RunConfig::validate() const {
  require(one_of(task, {"image", "audio", "volume", "spectral"}), ErrorKind::Config,
          "run.task must be image, audio, volume or spectral, got '" + task + "'");
  require(one_of(model, {"siren", "relift", "lift", "lift-relift"}), ErrorKind::Config,
          "run.model must be siren, relift, lift or lift-relift, got '" + model + "'");
  require(one_of(degrade, {"none", "inpaint", "downsample", "photon"}), ErrorKind::Config,
          "degrade.kind must be none, inpaint, downsample or photon, got '" + degrade + "'");
  require(threads >= 1, ErrorKind::Config, "run.threads must be >= 1");
  require(depth >= 1 && width >= 1, ErrorKind::Config, "arch.depth and arch.width must be >= 1");
  require(omega0 > 0 && hidden_omega > 0, ErrorKind::Config, "arch.omega0 and arch.hidden_omega must be > 0");
  require(gamma >= 1, ErrorKind::Config, "arch.gamma must be >= 1");
  require(regions >= 1, ErrorKind::Config, "partition.regions must be >= 1");
  require(lr > 0, ErrorKind::Config, "train.lr must be > 0");
  require(test_fraction >= 0 && test_fraction < 1, ErrorKind::Config, "meta.test_fraction must lie in [0, 1)");
  if (degrade != "none") {
    degradation().validate();
    require(!is_lift(), ErrorKind::Config, "degradations are supported for siren and relift models only");
  }
  if (!query_shape.empty()) parse_shape(query_shape);
}

nets::InrConfig RunConfig::inr_config(std::size_t in_dim, std::size_t out_dim) const {
  nets::InrConfig c;
  c.in_dim = in_dim;
  c.out_dim = out_dim;
  c.depth = depth;
  c.width = width;
  c.omega0 = omega0;
  c.hidden_omega = hidden_omega;
  c.gamma = model == "siren" ? 1.0 : gamma;
  c.residual = model == "relift" ? true : residual;
  if (model == "siren") c.residual = false;
  return c;
}

meta::LiftConfig RunConfig::lift_config(std::size_t dims, std::size_t out_channels) const {
  meta::LiftConfig c;
  c.bank.spec = partition::PartitionSpec::make(dims, regions);
  c.bank.depth = depth;
  c.bank.width = width;
  c.bank.out_channels = out_channels;
  c.bank.omega0 = omega0;
  c.bank.gamma = model == "lift-relift" ? gamma : 1.0;
  c.bank.residual = model == "lift-relift";
  c.hlg.latents = {dims, global_dim, mid_side, mid_dim, local_side, local_dim};
  c.hlg.mid_out = mid_out;
  c.hlg.alpha_dim = alpha_dim;
  c.hlg.bias = linear_bias;
  c.hlg.use_hlg = hlg;
  c.meta_sgd = meta_sgd;
  c.inner_lr = inner_lr;
  return c;
}

meta::MetaConfig RunConfig::meta_config() const {
  meta::MetaConfig m;
  m.t_inner = t_inner;
  m.inner_lr = inner_lr;
  m.outer_lr = outer_lr;
  m.meta_sgd = meta_sgd;
  m.k_neighbors = k_neighbors;
  m.lambda = lambda;
  m.batch_size = batch_size;
  m.iterations = iterations;
  m.seed = seed;
  m.first_order = first_order;
  m.threads = threads;
  return m;
}

signals::Degradation RunConfig::degradation() const {
  if (degrade == "inpaint") return signals::Degradation::inpaint(fraction, degrade_seed);
  if (degrade == "downsample") return signals::Degradation::downsample(factor);
  if (degrade == "photon") return signals::Degradation::photon(tau, readout, degrade_seed);
  fail(ErrorKind::Config, "no degradation configured");
}

RunConfig parse_config(const std::string& text, const std::string& origin) {
  RunConfig config;
  std::istringstream in(text);
  std::string line, section;
  std::size_t number = 0;
  while (std::getline(in, line)) {
    ++number;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const std::string where = origin + ":" + std::to_string(number);
    if (line.front() == '[') {
      if (line.back() != ']') fail(ErrorKind::Config, where + ": malformed section header '" + line + "'");
      section = trim(line.substr(1, line.size() - 2));
      continue;
    }
    const auto eq = line.find('=');
    if (eq == std::string::npos) fail(ErrorKind::Config, where + ": expected key = value, got '" + line + "'");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) fail(ErrorKind::Config, where + ": field '" + key + "' appears before any [section]");
    try {
      config.set(section + "." + key, value);
    } catch (const Error& e) {
      fail(ErrorKind::Config, where + ": " + e.message());
    }
  }
  return config;
}

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(ErrorKind::Config, "cannot open config file " + path);
  std::ostringstream s;
  s << in.rdbuf();
  return parse_config(s.str(), path);
}

std::string serialize_config(const RunConfig& config) {
  std::ostringstream out;
  std::string section;
  for (const auto& [name, f] : registry()) {
    const auto dot = name.find('.');
    const std::string sec = name.substr(0, dot);
    if (sec != section) {
      if (!section.empty()) out << '\n';
      out << '[' << sec << "]\n";
      section = sec;
    }
    out << name.substr(dot + 1) << " = " << f.get(config) << '\n';
  }
  return out.str();
}

Shape parse_shape(const std::string& text) {
  Shape shape;
  std::size_t start = 0;
  while (start <= text.size()) {
    const auto x = text.find('x', start);
    const std::string part = text.substr(start, x == std::string::npos ? std::string::npos : x - start);
    const auto v = parse_unsigned<std::size_t>("shape '" + text + "'", part);
    require(v >= 1, ErrorKind::Config, "shape '" + text + "' has a zero extent");
    shape.push_back(v);
    if (x == std::string::npos) break;
    start = x + 1;
  }
  require(!shape.empty() && shape.size() <= 3, ErrorKind::Config, "shape '" + text + "' must have 1 to 3 extents");
  return shape;
}

}  // namespace lift::app
