#include "nets/checkpoint.hpp"

#include <fstream>
#include <sstream>

#include "common/binio.hpp"
#include "common/error.hpp"
#include "ndgrad/serialize.hpp"

namespace lift::nets {

std::string ModelHeader::fingerprint() const {
  std::ostringstream s;
  s.precision(17);
  if (kind == ModelKind::Inr) {
    s << (residual ? "relift" : "siren") << " in=" << in_dim << " out=" << out_dim << " depth=" << depth
      << " width=" << width << " first_width=" << mid_out << " omega0=" << omega0 << " hidden_omega=" << hidden_omega << " gamma=" << gamma;
  } else {
    s << "lift D=" << dims << " M=" << per_dim << " out=" << out_dim << " depth=" << depth << " width=" << width
      << " omega0=" << omega0 << " gamma=" << gamma << " residual=" << residual << " hlg=" << use_hlg
      << " meta_sgd=" << meta_sgd << " bias=" << linear_bias << " latents=" << global_dim << "/" << mid_side << "x"
      << mid_dim << "/" << local_side << "x" << local_dim << " mid_out=" << mid_out << " alpha=" << alpha_dim;
  }
  return s.str();
}

bool ModelHeader::same_architecture(const ModelHeader& o) const { return fingerprint() == o.fingerprint(); }

void write_checkpoint(std::ostream& out, const Checkpoint& ckpt) {
  using namespace binio;
  const ModelHeader& h = ckpt.header;
  write_magic(out, "LFTC");
  write_u32(out, kCheckpointVersion);
  write_u32(out, static_cast<std::uint32_t>(h.kind));
  for (auto v : {h.in_dim, h.out_dim, h.depth, h.width}) write_u32(out, v);
  for (auto v : {h.omega0, h.hidden_omega, h.gamma, h.inner_lr}) write_f64(out, v);
  write_u8(out, h.residual);
  write_u32(out, h.dims);
  write_u32(out, h.per_dim);
  for (bool v : {h.use_hlg, h.meta_sgd, h.linear_bias}) write_u8(out, v);
  for (auto v : {h.global_dim, h.mid_side, h.mid_dim, h.local_side, h.local_dim, h.mid_out, h.alpha_dim}) {
    write_u32(out, v);
  }
  write_u32(out, static_cast<std::uint32_t>(ckpt.tensors.size()));
  for (const auto& t : ckpt.tensors) ndgrad::write_tensor(out, t);
  write_string(out, ckpt.state);
  require(static_cast<bool>(out), ErrorKind::Io, "failed writing checkpoint");
}

Checkpoint read_checkpoint(std::istream& in) {
  using namespace binio;
  Checkpoint ckpt;
  ModelHeader& h = ckpt.header;
  expect_magic(in, "LFTC");
  const auto version = read_u32(in);
  require(version == kCheckpointVersion, ErrorKind::Parse, "unsupported checkpoint version " + std::to_string(version));
  const auto kind = read_u32(in);
  require(kind <= 1, ErrorKind::Parse, "unknown model kind " + std::to_string(kind));
  h.kind = static_cast<ModelKind>(kind);
  for (auto* v : {&h.in_dim, &h.out_dim, &h.depth, &h.width}) *v = read_u32(in);
  for (auto* v : {&h.omega0, &h.hidden_omega, &h.gamma, &h.inner_lr}) *v = read_f64(in);
  h.residual = read_u8(in) != 0;
  h.dims = read_u32(in);
  h.per_dim = read_u32(in);
  for (auto* v : {&h.use_hlg, &h.meta_sgd, &h.linear_bias}) *v = read_u8(in) != 0;
  for (auto* v : {&h.global_dim, &h.mid_side, &h.mid_dim, &h.local_side, &h.local_dim, &h.mid_out, &h.alpha_dim}) {
    *v = read_u32(in);
  }
  const auto count = read_u32(in);
  require(count < 100000, ErrorKind::Parse, "implausible tensor count " + std::to_string(count));
  for (std::uint32_t i = 0; i < count; ++i) ckpt.tensors.push_back(ndgrad::read_tensor(in));
  ckpt.state = read_string(in);
  return ckpt;
}

void save_checkpoint(const std::string& path, const Checkpoint& ckpt) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + path + " for writing");
  write_checkpoint(out, ckpt);
}

Checkpoint load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open checkpoint " + path);
  return read_checkpoint(in);
}

ModelHeader header_for(const InrConfig& c) {
  ModelHeader h;
  h.kind = ModelKind::Inr;
  h.in_dim = static_cast<std::uint32_t>(c.in_dim);
  h.out_dim = static_cast<std::uint32_t>(c.out_dim);
  h.depth = static_cast<std::uint32_t>(c.depth);
  h.width = static_cast<std::uint32_t>(c.width);
  h.mid_out = static_cast<std::uint32_t>(c.first_width);
  h.omega0 = c.omega0;
  h.hidden_omega = c.hidden_omega;
  h.gamma = c.gamma;
  h.residual = c.residual;
  return h;
}

InrConfig inr_config_from(const ModelHeader& h) {
  require(h.kind == ModelKind::Inr, ErrorKind::Consistency, "checkpoint holds a LIFT model, not a plain INR");
  return InrConfig{h.in_dim, h.out_dim, h.depth, h.width, h.mid_out, h.omega0, h.hidden_omega, h.gamma, h.residual};
}

Checkpoint inr_checkpoint(const Inr& net, std::string state) {
  return Checkpoint{header_for(net.config()), net.parameters(), std::move(state)};
}

Inr inr_from_checkpoint(const Checkpoint& ckpt) {
  Rng scratch(0);
  Inr net(inr_config_from(ckpt.header), scratch);
  net.set_parameters(ckpt.tensors);
  return net;
}

}  // namespace lift::nets
