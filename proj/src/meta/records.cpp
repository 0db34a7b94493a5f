#include "meta/records.hpp"

#include <fstream>
#include <iomanip>

#include "common/binio.hpp"
#include "common/error.hpp"
#include "ndgrad/ops.hpp"
#include "ndgrad/serialize.hpp"

namespace lift::meta {

using namespace ndgrad;

std::vector<ModulationRecord> build_modulation_dataset(const LiftModel& model, const std::vector<NamedSignal>& signals,
                                                       const partition::GridPartition& gp, std::size_t t_inner) {
  std::vector<ModulationRecord> records;
  records.reserve(signals.size());
  for (const auto& s : signals) {
    const Tensor target = nets::split_regions(s.values, gp);
    ModulationRecord r;
    r.id = s.id;
    r.latents = inner_loop(model, target, gp, t_inner, InnerMode::Inference);
    NoGradGuard off;
    r.alpha = model.generator().alpha(r.latents);
    r.mse = rec_loss(model.decode(r.latents, gp), s.values).item();
    records.push_back(std::move(r));
  }
  return records;
}

namespace {

void check_record(const LiftModel& model, const ModulationRecord& r) {
  const auto& ls = model.latent_shape();
  const bool ok = r.latents.global.defined() && r.latents.global.shape() == ls.global_shape() &&
                  r.latents.mid.shape() == ls.mid_shape() && r.latents.local.shape() == ls.local_shape();
  require(ok, ErrorKind::Consistency, "record '" + r.id + "' does not match the model's latent shapes");
}

}  // namespace

Tensor decode_record(const LiftModel& model, const ModulationRecord& record, const partition::GridPartition& gp) {
  check_record(model, record);
  NoGradGuard off;
  return model.decode(record.latents, gp);
}

Tensor interpolate_latents(const LiftModel& model, const ModulationRecord& a, const ModulationRecord& b, double t,
                           const partition::GridPartition& gp) {
  require(t >= 0.0 && t <= 1.0, ErrorKind::Domain, "interpolation weight must lie in [0, 1]");
  check_record(model, a);
  check_record(model, b);
  if (t == 0.0) return decode_record(model, a, gp);
  if (t == 1.0) return decode_record(model, b, gp);
  NoGradGuard off;
  auto mix = [t](const Tensor& x, const Tensor& y) { return add(scale(x, 1.0 - t), scale(y, t)); };
  LatentHierarchy z{mix(a.latents.global, b.latents.global), mix(a.latents.mid, b.latents.mid),
                    mix(a.latents.local, b.latents.local)};
  return model.decode(z, gp);
}

void write_modulations(std::ostream& out, const std::vector<ModulationRecord>& records) {
  binio::write_magic(out, "LFTM");
  binio::write_u32(out, static_cast<std::uint32_t>(records.size()));
  for (const auto& r : records) {
    binio::write_string(out, r.id);
    for (const Tensor& t : {r.latents.global, r.latents.mid, r.latents.local, r.alpha}) write_tensor(out, t);
    binio::write_f64(out, r.mse);
  }
  require(static_cast<bool>(out), ErrorKind::Io, "failed writing modulation dataset");
}

std::vector<ModulationRecord> read_modulations(std::istream& in) {
  binio::expect_magic(in, "LFTM");
  const auto count = binio::read_u32(in);
  require(count < 10000000, ErrorKind::Parse, "implausible record count " + std::to_string(count));
  std::vector<ModulationRecord> records(count);
  for (auto& r : records) {
    r.id = binio::read_string(in);
    r.latents.global = read_tensor(in);
    r.latents.mid = read_tensor(in);
    r.latents.local = read_tensor(in);
    r.alpha = read_tensor(in);
    r.mse = binio::read_f64(in);
  }
  return records;
}

void save_modulations(const std::string& path, const std::vector<ModulationRecord>& records) {
  std::ofstream out(path, std::ios::binary);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open " + path + " for writing");
  write_modulations(out, records);
}

std::vector<ModulationRecord> load_modulations(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open modulation dataset " + path);
  return read_modulations(in);
}

void write_training_log(std::ostream& out, const std::vector<IterationStats>& log, bool header) {
  if (header) out << "iter,L_Rec,L_Smooth,L_Total,wall_ms\n";
  out << std::setprecision(17);
  for (const auto& s : log) {
    out << s.iteration << ',' << s.rec << ',' << s.smooth << ',' << s.total << ',' << std::setprecision(6)
        << s.wall_ms << std::setprecision(17) << '\n';
  }
}

}  // namespace lift::meta
