#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "meta/meta.hpp"

namespace lift::meta {

struct ModulationRecord {
  std::string id;
  LatentHierarchy latents;
  Tensor alpha;  // compositional latent (or local projection without HLG)
  double mse = 0.0;
};

struct NamedSignal {
  std::string id;
  Tensor values;  // full grid [N..., C]
};

// Fits latents for every signal with frozen weights (inference-mode inner loop).
std::vector<ModulationRecord> build_modulation_dataset(const LiftModel& model, const std::vector<NamedSignal>& signals,
                                                       const partition::GridPartition& gp, std::size_t t_inner);

// Reconstruction of a record's latents on the partition's grid.
Tensor decode_record(const LiftModel& model, const ModulationRecord& record, const partition::GridPartition& gp);

// Decodes (1 - t) a + t b. The endpoints reuse the stored latents unchanged.
Tensor interpolate_latents(const LiftModel& model, const ModulationRecord& a, const ModulationRecord& b, double t,
                           const partition::GridPartition& gp);

// "LFTM", u32 count, then per record: u32 id length + bytes, LFT1 tensors
// (global, intermediate, local, alpha), f64 MSE.
void write_modulations(std::ostream& out, const std::vector<ModulationRecord>& records);
std::vector<ModulationRecord> read_modulations(std::istream& in);
void save_modulations(const std::string& path, const std::vector<ModulationRecord>& records);
std::vector<ModulationRecord> load_modulations(const std::string& path);

// CSV with header iter,L_Rec,L_Smooth,L_Total,wall_ms.
void write_training_log(std::ostream& out, const std::vector<IterationStats>& log, bool header = true);

}  // namespace lift::meta
