#include "lift/lift.h"

#include <cstring>
#include <filesystem>
#include <memory>
#include <new>
#include <string>

#include "analysis/bessel.hpp"
#include "analysis/metrics.hpp"
#include "app/commands.hpp"
#include "app/config.hpp"
#include "app/manifest.hpp"
#include "common/error.hpp"
#include "common/log.hpp"
#include "meta/lift_model.hpp"
#include "meta/records.hpp"
#include "ndgrad/autograd.hpp"
#include "ndgrad/serialize.hpp"
#include "nets/checkpoint.hpp"
#include "partition/partition.hpp"
#include "signals/audio_io.hpp"
#include "signals/image_io.hpp"
#include "signals/volume_io.hpp"

using lift::ErrorKind;
using lift::ndgrad::Tensor;

struct lift_config {
  lift::app::RunConfig value;
};

struct lift_result {
  lift::app::CommandOutput value;
};

struct lift_tensor {
  Tensor value;
};

struct lift_model {
  lift::nets::Checkpoint checkpoint;
  lift::nets::Inr inr;
  std::unique_ptr<lift::meta::LiftModel> lift;
  std::string fingerprint;
};

struct lift_records {
  std::vector<lift::meta::ModulationRecord> value;
};

namespace {

thread_local std::string last_error;

lift_status status_for(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Dimension: return LIFT_ERR_DIMENSION;
    case ErrorKind::Rank: return LIFT_ERR_RANK;
    case ErrorKind::Index: return LIFT_ERR_INDEX;
    case ErrorKind::Domain: return LIFT_ERR_DOMAIN;
    case ErrorKind::Consistency: return LIFT_ERR_CONSISTENCY;
    case ErrorKind::Config: return LIFT_ERR_CONFIG;
    case ErrorKind::Unsupported: return LIFT_ERR_UNSUPPORTED;
    case ErrorKind::Assembly: return LIFT_ERR_ASSEMBLY;
    case ErrorKind::Parse: return LIFT_ERR_PARSE;
    case ErrorKind::Io: return LIFT_ERR_IO;
    case ErrorKind::Numeric: return LIFT_ERR_NUMERIC;
  }
  return LIFT_ERR_INTERNAL;
}

template <typename F>
lift_status guarded(F&& body) {
  try {
    body();
    return LIFT_OK;
  } catch (const lift::Error& e) {
    last_error = e.what();
    return status_for(e.kind());
  } catch (const std::bad_alloc&) {
    last_error = "out of memory";
    return LIFT_ERR_INTERNAL;
  } catch (const std::exception& e) {
    last_error = e.what();
    return LIFT_ERR_INTERNAL;
  } catch (...) {
    last_error = "unknown failure";
    return LIFT_ERR_INTERNAL;
  }
}

void need(const void* p, const char* what) {
  if (!p) lift::fail(ErrorKind::Config, std::string("null argument: ") + what);
}

lift_status argument_error(const char* what) {
  last_error = std::string("null argument: ") + what;
  return LIFT_ERR_ARGUMENT;
}

lift_status copy_out(const std::string& s, char* buffer, size_t capacity, size_t* needed) {
  if (needed) *needed = s.size();
  if (buffer && capacity > 0) {
    const size_t n = std::min(capacity - 1, s.size());
    std::memcpy(buffer, s.data(), n);
    buffer[n] = '\0';
  }
  return LIFT_OK;
}

lift::ndgrad::Shape shape_from(const size_t* dims, size_t rank) {
  lift::require(dims && rank > 0, ErrorKind::Config, "grid extents are missing");
  return lift::ndgrad::Shape(dims, dims + rank);
}

}  // namespace

extern "C" {

const char* lift_version(void) { return "0.1.0"; }

const char* lift_last_error(void) { return last_error.c_str(); }

const char* lift_status_name(lift_status status) {
  switch (status) {
    case LIFT_OK: return "ok";
    case LIFT_ERR_DIMENSION: return "dimension error";
    case LIFT_ERR_RANK: return "rank error";
    case LIFT_ERR_INDEX: return "index error";
    case LIFT_ERR_DOMAIN: return "domain error";
    case LIFT_ERR_CONSISTENCY: return "consistency error";
    case LIFT_ERR_CONFIG: return "configuration error";
    case LIFT_ERR_UNSUPPORTED: return "unsupported";
    case LIFT_ERR_ASSEMBLY: return "assembly error";
    case LIFT_ERR_PARSE: return "parse error";
    case LIFT_ERR_IO: return "i/o error";
    case LIFT_ERR_NUMERIC: return "numeric failure";
    case LIFT_ERR_ARGUMENT: return "invalid argument";
    case LIFT_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

int lift_exit_code(lift_status status) {
  if (status == LIFT_OK) return 0;
  if (status == LIFT_ERR_CONFIG || status == LIFT_ERR_ARGUMENT) return 2;
  return 3;
}

lift_status lift_set_log_level(const char* level) {
  if (!level) return argument_error("level");
  return guarded([&] {
    const std::string l = level;
    if (l == "quiet") lift::log::set_level(lift::log::Level::Quiet);
    else if (l == "info") lift::log::set_level(lift::log::Level::Info);
    else if (l == "debug") lift::log::set_level(lift::log::Level::Debug);
    else lift::fail(ErrorKind::Config, "log level must be quiet, info or debug, got '" + l + "'");
  });
}

lift_status lift_config_new(lift_config** out) {
  if (!out) return argument_error("out");
  return guarded([&] { *out = new lift_config{}; });
}

lift_status lift_config_parse(const char* text, lift_config** out) {
  if (!text || !out) return argument_error("text/out");
  return guarded([&] { *out = new lift_config{lift::app::parse_config(text)}; });
}

lift_status lift_config_load(const char* path, lift_config** out) {
  if (!path || !out) return argument_error("path/out");
  return guarded([&] { *out = new lift_config{lift::app::load_config(path)}; });
}

void lift_config_free(lift_config* config) { delete config; }

lift_status lift_config_set(lift_config* config, const char* key, const char* value) {
  if (!config || !key || !value) return argument_error("config/key/value");
  return guarded([&] { config->value.set(key, value); });
}

lift_status lift_config_get(const lift_config* config, const char* key, char* buffer, size_t capacity,
                            size_t* needed) {
  if (!config || !key) return argument_error("config/key");
  std::string v;
  const lift_status s = guarded([&] { v = config->value.get(key); });
  return s == LIFT_OK ? copy_out(v, buffer, capacity, needed) : s;
}

lift_status lift_config_serialize(const lift_config* config, char* buffer, size_t capacity, size_t* needed) {
  if (!config) return argument_error("config");
  std::string v;
  const lift_status s = guarded([&] { v = lift::app::serialize_config(config->value); });
  return s == LIFT_OK ? copy_out(v, buffer, capacity, needed) : s;
}

lift_status lift_config_validate(const lift_config* config) {
  if (!config) return argument_error("config");
  return guarded([&] { config->value.validate(); });
}

int lift_config_equal(const lift_config* a, const lift_config* b) {
  return a && b && a->value == b->value ? 1 : 0;
}

size_t lift_config_key_count(void) { return lift::app::RunConfig::keys().size(); }

const char* lift_config_key(size_t index) {
  static const std::vector<std::string> keys = lift::app::RunConfig::keys();
  return index < keys.size() ? keys[index].c_str() : nullptr;
}

lift_status lift_run(const char* command, const lift_config* config, lift_result** out) {
  if (!command || !config) return argument_error("command/config");
  return guarded([&] {
    auto result = std::make_unique<lift_result>();
    result->value = lift::app::run_command(command, config->value);
    if (out) *out = result.release();
  });
}

void lift_result_free(lift_result* result) { delete result; }

size_t lift_result_artifact_count(const lift_result* result) { return result ? result->value.artifacts.size() : 0; }

const char* lift_result_artifact(const lift_result* result, size_t index) {
  if (!result || index >= result->value.artifacts.size()) return nullptr;
  return result->value.artifacts[index].c_str();
}

const char* lift_result_manifest(const lift_result* result) { return result ? result->value.manifest.c_str() : nullptr; }

size_t lift_result_metric_count(const lift_result* result) { return result ? result->value.metrics.size() : 0; }

lift_status lift_result_metric(const lift_result* result, size_t index, const char** name, double* value) {
  if (!result) return argument_error("result");
  if (index >= result->value.metrics.size()) {
    last_error = "metric index " + std::to_string(index) + " out of range";
    return LIFT_ERR_INDEX;
  }
  if (name) *name = result->value.metrics[index].first.c_str();
  if (value) *value = result->value.metrics[index].second;
  return LIFT_OK;
}

lift_status lift_result_metric_named(const lift_result* result, const char* name, double* value) {
  if (!result || !name || !value) return argument_error("result/name/value");
  for (const auto& [k, v] : result->value.metrics) {
    if (k == name) {
      *value = v;
      return LIFT_OK;
    }
  }
  last_error = std::string("no metric named '") + name + "'";
  return LIFT_ERR_INDEX;
}

lift_status lift_tensor_load(const char* path, lift_tensor** out) {
  if (!path || !out) return argument_error("path/out");
  return guarded([&] { *out = new lift_tensor{lift::ndgrad::load_tensor(path)}; });
}

lift_status lift_tensor_create(const size_t* shape, size_t rank, const double* data, lift_tensor** out) {
  if (!out || (rank > 0 && !shape)) return argument_error("shape/out");
  return guarded([&] {
    lift::ndgrad::Shape s(shape, shape + rank);
    const size_t n = lift::ndgrad::numel_of(s);
    if (n > 0) need(data, "data");
    *out = new lift_tensor{Tensor(s, std::vector<double>(data, data + n))};
  });
}

lift_status lift_tensor_save(const lift_tensor* tensor, const char* path) {
  if (!tensor || !path) return argument_error("tensor/path");
  return guarded([&] { lift::ndgrad::save_tensor(path, tensor->value); });
}

void lift_tensor_free(lift_tensor* tensor) { delete tensor; }

size_t lift_tensor_rank(const lift_tensor* tensor) { return tensor ? tensor->value.rank() : 0; }

size_t lift_tensor_dim(const lift_tensor* tensor, size_t axis) {
  return tensor && axis < tensor->value.rank() ? tensor->value.dim(axis) : 0;
}

size_t lift_tensor_numel(const lift_tensor* tensor) { return tensor ? tensor->value.numel() : 0; }

const double* lift_tensor_data(const lift_tensor* tensor) { return tensor ? tensor->value.data().data() : nullptr; }

lift_status lift_signal_load(const char* path, lift_tensor** out) {
  if (!path || !out) return argument_error("path/out");
  return guarded([&] {
    const std::string ext = std::filesystem::path(path).extension().string();
    if (ext == ".wav") *out = new lift_tensor{lift::signals::load_audio(path).signal.values};
    else if (ext == ".lftv") *out = new lift_tensor{lift::signals::load_volume(path).values};
    else *out = new lift_tensor{lift::signals::load_image(path).values};
  });
}

lift_status lift_image_save(const lift_tensor* values, const char* path) {
  if (!values || !path) return argument_error("values/path");
  return guarded([&] { lift::signals::save_image(path, values->value); });
}

lift_status lift_model_load(const char* path, lift_model** out) {
  if (!path || !out) return argument_error("path/out");
  return guarded([&] {
    auto m = std::make_unique<lift_model>();
    m->checkpoint = lift::nets::load_checkpoint(path);
    m->fingerprint = m->checkpoint.header.fingerprint();
    if (m->checkpoint.header.kind == lift::nets::ModelKind::Lift) {
      m->lift = std::make_unique<lift::meta::LiftModel>(lift::meta::LiftModel::from_checkpoint(m->checkpoint));
    } else {
      m->inr = lift::nets::inr_from_checkpoint(m->checkpoint);
    }
    *out = m.release();
  });
}

void lift_model_free(lift_model* model) { delete model; }

int lift_model_is_lift(const lift_model* model) { return model && model->lift ? 1 : 0; }

const char* lift_model_fingerprint(const lift_model* model) { return model ? model->fingerprint.c_str() : nullptr; }

lift_status lift_model_evaluate(const lift_model* model, const lift_tensor* coords, lift_tensor** out) {
  if (!model || !coords || !out) return argument_error("model/coords/out");
  return guarded([&] {
    lift::require(!model->lift, ErrorKind::Unsupported, "LIFT models decode through modulation records");
    const auto& c = coords->value;
    lift::require(c.rank() == 2 && c.dim(1) == model->inr.config().in_dim, ErrorKind::Dimension,
                  "coords must be [n, " + std::to_string(model->inr.config().in_dim) + "], got " +
                      lift::ndgrad::shape_str(c.shape()));
    lift::ndgrad::NoGradGuard off;
    *out = new lift_tensor{model->inr.forward(c)};
  });
}

lift_status lift_records_load(const char* path, lift_records** out) {
  if (!path || !out) return argument_error("path/out");
  return guarded([&] { *out = new lift_records{lift::meta::load_modulations(path)}; });
}

void lift_records_free(lift_records* records) { delete records; }

size_t lift_records_count(const lift_records* records) { return records ? records->value.size() : 0; }

const char* lift_records_id(const lift_records* records, size_t index) {
  return records && index < records->value.size() ? records->value[index].id.c_str() : nullptr;
}

double lift_records_mse(const lift_records* records, size_t index) {
  return records && index < records->value.size() ? records->value[index].mse : -1.0;
}

lift_status lift_records_decode(const lift_model* model, const lift_records* records, size_t index,
                                const size_t* grid, size_t rank, lift_tensor** out) {
  if (!model || !records || !out) return argument_error("model/records/out");
  return guarded([&] {
    lift::require(model->lift != nullptr, ErrorKind::Unsupported, "model is a plain INR");
    lift::require(index < records->value.size(), ErrorKind::Index, "record index out of range");
    const auto gp = lift::partition::grid_partition(shape_from(grid, rank), model->lift->config().bank.spec);
    *out = new lift_tensor{lift::meta::decode_record(*model->lift, records->value[index], gp)};
  });
}

lift_status lift_records_interpolate(const lift_model* model, const lift_records* records, size_t a, size_t b,
                                     double t, const size_t* grid, size_t rank, lift_tensor** out) {
  if (!model || !records || !out) return argument_error("model/records/out");
  return guarded([&] {
    lift::require(model->lift != nullptr, ErrorKind::Unsupported, "model is a plain INR");
    lift::require(a < records->value.size() && b < records->value.size(), ErrorKind::Index,
                  "record index out of range");
    const auto gp = lift::partition::grid_partition(shape_from(grid, rank), model->lift->config().bank.spec);
    *out = new lift_tensor{
        lift::meta::interpolate_latents(*model->lift, records->value[a], records->value[b], t, gp)};
  });
}

lift_status lift_psnr(const lift_tensor* prediction, const lift_tensor* target, double* out) {
  if (!prediction || !target || !out) return argument_error("prediction/target/out");
  return guarded([&] { *out = lift::analysis::psnr(prediction->value, target->value); });
}

lift_status lift_ssim(const lift_tensor* prediction, const lift_tensor* target, double* out) {
  if (!prediction || !target || !out) return argument_error("prediction/target/out");
  return guarded([&] { *out = lift::analysis::ssim(prediction->value, target->value); });
}

lift_status lift_bessel_j(int order, double x, double* out) {
  if (!out) return argument_error("out");
  return guarded([&] { *out = lift::analysis::bessel_j(order, x); });
}

lift_status lift_sha256_file(const char* path, char* hex_out) {
  if (!path || !hex_out) return argument_error("path/hex_out");
  return guarded([&] {
    const std::string h = lift::app::sha256_file(path);
    std::memcpy(hex_out, h.c_str(), h.size() + 1);
  });
}

}  // extern "C"
