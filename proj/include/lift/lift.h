#ifndef LIFT_LIFT_H
#define LIFT_LIFT_H

#include <stddef.h>
#include <stdint.h>

#if defined(LIFT_BUILDING_LIBRARY)
#define LIFT_API __attribute__((visibility("default")))
#else
#define LIFT_API
#endif

#ifdef __cplusplus
extern "C" {
#endif

/* Status codes. Every call that can fail returns one; the message of the most
   recent failure on the calling thread is available from lift_last_error(). */
typedef enum lift_status {
  LIFT_OK = 0,
  LIFT_ERR_DIMENSION = 1,
  LIFT_ERR_RANK = 2,
  LIFT_ERR_INDEX = 3,
  LIFT_ERR_DOMAIN = 4,
  LIFT_ERR_CONSISTENCY = 5,
  LIFT_ERR_CONFIG = 6,
  LIFT_ERR_UNSUPPORTED = 7,
  LIFT_ERR_ASSEMBLY = 8,
  LIFT_ERR_PARSE = 9,
  LIFT_ERR_IO = 10,
  LIFT_ERR_NUMERIC = 11,
  LIFT_ERR_ARGUMENT = 12, /* null handle or pointer */
  LIFT_ERR_INTERNAL = 13
} lift_status;

typedef struct lift_config lift_config;
typedef struct lift_result lift_result;
typedef struct lift_tensor lift_tensor;
typedef struct lift_model lift_model;
typedef struct lift_records lift_records;

LIFT_API const char* lift_version(void);
LIFT_API const char* lift_last_error(void);
LIFT_API const char* lift_status_name(lift_status status);
/* Process exit code for a status: 0 ok, 2 configuration error, 3 otherwise. */
LIFT_API int lift_exit_code(lift_status status);
/* "quiet", "info" or "debug". */
LIFT_API lift_status lift_set_log_level(const char* level);

/* ---- run configuration ---- */
LIFT_API lift_status lift_config_new(lift_config** out);
LIFT_API lift_status lift_config_parse(const char* text, lift_config** out);
LIFT_API lift_status lift_config_load(const char* path, lift_config** out);
LIFT_API void lift_config_free(lift_config* config);
/* key is "section.name", e.g. "arch.gamma". */
LIFT_API lift_status lift_config_set(lift_config* config, const char* key, const char* value);
/* String outputs: writes at most `capacity` bytes including the terminator and
   stores the full length (without terminator) in *needed when non-null. */
LIFT_API lift_status lift_config_get(const lift_config* config, const char* key, char* buffer, size_t capacity,
                                     size_t* needed);
LIFT_API lift_status lift_config_serialize(const lift_config* config, char* buffer, size_t capacity, size_t* needed);
LIFT_API lift_status lift_config_validate(const lift_config* config);
LIFT_API int lift_config_equal(const lift_config* a, const lift_config* b);
LIFT_API size_t lift_config_key_count(void);
LIFT_API const char* lift_config_key(size_t index);

/* ---- commands ---- */
/* command: fit, meta, modulate, query, interp, spectra or compare. */
LIFT_API lift_status lift_run(const char* command, const lift_config* config, lift_result** out);
LIFT_API void lift_result_free(lift_result* result);
LIFT_API size_t lift_result_artifact_count(const lift_result* result);
LIFT_API const char* lift_result_artifact(const lift_result* result, size_t index);
LIFT_API const char* lift_result_manifest(const lift_result* result);
LIFT_API size_t lift_result_metric_count(const lift_result* result);
LIFT_API lift_status lift_result_metric(const lift_result* result, size_t index, const char** name, double* value);
LIFT_API lift_status lift_result_metric_named(const lift_result* result, const char* name, double* value);

/* ---- tensors (LFT1 files) ---- */
LIFT_API lift_status lift_tensor_load(const char* path, lift_tensor** out);
LIFT_API lift_status lift_tensor_create(const size_t* shape, size_t rank, const double* data, lift_tensor** out);
LIFT_API lift_status lift_tensor_save(const lift_tensor* tensor, const char* path);
LIFT_API void lift_tensor_free(lift_tensor* tensor);
LIFT_API size_t lift_tensor_rank(const lift_tensor* tensor);
LIFT_API size_t lift_tensor_dim(const lift_tensor* tensor, size_t axis);
LIFT_API size_t lift_tensor_numel(const lift_tensor* tensor);
LIFT_API const double* lift_tensor_data(const lift_tensor* tensor);

/* ---- signals ---- */
/* Loads a PNG/PPM/PGM image, WAV file or LFTV volume as a [N..., C] tensor in [0, 1]
   (audio in [-1, 1]); the format follows the extension. */
LIFT_API lift_status lift_signal_load(const char* path, lift_tensor** out);
LIFT_API lift_status lift_image_save(const lift_tensor* values, const char* path);

/* ---- models (LFTC checkpoints) ---- */
LIFT_API lift_status lift_model_load(const char* path, lift_model** out);
LIFT_API void lift_model_free(lift_model* model);
LIFT_API int lift_model_is_lift(const lift_model* model);
LIFT_API const char* lift_model_fingerprint(const lift_model* model);
/* Plain INR checkpoints: coords [n, in_dim] -> values [n, out_dim]. */
LIFT_API lift_status lift_model_evaluate(const lift_model* model, const lift_tensor* coords, lift_tensor** out);

/* ---- modulation datasets (LFTM files) ---- */
LIFT_API lift_status lift_records_load(const char* path, lift_records** out);
LIFT_API void lift_records_free(lift_records* records);
LIFT_API size_t lift_records_count(const lift_records* records);
LIFT_API const char* lift_records_id(const lift_records* records, size_t index);
LIFT_API double lift_records_mse(const lift_records* records, size_t index);
/* LIFT checkpoints: decodes record `index` on a grid of the given extents. */
LIFT_API lift_status lift_records_decode(const lift_model* model, const lift_records* records, size_t index,
                                         const size_t* grid, size_t rank, lift_tensor** out);
/* Decodes (1 - t) a + t b; t = 0 and t = 1 reproduce the records exactly. */
LIFT_API lift_status lift_records_interpolate(const lift_model* model, const lift_records* records, size_t a,
                                              size_t b, double t, const size_t* grid, size_t rank,
                                              lift_tensor** out);

/* ---- metrics and analysis helpers ---- */
LIFT_API lift_status lift_psnr(const lift_tensor* prediction, const lift_tensor* target, double* out);
LIFT_API lift_status lift_ssim(const lift_tensor* prediction, const lift_tensor* target, double* out);
LIFT_API lift_status lift_bessel_j(int order, double x, double* out);
LIFT_API lift_status lift_sha256_file(const char* path, char* hex_out /* 65 bytes */);

#ifdef __cplusplus
}
#endif

#endif
