/*
 * natle.h - C interface to the NATLE low-light enhancement library.
 *
 * All objects are opaque handles created and destroyed through this API.
 * Every fallible call returns a natle_status; on failure a human readable
 * message for the calling thread is available from natle_last_error().
 * Images hold normalized RGB samples in [0,1].
 */
#ifndef NATLE_H
#define NATLE_H

#include <stddef.h>
#include <stdint.h>

#if defined(_WIN32)
#  if defined(NATLE_BUILDING_LIBRARY)
#    define NATLE_API __declspec(dllexport)
#  else
#    define NATLE_API __declspec(dllimport)
#  endif
#else
#  define NATLE_API __attribute__((visibility("default")))
#endif

#ifdef __cplusplus
extern "C" {
#endif

typedef enum natle_status {
  NATLE_OK = 0,
  NATLE_ERR_INVALID_ARGUMENT = 1,
  NATLE_ERR_IO_UNREADABLE = 2,
  NATLE_ERR_IO_FORMAT = 3,
  NATLE_ERR_IO_DIMENSIONS = 4,
  NATLE_ERR_IO_WRITE = 5,
  NATLE_ERR_DIMENSION_MISMATCH = 6,
  NATLE_ERR_NOT_CONVERGED = 7,
  NATLE_ERR_BUFFER_TOO_SMALL = 8,
  NATLE_ERR_OUT_OF_MEMORY = 9,
  NATLE_ERR_INTERNAL = 10
} natle_status;

typedef struct natle_image natle_image;
typedef struct natle_params natle_params;
typedef struct natle_result natle_result;

/* Intermediate maps retained by natle_enhance when tracing is requested. */
typedef enum natle_map {
  NATLE_MAP_INITIAL_ILLUMINATION = 0, /* BT.601 luminance of the input */
  NATLE_MAP_ILLUMINATION = 1,         /* smoothed illumination, clamped to [eps,1] */
  NATLE_MAP_NOISY_REFLECTANCE = 2,    /* V / (L + eps) before denoising */
  NATLE_MAP_DENOISED_REFLECTANCE = 3, /* reflectance initialization */
  NATLE_MAP_REFLECTANCE = 4,          /* solved reflectance, unclamped */
  NATLE_MAP_ENHANCED_VALUE = 5,       /* R * L^(1/gamma), clamped to [0,1] */
  NATLE_MAP_HUE = 6,                  /* denoised hue used for the output */
  NATLE_MAP_SATURATION = 7            /* denoised saturation used for the output */
} natle_map;

typedef enum natle_stage {
  NATLE_STAGE_ILLUMINATION = 0,
  NATLE_STAGE_DENOISE = 1,
  NATLE_STAGE_REFLECTANCE = 2,
  NATLE_STAGE_TOTAL = 3
} natle_stage;

/* natle_result_warnings() bits */
#define NATLE_WARN_ALL_BLACK              (1u << 0)
#define NATLE_WARN_ILLUMINATION_CLAMPED   (1u << 1)
#define NATLE_WARN_RATIO_CAPPED           (1u << 2)
#define NATLE_WARN_IDENTITY_ILLUMINATION  (1u << 3)
#define NATLE_WARN_IDENTITY_REFLECTANCE   (1u << 4)
#define NATLE_WARN_DENOISE_DISABLED       (1u << 5)

/* natle_image_load() flags */
#define NATLE_LOAD_ALPHA_DROPPED (1u << 0)
#define NATLE_LOAD_16BIT         (1u << 1)

NATLE_API const char* natle_version(void);
NATLE_API const char* natle_status_string(natle_status status);
NATLE_API const char* natle_last_error(void);

/* ---- images ------------------------------------------------------------ */

/* rgb holds width*height interleaved RGB triples in [0,1]. */
NATLE_API natle_status natle_image_create(int width, int height, const double* rgb,
                                          natle_image** out);
/* Grey image with the same plane replicated to R, G and B. */
NATLE_API natle_status natle_image_from_plane(int width, int height, const double* plane,
                                              natle_image** out);
/* PNG (8/16-bit) or JPEG. load_flags may be NULL. */
NATLE_API natle_status natle_image_load(const char* path, natle_image** out, uint32_t* load_flags);
/* Always writes an 8-bit RGB PNG. */
NATLE_API natle_status natle_image_save(const natle_image* image, const char* path);
NATLE_API void natle_image_destroy(natle_image* image);
NATLE_API int natle_image_width(const natle_image* image);
NATLE_API int natle_image_height(const natle_image* image);
/* Copies 3*width*height interleaved samples into rgb. */
NATLE_API natle_status natle_image_read(const natle_image* image, double* rgb, size_t count);

/* ---- parameters -------------------------------------------------------- */

NATLE_API natle_status natle_params_create(natle_params** out);
NATLE_API natle_status natle_params_copy(const natle_params* params, natle_params** out);
NATLE_API void natle_params_destroy(natle_params* params);
NATLE_API size_t natle_param_key_count(void);
NATLE_API const char* natle_param_key(size_t index);
NATLE_API natle_status natle_params_set(natle_params* params, const char* key, const char* value);
/* String buffers: *needed (optional) receives the size including the NUL. */
NATLE_API natle_status natle_params_get(const natle_params* params, const char* key, char* buf,
                                        size_t size, size_t* needed);
NATLE_API natle_status natle_params_apply_config(natle_params* params, const char* text);
NATLE_API natle_status natle_params_load_config(natle_params* params, const char* path);
NATLE_API natle_status natle_params_dump(const natle_params* params, char* buf, size_t size,
                                         size_t* needed);
NATLE_API natle_status natle_params_validate(const natle_params* params);

/* ---- enhancement ------------------------------------------------------- */

NATLE_API natle_status natle_enhance(const natle_image* input, const natle_params* params,
                                     int retain_trace, natle_result** out);
NATLE_API void natle_result_destroy(natle_result* result);
/* Borrowed; valid until the result is destroyed. */
NATLE_API const natle_image* natle_result_output(const natle_result* result);
NATLE_API double natle_result_stage_ms(const natle_result* result, natle_stage stage);
NATLE_API int natle_result_iterations(const natle_result* result, natle_stage stage);
NATLE_API uint32_t natle_result_warnings(const natle_result* result);
/* Borrowed row-major map; NATLE_ERR_INVALID_ARGUMENT if no trace was kept. */
NATLE_API natle_status natle_result_map(const natle_result* result, natle_map map,
                                        const double** data, int* width, int* height);
NATLE_API natle_status natle_describe_warnings(uint32_t flags, char* buf, size_t size,
                                               size_t* needed);

/* ---- metrics ----------------------------------------------------------- */

/* Mean SSIM on BT.601 luminance, 11x11 Gaussian window (sigma 1.5). */
NATLE_API natle_status natle_ssim(const natle_image* a, const natle_image* b, double* out);
/* identical (optional) is set to 1 and *db to +inf when the images match. */
NATLE_API natle_status natle_psnr(const natle_image* a, const natle_image* b, double* db,
                                  int* identical);
/* Mean of the local noise-level map of the luminance. */
NATLE_API natle_status natle_mean_local_sigma(const natle_image* image, int radius, double* out);

#ifdef __cplusplus
}
#endif

#endif /* NATLE_H */
