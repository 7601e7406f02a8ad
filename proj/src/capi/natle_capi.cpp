#include "natle.h"

#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <memory>
#include <new>
#include <sstream>
#include <string>

#include "config.hpp"
#include "denoise.hpp"
#include "errors.hpp"
#include "image_io.hpp"
#include "metrics.hpp"
#include "pipeline.hpp"

struct natle_image {
  natle::RgbImage rgb;
};

struct natle_params {
  natle::NatleParams params;
};

struct natle_result {
  natle_image output;
  natle::EnhancementTrace trace;
};

namespace {

thread_local std::string g_last_error;

natle_status to_status(natle::ErrorCode code) {
  using natle::ErrorCode;
  switch (code) {
    case ErrorCode::invalid_argument: return NATLE_ERR_INVALID_ARGUMENT;
    case ErrorCode::io_unreadable: return NATLE_ERR_IO_UNREADABLE;
    case ErrorCode::io_format: return NATLE_ERR_IO_FORMAT;
    case ErrorCode::io_dimensions: return NATLE_ERR_IO_DIMENSIONS;
    case ErrorCode::io_write: return NATLE_ERR_IO_WRITE;
    case ErrorCode::dimension_mismatch: return NATLE_ERR_DIMENSION_MISMATCH;
    case ErrorCode::not_converged: return NATLE_ERR_NOT_CONVERGED;
    case ErrorCode::internal: return NATLE_ERR_INTERNAL;
  }
  return NATLE_ERR_INTERNAL;
}

natle_status fail(natle_status status, std::string message) {
  g_last_error = std::move(message);
  return status;
}

// Runs fn, converting any exception into a status code.
template <typename Fn>
natle_status guarded(Fn&& fn) {
  try {
    g_last_error.clear();
    return fn();
  } catch (const natle::Error& e) {
    return fail(to_status(e.code()), e.what());
  } catch (const std::bad_alloc&) {
    return fail(NATLE_ERR_OUT_OF_MEMORY, "out of memory");
  } catch (const std::exception& e) {
    return fail(NATLE_ERR_INTERNAL, e.what());
  } catch (...) {
    return fail(NATLE_ERR_INTERNAL, "unknown error");
  }
}

natle_status copy_string(const std::string& s, char* buf, std::size_t size, std::size_t* needed) {
  if (needed) *needed = s.size() + 1;
  if (!buf) return size == 0 ? NATLE_OK : fail(NATLE_ERR_INVALID_ARGUMENT, "null buffer");
  if (size < s.size() + 1) {
    if (size > 0) buf[0] = '\0';
    return fail(NATLE_ERR_BUFFER_TOO_SMALL, "buffer too small");
  }
  std::memcpy(buf, s.c_str(), s.size() + 1);
  return NATLE_OK;
}

bool valid_dims(int width, int height) {
  return width > 0 && height > 0 &&
         static_cast<std::uint64_t>(width) * static_cast<std::uint64_t>(height) <= natle::kMaxImagePixels;
}

const natle::PlanarImage* trace_map(const natle::EnhancementTrace& t, natle_map map) {
  switch (map) {
    case NATLE_MAP_INITIAL_ILLUMINATION: return &t.lhat;
    case NATLE_MAP_ILLUMINATION: return &t.illumination;
    case NATLE_MAP_NOISY_REFLECTANCE: return &t.noisy_rhat;
    case NATLE_MAP_DENOISED_REFLECTANCE: return &t.rhat;
    case NATLE_MAP_REFLECTANCE: return &t.reflectance;
    case NATLE_MAP_ENHANCED_VALUE: return &t.enhanced_value;
    case NATLE_MAP_HUE: return &t.hue;
    case NATLE_MAP_SATURATION: return &t.saturation;
  }
  return nullptr;
}

}  // namespace

extern "C" {

const char* natle_version(void) { return "1.0.0"; }

const char* natle_status_string(natle_status status) {
  switch (status) {
    case NATLE_OK: return "ok";
    case NATLE_ERR_INVALID_ARGUMENT: return "invalid argument";
    case NATLE_ERR_IO_UNREADABLE: return "file unreadable";
    case NATLE_ERR_IO_FORMAT: return "unsupported or corrupt image format";
    case NATLE_ERR_IO_DIMENSIONS: return "unsupported image dimensions";
    case NATLE_ERR_IO_WRITE: return "file write failed";
    case NATLE_ERR_DIMENSION_MISMATCH: return "dimension mismatch";
    case NATLE_ERR_NOT_CONVERGED: return "solver did not converge";
    case NATLE_ERR_BUFFER_TOO_SMALL: return "buffer too small";
    case NATLE_ERR_OUT_OF_MEMORY: return "out of memory";
    case NATLE_ERR_INTERNAL: return "internal error";
  }
  return "unknown status";
}

const char* natle_last_error(void) { return g_last_error.c_str(); }

natle_status natle_image_create(int width, int height, const double* rgb, natle_image** out) {
  return guarded([&] {
    if (!out || !rgb) return fail(NATLE_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    if (!valid_dims(width, height)) return fail(NATLE_ERR_INVALID_ARGUMENT, "invalid dimensions");
    auto img = std::make_unique<natle_image>();
    img->rgb = natle::RgbImage(width, height);
    const std::size_t n = img->rgb.r.size();
    for (std::size_t i = 0; i < n; ++i) {
      const double r = rgb[3 * i], g = rgb[3 * i + 1], b = rgb[3 * i + 2];
      for (double v : {r, g, b})
        if (!(v >= 0.0 && v <= 1.0))
          return fail(NATLE_ERR_INVALID_ARGUMENT, "sample outside [0,1] at pixel " + std::to_string(i));
      img->rgb.r[i] = r;
      img->rgb.g[i] = g;
      img->rgb.b[i] = b;
    }
    *out = img.release();
    return NATLE_OK;
  });
}

natle_status natle_image_from_plane(int width, int height, const double* plane, natle_image** out) {
  return guarded([&] {
    if (!out || !plane) return fail(NATLE_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    if (!valid_dims(width, height)) return fail(NATLE_ERR_INVALID_ARGUMENT, "invalid dimensions");
    const std::size_t n = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
    natle::PlanarImage p(width, height, std::vector<double>(plane, plane + n));
    for (double v : p.values())
      if (!std::isfinite(v)) return fail(NATLE_ERR_INVALID_ARGUMENT, "non-finite sample");
    auto img = std::make_unique<natle_image>();
    img->rgb = natle::RgbImage(natle::clamp(p, 0.0, 1.0), natle::clamp(p, 0.0, 1.0), natle::clamp(p, 0.0, 1.0));
    *out = img.release();
    return NATLE_OK;
  });
}

natle_status natle_image_load(const char* path, natle_image** out, uint32_t* load_flags) {
  return guarded([&] {
    if (!out || !path) return fail(NATLE_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    natle::LoadedImage loaded = natle::load_image(path);
    if (load_flags) {
      *load_flags = 0;
      if (loaded.alpha_dropped) *load_flags |= NATLE_LOAD_ALPHA_DROPPED;
      if (loaded.bit_depth == 16) *load_flags |= NATLE_LOAD_16BIT;
    }
    *out = new natle_image{std::move(loaded.image)};
    return NATLE_OK;
  });
}

natle_status natle_image_save(const natle_image* image, const char* path) {
  return guarded([&] {
    if (!image || !path) return fail(NATLE_ERR_INVALID_ARGUMENT, "null argument");
    natle::save_image(path, image->rgb);
    return NATLE_OK;
  });
}

void natle_image_destroy(natle_image* image) { delete image; }

int natle_image_width(const natle_image* image) { return image ? image->rgb.width() : 0; }

int natle_image_height(const natle_image* image) { return image ? image->rgb.height() : 0; }

natle_status natle_image_read(const natle_image* image, double* rgb, size_t count) {
  return guarded([&] {
    if (!image || !rgb) return fail(NATLE_ERR_INVALID_ARGUMENT, "null argument");
    const std::size_t n = image->rgb.r.size();
    if (count < 3 * n) return fail(NATLE_ERR_BUFFER_TOO_SMALL, "need 3*width*height samples");
    for (std::size_t i = 0; i < n; ++i) {
      rgb[3 * i] = image->rgb.r[i];
      rgb[3 * i + 1] = image->rgb.g[i];
      rgb[3 * i + 2] = image->rgb.b[i];
    }
    return NATLE_OK;
  });
}

natle_status natle_params_create(natle_params** out) {
  return guarded([&] {
    if (!out) return fail(NATLE_ERR_INVALID_ARGUMENT, "null argument");
    *out = new natle_params{};
    return NATLE_OK;
  });
}

natle_status natle_params_copy(const natle_params* params, natle_params** out) {
  return guarded([&] {
    if (!params || !out) return fail(NATLE_ERR_INVALID_ARGUMENT, "null argument");
    *out = new natle_params{*params};
    return NATLE_OK;
  });
}

void natle_params_destroy(natle_params* params) { delete params; }

size_t natle_param_key_count(void) { return natle::param_keys().size(); }

const char* natle_param_key(size_t index) {
  const auto& keys = natle::param_keys();
  return index < keys.size() ? keys[index].c_str() : nullptr;
}

natle_status natle_params_set(natle_params* params, const char* key, const char* value) {
  return guarded([&] {
    if (!params || !key || !value) return fail(NATLE_ERR_INVALID_ARGUMENT, "null argument");
    natle::set_param(params->params, key, value);
    return NATLE_OK;
  });
}

natle_status natle_params_get(const natle_params* params, const char* key, char* buf, size_t size,
                              size_t* needed) {
  return guarded([&] {
    if (!params || !key) return fail(NATLE_ERR_INVALID_ARGUMENT, "null argument");
    return copy_string(natle::get_param(params->params, key), buf, size, needed);
  });
}

natle_status natle_params_apply_config(natle_params* params, const char* text) {
  return guarded([&] {
    if (!params || !text) return fail(NATLE_ERR_INVALID_ARGUMENT, "null argument");
    // Apply to a copy so a bad line leaves the parameters untouched.
    natle::NatleParams updated = params->params;
    natle::apply_config(updated, text);
    params->params = updated;
    return NATLE_OK;
  });
}

natle_status natle_params_load_config(natle_params* params, const char* path) {
  return guarded([&] {
    if (!params || !path) return fail(NATLE_ERR_INVALID_ARGUMENT, "null argument");
    std::ifstream in(path);
    if (!in) return fail(NATLE_ERR_IO_UNREADABLE, std::string("cannot open config ") + path);
    std::stringstream ss;
    ss << in.rdbuf();
    natle::NatleParams updated = params->params;
    natle::apply_config(updated, ss.str());
    params->params = updated;
    return NATLE_OK;
  });
}

natle_status natle_params_dump(const natle_params* params, char* buf, size_t size, size_t* needed) {
  return guarded([&] {
    if (!params) return fail(NATLE_ERR_INVALID_ARGUMENT, "null argument");
    return copy_string(natle::dump_config(params->params), buf, size, needed);
  });
}

natle_status natle_params_validate(const natle_params* params) {
  return guarded([&] {
    if (!params) return fail(NATLE_ERR_INVALID_ARGUMENT, "null argument");
    natle::validate(params->params);
    return NATLE_OK;
  });
}

natle_status natle_enhance(const natle_image* input, const natle_params* params, int retain_trace,
                           natle_result** out) {
  return guarded([&] {
    if (!input || !params || !out) return fail(NATLE_ERR_INVALID_ARGUMENT, "null argument");
    *out = nullptr;
    natle::EnhancementResult res = natle::enhance(input->rgb, params->params, retain_trace != 0);
    *out = new natle_result{natle_image{std::move(res.output)}, std::move(res.trace)};
    return NATLE_OK;
  });
}

void natle_result_destroy(natle_result* result) { delete result; }

const natle_image* natle_result_output(const natle_result* result) {
  return result ? &result->output : nullptr;
}

double natle_result_stage_ms(const natle_result* result, natle_stage stage) {
  if (!result) return std::numeric_limits<double>::quiet_NaN();
  switch (stage) {
    case NATLE_STAGE_ILLUMINATION: return result->trace.ms_illum;
    case NATLE_STAGE_DENOISE: return result->trace.ms_denoise;
    case NATLE_STAGE_REFLECTANCE: return result->trace.ms_reflect;
    case NATLE_STAGE_TOTAL: return result->trace.ms_total;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

int natle_result_iterations(const natle_result* result, natle_stage stage) {
  if (!result) return -1;
  if (stage == NATLE_STAGE_ILLUMINATION) return result->trace.illumination_iterations;
  if (stage == NATLE_STAGE_REFLECTANCE) return result->trace.reflectance_iterations;
  return 0;
}

uint32_t natle_result_warnings(const natle_result* result) {
  return result ? result->trace.warnings : 0u;
}

natle_status natle_result_map(const natle_result* result, natle_map map, const double** data,
                              int* width, int* height) {
  return guarded([&] {
    if (!result || !data) return fail(NATLE_ERR_INVALID_ARGUMENT, "null argument");
    if (!result->trace.retained)
      return fail(NATLE_ERR_INVALID_ARGUMENT, "enhancement ran without trace retention");
    const natle::PlanarImage* plane = trace_map(result->trace, map);
    if (!plane) return fail(NATLE_ERR_INVALID_ARGUMENT, "unknown map");
    *data = plane->values().data();
    if (width) *width = plane->width();
    if (height) *height = plane->height();
    return NATLE_OK;
  });
}

natle_status natle_describe_warnings(uint32_t flags, char* buf, size_t size, size_t* needed) {
  return guarded([&] { return copy_string(natle::describe_warnings(flags), buf, size, needed); });
}

natle_status natle_ssim(const natle_image* a, const natle_image* b, double* out) {
  return guarded([&] {
    if (!a || !b || !out) return fail(NATLE_ERR_INVALID_ARGUMENT, "null argument");
    *out = natle::ssim(a->rgb, b->rgb);
    return NATLE_OK;
  });
}

natle_status natle_psnr(const natle_image* a, const natle_image* b, double* db, int* identical) {
  return guarded([&] {
    if (!a || !b || !db) return fail(NATLE_ERR_INVALID_ARGUMENT, "null argument");
    const natle::PsnrResult r = natle::psnr(a->rgb, b->rgb);
    *db = r.db;
    if (identical) *identical = r.identical ? 1 : 0;
    return NATLE_OK;
  });
}

natle_status natle_mean_local_sigma(const natle_image* image, int radius, double* out) {
  return guarded([&] {
    if (!image || !out) return fail(NATLE_ERR_INVALID_ARGUMENT, "null argument");
    const natle::PlanarImage sigma =
        natle::estimate_local_sigma(natle::init_illumination(image->rgb), radius);
    double sum = 0.0;
    for (double v : sigma.values()) sum += v;
    *out = sum / static_cast<double>(sigma.size());
    return NATLE_OK;
  });
}

}  // extern "C"
