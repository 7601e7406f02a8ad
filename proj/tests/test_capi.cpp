#include "doctest.h"

#include <cmath>
#include <filesystem>
#include <string>
#include <vector>

#include "fixtures.hpp"
#include "natle.h"

namespace fs = std::filesystem;

namespace {

std::vector<double> interleave(const natle::RgbImage& img) {
  std::vector<double> out;
  for (std::size_t i = 0; i < img.r.size(); ++i) {
    out.push_back(img.r[i]);
    out.push_back(img.g[i]);
    out.push_back(img.b[i]);
  }
  return out;
}

natle_image* make(const natle::RgbImage& img) {
  natle_image* h = nullptr;
  REQUIRE(natle_image_create(img.width(), img.height(), interleave(img).data(), &h) == NATLE_OK);
  return h;
}

}  // namespace

TEST_CASE("image handles") {
  const natle::RgbImage src = natle::testing::random_rgb(5, 3, 1);
  natle_image* img = make(src);
  CHECK(natle_image_width(img) == 5);
  CHECK(natle_image_height(img) == 3);
  std::vector<double> back(45);
  CHECK(natle_image_read(img, back.data(), back.size()) == NATLE_OK);
  CHECK(back == interleave(src));
  CHECK(natle_image_read(img, back.data(), 10) == NATLE_ERR_BUFFER_TOO_SMALL);
  natle_image_destroy(img);

  natle_image* bad = nullptr;
  std::vector<double> out_of_range(12, 1.5);
  CHECK(natle_image_create(2, 2, out_of_range.data(), &bad) == NATLE_ERR_INVALID_ARGUMENT);
  CHECK(bad == nullptr);
  CHECK(std::string(natle_last_error()).find("outside") != std::string::npos);
  CHECK(natle_image_create(0, 2, out_of_range.data(), &bad) == NATLE_ERR_INVALID_ARGUMENT);
  CHECK(natle_image_create(2, 2, nullptr, &bad) == NATLE_ERR_INVALID_ARGUMENT);
  natle_image_destroy(nullptr);
}

TEST_CASE("load and save through the C API") {
  const fs::path dir = fs::temp_directory_path() / "natle_capi_tests";
  fs::create_directories(dir);
  natle_image* img = make(natle::testing::random_rgb(6, 4, 2));
  const std::string path = (dir / "x.png").string();
  CHECK(natle_image_save(img, path.c_str()) == NATLE_OK);
  natle_image* loaded = nullptr;
  std::uint32_t flags = 99;
  CHECK(natle_image_load(path.c_str(), &loaded, &flags) == NATLE_OK);
  CHECK(flags == 0);
  CHECK(natle_image_width(loaded) == 6);
  natle_image_destroy(loaded);
  natle_image_destroy(img);

  natle_image* missing = nullptr;
  CHECK(natle_image_load((dir / "missing.png").string().c_str(), &missing, nullptr) == NATLE_ERR_IO_UNREADABLE);
  CHECK(std::string(natle_status_string(NATLE_ERR_IO_UNREADABLE)) == "file unreadable");
}

TEST_CASE("parameters") {
  natle_params* p = nullptr;
  REQUIRE(natle_params_create(&p) == NATLE_OK);
  CHECK(natle_param_key_count() > 10);
  CHECK(natle_param_key(natle_param_key_count()) == nullptr);

  CHECK(natle_params_set(p, "beta", "4.5") == NATLE_OK);
  char buf[64];
  size_t needed = 0;
  CHECK(natle_params_get(p, "beta", buf, sizeof buf, &needed) == NATLE_OK);
  CHECK(std::string(buf) == "4.5");
  CHECK(needed == 4);
  CHECK(natle_params_get(p, "beta", buf, 2, &needed) == NATLE_ERR_BUFFER_TOO_SMALL);
  CHECK(natle_params_set(p, "unknown", "1") == NATLE_ERR_INVALID_ARGUMENT);

  // A failing config leaves the parameters untouched.
  CHECK(natle_params_apply_config(p, "gamma=1.5\nbogus=1\n") == NATLE_ERR_INVALID_ARGUMENT);
  CHECK(natle_params_get(p, "gamma", buf, sizeof buf, nullptr) == NATLE_OK);
  CHECK(std::string(buf) == "2.2000000000000002");

  CHECK(natle_params_dump(p, nullptr, 0, &needed) == NATLE_OK);
  std::string dump(needed, '\0');
  CHECK(natle_params_dump(p, dump.data(), dump.size(), nullptr) == NATLE_OK);
  natle_params* q = nullptr;
  REQUIRE(natle_params_create(&q) == NATLE_OK);
  CHECK(natle_params_apply_config(q, dump.c_str()) == NATLE_OK);
  CHECK(natle_params_get(q, "beta", buf, sizeof buf, nullptr) == NATLE_OK);
  CHECK(std::string(buf) == "4.5");

  CHECK(natle_params_set(q, "gamma", "-1") == NATLE_OK);
  CHECK(natle_params_validate(q) == NATLE_ERR_INVALID_ARGUMENT);
  natle_params_destroy(q);
  natle_params_destroy(p);
}

TEST_CASE("enhance, trace maps and metrics") {
  const natle::RgbImage low = natle::testing::darken(natle::testing::synthetic_scene(40, 30, 3), 0.15, 0.01, 4);
  natle_image* img = make(low);
  natle_params* p = nullptr;
  REQUIRE(natle_params_create(&p) == NATLE_OK);

  natle_result* r = nullptr;
  REQUIRE(natle_enhance(img, p, 1, &r) == NATLE_OK);
  const natle_image* out = natle_result_output(r);
  CHECK(natle_image_width(out) == 40);
  CHECK(natle_result_stage_ms(r, NATLE_STAGE_TOTAL) >= natle_result_stage_ms(r, NATLE_STAGE_ILLUMINATION));
  CHECK(natle_result_iterations(r, NATLE_STAGE_ILLUMINATION) > 0);

  const double* data = nullptr;
  int w = 0, h = 0;
  CHECK(natle_result_map(r, NATLE_MAP_ILLUMINATION, &data, &w, &h) == NATLE_OK);
  CHECK(w == 40);
  CHECK(h == 30);
  CHECK(data[0] >= 1e-3);

  double s = 0.0;
  CHECK(natle_ssim(out, out, &s) == NATLE_OK);
  CHECK(s == 1.0);
  double db = 0.0;
  int identical = 0;
  CHECK(natle_psnr(out, out, &db, &identical) == NATLE_OK);
  CHECK(identical == 1);
  CHECK(std::isinf(db));
  double sigma = -1.0;
  CHECK(natle_mean_local_sigma(img, 3, &sigma) == NATLE_OK);
  CHECK(sigma > 0.0);
  CHECK(natle_mean_local_sigma(img, 0, &sigma) == NATLE_ERR_INVALID_ARGUMENT);
  natle_result_destroy(r);

  // Without a trace the maps are unavailable.
  REQUIRE(natle_enhance(img, p, 0, &r) == NATLE_OK);
  CHECK(natle_result_map(r, NATLE_MAP_ILLUMINATION, &data, &w, &h) == NATLE_ERR_INVALID_ARGUMENT);
  natle_result_destroy(r);

  natle_params_set(p, "alpha", "0");
  REQUIRE(natle_enhance(img, p, 0, &r) == NATLE_OK);
  CHECK((natle_result_warnings(r) & NATLE_WARN_IDENTITY_ILLUMINATION) != 0);
  char text[256];
  CHECK(natle_describe_warnings(natle_result_warnings(r), text, sizeof text, nullptr) == NATLE_OK);
  CHECK(std::string(text).find("identity_illumination") != std::string::npos);
  natle_result_destroy(r);

  natle_image* other = make(natle::testing::random_rgb(4, 4, 1));
  CHECK(natle_ssim(img, other, &s) == NATLE_ERR_DIMENSION_MISMATCH);
  natle_image_destroy(other);

  natle_params_set(p, "max-iters", "1");
  natle_params_set(p, "alpha", "5");
  natle_params_set(p, "tol", "1e-14");
  CHECK(natle_enhance(img, p, 0, &r) == NATLE_ERR_NOT_CONVERGED);
  CHECK(r == nullptr);

  natle_params_destroy(p);
  natle_image_destroy(img);
}
