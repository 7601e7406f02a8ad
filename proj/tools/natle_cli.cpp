#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "natle.h"

namespace fs = std::filesystem;

namespace {

struct ImageDeleter {
  void operator()(natle_image* p) const { natle_image_destroy(p); }
};
struct ParamsDeleter {
  void operator()(natle_params* p) const { natle_params_destroy(p); }
};
struct ResultDeleter {
  void operator()(natle_result* p) const { natle_result_destroy(p); }
};
using ImagePtr = std::unique_ptr<natle_image, ImageDeleter>;
using ParamsPtr = std::unique_ptr<natle_params, ParamsDeleter>;
using ResultPtr = std::unique_ptr<natle_result, ResultDeleter>;

class CliError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string status_message(natle_status s) {
  std::string msg = natle_status_string(s);
  const std::string detail = natle_last_error();
  if (!detail.empty()) msg += ": " + detail;
  return msg;
}

void check(natle_status s, const std::string& context) {
  if (s != NATLE_OK) throw CliError(context + ": " + status_message(s));
}

ParamsPtr new_params() {
  natle_params* p = nullptr;
  check(natle_params_create(&p), "creating parameters");
  return ParamsPtr(p);
}

ParamsPtr copy_params(const natle_params* src) {
  natle_params* p = nullptr;
  check(natle_params_copy(src, &p), "copying parameters");
  return ParamsPtr(p);
}

void set(natle_params* p, const std::string& key, const std::string& value) {
  check(natle_params_set(p, key.c_str(), value.c_str()), "--" + key + " " + value);
}

std::string dump(const natle_params* p) {
  std::size_t needed = 0;
  check(natle_params_dump(p, nullptr, 0, &needed), "dumping parameters");
  std::string text(needed, '\0');
  check(natle_params_dump(p, text.data(), text.size(), nullptr), "dumping parameters");
  text.resize(needed - 1);
  return text;
}

std::string describe(std::uint32_t flags) {
  std::size_t needed = 0;
  natle_describe_warnings(flags, nullptr, 0, &needed);
  std::string text(needed, '\0');
  natle_describe_warnings(flags, text.data(), text.size(), nullptr);
  text.resize(needed - 1);
  return text;
}

ImagePtr load(const std::string& path) {
  natle_image* img = nullptr;
  std::uint32_t flags = 0;
  check(natle_image_load(path.c_str(), &img, &flags), path);
  if (flags & NATLE_LOAD_ALPHA_DROPPED) std::cerr << "note: " << path << ": alpha channel ignored\n";
  return ImagePtr(img);
}

void save(const natle_image* img, const fs::path& path) {
  check(natle_image_save(img, path.string().c_str()), path.string());
}

void save_map(const natle_result* r, natle_map map, const fs::path& path) {
  const double* data = nullptr;
  int w = 0, h = 0;
  check(natle_result_map(r, map, &data, &w, &h), "reading trace");
  natle_image* img = nullptr;
  check(natle_image_from_plane(w, h, data, &img), "building trace panel");
  ImagePtr owned(img);
  save(owned.get(), path);
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

std::string fixed(double v, int digits) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*f", digits, v);
  return buf;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
  out.close();
  if (!out) throw CliError("cannot write " + path.string());
}

void prepare_out_dir(const fs::path& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec || !fs::is_directory(dir)) throw CliError("cannot create output directory " + dir.string());
}

void check_unique_stems(const std::vector<std::string>& inputs) {
  std::set<std::string> seen;
  for (const auto& in : inputs)
    if (!seen.insert(fs::path(in).stem().string()).second)
      throw CliError("two inputs share the output name " + fs::path(in).stem().string());
}

// Runs fn(i) for every index on up to `jobs` threads.
template <typename Fn>
void for_each_index(std::size_t count, unsigned jobs, Fn fn) {
  jobs = std::max(1u, std::min<unsigned>(jobs, static_cast<unsigned>(count)));
  if (jobs <= 1) {
    for (std::size_t i = 0; i < count; ++i) fn(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < count; i = next++) fn(i);
    });
  for (auto& th : pool) th.join();
}

struct ParamFlags {
  std::map<std::string, std::string> values;
  bool no_denoise = false;
  std::string config;
  std::string dump_config;
};

struct FlagSpec {
  const char* flag;
  const char* key;
  const char* help;
};

const FlagSpec kFlags[] = {
    {"--alpha", "alpha", "illumination smoothness weight"},
    {"--eps", "eps", "illumination weight regulariser and lower clamp"},
    {"--beta", "beta", "reflectance gradient fidelity weight"},
    {"--lambda", "lambda", "gradient amplification factor"},
    {"--eps-g", "eps-g", "gradient magnitude threshold"},
    {"--eps-div", "eps-div", "division guard for the reflectance ratio"},
    {"--ratio-cap", "ratio-cap", "upper bound on the reflectance ratio"},
    {"--gamma", "gamma", "illumination gamma"},
    {"--median-radius", "median-radius", "median filter radius"},
    {"--abf-spatial-sigma", "abf-spatial-sigma", "bilateral spatial sigma"},
    {"--abf-range-min", "abf-range-min", "lower clamp on the bilateral range sigma"},
    {"--abf-range-max", "abf-range-max", "upper clamp on the bilateral range sigma"},
    {"--abf-window-radius", "abf-window-radius", "bilateral window radius"},
    {"--noise-window-radius", "noise-window-radius", "local noise estimate window radius"},
    {"--tol", "tol", "relative residual tolerance of the solver"},
    {"--max-iters", "max-iters", "solver iteration limit"},
    {"--preconditioner", "preconditioner", "jacobi or none"},
};

void add_param_flags(CLI::App* app, ParamFlags& f) {
  for (const auto& spec : kFlags) app->add_option(spec.flag, f.values[spec.key], spec.help);
  app->add_flag("--no-denoise", f.no_denoise, "skip the reflectance denoising stage");
  app->add_option("--config", f.config, "key=value parameter file; flags override it");
  app->add_option("--dump-config", f.dump_config, "write the effective parameters to PATH (- for stdout)");
}

ParamsPtr effective_params(const ParamFlags& f) {
  ParamsPtr p = new_params();
  if (!f.config.empty()) check(natle_params_load_config(p.get(), f.config.c_str()), f.config);
  for (const auto& [key, value] : f.values)
    if (!value.empty()) set(p.get(), key, value);
  if (f.no_denoise) set(p.get(), "denoise", "false");
  check(natle_params_validate(p.get()), "parameters");
  if (!f.dump_config.empty()) {
    if (f.dump_config == "-")
      std::cout << dump(p.get());
    else
      write_text(f.dump_config, dump(p.get()));
  }
  return p;
}

// ---- enhance ---------------------------------------------------------------

struct EnhanceOptions {
  ParamFlags params;
  std::vector<std::string> inputs;
  std::string out_dir = "natle_out";
  bool trace = false;
  unsigned jobs = 1;
};

struct EnhanceRow {
  bool ok = false;
  std::string error;
  std::string line;
};

const std::pair<natle_map, const char*> kTracePanels[] = {
    {NATLE_MAP_INITIAL_ILLUMINATION, "1_initial_illumination"},
    {NATLE_MAP_ILLUMINATION, "2_illumination"},
    {NATLE_MAP_NOISY_REFLECTANCE, "3_noisy_reflectance"},
    {NATLE_MAP_DENOISED_REFLECTANCE, "4_denoised_reflectance"},
    {NATLE_MAP_REFLECTANCE, "5_reflectance"},
    {NATLE_MAP_ENHANCED_VALUE, "6_enhanced_value"},
};

EnhanceRow enhance_one(const std::string& input, const natle_params* params, const fs::path& out_dir,
                       bool trace) {
  EnhanceRow row;
  try {
    ImagePtr img = load(input);
    natle_result* raw = nullptr;
    check(natle_enhance(img.get(), params, trace ? 1 : 0, &raw), input);
    ResultPtr result(raw);
    const std::string stem = fs::path(input).stem().string();
    save(natle_result_output(result.get()), out_dir / (stem + ".png"));
    if (trace)
      for (const auto& [map, name] : kTracePanels) save_map(result.get(), map, out_dir / (stem + "_" + name + ".png"));
    std::ostringstream line;
    line << csv_field(input) << ',' << natle_image_width(img.get()) << ',' << natle_image_height(img.get()) << ','
         << fixed(natle_result_stage_ms(result.get(), NATLE_STAGE_ILLUMINATION), 3) << ','
         << fixed(natle_result_stage_ms(result.get(), NATLE_STAGE_DENOISE), 3) << ','
         << fixed(natle_result_stage_ms(result.get(), NATLE_STAGE_REFLECTANCE), 3) << ','
         << fixed(natle_result_stage_ms(result.get(), NATLE_STAGE_TOTAL), 3) << ','
         << csv_field(describe(natle_result_warnings(result.get())));
    row.line = line.str();
    row.ok = true;
  } catch (const std::exception& e) {
    row.error = e.what();
  }
  return row;
}

int run_enhance(const EnhanceOptions& opt) {
  ParamsPtr params = effective_params(opt.params);
  if (opt.inputs.empty()) {
    if (!opt.params.dump_config.empty()) return 0;
    throw CliError("no input images");
  }
  check_unique_stems(opt.inputs);
  const fs::path out_dir(opt.out_dir);
  prepare_out_dir(out_dir);

  std::vector<EnhanceRow> rows(opt.inputs.size());
  for_each_index(opt.inputs.size(), opt.jobs,
                 [&](std::size_t i) { rows[i] = enhance_one(opt.inputs[i], params.get(), out_dir, opt.trace); });

  std::string report = "file,width,height,ms_illum,ms_denoise,ms_reflect,ms_total,warnings\n";
  int failures = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].ok) {
      report += rows[i].line + "\n";
    } else {
      ++failures;
      std::cerr << "error: " << rows[i].error << "\n";
    }
  }
  write_text(out_dir / "report.csv", report);
  write_text(out_dir / "params.cfg", dump(params.get()));
  std::cout << "enhanced " << rows.size() - failures << " of " << rows.size() << " images into "
            << out_dir.string() << "\n";
  return failures == 0 ? 0 : 1;
}

// ---- eval ------------------------------------------------------------------

bool is_image_file(const fs::path& p) {
  std::string ext = p.extension().string();
  std::transform(ext.begin(), ext.end(), ext.begin(), [](unsigned char c) { return std::tolower(c); });
  return ext == ".png" || ext == ".jpg" || ext == ".jpeg";
}

std::vector<std::string> list_images(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw CliError("not a directory: " + dir.string());
  std::vector<std::string> names;
  for (const auto& entry : fs::directory_iterator(dir))
    if (entry.is_regular_file() && is_image_file(entry.path())) names.push_back(entry.path().filename().string());
  std::sort(names.begin(), names.end());
  return names;
}

struct Scores {
  double ssim = 0.0;
  double psnr = 0.0;
};

Scores score(const natle_image* a, const natle_image* b, const std::string& context) {
  Scores s;
  check(natle_ssim(a, b, &s.ssim), context);
  check(natle_psnr(a, b, &s.psnr, nullptr), context);
  return s;
}

struct EvalOptions {
  std::string outputs_dir;
  std::string refs_dir;
  std::string report = "eval.csv";
};

int run_eval(const EvalOptions& opt) {
  const auto outputs = list_images(opt.outputs_dir);
  const auto refs = list_images(opt.refs_dir);
  if (outputs.empty()) throw CliError("no images in " + opt.outputs_dir);
  if (refs.empty()) throw CliError("no images in " + opt.refs_dir);
  std::vector<std::string> only_out, only_ref;
  std::set_difference(outputs.begin(), outputs.end(), refs.begin(), refs.end(), std::back_inserter(only_out));
  std::set_difference(refs.begin(), refs.end(), outputs.begin(), outputs.end(), std::back_inserter(only_ref));
  if (!only_out.empty() || !only_ref.empty()) {
    std::string msg = "unmatched files:";
    for (const auto& n : only_out) msg += " " + opt.outputs_dir + "/" + n;
    for (const auto& n : only_ref) msg += " " + opt.refs_dir + "/" + n;
    throw CliError(msg);
  }

  std::string report = "file,ssim,psnr\n";
  double sum_ssim = 0.0, sum_psnr = 0.0;
  std::printf("%-32s %10s %10s\n", "file", "ssim", "psnr");
  for (const auto& name : outputs) {
    ImagePtr out = load((fs::path(opt.outputs_dir) / name).string());
    ImagePtr ref = load((fs::path(opt.refs_dir) / name).string());
    const Scores s = score(out.get(), ref.get(), name);
    sum_ssim += s.ssim;
    sum_psnr += s.psnr;
    std::printf("%-32s %10s %10s\n", name.c_str(), fixed(s.ssim, 4).c_str(), fixed(s.psnr, 2).c_str());
    report += csv_field(name) + "," + fixed(s.ssim, 6) + "," + fixed(s.psnr, 4) + "\n";
  }
  const double n = static_cast<double>(outputs.size());
  std::printf("%-32s %10s %10s\n", "mean", fixed(sum_ssim / n, 4).c_str(), fixed(sum_psnr / n, 2).c_str());
  report += "mean," + fixed(sum_ssim / n, 6) + "," + fixed(sum_psnr / n, 4) + "\n";
  write_text(opt.report, report);
  return 0;
}

// ---- ablate ----------------------------------------------------------------

struct AblateOptions {
  ParamFlags params;
  std::vector<std::string> inputs;
  std::string out_dir = "natle_ablation";
  std::string ref_dir;
  int sigma_radius = 3;
};

struct Variant {
  const char* name;
  const char* key;
  const char* value;
};

const Variant kVariants[] = {
    {"alpha0", "alpha", "0"},
    {"beta0", "beta", "0"},
    {"nodenoise", "denoise", "false"},
    {"full", nullptr, nullptr},
};

bool maps_equal(const natle_result* r, natle_map a, natle_map b) {
  const double *pa = nullptr, *pb = nullptr;
  int wa = 0, ha = 0, wb = 0, hb = 0;
  check(natle_result_map(r, a, &pa, &wa, &ha), "reading trace");
  check(natle_result_map(r, b, &pb, &wb, &hb), "reading trace");
  return wa == wb && ha == hb && std::equal(pa, pa + static_cast<std::size_t>(wa) * ha, pb);
}

std::vector<std::string> ablate_one(const std::string& input, const natle_params* base, const AblateOptions& opt) {
  ImagePtr img = load(input);
  const std::string stem = fs::path(input).stem().string();
  ImagePtr ref;
  if (!opt.ref_dir.empty()) {
    ref = load((fs::path(opt.ref_dir) / fs::path(input).filename()).string());
    if (natle_image_width(ref.get()) != natle_image_width(img.get()) ||
        natle_image_height(ref.get()) != natle_image_height(img.get()))
      throw CliError(input + ": reference size differs");
  }
  std::vector<std::string> lines;
  for (const auto& v : kVariants) {
    ParamsPtr p = copy_params(base);
    if (v.key) set(p.get(), v.key, v.value);
    natle_result* raw = nullptr;
    check(natle_enhance(img.get(), p.get(), 1, &raw), input + " [" + v.name + "]");
    ResultPtr result(raw);
    const natle_image* out = natle_result_output(result.get());
    save(out, fs::path(opt.out_dir) / (stem + "_" + v.name + ".png"));
    double sigma = 0.0;
    check(natle_mean_local_sigma(out, opt.sigma_radius, &sigma), "local sigma");
    std::string line = csv_field(input) + "," + v.name + ",";
    if (ref) {
      const Scores s = score(out, ref.get(), input);
      line += fixed(s.ssim, 6) + "," + fixed(s.psnr, 4);
    } else {
      line += ",";
    }
    line += "," + fixed(sigma, 6) + ",";
    line += maps_equal(result.get(), NATLE_MAP_REFLECTANCE, NATLE_MAP_DENOISED_REFLECTANCE) ? "1" : "0";
    line += "," + csv_field(describe(natle_result_warnings(result.get())));
    lines.push_back(line);
  }
  return lines;
}

int run_ablate(const AblateOptions& opt) {
  ParamsPtr params = effective_params(opt.params);
  if (opt.inputs.empty()) throw CliError("no input images");
  check_unique_stems(opt.inputs);
  prepare_out_dir(opt.out_dir);
  std::string table = "file,config,ssim,psnr,mean_local_sigma,r_equals_rhat,warnings\n";
  int failures = 0;
  for (const auto& input : opt.inputs) {
    try {
      for (const auto& line : ablate_one(input, params.get(), opt)) table += line + "\n";
    } catch (const std::exception& e) {
      ++failures;
      std::cerr << "error: " << e.what() << "\n";
    }
  }
  write_text(fs::path(opt.out_dir) / "ablation.csv", table);
  std::cout << table;
  return failures == 0 ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Noise-aware texture-preserving retinex low-light enhancement"};
  app.require_subcommand(1);
  app.set_version_flag("--version", natle_version());

  EnhanceOptions enhance;
  CLI::App* cmd_enhance = app.add_subcommand("enhance", "enhance a batch of images");
  add_param_flags(cmd_enhance, enhance.params);
  cmd_enhance->add_option("inputs", enhance.inputs, "input images (PNG or JPEG)");
  cmd_enhance->add_option("--out-dir", enhance.out_dir, "output directory")->capture_default_str();
  cmd_enhance->add_flag("--trace", enhance.trace, "also write the intermediate stage panels");
  cmd_enhance->add_option("--jobs", enhance.jobs, "parallel workers")->check(CLI::Range(1u, 256u));

  EvalOptions eval;
  CLI::App* cmd_eval = app.add_subcommand("eval", "score enhanced images against references");
  cmd_eval->add_option("outputs_dir", eval.outputs_dir, "directory of enhanced images")->required();
  cmd_eval->add_option("refs_dir", eval.refs_dir, "directory of reference images")->required();
  cmd_eval->add_option("--report", eval.report, "CSV output path")->capture_default_str();

  AblateOptions ablate;
  CLI::App* cmd_ablate = app.add_subcommand("ablate", "compare alpha=0, beta=0, no-denoise and full settings");
  add_param_flags(cmd_ablate, ablate.params);
  cmd_ablate->add_option("inputs", ablate.inputs, "input images (PNG or JPEG)");
  cmd_ablate->add_option("--out-dir", ablate.out_dir, "output directory")->capture_default_str();
  cmd_ablate->add_option("--ref-dir", ablate.ref_dir, "reference images with matching file names");
  cmd_ablate->add_option("--sigma-radius", ablate.sigma_radius, "window radius of the local noise estimate")
      ->capture_default_str()
      ->check(CLI::Range(1, 64));

  CLI11_PARSE(app, argc, argv);

  try {
    if (*cmd_enhance) return run_enhance(enhance);
    if (*cmd_eval) return run_eval(eval);
    if (*cmd_ablate) return run_ablate(ablate);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 1;
}
