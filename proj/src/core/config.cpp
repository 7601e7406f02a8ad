#include "config.hpp"

#include <charconv>
#include <cstdio>
#include <functional>
#include <map>

#include "errors.hpp"

namespace natle {
namespace {

std::string trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return std::string(s.substr(first, last - first + 1));
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

double parse_double(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used == s.size()) return v;
  } catch (const std::exception&) {
  }
  throw Error(ErrorCode::invalid_argument,
              "invalid number '" + s + "' for " + std::string(key));
}

int parse_int(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  int v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || s.empty())
    throw Error(ErrorCode::invalid_argument, "invalid integer '" + s + "' for " + std::string(key));
  return v;
}

bool parse_bool(std::string_view key, std::string_view text) {
  const std::string s = trim(text);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw Error(ErrorCode::invalid_argument, "invalid boolean '" + s + "' for " + std::string(key));
}

struct Field {
  std::function<void(NatleParams&, std::string_view key, std::string_view value)> set;
  std::function<std::string(const NatleParams&)> get;
};

template <typename Member>
Field double_field(Member member) {
  return {[member](NatleParams& p, std::string_view k, std::string_view v) {
            std::invoke(member, p) = parse_double(k, v);
          },
          [member](const NatleParams& p) {
            NatleParams copy = p;
            return format_double(std::invoke(member, copy));
          }};
}

template <typename Member>
Field int_field(Member member) {
  return {[member](NatleParams& p, std::string_view k, std::string_view v) {
            std::invoke(member, p) = parse_int(k, v);
          },
          [member](const NatleParams& p) {
            NatleParams copy = p;
            return std::to_string(std::invoke(member, copy));
          }};
}

// Ordered so that dump_config output is stable.
const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      {"alpha", double_field([](NatleParams& p) -> double& { return p.illumination.alpha; })},
      {"eps", double_field([](NatleParams& p) -> double& { return p.illumination.eps; })},
      {"beta", double_field([](NatleParams& p) -> double& { return p.reflectance.beta; })},
      {"lambda", double_field([](NatleParams& p) -> double& { return p.reflectance.lambda; })},
      {"eps-g", double_field([](NatleParams& p) -> double& { return p.reflectance.eps_g; })},
      {"eps-div", double_field([](NatleParams& p) -> double& { return p.reflectance.epsilon_div; })},
      {"ratio-cap", double_field([](NatleParams& p) -> double& { return p.reflectance.ratio_cap; })},
      {"gamma", double_field([](NatleParams& p) -> double& { return p.gamma; })},
      {"denoise",
       {[](NatleParams& p, std::string_view k, std::string_view v) { p.denoise_enabled = parse_bool(k, v); },
        [](const NatleParams& p) { return std::string(p.denoise_enabled ? "true" : "false"); }}},
      {"median-radius", int_field([](NatleParams& p) -> int& { return p.denoise.median_radius; })},
      {"abf-spatial-sigma", double_field([](NatleParams& p) -> double& { return p.denoise.abf_spatial_sigma; })},
      {"abf-range-min", double_field([](NatleParams& p) -> double& { return p.denoise.abf_range_sigma_min; })},
      {"abf-range-max", double_field([](NatleParams& p) -> double& { return p.denoise.abf_range_sigma_max; })},
      {"abf-window-radius", int_field([](NatleParams& p) -> int& { return p.denoise.abf_window_radius; })},
      {"noise-window-radius", int_field([](NatleParams& p) -> int& { return p.denoise.noise_window_radius; })},
      {"tol", double_field([](NatleParams& p) -> double& { return p.solver.rel_tolerance; })},
      {"max-iters", int_field([](NatleParams& p) -> int& { return p.solver.max_iterations; })},
      {"preconditioner",
       {[](NatleParams& p, std::string_view k, std::string_view v) {
          const std::string s = trim(v);
          if (s == "jacobi")
            p.solver.preconditioner = Preconditioner::jacobi;
          else if (s == "none")
            p.solver.preconditioner = Preconditioner::none;
          else
            throw Error(ErrorCode::invalid_argument, "invalid value '" + s + "' for " + std::string(k));
        },
        [](const NatleParams& p) {
          return std::string(p.solver.preconditioner == Preconditioner::jacobi ? "jacobi" : "none");
        }}},
  };
  return table;
}

const Field& find_field(std::string_view key) {
  for (const auto& [name, field] : fields())
    if (name == key) return field;
  throw Error(ErrorCode::invalid_argument, "unknown parameter '" + std::string(key) + "'");
}

}  // namespace

const std::vector<std::string>& param_keys() {
  static const std::vector<std::string> keys = [] {
    std::vector<std::string> out;
    for (const auto& entry : fields()) out.push_back(entry.first);
    return out;
  }();
  return keys;
}

void set_param(NatleParams& p, std::string_view key, std::string_view value) {
  find_field(key).set(p, key, value);
}

std::string get_param(const NatleParams& p, std::string_view key) {
  return find_field(key).get(p);
}

std::string dump_config(const NatleParams& p) {
  std::string out;
  for (const auto& [name, field] : fields()) out += name + "=" + field.get(p) + "\n";
  return out;
}

void apply_config(NatleParams& p, std::string_view text) {
  std::size_t line_no = 0;
  while (!text.empty()) {
    const auto nl = text.find('\n');
    const std::string_view line = text.substr(0, nl);
    text = nl == std::string_view::npos ? std::string_view{} : text.substr(nl + 1);
    ++line_no;
    const std::string body = trim(line.substr(0, line.find('#')));
    if (body.empty()) continue;
    const auto eq = body.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::invalid_argument,
                  "config line " + std::to_string(line_no) + " is not key=value");
    set_param(p, trim(std::string_view(body).substr(0, eq)),
              std::string_view(body).substr(eq + 1));
  }
}

}  // namespace natle
