#pragma once

#include <string>
#include <string_view>
#include <vector>

#include "pipeline.hpp"

namespace natle {

/// Flat key=value names for every NatleParams field. Keys match the CLI
/// flags without the leading dashes; `denoise` takes true/false.
const std::vector<std::string>& param_keys();

void set_param(NatleParams& p, std::string_view key, std::string_view value);
std::string get_param(const NatleParams& p, std::string_view key);

/// One `key=value` line per field, doubles printed with 17 significant
/// digits so that reading the dump back reproduces the parameters exactly.
std::string dump_config(const NatleParams& p);

/// Applies `key=value` lines; blank lines and `#` comments are ignored.
void apply_config(NatleParams& p, std::string_view text);

}  // namespace natle
