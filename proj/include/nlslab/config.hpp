#pragma once

// Flat key = value configuration with dotted keys, e.g.
//
//   mode = nonlinear
//   grid.r0 = 1.0
//   init.kind = gaussian
//   report.t0_list = 10, 20, 40, 80
//
// '#' starts a comment.  Unknown keys and malformed values raise
// ConfigError naming the key and line.

#include "nlslab/evolve.hpp"

#include <map>
#include <stdexcept>
#include <string>

namespace nlslab {

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

/// Parsed file: key -> (value, line number).
std::map<std::string, std::pair<std::string, int>> parse_config_text(
    const std::string& text);

std::map<std::string, std::pair<std::string, int>> parse_config_file(
    const std::string& path);

/// Applies the parsed keys onto a default RunConfig and validates it.
RunConfig config_from_text(const std::string& text);
RunConfig config_from_file(const std::string& path);

/// Serializes the full config (all keys, current values).
std::string config_to_text(const RunConfig& cfg);

}  // namespace nlslab
