#pragma once

// Run configuration for the batch pipeline. Config files are flat
// "section.key = value" lines with '#' comments, e.g.
//
//   seed = 7
//   source.alpha = 0.01
//   source.eta = 0.03
//   sweep.eta_list = 0.001, 0.03, 0.20, 1.00
//   sweep.power_grid = 1, 2, 5, 10, 20, 50
//   calibration.pairs_per_power = 0.02
//
// Command-line overrides use the same keys.

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "pairstate/multipair.hpp"
#include "pairstate/tomography.hpp"

namespace pairstate {

enum class Mode { kTomo, kSimulate, kSweep, kMetrics };

std::string_view mode_name(Mode mode);

struct RunConfig {
  Mode mode = Mode::kMetrics;
  std::vector<std::string> inputs;
  std::string output;
  std::uint64_t seed = 0;
  SourceParams source{0.0, 0.01, 0.03, 15};
  PowerCalibration calibration{};
  std::vector<double> eta_list;
  std::vector<double> power_grid;
  double scale = 1e6;                 // simulate.scale
  std::optional<double> total_scale;  // tomo.total_scale
  CircularConvention convention = CircularConvention::kMinusI;
  unsigned threads = 0;               // 0 = hardware concurrency
};

// Applies one "key = value" setting. Throws ConfigurationError for unknown keys
// or malformed values.
void apply_setting(RunConfig& config, std::string_view key, std::string_view value);

// Parses "key=value" text on top of `base`. Errors carry the source and row.
RunConfig parse_config(std::istream& in, const std::string& source, RunConfig base = {});
RunConfig load_config_file(const std::string& path, RunConfig base = {});

// Checks mode-specific required fields; throws ConfigurationError.
void require_complete(const RunConfig& config);

// Sorted key=value listing of every setting that affects results.
std::string canonical_config_text(const RunConfig& config);

// 64-bit FNV-1a of canonical_config_text(), as 16 hex digits.
std::string config_hash(const RunConfig& config);

}  // namespace pairstate
