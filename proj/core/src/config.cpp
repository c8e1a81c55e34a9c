#include "pairstate/config.hpp"

#include <charconv>
#include <cstdio>
#include <fstream>
#include <sstream>

#include "pairstate/errors.hpp"
#include "pairstate/table.hpp"

namespace pairstate {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r\n");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r\n");
  return s.substr(first, last - first + 1);
}

double to_double(std::string_view key, std::string_view value) {
  try {
    return parse_number(trim(value));
  } catch (const DomainError&) {
    throw ConfigurationError("setting " + std::string(key) + " expects a number, got '" +
                             std::string(value) + "'");
  }
}

std::int64_t to_integer(std::string_view key, std::string_view value) {
  value = trim(value);
  std::int64_t out = 0;
  auto [ptr, ec] = std::from_chars(value.data(), value.data() + value.size(), out);
  if (value.empty() || ec != std::errc() || ptr != value.data() + value.size()) {
    throw ConfigurationError("setting " + std::string(key) + " expects an integer, got '" +
                             std::string(value) + "'");
  }
  return out;
}

std::vector<double> to_list(std::string_view key, std::string_view value) {
  std::vector<double> out;
  value = trim(value);
  if (value.empty()) return out;
  std::size_t start = 0;
  while (true) {
    const auto pos = value.find(',', start);
    out.push_back(to_double(key, value.substr(start, pos - start)));
    if (pos == std::string_view::npos) break;
    start = pos + 1;
  }
  return out;
}

std::string join(const std::vector<double>& values) {
  std::string out;
  for (std::size_t i = 0; i < values.size(); ++i) {
    if (i > 0) out += ',';
    out += format_number(values[i]);
  }
  return out;
}

}  // namespace

std::string_view mode_name(Mode mode) {
  switch (mode) {
    case Mode::kTomo: return "tomo";
    case Mode::kSimulate: return "simulate";
    case Mode::kSweep: return "sweep";
    case Mode::kMetrics: return "metrics";
  }
  return "unknown";
}

void apply_setting(RunConfig& config, std::string_view key, std::string_view value) {
  key = trim(key);
  value = trim(value);
  if (key == "seed") {
    const auto v = to_integer(key, value);
    if (v < 0) throw ConfigurationError("seed must be non-negative");
    config.seed = static_cast<std::uint64_t>(v);
  } else if (key == "source.mu") {
    config.source.mu = to_double(key, value);
  } else if (key == "source.alpha") {
    config.source.alpha = to_double(key, value);
  } else if (key == "source.eta") {
    config.source.eta = to_double(key, value);
  } else if (key == "source.n_max") {
    config.source.n_max = static_cast<int>(to_integer(key, value));
  } else if (key == "calibration.pairs_per_power") {
    config.calibration.pairs_per_power = to_double(key, value);
  } else if (key == "calibration.power_unit") {
    config.calibration.power_unit = std::string(value);
  } else if (key == "sweep.eta_list") {
    config.eta_list = to_list(key, value);
  } else if (key == "sweep.power_grid") {
    config.power_grid = to_list(key, value);
  } else if (key == "simulate.scale") {
    config.scale = to_double(key, value);
  } else if (key == "tomo.total_scale") {
    config.total_scale = to_double(key, value);
  } else if (key == "tomography.circular_convention") {
    if (value == "minus_i") {
      config.convention = CircularConvention::kMinusI;
    } else if (value == "plus_i") {
      config.convention = CircularConvention::kPlusI;
    } else {
      throw ConfigurationError("tomography.circular_convention must be minus_i or plus_i");
    }
  } else if (key == "run.threads") {
    const auto v = to_integer(key, value);
    if (v < 0) throw ConfigurationError("run.threads must be non-negative");
    config.threads = static_cast<unsigned>(v);
  } else {
    throw ConfigurationError("unknown setting '" + std::string(key) + "'");
  }
}

RunConfig parse_config(std::istream& in, const std::string& source, RunConfig base) {
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string_view t = trim(line);
    if (t.empty() || t.front() == '#') continue;
    const auto eq = t.find('=');
    if (eq == std::string_view::npos) {
      throw ParseError(source, line_no, "expected 'key = value'");
    }
    try {
      apply_setting(base, t.substr(0, eq), t.substr(eq + 1));
    } catch (const ConfigurationError& e) {
      throw ParseError(source, line_no, e.what());
    }
  }
  return base;
}

RunConfig load_config_file(const std::string& path, RunConfig base) {
  std::ifstream in(path);
  if (!in) throw ParseError(path, 0, "cannot open file");
  return parse_config(in, path, std::move(base));
}

void require_complete(const RunConfig& config) {
  auto positive_list = [](const std::vector<double>& values, const char* name) {
    for (double v : values) {
      if (!(v > 0.0)) throw ConfigurationError(std::string(name) + " entries must be positive");
    }
  };
  switch (config.mode) {
    case Mode::kTomo:
      if (config.inputs.empty()) throw ConfigurationError("tomo needs at least one count file");
      if (config.total_scale && !(*config.total_scale > 0.0)) {
        throw ConfigurationError("tomo.total_scale must be positive");
      }
      break;
    case Mode::kSimulate:
      if (config.output.empty()) throw ConfigurationError("simulate needs an output directory");
      if (!(config.scale > 0.0)) throw ConfigurationError("simulate.scale must be positive");
      positive_list(config.power_grid, "sweep.power_grid");
      if (!(config.calibration.pairs_per_power > 0.0)) {
        throw ConfigurationError("calibration.pairs_per_power must be positive");
      }
      break;
    case Mode::kSweep:
      if (config.output.empty()) throw ConfigurationError("sweep needs an output file");
      if (config.power_grid.empty()) throw ConfigurationError("sweep needs sweep.power_grid");
      positive_list(config.power_grid, "sweep.power_grid");
      for (double eta : config.eta_list) {
        if (!(eta >= 0.0 && eta <= 1.0)) {
          throw ConfigurationError("sweep.eta_list entries must lie in [0, 1]");
        }
      }
      if (!(config.calibration.pairs_per_power > 0.0)) {
        throw ConfigurationError("calibration.pairs_per_power must be positive");
      }
      break;
    case Mode::kMetrics:
      if (config.inputs.size() != 1) throw ConfigurationError("metrics needs exactly one matrix file");
      break;
  }
  if (config.mode == Mode::kSimulate || config.mode == Mode::kSweep) {
    try {
      config.source.validate();
    } catch (const DomainError& e) {
      throw ConfigurationError(e.what());
    }
  }
}

std::string canonical_config_text(const RunConfig& config) {
  std::ostringstream out;
  out << "calibration.pairs_per_power=" << format_number(config.calibration.pairs_per_power) << '\n'
      << "calibration.power_unit=" << config.calibration.power_unit << '\n'
      << "mode=" << mode_name(config.mode) << '\n'
      << "seed=" << config.seed << '\n'
      << "simulate.scale=" << format_number(config.scale) << '\n'
      << "source.alpha=" << format_number(config.source.alpha) << '\n'
      << "source.eta=" << format_number(config.source.eta) << '\n'
      << "source.mu=" << format_number(config.source.mu) << '\n'
      << "source.n_max=" << config.source.n_max << '\n'
      << "sweep.eta_list=" << join(config.eta_list) << '\n'
      << "sweep.power_grid=" << join(config.power_grid) << '\n'
      << "tomo.total_scale="
      << (config.total_scale ? format_number(*config.total_scale) : std::string("auto")) << '\n'
      << "tomography.circular_convention="
      << (config.convention == CircularConvention::kMinusI ? "minus_i" : "plus_i") << '\n';
  return out.str();
}

std::string config_hash(const RunConfig& config) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : canonical_config_text(config)) {
    h ^= c;
    h *= 1099511628211ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace pairstate
