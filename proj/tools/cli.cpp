#include "cli.hpp"

#include <CLI11.hpp>

#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "pairstate/config.hpp"
#include "pairstate/errors.hpp"
#include "pairstate/pipeline.hpp"
#include "pairstate/tomography.hpp"
#include "pairstate/version.hpp"

namespace pairstate::cli {
namespace {

struct Overrides {
  std::string config_path;
  std::vector<std::string> settings;
  std::optional<std::uint64_t> seed;
  std::optional<double> mu, alpha, eta, scale, total_scale;
  std::optional<int> n_max;
};

void add_common(CLI::App* cmd, Overrides& o) {
  cmd->add_option("--config", o.config_path, "key=value configuration file");
  cmd->add_option("--set", o.settings, "override a config key (key=value), repeatable");
  cmd->add_option("--seed", o.seed, "seed");
  cmd->add_option("--mu", o.mu, "source.mu");
  cmd->add_option("--alpha", o.alpha, "source.alpha");
  cmd->add_option("--eta", o.eta, "source.eta");
  cmd->add_option("--n-max", o.n_max, "source.n_max");
  cmd->add_option("--scale", o.scale, "simulate.scale");
  cmd->add_option("--total-scale", o.total_scale, "tomo.total_scale");
}

RunConfig build_config(Mode mode, const Overrides& o) {
  RunConfig config;
  if (!o.config_path.empty()) config = load_config_file(o.config_path);
  config.mode = mode;
  for (const auto& s : o.settings) {
    const auto eq = s.find('=');
    if (eq == std::string::npos) throw ConfigurationError("--set expects key=value, got '" + s + "'");
    apply_setting(config, s.substr(0, eq), s.substr(eq + 1));
  }
  if (o.seed) config.seed = *o.seed;
  if (o.mu) config.source.mu = *o.mu;
  if (o.alpha) config.source.alpha = *o.alpha;
  if (o.eta) config.source.eta = *o.eta;
  if (o.n_max) config.source.n_max = *o.n_max;
  if (o.scale) config.scale = *o.scale;
  if (o.total_scale) config.total_scale = *o.total_scale;
  return config;
}

int exit_code_for(FailureKind kind) {
  switch (kind) {
    case FailureKind::kParse: return kExitParse;
    case FailureKind::kValidation: return kExitValidation;
    case FailureKind::kNonConvergence: return kExitNonConvergence;
    case FailureKind::kDegenerate: return kExitDegenerate;
    case FailureKind::kIo: return kExitIo;
  }
  return kExitIo;
}

std::string_view kind_name(FailureKind kind) {
  switch (kind) {
    case FailureKind::kParse: return "parse error";
    case FailureKind::kValidation: return "validation error";
    case FailureKind::kNonConvergence: return "optimizer did not converge";
    case FailureKind::kDegenerate: return "degenerate input";
    case FailureKind::kIo: return "i/o error";
  }
  return "error";
}

}  // namespace

int run(int argc, char** argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Two-photon polarization state toolkit: tomography, multi-pair model, sweeps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(kVersion));

  Overrides tomo_o, sim_o, sweep_o, metrics_o;
  std::vector<std::string> tomo_files;
  std::string tomo_out, sim_out, sweep_out, metrics_file;

  auto* tomo = app.add_subcommand("tomo", "reconstruct density matrices from count files");
  tomo->add_option("files", tomo_files, "16-row count files")->required();
  tomo->add_option("--out", tomo_out, "directory for reports and tomo_summary.csv");
  add_common(tomo, tomo_o);

  auto* simulate = app.add_subcommand("simulate", "write synthetic count files from the model");
  simulate->add_option("--out", sim_out, "output directory")->required();
  add_common(simulate, sim_o);

  auto* sweep = app.add_subcommand("sweep", "g, tangle, entropy and fidelity versus power");
  sweep->add_option("--out", sweep_out, "sweep table path")->required();
  add_common(sweep, sweep_o);

  auto* metrics = app.add_subcommand("metrics", "metrics of a stored density matrix");
  metrics->add_option("file", metrics_file, "density matrix file")->required();
  add_common(metrics, metrics_o);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*tomo) {
      RunConfig config = build_config(Mode::kTomo, tomo_o);
      config.inputs = tomo_files;
      config.output = tomo_out;
      const TomoOutcome outcome = run_tomo(config);
      for (const auto& r : outcome.records) {
        out << r.label << ": " << format_metrics(r.metrics) << '\n';
      }
      for (const auto& f : outcome.failures) {
        err << f.path << ": " << kind_name(f.kind) << ": " << f.message << '\n';
      }
      return outcome.failures.empty() ? kExitOk : exit_code_for(outcome.failures.front().kind);
    }
    if (*simulate) {
      RunConfig config = build_config(Mode::kSimulate, sim_o);
      config.output = sim_out;
      for (const auto& path : run_simulate(config)) out << path << '\n';
      return kExitOk;
    }
    if (*sweep) {
      RunConfig config = build_config(Mode::kSweep, sweep_o);
      config.output = sweep_out;
      const SweepOutcome outcome = run_sweep(config);
      for (const auto& path : outcome.written) out << path << '\n';
      return kExitOk;
    }
    if (*metrics) {
      RunConfig config = build_config(Mode::kMetrics, metrics_o);
      config.inputs = {metrics_file};
      out << format_metrics(run_metrics(config)) << '\n';
      return kExitOk;
    }
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
    return kExitParse;
  } catch (const ConfigurationError& e) {
    err << "configuration error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const ValidationError& e) {
    err << "validation error: " << e.what() << '\n';
    return kExitValidation;
  } catch (const NonConvergenceError& e) {
    err << "optimizer did not converge: " << e.what() << '\n';
    return kExitNonConvergence;
  } catch (const DegenerateInputError& e) {
    err << "degenerate input: " << e.what() << '\n';
    return kExitDegenerate;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitIo;
  }
  return kExitUsage;
}

}  // namespace pairstate::cli
