#include "pairstate/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <thread>

#include "pairstate/count_file.hpp"
#include "pairstate/errors.hpp"
#include "pairstate/multipair.hpp"
#include "pairstate/tomography.hpp"
#include "pairstate/version.hpp"

namespace pairstate {
namespace fs = std::filesystem;
namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return splitmix64(splitmix64(seed) ^ index);
}

bool as_number(const std::string& s, double& out) {
  const char* end = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(s.data(), end, out);
  return !s.empty() && ec == std::errc() && ptr == end;
}

std::string sibling(const fs::path& base, const std::string& tag) {
  const std::string ext = base.has_extension() ? base.extension().string() : ".csv";
  return (base.parent_path() / (base.stem().string() + "." + tag + ext)).string();
}

void ensure_parent(const fs::path& file) {
  if (file.has_parent_path()) fs::create_directories(file.parent_path());
}

AnalysisRecord analyze_file(const std::string& path, const RunConfig& config,
                            const ProjectionSet& set) {
  const CountFile file = read_count_file(path, set);
  const CountVector counts = config.total_scale
                                 ? CountVector(file.counts, *config.total_scale)
                                 : CountVector::with_computational_scale(file.counts, set);
  const MleResult fit = mle_reconstruct_detailed(counts, set);

  AnalysisRecord record;
  record.source = path;
  record.label = file.label.empty() ? fs::path(path).stem().string() : file.label;
  record.state = fit.state;
  record.metrics = compute_metrics(fit.state);
  record.min_eigenvalue = validate(fit.state).min_eigenvalue;
  record.evaluations = fit.evaluations;
  const Vector4c hr = make_projector("HR", config.convention).ket;
  record.hr_probability = hr.dot(fit.state.entries() * hr).real();
  return record;
}

}  // namespace

bool label_less(const std::string& a, const std::string& b) {
  double x = 0.0;
  double y = 0.0;
  if (as_number(a, x) && as_number(b, y) && x != y) return x < y;
  return a < b;
}

std::vector<std::string> provenance(const RunConfig& config) {
  return {std::string("pairstate ") + kVersion, "config_hash=" + config_hash(config),
          "seed=" + std::to_string(config.seed), "mode=" + std::string(mode_name(config.mode))};
}

TomoOutcome run_tomo(const RunConfig& config) {
  require_complete(config);
  const ProjectionSet set = canonical_projection_set(config.convention);

  struct Slot {
    std::optional<AnalysisRecord> record;
    std::optional<FileFailure> failure;
  };
  std::vector<Slot> slots(config.inputs.size());

  auto process = [&](std::size_t i) {
    const std::string& path = config.inputs[i];
    auto fail = [&](FailureKind kind, const std::exception& e) {
      slots[i].failure = FileFailure{path, kind, e.what()};
    };
    try {
      slots[i].record = analyze_file(path, config, set);
    } catch (const ParseError& e) {
      fail(FailureKind::kParse, e);
    } catch (const DegenerateInputError& e) {
      fail(FailureKind::kDegenerate, e);
    } catch (const NonConvergenceError& e) {
      fail(FailureKind::kNonConvergence, e);
    } catch (const ValidationError& e) {
      fail(FailureKind::kValidation, e);
    } catch (const DomainError& e) {
      fail(FailureKind::kParse, e);
    } catch (const std::exception& e) {
      fail(FailureKind::kIo, e);
    }
  };

  unsigned workers = config.threads != 0 ? config.threads
                                         : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, slots.size()));
  if (workers <= 1) {
    for (std::size_t i = 0; i < slots.size(); ++i) process(i);
  } else {
    std::vector<std::jthread> pool;
    for (unsigned w = 0; w < workers; ++w) {
      pool.emplace_back([&, w] {
        for (std::size_t i = w; i < slots.size(); i += workers) process(i);
      });
    }
  }

  TomoOutcome outcome;
  for (auto& s : slots) {
    if (s.record) outcome.records.push_back(std::move(*s.record));
    if (s.failure) outcome.failures.push_back(std::move(*s.failure));
  }
  std::stable_sort(outcome.records.begin(), outcome.records.end(),
                   [](const AnalysisRecord& a, const AnalysisRecord& b) {
                     return label_less(a.label, b.label);
                   });

  if (!config.output.empty()) {
    const fs::path dir(config.output);
    fs::create_directories(dir);
    Table summary;
    summary.comments = provenance(config);
    summary.header = {"label", "source", "fidelity", "tangle", "linear_entropy", "purity",
                      "werner_g", "min_eigenvalue", "evaluations", "hr_probability"};
    for (const auto& r : outcome.records) {
      const std::string stem = fs::path(r.source).stem().string();
      std::ofstream report(dir / (stem + ".report.txt"), std::ios::binary);
      if (!report) throw Error("cannot write report for " + r.source);
      for (const auto& c : provenance(config)) report << "# " << c << '\n';
      report << "# label=" << r.label << '\n' << "# source=" << r.source << '\n';
      write_density_matrix(report, r.state);
      report << format_metrics(r.metrics) << '\n';
      report << "# purity=" << format_number(r.metrics.purity)
             << ", min_eigenvalue=" << format_number(r.min_eigenvalue)
             << ", evaluations=" << r.evaluations
             << ", hr_probability=" << format_number(r.hr_probability) << '\n';

      summary.rows.push_back({r.label, r.source, format_number(r.metrics.fidelity),
                              format_number(r.metrics.tangle),
                              format_number(r.metrics.linear_entropy),
                              format_number(r.metrics.purity), format_number(r.metrics.werner_g),
                              format_number(r.min_eigenvalue), std::to_string(r.evaluations),
                              format_number(r.hr_probability)});
    }
    write_table_file((dir / "tomo_summary.csv").string(), summary);
  }
  return outcome;
}

std::vector<std::string> run_simulate(const RunConfig& config) {
  require_complete(config);
  const ProjectionSet set = canonical_projection_set(config.convention);

  struct Point {
    double mu;
    std::string label;
  };
  std::vector<Point> points;
  if (config.power_grid.empty()) {
    points.push_back({config.source.mu, format_number(config.source.mu)});
  } else {
    for (double power : config.power_grid) {
      points.push_back({config.calibration.mu_at(power), format_number(power)});
    }
  }

  const fs::path dir(config.output);
  fs::create_directories(dir);
  std::vector<std::string> written;
  for (std::size_t i = 0; i < points.size(); ++i) {
    SourceParams params = config.source;
    params.mu = points[i].mu;

    Probabilities probabilities;
    double g = 0.0;
    if (params.mu == 0.0) {
      // mu -> 0 limit of the model: no accidental pairs, the ideal state.
      probabilities = expected_probabilities(ideal_bell(), set);
    } else {
      const RateTriple rates = rates_primed(params);
      g = effective_g(rates);
      probabilities = projection_probabilities_16(rates, set);
    }
    const CountVector counts =
        sample_counts(probabilities, config.scale, derive_seed(config.seed, i));

    CountFile file;
    file.counts = counts.counts();
    file.label = points[i].label;
    file.comments = provenance(config);
    file.comments.push_back("label=" + points[i].label);
    file.comments.push_back("mu=" + format_number(params.mu) + ", eta=" +
                            format_number(params.eta) + ", alpha=" +
                            format_number(params.alpha) + ", g=" + format_number(g) +
                            ", scale=" + format_number(config.scale));
    char name[32];
    std::snprintf(name, sizeof name, "counts_%03zu.csv", i);
    const std::string path = (dir / name).string();
    write_count_file(path, file, set);
    written.push_back(path);
  }
  return written;
}

Table werner_curve_table() {
  std::vector<double> grid;
  for (int i = 0; i <= 100; ++i) grid.push_back(i / 100.0);
  grid.push_back(2.0 / 3.0);
  std::sort(grid.begin(), grid.end());

  Table t;
  t.header = {"g", "linear_entropy", "tangle", "fidelity"};
  const PureState target = ideal_bell_state();
  for (double g : grid) {
    const DensityMatrix rho = werner(g);
    t.rows.push_back({format_number(g), format_number(linear_entropy(rho)),
                      format_number(tangle(rho)), format_number(fidelity(rho, target))});
  }
  return t;
}

SweepOutcome run_sweep(const RunConfig& config) {
  require_complete(config);
  std::vector<double> etas = config.eta_list.empty() ? std::vector<double>{config.source.eta}
                                                      : config.eta_list;
  std::sort(etas.begin(), etas.end());
  std::vector<double> powers = config.power_grid;
  std::sort(powers.begin(), powers.end());

  SweepOutcome out;
  const PureState target = ideal_bell_state();
  for (double eta : etas) {
    const KernelTable table(config.source.alpha, eta, config.source.n_max);
    for (double power : powers) {
      SweepRow row;
      row.power = power;
      row.mu = config.calibration.mu_at(power);
      row.eta = eta;
      row.alpha = config.source.alpha;
      const RateTriple rates = table.rates(row.mu);
      row.r_hh = rates.r_hh;
      row.r_hv = rates.r_hv;
      row.r_hr = rates.r_hr;
      row.g = effective_g(rates);
      const DensityMatrix rho = werner(row.g);
      row.tangle = tangle(rho);
      row.linear_entropy = linear_entropy(rho);
      row.fidelity = fidelity(rho, target);
      out.rows.push_back(row);
    }
  }

  const auto comments = provenance(config);
  out.sweep.comments = comments;
  out.sweep.comments.push_back("power_unit=" + config.calibration.power_unit +
                               ", pairs_per_power=" +
                               format_number(config.calibration.pairs_per_power) +
                               ", n_max=" + std::to_string(config.source.n_max));
  out.sweep.header = {"power", "mu",  "eta",    "alpha",          "r_hh",    "r_hv",
                      "r_hr",  "g",   "tangle", "linear_entropy", "fidelity"};
  out.fidelity.comments = comments;
  out.fidelity.header = {"eta",      "power", "mu",           "fidelity",
                         "ideal",    "separable_limit", "totally_mixed"};
  for (const auto& r : out.rows) {
    out.sweep.rows.push_back({format_number(r.power), format_number(r.mu), format_number(r.eta),
                              format_number(r.alpha), format_number(r.r_hh),
                              format_number(r.r_hv), format_number(r.r_hr), format_number(r.g),
                              format_number(r.tangle), format_number(r.linear_entropy),
                              format_number(r.fidelity)});
    out.fidelity.rows.push_back({format_number(r.eta), format_number(r.power),
                                 format_number(r.mu), format_number(r.fidelity), "1", "0.5",
                                 "0.25"});
  }
  out.werner_curve = werner_curve_table();
  out.werner_curve.comments = comments;

  if (!config.output.empty()) {
    const fs::path base(config.output);
    ensure_parent(base);
    const std::string curve_path = sibling(base, "werner_curve");
    const std::string fidelity_path = sibling(base, "fidelity");
    write_table_file(base.string(), out.sweep);
    write_table_file(curve_path, out.werner_curve);
    write_table_file(fidelity_path, out.fidelity);
    out.written = {base.string(), curve_path, fidelity_path};
  }
  return out;
}

StateMetrics run_metrics(const RunConfig& config) {
  require_complete(config);
  const DensityMatrix rho = read_density_matrix_file(config.inputs.front());
  require_valid(rho);
  return compute_metrics(rho);
}

}  // namespace pairstate
