// Copyright 2026 The Precession Authors
// SPDX-License-Identifier: Apache-2.0

// Command-line frontend: every library computation behind reproducible,
// file-exportable subcommands. Exit codes: 0 success, 2 usage error,
// 3 numerical non-convergence, 4 internal consistency failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "precession/classical_protocol.hpp"
#include "precession/entanglement.hpp"
#include "precession/measurement_sim.hpp"
#include "precession/oscillator_scores.hpp"
#include "precession/spin_scores.hpp"
#include "precession/wigner.hpp"

namespace {

using nlohmann::ordered_json;
using namespace precession;

constexpr int kSchemaVersion = 1;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitNoConvergence = 3;
constexpr int kExitInconsistent = 4;

/// Relative output paths land in PRECESSION_OUTPUT_DIR when it is set.
std::string resolve_output_path(const std::string& path) {
  if (path.empty() || path.front() == '/') return path;
  const char* dir = std::getenv("PRECESSION_OUTPUT_DIR");
  if (dir == nullptr || *dir == '\0') return path;
  std::string base(dir);
  if (base.back() != '/') base.push_back('/');
  return base + path;
}

void write_output(const std::string& path, const std::string& content) {
  if (path.empty()) {
    std::cout << content;
    return;
  }
  const std::string resolved = resolve_output_path(path);
  std::ofstream out(resolved, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open output file: " + resolved);
  out << content;
  if (!out) throw std::runtime_error("failed writing output file: " + resolved);
}

std::string csv_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

ordered_json report_to_json(const ScoreReport& r, bool with_state) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["K"] = r.K;
  j["dim"] = r.dim;
  j["score"] = r.score;
  j["method"] = method_name(r.method);
  j["classical_bound"] = r.classical_bound;
  j["gap"] = r.gap;
  j["max_block_residues"] = r.max_block_residues;
  j["degenerate"] = r.degenerate;
  if (r.convergence_overlap) {
    j["convergence_overlap"] = *r.convergence_overlap;
    j["converged"] = r.converged;
  }
  if (with_state && r.optimal_state) {
    std::vector<double> state(r.optimal_state->begin(), r.optimal_state->end());
    j["optimal_state"] = state;
  }
  return j;
}

int spin_two_x(double x, const char* what) {
  const double doubled = 2.0 * x;
  const double rounded = std::round(doubled);
  if (std::abs(doubled - rounded) > 1e-9 || rounded < 0.0)
    throw domain_error(std::string(what) + " must be a non-negative integer or half-integer");
  return static_cast<int>(rounded);
}

struct SweepOptions {
  int K = 3;
  std::string range;
  bool with_states = false;
  unsigned threads = 0;
  std::string output;
};

int run_sweep(const SweepOptions& opt) {
  int d_min = 0, d_max = 0;
  const auto colon = opt.range.find(':');
  try {
    if (colon == std::string::npos) {
      d_min = d_max = std::stoi(opt.range);
    } else {
      d_min = std::stoi(opt.range.substr(0, colon));
      d_max = std::stoi(opt.range.substr(colon + 1));
    }
  } catch (const std::exception&) {
    throw domain_error("sweep: --d expects MIN:MAX (e.g. 4:40)");
  }
  if (d_min < 1) throw domain_error("sweep: dimensions start at 1");

  const SweepResult swept = violation_sweep(opt.K, d_min, d_max, false, opt.threads);
  std::ostringstream out;
  out << "# schema_version=" << kSchemaVersion << "\n";
  out << "# subcommand=sweep K=" << opt.K << " d=" << d_min << ":" << d_max << "\n";
  if (!swept.reports.empty())
    out << "# mean_score=" << csv_number(swept.mean_score) << "\n";
  out << "K,d,score,classical_bound,gap,method\n";
  for (const auto& r : swept.reports)
    out << r.K << "," << r.dim << "," << csv_number(r.score) << ","
        << csv_number(r.classical_bound) << "," << csv_number(r.gap) << ","
        << method_name(r.method) << "\n";
  write_output(opt.output, out.str());
  return kExitOk;
}

struct ScoreSpinOptions {
  int K = 3;
  int dim = 4;
  std::string method = "numeric";
  bool with_state = false;
  std::string output;
};

int run_score_spin(const ScoreSpinOptions& opt) {
  ordered_json j;
  if (opt.method == "numeric") {
    j = report_to_json(score_numeric(opt.K, opt.dim), opt.with_state);
  } else if (opt.method == "closed-form") {
    j = report_to_json(score_closed_form(opt.K, opt.dim), opt.with_state);
  } else if (opt.method == "both") {
    const ScoreReport numeric = score_numeric(opt.K, opt.dim);
    const ScoreReport closed = score_closed_form(opt.K, opt.dim);
    const double difference = std::abs(numeric.score - closed.score);
    j = report_to_json(numeric, opt.with_state);
    j["closed_form_score"] = closed.score;
    j["method"] = "both";
    j["method_difference"] = difference;
    j["methods_agree"] = difference <= 1e-9;
    if (difference > 1e-9) {
      write_output(opt.output, j.dump(2) + "\n");
      std::cerr << "score: numeric and closed-form disagree by " << difference << "\n";
      return kExitInconsistent;
    }
  } else {
    throw domain_error("score spin: --method must be numeric, closed-form, or both");
  }
  write_output(opt.output, j.dump(2) + "\n");
  return kExitOk;
}

struct ScoreHoOptions {
  int K = 3;
  int n_max = 6000;
  double threshold = 0.99;
  bool scan_all = false;
  bool skip_convergence = false;
  bool with_state = false;
  std::string output;
};

int run_score_ho(const ScoreHoOptions& opt) {
  TruncationPolicy policy;
  policy.n_max = opt.n_max;
  policy.convergence_threshold = opt.threshold;
  policy.check_convergence = !opt.skip_convergence;
  policy.scan_all_residues = opt.scan_all;
  const ScoreReport report = score_truncated(opt.K, policy);
  ordered_json j = report_to_json(report, opt.with_state);
  j["n_max"] = opt.n_max;
  write_output(opt.output, j.dump(2) + "\n");
  if (policy.check_convergence && !report.converged) {
    std::cerr << "score ho: truncation not converged (overlap "
              << *report.convergence_overlap << " <= " << opt.threshold << ")\n";
    return kExitNoConvergence;
  }
  return kExitOk;
}

struct BoundsOptions {
  int K = 3;
  std::string output;
};

int run_bounds(const BoundsOptions& opt) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["K"] = opt.K;
  j["classical"] = classical_bound(opt.K);
  j["lower"] = lower_bound(opt.K);
  j["upper"] = upper_bound(opt.K);
  write_output(opt.output, j.dump(2) + "\n");
  return kExitOk;
}

struct ClassicalOptions {
  int K = 3;
  std::string density = "disc:1";
  long samples = 1000000;
  uint64_t seed = 0;
  bool with_bound_check = false;
  int resolution = 4096;
  std::string output;
};

int run_classical(const ClassicalOptions& opt) {
  const Density density = parse_density(opt.density);
  const MonteCarloResult mc = monte_carlo_score(density, opt.K, opt.samples, opt.seed);
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["K"] = opt.K;
  j["density"] = opt.density;
  j["estimate"] = mc.estimate;
  j["standard_error"] = mc.standard_error;
  j["rounds"] = mc.rounds;
  j["seed"] = mc.seed;
  j["classical_window"] = {0.5 * (1.0 - 1.0 / opt.K), 0.5 * (1.0 + 1.0 / opt.K)};
  if (opt.with_bound_check) {
    const BoundCheckReport bc = bound_check(density, opt.K, opt.resolution);
    j["bound_check"] = {{"integral", bc.integral},
                        {"lower", bc.lower},
                        {"upper", bc.upper},
                        {"resolution", bc.resolution}};
  }
  write_output(opt.output, j.dump(2) + "\n");
  return kExitOk;
}

struct SimulateOptions {
  int K = 3;
  int dim = 4;
  std::string state = "optimal";
  long rounds = 1000000;
  uint64_t seed = 0;
  std::string output;
};

QuantumState make_state(const SimulateOptions& opt) {
  if (opt.state == "optimal") return QuantumState::from_real(optimal_state(opt.K, opt.dim));
  if (opt.state.rfind("mz:", 0) == 0) {
    const SpinQuantum spin = SpinQuantum::from_dimension(opt.dim);
    const int two_m = spin_two_x(std::stod(opt.state.substr(3)), "mz");
    Eigen::VectorXcd c = Eigen::VectorXcd::Zero(opt.dim);
    c(spin.index_of_two_m(two_m)) = 1.0;
    return QuantumState(std::move(c));
  }
  throw domain_error("simulate: --state must be 'optimal' or 'mz:<m>'");
}

int run_simulate(const SimulateOptions& opt) {
  const QuantumState psi = make_state(opt);
  const double exact = exact_expectation(psi, opt.K);
  const MonteCarloResult mc = sample_rounds(psi, opt.K, opt.rounds, opt.seed);
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["K"] = opt.K;
  j["dim"] = opt.dim;
  j["state"] = opt.state;
  j["estimate"] = mc.estimate;
  j["standard_error"] = mc.standard_error;
  j["rounds"] = mc.rounds;
  j["seed"] = mc.seed;
  j["exact_expectation"] = exact;
  j["classical_bound"] = classical_bound(opt.K);
  j["gap_over_se"] =
      mc.standard_error > 0.0 ? (mc.estimate - classical_bound(opt.K)) / mc.standard_error : 0.0;
  write_output(opt.output, j.dump(2) + "\n");
  return kExitOk;
}

struct EntanglementOptions {
  int K = 3;
  double j1 = 0.5;
  double j2 = 1.0;
  bool ghz = false;
  std::string output;
};

int run_entanglement(const EntanglementOptions& opt) {
  ordered_json j;
  j["schema_version"] = kSchemaVersion;
  j["K"] = opt.K;
  if (opt.ghz) {
    const GhzReport report = ghz_check(opt.K);
    j["mode"] = "ghz";
    j["top_score"] = report.top_score;
    j["reference_score"] = report.reference_score;
    j["ghz_expectation"] = report.ghz_expectation;
    j["best_overlap"] = report.best_overlap;
    j["overlaps"] = report.overlaps;
    j["degenerate"] = report.degenerate;
  } else {
    const SpinQuantum j1(spin_two_x(opt.j1, "--j1")), j2(spin_two_x(opt.j2, "--j2"));
    const Eigen::MatrixXd coeffs = embed_optimal_state(j1, j2, opt.K);
    const SchmidtSpectrum schmidt = schmidt_spectrum(coeffs);
    j["mode"] = "schmidt";
    j["j1"] = opt.j1;
    j["j2"] = opt.j2;
    std::vector<double> sv(schmidt.singular_values.begin(), schmidt.singular_values.end());
    j["singular_values"] = sv;
    j["schmidt_rank"] = schmidt.rank;
    j["entanglement_entropy"] = schmidt.entropy;
  }
  write_output(opt.output, j.dump(2) + "\n");
  return kExitOk;
}

struct WignerOptions {
  int K = 3;
  int n_max = 300;
  double extent = 7.0;
  int resolution = 201;
  std::string output;
};

int run_wigner(const WignerOptions& opt) {
  TruncationPolicy policy;
  policy.n_max = opt.n_max;
  policy.check_convergence = false;
  const ScoreReport report = score_truncated(opt.K, policy);
  const Eigen::VectorXd& state = *report.optimal_state;
  std::vector<std::pair<int, double>> amplitudes;
  for (int n = 0; n < state.size(); ++n)
    if (state(n) != 0.0) amplitudes.emplace_back(n, state(n));

  const Eigen::MatrixXd grid = wigner_grid(amplitudes, opt.extent, opt.resolution);
  std::ostringstream out;
  out << "# schema_version=" << kSchemaVersion << "\n";
  out << "# K=" << opt.K << "\n";
  out << "# n_max=" << opt.n_max << "\n";
  out << "# extent=" << csv_number(opt.extent) << "\n";
  out << "# resolution=" << opt.resolution << "\n";
  out << "# score=" << csv_number(report.score) << "\n";
  out << "x,p,w\n";
  for (int ix = 0; ix < opt.resolution; ++ix) {
    const double x = -opt.extent + 2.0 * opt.extent * ix / (opt.resolution - 1);
    for (int ip = 0; ip < opt.resolution; ++ip) {
      const double p = -opt.extent + 2.0 * opt.extent * ip / (opt.resolution - 1);
      out << csv_number(x) << "," << csv_number(p) << "," << csv_number(grid(ix, ip)) << "\n";
    }
  }
  write_output(opt.output, out.str());
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Precession-protocol scores for classical, spin, and oscillator systems"};
  app.require_subcommand(1);

  ScoreSpinOptions score_spin;
  ScoreHoOptions score_ho;
  SweepOptions sweep;
  BoundsOptions bounds;
  ClassicalOptions classical;
  SimulateOptions simulate;
  EntanglementOptions entanglement;
  WignerOptions wigner;

  auto* score = app.add_subcommand("score", "Maximum protocol score of one system");
  score->require_subcommand(1);
  auto* spin = score->add_subcommand("spin", "Spin system of dimension d = 2j + 1");
  spin->add_option("--K", score_spin.K, "Number of probing times")->required();
  spin->add_option("--d", score_spin.dim, "Hilbert-space dimension")->required();
  spin->add_option("--method", score_spin.method, "numeric | closed-form | both");
  spin->add_flag("--state", score_spin.with_state, "Include the optimal state");
  spin->add_option("--output", score_spin.output, "Output file (default stdout)");

  auto* ho = score->add_subcommand("ho", "Truncated harmonic oscillator");
  ho->add_option("--K", score_ho.K, "Number of probing times")->required();
  ho->add_option("--nmax", score_ho.n_max, "Fock truncation (multiple of K)")->required();
  ho->add_option("--threshold", score_ho.threshold, "Convergence overlap threshold");
  ho->add_flag("--scan-all", score_ho.scan_all, "Scan every residue block");
  ho->add_flag("--no-convergence-check", score_ho.skip_convergence,
               "Skip the doubled-truncation overlap");
  ho->add_flag("--state", score_ho.with_state, "Include the Fock coefficients");
  ho->add_option("--output", score_ho.output, "Output file (default stdout)");

  auto* sweep_cmd = app.add_subcommand("sweep", "Scores over a dimension range (CSV)");
  sweep_cmd->add_option("--K", sweep.K, "Number of probing times")->required();
  sweep_cmd->add_option("--d", sweep.range, "Dimension range MIN:MAX")->required();
  sweep_cmd->add_option("--threads", sweep.threads, "Worker threads (0 = auto)");
  sweep_cmd->add_option("--output", sweep.output, "Output file (default stdout)");

  auto* bounds_cmd = app.add_subcommand("bounds", "Classical bound and oscillator bounds");
  bounds_cmd->add_option("--K", bounds.K, "Number of probing times")->required();
  bounds_cmd->add_option("--output", bounds.output, "Output file (default stdout)");

  auto* classical_cmd =
      app.add_subcommand("classical", "Monte Carlo protocol run over a classical density");
  classical_cmd->add_option("--K", classical.K, "Number of probing times")->required();
  classical_cmd->add_option("--density", classical.density,
                            "point:A1,A2 | disc:R | sector:+k | gauss:SIGMA")
      ->required();
  classical_cmd->add_option("--samples", classical.samples, "Number of rounds")->required();
  classical_cmd->add_option("--seed", classical.seed, "RNG seed")->required();
  classical_cmd->add_flag("--bound-check", classical.with_bound_check,
                          "Also integrate the exact score over the density");
  classical_cmd->add_option("--resolution", classical.resolution,
                            "Angular resolution for --bound-check");
  classical_cmd->add_option("--output", classical.output, "Output file (default stdout)");

  auto* simulate_cmd =
      app.add_subcommand("simulate", "Born-rule round sampling for a spin state");
  simulate_cmd->add_option("--K", simulate.K, "Number of probing times")->required();
  simulate_cmd->add_option("--d", simulate.dim, "Hilbert-space dimension")->required();
  simulate_cmd->add_option("--state", simulate.state, "optimal | mz:<m>");
  simulate_cmd->add_option("--rounds", simulate.rounds, "Number of rounds")->required();
  simulate_cmd->add_option("--seed", simulate.seed, "RNG seed")->required();
  simulate_cmd->add_option("--output", simulate.output, "Output file (default stdout)");

  auto* ent_cmd = app.add_subcommand("entanglement",
                                     "Schmidt data of the embedded optimal state, or GHZ check");
  ent_cmd->add_option("--K", entanglement.K, "Number of probing times")->required();
  ent_cmd->add_option("--j1", entanglement.j1, "First spin (may be half-integer)");
  ent_cmd->add_option("--j2", entanglement.j2, "Second spin (may be half-integer)");
  ent_cmd->add_flag("--ghz", entanglement.ghz, "Check the K-qubit chain maximizer");
  ent_cmd->add_option("--output", entanglement.output, "Output file (default stdout)");

  auto* wigner_cmd = app.add_subcommand("wigner", "Wigner grid of the optimal oscillator state");
  wigner_cmd->add_option("--K", wigner.K, "Number of probing times")->required();
  wigner_cmd->add_option("--nmax", wigner.n_max, "Fock truncation (multiple of K)");
  wigner_cmd->add_option("--extent", wigner.extent, "Half-width of the square grid");
  wigner_cmd->add_option("--resolution", wigner.resolution, "Grid points per axis");
  wigner_cmd->add_option("--output", wigner.output, "Output file (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (spin->parsed()) return run_score_spin(score_spin);
    if (ho->parsed()) return run_score_ho(score_ho);
    if (sweep_cmd->parsed()) return run_sweep(sweep);
    if (bounds_cmd->parsed()) return run_bounds(bounds);
    if (classical_cmd->parsed()) return run_classical(classical);
    if (simulate_cmd->parsed()) return run_simulate(simulate);
    if (ent_cmd->parsed()) return run_entanglement(entanglement);
    if (wigner_cmd->parsed()) return run_wigner(wigner);
  } catch (const std::invalid_argument& e) {  // includes domain_error
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const convergence_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitNoConvergence;
  } catch (const consistency_error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInconsistent;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return kExitUsage;
}
