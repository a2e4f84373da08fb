/* Copyright 2026 The QGE Lab Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/
#include "qge/cli.h"

#include <charconv>
#include <cstdlib>
#include <fstream>
#include <functional>
#include <iomanip>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "CLI11.hpp"
#include "qge/config.h"
#include "qge/cost.h"
#include "qge/engine.h"
#include "qge/fermion.h"
#include "qge/verify.h"

namespace qge::cli {
namespace {

struct RunConfig {
  // [problem]
  int modes = 4;
  std::optional<int> order;
  std::optional<int> eta;
  std::string state = "random";
  std::string pauli;
  // [schedule]
  std::optional<double> epsilon;
  double confidence = engine::kMaxConfidence;
  int probe_bits = 3;
  std::string method = "prior-qge";
  std::string window = "uniform";
  double kappa_r = engine::kDefaultKappaR;
  std::string repetitions;
  std::optional<int> trials;
  uint64_t seed = 1;
  int jobs = 1;
  // [noise]
  double phase_jitter = 0.0;
  double fail_probability = 0.0;
  // [cost]
  std::string preset;
  std::string sweep;
  std::optional<double> lo;
  std::optional<double> hi;
  int points = 8;
  std::string crossover;
  cost::CostConstants constants;
  // command-specific
  std::optional<std::string> out;
  std::string config_path;
  std::string baseline;
  std::string eps_list;
  std::string pow2_range = "3:8";
  double tolerance = 1e-9;
  bool inject_jw_sign_error = false;
  std::vector<std::string> suites;
  int max_modes = 8;
};

[[noreturn]] void ConfigError(const std::string& what) {
  throw Error(ErrorKind::kConfig, what);
}

template <class T>
T ParseNumber(const std::string& text, const std::string& key) {
  T value{};
  const char* end = text.data() + text.size();
  const auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (ec != std::errc() || ptr != end) ConfigError("bad value '" + text + "' for " + key);
  return value;
}

std::vector<std::string> SplitList(const std::string& text, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

// Config-file keys and the flag that overrides each of them.
struct KeySpec {
  const char* section;
  const char* key;
  const char* flag;
  std::function<void(RunConfig&, const std::string&)> set;
};

const std::vector<KeySpec>& KeyTable() {
  using S = const std::string&;
  static const std::vector<KeySpec> table = {
      {"problem", "N", "--N", [](RunConfig& c, S v) { c.modes = ParseNumber<int>(v, "N"); }},
      {"problem", "k", "--k", [](RunConfig& c, S v) { c.order = ParseNumber<int>(v, "k"); }},
      {"problem", "eta", "--eta", [](RunConfig& c, S v) { c.eta = ParseNumber<int>(v, "eta"); }},
      {"problem", "state", "--state", [](RunConfig& c, S v) { c.state = v; }},
      {"problem", "pauli", "--pauli", [](RunConfig& c, S v) { c.pauli = v; }},
      {"schedule", "eps", "--eps", [](RunConfig& c, S v) { c.epsilon = ParseNumber<double>(v, "eps"); }},
      {"schedule", "c", "--c", [](RunConfig& c, S v) { c.confidence = ParseNumber<double>(v, "c"); }},
      {"schedule", "p", "--p", [](RunConfig& c, S v) { c.probe_bits = ParseNumber<int>(v, "p"); }},
      {"schedule", "method", "--method", [](RunConfig& c, S v) { c.method = v; }},
      {"schedule", "window", "--window", [](RunConfig& c, S v) { c.window = v; }},
      {"schedule", "kappa_r", "--kappa-r", [](RunConfig& c, S v) { c.kappa_r = ParseNumber<double>(v, "kappa_r"); }},
      {"schedule", "repetitions", "--repetitions", [](RunConfig& c, S v) { c.repetitions = v; }},
      {"schedule", "trials", "--trials", [](RunConfig& c, S v) { c.trials = ParseNumber<int>(v, "trials"); }},
      {"schedule", "seed", "--seed", [](RunConfig& c, S v) { c.seed = ParseNumber<uint64_t>(v, "seed"); }},
      {"schedule", "jobs", "--jobs", [](RunConfig& c, S v) { c.jobs = ParseNumber<int>(v, "jobs"); }},
      {"noise", "phase_jitter", "--phase-jitter", [](RunConfig& c, S v) { c.phase_jitter = ParseNumber<double>(v, "phase_jitter"); }},
      {"noise", "fail_probability", "--fail-prob", [](RunConfig& c, S v) { c.fail_probability = ParseNumber<double>(v, "fail_probability"); }},
      {"cost", "preset", "--preset", [](RunConfig& c, S v) { c.preset = v; }},
      {"cost", "sweep", "--sweep", [](RunConfig& c, S v) { c.sweep = v; }},
      {"cost", "lo", "--lo", [](RunConfig& c, S v) { c.lo = ParseNumber<double>(v, "lo"); }},
      {"cost", "hi", "--hi", [](RunConfig& c, S v) { c.hi = ParseNumber<double>(v, "hi"); }},
      {"cost", "points", "--points", [](RunConfig& c, S v) { c.points = ParseNumber<int>(v, "points"); }},
      {"cost", "crossover", "--crossover", [](RunConfig& c, S v) { c.crossover = v; }},
      {"cost", "C0", "--C0", [](RunConfig& c, S v) { c.constants.prior_qge = ParseNumber<double>(v, "C0"); }},
      {"cost", "C1", "--C1", [](RunConfig& c, S v) { c.constants.method1 = ParseNumber<double>(v, "C1"); }},
      {"cost", "C2", "--C2", [](RunConfig& c, S v) { c.constants.method2 = ParseNumber<double>(v, "C2"); }},
      {"cost", "Cq", "--Cq", [](RunConfig& c, S v) { c.constants.qae = ParseNumber<double>(v, "Cq"); }},
      {"cost", "Cs", "--Cs", [](RunConfig& c, S v) { c.constants.shadow = ParseNumber<double>(v, "Cs"); }},
      {"cost", "Cb", "--Cb", [](RunConfig& c, S v) { c.constants.bell_gentle = ParseNumber<double>(v, "Cb"); }},
      {"cost", "aleph", "--aleph-const", [](RunConfig& c, S v) { c.constants.aleph = ParseNumber<double>(v, "aleph"); }},
  };
  return table;
}

// Config-file values fill everything the command line left unset.
void ApplyConfig(const CLI::App& sub, RunConfig& cfg) {
  if (cfg.config_path.empty()) return;
  const auto file = config::Load(cfg.config_path);
  for (const auto& e : file.entries) {
    const auto& table = KeyTable();
    const auto it = std::find_if(table.begin(), table.end(), [&](const KeySpec& k) {
      return e.section == k.section && e.key == k.key;
    });
    if (it == table.end()) {
      ConfigError(file.source + ":" + std::to_string(e.line) + ": unknown key " +
                  e.section + "." + e.key);
    }
    bool from_flag = false;
    try {
      from_flag = sub.count(it->flag) > 0;
    } catch (const CLI::OptionNotFound&) {
      from_flag = false;
    }
    if (!from_flag) it->set(cfg, e.value);
  }
}

void AddOption(CLI::App* sub, RunConfig& cfg, const std::string& name) {
  if (name == "--N") sub->add_option("--N", cfg.modes, "number of fermionic modes (qubits)");
  if (name == "--k") sub->add_option("--k", cfg.order, "RDM order");
  if (name == "--eta") sub->add_option("--eta", cfg.eta, "particle number sector");
  if (name == "--eps") sub->add_option("--eps", cfg.epsilon, "target root-MSE");
  if (name == "--method") sub->add_option("--method", cfg.method, "estimation method");
  if (name == "--trials") sub->add_option("--trials", cfg.trials, "Monte-Carlo trials");
  if (name == "--seed") sub->add_option("--seed", cfg.seed, "64-bit seed");
  if (name == "--p") sub->add_option("--p", cfg.probe_bits, "probe register bits");
  if (name == "--window") sub->add_option("--window", cfg.window, "probe window: uniform or sine");
  if (name == "--c") sub->add_option("--c", cfg.confidence, "confidence parameter c");
  if (name == "--jobs") sub->add_option("--jobs", cfg.jobs, "worker threads for trials");
  if (name == "--config") sub->add_option("--config", cfg.config_path, "ini-style config file");
  if (name == "--out") sub->add_option("--out", cfg.out, "output directory");
}

void AddEngineOptions(CLI::App* sub, RunConfig& cfg) {
  for (const char* f : {"--N", "--k", "--eta", "--eps", "--method", "--trials", "--seed",
                        "--p", "--window", "--c", "--jobs", "--config", "--out"}) {
    AddOption(sub, cfg, f);
  }
  sub->add_option("--state", cfg.state, "random, plus, zero, basis:<index> or file:<path>");
  sub->add_option("--pauli", cfg.pauli, "Pauli string observable instead of the RDM set");
  sub->add_option("--kappa-r", cfg.kappa_r, "repetition constant kappa_R");
  sub->add_option("--repetitions", cfg.repetitions, "comma-separated R per iteration");
  sub->add_option("--phase-jitter", cfg.phase_jitter, "probe phase jitter (radians)");
  sub->add_option("--fail-prob", cfg.fail_probability, "probe register failure probability");
}

std::string FormatDouble(double x) {
  std::ostringstream os;
  os << std::setprecision(17) << x;
  return os.str();
}

std::ofstream OpenOutput(const std::filesystem::path& path) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(ErrorKind::kIo, "cannot write " + path.string());
  return f;
}

// ---------------------------------------------------------------------------
// Problem construction.

SparseCMatrix PauliMatrix(const std::string& text, int modes) {
  if (text.size() != 1 && static_cast<int>(text.size()) != modes) {
    ConfigError("pauli string must have length 1 or N");
  }
  const int64_t dim = int64_t{1} << modes;
  uint64_t flip = 0, zmask = 0, ymask = 0;
  for (size_t i = 0; i < text.size(); ++i) {
    switch (text[i]) {
      case 'I': break;
      case 'X': flip |= uint64_t{1} << i; break;
      case 'Y': flip |= uint64_t{1} << i; ymask |= uint64_t{1} << i; break;
      case 'Z': zmask |= uint64_t{1} << i; break;
      default: ConfigError("pauli string may only contain I, X, Y, Z");
    }
  }
  std::vector<Eigen::Triplet<Complex, int64_t>> triplets;
  for (int64_t x = 0; x < dim; ++x) {
    // Y = i X Z on each factor: Y|b> = i (-1)^b |1-b>.
    Complex phase = 1.0;
    if (fermion::Popcount(x & zmask) % 2) phase = -phase;
    for (uint64_t m = ymask; m; m &= m - 1) {
      const bool bit = x & (m & -m);
      phase *= bit ? Complex(0, -1) : Complex(0, 1);
    }
    triplets.emplace_back(static_cast<int64_t>(x ^ flip), x, phase);
  }
  SparseCMatrix out(dim, dim);
  out.setFromTriplets(triplets.begin(), triplets.end());
  return out;
}

statevector::PureState BuildState(const RunConfig& cfg, std::optional<int> sector) {
  const int n = cfg.modes;
  std::mt19937_64 rng(StreamSeed(cfg.seed, ~uint64_t{0}));
  if (cfg.state == "random") {
    if (sector) return statevector::RandomSectorState(n, *sector, rng);
    CVector v(int64_t{1} << n);
    for (auto& a : v) a = Complex(StandardNormal(rng), StandardNormal(rng));
    return statevector::PureState::Normalized(v);
  }
  if (cfg.state == "zero") return statevector::PureState::Basis(n, 0);
  if (cfg.state == "plus") {
    CVector v = CVector::Constant(int64_t{1} << n, Complex(1.0, 0.0));
    return statevector::PureState::Normalized(v);
  }
  if (cfg.state.starts_with("basis:")) {
    return statevector::PureState::Basis(
        n, ParseNumber<int64_t>(cfg.state.substr(6), "state basis index"));
  }
  if (cfg.state.starts_with("file:")) {
    std::ifstream in(cfg.state.substr(5));
    if (!in) ConfigError("cannot open state file " + cfg.state.substr(5));
    auto psi = statevector::ReadState(in);
    if (psi.qubits() != n) ConfigError("state file qubit count does not match --N");
    return psi;
  }
  ConfigError("unknown state '" + cfg.state + "'");
}

engine::Problem BuildProblem(const RunConfig& cfg) {
  if (cfg.modes < 1 || cfg.modes > statevector::kMaxFullQubits) {
    ConfigError("--N must lie in [1, " + std::to_string(statevector::kMaxFullQubits) + "]");
  }
  engine::Problem problem;
  if (!cfg.pauli.empty()) {
    fermion::Observable o;
    o.matrix = PauliMatrix(cfg.pauli, cfg.modes);
    o.label = cfg.pauli;
    problem.observables.push_back(std::move(o));
    problem.sector = cfg.eta;
    problem.state = BuildState(cfg, cfg.eta);
    return problem;
  }
  const int k = cfg.order.value_or(1);
  const int eta = cfg.eta.value_or((cfg.modes + 1) / 2);
  if (eta < 0 || eta > cfg.modes) ConfigError("--eta must lie in [0, N]");
  problem.observables = fermion::EstimationTargets(cfg.modes, k);
  problem.sector = eta;
  problem.rdm_order = k;
  problem.state = BuildState(cfg, eta);
  return problem;
}

engine::ScheduleConfig BuildSchedule(const RunConfig& cfg, double default_eps) {
  engine::ScheduleConfig s;
  s.epsilon = cfg.epsilon.value_or(default_eps);
  s.confidence = cfg.confidence;
  s.probe_bits = cfg.probe_bits;
  s.method = cost::ParseMethod(cfg.method);
  s.window = probe::ParseWindow(cfg.window);
  s.kappa_r = cfg.kappa_r;
  for (const auto& r : SplitList(cfg.repetitions, ',')) {
    s.repetition_override.push_back(ParseNumber<int>(r, "repetitions"));
  }
  s.noise.phase_jitter = cfg.phase_jitter;
  s.noise.fail_probability = cfg.fail_probability;
  s.aleph_prefactor = cfg.constants.aleph;
  s.Validate();
  return s;
}

std::string ProvenanceDetails(const RunConfig& cfg) {
  return "seed " + std::to_string(cfg.seed) + "; constants " + cfg.constants.Label();
}

// ---------------------------------------------------------------------------
// Commands.

int CmdSimulate(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  const engine::Problem problem = BuildProblem(cfg);
  const engine::ScheduleConfig schedule = BuildSchedule(cfg, 0.1);
  const int trials = cfg.trials.value_or(100);
  if (trials < 1) ConfigError("--trials must be >= 1");
  if (cfg.jobs < 1) ConfigError("--jobs must be >= 1");

  const auto summary =
      engine::RunTrials(problem, schedule, trials, cfg.seed, cfg.jobs, /*keep_runs=*/true);
  for (const auto& w : summary.warnings) err << "warning: " << w << "\n";

  const auto dir = OutputDirectory(cfg.out);
  {
    auto f = OpenOutput(dir / "simulate_trace.csv");
    WriteUnitsHeader(f, "u_tilde and v and g dimensionless; queries_cumulative in "
                        "state-preparation oracle calls (constant-calibrated)");
    engine::WriteTraceCsvHeader(f);
    for (int t = 0; t < trials; ++t) engine::WriteTraceCsvRows(t, summary.runs[t].trace, f);
    WriteProvenanceFooter(f, "simulate", ProvenanceDetails(cfg));
  }
  {
    auto f = OpenOutput(dir / "simulate_summary.csv");
    WriteUnitsHeader(f, "exact and mean_estimate in expectation units; mse and max_mse in "
                        "squared expectation units; total_queries in state-preparation "
                        "oracle calls per run (constant-calibrated); violation_rate as a "
                        "fraction of runs");
    f << "label,exact,mean_estimate,mse,max_mse,total_queries,violation_rate\n";
    for (size_t j = 0; j < problem.observables.size(); ++j) {
      f << problem.observables[j].label << ',' << FormatDouble(summary.exact[j]) << ','
        << FormatDouble(summary.mean_estimate[j]) << ',' << FormatDouble(summary.mse[j])
        << ',' << FormatDouble(summary.max_mse) << ','
        << FormatDouble(summary.total_queries) << ','
        << FormatDouble(summary.violating_run_fraction) << '\n';
    }
    WriteProvenanceFooter(f, "simulate", ProvenanceDetails(cfg));
  }
  {
    auto f = OpenOutput(dir / "simulate_state.txt");
    statevector::WriteState(problem.state, f);
  }

  out << "method " << cost::MethodName(schedule.method) << ", eps " << schedule.epsilon
      << ", trials " << trials << ", observables " << problem.NontrivialCount() << "\n";
  if (problem.observables.size() <= 8) {
    for (size_t j = 0; j < problem.observables.size(); ++j) {
      out << "estimate " << problem.observables[j].label << " = "
          << summary.runs.front().estimates[j] << " (exact " << summary.exact[j] << ")\n";
    }
  }
  out << "max_mse " << summary.max_mse << " (eps^2 " << schedule.epsilon * schedule.epsilon
      << ")\n"
      << "total_queries " << summary.total_queries << " (constant-calibrated)\n"
      << "violation_rate " << summary.violating_run_fraction << "\n"
      << "wrote " << (dir / "simulate_summary.csv").string() << "\n";
  return kExitOk;
}

std::vector<double> SweepPoints(double lo, double hi, int points, bool integer) {
  if (points < 2) ConfigError("a sweep needs --points >= 2");
  if (!(lo > 0.0) || !(hi > lo)) ConfigError("invalid sweep range: need 0 < lo < hi");
  std::vector<double> xs;
  for (int i = 0; i < points; ++i) {
    double x = std::exp(std::log(lo) + (std::log(hi) - std::log(lo)) * i / (points - 1));
    if (integer) x = std::round(x);
    if (xs.empty() || x != xs.back()) xs.push_back(x);
  }
  return xs;
}

int CmdCost(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  const int k = cfg.order.value_or(2);
  const double eps = cfg.epsilon.value_or(1e-3);
  const std::string preset = cfg.preset.empty() ? "custom" : cfg.preset;

  auto base_params = [&](int modes, double epsilon) {
    cost::CostParams p;
    if (preset == "fig2") {
      p = cost::Fig2Preset(modes, k, epsilon);
    } else if (preset == "fig3") {
      p = cost::Fig3Preset(k, epsilon);
    } else if (preset == "hubbard") {
      p = cost::HubbardPreset(k, epsilon);
    } else if (preset == "custom") {
      p.modes = modes;
      p.order = k;
      p.eta = cfg.eta.value_or((modes + 1) / 2);
      p.epsilon = epsilon;
    } else {
      ConfigError("unknown preset '" + preset + "' (fig2, fig3, hubbard, custom)");
    }
    p.constants = cfg.constants;
    p.Validate();
    return p;
  };

  // (modes, epsilon) points of the sweep.
  std::vector<std::pair<int, double>> grid;
  cost::SweepVariable variable = cost::SweepVariable::kEpsilon;
  if (cfg.sweep == "eps") {
    for (double e : SweepPoints(cfg.lo.value_or(1e-5), cfg.hi.value_or(1e-1), cfg.points, false)) {
      grid.emplace_back(cfg.modes, e);
    }
  } else if (cfg.sweep == "N") {
    if (preset == "fig3" || preset == "hubbard") ConfigError("preset " + preset + " fixes N");
    variable = cost::SweepVariable::kModes;
    for (double n : SweepPoints(cfg.lo.value_or(16), cfg.hi.value_or(256), cfg.points, true)) {
      grid.emplace_back(static_cast<int>(n), eps);
    }
  } else if (cfg.sweep.empty()) {
    if (preset == "fig2") {
      for (int n : {16, 32, 64, 128, 256}) grid.emplace_back(n, eps);
      variable = cost::SweepVariable::kModes;
    } else {
      grid.emplace_back(cfg.modes, eps);
    }
  } else {
    ConfigError("--sweep must be eps or N");
  }

  const auto dir = OutputDirectory(cfg.out);
  auto f = OpenOutput(dir / "cost.csv");
  WriteUnitsHeader(f, "total in state-preparation oracle calls (constant-calibrated); "
                      "epsilon dimensionless; M observable count; d_eta sector dimension");
  cost::WriteCostCsvHeader(f);

  std::vector<double> xs;
  std::vector<std::vector<double>> totals(cost::kAllMethods.size());
  for (const auto& [modes, epsilon] : grid) {
    const cost::CostParams params = base_params(modes, epsilon);
    const auto rows = cost::CompareTable(params);
    cost::WriteCostCsvRows(params, rows, f);
    xs.push_back(variable == cost::SweepVariable::kEpsilon ? epsilon : params.modes);
    for (const auto& r : rows) {
      const auto idx = std::find(cost::kAllMethods.begin(), cost::kAllMethods.end(), r.method) -
                       cost::kAllMethods.begin();
      totals[idx].push_back(r.total);
    }
    out << "N=" << params.modes << " k=" << params.order << " eta=" << params.eta
        << " eps=" << params.epsilon << " ranking:";
    for (const auto& r : rows) out << ' ' << cost::MethodName(r.method);
    out << "\n";
  }
  WriteProvenanceFooter(f, "cost", "preset " + preset + "; constants " + cfg.constants.Label());

  if (xs.size() >= 3) {
    for (size_t m = 0; m < cost::kAllMethods.size(); ++m) {
      if (std::any_of(totals[m].begin(), totals[m].end(), [](double t) { return !(t > 0.0); })) {
        continue;
      }
      const auto fit = FitLogLog(xs, totals[m]);
      out << "slope " << cost::MethodName(cost::kAllMethods[m]) << " vs "
          << (variable == cost::SweepVariable::kEpsilon ? "eps" : "N") << " = " << fit.slope
          << "\n";
    }
  }

  if (!cfg.crossover.empty()) {
    const auto parts = SplitList(cfg.crossover, ':');
    if (parts.size() != 2) ConfigError("--crossover expects method-a:method-b");
    const auto a = cost::ParseMethod(parts[0]);
    const auto b = cost::ParseMethod(parts[1]);
    const auto params = base_params(grid.front().first, grid.front().second);
    const double lo = variable == cost::SweepVariable::kEpsilon ? cfg.lo.value_or(1e-5)
                                                                : cfg.lo.value_or(16);
    const double hi = variable == cost::SweepVariable::kEpsilon ? cfg.hi.value_or(1e-1)
                                                                : cfg.hi.value_or(256);
    const auto eta_rule = preset == "fig2" ? cost::EtaRule::Fraction(7.0 / 8.0)
                                           : cost::EtaRule::Fixed();
    const auto x = cost::Crossover(a, b, params, variable, lo, hi, eta_rule);
    out << "crossover " << parts[0] << " " << parts[1] << ": "
        << (x ? FormatDouble(*x) : std::string("none in range")) << "\n";
  }
  out << "wrote " << (dir / "cost.csv").string() << " (constant-calibrated)\n";
  return kExitOk;
}

int CmdVerify(const RunConfig& cfg, std::ostream& out, std::ostream& /*err*/) {
  verify::Options options;
  options.tolerance = cfg.tolerance;
  options.inject_jw_sign_error = cfg.inject_jw_sign_error;
  options.seed = cfg.seed;
  options.max_modes = cfg.max_modes;
  if (!(options.tolerance > 0.0)) ConfigError("--tolerance must be positive");
  if (options.max_modes < 1 || options.max_modes > 10) ConfigError("--max-modes must lie in [1, 10]");
  const auto results = verify::Run(options, cfg.suites);

  const auto dir = OutputDirectory(cfg.out);
  auto f = OpenOutput(dir / "verify.csv");
  WriteUnitsHeader(f, "passed is 0 or 1; detail is free text");
  f << "suite,check,passed,detail\n";
  bool all = true;
  for (const auto& suite : results) {
    out << (suite.passed() ? "PASS " : "FAIL ") << suite.name << " ("
        << suite.checks.size() - suite.failures() << "/" << suite.checks.size() << ")\n";
    for (const auto& c : suite.checks) {
      f << suite.name << ',' << c.name << ',' << (c.passed ? 1 : 0) << ",\"" << c.detail
        << "\"\n";
      if (!c.passed) out << "  failed " << c.name << ": " << c.detail << "\n";
    }
    all = all && suite.passed();
  }
  WriteProvenanceFooter(f, "verify", "seed " + std::to_string(cfg.seed) + "; tolerance " +
                                         FormatDouble(cfg.tolerance));
  return all ? kExitOk : kExitVerify;
}

int CmdSweep(const RunConfig& cfg, std::ostream& out, std::ostream& err) {
  std::vector<double> eps;
  if (!cfg.eps_list.empty()) {
    for (const auto& e : SplitList(cfg.eps_list, ',')) eps.push_back(ParseNumber<double>(e, "eps"));
  } else if (cfg.epsilon) {
    eps.push_back(*cfg.epsilon);
  } else {
    const auto parts = SplitList(cfg.pow2_range, ':');
    if (parts.size() != 2) ConfigError("--pow2 expects a:b");
    const int a = ParseNumber<int>(parts[0], "pow2");
    const int b = ParseNumber<int>(parts[1], "pow2");
    for (int e = a; e <= b; ++e) eps.push_back(std::ldexp(1.0, -e));
  }
  if (eps.size() < 3) ConfigError("a sweep needs at least 3 epsilon points");
  const bool shots = cfg.baseline == "shots";
  if (!cfg.baseline.empty() && !shots) ConfigError("--baseline must be shots");
  const int trials = cfg.trials.value_or(1);
  if (trials < 1) ConfigError("--trials must be >= 1");

  const engine::Problem problem = BuildProblem(cfg);
  const std::string label = shots ? "shots" : cfg.method;
  std::vector<double> inv, queries, mses;
  for (double e : eps) {
    double total = 0.0, max_mse = 0.0;
    if (shots) {
      std::vector<double> mse(problem.observables.size(), 0.0);
      for (int t = 0; t < trials; ++t) {
        std::mt19937_64 rng(StreamSeed(cfg.seed, static_cast<uint64_t>(t)));
        const auto r = engine::RunSamplingBaseline(problem, e, rng);
        total = r.total_queries;
        for (size_t j = 0; j < mse.size(); ++j) {
          mse[j] += (r.estimates[j] - r.exact[j]) * (r.estimates[j] - r.exact[j]) / trials;
        }
      }
      max_mse = *std::max_element(mse.begin(), mse.end());
    } else {
      RunConfig point = cfg;
      point.epsilon = e;
      auto schedule = BuildSchedule(point, e);
      schedule.record_trace = false;
      const auto summary = engine::RunTrials(problem, schedule, trials, cfg.seed, cfg.jobs);
      if (inv.empty()) {
        for (const auto& w : summary.warnings) err << "warning: " << w << "\n";
      }
      total = summary.total_queries;
      max_mse = summary.max_mse;
    }
    inv.push_back(1.0 / e);
    queries.push_back(total);
    mses.push_back(max_mse);
  }
  const auto fit = FitLogLog(inv, queries);

  const auto dir = OutputDirectory(cfg.out);
  auto f = OpenOutput(dir / "sweep.csv");
  WriteUnitsHeader(f, "epsilon dimensionless; total_queries in state-preparation oracle calls "
                      "per run (constant-calibrated); max_mse in squared expectation units");
  f << "method,epsilon,inverse_epsilon,total_queries,max_mse\n";
  for (size_t i = 0; i < eps.size(); ++i) {
    f << label << ',' << FormatDouble(eps[i]) << ',' << FormatDouble(inv[i]) << ','
      << FormatDouble(queries[i]) << ',' << FormatDouble(mses[i]) << '\n';
  }
  f << "# fit: slope " << FormatDouble(fit.slope) << ", r_squared "
    << FormatDouble(fit.r_squared) << "\n";
  WriteProvenanceFooter(f, "sweep", ProvenanceDetails(cfg));

  out << label << " log-log slope of queries vs 1/eps: " << fit.slope << " (R^2 "
      << fit.r_squared << ")\n"
      << "wrote " << (dir / "sweep.csv").string() << "\n";
  return kExitOk;
}

}  // namespace

int ExitCodeFor(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kConfig:
    case ErrorKind::kInvalidParameter:
    case ErrorKind::kInvalidInput:
    case ErrorKind::kInvalidOrder:
    case ErrorKind::kInvalidMonomial:
    case ErrorKind::kIo:
      return kExitConfig;
    default:
      return kExitContract;
  }
}

std::filesystem::path OutputDirectory(const std::optional<std::string>& flag) {
  std::filesystem::path dir = ".";
  if (flag && !flag->empty()) {
    dir = *flag;
  } else if (const char* env = std::getenv(kOutDirEnv); env && *env) {
    dir = env;
  }
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw Error(ErrorKind::kIo, "cannot create output directory " + dir.string());
  return dir;
}

void WriteUnitsHeader(std::ostream& out, std::string_view units) {
  out << "# units: " << units << "\n";
}

void WriteProvenanceFooter(std::ostream& out, std::string_view command,
                           std::string_view details) {
  out << "# provenance: qge-lab " << Version() << "; command " << command << "; "
      << details << "\n";
}

SlopeFit FitLogLog(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw Error(ErrorKind::kShape, "x and y lengths differ");
  if (x.size() < 3) ConfigError("a log-log fit needs at least 3 points");
  const auto n = static_cast<double>(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) {
      throw Error(ErrorKind::kInvalidInput, "log-log fit needs positive values");
    }
    const double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) throw Error(ErrorKind::kInvalidInput, "degenerate x values");
  SlopeFit fit;
  fit.slope = (n * sxy - sx * sy) / denom;
  fit.intercept = (sy - fit.slope * sx) / n;
  double ss_res = 0, ss_tot = 0;
  const double mean = sy / n;
  for (size_t i = 0; i < x.size(); ++i) {
    const double ly = std::log(y[i]);
    const double r = ly - (fit.intercept + fit.slope * std::log(x[i]));
    ss_res += r * r;
    ss_tot += (ly - mean) * (ly - mean);
  }
  fit.r_squared = ss_tot == 0.0 ? 1.0 : 1.0 - ss_res / ss_tot;
  return fit;
}

int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  RunConfig cfg;
  CLI::App app{"qge_lab: adaptive quantum gradient estimation lab"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string("qge-lab ") + Version());

  auto* simulate = app.add_subcommand("simulate", "Monte-Carlo runs of the adaptive estimator");
  AddEngineOptions(simulate, cfg);

  auto* cost_cmd = app.add_subcommand("cost", "closed-form query-cost comparison");
  for (const char* flag : {"--N", "--k", "--eta", "--eps", "--config", "--out"}) {
    AddOption(cost_cmd, cfg, flag);
  }
  cost_cmd->add_option("--preset", cfg.preset, "fig2, fig3, hubbard or custom");
  cost_cmd->add_option("--sweep", cfg.sweep, "sweep variable: eps or N");
  cost_cmd->add_option("--lo", cfg.lo, "sweep lower end");
  cost_cmd->add_option("--hi", cfg.hi, "sweep upper end");
  cost_cmd->add_option("--points", cfg.points, "sweep points (log-spaced)");
  cost_cmd->add_option("--crossover", cfg.crossover, "locate the crossing of method-a:method-b");
  cost_cmd->add_option("--C0", cfg.constants.prior_qge, "prior-qge prefactor");
  cost_cmd->add_option("--C1", cfg.constants.method1, "method-1 prefactor");
  cost_cmd->add_option("--C2", cfg.constants.method2, "method-2 prefactor");
  cost_cmd->add_option("--Cq", cfg.constants.qae, "qae prefactor");
  cost_cmd->add_option("--Cs", cfg.constants.shadow, "fermionic-shadow prefactor");
  cost_cmd->add_option("--Cb", cfg.constants.bell_gentle, "bell-gentle prefactor");
  cost_cmd->add_option("--aleph-const", cfg.constants.aleph, "kappa in the aleph prefactor");

  auto* verify_cmd = app.add_subcommand("verify", "brute-force self-checks");
  for (const char* flag : {"--seed", "--config", "--out"}) AddOption(verify_cmd, cfg, flag);
  verify_cmd->add_option("--tolerance", cfg.tolerance, "relative tolerance");
  verify_cmd->add_flag("--inject-jw-sign-error", cfg.inject_jw_sign_error,
                       "drop the Jordan-Wigner parity string (mutation check)");
  verify_cmd->add_option("--suite", cfg.suites, "suites to run (default all)");
  verify_cmd->add_option("--max-modes", cfg.max_modes, "largest N in the norm sweep");

  auto* sweep = app.add_subcommand("sweep", "query scaling over an epsilon grid");
  AddEngineOptions(sweep, cfg);
  sweep->add_option("--eps-list", cfg.eps_list, "comma-separated epsilon values");
  sweep->add_option("--pow2", cfg.pow2_range, "epsilon = 2^-a ... 2^-b as a:b");
  sweep->add_option("--baseline", cfg.baseline, "shots: sampling-only estimator");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }

  try {
    if (simulate->parsed()) {
      ApplyConfig(*simulate, cfg);
      return CmdSimulate(cfg, out, err);
    }
    if (cost_cmd->parsed()) {
      ApplyConfig(*cost_cmd, cfg);
      return CmdCost(cfg, out, err);
    }
    if (verify_cmd->parsed()) {
      ApplyConfig(*verify_cmd, cfg);
      return CmdVerify(cfg, out, err);
    }
    ApplyConfig(*sweep, cfg);
    return CmdSweep(cfg, out, err);
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCodeFor(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitContract;
  }
}

}  // namespace qge::cli
