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
#ifndef QGE_ENGINE_H_
#define QGE_ENGINE_H_

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <vector>

#include "qge/cost.h"
#include "qge/fermion.h"
#include "qge/probe.h"
#include "qge/schedule.h"
#include "qge/statevector.h"

// The adaptive gradient-estimation loop in the ideal-phase tier: expectation
// values are computed exactly and written straight into probe registers, which
// is the probe-subroutine contract itself. Oracle calls are counted, never
// executed.
namespace qge::engine {

using cost::Method;

struct ScheduleConfig {
  double epsilon = 0.1;
  double confidence = kMaxConfidence;
  int probe_bits = 3;
  double kappa_r = kDefaultKappaR;
  std::vector<int> repetition_override;
  Method method = Method::kPriorQge;
  probe::Window window = probe::Window::kUniform;
  probe::NoiseSpec noise;
  // Per-call prefactor charged to the ledger; <= 0 derives it from the
  // problem via DefaultAleph.
  double aleph = 0.0;
  // kappa in the derived prefactor.
  double aleph_prefactor = 1.0;
  bool record_trace = true;

  // Throws kInvalidParameter; method must be a QGE variant.
  void Validate() const;
};

struct Problem {
  std::vector<fermion::Observable> observables;
  statevector::PureState state;
  std::optional<int> sector;
  // k when the observables form a k-RDM set, otherwise 0.
  int rdm_order = 0;

  int modes() const { return state.qubits(); }
  size_t NontrivialCount() const;
  // Throws kSymmetryViolation when the state leaves the declared sector and
  // kShape when an observable does not match the state dimension.
  void Validate() const;
};

struct EstimatorState {
  std::vector<double> u_tilde;
  int q = 0;
};

struct LedgerRecord {
  int q = 0;
  Method method = Method::kPriorQge;
  int repetitions = 0;
  double delta = 0.0;
  double subroutine_cost = 0.0;
  double cumulative = 0.0;
};

struct QueryLedger {
  double aleph = 0.0;
  std::vector<LedgerRecord> records;

  double Total() const { return records.empty() ? 0.0 : records.back().cumulative; }
};

struct TraceRow {
  int q = 0;
  int j = 0;          // index into Problem::observables
  double u_tilde = 0.0;
  double mean_a = 0.0;  // <psi|A_j^{(q)}|psi>
  double v = 0.0;       // 2^q <A_j> / pi
  double g = 0.0;
  bool violation = false;  // |<A_j^{(q)}>| > 2^{-q}
  double queries_cumulative = 0.0;
};

struct RunResult {
  std::vector<double> estimates;  // one per observable; 0 for trivial ones
  std::vector<double> exact;
  QueryLedger ledger;
  std::vector<TraceRow> trace;
  std::vector<std::string> warnings;
};

// delta and R schedule for `observable_count` estimated observables.
Schedule ScheduleFor(const ScheduleConfig& config, size_t observable_count);

// u + pi 2^{-q} g, clipped to [-1, 1].
double UpdateStep(double u_tilde, double g, int q);

// Prefactor the ledger charges for `config.method` on this problem.
double DefaultAleph(const Problem& problem, const ScheduleConfig& config);

RunResult RunAdaptive(const Problem& problem, const ScheduleConfig& config,
                      std::mt19937_64& rng);

struct ContractReport {
  size_t checked = 0;     // (q >= 1, j) pairs inspected
  size_t violations = 0;
  double violation_rate = 0.0;
  bool any = false;
};

ContractReport PerIterationContractCheck(std::span<const TraceRow> trace);

// Smallest aleph' with subroutine_cost(q) <= aleph' 2^q ln(1/delta_q), and the
// resulting telescoped bound aleph' 2^{q_max+1} ln(8/c).
struct TelescopingReport {
  double effective_aleph = 0.0;
  double bound = 0.0;
  double total = 0.0;
  bool holds = false;  // total <= 1.1 * bound
};

TelescopingReport CheckTelescoping(const QueryLedger& ledger, double confidence);

// Shots-only estimator: each observable measured in its eigenbasis
// ceil(1/eps^2) times, one oracle query per shot.
struct BaselineResult {
  std::vector<double> estimates;
  std::vector<double> exact;
  int shots_per_observable = 0;
  double total_queries = 0.0;
};

BaselineResult RunSamplingBaseline(const Problem& problem, double epsilon,
                                   std::mt19937_64& rng);

struct MonteCarloSummary {
  int trials = 0;
  std::vector<double> exact;
  std::vector<double> mse;        // per observable
  std::vector<double> mean_estimate;
  double max_mse = 0.0;
  double total_queries = 0.0;     // per run (deterministic)
  double violating_run_fraction = 0.0;
  std::vector<std::string> warnings;  // from the first trial
  std::vector<RunResult> runs;    // kept only on request, ordered by trial
};

// Trials are seeded with StreamSeed(seed, trial) so the result does not
// depend on `jobs`.
MonteCarloSummary RunTrials(const Problem& problem, const ScheduleConfig& config,
                            int trials, uint64_t seed, int jobs = 1,
                            bool keep_runs = false);

// CSV columns: trial,q,j,u_tilde,v,g,violation_flag,queries_cumulative
void WriteTraceCsvHeader(std::ostream& out);
void WriteTraceCsvRows(int trial, std::span<const TraceRow> trace, std::ostream& out);

}  // namespace qge::engine

#endif  // QGE_ENGINE_H_
