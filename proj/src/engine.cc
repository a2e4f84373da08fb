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
#include "qge/engine.h"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <iomanip>
#include <ostream>
#include <thread>

#include <Eigen/Eigenvalues>

namespace qge::engine {

void ScheduleConfig::Validate() const {
  if (!cost::IsQge(method)) {
    throw Error(ErrorKind::kInvalidParameter,
                "the adaptive engine runs prior-qge, method-1 or method-2");
  }
  MaxIteration(epsilon);
  ValidateConfidence(confidence);
  if (probe_bits < 1 || probe_bits > probe::kMaxBits) {
    throw Error(ErrorKind::kInvalidParameter, "probe bits out of range");
  }
  if (!(kappa_r > 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, "kappa_r must be positive");
  }
  noise.Validate();
}

size_t Problem::NontrivialCount() const {
  return static_cast<size_t>(std::count_if(
      observables.begin(), observables.end(),
      [](const fermion::Observable& o) { return !o.trivial; }));
}

void Problem::Validate() const {
  if (observables.empty()) {
    throw Error(ErrorKind::kInvalidInput, "no observables to estimate");
  }
  if (state.dimension() == 0) throw Error(ErrorKind::kInvalidInput, "no state");
  for (const auto& o : observables) {
    if (o.matrix.rows() != state.dimension()) {
      throw Error(ErrorKind::kShape,
                  "observable " + o.label + " does not match the state dimension");
    }
  }
  if (sector) {
    if (*sector < 0 || *sector > modes()) {
      throw Error(ErrorKind::kInvalidInput, "sector label outside [0, N]");
    }
    if (!statevector::SupportedOnSector(state, *sector, 1e-10)) {
      throw Error(ErrorKind::kSymmetryViolation, "state leaves the declared sector");
    }
  }
}

Schedule ScheduleFor(const ScheduleConfig& config, size_t observable_count) {
  return MakeSchedule(config.epsilon, config.confidence, observable_count,
                      config.kappa_r, config.repetition_override);
}

double UpdateStep(double u_tilde, double g, int q) {
  const double next = u_tilde + kPi * std::ldexp(1.0, -q) * g;
  return std::clamp(next, -1.0, 1.0);
}

double DefaultAleph(const Problem& problem, const ScheduleConfig& config) {
  const auto m = static_cast<double>(std::max<size_t>(problem.NontrivialCount(), 1));
  const double log_d = problem.modes() * std::log(2.0);
  if (config.method == Method::kPriorQge) {
    return cost::AlephFromNorm(config.method, 0.0, 0.0, m, log_d,
                               config.aleph_prefactor);
  }
  if (!problem.sector) {
    throw Error(ErrorKind::kInvalidInput,
                "method-1 and method-2 need the particle-number sector");
  }
  const int eta = *problem.sector;
  if (problem.rdm_order > 0) {
    cost::CostParams params;
    params.modes = problem.modes();
    params.order = problem.rdm_order;
    params.eta = eta;
    params.epsilon = config.epsilon;
    params.observable_count = m;
    params.constants.aleph = config.aleph_prefactor;
    return cost::Aleph(config.method, params);
  }
  std::vector<fermion::Observable> nontrivial;
  for (const auto& o : problem.observables) {
    if (!o.trivial) nontrivial.push_back(o);
  }
  const double norm = fermion::SumSquaresSectorNorm(nontrivial, problem.modes(), eta);
  return cost::AlephFromNorm(config.method, norm, LogBinomial(problem.modes(), eta),
                             m, log_d, config.aleph_prefactor);
}

RunResult RunAdaptive(const Problem& problem, const ScheduleConfig& config,
                      std::mt19937_64& rng) {
  config.Validate();
  problem.Validate();
  if (config.method != Method::kPriorQge && !problem.sector) {
    throw Error(ErrorKind::kInvalidInput,
                "method-1 and method-2 need the particle-number sector");
  }

  const size_t total = problem.observables.size();
  std::vector<size_t> active;
  for (size_t j = 0; j < total; ++j) {
    if (!problem.observables[j].trivial) active.push_back(j);
  }

  RunResult result;
  result.exact.resize(total);
  for (size_t j = 0; j < total; ++j) {
    result.exact[j] = statevector::Expectation(problem.observables[j].matrix,
                                               problem.state);
  }
  const double log2_d = problem.modes();
  if (static_cast<double>(active.size()) < 2.0 * log2_d + 24.0) {
    result.warnings.push_back("M = " + std::to_string(active.size()) +
                              " is below 2 log2 d + 24");
  }

  const Schedule schedule = ScheduleFor(config, active.size());
  const probe::Grid grid = probe::MakeGrid(config.probe_bits);
  const double aleph = config.aleph > 0.0 ? config.aleph : DefaultAleph(problem, config);
  result.ledger.aleph = aleph;

  EstimatorState state{std::vector<double>(total, 0.0), 0};
  double cumulative = 0.0;
  std::vector<double> slopes(active.size());
  for (int q = 0; q <= schedule.q_max; ++q) {
    state.q = q;
    const double window = std::ldexp(1.0, -q);
    const int reps = schedule.repetitions[q];

    // Recentred observables A_j = O_j - u_j; their means fix the phase slopes.
    std::vector<double> means(active.size());
    for (size_t a = 0; a < active.size(); ++a) {
      means[a] = result.exact[active[a]] - state.u_tilde[active[a]];
      slopes[a] = std::ldexp(1.0, q) * means[a] / kPi;
    }

    std::vector<double> g;
    if (config.method == Method::kMethod2) {
      g = probe::ParallelSingleShot(slopes, grid, reps, config.window, config.noise, rng)
              .values;
    } else {
      g.resize(active.size());
      for (size_t a = 0; a < active.size(); ++a) {
        g[a] = probe::MedianReadout(slopes[a], grid, reps, config.window,
                                    config.noise, rng);
      }
    }

    const double rep_factor = config.method == Method::kMethod2
                                  ? std::sqrt(static_cast<double>(reps))
                                  : static_cast<double>(reps);
    const double cost = std::ceil(aleph * std::ldexp(1.0, q) * rep_factor - 1e-9);
    cumulative += cost;
    result.ledger.records.push_back(
        {q, config.method, reps, schedule.delta[q], cost, cumulative});

    for (size_t a = 0; a < active.size(); ++a) {
      const size_t j = active[a];
      if (config.record_trace) {
        TraceRow row;
        row.q = q;
        row.j = static_cast<int>(j);
        row.u_tilde = state.u_tilde[j];
        row.mean_a = means[a];
        row.v = slopes[a];
        row.g = g[a];
        row.violation = std::abs(means[a]) > window * (1.0 + 1e-12);
        row.queries_cumulative = cumulative;
        result.trace.push_back(row);
      }
      state.u_tilde[j] = UpdateStep(state.u_tilde[j], g[a], q);
    }
  }
  result.estimates = std::move(state.u_tilde);
  return result;
}

ContractReport PerIterationContractCheck(std::span<const TraceRow> trace) {
  ContractReport report;
  for (const auto& row : trace) {
    if (row.q < 1) continue;
    ++report.checked;
    if (row.violation) ++report.violations;
  }
  report.any = report.violations > 0;
  report.violation_rate =
      report.checked ? static_cast<double>(report.violations) / report.checked : 0.0;
  return report;
}

TelescopingReport CheckTelescoping(const QueryLedger& ledger, double confidence) {
  TelescopingReport report;
  if (ledger.records.empty()) return report;
  for (const auto& r : ledger.records) {
    const double denom = std::ldexp(1.0, r.q) * std::log(1.0 / r.delta);
    report.effective_aleph = std::max(report.effective_aleph, r.subroutine_cost / denom);
  }
  const int q_max = ledger.records.back().q;
  report.bound =
      report.effective_aleph * std::ldexp(1.0, q_max + 1) * std::log(8.0 / confidence);
  report.total = ledger.Total();
  report.holds = report.total <= 1.1 * report.bound;
  return report;
}

BaselineResult RunSamplingBaseline(const Problem& problem, double epsilon,
                                   std::mt19937_64& rng) {
  problem.Validate();
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "epsilon must lie in (0, 1)");
  }
  BaselineResult result;
  result.shots_per_observable =
      static_cast<int>(std::ceil(1.0 / (epsilon * epsilon) - 1e-9));
  const size_t total = problem.observables.size();
  result.estimates.assign(total, 0.0);
  result.exact.resize(total);

  // Measure inside the sector when it is known; the state has no weight
  // elsewhere.
  std::optional<statevector::SectorState> sector_state;
  if (problem.sector) {
    sector_state = statevector::SectorState::FromFull(problem.state, *problem.sector);
  }
  size_t measured = 0;
  for (size_t j = 0; j < total; ++j) {
    const auto& o = problem.observables[j];
    result.exact[j] = statevector::Expectation(o.matrix, problem.state);
    if (o.trivial) continue;
    ++measured;
    CMatrix h;
    CVector psi;
    if (sector_state) {
      h = fermion::SectorRestrict(o.matrix, problem.modes(), *problem.sector);
      psi = sector_state->amplitudes;
    } else {
      h = CMatrix(o.matrix);
      psi = problem.state.amplitudes();
    }
    Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
    const CVector overlaps = es.eigenvectors().adjoint() * psi;
    std::vector<double> probs(overlaps.size());
    for (Eigen::Index i = 0; i < overlaps.size(); ++i) probs[i] = std::norm(overlaps[i]);
    const probe::GridSampler sampler(probs);
    double acc = 0.0;
    for (int s = 0; s < result.shots_per_observable; ++s) {
      acc += es.eigenvalues()[sampler.DrawIndex(rng)];
    }
    result.estimates[j] = acc / result.shots_per_observable;
  }
  result.total_queries =
      static_cast<double>(measured) * static_cast<double>(result.shots_per_observable);
  return result;
}

MonteCarloSummary RunTrials(const Problem& problem, const ScheduleConfig& config,
                            int trials, uint64_t seed, int jobs, bool keep_runs) {
  if (trials < 1) throw Error(ErrorKind::kInvalidParameter, "need trials >= 1");
  jobs = std::clamp(jobs, 1, trials);

  std::vector<RunResult> runs(trials);
  std::vector<char> violated(trials, 0);
  std::atomic<int> next{0};
  std::vector<std::exception_ptr> errors(jobs);
  auto worker = [&](int slot) {
    try {
      for (int t = next.fetch_add(1); t < trials; t = next.fetch_add(1)) {
        std::mt19937_64 rng(StreamSeed(seed, static_cast<uint64_t>(t)));
        runs[t] = RunAdaptive(problem, config, rng);
        violated[t] = PerIterationContractCheck(runs[t].trace).any;
        if (!keep_runs) runs[t].trace.clear();
      }
    } catch (...) {
      errors[slot] = std::current_exception();
    }
  };
  if (jobs == 1) {
    worker(0);
  } else {
    std::vector<std::thread> pool;
    for (int s = 0; s < jobs; ++s) pool.emplace_back(worker, s);
    for (auto& th : pool) th.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }

  MonteCarloSummary summary;
  summary.trials = trials;
  summary.exact = runs.front().exact;
  summary.warnings = runs.front().warnings;
  const size_t m = summary.exact.size();
  summary.mse.assign(m, 0.0);
  summary.mean_estimate.assign(m, 0.0);
  int violating = 0;
  for (int t = 0; t < trials; ++t) {
    const auto& run = runs[t];
    for (size_t j = 0; j < m; ++j) {
      const double err = run.estimates[j] - summary.exact[j];
      summary.mse[j] += err * err;
      summary.mean_estimate[j] += run.estimates[j];
    }
    summary.total_queries = run.ledger.Total();
    if (violated[t]) ++violating;
  }
  for (size_t j = 0; j < m; ++j) {
    summary.mse[j] /= trials;
    summary.mean_estimate[j] /= trials;
  }
  summary.max_mse = *std::max_element(summary.mse.begin(), summary.mse.end());
  summary.violating_run_fraction = static_cast<double>(violating) / trials;
  if (keep_runs) summary.runs = std::move(runs);
  return summary;
}

void WriteTraceCsvHeader(std::ostream& out) {
  out << "trial,q,j,u_tilde,v,g,violation_flag,queries_cumulative\n";
}

void WriteTraceCsvRows(int trial, std::span<const TraceRow> trace, std::ostream& out) {
  out << std::setprecision(17);
  for (const auto& row : trace) {
    out << trial << ',' << row.q << ',' << row.j << ',' << row.u_tilde << ','
        << row.v << ',' << row.g << ',' << (row.violation ? 1 : 0) << ','
        << row.queries_cumulative << '\n';
  }
}

}  // namespace qge::engine
