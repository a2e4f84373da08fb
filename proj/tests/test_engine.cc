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

#include <cmath>
#include <sstream>

#include <gtest/gtest.h>

namespace qge::engine {
namespace {

Problem RdmProblem(int n, int k, int eta, uint64_t seed) {
  std::mt19937_64 rng(seed);
  Problem p{fermion::EstimationTargets(n, k), statevector::RandomSectorState(n, eta, rng), eta,
            k};
  return p;
}

Problem PauliZOnPlus() {
  fermion::Observable z;
  z.matrix = SparseCMatrix(2, 2);
  z.matrix.insert(0, 0) = 1.0;
  z.matrix.insert(1, 1) = -1.0;
  z.label = "Z";
  CVector plus = CVector::Constant(2, 1.0 / std::sqrt(2.0));
  return Problem{{z}, statevector::PureState(plus), std::nullopt, 0};
}

ScheduleConfig Config(Method m, double eps) {
  ScheduleConfig c;
  c.method = m;
  c.epsilon = eps;
  return c;
}

TEST(UpdateStep, Examples) {
  EXPECT_EQ(UpdateStep(0.0, 0.0, 0), 0.0);
  EXPECT_NEAR(UpdateStep(0.5, 0.25, 2), 0.5 + kPi / 16, 1e-15);
  EXPECT_NEAR(UpdateStep(0.5, 0.25, 2), 0.69635, 1e-5);
  EXPECT_EQ(UpdateStep(0.9, 0.375, 0), 1.0);
  EXPECT_EQ(UpdateStep(-0.9, -0.375, 0), -1.0);
}

TEST(RunAdaptive, PauliZOnPlusStaysNearZero) {
  std::mt19937_64 rng(1);
  const auto r = RunAdaptive(PauliZOnPlus(), Config(Method::kPriorQge, 0.05), rng);
  ASSERT_EQ(r.estimates.size(), 1u);
  EXPECT_NEAR(r.exact[0], 0.0, 1e-15);
  EXPECT_LE(std::abs(r.estimates[0]), 0.05);
  ASSERT_FALSE(r.warnings.empty());  // M = 1 is tiny
}

TEST(RunAdaptive, OccupationsOfABasisState) {
  Problem p{fermion::EstimationTargets(2, 1), statevector::PureState::Basis(2, 0b01), 1, 1};
  for (Method m : {Method::kPriorQge, Method::kMethod1, Method::kMethod2}) {
    std::mt19937_64 rng(2);
    const auto r = RunAdaptive(p, Config(m, 0.01), rng);
    for (size_t j = 0; j < p.observables.size(); ++j) {
      const auto& label = p.observables[j].label;
      if (label == "Re(0,0)") EXPECT_NEAR(r.estimates[j], 1.0, 0.01) << MethodName(m);
      if (label == "Re(1,1)") EXPECT_NEAR(r.estimates[j], 0.0, 0.01) << MethodName(m);
    }
    for (const auto& row : r.trace) {
      EXPECT_GE(row.u_tilde, -1.0);
      EXPECT_LE(row.u_tilde, 1.0);
    }
  }
}

TEST(RunAdaptive, MeanSquaredErrorWithinBudget) {
  const auto p = RdmProblem(4, 2, 2, 3);
  ASSERT_EQ(p.NontrivialCount(), 66u);
  for (Method m : {Method::kPriorQge, Method::kMethod1, Method::kMethod2}) {
    const auto s = RunTrials(p, Config(m, 0.1), 60, 11);
    EXPECT_LE(s.max_mse, 0.01) << MethodName(m);
    EXPECT_TRUE(s.warnings.empty());
  }
}

TEST(RunAdaptive, RequiresSectorForSymmetricMethods) {
  auto p = RdmProblem(3, 1, 1, 4);
  p.sector.reset();
  std::mt19937_64 rng(4);
  for (Method m : {Method::kMethod1, Method::kMethod2}) {
    try {
      RunAdaptive(p, Config(m, 0.1), rng);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::kInvalidInput);
    }
  }
  EXPECT_NO_THROW(RunAdaptive(p, Config(Method::kPriorQge, 0.1), rng));
  EXPECT_THROW(RunAdaptive(p, Config(Method::kQae, 0.1), rng), Error);
}

TEST(RunAdaptive, RejectsStateOutsideSector) {
  auto p = RdmProblem(3, 1, 1, 5);
  p.sector = 2;
  std::mt19937_64 rng(5);
  EXPECT_THROW(RunAdaptive(p, Config(Method::kMethod1, 0.1), rng), Error);
}

TEST(Contract, IdealRunsHoldAndFailuresBreakIt) {
  const auto p = RdmProblem(4, 1, 2, 6);
  std::mt19937_64 rng(6);
  int ideal_violations = 0;
  for (int t = 0; t < 20; ++t) {
    const auto r = RunAdaptive(p, Config(Method::kMethod1, 0.02), rng);
    ideal_violations += static_cast<int>(PerIterationContractCheck(r.trace).violations);
  }
  EXPECT_LE(ideal_violations, 1);

  auto noisy = Config(Method::kMethod1, 0.02);
  noisy.noise.fail_probability = 0.5;
  noisy.repetition_override = std::vector<int>(7, 1);
  bool any = false;
  for (int t = 0; t < 5 && !any; ++t) {
    const auto r = RunAdaptive(p, noisy, rng);
    const auto report = PerIterationContractCheck(r.trace);
    EXPECT_GT(report.checked, 0u);
    any = report.any;
  }
  EXPECT_TRUE(any);
}

TEST(Contract, FirstIterationIsNeverChecked) {
  std::vector<TraceRow> rows(3);
  for (auto& r : rows) r.violation = true;
  const auto report = PerIterationContractCheck(rows);
  EXPECT_EQ(report.checked, 0u);
  EXPECT_FALSE(report.any);
}

TEST(Ledger, MonotoneTelescopingAndScheduled) {
  const auto p = RdmProblem(4, 2, 2, 7);
  for (Method m : {Method::kPriorQge, Method::kMethod1, Method::kMethod2}) {
    std::mt19937_64 rng(7);
    const auto cfg = Config(m, 1.0 / 32);
    const auto r = RunAdaptive(p, cfg, rng);
    ASSERT_EQ(r.ledger.records.size(), 6u);
    double prev = 0.0;
    for (const auto& rec : r.ledger.records) {
      EXPECT_GE(rec.cumulative, prev);
      EXPECT_EQ(rec.method, m);
      prev = rec.cumulative;
    }
    EXPECT_TRUE(CheckTelescoping(r.ledger, cfg.confidence).holds) << MethodName(m);

    cost::CostParams params;
    params.modes = 4;
    params.order = 2;
    params.eta = 2;
    params.epsilon = cfg.epsilon;
    params.observable_count = 66.0;
    const double model = cost::ScheduledQueries(m, params);
    EXPECT_NEAR(r.ledger.Total() / model, 1.0, 0.1) << MethodName(m);
    EXPECT_NEAR(r.ledger.aleph, DefaultAleph(p, cfg), 1e-12);
  }
}

TEST(Ledger, ExplicitAlephIsCharged) {
  auto cfg = Config(Method::kPriorQge, 0.25);
  cfg.aleph = 2.0;
  cfg.repetition_override = {1, 2, 3};
  std::mt19937_64 rng(8);
  const auto r = RunAdaptive(RdmProblem(3, 1, 1, 8), cfg, rng);
  EXPECT_EQ(r.ledger.Total(), 2.0 * (1 + 2 * 2 + 4 * 3));
}

TEST(RunTrials, IndependentOfJobCount) {
  const auto p = RdmProblem(4, 1, 2, 9);
  const auto cfg = Config(Method::kMethod2, 0.05);
  const auto a = RunTrials(p, cfg, 24, 77, 1);
  const auto b = RunTrials(p, cfg, 24, 77, 4);
  EXPECT_EQ(a.mse, b.mse);
  EXPECT_EQ(a.mean_estimate, b.mean_estimate);
  EXPECT_EQ(a.total_queries, b.total_queries);
  EXPECT_THROW(RunTrials(p, cfg, 0, 1), Error);
}

TEST(RunTrials, CountsViolatingRuns) {
  const auto p = RdmProblem(4, 1, 2, 10);
  auto cfg = Config(Method::kMethod1, 0.05);
  cfg.noise.fail_probability = 0.5;
  cfg.repetition_override = std::vector<int>(6, 1);
  const auto s = RunTrials(p, cfg, 10, 3, 2);
  EXPECT_GT(s.violating_run_fraction, 0.0);
  EXPECT_TRUE(s.runs.empty());
}

TEST(SamplingBaseline, ShotsAndAccuracy) {
  const auto p = RdmProblem(4, 2, 2, 11);
  std::mt19937_64 rng(11);
  const auto b = RunSamplingBaseline(p, 0.05, rng);
  EXPECT_EQ(b.shots_per_observable, 400);
  EXPECT_EQ(b.total_queries, 66.0 * 400);
  for (size_t j = 0; j < b.estimates.size(); ++j) {
    EXPECT_NEAR(b.estimates[j], b.exact[j], 0.25) << j;
  }
  EXPECT_THROW(RunSamplingBaseline(p, 1.5, rng), Error);
}

TEST(TraceCsv, Format) {
  std::mt19937_64 rng(12);
  const auto r = RunAdaptive(RdmProblem(2, 1, 1, 12), Config(Method::kPriorQge, 0.25), rng);
  std::ostringstream os;
  WriteTraceCsvHeader(os);
  WriteTraceCsvRows(3, r.trace, os);
  std::istringstream is(os.str());
  std::string line;
  std::getline(is, line);
  EXPECT_EQ(line, "trial,q,j,u_tilde,v,g,violation_flag,queries_cumulative");
  size_t rows = 0;
  while (std::getline(is, line)) {
    ++rows;
    EXPECT_EQ(line.rfind("3,", 0), 0u);
    EXPECT_EQ(std::count(line.begin(), line.end(), ','), 7);
  }
  EXPECT_EQ(rows, r.trace.size());
}

}  // namespace
}  // namespace qge::engine
