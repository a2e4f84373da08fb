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
#include "qge/verify.h"

#include <algorithm>
#include <cmath>
#include <random>
#include <sstream>

#include "qge/cost.h"
#include "qge/encode.h"
#include "qge/engine.h"
#include "qge/fermion.h"
#include "qge/probe.h"
#include "qge/statevector.h"

namespace qge::verify {
namespace {

std::string Format(double x) {
  std::ostringstream os;
  os.precision(6);
  os << x;
  return os.str();
}

CMatrix RandomHermitian(int n, std::mt19937_64& rng) {
  CMatrix g(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) g(i, j) = Complex(StandardNormal(rng), StandardNormal(rng));
  }
  return 0.5 * (g + g.adjoint());
}

// Chebyshev series of a Hermitian matrix by the Clenshaw recurrence; needs no
// eigendecomposition.
CMatrix ChebyshevMatrixSeries(const CMatrix& a, const std::vector<double>& c) {
  const auto n = a.rows();
  const CMatrix id = CMatrix::Identity(n, n);
  CMatrix b1 = CMatrix::Zero(n, n);
  CMatrix b2 = CMatrix::Zero(n, n);
  for (size_t k = c.size(); k-- > 1;) {
    CMatrix b0 = c[k] * id + 2.0 * a * b1 - b2;
    b2 = std::move(b1);
    b1 = std::move(b0);
  }
  return c[0] * id + a * b1 - b2;
}

}  // namespace

bool SuiteResult::passed() const { return failures() == 0; }

size_t SuiteResult::failures() const {
  return static_cast<size_t>(
      std::count_if(checks.begin(), checks.end(), [](const Check& c) { return !c.passed; }));
}

SuiteResult ToleranceFloorSuite(const Options& options) {
  SuiteResult suite{"tolerance", {}};
  const bool ok = options.tolerance >= kEigenTolerance;
  suite.checks.push_back(
      {"tolerance>=solver-floor", ok,
       ok ? "tolerance " + Format(options.tolerance)
          : "tolerance " + Format(options.tolerance) +
                " is below the 1e-12 floor of the dense eigensolvers; expected failure"});
  return suite;
}

SuiteResult LemmaOneSuite(const Options& options) {
  SuiteResult suite{"lemma1", {}};
  std::mt19937_64 rng(StreamSeed(options.seed, 1));
  constexpr int kCases = 100;
  double worst = 0.0;
  int failed = 0;
  for (int t = 0; t < kCases; ++t) {
    std::uniform_int_distribution<int> block_count(2, 3);
    std::uniform_int_distribution<int> block_size(2, 6);
    std::uniform_int_distribution<int> degree_dist(0, 6);
    std::vector<CMatrix> blocks(block_count(rng));
    int dim = 0;
    for (auto& b : blocks) {
      b = RandomHermitian(block_size(rng), rng);
      b *= 0.95 / encode::SpectralNorm(b);
      dim += static_cast<int>(b.rows());
    }
    CMatrix a = CMatrix::Zero(dim, dim);
    for (int off = 0; const auto& b : blocks) {
      a.block(off, off, b.rows(), b.cols()) = b;
      off += static_cast<int>(b.rows());
    }
    // sum |c_i| <= 1 keeps |f| <= 1 on [-1, 1].
    std::vector<double> c(degree_dist(rng) + 1);
    double l1 = 0.0;
    for (auto& x : c) {
      x = StandardNormal(rng);
      l1 += std::abs(x);
    }
    for (auto& x : c) x /= l1;
    const encode::PolynomialSpec f{encode::PolynomialBasis::kChebyshev, c};

    const CMatrix got = encode::EigenPolyTransform(encode::BlockEncode(a, 1.0), f).TopLeft();
    double err = 0.0;
    for (int off = 0; const auto& b : blocks) {
      const CMatrix want = ChebyshevMatrixSeries(b, c);
      err = std::max(err, (got.block(off, off, b.rows(), b.cols()) - want).cwiseAbs().maxCoeff());
      off += static_cast<int>(b.rows());
    }
    // Off-diagonal blocks stay zero.
    CMatrix masked = got;
    for (int off = 0; const auto& b : blocks) {
      masked.block(off, off, b.rows(), b.cols()).setZero();
      off += static_cast<int>(b.rows());
    }
    err = std::max(err, masked.cwiseAbs().maxCoeff());
    worst = std::max(worst, err);
    if (err > options.tolerance) ++failed;
  }
  suite.checks.push_back({"block-diagonal-transform", failed == 0,
                          std::to_string(kCases - failed) + "/" + std::to_string(kCases) +
                              " cases, max deviation " + Format(worst)});
  return suite;
}

SuiteResult NormIdentitySuite(const Options& options) {
  SuiteResult suite{"norm-identity", {}};
  for (int k = 1; k <= 2; ++k) {
    for (int n = k; n <= options.max_modes; ++n) {
      const auto canonical = fermion::KrdmObservableSet(n, k).Canonical();
      double worst = 0.0;
      for (int eta = 0; eta <= n; ++eta) {
        const double got = fermion::SumSquaresSectorNorm(canonical, n, eta);
        const double want = fermion::BinomNormFormula(n, k, eta);
        const double rel = want == 0.0 ? std::abs(got) : std::abs(got - want) / want;
        worst = std::max(worst, rel);
      }
      suite.checks.push_back({"N=" + std::to_string(n) + ",k=" + std::to_string(k),
                              worst <= options.tolerance,
                              "max relative deviation " + Format(worst)});
    }
  }
  return suite;
}

SuiteResult AnticommutationSuite(const Options& options) {
  SuiteResult suite{"anticommutation", {}};
  const fermion::JordanWignerHook hook{options.inject_jw_sign_error};
  for (int n = 1; n <= std::min(options.max_modes, 5); ++n) {
    const int64_t dim = int64_t{1} << n;
    SparseCMatrix id(dim, dim);
    id.setIdentity();
    double worst = 0.0;
    for (int i = 0; i < n; ++i) {
      const SparseCMatrix ai = fermion::Annihilator(i, n, hook);
      for (int j = 0; j < n; ++j) {
        const SparseCMatrix aj = fermion::Annihilator(j, n, hook);
        const SparseCMatrix cj = fermion::Creator(j, n, hook);
        SparseCMatrix mixed = ai * cj + cj * ai;
        if (i == j) mixed -= id;
        const SparseCMatrix same = ai * aj + aj * ai;
        const CMatrix dm(mixed), ds(same);
        worst = std::max({worst, dm.cwiseAbs().maxCoeff(), ds.cwiseAbs().maxCoeff()});
      }
    }
    suite.checks.push_back({"N=" + std::to_string(n), worst <= options.tolerance,
                            "max anticommutator residual " + Format(worst)});
  }
  return suite;
}

SuiteResult ProbeCalibrationSuite(const Options& options) {
  SuiteResult suite{"probe", {}};
  constexpr int kPoints = 2001;
  constexpr double kFloor = 0.81;
  for (int p = 2; p <= 6; ++p) {
    const probe::Grid grid = probe::MakeGrid(p);
    const CMatrix f = probe::QftMatrix(grid);
    const double unitarity =
        (f.adjoint() * f - CMatrix::Identity(f.rows(), f.cols())).cwiseAbs().maxCoeff();
    double worst = 1.0;
    double mass = 0.0;
    for (int i = 0; i < kPoints; ++i) {
      // Slopes allowed by the iteration contract, |v| <= 1/pi.
      const double v = (-1.0 + 2.0 * i / (kPoints - 1)) / kPi;
      worst = std::min(worst,
                       probe::SingleShotSuccessProbability(v, grid, probe::Window::kUniform));
      const auto dist = probe::ReadoutDistribution(v, grid, probe::Window::kUniform);
      double total = 0.0;
      for (double x : dist) total += x;
      mass = std::max(mass, std::abs(total - 1.0));
    }
    const std::string tag = "p=" + std::to_string(p);
    suite.checks.push_back({tag + ":success", worst >= kFloor,
                            "min Pr[|g-v|<=2^-p] = " + Format(worst)});
    suite.checks.push_back({tag + ":qft-unitary", unitarity <= options.tolerance,
                            "max |F^dag F - I| = " + Format(unitarity)});
    suite.checks.push_back({tag + ":normalized", mass <= options.tolerance,
                            "max |sum Pr - 1| = " + Format(mass)});
  }
  return suite;
}

SuiteResult LedgerConsistencySuite(const Options& options) {
  SuiteResult suite{"ledger", {}};
  std::mt19937_64 rng(StreamSeed(options.seed, 5));
  for (int n : {2, 4}) {
    for (int k = 1; k <= 2; ++k) {
      const int eta = std::max(k, (n + 1) / 2);
      engine::Problem problem;
      problem.observables = fermion::EstimationTargets(n, k);
      problem.state = statevector::RandomSectorState(n, eta, rng);
      problem.sector = eta;
      problem.rdm_order = k;
      for (auto method : {cost::Method::kPriorQge, cost::Method::kMethod1,
                          cost::Method::kMethod2}) {
        for (int e = 3; e <= 6; ++e) {
          engine::ScheduleConfig config;
          config.epsilon = std::ldexp(1.0, -e);
          config.method = method;
          config.record_trace = false;
          const auto run = engine::RunAdaptive(problem, config, rng);

          cost::CostParams params;
          params.modes = n;
          params.order = k;
          params.eta = eta;
          params.epsilon = config.epsilon;
          params.observable_count = static_cast<double>(problem.NontrivialCount());
          const double model = cost::ScheduledQueries(method, params);
          const double total = run.ledger.Total();
          const double rel = model == 0.0 ? (total == 0.0 ? 0.0 : 1.0)
                                          : std::abs(total - model) / model;
          const auto tele = engine::CheckTelescoping(run.ledger, config.confidence);
          const std::string tag = std::string(cost::MethodName(method)) +
                                  ",N=" + std::to_string(n) + ",k=" + std::to_string(k) +
                                  ",eps=2^-" + std::to_string(e);
          suite.checks.push_back({tag, rel <= 0.1 && tele.holds,
                                  "ledger " + Format(total) + " model " + Format(model) +
                                      " telescoped bound " + Format(tele.bound)});
        }
      }
    }
  }
  return suite;
}

std::vector<SuiteResult> Run(const Options& options, const std::vector<std::string>& suites) {
  auto wanted = [&](const char* name) {
    return suites.empty() || std::find(suites.begin(), suites.end(), name) != suites.end();
  };
  for (const auto& s : suites) {
    static const char* kNames[] = {"tolerance", "lemma1", "norm-identity",
                                   "anticommutation", "probe", "ledger"};
    if (std::none_of(std::begin(kNames), std::end(kNames),
                     [&](const char* n) { return s == n; })) {
      throw Error(ErrorKind::kInvalidParameter, "unknown verify suite " + s);
    }
  }
  std::vector<SuiteResult> out;
  if (wanted("tolerance")) out.push_back(ToleranceFloorSuite(options));
  if (wanted("lemma1")) out.push_back(LemmaOneSuite(options));
  if (wanted("norm-identity")) out.push_back(NormIdentitySuite(options));
  if (wanted("anticommutation")) out.push_back(AnticommutationSuite(options));
  if (wanted("probe")) out.push_back(ProbeCalibrationSuite(options));
  if (wanted("ledger")) out.push_back(LedgerConsistencySuite(options));
  return out;
}

}  // namespace qge::verify
