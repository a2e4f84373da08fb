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
#ifndef QGE_VERIFY_H_
#define QGE_VERIFY_H_

#include <cstdint>
#include <string>
#include <vector>

// Brute-force self-checks behind `qge_lab verify`.
namespace qge::verify {

struct Options {
  // Relative tolerance for floating-point identities. Values below
  // kEigenTolerance are below what the dense eigensolvers can certify and
  // make the run fail on purpose.
  double tolerance = 1e-9;
  // Drops the Jordan-Wigner parity string in the anticommutation suite.
  bool inject_jw_sign_error = false;
  uint64_t seed = 2026;
  int max_modes = 8;
};

struct Check {
  std::string name;
  bool passed = false;
  std::string detail;
};

struct SuiteResult {
  std::string name;
  std::vector<Check> checks;

  bool passed() const;
  size_t failures() const;
};

// Subspace transform: eigenvalue polynomial of a block-diagonal encoding versus
// the matrix polynomial of each block.
SuiteResult LemmaOneSuite(const Options& options);
// Sector norm of the canonical k-RDM set versus C(eta,k) C(N-eta+k,k).
SuiteResult NormIdentitySuite(const Options& options);
// Canonical anticommutation relations of the Jordan-Wigner ladder operators.
SuiteResult AnticommutationSuite(const Options& options);
// Exact single-shot success probability and QFT unitarity per grid size.
SuiteResult ProbeCalibrationSuite(const Options& options);
// Engine ledger against the schedule-resolved closed form and the telescoped
// bound.
SuiteResult LedgerConsistencySuite(const Options& options);
// Fails when the tolerance is below the solver floor.
SuiteResult ToleranceFloorSuite(const Options& options);

// Suite names: tolerance, lemma1, norm-identity, anticommutation, probe,
// ledger. Empty selects all.
std::vector<SuiteResult> Run(const Options& options,
                             const std::vector<std::string>& suites = {});

}  // namespace qge::verify

#endif  // QGE_VERIFY_H_
