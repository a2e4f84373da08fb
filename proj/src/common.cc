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
#include "qge/common.h"

#include <cmath>
#include <sstream>

#ifndef QGE_VERSION
#define QGE_VERSION "dev"
#endif

namespace qge {

const char* Version() { return QGE_VERSION; }

const char* ErrorKindName(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kInvalidMonomial: return "invalid-monomial";
    case ErrorKind::kInvalidOrder: return "invalid-order";
    case ErrorKind::kSymmetryViolation: return "symmetry-violation";
    case ErrorKind::kInvalidInput: return "invalid-input";
    case ErrorKind::kInvalidParameter: return "invalid-parameter";
    case ErrorKind::kNormalization: return "normalization";
    case ErrorKind::kShape: return "shape";
    case ErrorKind::kAmplificationOverflow: return "amplification-overflow";
    case ErrorKind::kContract: return "contract";
    case ErrorKind::kNonHermitian: return "non-hermitian";
    case ErrorKind::kNonUnitary: return "non-unitary";
    case ErrorKind::kNotApplicable: return "not-applicable";
    case ErrorKind::kConfig: return "config";
    case ErrorKind::kIo: return "io";
  }
  return "unknown";
}

namespace {

std::string OverflowMessage(double measured, double bound) {
  std::ostringstream os;
  os.precision(17);
  os << "encoded operator norm " << measured << " exceeds amplification bound "
     << bound;
  return os.str();
}

}  // namespace

AmplificationOverflow::AmplificationOverflow(double measured_norm,
                                             double bound)
    : Error(ErrorKind::kAmplificationOverflow,
            OverflowMessage(measured_norm, bound)),
      measured_norm_(measured_norm),
      bound_(bound) {}

uint64_t Binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  unsigned __int128 acc = 1;
  for (int i = 1; i <= k; ++i) {
    // acc * (n - k + i) / i stays integral at every step.
    acc = acc * static_cast<unsigned __int128>(n - k + i) / i;
    if (acc > static_cast<unsigned __int128>(UINT64_MAX)) {
      throw Error(ErrorKind::kInvalidInput,
                  "binomial coefficient overflows 64 bits");
    }
  }
  return static_cast<uint64_t>(acc);
}

double LogBinomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) {
    throw Error(ErrorKind::kInvalidInput, "log-binomial outside support");
  }
  return std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0);
}

}  // namespace qge
