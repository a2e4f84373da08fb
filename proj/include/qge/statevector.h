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
#ifndef QGE_STATEVECTOR_H_
#define QGE_STATEVECTOR_H_

#include <iosfwd>
#include <random>

#include "qge/common.h"

namespace qge::statevector {

inline constexpr int kMaxFullQubits = 12;
inline constexpr int kMaxSectorModes = 20;

// Unit vector of length 2^N. The vector stands in for U_psi|0...0>.
class PureState {
 public:
  PureState() = default;
  // Throws kInvalidInput if the length is not a power of two <= 2^12 or the
  // norm deviates from 1 by more than 1e-12.
  explicit PureState(CVector amplitudes);

  // Renormalizes before validating.
  static PureState Normalized(CVector amplitudes);
  static PureState Basis(int qubits, int64_t index);

  int qubits() const { return qubits_; }
  int64_t dimension() const { return amplitudes_.size(); }
  const CVector& amplitudes() const { return amplitudes_; }

 private:
  CVector amplitudes_;
  int qubits_ = 0;
};

// Amplitudes over the Hamming-weight-eta basis only, for up to 20 modes.
struct SectorState {
  int modes = 0;
  int eta = 0;
  CVector amplitudes;  // length C(N, eta), ordered as fermion::SectorBasis

  PureState ToFull() const;
  static SectorState FromFull(const PureState& psi, int eta);
};

// Haar-random state supported on the Hamming-weight-eta indices. The global
// phase is fixed so the first supported amplitude is real and positive.
PureState RandomSectorState(int modes, int eta, std::mt19937_64& rng);
SectorState RandomSectorAmplitudes(int modes, int eta, std::mt19937_64& rng);

// Re <psi|O|psi>; throws kNonHermitian if |Im| > 1e-10, kShape on mismatch.
double Expectation(const SparseCMatrix& o, const PureState& psi);
double Expectation(const CMatrix& o, const PureState& psi);
// Sector-restricted operator against sector amplitudes.
double Expectation(const CMatrix& restricted, const SectorState& psi);

// U|psi>. Throws kNonUnitary if U deviates from unitarity by more than 1e-10.
PureState Apply(const CMatrix& u, const PureState& psi);

// True when all amplitude weight lies on Hamming weight eta (to tol).
bool SupportedOnSector(const PureState& psi, int eta, double tol = 1e-12);

// Plain text, one "index re im" triple per line for nonzero amplitudes; the
// first line is "# qubits N".
void WriteState(const PureState& psi, std::ostream& out);
PureState ReadState(std::istream& in);

}  // namespace qge::statevector

#endif  // QGE_STATEVECTOR_H_
