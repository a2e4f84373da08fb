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
#ifndef QGE_FERMION_H_
#define QGE_FERMION_H_

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "qge/common.h"

// Jordan-Wigner representations of fermionic k-RDM observables.
//
// Mode i is stored in bit i of the computational-basis index (mode 0 is the
// least significant bit); a set bit means the mode is occupied. The parity
// string of a_j counts the occupied modes with index below j.
namespace qge::fermion {

// Mutation hook for the verification suite. Production callers never set it.
struct JordanWignerHook {
  bool drop_parity_string = false;
};

struct LadderMonomial {
  std::vector<int> creators;      // p_1 ... p_k, applied as a†_{p1}...a†_{pk}
  std::vector<int> annihilators;  // q_1 ... q_k
  int modes = 0;
};

// Throws kInvalidMonomial on out-of-range or repeated indices, or k = 0.
void Validate(const LadderMonomial& m);

// Single-mode operators as sparse 2^N x 2^N matrices.
SparseCMatrix Annihilator(int mode, int modes, JordanWignerHook hook = {});
SparseCMatrix Creator(int mode, int modes, JordanWignerHook hook = {});

// a†_{p1}...a†_{pk} a_{q1}...a_{qk}.
SparseCMatrix BuildLadderMonomial(const LadderMonomial& m,
                                  JordanWignerHook hook = {});

enum class Part { kReal, kImag };

struct Observable {
  SparseCMatrix matrix;
  std::string label;
  int order = 0;
  std::vector<int> p;
  std::vector<int> q;
  Part part = Part::kReal;
  // Identically zero (Im part of a p == q element).
  bool trivial = false;
  // p or q is not strictly increasing; equal up to sign to the observable
  // built from the sorted tuples.
  bool permuted = false;
};

// Hermitian and norm-bounded to 1e-12; throws kNonHermitian / kNormalization.
void CheckObservable(const Observable& o);

struct ObservableSet {
  int modes = 0;
  int order = 0;
  std::vector<Observable> items;

  // Total enumerated count M (ordered tuples, Re and Im).
  size_t size() const { return items.size(); }
  // Observables whose p and q tuples are both strictly increasing. The sector
  // norm identity C(eta,k) C(N-eta+k,k) holds for this subset.
  std::vector<Observable> Canonical() const;
  size_t CanonicalCount() const;
  size_t NontrivialCanonicalCount() const;
};

// Every ordered pair of ordered k-tuples with distinct entries, Re and Im.
// Throws kInvalidOrder unless 1 <= k <= N.
ObservableSet KrdmObservableSet(int modes, int order);

// Observables of the canonical set minus the trivial ones; the default
// estimation target.
std::vector<Observable> EstimationTargets(int modes, int order);

// Manifest CSV: label,k,p,q,part,trivial
void WriteManifestCsv(const ObservableSet& set, std::ostream& out);

int Popcount(uint64_t x);

struct SectorBasis {
  int modes = 0;
  int eta = 0;
  std::vector<int64_t> indices;  // ascending, all of Hamming weight eta
  int64_t dimension() const { return static_cast<int64_t>(indices.size()); }
};

SectorBasis MakeSectorBasis(int modes, int eta);

// Rows and columns of O selected by the sector basis. Throws
// kSymmetryViolation when O couples different particle numbers.
CMatrix SectorRestrict(const SparseCMatrix& o, int modes, int eta);
CMatrix SectorRestrict(const Observable& o, int modes, int eta);

// True when every nonzero entry connects equal Hamming weights (1e-12).
bool ConservesParticleNumber(const SparseCMatrix& o, double tol = 1e-12);

// Spectral norm of sum_j (O_j^{(eta)})^2 via exact eigensolve.
double SumSquaresSectorNorm(const std::vector<Observable>& observables,
                            int modes, int eta);
double SumSquaresSectorNorm(const std::vector<CMatrix>& restricted);

// C(eta,k) * C(N-eta+k,k); zero when k > eta.
double BinomNormFormula(int modes, int order, int eta);

}  // namespace qge::fermion

#endif  // QGE_FERMION_H_
