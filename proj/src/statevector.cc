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
#include "qge/statevector.h"

#include <bit>
#include <iomanip>
#include <istream>
#include <map>
#include <ostream>
#include <sstream>
#include <string>

#include "qge/fermion.h"

namespace qge::statevector {

namespace {

int QubitsForLength(int64_t n) {
  if (n < 2 || !std::has_single_bit(static_cast<uint64_t>(n))) {
    throw Error(ErrorKind::kInvalidInput, "state length must be 2^N, N >= 1");
  }
  const int q = std::countr_zero(static_cast<uint64_t>(n));
  if (q > kMaxFullQubits) {
    throw Error(ErrorKind::kInvalidInput,
                "full state vectors are capped at 12 qubits");
  }
  return q;
}

void FixGlobalPhase(CVector& v) {
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    const double mag = std::abs(v[i]);
    if (mag > 0.0) {
      v *= std::conj(v[i]) / mag;
      return;
    }
  }
}

}  // namespace

PureState::PureState(CVector amplitudes) : amplitudes_(std::move(amplitudes)) {
  qubits_ = QubitsForLength(amplitudes_.size());
  if (std::abs(amplitudes_.norm() - 1.0) > 1e-12) {
    throw Error(ErrorKind::kInvalidInput, "state is not normalized");
  }
}

PureState PureState::Normalized(CVector amplitudes) {
  const double n = amplitudes.norm();
  if (n == 0.0) throw Error(ErrorKind::kInvalidInput, "zero state vector");
  return PureState(amplitudes / n);
}

PureState PureState::Basis(int qubits, int64_t index) {
  if (qubits < 1 || qubits > kMaxFullQubits) {
    throw Error(ErrorKind::kInvalidInput, "qubit count out of range");
  }
  const int64_t dim = int64_t{1} << qubits;
  if (index < 0 || index >= dim) {
    throw Error(ErrorKind::kInvalidInput, "basis index out of range");
  }
  CVector v = CVector::Zero(dim);
  v[index] = 1.0;
  return PureState(std::move(v));
}

PureState SectorState::ToFull() const {
  const auto basis = fermion::MakeSectorBasis(modes, eta);
  if (basis.dimension() != amplitudes.size()) {
    throw Error(ErrorKind::kShape, "sector amplitudes do not match C(N, eta)");
  }
  if (modes > kMaxFullQubits) {
    throw Error(ErrorKind::kInvalidInput,
                "full state vectors are capped at 12 qubits");
  }
  CVector v = CVector::Zero(int64_t{1} << modes);
  for (int64_t i = 0; i < basis.dimension(); ++i) v[basis.indices[i]] = amplitudes[i];
  return PureState(std::move(v));
}

SectorState SectorState::FromFull(const PureState& psi, int eta) {
  const auto basis = fermion::MakeSectorBasis(psi.qubits(), eta);
  SectorState s{psi.qubits(), eta, CVector(basis.dimension())};
  for (int64_t i = 0; i < basis.dimension(); ++i) {
    s.amplitudes[i] = psi.amplitudes()[basis.indices[i]];
  }
  return s;
}

SectorState RandomSectorAmplitudes(int modes, int eta, std::mt19937_64& rng) {
  if (modes < 1 || modes > kMaxSectorModes) {
    throw Error(ErrorKind::kInvalidInput, "mode count out of range");
  }
  if (eta < 0 || eta > modes) {
    throw Error(ErrorKind::kInvalidInput, "particle number outside [0, N]");
  }
  const auto dim = static_cast<Eigen::Index>(Binomial(modes, eta));
  CVector v(dim);
  for (Eigen::Index i = 0; i < dim; ++i) {
    const double re = StandardNormal(rng);
    const double im = StandardNormal(rng);
    v[i] = Complex(re, im);
  }
  v /= v.norm();
  FixGlobalPhase(v);
  return SectorState{modes, eta, std::move(v)};
}

PureState RandomSectorState(int modes, int eta, std::mt19937_64& rng) {
  if (modes > kMaxFullQubits) {
    throw Error(ErrorKind::kInvalidInput,
                "full state vectors are capped at 12 qubits");
  }
  return RandomSectorAmplitudes(modes, eta, rng).ToFull();
}

namespace {

double RealPartChecked(Complex value) {
  if (std::abs(value.imag()) > 1e-10) {
    throw Error(ErrorKind::kNonHermitian,
                "expectation has imaginary residual above 1e-10");
  }
  return value.real();
}

}  // namespace

double Expectation(const SparseCMatrix& o, const PureState& psi) {
  if (o.rows() != psi.dimension() || o.cols() != psi.dimension()) {
    throw Error(ErrorKind::kShape, "operator and state dimensions differ");
  }
  const CVector opsi = o * psi.amplitudes();
  return RealPartChecked(psi.amplitudes().dot(opsi));
}

double Expectation(const CMatrix& o, const PureState& psi) {
  if (o.rows() != psi.dimension() || o.cols() != psi.dimension()) {
    throw Error(ErrorKind::kShape, "operator and state dimensions differ");
  }
  return RealPartChecked(psi.amplitudes().dot(o * psi.amplitudes()));
}

double Expectation(const CMatrix& restricted, const SectorState& psi) {
  if (restricted.rows() != psi.amplitudes.size() ||
      restricted.cols() != psi.amplitudes.size()) {
    throw Error(ErrorKind::kShape, "operator and sector state dimensions differ");
  }
  return RealPartChecked(psi.amplitudes.dot(restricted * psi.amplitudes));
}

PureState Apply(const CMatrix& u, const PureState& psi) {
  if (u.rows() != psi.dimension() || u.cols() != psi.dimension()) {
    throw Error(ErrorKind::kShape, "operator and state dimensions differ");
  }
  const CMatrix gram = u.adjoint() * u;
  const double dev =
      (gram - CMatrix::Identity(u.rows(), u.cols())).cwiseAbs().maxCoeff();
  if (dev > 1e-10) {
    throw Error(ErrorKind::kNonUnitary, "operator deviates from unitarity");
  }
  return PureState::Normalized(u * psi.amplitudes());
}

bool SupportedOnSector(const PureState& psi, int eta, double tol) {
  double off = 0.0;
  for (int64_t i = 0; i < psi.dimension(); ++i) {
    if (std::popcount(static_cast<uint64_t>(i)) != eta) {
      off += std::norm(psi.amplitudes()[i]);
    }
  }
  return std::sqrt(off) <= tol;
}

void WriteState(const PureState& psi, std::ostream& out) {
  out << "# qubits " << psi.qubits() << '\n';
  out << std::setprecision(17);
  for (int64_t i = 0; i < psi.dimension(); ++i) {
    const Complex a = psi.amplitudes()[i];
    if (a == Complex(0.0, 0.0)) continue;
    out << i << ' ' << a.real() << ' ' << a.imag() << '\n';
  }
}

PureState ReadState(std::istream& in) {
  std::string line;
  int qubits = -1;
  std::map<int64_t, Complex> entries;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream ls(line);
    if (line[0] == '#') {
      std::string hash, key;
      ls >> hash >> key;
      if (key == "qubits") ls >> qubits;
      continue;
    }
    int64_t idx;
    double re, im;
    if (!(ls >> idx >> re >> im)) {
      throw Error(ErrorKind::kIo, "malformed state line " + std::to_string(line_no));
    }
    entries[idx] += Complex(re, im);
  }
  if (qubits < 1) {
    int64_t max_idx = entries.empty() ? 0 : entries.rbegin()->first;
    qubits = 1;
    while ((int64_t{1} << qubits) <= max_idx) ++qubits;
  }
  if (qubits > kMaxFullQubits) {
    throw Error(ErrorKind::kInvalidInput, "state file exceeds 12 qubits");
  }
  CVector v = CVector::Zero(int64_t{1} << qubits);
  for (const auto& [idx, a] : entries) {
    if (idx < 0 || idx >= v.size()) {
      throw Error(ErrorKind::kIo, "state index out of range");
    }
    v[idx] = a;
  }
  return PureState(std::move(v));
}

}  // namespace qge::statevector
