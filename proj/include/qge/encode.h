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
#ifndef QGE_ENCODE_H_
#define QGE_ENCODE_H_

#include <iosfwd>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "qge/common.h"
#include "qge/statevector.h"

// Matrix-level block-encodings. Transformations act on eigenvalues of the
// encoded block directly; no phase-factor sequences are synthesized.
namespace qge::encode {

// A unitary of size (ancilla_dim * system_dim) whose leading system_dim x
// system_dim block, times `normalization`, is the encoded operator.
struct BlockEncoding {
  CMatrix unitary;
  Eigen::Index system_dim = 0;
  Eigen::Index ancilla_dim = 0;
  double normalization = 1.0;
  // Ancilla qubits a circuit realization would need; cost bookkeeping only.
  int ancilla_qubit_budget = 1;

  CMatrix TopLeft() const {
    return unitary.topLeftCorner(system_dim, system_dim);
  }
  CMatrix EncodedOperator() const { return normalization * TopLeft(); }

  // max |U†U - I|
  double UnitarityError() const;
  // max |alpha * block - expected|
  double RecoveryError(const CMatrix& expected) const;
};

double SpectralNorm(const CMatrix& hermitian);
bool IsHermitian(const CMatrix& m, double tol = 1e-12);

// Dilation [[A, S], [S, -A]] with A = O / alpha and S = sqrt(I - A^2).
// Throws kNormalization if ||O|| > alpha, kNonHermitian if O is not Hermitian.
BlockEncoding BlockEncode(const CMatrix& o, double alpha);

// Block-encoding of sum_j x_j O_j with normalization M (the leading block is
// (1/M) sum_j x_j O_j). Inputs must share system_dim and have normalization 1.
// Coefficients must lie in [-1/2, 1/2]. The ancilla budget is ceil(log2 M) + 1.
BlockEncoding ControlledLcu(std::span<const double> x,
                            std::span<const BlockEncoding> encodings);

enum class PolynomialBasis { kMonomial, kChebyshev };

struct PolynomialSpec {
  PolynomialBasis basis = PolynomialBasis::kMonomial;
  std::vector<double> coefficients;  // index i multiplies x^i or T_i(x)

  int degree() const;
  double Evaluate(double x) const;
  // Max |f| over 10 * max(degree, 1) + 1 equispaced points of [-1, 1].
  double SampledSupNorm() const;
  bool IsBounded(double tol = 1e-12) const { return SampledSupNorm() <= 1.0 + tol; }

  static PolynomialSpec Identity();
  static PolynomialSpec Chebyshev(int n);
};

// Block-encoding of f applied to the eigenvalues of the encoded block,
// U f(Sigma) U†, with normalization 1. For a block-diagonal input this is the
// direct sum of f over the blocks. Throws kNonHermitian for a non-Hermitian
// block and kNormalization if |f| > 1 on the spectrum or on [-1, 1].
BlockEncoding EigenPolyTransform(const BlockEncoding& b, const PolynomialSpec& f);

struct ValidityReport {
  bool current_valid = false;
  double measured_norm = 0.0;  // || encoded operator ||
  double bound = 0.0;          // sigma * (1 - margin)
  std::optional<double> sample_fraction;
  size_t samples = 0;
};

struct AmplifyResult {
  BlockEncoding encoding;
  ValidityReport report;
};

// Coefficient vectors x plus the operators they combine, used to measure the
// fraction of x for which || sum_j x_j O_j || stays inside the window.
struct AmplifySample {
  std::span<const CMatrix> operators;
  std::span<const RVector> coefficient_vectors;
};

// Fraction of coefficient vectors with || sum_j x_j O_j || <= sigma (1 - margin).
double ValidityFraction(const AmplifySample& sample, double sigma, double margin);

// Rescales the normalization to sigma: the new leading block is
// (alpha / sigma) times the old one. Throws AmplificationOverflow when the
// encoded operator norm exceeds sigma (1 - margin).
AmplifyResult UniformAmplify(const BlockEncoding& b, double sigma, double margin,
                             const AmplifySample* sample = nullptr);

// sqrt(||sum_j (O_j^{(eta)})^2|| * ln d) scaled by `constant`.
double SymmetricAmplificationScale(std::span<const CMatrix> restricted,
                                   double constant = 1.0);

// e^{iOt} via eigendecomposition.
CMatrix Evolve(const CMatrix& o, double t);

// | <psi| e^{i t sum_j x_j A_j} |psi> - e^{i t sum_j x_j <A_j>} | at t = pi 2^q.
// Throws kContract if some |<A_j>| > 2^{-q}.
double PhaseEncodingDeviation(std::span<const CMatrix> a_set,
                              std::span<const double> x, int q,
                              const statevector::PureState& psi);

// Debug dump: 16-byte header (magic "QGEBE\0", two zero pad bytes, rows and
// cols as little-endian uint32) followed by row-major (re, im) float64 pairs.
void WriteBlockEncodingBinary(const CMatrix& unitary, std::ostream& out);
CMatrix ReadBlockEncodingBinary(std::istream& in);

}  // namespace qge::encode

#endif  // QGE_ENCODE_H_
