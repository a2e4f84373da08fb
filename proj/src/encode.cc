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
#include "qge/encode.h"

#include <algorithm>
#include <array>
#include <bit>
#include <cstring>
#include <istream>
#include <ostream>

#include <Eigen/Eigenvalues>

namespace qge::encode {

namespace {

constexpr double kUnitaryTol = 1e-10;

Eigen::SelfAdjointEigenSolver<CMatrix> Eigensolve(const CMatrix& h) {
  Eigen::SelfAdjointEigenSolver<CMatrix> es(h);
  if (es.info() != Eigen::Success) {
    throw Error(ErrorKind::kInvalidInput, "eigensolver did not converge");
  }
  return es;
}

CMatrix ApplySpectralFunction(const Eigen::SelfAdjointEigenSolver<CMatrix>& es,
                              const CVector& values) {
  const CMatrix& v = es.eigenvectors();
  return v * values.asDiagonal() * v.adjoint();
}

void CheckEncodingUnitary(const BlockEncoding& b) {
  if (b.UnitarityError() > kUnitaryTol) {
    throw Error(ErrorKind::kNonUnitary, "block-encoding lost unitarity");
  }
}

}  // namespace

double BlockEncoding::UnitarityError() const {
  const CMatrix gram = unitary.adjoint() * unitary;
  return (gram - CMatrix::Identity(unitary.rows(), unitary.cols()))
      .cwiseAbs()
      .maxCoeff();
}

double BlockEncoding::RecoveryError(const CMatrix& expected) const {
  return (EncodedOperator() - expected).cwiseAbs().maxCoeff();
}

double SpectralNorm(const CMatrix& hermitian) {
  if (hermitian.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<CMatrix> es(hermitian, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

bool IsHermitian(const CMatrix& m, double tol) {
  if (m.rows() != m.cols()) return false;
  return (m - m.adjoint()).cwiseAbs().maxCoeff() <= tol;
}

BlockEncoding BlockEncode(const CMatrix& o, double alpha) {
  if (o.rows() != o.cols() || o.rows() == 0) {
    throw Error(ErrorKind::kShape, "operator must be square and nonempty");
  }
  if (!IsHermitian(o)) throw Error(ErrorKind::kNonHermitian, "operator");
  if (!(alpha > 0.0)) {
    throw Error(ErrorKind::kNormalization, "normalization must be positive");
  }
  const CMatrix a = 0.5 * (o + o.adjoint()) / alpha;
  const auto es = Eigensolve(a);
  const RVector& lam = es.eigenvalues();
  if (lam.cwiseAbs().maxCoeff() > 1.0 + kEigenTolerance) {
    throw Error(ErrorKind::kNormalization, "operator norm exceeds alpha");
  }
  CVector s_diag(lam.size());
  CVector a_diag(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    const double l = std::clamp(lam[i], -1.0, 1.0);
    a_diag[i] = l;
    s_diag[i] = std::sqrt(std::max(0.0, 1.0 - l * l));
  }
  // Rebuild A from clamped eigenvalues so the dilation is exactly unitary.
  const CMatrix a_clamped = ApplySpectralFunction(es, a_diag);
  const CMatrix s = ApplySpectralFunction(es, s_diag);

  const Eigen::Index d = o.rows();
  BlockEncoding b;
  b.unitary.resize(2 * d, 2 * d);
  b.unitary.topLeftCorner(d, d) = a_clamped;
  b.unitary.topRightCorner(d, d) = s;
  b.unitary.bottomLeftCorner(d, d) = s;
  b.unitary.bottomRightCorner(d, d) = -a_clamped;
  b.system_dim = d;
  b.ancilla_dim = 2;
  b.normalization = alpha;
  b.ancilla_qubit_budget = 1;
  return b;
}

BlockEncoding ControlledLcu(std::span<const double> x,
                            std::span<const BlockEncoding> encodings) {
  if (encodings.empty() || x.size() != encodings.size()) {
    throw Error(ErrorKind::kShape,
                "need one coefficient per block-encoding and M >= 1");
  }
  const Eigen::Index d = encodings.front().system_dim;
  CMatrix sum = CMatrix::Zero(d, d);
  for (size_t j = 0; j < encodings.size(); ++j) {
    const auto& e = encodings[j];
    if (e.system_dim != d) {
      throw Error(ErrorKind::kShape, "block-encodings differ in system size");
    }
    if (std::abs(e.normalization - 1.0) > 1e-12) {
      throw Error(ErrorKind::kNormalization,
                  "controlled LCU expects normalization 1 inputs");
    }
    if (!(std::abs(x[j]) <= 0.5 + 1e-15)) {
      throw Error(ErrorKind::kInvalidParameter,
                  "coefficients must lie in [-1/2, 1/2]");
    }
    sum += x[j] * e.EncodedOperator();
  }
  const auto m = static_cast<double>(encodings.size());
  BlockEncoding b = BlockEncode(sum, m);
  b.ancilla_qubit_budget =
      static_cast<int>(std::bit_width(encodings.size() - 1)) + 1;
  return b;
}

int PolynomialSpec::degree() const {
  for (int i = static_cast<int>(coefficients.size()) - 1; i >= 0; --i) {
    if (coefficients[i] != 0.0) return i;
  }
  return 0;
}

double PolynomialSpec::Evaluate(double x) const {
  if (coefficients.empty()) return 0.0;
  if (basis == PolynomialBasis::kMonomial) {
    double acc = 0.0;
    for (auto it = coefficients.rbegin(); it != coefficients.rend(); ++it) {
      acc = acc * x + *it;
    }
    return acc;
  }
  // Clenshaw recurrence for sum_i c_i T_i(x).
  double b1 = 0.0, b2 = 0.0;
  for (int i = static_cast<int>(coefficients.size()) - 1; i >= 1; --i) {
    const double b0 = 2.0 * x * b1 - b2 + coefficients[i];
    b2 = b1;
    b1 = b0;
  }
  return x * b1 - b2 + coefficients[0];
}

double PolynomialSpec::SampledSupNorm() const {
  const int n = 10 * std::max(degree(), 1);
  double sup = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = -1.0 + 2.0 * i / n;
    sup = std::max(sup, std::abs(Evaluate(x)));
  }
  return sup;
}

PolynomialSpec PolynomialSpec::Identity() {
  return {PolynomialBasis::kMonomial, {0.0, 1.0}};
}

PolynomialSpec PolynomialSpec::Chebyshev(int n) {
  PolynomialSpec f{PolynomialBasis::kChebyshev, std::vector<double>(n + 1, 0.0)};
  f.coefficients[n] = 1.0;
  return f;
}

BlockEncoding EigenPolyTransform(const BlockEncoding& b, const PolynomialSpec& f) {
  const CMatrix block = b.TopLeft();
  if (!IsHermitian(block, 1e-10)) {
    throw Error(ErrorKind::kNonHermitian, "encoded block is not Hermitian");
  }
  if (!f.IsBounded()) {
    throw Error(ErrorKind::kNormalization, "|f| exceeds 1 on [-1, 1]");
  }
  const auto es = Eigensolve(0.5 * (block + block.adjoint()));
  const RVector& lam = es.eigenvalues();
  CVector f_lam(lam.size());
  for (Eigen::Index i = 0; i < lam.size(); ++i) {
    const double v = f.Evaluate(lam[i]);
    if (std::abs(v) > 1.0 + kEigenTolerance) {
      throw Error(ErrorKind::kNormalization, "|f| exceeds 1 on the spectrum");
    }
    f_lam[i] = v;
  }
  BlockEncoding out = BlockEncode(ApplySpectralFunction(es, f_lam), 1.0);
  out.ancilla_qubit_budget = b.ancilla_qubit_budget + 1;
  CheckEncodingUnitary(out);
  return out;
}

double ValidityFraction(const AmplifySample& sample, double sigma, double margin) {
  if (sample.coefficient_vectors.empty()) {
    throw Error(ErrorKind::kInvalidInput, "empty coefficient sample");
  }
  if (sample.operators.empty()) {
    throw Error(ErrorKind::kInvalidInput, "no operators to combine");
  }
  const Eigen::Index d = sample.operators.front().rows();
  const double bound = sigma * (1.0 - margin);
  size_t pass = 0;
  CMatrix h(d, d);
  for (const auto& x : sample.coefficient_vectors) {
    if (static_cast<size_t>(x.size()) != sample.operators.size()) {
      throw Error(ErrorKind::kShape, "coefficient vector length differs from M");
    }
    h.setZero();
    for (Eigen::Index j = 0; j < x.size(); ++j) h += x[j] * sample.operators[j];
    if (SpectralNorm(h) <= bound * (1.0 + kEigenTolerance)) ++pass;
  }
  return static_cast<double>(pass) /
         static_cast<double>(sample.coefficient_vectors.size());
}

AmplifyResult UniformAmplify(const BlockEncoding& b, double sigma, double margin,
                             const AmplifySample* sample) {
  if (!(sigma > 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, "sigma must be positive");
  }
  if (!(margin >= 0.0 && margin < 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "margin must lie in [0, 1)");
  }
  ValidityReport report;
  const CMatrix encoded = b.EncodedOperator();
  report.measured_norm = SpectralNorm(0.5 * (encoded + encoded.adjoint()));
  report.bound = sigma * (1.0 - margin);
  report.current_valid =
      report.measured_norm <= report.bound * (1.0 + kEigenTolerance);
  if (sample != nullptr) {
    report.sample_fraction = ValidityFraction(*sample, sigma, margin);
    report.samples = sample->coefficient_vectors.size();
  }
  if (!report.current_valid) {
    throw AmplificationOverflow(report.measured_norm, report.bound);
  }
  BlockEncoding out = BlockEncode(encoded, sigma);
  out.ancilla_qubit_budget = b.ancilla_qubit_budget + 1;
  return {std::move(out), report};
}

double SymmetricAmplificationScale(std::span<const CMatrix> restricted,
                                   double constant) {
  if (restricted.empty()) {
    throw Error(ErrorKind::kInvalidInput, "empty observable list");
  }
  const Eigen::Index d = restricted.front().rows();
  CMatrix sum = CMatrix::Zero(d, d);
  for (const auto& m : restricted) sum.noalias() += m * m;
  const double norm = SpectralNorm(sum);
  return constant * std::sqrt(norm * std::log(static_cast<double>(d)));
}

CMatrix Evolve(const CMatrix& o, double t) {
  if (!IsHermitian(o, 1e-10)) throw Error(ErrorKind::kNonHermitian, "generator");
  const auto es = Eigensolve(0.5 * (o + o.adjoint()));
  CVector phases(es.eigenvalues().size());
  for (Eigen::Index i = 0; i < phases.size(); ++i) {
    phases[i] = std::polar(1.0, es.eigenvalues()[i] * t);
  }
  return ApplySpectralFunction(es, phases);
}

double PhaseEncodingDeviation(std::span<const CMatrix> a_set,
                              std::span<const double> x, int q,
                              const statevector::PureState& psi) {
  if (a_set.size() != x.size() || a_set.empty()) {
    throw Error(ErrorKind::kShape, "need one coefficient per observable");
  }
  const double window = std::ldexp(1.0, -q);
  const Eigen::Index d = psi.dimension();
  CMatrix h = CMatrix::Zero(d, d);
  double linear_phase = 0.0;
  for (size_t j = 0; j < a_set.size(); ++j) {
    const double mean = statevector::Expectation(a_set[j], psi);
    if (std::abs(mean) > window * (1.0 + 1e-12)) {
      throw Error(ErrorKind::kContract, "|<A_j>| exceeds 2^{-q}");
    }
    h += x[j] * a_set[j];
    linear_phase += x[j] * mean;
  }
  const double t = kPi * std::ldexp(1.0, q);
  const CVector& v = psi.amplitudes();
  const Complex actual = v.dot(Evolve(h, t) * v);
  const Complex ideal = std::polar(1.0, t * linear_phase);
  return std::abs(actual - ideal);
}

namespace {

constexpr std::array<char, 6> kMagic = {'Q', 'G', 'E', 'B', 'E', '\0'};

void PutU32(std::ostream& out, uint32_t v) {
  for (int i = 0; i < 4; ++i) out.put(static_cast<char>((v >> (8 * i)) & 0xFF));
}

void PutF64(std::ostream& out, double v) {
  const auto bits = std::bit_cast<uint64_t>(v);
  for (int i = 0; i < 8; ++i) out.put(static_cast<char>((bits >> (8 * i)) & 0xFF));
}

uint64_t GetLe(std::istream& in, int bytes) {
  uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) {
    const int c = in.get();
    if (c == std::char_traits<char>::eof()) {
      throw Error(ErrorKind::kIo, "truncated block-encoding file");
    }
    v |= static_cast<uint64_t>(static_cast<unsigned char>(c)) << (8 * i);
  }
  return v;
}

}  // namespace

void WriteBlockEncodingBinary(const CMatrix& unitary, std::ostream& out) {
  out.write(kMagic.data(), kMagic.size());
  out.put('\0');
  out.put('\0');
  PutU32(out, static_cast<uint32_t>(unitary.rows()));
  PutU32(out, static_cast<uint32_t>(unitary.cols()));
  for (Eigen::Index r = 0; r < unitary.rows(); ++r) {
    for (Eigen::Index c = 0; c < unitary.cols(); ++c) {
      PutF64(out, unitary(r, c).real());
      PutF64(out, unitary(r, c).imag());
    }
  }
}

CMatrix ReadBlockEncodingBinary(std::istream& in) {
  std::array<char, 8> head{};
  in.read(head.data(), head.size());
  if (in.gcount() != 8 || !std::equal(kMagic.begin(), kMagic.end(), head.begin())) {
    throw Error(ErrorKind::kIo, "not a block-encoding dump");
  }
  const auto rows = static_cast<Eigen::Index>(GetLe(in, 4));
  const auto cols = static_cast<Eigen::Index>(GetLe(in, 4));
  CMatrix m(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      const double re = std::bit_cast<double>(GetLe(in, 8));
      const double im = std::bit_cast<double>(GetLe(in, 8));
      m(r, c) = Complex(re, im);
    }
  }
  return m;
}

}  // namespace qge::encode
