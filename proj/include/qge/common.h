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
#ifndef QGE_COMMON_H_
#define QGE_COMMON_H_

#include <cmath>
#include <complex>
#include <cstdint>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <Eigen/Sparse>

namespace qge {

using Complex = std::complex<double>;
using CMatrix = Eigen::MatrixXcd;
using CVector = Eigen::VectorXcd;
using RVector = Eigen::VectorXd;
using SparseCMatrix = Eigen::SparseMatrix<Complex, Eigen::ColMajor, int64_t>;

inline constexpr double kPi = 3.14159265358979323846;

// Relative tolerance used for every eigensolve; downstream checks derive from
// this floor.
inline constexpr double kEigenTolerance = 1e-12;

enum class ErrorKind {
  kInvalidMonomial,
  kInvalidOrder,
  kSymmetryViolation,
  kInvalidInput,
  kInvalidParameter,
  kNormalization,
  kShape,
  kAmplificationOverflow,
  kContract,
  kNonHermitian,
  kNonUnitary,
  kNotApplicable,
  kConfig,
  kIo,
};

const char* ErrorKindName(ErrorKind kind);

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& message)
      : std::runtime_error(std::string(ErrorKindName(kind)) + ": " + message),
        kind_(kind) {}

  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

// Raised by uniform amplification when the encoded operator exceeds the
// amplification window.
class AmplificationOverflow : public Error {
 public:
  AmplificationOverflow(double measured_norm, double bound);

  double measured_norm() const { return measured_norm_; }
  double bound() const { return bound_; }

 private:
  double measured_norm_;
  double bound_;
};

// SplitMix64 finalizer; used to derive independent per-trial seeds.
inline uint64_t SplitMix64(uint64_t x) {
  x += 0x9E3779B97F4A7C15ULL;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
  return x ^ (x >> 31);
}

inline uint64_t StreamSeed(uint64_t base, uint64_t stream) {
  return SplitMix64(base ^ SplitMix64(stream + 0x632BE59BD9B4E019ULL));
}

// Uniform double in [0, 1) from the top 53 bits of a 64-bit engine draw.
// Unlike std::uniform_real_distribution this is identical across standard
// library implementations.
template <class Engine>
double Uniform01(Engine& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

// Standard normal via Box-Muller on Uniform01.
template <class Engine>
double StandardNormal(Engine& rng) {
  double u1 = Uniform01(rng);
  while (u1 <= 0.0) u1 = Uniform01(rng);
  const double u2 = Uniform01(rng);
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

// Artifact version string, e.g. "0.1.0+abc1234".
const char* Version();

// Exact binomial coefficient. Throws kInvalidInput if the result does not fit
// in 64 bits.
uint64_t Binomial(int n, int k);

// Natural log of the binomial coefficient, valid for large n.
double LogBinomial(int n, int k);

}  // namespace qge

#endif  // QGE_COMMON_H_
