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
#ifndef QGE_PROBE_H_
#define QGE_PROBE_H_

#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qge/common.h"

// Probe registers over the symmetric grid G_p and their Fourier readout.
//
// The M-register probe state with linear phases factorizes into a product of
// single-register states, so every operation here works one register at a
// time and never materializes 2^{pM} amplitudes.
namespace qge::probe {

inline constexpr int kMaxBits = 12;

// G_p = { a 2^{-p} - 1/2 + 2^{-p-1} : a = 0 .. 2^p - 1 }.
struct Grid {
  int p = 0;
  std::vector<double> points;

  size_t size() const { return points.size(); }
  double spacing() const { return std::ldexp(1.0, -p); }
  // Index of the grid point equal to g (to 1e-12), or -1.
  int IndexOf(double g) const;
};

Grid MakeGrid(int p);

enum class Window { kUniform, kSine };

// "uniform" or "sine"; throws kInvalidParameter otherwise.
Window ParseWindow(std::string_view id);
std::string_view WindowName(Window w);

// Real amplitude profile c_x, normalized.
RVector WindowAmplitudes(const Grid& grid, Window window);

// All non-idealities of the probe subroutine.
struct NoiseSpec {
  double phase_jitter = 0.0;      // each phase perturbed by U[-j, j] radians
  double fail_probability = 0.0;  // register replaced by a random pure state

  bool IsIdeal() const { return phase_jitter == 0.0 && fail_probability == 0.0; }
  void Validate() const;
};

struct ProbeRegister {
  CVector amplitudes;  // indexed like Grid::points
};

// c_x e^{2 pi i 2^p x v}, with noise applied per NoiseSpec.
ProbeRegister EncodeRegister(double v, const Grid& grid, Window window,
                             const NoiseSpec& noise, std::mt19937_64& rng);

// QFT_{G_p}|x> = 2^{-p/2} sum_k e^{2 pi i 2^p x k} |k>.
CMatrix QftMatrix(const Grid& grid);
ProbeRegister Qft(const ProbeRegister& reg, const Grid& grid);
ProbeRegister Iqft(const ProbeRegister& reg, const Grid& grid);

// Measurement distribution over grid indices after the inverse QFT of the
// noiseless register for slope v.
std::vector<double> ReadoutDistribution(double v, const Grid& grid,
                                        Window window);

// Pr[|g - v| <= 2^{-p}] for a noiseless single shot, computed exactly from
// ReadoutDistribution.
double SingleShotSuccessProbability(double v, const Grid& grid, Window window);

// Inverse-CDF sampler over grid indices.
class GridSampler {
 public:
  explicit GridSampler(std::span<const double> probabilities);
  int DrawIndex(std::mt19937_64& rng) const;

 private:
  std::vector<double> cumulative_;
};

// Measures the register in the computational basis; returns the grid point.
double Sample(const ProbeRegister& reg, const Grid& grid, std::mt19937_64& rng);

struct ReadoutSample {
  std::vector<double> values;  // one grid point per coordinate
};

// Coordinate-wise lower median (order statistic ceil(R/2)).
std::vector<double> ReadoutMedian(std::span<const ReadoutSample> samples);

// Lower median of a single coordinate; reorders `values`.
double LowerMedian(std::vector<double>& values);

enum class RepetitionRule { kLinear, kSquareRoot };

struct ParallelReadout {
  std::vector<double> values;
  RepetitionRule rule = RepetitionRule::kSquareRoot;
};

// Single-shot parallel readout over R entangled copies, modeled by its
// statistics: each coordinate is distributed as the median of R independent
// single-copy readouts.
ParallelReadout ParallelSingleShot(std::span<const double> slopes,
                                   const Grid& grid, int repetitions,
                                   Window window, const NoiseSpec& noise,
                                   std::mt19937_64& rng);

// Per-coordinate readout: R draws for slope v followed by the lower median.
// Uses the cached noiseless distribution when the noise spec is ideal.
double MedianReadout(double v, const Grid& grid, int repetitions, Window window,
                     const NoiseSpec& noise, std::mt19937_64& rng);

// Hoeffding tail for the median of R shots each failing with probability at
// most `per_shot_failure`.
double MedianFailureBound(int repetitions, double per_shot_failure);

}  // namespace qge::probe

#endif  // QGE_PROBE_H_
