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
#include "qge/probe.h"

#include <algorithm>
#include <cmath>

namespace qge::probe {

int Grid::IndexOf(double g) const {
  const double a = (g + 0.5) * std::ldexp(1.0, p) - 0.5;
  const double r = std::round(a);
  if (std::abs(a - r) > 1e-9 || r < 0 || r >= static_cast<double>(size())) {
    return -1;
  }
  return static_cast<int>(r);
}

Grid MakeGrid(int p) {
  if (p < 1 || p > kMaxBits) {
    throw Error(ErrorKind::kInvalidParameter,
                "probe bits must lie in [1, " + std::to_string(kMaxBits) + "]");
  }
  Grid g;
  g.p = p;
  const size_t n = size_t{1} << p;
  const double h = std::ldexp(1.0, -p);
  g.points.resize(n);
  for (size_t a = 0; a < n; ++a) {
    g.points[a] = static_cast<double>(a) * h - 0.5 + 0.5 * h;
  }
  return g;
}

Window ParseWindow(std::string_view id) {
  if (id == "uniform") return Window::kUniform;
  if (id == "sine") return Window::kSine;
  throw Error(ErrorKind::kInvalidParameter,
              "unknown window id '" + std::string(id) + "'");
}

std::string_view WindowName(Window w) {
  return w == Window::kUniform ? "uniform" : "sine";
}

RVector WindowAmplitudes(const Grid& grid, Window window) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  RVector c(n);
  if (window == Window::kUniform) {
    c.setConstant(1.0 / std::sqrt(static_cast<double>(n)));
    return c;
  }
  for (Eigen::Index a = 0; a < n; ++a) {
    c[a] = std::sin(kPi * static_cast<double>(a + 1) / static_cast<double>(n + 1));
  }
  return c / c.norm();
}

void NoiseSpec::Validate() const {
  if (!(phase_jitter >= 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, "phase jitter must be >= 0");
  }
  if (!(fail_probability >= 0.0 && fail_probability <= 1.0)) {
    throw Error(ErrorKind::kInvalidParameter,
                "failure probability must lie in [0, 1]");
  }
}

ProbeRegister EncodeRegister(double v, const Grid& grid, Window window,
                             const NoiseSpec& noise, std::mt19937_64& rng) {
  noise.Validate();
  const auto n = static_cast<Eigen::Index>(grid.size());
  ProbeRegister reg{CVector(n)};
  if (noise.fail_probability > 0.0 && Uniform01(rng) < noise.fail_probability) {
    for (Eigen::Index a = 0; a < n; ++a) {
      const double re = StandardNormal(rng);
      const double im = StandardNormal(rng);
      reg.amplitudes[a] = Complex(re, im);
    }
    reg.amplitudes /= reg.amplitudes.norm();
    return reg;
  }
  const RVector c = WindowAmplitudes(grid, window);
  const double scale = 2.0 * kPi * std::ldexp(1.0, grid.p) * v;
  for (Eigen::Index a = 0; a < n; ++a) {
    double phase = scale * grid.points[a];
    if (noise.phase_jitter > 0.0) {
      phase += noise.phase_jitter * (2.0 * Uniform01(rng) - 1.0);
    }
    reg.amplitudes[a] = std::polar(c[a], phase);
  }
  return reg;
}

CMatrix QftMatrix(const Grid& grid) {
  const auto n = static_cast<Eigen::Index>(grid.size());
  const double two_p = std::ldexp(1.0, grid.p);
  const double norm = 1.0 / std::sqrt(static_cast<double>(n));
  CMatrix f(n, n);
  for (Eigen::Index k = 0; k < n; ++k) {
    for (Eigen::Index x = 0; x < n; ++x) {
      f(k, x) = std::polar(norm, 2.0 * kPi * two_p * grid.points[x] * grid.points[k]);
    }
  }
  return f;
}

ProbeRegister Qft(const ProbeRegister& reg, const Grid& grid) {
  return {QftMatrix(grid) * reg.amplitudes};
}

ProbeRegister Iqft(const ProbeRegister& reg, const Grid& grid) {
  return {QftMatrix(grid).adjoint() * reg.amplitudes};
}

std::vector<double> ReadoutDistribution(double v, const Grid& grid,
                                        Window window) {
  std::mt19937_64 unused(0);
  const ProbeRegister out =
      Iqft(EncodeRegister(v, grid, window, NoiseSpec{}, unused), grid);
  std::vector<double> probs(grid.size());
  for (size_t k = 0; k < grid.size(); ++k) probs[k] = std::norm(out.amplitudes[k]);
  return probs;
}

double SingleShotSuccessProbability(double v, const Grid& grid, Window window) {
  const auto probs = ReadoutDistribution(v, grid, window);
  const double cell = grid.spacing();
  double total = 0.0;
  for (size_t k = 0; k < grid.size(); ++k) {
    if (std::abs(grid.points[k] - v) <= cell * (1.0 + 1e-12)) total += probs[k];
  }
  return total;
}

GridSampler::GridSampler(std::span<const double> probabilities) {
  if (probabilities.empty()) {
    throw Error(ErrorKind::kInvalidInput, "empty distribution");
  }
  cumulative_.resize(probabilities.size());
  double acc = 0.0;
  for (size_t i = 0; i < probabilities.size(); ++i) {
    acc += probabilities[i];
    cumulative_[i] = acc;
  }
  for (auto& c : cumulative_) c /= acc;
  cumulative_.back() = 1.0;
}

int GridSampler::DrawIndex(std::mt19937_64& rng) const {
  const double u = Uniform01(rng);
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  return static_cast<int>(std::min<ptrdiff_t>(it - cumulative_.begin(),
                                              cumulative_.size() - 1));
}

double Sample(const ProbeRegister& reg, const Grid& grid, std::mt19937_64& rng) {
  if (static_cast<size_t>(reg.amplitudes.size()) != grid.size()) {
    throw Error(ErrorKind::kShape, "register length differs from grid size");
  }
  std::vector<double> probs(grid.size());
  for (size_t k = 0; k < grid.size(); ++k) probs[k] = std::norm(reg.amplitudes[k]);
  return grid.points[GridSampler(probs).DrawIndex(rng)];
}

double LowerMedian(std::vector<double>& values) {
  if (values.empty()) throw Error(ErrorKind::kInvalidInput, "empty sample list");
  const size_t rank = (values.size() + 1) / 2 - 1;  // ceil(R/2), zero-based
  std::nth_element(values.begin(), values.begin() + rank, values.end());
  return values[rank];
}

std::vector<double> ReadoutMedian(std::span<const ReadoutSample> samples) {
  if (samples.empty()) throw Error(ErrorKind::kInvalidInput, "empty sample list");
  const size_t m = samples.front().values.size();
  std::vector<double> out(m);
  std::vector<double> column(samples.size());
  for (size_t j = 0; j < m; ++j) {
    for (size_t r = 0; r < samples.size(); ++r) {
      if (samples[r].values.size() != m) {
        throw Error(ErrorKind::kShape, "readout samples differ in length");
      }
      column[r] = samples[r].values[j];
    }
    out[j] = LowerMedian(column);
  }
  return out;
}

double MedianReadout(double v, const Grid& grid, int repetitions, Window window,
                     const NoiseSpec& noise, std::mt19937_64& rng) {
  if (repetitions < 1) {
    throw Error(ErrorKind::kInvalidParameter, "need at least one repetition");
  }
  std::vector<double> draws(repetitions);
  if (noise.IsIdeal()) {
    const auto probs = ReadoutDistribution(v, grid, window);
    const GridSampler sampler(probs);
    for (auto& d : draws) d = grid.points[sampler.DrawIndex(rng)];
  } else {
    for (auto& d : draws) {
      d = Sample(Iqft(EncodeRegister(v, grid, window, noise, rng), grid), grid, rng);
    }
  }
  return LowerMedian(draws);
}

ParallelReadout ParallelSingleShot(std::span<const double> slopes,
                                   const Grid& grid, int repetitions,
                                   Window window, const NoiseSpec& noise,
                                   std::mt19937_64& rng) {
  if (repetitions < 1) {
    throw Error(ErrorKind::kInvalidParameter, "need at least one repetition");
  }
  ParallelReadout out;
  out.values.reserve(slopes.size());
  for (double v : slopes) {
    out.values.push_back(MedianReadout(v, grid, repetitions, window, noise, rng));
  }
  return out;
}

double MedianFailureBound(int repetitions, double per_shot_failure) {
  const double gap = 0.5 - per_shot_failure;
  if (gap <= 0.0) return 1.0;
  return std::exp(-2.0 * repetitions * gap * gap);
}

}  // namespace qge::probe
