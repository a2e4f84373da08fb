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

#include <numeric>

#include <gtest/gtest.h>

#include "oracles.h"

namespace qge::probe {
namespace {

double MaxAbs(const CVector& v) { return v.cwiseAbs().maxCoeff(); }

// Exact failure probability of the lower median of R iid draws from `probs`,
// where failure means landing outside [lo, hi] (grid indices).
double ExactMedianFailure(const std::vector<double>& probs, int lo, int hi, int r) {
  const int rank = (r + 1) / 2;
  double below = 0.0, upto_hi = 0.0;
  for (int i = 0; i < static_cast<int>(probs.size()); ++i) {
    if (i < lo) below += probs[i];
    if (i <= hi) upto_hi += probs[i];
  }
  auto at_least = [&](double p, int k) {
    double s = 0.0;
    for (int j = k; j <= r; ++j) s += oracle::Choose(r, j) * std::pow(p, j) * std::pow(1 - p, r - j);
    return s;
  };
  // median < lo  iff  at least `rank` draws below lo;
  // median > hi  iff  fewer than `rank` draws at or below hi.
  return at_least(below, rank) + (1.0 - at_least(upto_hi, rank));
}

TEST(Grid, SmallGrids) {
  const auto g1 = MakeGrid(1);
  EXPECT_EQ(g1.points, (std::vector<double>{-0.25, 0.25}));
  const auto g2 = MakeGrid(2);
  EXPECT_EQ(g2.points, (std::vector<double>{-0.375, -0.125, 0.125, 0.375}));
  const auto g3 = MakeGrid(3);
  ASSERT_EQ(g3.size(), 8u);
  for (size_t a = 0; a < 8; ++a) {
    EXPECT_DOUBLE_EQ(g3.points[a], -g3.points[7 - a]);
    if (a) EXPECT_DOUBLE_EQ(g3.points[a] - g3.points[a - 1], 0.125);
    EXPECT_EQ(g3.IndexOf(g3.points[a]), static_cast<int>(a));
  }
  EXPECT_EQ(g3.IndexOf(0.0), -1);
  try {
    MakeGrid(0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidParameter);
  }
}

TEST(Window, ParseAndNormalize) {
  EXPECT_EQ(ParseWindow("uniform"), Window::kUniform);
  EXPECT_EQ(ParseWindow("sine"), Window::kSine);
  EXPECT_THROW(ParseWindow("hann"), Error);
  const auto grid = MakeGrid(4);
  EXPECT_NEAR(WindowAmplitudes(grid, Window::kSine).norm(), 1.0, 1e-14);
  EXPECT_NEAR(WindowAmplitudes(grid, Window::kUniform).norm(), 1.0, 1e-14);
}

TEST(EncodeRegister, ZeroSlopeIsFlat) {
  std::mt19937_64 rng(1);
  const auto grid = MakeGrid(3);
  const auto reg = EncodeRegister(0.0, grid, Window::kUniform, {}, rng);
  const CVector flat = CVector::Constant(8, 1.0 / std::sqrt(8.0));
  EXPECT_LE(MaxAbs(reg.amplitudes - flat), 1e-15);
}

TEST(EncodeRegister, GridSlopeDecodesToBasisState) {
  std::mt19937_64 rng(2);
  for (int p = 1; p <= 5; ++p) {
    const auto grid = MakeGrid(p);
    for (size_t b = 0; b < grid.size(); ++b) {
      const auto out = Iqft(EncodeRegister(grid.points[b], grid, Window::kUniform, {}, rng), grid);
      EXPECT_NEAR(std::norm(out.amplitudes[b]), 1.0, 1e-12) << p << " " << b;
    }
  }
}

TEST(EncodeRegister, OffGridSlopeLandsOnNeighbours) {
  const auto grid = MakeGrid(3);
  const auto dist = ReadoutDistribution(0.2, grid, Window::kUniform);
  // Neighbours of 0.2 on G_3 are 0.1875 (index 5) and 0.3125 (index 6).
  EXPECT_GE(dist[5] + dist[6], 8.0 / (kPi * kPi));
  for (int b = 0; b < 8; ++b) {
    EXPECT_NEAR(dist[b], oracle::DirichletProbability(0.2, 3, b), 1e-14);
  }
}

TEST(EncodeRegister, FailureReplacesRegisterAndValidatesNoise) {
  std::mt19937_64 rng(3);
  const auto grid = MakeGrid(3);
  NoiseSpec always{0.0, 1.0};
  const auto reg = EncodeRegister(0.1, grid, Window::kUniform, always, rng);
  EXPECT_NEAR(reg.amplitudes.norm(), 1.0, 1e-12);
  EXPECT_THROW(EncodeRegister(0.1, grid, Window::kUniform, NoiseSpec{0.0, 1.5}, rng), Error);
  EXPECT_THROW(EncodeRegister(0.1, grid, Window::kUniform, NoiseSpec{-0.1, 0.0}, rng), Error);
}

TEST(Qft, UnitaryAndInverse) {
  for (int p = 1; p <= 10; ++p) {
    const auto grid = MakeGrid(p);
    const CMatrix f = QftMatrix(grid);
    EXPECT_LE((f.adjoint() * f - CMatrix::Identity(f.rows(), f.cols())).cwiseAbs().maxCoeff(),
              1e-10)
        << p;
  }
  const auto grid = MakeGrid(3);
  for (int b = 0; b < 8; ++b) {
    ProbeRegister e{CVector::Unit(8, b)};
    EXPECT_LE(MaxAbs(Iqft(Qft(e, grid), grid).amplitudes - e.amplitudes), 1e-14);
  }
  std::mt19937_64 rng(4);
  CVector r(8);
  for (auto& z : r) z = Complex(StandardNormal(rng), StandardNormal(rng));
  r.normalize();
  EXPECT_NEAR(Iqft({r}, grid).amplitudes.norm(), 1.0, 1e-12);
}

TEST(Qft, FlatRegisterReadoutIsFrozenDirichletPair) {
  // The symmetric grid has no zero point, so the flat register splits its
  // weight over the two central cells instead of collapsing to one.
  const auto grid = MakeGrid(3);
  ProbeRegister flat{CVector::Constant(8, 1.0 / std::sqrt(8.0))};
  const auto out = Iqft(flat, grid);
  double central = 0.0;
  for (int b = 0; b < 8; ++b) {
    const double pr = std::norm(out.amplitudes[b]);
    EXPECT_NEAR(pr, oracle::DirichletProbability(0.0, 3, b), 1e-14);
    if (b == 3 || b == 4) central += pr;
  }
  EXPECT_NEAR(std::norm(out.amplitudes[3]), std::norm(out.amplitudes[4]), 1e-14);
  // Frozen value: 2 |D(1/16)|^2 with D(u) = sin(8 pi u) / (8 sin(pi u)).
  const double d = std::sin(kPi / 2.0) / (8.0 * std::sin(kPi / 16.0));
  EXPECT_NEAR(central, 2.0 * d * d, 1e-14);
  EXPECT_NEAR(central, 0.8211, 1e-4);
}

TEST(Sample, BasisFlatAndSeeded) {
  const auto grid = MakeGrid(3);
  std::mt19937_64 rng(5);
  ProbeRegister basis{CVector::Unit(8, 6)};
  for (int i = 0; i < 100; ++i) EXPECT_EQ(Sample(basis, grid, rng), grid.points[6]);

  ProbeRegister flat{CVector::Constant(8, 1.0 / std::sqrt(8.0))};
  const int draws = 100000;
  std::vector<int> counts(8, 0);
  for (int i = 0; i < draws; ++i) ++counts[grid.IndexOf(Sample(flat, grid, rng))];
  double chi2 = 0.0;
  const double expected = draws / 8.0;
  for (int c : counts) {
    chi2 += (c - expected) * (c - expected) / expected;
    EXPECT_NEAR(c, expected, 3.0 * std::sqrt(expected * 7.0 / 8.0) * 1.5);
  }
  EXPECT_LT(chi2, 24.3);  // chi^2_7 at p = 0.001

  std::mt19937_64 a(42), b(42);
  for (int i = 0; i < 50; ++i) EXPECT_EQ(Sample(flat, grid, a), Sample(flat, grid, b));
}

TEST(ReadoutMedian, Examples) {
  std::vector<ReadoutSample> one = {{{0.125, -0.375}}};
  EXPECT_EQ(ReadoutMedian(one), (std::vector<double>{0.125, -0.375}));
  std::vector<ReadoutSample> three = {{{-0.125}}, {{0.125}}, {{0.125}}};
  EXPECT_EQ(ReadoutMedian(three), std::vector<double>{0.125});
  std::vector<double> even = {0.375, -0.125, 0.125, -0.375};
  EXPECT_EQ(LowerMedian(even), -0.125);
  EXPECT_THROW(ReadoutMedian(std::span<const ReadoutSample>{}), Error);
}

TEST(ReadoutMedian, RobustToThirtyPercentAdversarialPoints) {
  const auto grid = MakeGrid(2);
  for (int truth = 0; truth < 4; ++truth) {
    for (int r : {10, 20}) {
      const int bad = 3 * r / 10;
      // Enumerate every assignment of the adversarial entries to grid points.
      std::vector<int> pick(bad, 0);
      for (;;) {
        std::vector<ReadoutSample> samples;
        for (int i = 0; i < r - bad; ++i) samples.push_back({{grid.points[truth]}});
        for (int i : pick) samples.push_back({{grid.points[i]}});
        ASSERT_EQ(ReadoutMedian(samples)[0], grid.points[truth]);
        int pos = 0;
        while (pos < bad && ++pick[pos] == 4) pick[pos++] = 0;
        if (pos == bad) break;
      }
    }
  }
}

TEST(ParallelSingleShot, SingleCopyMatchesReadoutDistribution) {
  const auto grid = MakeGrid(3);
  std::mt19937_64 rng(6);
  const double v = 0.07;
  const auto dist = ReadoutDistribution(v, grid, Window::kUniform);
  const int trials = 40000;
  std::vector<int> counts(8, 0);
  const std::vector<double> slopes = {v};
  for (int t = 0; t < trials; ++t) {
    ++counts[grid.IndexOf(ParallelSingleShot(slopes, grid, 1, Window::kUniform, {}, rng).values[0])];
  }
  for (int b = 0; b < 8; ++b) {
    const double sd = std::sqrt(trials * dist[b] * (1 - dist[b]));
    EXPECT_NEAR(counts[b], trials * dist[b], 5 * sd + 1) << b;
  }
}

TEST(ParallelSingleShot, GridSlopesAreExact) {
  const auto grid = MakeGrid(3);
  std::mt19937_64 rng(7);
  const std::vector<double> slopes(grid.points.begin(), grid.points.end());
  for (int r : {1, 2, 7, 30}) {
    const auto out = ParallelSingleShot(slopes, grid, r, Window::kUniform, {}, rng);
    EXPECT_EQ(out.values, slopes);
    EXPECT_EQ(out.rule, RepetitionRule::kSquareRoot);
  }
  EXPECT_THROW(ParallelSingleShot(slopes, grid, 0, Window::kUniform, {}, rng), Error);
}

TEST(ParallelSingleShot, FailureDecaysLikeMedianCalibration) {
  const auto grid = MakeGrid(3);
  std::mt19937_64 rng(8);
  const double v = 0.25;  // midway between grid points: the hardest slope
  const auto dist = ReadoutDistribution(v, grid, Window::kUniform);
  // Success window |g - v| <= 1/8 covers indices 5 and 6.
  const int trials = 10000;
  double previous = 1.0;
  const std::vector<double> slopes = {v};
  for (int r : {1, 3, 5, 9, 15}) {
    int fails = 0;
    for (int t = 0; t < trials; ++t) {
      const double g = ParallelSingleShot(slopes, grid, r, Window::kUniform, {}, rng).values[0];
      if (std::abs(g - v) > 0.125 + 1e-12) ++fails;
    }
    const double rate = static_cast<double>(fails) / trials;
    const double exact = ExactMedianFailure(dist, 5, 6, r);
    EXPECT_NEAR(rate, exact, 5 * std::sqrt(exact * (1 - exact) / trials) + 1e-4) << r;
    EXPECT_LE(exact, previous);
    previous = exact;
  }
}

TEST(Invariants, ProductStateFactorization) {
  const auto grid = MakeGrid(2);
  std::mt19937_64 rng(9);
  const double v1 = 0.11, v2 = -0.27;
  const auto r1 = EncodeRegister(v1, grid, Window::kUniform, {}, rng);
  const auto r2 = EncodeRegister(v2, grid, Window::kUniform, {}, rng);
  CVector joint(16);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) {
      const double phase = 2 * kPi * 4 * (grid.points[a] * v1 + grid.points[b] * v2);
      joint[a * 4 + b] = std::polar(0.25, phase);
    }
  }
  CVector kron(16);
  for (int a = 0; a < 4; ++a) {
    for (int b = 0; b < 4; ++b) kron[a * 4 + b] = r1.amplitudes[a] * r2.amplitudes[b];
  }
  EXPECT_LE(MaxAbs(joint - kron), 1e-10);
}

TEST(Invariants, SingleShotAccuracyOverContractRange) {
  for (int p = 1; p <= 8; ++p) {
    const auto grid = MakeGrid(p);
    double worst = 1.0;
    for (int i = 0; i <= 400; ++i) {
      const double v = (-1.0 + 2.0 * i / 400.0) / kPi;
      worst = std::min(worst, SingleShotSuccessProbability(v, grid, Window::kUniform));
    }
    if (p >= 2) {
      EXPECT_GE(worst, 0.81) << p;
    }
  }
}

TEST(Invariants, SuccessProbabilityMatchesDirichletOracle) {
  for (int p = 2; p <= 6; ++p) {
    const auto grid = MakeGrid(p);
    for (double v : {-0.3, -0.01, 0.0, 0.13, 0.29}) {
      double want = 0.0;
      for (int b = 0; b < (1 << p); ++b) {
        if (std::abs(grid.points[b] - v) <= std::ldexp(1.0, -p) * (1 + 1e-12)) {
          want += oracle::DirichletProbability(v, p, b);
        }
      }
      EXPECT_NEAR(SingleShotSuccessProbability(v, grid, Window::kUniform), want, 1e-12);
    }
  }
}

TEST(Invariants, MedianHoeffdingBound) {
  const auto grid = MakeGrid(3);
  // Worst slope in the contract range.
  double v_worst = 0.0, worst = 1.0;
  for (int i = 0; i <= 400; ++i) {
    const double v = (-1.0 + 2.0 * i / 400.0) / kPi;
    const double s = SingleShotSuccessProbability(v, grid, Window::kUniform);
    if (s < worst) worst = s, v_worst = v;
  }
  ASSERT_LE(1.0 - worst, 0.19);
  std::mt19937_64 rng(10);
  const int trials = 5000;
  for (int r : {1, 4, 8, 16, 32, 64}) {
    int fails = 0;
    for (int t = 0; t < trials; ++t) {
      const double g = MedianReadout(v_worst, grid, r, Window::kUniform, {}, rng);
      if (std::abs(g - v_worst) > 0.125 * (1 + 1e-12)) ++fails;
    }
    const double bound = MedianFailureBound(r, 0.19);
    EXPECT_LE(static_cast<double>(fails) / trials,
              bound + 4 * std::sqrt(bound * (1 - bound) / trials) + 1e-3)
        << r;
  }
  EXPECT_DOUBLE_EQ(MedianFailureBound(10, 0.19), std::exp(-20 * 0.31 * 0.31));
  EXPECT_DOUBLE_EQ(MedianFailureBound(10, 0.6), 1.0);
}

TEST(Noise, JitterAndFailuresDegradeReadout) {
  const auto grid = MakeGrid(3);
  std::mt19937_64 rng(11);
  const double v = grid.points[5];
  int miss_fail = 0, miss_jitter = 0;
  for (int t = 0; t < 2000; ++t) {
    if (MedianReadout(v, grid, 1, Window::kUniform, NoiseSpec{0.0, 0.5}, rng) != v) ++miss_fail;
    if (MedianReadout(v, grid, 1, Window::kUniform, NoiseSpec{1.5, 0.0}, rng) != v) ++miss_jitter;
  }
  EXPECT_GT(miss_fail, 200);
  EXPECT_GT(miss_jitter, 50);
}

}  // namespace
}  // namespace qge::probe
