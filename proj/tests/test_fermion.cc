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
#include "qge/fermion.h"

#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "oracles.h"

namespace qge::fermion {
namespace {

double MaxAbs(const CMatrix& m) { return m.size() ? m.cwiseAbs().maxCoeff() : 0.0; }

TEST(LadderMonomial, NumberOperatorOnOneMode) {
  const CMatrix n0(BuildLadderMonomial({{0}, {0}, 1}));
  CMatrix want = CMatrix::Zero(2, 2);
  want(1, 1) = 1.0;
  EXPECT_EQ(MaxAbs(n0 - want), 0.0);
}

TEST(LadderMonomial, HopOnTwoModes) {
  // a†_0 a_1 |mode 1 occupied> = |mode 0 occupied>; no mode below 1 is
  // occupied after a_1 acts, so the sign is +.
  const CMatrix hop(BuildLadderMonomial({{0}, {1}, 2}));
  CVector in = CVector::Zero(4);
  in[0b10] = 1.0;
  const CVector out = hop * in;
  EXPECT_DOUBLE_EQ(std::abs(out[0b01]), 1.0);
  EXPECT_EQ(out[0b01], Complex(1.0, 0.0));
  EXPECT_NEAR(out.norm(), 1.0, 0.0);
}

TEST(LadderMonomial, JordanWignerSignFromOccupiedModeBelow) {
  // a_2 on |modes 0 and 2 occupied> picks up (-1)^1.
  const CMatrix a2(Annihilator(2, 3));
  CVector in = CVector::Zero(8);
  in[0b101] = 1.0;
  const CVector out = a2 * in;
  EXPECT_EQ(out[0b001], Complex(-1.0, 0.0));
}

TEST(LadderMonomial, CanonicalAnticommutation) {
  for (int n = 1; n <= 8; ++n) {
    const int64_t dim = int64_t{1} << n;
    SparseCMatrix id(dim, dim);
    id.setIdentity();
    for (int p = 0; p < n; ++p) {
      for (int q = 0; q < n; ++q) {
        const SparseCMatrix ap = Annihilator(p, n), aq = Annihilator(q, n),
                           cq = Creator(q, n);
        SparseCMatrix mixed = ap * cq + cq * ap;
        if (p == q) mixed -= id;
        const SparseCMatrix same = ap * aq + aq * ap;
        // Integer-valued: exact.
        ASSERT_EQ(MaxAbs(CMatrix(mixed)), 0.0) << n << " " << p << " " << q;
        ASSERT_EQ(MaxAbs(CMatrix(same)), 0.0) << n << " " << p << " " << q;
      }
    }
  }
}

TEST(LadderMonomial, DroppedParityStringBreaksAnticommutation) {
  const JordanWignerHook broken{true};
  const SparseCMatrix a0 = Annihilator(0, 2, broken), a1 = Annihilator(1, 2, broken);
  const SparseCMatrix same = a0 * a1 + a1 * a0;
  EXPECT_GT(MaxAbs(CMatrix(same)), 0.5);
}

TEST(LadderMonomial, MatchesProductOfSingleOperators) {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 20; ++trial) {
    std::vector<int> modes = {0, 1, 2, 3};
    std::shuffle(modes.begin(), modes.end(), rng);
    const std::vector<int> p = {modes[0], modes[1]};
    std::shuffle(modes.begin(), modes.end(), rng);
    const std::vector<int> q = {modes[0], modes[1]};
    const CMatrix got(BuildLadderMonomial({p, q, 4}));
    EXPECT_EQ(MaxAbs(got - oracle::Monomial(p, q, 4)), 0.0);
  }
}

TEST(LadderMonomial, RejectsRepeatedIndex) {
  try {
    BuildLadderMonomial({{1, 1}, {0, 2}, 3});
    FAIL() << "expected invalid-monomial";
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidMonomial);
  }
  EXPECT_THROW(BuildLadderMonomial({{0}, {3}, 3}), Error);
  EXPECT_THROW(BuildLadderMonomial({{0, 1}, {2}, 3}), Error);
  EXPECT_THROW(BuildLadderMonomial({{}, {}, 3}), Error);
}

TEST(ObservableSet, TwoModesOrderOne) {
  const auto set = KrdmObservableSet(2, 1);
  EXPECT_EQ(set.size(), 8u);
  for (const auto& o : set.items) {
    const bool diagonal = o.p == o.q;
    if (o.part == Part::kImag && diagonal) {
      EXPECT_TRUE(o.trivial);
      EXPECT_EQ(o.matrix.nonZeros() == 0 || MaxAbs(CMatrix(o.matrix)) == 0.0, true);
    } else {
      EXPECT_FALSE(o.trivial);
    }
  }
}

TEST(ObservableSet, Counts) {
  EXPECT_EQ(KrdmObservableSet(4, 1).size(), 32u);
  const auto set = KrdmObservableSet(4, 2);
  // 2 (C(4,2) 2!)^2 ordered tuples; increasing tuples give 2 C(4,2)^2.
  EXPECT_EQ(set.size(), 288u);
  EXPECT_EQ(set.CanonicalCount(), 72u);
  EXPECT_EQ(set.NontrivialCanonicalCount(), 66u);
  EXPECT_EQ(EstimationTargets(4, 2).size(), 66u);
}

TEST(ObservableSet, OrderAboveModesIsRejected) {
  try {
    KrdmObservableSet(2, 3);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidOrder);
  }
  EXPECT_THROW(KrdmObservableSet(2, 0), Error);
}

TEST(ObservableSet, HermitianBoundedAndConserving) {
  for (int k = 1; k <= 2; ++k) {
    const auto set = KrdmObservableSet(4, k);
    for (const auto& o : set.items) {
      const CMatrix m(o.matrix);
      EXPECT_LE(MaxAbs(m - m.adjoint()), 1e-12) << o.label;
      EXPECT_LE(oracle::HermitianNorm(m), 1.0 + 1e-12) << o.label;
      EXPECT_TRUE(ConservesParticleNumber(o.matrix)) << o.label;
      EXPECT_NO_THROW(CheckObservable(o));
    }
  }
}

TEST(ObservableSet, PermutedTuplesEqualCanonicalUpToSign) {
  const auto set = KrdmObservableSet(3, 2);
  for (const auto& o : set.items) {
    auto p = o.p, q = o.q;
    std::sort(p.begin(), p.end());
    std::sort(q.begin(), q.end());
    const CMatrix t = oracle::Monomial(p, q, 3);
    const CMatrix h = o.part == Part::kReal ? CMatrix(0.5 * (t + t.adjoint()))
                                            : CMatrix((t - t.adjoint()) / Complex(0, 2));
    const CMatrix m(o.matrix);
    EXPECT_LE(std::min(MaxAbs(m - h), MaxAbs(m + h)), 1e-15) << o.label;
    EXPECT_EQ(o.permuted, p != o.p || q != o.q);
  }
}

TEST(ObservableSet, ManifestCsv) {
  std::ostringstream os;
  WriteManifestCsv(KrdmObservableSet(2, 1), os);
  const std::string csv = os.str();
  EXPECT_EQ(csv.rfind("label,k,p,q,part,trivial\n", 0), 0u);
  EXPECT_NE(csv.find("\"Re(0,1)\",1,0,1,re,0"), std::string::npos);
  EXPECT_NE(csv.find("\"Im(1,1)\",1,1,1,im,1"), std::string::npos);
  EXPECT_EQ(std::count(csv.begin(), csv.end(), '\n'), 9);
}

TEST(SectorBasis, DimensionAndOrdering) {
  for (int n = 1; n <= 8; ++n) {
    for (int eta = 0; eta <= n; ++eta) {
      const auto b = MakeSectorBasis(n, eta);
      EXPECT_EQ(b.dimension(), static_cast<int64_t>(oracle::Choose(n, eta)));
      EXPECT_TRUE(std::is_sorted(b.indices.begin(), b.indices.end()));
      EXPECT_EQ(std::adjacent_find(b.indices.begin(), b.indices.end()), b.indices.end());
      for (auto x : b.indices) EXPECT_EQ(Popcount(x), eta);
    }
  }
  EXPECT_THROW(MakeSectorBasis(3, 4), Error);
}

TEST(SectorRestrict, NumberOperator) {
  const CMatrix r = SectorRestrict(BuildLadderMonomial({{0}, {0}, 2}), 2, 1);
  ASSERT_EQ(r.rows(), 2);
  // basis {|mode 0>, |mode 1>} = indices {1, 2}
  EXPECT_EQ(r(0, 0), Complex(1.0));
  EXPECT_EQ(r(1, 1), Complex(0.0));
  EXPECT_EQ(r(0, 1), Complex(0.0));
}

TEST(SectorRestrict, RealHopIsHalfPauliX) {
  const auto set = KrdmObservableSet(2, 1);
  const auto it = std::find_if(set.items.begin(), set.items.end(), [](const Observable& o) {
    return o.p == std::vector<int>{0} && o.q == std::vector<int>{1} && o.part == Part::kReal;
  });
  ASSERT_NE(it, set.items.end());
  const CMatrix r = SectorRestrict(*it, 2, 1);
  const CMatrix t = oracle::Monomial({0}, {1}, 2);
  const CMatrix want = oracle::Restrict(0.5 * (t + t.adjoint()), {1, 2});
  EXPECT_LE(MaxAbs(r - want), 1e-15);
  EXPECT_DOUBLE_EQ(std::abs(r(0, 1)), 0.5);
  EXPECT_DOUBLE_EQ(std::abs(r(0, 0)), 0.0);
}

TEST(SectorRestrict, VacuumSectorIsZero) {
  for (const auto& o : KrdmObservableSet(3, 1).items) {
    const CMatrix r = SectorRestrict(o, 3, 0);
    ASSERT_EQ(r.rows(), 1);
    EXPECT_EQ(r(0, 0), Complex(0.0));
  }
}

TEST(SectorRestrict, RejectsNonConservingOperator) {
  const SparseCMatrix a0 = Annihilator(0, 2);
  SparseCMatrix x = a0 + SparseCMatrix(a0.adjoint());
  try {
    SectorRestrict(x, 2, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kSymmetryViolation);
  }
}

TEST(SectorNorm, SpecExamples) {
  EXPECT_NEAR(SumSquaresSectorNorm(KrdmObservableSet(2, 1).items, 2, 1), 2.0, 1e-12);
  EXPECT_NEAR(SumSquaresSectorNorm(KrdmObservableSet(4, 2).Canonical(), 4, 2), 6.0, 1e-12);
  for (int n = 1; n <= 5; ++n) {
    EXPECT_NEAR(SumSquaresSectorNorm(KrdmObservableSet(n, 1).items, n, 0), 0.0, 1e-15);
  }
}

TEST(SectorNorm, AllOrderedTuplesCarryFactorialSquared) {
  // Every ordered tuple repeats a canonical observable up to sign, (k!)^2 times.
  EXPECT_NEAR(SumSquaresSectorNorm(KrdmObservableSet(4, 2).items, 4, 2), 24.0, 1e-11);
}

TEST(SectorNorm, MatchesIndependentOracleAndFormula) {
  for (int n = 1; n <= 6; ++n) {
    for (int k = 1; k <= std::min(2, n); ++k) {
      const auto canonical = KrdmObservableSet(n, k).Canonical();
      for (int eta = 0; eta <= n; ++eta) {
        const double want = oracle::Choose(eta, k) * oracle::Choose(n - eta + k, k);
        EXPECT_NEAR(oracle::CanonicalSectorNorm(n, k, eta), want, 1e-9 * std::max(1.0, want));
        EXPECT_NEAR(SumSquaresSectorNorm(canonical, n, eta), want, 1e-9 * std::max(1.0, want))
            << n << " " << k << " " << eta;
      }
    }
  }
}

TEST(SectorNorm, OrderThreeCrossCheck) {
  const auto canonical = KrdmObservableSet(6, 3).Canonical();
  EXPECT_NEAR(SumSquaresSectorNorm(canonical, 6, 3), 20.0, 1e-9);
  EXPECT_DOUBLE_EQ(BinomNormFormula(6, 3, 3), 20.0);
}

TEST(SectorNorm, EmptyListIsRejected) {
  try {
    SumSquaresSectorNorm(std::vector<Observable>{}, 3, 1);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kInvalidInput);
  }
}

TEST(BinomNormFormula, Examples) {
  EXPECT_DOUBLE_EQ(BinomNormFormula(152, 2, 113), 5188960.0);
  EXPECT_DOUBLE_EQ(BinomNormFormula(8, 1, 7), 14.0);
  EXPECT_DOUBLE_EQ(BinomNormFormula(6, 3, 3), 20.0);
  EXPECT_DOUBLE_EQ(BinomNormFormula(5, 2, 1), 0.0);
  EXPECT_THROW(BinomNormFormula(5, 2, 6), Error);
  EXPECT_THROW(BinomNormFormula(5, 0, 2), Error);
}

TEST(Conservation, OffSectorBlocksVanish) {
  for (const auto& o : KrdmObservableSet(4, 2).items) {
    const CMatrix m(o.matrix);
    for (int a = 0; a < 16; ++a) {
      for (int b = 0; b < 16; ++b) {
        if (Popcount(a) != Popcount(b)) ASSERT_EQ(std::abs(m(a, b)), 0.0);
      }
    }
  }
}

}  // namespace
}  // namespace qge::fermion
