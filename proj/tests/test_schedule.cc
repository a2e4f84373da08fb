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
#include "qge/schedule.h"

#include <cmath>

#include <gtest/gtest.h>

namespace qge::engine {
namespace {

TEST(Schedule, Constants) {
  EXPECT_NEAR(kMaxConfidence, 0.021862, 1e-6);
  EXPECT_DOUBLE_EQ(kDefaultKappaR, 1.0 / (2.0 * 0.31 * 0.31));
  EXPECT_LT(1.0 - 8.0 / (kPi * kPi), kPerShotFailure);
}

TEST(Schedule, MaxIteration) {
  EXPECT_EQ(MaxIteration(0.25), 2);
  EXPECT_EQ(MaxIteration(0.5), 1);
  EXPECT_EQ(MaxIteration(0.1), 4);
  EXPECT_EQ(MaxIteration(std::ldexp(1.0, -8)), 8);
  EXPECT_THROW(MaxIteration(0.0), Error);
  EXPECT_THROW(MaxIteration(1.0), Error);
  EXPECT_THROW(MaxIteration(-0.3), Error);
}

TEST(Schedule, ConfidencesTighten) {
  const double c = 0.02;
  const auto s = MakeSchedule(0.25, c, 10);
  ASSERT_EQ(s.q_max, 2);
  ASSERT_EQ(s.delta.size(), 3u);
  EXPECT_DOUBLE_EQ(s.delta[2], c);
  EXPECT_DOUBLE_EQ(s.delta[1], c / 8);
  EXPECT_DOUBLE_EQ(s.delta[0], c / 64);
  double sum = 0.0;
  for (double d : s.delta) sum += d;
  EXPECT_LE(sum, c * 8.0 / 7.0);
}

TEST(Schedule, Repetitions) {
  // q_max = 1 so the final iteration has delta = c exactly.
  const auto s = MakeSchedule(0.5, 0.02, 32);
  EXPECT_EQ(s.repetitions[1], static_cast<int>(std::ceil(kDefaultKappaR * std::log(1600.0))));
  EXPECT_EQ(s.repetitions[1], 39);
  for (size_t q = 0; q + 1 < s.repetitions.size(); ++q) {
    EXPECT_GE(s.repetitions[q], s.repetitions[q + 1]);
  }
  // Tiny kappa still leaves at least one shot.
  const auto t = MakeSchedule(0.5, 0.02, 1, 1e-6);
  for (int r : t.repetitions) EXPECT_EQ(r, 1);
}

TEST(Schedule, RejectsBadConfidence) {
  EXPECT_THROW(MakeSchedule(0.1, 0.0, 4), Error);
  EXPECT_THROW(MakeSchedule(0.1, 0.05, 4), Error);
  EXPECT_NO_THROW(MakeSchedule(0.1, kMaxConfidence, 4));
  EXPECT_THROW(ValidateConfidence(-1.0), Error);
}

TEST(Schedule, Override) {
  const auto s = MakeSchedule(0.25, 0.02, 4, kDefaultKappaR, {5, 6, 7});
  EXPECT_EQ(s.repetitions, (std::vector<int>{5, 6, 7}));
  EXPECT_THROW(MakeSchedule(0.25, 0.02, 4, kDefaultKappaR, {5, 6}), Error);
  EXPECT_THROW(MakeSchedule(0.25, 0.02, 4, kDefaultKappaR, {5, 0, 7}), Error);
}

}  // namespace
}  // namespace qge::engine
