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
#ifndef QGE_SCHEDULE_H_
#define QGE_SCHEDULE_H_

#include <cstddef>
#include <vector>

#include "qge/common.h"

namespace qge::engine {

// Single-shot failure bound of the uniform-window readout, 1 - 8/pi^2 rounded up.
inline constexpr double kPerShotFailure = 0.19;
// Largest admissible confidence parameter, 3 / (8 (1 + pi)^2).
inline constexpr double kMaxConfidence = 3.0 / (8.0 * (1.0 + kPi) * (1.0 + kPi));
// Hoeffding constant: median of R shots fails w.p. <= exp(-R / kappa_r).
inline constexpr double kDefaultKappaR =
    1.0 / (2.0 * (0.5 - kPerShotFailure) * (0.5 - kPerShotFailure));

struct Schedule {
  int q_max = 0;
  std::vector<double> delta;     // delta^{(q)} = c / 8^{q_max - q}
  std::vector<int> repetitions;  // R^{(q)}
};

// ceil(log2(1/eps)); throws kInvalidParameter unless 0 < eps < 1.
int MaxIteration(double epsilon);

// Throws kInvalidParameter unless 0 < c <= kMaxConfidence.
void ValidateConfidence(double c);

// delta^{(q)} and R^{(q)} = max(1, ceil(kappa_r ln(M / delta^{(q)}))).
// A nonempty `repetition_override` replaces R (its size must be q_max + 1).
Schedule MakeSchedule(double epsilon, double c, size_t observable_count,
                      double kappa_r = kDefaultKappaR,
                      const std::vector<int>& repetition_override = {});

}  // namespace qge::engine

#endif  // QGE_SCHEDULE_H_
