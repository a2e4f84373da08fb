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

#include <algorithm>
#include <cmath>

namespace qge::engine {

int MaxIteration(double epsilon) {
  if (!(epsilon > 0.0 && epsilon < 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "epsilon must lie in (0, 1)");
  }
  // Exact powers of two must not round up an extra step.
  return static_cast<int>(std::ceil(std::log2(1.0 / epsilon) - 1e-12));
}

void ValidateConfidence(double c) {
  if (!(c > 0.0 && c <= kMaxConfidence * (1.0 + 1e-15))) {
    throw Error(ErrorKind::kInvalidParameter,
                "confidence c must lie in (0, 3/(8(1+pi)^2)]");
  }
}

Schedule MakeSchedule(double epsilon, double c, size_t observable_count,
                      double kappa_r, const std::vector<int>& repetition_override) {
  ValidateConfidence(c);
  if (!(kappa_r > 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, "kappa_r must be positive");
  }
  Schedule s;
  s.q_max = MaxIteration(epsilon);
  const auto m = static_cast<double>(std::max<size_t>(observable_count, 1));
  for (int q = 0; q <= s.q_max; ++q) {
    const double delta = c / std::pow(8.0, s.q_max - q);
    s.delta.push_back(delta);
    const double r = std::ceil(kappa_r * std::log(m / delta) - 1e-9);
    s.repetitions.push_back(std::max(1, static_cast<int>(r)));
  }
  if (!repetition_override.empty()) {
    if (repetition_override.size() != s.repetitions.size()) {
      throw Error(ErrorKind::kInvalidParameter,
                  "repetition override must list q_max + 1 entries");
    }
    for (int r : repetition_override) {
      if (r < 1) {
        throw Error(ErrorKind::kInvalidParameter, "repetitions must be >= 1");
      }
    }
    s.repetitions = repetition_override;
  }
  return s;
}

}  // namespace qge::engine
