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
#ifndef QGE_CLI_H_
#define QGE_CLI_H_

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <string_view>

#include "qge/common.h"

namespace qge::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitConfig = 1;
inline constexpr int kExitVerify = 2;
inline constexpr int kExitContract = 3;

inline constexpr const char* kOutDirEnv = "QGE_LAB_OUT_DIR";

// Entry point of `qge_lab`; never throws.
int Main(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

// Config and validation errors map to 1, everything else to 3.
int ExitCodeFor(ErrorKind kind);

// --out, else $QGE_LAB_OUT_DIR, else the working directory. Created if
// missing.
std::filesystem::path OutputDirectory(const std::optional<std::string>& flag);

// "# units: ..." first line and "# provenance: ..." last line of every CSV.
void WriteUnitsHeader(std::ostream& out, std::string_view units);
void WriteProvenanceFooter(std::ostream& out, std::string_view command,
                           std::string_view details);

struct SlopeFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r_squared = 0.0;
};

// Least squares of log(y) on log(x); throws kConfig with fewer than 3 points.
SlopeFit FitLogLog(std::span<const double> x, std::span<const double> y);

}  // namespace qge::cli

#endif  // QGE_CLI_H_
