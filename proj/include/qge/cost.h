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
#ifndef QGE_COST_H_
#define QGE_COST_H_

#include <array>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

// Closed-form query-complexity models for k-RDM estimation.
//
// Conventions: natural log inside square roots (ln d, ln d_eta), base-2 log
// for repetition counts (log2 M). All prefactors default to 1, so absolute
// numbers are "constant-calibrated" and only orderings, exponents and
// crossings are meaningful.
//
// The shadow, Bell/gentle and QAE baselines are not derived here. They follow
// the scalings reported in the fermionic classical-shadow and shadow-tomography
// literature and are kept pluggable:
//   fermionic-shadow  C_s * B(N,k) * eps^-2 * ln M,  B = C(N,k) k^{3/2}
//   bell-gentle       C_b * ln d * (ln M)^2 * eps^-4
//   qae               C_q * M * eps^-1 * log2 M
namespace qge::cost {

enum class Method {
  kFermionicShadow,
  kBellGentle,
  kQae,
  kPriorQge,
  kMethod1,
  kMethod2,
};

inline constexpr std::array<Method, 6> kAllMethods = {
    Method::kFermionicShadow, Method::kBellGentle, Method::kQae,
    Method::kPriorQge,        Method::kMethod1,    Method::kMethod2};

std::string_view MethodName(Method m);
// Throws kInvalidParameter for unknown names.
Method ParseMethod(std::string_view name);
bool IsQge(Method m);
// Exponent of 1/eps in the total.
double EpsilonExponent(Method m);

struct CostConstants {
  double prior_qge = 1.0;    // C_0
  double method1 = 1.0;      // C_1
  double method2 = 1.0;      // C_2
  double qae = 1.0;          // C_q
  double shadow = 1.0;       // C_s
  double bell_gentle = 1.0;  // C_b
  double aleph = 1.0;        // kappa in aleph
  // B(N, k); empty means the default C(N,k) k^{3/2}.
  std::function<double(int, int)> shadow_norm;

  double Prefactor(Method m) const;
  std::string Label() const;
};

struct CostParams {
  int modes = 0;
  int order = 1;
  int eta = 0;
  double epsilon = 1e-3;
  std::optional<double> observable_count;  // overrides the derived M
  CostConstants constants;

  // Override, else 2 C(N,k)^2 (Re and Im of every element).
  double M() const;
  double LogD() const;      // N ln 2
  double LogDEta() const;   // ln C(N, eta)
  double DEta() const;
  // Throws kInvalidParameter on out-of-range fields.
  void Validate() const;
};

// QGE prefactor: prior-qge kappa sqrt(M ln d); method-1 and method-2
// kappa sqrt(C(eta,k) C(N-eta+k,k) ln d_eta). Throws kNotApplicable for
// baselines.
double Aleph(Method m, const CostParams& params);
// Same, from an explicit ||sum_j (O_j^{(eta)})^2||.
double AlephFromNorm(Method m, double sector_norm, double log_d_eta, double M,
                     double log_d, double prefactor = 1.0);
// Method-1/2 prefactor degenerates to zero (k > eta or d_eta = 1).
bool AlephDegenerate(const CostParams& params);

// Asymptotic closed-form totals with the configured prefactors.
double TotalQueries(Method m, const CostParams& params);

// Parameters of the repetition schedule used by the adaptive engine.
struct ScheduleModel {
  double confidence = 0.0;  // c; 0 means the maximum 3 / (8 (1 + pi)^2)
  double kappa_r = 0.0;     // 0 means 1 / (2 (0.5 - 0.19)^2)
};

// Schedule-resolved total for a QGE method: sum_q aleph 2^q rep(R_q) with
// R_q = max(1, kappa_r ln(M / delta_q)) left unrounded, rep = R for the
// iterative methods and sqrt(R) for method-2. This is the quantity the engine
// ledger accumulates up to integer rounding.
double ScheduledQueries(Method m, const CostParams& params,
                        const ScheduleModel& model = {});

enum class SweepVariable { kEpsilon, kModes };

// Particle number used while sweeping N: fixed, or ceil(fraction * N).
struct EtaRule {
  bool proportional = false;
  double fraction = 0.0;
  static EtaRule Fixed() { return {}; }
  static EtaRule Fraction(double f) { return {true, f}; }
  int Apply(int modes, int fixed_eta) const;
};

// Location where TotalQueries(a) and TotalQueries(b) cross on [lo, hi]:
// bisection in log-space for epsilon, first flipped integer for N. Returns
// nullopt when the ordering never flips. Throws kInvalidParameter on a bad
// range.
std::optional<double> Crossover(Method a, Method b, const CostParams& base,
                                SweepVariable variable, double lo, double hi,
                                EtaRule eta_rule = EtaRule::Fixed());

struct CostRow {
  Method method;
  double total = 0.0;
  double aleph = 0.0;  // NaN for baselines
  double epsilon_exponent = 0.0;
  double modes_exponent = 0.0;  // local d log(total) / d log N at fixed eta/N
  bool degenerate = false;
};

// All six methods, ascending by total (ties broken by method order).
std::vector<CostRow> CompareTable(const CostParams& params);

// Presets used by the comparison sweeps.
CostParams Fig2Preset(int modes, int order, double epsilon = 1e-3);  // eta = ceil(7N/8)
CostParams Fig3Preset(int order, double epsilon = 1e-3);             // N = 152, eta = 113
CostParams HubbardPreset(int order, double epsilon = 1e-3);          // 100 sites, 200 modes

// CSV columns: method,N,k,eta,epsilon,M,d_eta,aleph,total,labels
void WriteCostCsvHeader(std::ostream& out);
void WriteCostCsvRows(const CostParams& params, const std::vector<CostRow>& rows,
                      std::ostream& out);

}  // namespace qge::cost

#endif  // QGE_COST_H_
