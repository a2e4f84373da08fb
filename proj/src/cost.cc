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
#include "qge/cost.h"

#include <algorithm>
#include <cmath>
#include <iomanip>
#include <limits>
#include <ostream>
#include <sstream>

#include "qge/common.h"
#include "qge/fermion.h"
#include "qge/schedule.h"

namespace qge::cost {

std::string_view MethodName(Method m) {
  switch (m) {
    case Method::kFermionicShadow: return "fermionic-shadow";
    case Method::kBellGentle: return "bell-gentle";
    case Method::kQae: return "qae";
    case Method::kPriorQge: return "prior-qge";
    case Method::kMethod1: return "method-1";
    case Method::kMethod2: return "method-2";
  }
  return "unknown";
}

Method ParseMethod(std::string_view name) {
  for (Method m : kAllMethods) {
    if (MethodName(m) == name) return m;
  }
  throw Error(ErrorKind::kInvalidParameter,
              "unknown method '" + std::string(name) + "'");
}

bool IsQge(Method m) {
  return m == Method::kPriorQge || m == Method::kMethod1 || m == Method::kMethod2;
}

double EpsilonExponent(Method m) {
  switch (m) {
    case Method::kFermionicShadow: return 2.0;
    case Method::kBellGentle: return 4.0;
    default: return 1.0;
  }
}

double CostConstants::Prefactor(Method m) const {
  switch (m) {
    case Method::kFermionicShadow: return shadow;
    case Method::kBellGentle: return bell_gentle;
    case Method::kQae: return qae;
    case Method::kPriorQge: return prior_qge;
    case Method::kMethod1: return method1;
    case Method::kMethod2: return method2;
  }
  return 1.0;
}

std::string CostConstants::Label() const {
  std::ostringstream os;
  os << "C0=" << prior_qge << ";C1=" << method1 << ";C2=" << method2
     << ";Cq=" << qae << ";Cs=" << shadow << ";Cb=" << bell_gentle
     << ";kappa=" << aleph << ";B=" << (shadow_norm ? "custom" : "C(N,k)k^1.5");
  return os.str();
}

double CostParams::M() const {
  if (observable_count) return *observable_count;
  const double c = std::exp(LogBinomial(modes, order));
  return 2.0 * c * c;
}

double CostParams::LogD() const { return modes * std::log(2.0); }

double CostParams::LogDEta() const { return LogBinomial(modes, eta); }

double CostParams::DEta() const { return std::exp(LogDEta()); }

void CostParams::Validate() const {
  if (modes < 1) throw Error(ErrorKind::kInvalidParameter, "N must be >= 1");
  if (order < 1 || order > modes) {
    throw Error(ErrorKind::kInvalidParameter, "need 1 <= k <= N");
  }
  if (eta < 0 || eta > modes) {
    throw Error(ErrorKind::kInvalidParameter, "need 0 <= eta <= N");
  }
  if (!(epsilon > 0.0)) {
    throw Error(ErrorKind::kInvalidParameter, "epsilon must be positive");
  }
  if (observable_count && !(*observable_count >= 1.0)) {
    throw Error(ErrorKind::kInvalidParameter, "M must be >= 1");
  }
}

namespace {

// C(eta,k) C(N-eta+k,k) as a double; exact while it fits, lgamma beyond.
double SectorNorm(const CostParams& p) {
  try {
    return fermion::BinomNormFormula(p.modes, p.order, p.eta);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::kInvalidInput) throw;
    return std::exp(LogBinomial(p.eta, p.order) +
                    LogBinomial(p.modes - p.eta + p.order, p.order));
  }
}

double ShadowNorm(const CostParams& p) {
  if (p.constants.shadow_norm) return p.constants.shadow_norm(p.modes, p.order);
  return std::exp(LogBinomial(p.modes, p.order)) * std::pow(p.order, 1.5);
}

}  // namespace

double AlephFromNorm(Method m, double sector_norm, double log_d_eta, double M,
                     double log_d, double prefactor) {
  switch (m) {
    case Method::kPriorQge:
      return prefactor * std::sqrt(M * log_d);
    case Method::kMethod1:
    case Method::kMethod2:
      return prefactor * std::sqrt(sector_norm * log_d_eta);
    default:
      throw Error(ErrorKind::kNotApplicable,
                  std::string(MethodName(m)) + " has no QGE prefactor");
  }
}

double Aleph(Method m, const CostParams& params) {
  params.Validate();
  return AlephFromNorm(m, SectorNorm(params), params.LogDEta(), params.M(),
                       params.LogD(), params.constants.aleph);
}

bool AlephDegenerate(const CostParams& params) {
  return params.order > params.eta || params.LogDEta() <= 0.0;
}

double TotalQueries(Method m, const CostParams& params) {
  params.Validate();
  const double inv_eps = 1.0 / params.epsilon;
  const double big_m = params.M();
  const double log2_m = std::log2(big_m);
  const double c = params.constants.Prefactor(m);
  switch (m) {
    case Method::kPriorQge:
    case Method::kMethod1:
      return c * inv_eps * Aleph(m, params) * log2_m;
    case Method::kMethod2:
      return c * inv_eps * Aleph(m, params) * std::sqrt(log2_m);
    case Method::kQae:
      return c * big_m * inv_eps * log2_m;
    case Method::kFermionicShadow:
      return c * ShadowNorm(params) * inv_eps * inv_eps * std::log(big_m);
    case Method::kBellGentle: {
      const double ln_m = std::log(big_m);
      return c * params.LogD() * ln_m * ln_m * std::pow(inv_eps, 4.0);
    }
  }
  return 0.0;
}

double ScheduledQueries(Method m, const CostParams& params,
                        const ScheduleModel& model) {
  if (!IsQge(m)) {
    throw Error(ErrorKind::kNotApplicable,
                std::string(MethodName(m)) + " has no adaptive schedule");
  }
  const double c = model.confidence > 0.0 ? model.confidence : engine::kMaxConfidence;
  const double kappa_r = model.kappa_r > 0.0 ? model.kappa_r : engine::kDefaultKappaR;
  engine::ValidateConfidence(c);
  const double aleph = Aleph(m, params);
  const int q_max = engine::MaxIteration(params.epsilon);
  const double big_m = params.M();
  double total = 0.0;
  for (int q = 0; q <= q_max; ++q) {
    const double delta = c / std::pow(8.0, q_max - q);
    const double r = std::max(1.0, kappa_r * std::log(big_m / delta));
    const double rep = m == Method::kMethod2 ? std::sqrt(r) : r;
    total += aleph * std::ldexp(1.0, q) * rep;
  }
  return total;
}

int EtaRule::Apply(int modes, int fixed_eta) const {
  if (!proportional) return fixed_eta;
  const int eta = static_cast<int>(std::ceil(fraction * modes - 1e-9));
  return std::clamp(eta, 0, modes);
}

namespace {

double LogRatio(Method a, Method b, const CostParams& p) {
  const double ta = TotalQueries(a, p);
  const double tb = TotalQueries(b, p);
  if (ta == tb) return 0.0;
  if (ta <= 0.0 || tb <= 0.0) return ta < tb ? -1.0 : 1.0;
  return std::log(ta) - std::log(tb);
}

int Sign(double x) {
  if (std::abs(x) < 1e-12) return 0;
  return x > 0 ? 1 : -1;
}

}  // namespace

std::optional<double> Crossover(Method a, Method b, const CostParams& base,
                                SweepVariable variable, double lo, double hi,
                                EtaRule eta_rule) {
  if (!(lo > 0.0 && hi > lo)) {
    throw Error(ErrorKind::kInvalidParameter, "sweep range must satisfy 0 < lo < hi");
  }
  if (variable == SweepVariable::kEpsilon) {
    auto at = [&](double log_eps) {
      CostParams p = base;
      p.epsilon = std::exp(log_eps);
      return LogRatio(a, b, p);
    };
    constexpr int kScan = 256;
    const double l0 = std::log(lo), l1 = std::log(hi);
    double prev_x = l0;
    int prev_s = Sign(at(l0));
    for (int i = 1; i <= kScan; ++i) {
      const double x = l0 + (l1 - l0) * i / kScan;
      const int s = Sign(at(x));
      if (prev_s != 0 && s != 0 && s != prev_s) {
        double left = prev_x, right = x;
        for (int it = 0; it < 200; ++it) {
          const double mid = 0.5 * (left + right);
          if (Sign(at(mid)) == prev_s) {
            left = mid;
          } else {
            right = mid;
          }
        }
        return std::exp(0.5 * (left + right));
      }
      if (s != 0) prev_s = s;
      prev_x = x;
    }
    return std::nullopt;
  }

  const int n_lo = static_cast<int>(std::ceil(lo));
  const int n_hi = static_cast<int>(std::floor(hi));
  if (n_lo > n_hi || n_lo < 1) {
    throw Error(ErrorKind::kInvalidParameter, "empty integer N range");
  }
  int first_sign = 0;
  for (int n = n_lo; n <= n_hi; ++n) {
    CostParams p = base;
    p.modes = n;
    p.eta = eta_rule.Apply(n, base.eta);
    if (p.order > n || p.eta > n) continue;
    const int s = Sign(LogRatio(a, b, p));
    if (s == 0) continue;
    if (first_sign == 0) {
      first_sign = s;
    } else if (s != first_sign) {
      return static_cast<double>(n);
    }
  }
  return std::nullopt;
}

namespace {

double ModesExponent(Method m, const CostParams& params) {
  const double frac = params.modes > 0
                          ? static_cast<double>(params.eta) / params.modes
                          : 0.0;
  const int step = std::max(1, params.modes / 10);
  auto total_at = [&](int n) -> double {
    CostParams p = params;
    p.modes = n;
    p.eta = std::clamp(static_cast<int>(std::lround(frac * n)), 0, n);
    if (p.order > n) return std::numeric_limits<double>::quiet_NaN();
    p.observable_count.reset();
    return TotalQueries(m, p);
  };
  const int lo = std::max(params.order, params.modes - step);
  const int hi = params.modes + step;
  const double t_lo = total_at(lo), t_hi = total_at(hi);
  if (!(t_lo > 0.0 && t_hi > 0.0) || lo == hi) {
    return std::numeric_limits<double>::quiet_NaN();
  }
  return (std::log(t_hi) - std::log(t_lo)) /
         (std::log(static_cast<double>(hi)) - std::log(static_cast<double>(lo)));
}

}  // namespace

std::vector<CostRow> CompareTable(const CostParams& params) {
  params.Validate();
  std::vector<CostRow> rows;
  for (Method m : kAllMethods) {
    CostRow row;
    row.method = m;
    row.total = TotalQueries(m, params);
    row.aleph = IsQge(m) ? Aleph(m, params)
                         : std::numeric_limits<double>::quiet_NaN();
    row.epsilon_exponent = EpsilonExponent(m);
    row.modes_exponent = ModesExponent(m, params);
    row.degenerate = (m == Method::kMethod1 || m == Method::kMethod2) &&
                     AlephDegenerate(params);
    rows.push_back(row);
  }
  std::stable_sort(rows.begin(), rows.end(), [](const CostRow& x, const CostRow& y) {
    return x.total < y.total;
  });
  return rows;
}

CostParams Fig2Preset(int modes, int order, double epsilon) {
  CostParams p;
  p.modes = modes;
  p.order = order;
  p.eta = EtaRule::Fraction(7.0 / 8.0).Apply(modes, 0);
  p.epsilon = epsilon;
  return p;
}

CostParams Fig3Preset(int order, double epsilon) {
  CostParams p;
  p.modes = 152;
  p.order = order;
  p.eta = 113;
  p.epsilon = epsilon;
  return p;
}

CostParams HubbardPreset(int order, double epsilon) {
  // 100 spatial sites, two spin orbitals each, doped to 7/8 filling.
  return Fig2Preset(200, order, epsilon);
}

void WriteCostCsvHeader(std::ostream& out) {
  out << "method,N,k,eta,epsilon,M,d_eta,aleph,total,labels\n";
}

void WriteCostCsvRows(const CostParams& params, const std::vector<CostRow>& rows,
                      std::ostream& out) {
  std::ostringstream m_str, d_str;
  m_str << std::setprecision(10) << params.M();
  d_str << std::setprecision(10) << params.DEta();
  for (const auto& row : rows) {
    out << MethodName(row.method) << ',' << params.modes << ',' << params.order
        << ',' << params.eta << ',' << std::setprecision(10) << params.epsilon
        << ',' << m_str.str() << ',' << d_str.str() << ',';
    if (std::isnan(row.aleph)) {
      out << "";
    } else {
      out << std::setprecision(10) << row.aleph;
    }
    out << ',' << std::setprecision(10) << row.total << ','
        << "constant-calibrated";
    if (!IsQge(row.method)) out << ";external-baseline";
    if (row.degenerate) out << ";degenerate";
    out << '\n';
  }
}

}  // namespace qge::cost
