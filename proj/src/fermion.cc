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

#include <algorithm>
#include <bit>
#include <optional>
#include <ostream>
#include <sstream>

#include <Eigen/Eigenvalues>

namespace qge::fermion {

namespace {

constexpr int kMaxModes = 20;

void CheckModes(int modes) {
  if (modes < 1 || modes > kMaxModes) {
    throw Error(ErrorKind::kInvalidInput,
                "mode count must lie in [1, " + std::to_string(kMaxModes) + "]");
  }
}

// Applies a_j (create = false) or a†_j (create = true) to basis state |s>.
// Returns the new index and accumulates the Jordan-Wigner sign, or nullopt if
// the state is annihilated.
std::optional<uint64_t> ApplyLadder(uint64_t s, int j, bool create,
                                    JordanWignerHook hook, int& sign) {
  const uint64_t bit = uint64_t{1} << j;
  const bool occupied = (s & bit) != 0;
  if (occupied == create) return std::nullopt;
  if (!hook.drop_parity_string) {
    const uint64_t below = s & (bit - 1);
    if (std::popcount(below) & 1) sign = -sign;
  }
  return s ^ bit;
}

bool StrictlyIncreasing(const std::vector<int>& v) {
  for (size_t i = 1; i < v.size(); ++i) {
    if (v[i] <= v[i - 1]) return false;
  }
  return true;
}

std::string JoinTuple(const std::vector<int>& v, char sep) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) {
    if (i) os << sep;
    os << v[i];
  }
  return os.str();
}

// All ordered k-tuples of distinct entries from [0, n), lexicographic.
void EnumerateTuples(int n, int k, std::vector<int>& cur,
                     std::vector<bool>& used,
                     std::vector<std::vector<int>>& out) {
  if (static_cast<int>(cur.size()) == k) {
    out.push_back(cur);
    return;
  }
  for (int i = 0; i < n; ++i) {
    if (used[i]) continue;
    used[i] = true;
    cur.push_back(i);
    EnumerateTuples(n, k, cur, used, out);
    cur.pop_back();
    used[i] = false;
  }
}

std::string CsvQuote(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + "\"";
}

}  // namespace

int Popcount(uint64_t x) { return std::popcount(x); }

void Validate(const LadderMonomial& m) {
  if (m.modes < 1 || m.modes > kMaxModes) {
    throw Error(ErrorKind::kInvalidMonomial, "mode count out of range");
  }
  if (m.creators.empty() || m.creators.size() != m.annihilators.size()) {
    throw Error(ErrorKind::kInvalidMonomial,
                "need k >= 1 creators and k annihilators");
  }
  for (const auto* tuple : {&m.creators, &m.annihilators}) {
    std::vector<int> sorted = *tuple;
    std::sort(sorted.begin(), sorted.end());
    if (sorted.front() < 0 || sorted.back() >= m.modes) {
      throw Error(ErrorKind::kInvalidMonomial, "mode index out of range");
    }
    if (std::adjacent_find(sorted.begin(), sorted.end()) != sorted.end()) {
      throw Error(ErrorKind::kInvalidMonomial, "repeated mode index");
    }
  }
}

SparseCMatrix Annihilator(int mode, int modes, JordanWignerHook hook) {
  CheckModes(modes);
  if (mode < 0 || mode >= modes) {
    throw Error(ErrorKind::kInvalidMonomial, "mode index out of range");
  }
  const int64_t dim = int64_t{1} << modes;
  std::vector<Eigen::Triplet<Complex, int64_t>> trips;
  trips.reserve(dim / 2);
  for (int64_t s = 0; s < dim; ++s) {
    int sign = 1;
    if (auto t = ApplyLadder(s, mode, false, hook, sign)) {
      trips.emplace_back(static_cast<int64_t>(*t), s, Complex(sign, 0));
    }
  }
  SparseCMatrix a(dim, dim);
  a.setFromTriplets(trips.begin(), trips.end());
  return a;
}

SparseCMatrix Creator(int mode, int modes, JordanWignerHook hook) {
  return SparseCMatrix(Annihilator(mode, modes, hook).adjoint());
}

SparseCMatrix BuildLadderMonomial(const LadderMonomial& m,
                                  JordanWignerHook hook) {
  Validate(m);
  const int64_t dim = int64_t{1} << m.modes;
  std::vector<Eigen::Triplet<Complex, int64_t>> trips;
  for (int64_t s = 0; s < dim; ++s) {
    int sign = 1;
    std::optional<uint64_t> state = static_cast<uint64_t>(s);
    // Rightmost factor acts first.
    for (auto it = m.annihilators.rbegin(); state && it != m.annihilators.rend();
         ++it) {
      state = ApplyLadder(*state, *it, false, hook, sign);
    }
    for (auto it = m.creators.rbegin(); state && it != m.creators.rend(); ++it) {
      state = ApplyLadder(*state, *it, true, hook, sign);
    }
    if (state) {
      trips.emplace_back(static_cast<int64_t>(*state), s, Complex(sign, 0));
    }
  }
  SparseCMatrix t(dim, dim);
  t.setFromTriplets(trips.begin(), trips.end());
  return t;
}

void CheckObservable(const Observable& o) {
  const SparseCMatrix diff = o.matrix - SparseCMatrix(o.matrix.adjoint());
  double max_dev = 0.0;
  for (int64_t c = 0; c < diff.outerSize(); ++c) {
    for (SparseCMatrix::InnerIterator it(diff, c); it; ++it) {
      max_dev = std::max(max_dev, std::abs(it.value()));
    }
  }
  if (max_dev > 1e-12) {
    throw Error(ErrorKind::kNonHermitian, "observable " + o.label);
  }
  // Max absolute column sum bounds the spectral norm of a Hermitian matrix.
  double bound = 0.0;
  for (int64_t c = 0; c < o.matrix.outerSize(); ++c) {
    double col = 0.0;
    for (SparseCMatrix::InnerIterator it(o.matrix, c); it; ++it) {
      col += std::abs(it.value());
    }
    bound = std::max(bound, col);
  }
  if (bound <= 1.0 + 1e-12) return;
  const CMatrix dense(o.matrix);
  Eigen::SelfAdjointEigenSolver<CMatrix> es(dense, Eigen::EigenvaluesOnly);
  if (es.eigenvalues().cwiseAbs().maxCoeff() > 1.0 + 1e-12) {
    throw Error(ErrorKind::kNormalization, "observable " + o.label);
  }
}

ObservableSet KrdmObservableSet(int modes, int order) {
  CheckModes(modes);
  if (order < 1 || order > modes) {
    throw Error(ErrorKind::kInvalidOrder,
                "RDM order must satisfy 1 <= k <= N");
  }
  std::vector<std::vector<int>> tuples;
  std::vector<int> cur;
  std::vector<bool> used(modes, false);
  EnumerateTuples(modes, order, cur, used, tuples);

  ObservableSet set;
  set.modes = modes;
  set.order = order;
  set.items.reserve(2 * tuples.size() * tuples.size());
  const Complex half_i(0.0, 0.5);
  for (const auto& p : tuples) {
    for (const auto& q : tuples) {
      const SparseCMatrix t = BuildLadderMonomial({p, q, modes});
      const SparseCMatrix td(t.adjoint());
      const bool permuted = !StrictlyIncreasing(p) || !StrictlyIncreasing(q);
      const std::string args =
          "(" + JoinTuple(p, ' ') + "," + JoinTuple(q, ' ') + ")";

      Observable re;
      re.matrix = (t + td) * Complex(0.5, 0.0);
      re.matrix.prune(Complex(0.0, 0.0));
      re.label = "Re" + args;
      re.order = order;
      re.p = p;
      re.q = q;
      re.part = Part::kReal;
      re.permuted = permuted;

      Observable im;
      // (T - T†) / (2i) = -(i/2) (T - T†)
      im.matrix = (t - td) * (-half_i);
      im.matrix.prune(Complex(0.0, 0.0));
      im.label = "Im" + args;
      im.order = order;
      im.p = p;
      im.q = q;
      im.part = Part::kImag;
      im.trivial = (p == q);
      im.permuted = permuted;

      set.items.push_back(std::move(re));
      set.items.push_back(std::move(im));
    }
  }
  return set;
}

std::vector<Observable> ObservableSet::Canonical() const {
  std::vector<Observable> out;
  for (const auto& o : items) {
    if (!o.permuted) out.push_back(o);
  }
  return out;
}

size_t ObservableSet::CanonicalCount() const {
  return static_cast<size_t>(std::count_if(
      items.begin(), items.end(), [](const Observable& o) { return !o.permuted; }));
}

size_t ObservableSet::NontrivialCanonicalCount() const {
  return static_cast<size_t>(
      std::count_if(items.begin(), items.end(), [](const Observable& o) {
        return !o.permuted && !o.trivial;
      }));
}

std::vector<Observable> EstimationTargets(int modes, int order) {
  std::vector<Observable> out;
  for (auto& o : KrdmObservableSet(modes, order).items) {
    if (!o.permuted && !o.trivial) out.push_back(std::move(o));
  }
  return out;
}

void WriteManifestCsv(const ObservableSet& set, std::ostream& out) {
  out << "label,k,p,q,part,trivial\n";
  for (const auto& o : set.items) {
    out << CsvQuote(o.label) << ',' << o.order << ',' << JoinTuple(o.p, ' ')
        << ',' << JoinTuple(o.q, ' ') << ','
        << (o.part == Part::kReal ? "re" : "im") << ',' << (o.trivial ? 1 : 0)
        << '\n';
  }
}

SectorBasis MakeSectorBasis(int modes, int eta) {
  CheckModes(modes);
  if (eta < 0 || eta > modes) {
    throw Error(ErrorKind::kInvalidInput, "particle number outside [0, N]");
  }
  SectorBasis basis;
  basis.modes = modes;
  basis.eta = eta;
  const int64_t dim = int64_t{1} << modes;
  basis.indices.reserve(Binomial(modes, eta));
  for (int64_t s = 0; s < dim; ++s) {
    if (std::popcount(static_cast<uint64_t>(s)) == eta) basis.indices.push_back(s);
  }
  return basis;
}

bool ConservesParticleNumber(const SparseCMatrix& o, double tol) {
  for (int64_t c = 0; c < o.outerSize(); ++c) {
    for (SparseCMatrix::InnerIterator it(o, c); it; ++it) {
      if (std::popcount(static_cast<uint64_t>(it.row())) !=
              std::popcount(static_cast<uint64_t>(it.col())) &&
          std::abs(it.value()) > tol) {
        return false;
      }
    }
  }
  return true;
}

CMatrix SectorRestrict(const SparseCMatrix& o, int modes, int eta) {
  const int64_t dim = int64_t{1} << modes;
  if (o.rows() != dim || o.cols() != dim) {
    throw Error(ErrorKind::kShape, "observable dimension does not match 2^N");
  }
  if (!ConservesParticleNumber(o)) {
    throw Error(ErrorKind::kSymmetryViolation,
                "observable couples different particle-number sectors");
  }
  const SectorBasis basis = MakeSectorBasis(modes, eta);
  std::vector<int64_t> position(dim, -1);
  for (int64_t i = 0; i < basis.dimension(); ++i) position[basis.indices[i]] = i;

  CMatrix out = CMatrix::Zero(basis.dimension(), basis.dimension());
  for (int64_t col : basis.indices) {
    for (SparseCMatrix::InnerIterator it(o, col); it; ++it) {
      const int64_t r = position[it.row()];
      if (r >= 0) out(r, position[col]) = it.value();
    }
  }
  return out;
}

CMatrix SectorRestrict(const Observable& o, int modes, int eta) {
  return SectorRestrict(o.matrix, modes, eta);
}

double SumSquaresSectorNorm(const std::vector<CMatrix>& restricted) {
  if (restricted.empty()) {
    throw Error(ErrorKind::kInvalidInput, "empty observable list");
  }
  const auto n = restricted.front().rows();
  CMatrix sum = CMatrix::Zero(n, n);
  for (const auto& m : restricted) {
    if (m.rows() != n || m.cols() != n) {
      throw Error(ErrorKind::kShape, "restricted observables differ in size");
    }
    sum.noalias() += m * m;
  }
  Eigen::SelfAdjointEigenSolver<CMatrix> es(sum, Eigen::EigenvaluesOnly);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

double SumSquaresSectorNorm(const std::vector<Observable>& observables,
                            int modes, int eta) {
  if (observables.empty()) {
    throw Error(ErrorKind::kInvalidInput, "empty observable list");
  }
  std::vector<CMatrix> restricted;
  restricted.reserve(observables.size());
  for (const auto& o : observables) {
    restricted.push_back(SectorRestrict(o.matrix, modes, eta));
  }
  return SumSquaresSectorNorm(restricted);
}

double BinomNormFormula(int modes, int order, int eta) {
  if (eta < 0 || eta > modes || order < 1 || order > modes) {
    throw Error(ErrorKind::kInvalidParameter,
                "need 0 <= eta <= N and 1 <= k <= N");
  }
  if (order > eta) return 0.0;
  const uint64_t a = Binomial(eta, order);
  const uint64_t b = Binomial(modes - eta + order, order);
  const unsigned __int128 prod = static_cast<unsigned __int128>(a) * b;
  return static_cast<double>(prod);
}

}  // namespace qge::fermion
