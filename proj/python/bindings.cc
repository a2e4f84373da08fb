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
// Python bindings for the lab: problem construction, the adaptive estimator,
// the cost models and the probe readout.

#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "qge/cli.h"
#include "qge/common.h"
#include "qge/cost.h"
#include "qge/encode.h"
#include "qge/engine.h"
#include "qge/fermion.h"
#include "qge/probe.h"
#include "qge/schedule.h"
#include "qge/verify.h"

namespace py = pybind11;

namespace {

qge::cost::CostParams Params(int modes, int order, int eta, double epsilon) {
  qge::cost::CostParams p;
  p.modes = modes;
  p.order = order;
  p.eta = eta;
  p.epsilon = epsilon;
  return p;
}

py::dict Simulate(int modes, int order, int eta, double epsilon, const std::string& method,
                  int trials, uint64_t seed, int jobs, int probe_bits) {
  std::mt19937_64 state_rng(qge::StreamSeed(seed, ~uint64_t{0}));
  qge::engine::Problem problem{qge::fermion::EstimationTargets(modes, order),
                               qge::statevector::RandomSectorState(modes, eta, state_rng),
                               eta, order};
  qge::engine::ScheduleConfig config;
  config.epsilon = epsilon;
  config.method = qge::cost::ParseMethod(method);
  config.probe_bits = probe_bits;
  config.record_trace = true;
  qge::engine::MonteCarloSummary s;
  {
    py::gil_scoped_release release;
    s = qge::engine::RunTrials(problem, config, trials, seed, jobs);
  }
  std::vector<std::string> labels;
  for (const auto& o : problem.observables) labels.push_back(o.label);
  py::dict out;
  out["labels"] = labels;
  out["exact"] = s.exact;
  out["mean_estimate"] = s.mean_estimate;
  out["mse"] = s.mse;
  out["max_mse"] = s.max_mse;
  out["total_queries"] = s.total_queries;
  out["violating_run_fraction"] = s.violating_run_fraction;
  out["warnings"] = s.warnings;
  return out;
}

py::tuple CliMain(const std::vector<std::string>& args) {
  std::vector<const char*> argv = {"qge_lab"};
  for (const auto& a : args) argv.push_back(a.c_str());
  std::ostringstream out, err;
  const int code = qge::cli::Main(static_cast<int>(argv.size()), argv.data(), out, err);
  return py::make_tuple(code, out.str(), err.str());
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Adaptive quantum gradient estimation lab";
  py::register_exception<qge::Error>(m, "QgeError", PyExc_ValueError);

  m.def("version", [] { return std::string(qge::Version()); });

  m.def(
      "observable_labels",
      [](int modes, int order) {
        std::vector<std::string> out;
        for (const auto& o : qge::fermion::EstimationTargets(modes, order)) out.push_back(o.label);
        return out;
      },
      py::arg("modes"), py::arg("order"),
      "Labels of the nontrivial canonical k-RDM observables.");
  m.def(
      "sector_norm",
      [](int modes, int order, int eta) {
        return qge::fermion::SumSquaresSectorNorm(
            qge::fermion::KrdmObservableSet(modes, order).Canonical(), modes, eta);
      },
      py::arg("modes"), py::arg("order"), py::arg("eta"),
      "Brute-force ||sum_j O_j^2|| of the canonical set on the eta sector.");
  m.def("binom_norm", &qge::fermion::BinomNormFormula, py::arg("modes"), py::arg("order"),
        py::arg("eta"));

  m.def(
      "eigen_poly_transform",
      [](const qge::CMatrix& a, const std::vector<double>& coefficients, bool chebyshev) {
        qge::encode::PolynomialSpec f;
        f.basis = chebyshev ? qge::encode::PolynomialBasis::kChebyshev
                            : qge::encode::PolynomialBasis::kMonomial;
        f.coefficients = coefficients;
        return qge::CMatrix(
            qge::encode::EigenPolyTransform(qge::encode::BlockEncode(a, 1.0), f).TopLeft());
      },
      py::arg("matrix"), py::arg("coefficients"), py::arg("chebyshev") = true,
      "f(A) for a Hermitian A with ||A|| <= 1, via a block encoding.");

  m.def(
      "dump_block_encoding",
      [](const qge::CMatrix& a, double alpha, const std::string& path) {
        std::ofstream f(path, std::ios::binary);
        if (!f) throw qge::Error(qge::ErrorKind::kIo, "cannot write " + path);
        qge::encode::WriteBlockEncodingBinary(qge::encode::BlockEncode(a, alpha).unitary, f);
      },
      py::arg("matrix"), py::arg("alpha"), py::arg("path"),
      "Write the block-encoding unitary of A / alpha as a binary matrix file.");
  m.def(
      "load_block_encoding",
      [](const std::string& path) {
        std::ifstream f(path, std::ios::binary);
        if (!f) throw qge::Error(qge::ErrorKind::kIo, "cannot read " + path);
        return qge::encode::ReadBlockEncodingBinary(f);
      },
      py::arg("path"));

  m.def(
      "readout_distribution",
      [](double v, int p, const std::string& window) {
        return qge::probe::ReadoutDistribution(v, qge::probe::MakeGrid(p),
                                               qge::probe::ParseWindow(window));
      },
      py::arg("v"), py::arg("p"), py::arg("window") = "uniform");
  m.def(
      "single_shot_success",
      [](double v, int p) {
        return qge::probe::SingleShotSuccessProbability(v, qge::probe::MakeGrid(p),
                                                        qge::probe::Window::kUniform);
      },
      py::arg("v"), py::arg("p"));
  m.def(
      "grid", [](int p) { return qge::probe::MakeGrid(p).points; }, py::arg("p"));

  m.def(
      "schedule",
      [](double epsilon, double c, size_t count) {
        const auto s = qge::engine::MakeSchedule(epsilon, c, count);
        return py::make_tuple(s.q_max, s.delta, s.repetitions);
      },
      py::arg("epsilon"), py::arg("c") = qge::engine::kMaxConfidence, py::arg("count"),
      "(q_max, delta per iteration, repetitions per iteration).");

  m.def(
      "total_queries",
      [](const std::string& method, int modes, int order, int eta, double epsilon) {
        return qge::cost::TotalQueries(qge::cost::ParseMethod(method),
                                       Params(modes, order, eta, epsilon));
      },
      py::arg("method"), py::arg("modes"), py::arg("order"), py::arg("eta"),
      py::arg("epsilon"));
  m.def(
      "compare",
      [](int modes, int order, int eta, double epsilon) {
        std::vector<std::pair<std::string, double>> out;
        for (const auto& r : qge::cost::CompareTable(Params(modes, order, eta, epsilon))) {
          out.emplace_back(std::string(qge::cost::MethodName(r.method)), r.total);
        }
        return out;
      },
      py::arg("modes"), py::arg("order"), py::arg("eta"), py::arg("epsilon"),
      "All methods ranked by total queries (constant-calibrated).");

  m.def("simulate", &Simulate, py::arg("modes"), py::arg("order"), py::arg("eta"),
        py::arg("epsilon") = 0.1, py::arg("method") = "method-2", py::arg("trials") = 20,
        py::arg("seed") = 0, py::arg("jobs") = 1, py::arg("probe_bits") = 3,
        "Monte-Carlo runs of the adaptive estimator on a random sector state.");

  m.def(
      "verify",
      [](const std::vector<std::string>& suites) {
        std::vector<std::pair<std::string, bool>> out;
        for (const auto& s : qge::verify::Run(qge::verify::Options{}, suites)) {
          out.emplace_back(s.name, s.passed());
        }
        return out;
      },
      py::arg("suites") = std::vector<std::string>{});

  m.def("cli", &CliMain, py::arg("args"), "Run the command line; returns (code, stdout, stderr).");
}
