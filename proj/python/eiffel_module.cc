// Copyright 2026 The EIFFeL Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// Python bindings for the field, sharing, quantization and harness entry
// points.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstdint>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "eiffel/commitment.h"
#include "eiffel/harness.h"
#include "eiffel/quantize.h"
#include "eiffel/sharing.h"
#include "eiffel/status.h"

namespace py = pybind11;

namespace eiffel {
namespace {

[[noreturn]] void Throw(const absl::Status& status) {
  std::string message(status.message());
  if (IsErrorKind(status, ErrorKind::kConfigError) ||
      IsErrorKind(status, ErrorKind::kBadDimension)) {
    throw py::value_error(message);
  }
  throw std::runtime_error(message);
}

template <typename T>
T Unwrap(absl::StatusOr<T> value) {
  if (!value.ok()) Throw(value.status());
  return *std::move(value);
}

const PrimeField& F() { return PrimeField::Default(); }

Fe Checked(uint64_t x) {
  if (x >= F().modulus()) throw py::value_error("value not reduced mod p");
  return Fe{x};
}

RunConfig BuildConfig(const std::string& text,
                      const std::map<std::string, std::string>& overrides) {
  RunConfig config = Unwrap(ParseRunConfig(text));
  for (const auto& [key, value] : overrides) {
    absl::Status s = SetConfigValue(config, key, value);
    if (!s.ok()) Throw(s);
  }
  absl::Status s = ValidateRunConfig(config);
  if (!s.ok()) Throw(s);
  return config;
}

std::vector<int64_t> Centered(const std::vector<Fe>& v) {
  std::vector<int64_t> out;
  for (Fe x : v) out.push_back(F().ToCentered(x));
  return out;
}

py::dict IterationDict(const IterationReport& r) {
  py::dict d;
  d["aborted"] = r.run.aborted;
  d["abort_reason"] = r.run.abort_reason;
  d["malicious"] = r.malicious;
  d["accepted"] = r.run.accepted;
  d["expected_accepted"] = r.expected_accepted;
  d["final_cstar"] = r.run.final_cstar;
  d["oracle_agrees"] = r.oracle_agrees;
  d["aggregate"] = Centered(r.run.aggregate);
  d["mul_gates"] = r.num_mul_gates;
  d["max_share_exposure"] = r.run.max_share_exposure;
  std::vector<size_t> steps;
  for (const PartyMetrics& p : r.run.parties) steps.push_back(p.steps.size());
  d["steps"] = steps;
  return d;
}

PYBIND11_MODULE(_eiffel, m) {
  m.doc() = "Secure aggregation with verified inputs";

  m.def("modulus", [] { return F().modulus(); }, "Field modulus p.");
  m.def(
      "field_add",
      [](uint64_t a, uint64_t b) { return F().Add(Checked(a), Checked(b)).v; },
      "a + b mod p.");
  m.def(
      "field_mul",
      [](uint64_t a, uint64_t b) { return F().Mul(Checked(a), Checked(b)).v; },
      "a * b mod p.");
  m.def(
      "field_inv",
      [](uint64_t a) {
        if (a == 0) throw py::value_error("zero has no inverse");
        return F().Inv(Checked(a)).v;
      },
      "Inverse of a nonzero a mod p.");

  m.def(
      "share",
      [](uint64_t secret, size_t n, size_t threshold, uint64_t seed) {
        auto group = Unwrap(MakeToyGroup(F()));
        Vss vss(F(), *group);
        std::vector<Fe> xs;
        for (size_t i = 1; i <= n; ++i) xs.push_back(Fe{i});
        Prng prng(seed);
        auto [shares, check] =
            Unwrap(vss.Share(Checked(secret), xs, threshold, prng));
        std::vector<std::pair<uint64_t, uint64_t>> out;
        for (const Point& p : shares.points) out.emplace_back(p.x.v, p.y.v);
        return out;
      },
      "Feldman-verifiable Shamir shares (x, y) at x = 1..n.", py::arg("secret"),
      py::arg("n"), py::arg("threshold"), py::arg("seed") = 0);
  m.def(
      "robust_reconstruct",
      [](const std::vector<std::pair<uint64_t, uint64_t>>& shares,
         size_t threshold) {
        std::vector<Point> points;
        for (auto [x, y] : shares) points.push_back({Checked(x), Checked(y)});
        ReconReport r = Unwrap(RobustReconstruct(F(), points, threshold));
        std::vector<uint64_t> errors;
        for (Fe x : r.error_locations) errors.push_back(x.v);
        return std::make_pair(r.secret.v, errors);
      },
      "Gao decoding; returns (secret, x coordinates of wrong shares).",
      py::arg("shares"), py::arg("threshold"));

  m.def(
      "quantize",
      [](const std::vector<double>& u, int scale_bits, double clip,
         uint64_t seed) {
        Prng prng(seed);
        return QuantizeToInts(u, QuantParams{scale_bits, clip}, prng);
      },
      "Clips, scales and rounds stochastically to integers.", py::arg("values"),
      py::arg("scale_bits") = 12, py::arg("clip") = 4.0, py::arg("seed") = 0);
  m.def(
      "random_project",
      [](const std::vector<double>& u, size_t target_dim, uint64_t seed) {
        return Unwrap(RandomProject(u, target_dim, seed));
      },
      "Subsampled randomized Hadamard transform to target_dim coordinates.",
      py::arg("values"), py::arg("target_dim"), py::arg("seed"));

  m.def(
      "run_iteration",
      [](const std::string& text,
         const std::map<std::string, std::string>& overrides) {
        RunConfig config = BuildConfig(text, overrides);
        IterationReport r;
        {
          py::gil_scoped_release release;
          r = Unwrap(RunIteration(config));
        }
        return IterationDict(r);
      },
      "One protocol run from key = value config text; returns a dict.",
      py::arg("config") = "",
      py::arg("overrides") = std::map<std::string, std::string>{});
  m.def(
      "run_training_raw",
      [](const std::string& text,
         const std::map<std::string, std::string>& overrides) {
        RunConfig config = BuildConfig(text, overrides);
        TrainingReport r;
        {
          py::gil_scoped_release release;
          r = Unwrap(RunTraining(config));
        }
        return std::make_pair(MetricsJson(config, r), AccuracyCsv(r));
      },
      "Three-arm training; returns (metrics JSON, accuracy CSV).",
      py::arg("config") = "",
      py::arg("overrides") = std::map<std::string, std::string>{});
}

}  // namespace
}  // namespace eiffel
