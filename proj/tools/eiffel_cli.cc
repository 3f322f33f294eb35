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

// Command-line driver: eiffel run --config <file> [overrides].

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "eiffel/harness.h"

namespace {

absl::Status WriteFile(const std::filesystem::path& path,
                       const std::string& contents) {
  std::ofstream out(path);
  out << contents;
  if (!out) {
    return absl::InternalError("WriteFile: cannot write " + path.string());
  }
  return absl::OkStatus();
}

int Fail(const absl::Status& status) {
  std::cerr << "error: " << status << "\n";
  return 1;
}

int Run(const std::string& config_path,
        const std::vector<std::pair<std::string, std::string>>& overrides) {
  std::ifstream in(config_path);
  if (!in) {
    std::cerr << "error: cannot open config " << config_path << "\n";
    return 1;
  }
  std::stringstream text;
  text << in.rdbuf();
  absl::StatusOr<eiffel::RunConfig> config = eiffel::ParseRunConfig(text.str());
  if (!config.ok()) return Fail(config.status());
  for (const auto& [key, value] : overrides) {
    absl::Status s = eiffel::SetConfigValue(*config, key, value);
    if (!s.ok()) return Fail(s);
  }
  absl::Status valid = eiffel::ValidateRunConfig(*config);
  if (!valid.ok()) return Fail(valid);

  absl::StatusOr<eiffel::TrainingReport> report = eiffel::RunTraining(*config);
  if (!report.ok()) return Fail(report.status());

  for (size_t it = 0; it < report->eiffel.size(); ++it) {
    const eiffel::IterationReport& r = report->eiffel[it];
    std::cout << "iteration " << it << ": ";
    if (r.run.aborted) {
      std::cout << "aborted (" << r.run.abort_reason << ")";
    } else {
      std::cout << "accepted " << r.run.accepted.size() << "/" << config->n
                << " aggregate " << eiffel::AggregateChecksum(r.run.aggregate);
    }
    std::cout << (r.oracle_agrees ? "" : " [differs from plaintext filter]")
              << "\n";
  }
  for (const eiffel::TrainingPoint& p : report->accuracy) {
    if (p.iteration + 1 == config->iterations) {
      std::cout << "final accuracy " << eiffel::ArmName(p.arm) << ": "
                << p.accuracy << "\n";
    }
  }

  if (!config->out.empty()) {
    std::filesystem::path dir(config->out);
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec) {
      std::cerr << "error: cannot create " << dir << ": " << ec.message()
                << "\n";
      return 1;
    }
    absl::Status s =
        WriteFile(dir / "metrics.json", eiffel::MetricsJson(*config, *report));
    if (s.ok())
      s = WriteFile(dir / "accuracy.csv", eiffel::AccuracyCsv(*report));
    if (s.ok() && config->write_transcript && !report->eiffel.empty()) {
      s = WriteFile(dir / "transcript.txt",
                    report->eiffel.back().run.transcript);
    }
    if (!s.ok()) return Fail(s);
    std::cout << "wrote " << dir.string() << "\n";
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"EIFFeL secure aggregation simulator"};
  app.require_subcommand(1);

  CLI::App* run = app.add_subcommand("run", "Run a simulated training job");
  std::string config_path;
  run->add_option("--config", config_path, "Config file (key = value lines)")
      ->required()
      ->check(CLI::ExistingFile);
  std::optional<std::string> n, m, d, predicate, attack, recon, project, seed,
      out, iterations;
  run->add_option("--n", n, "Number of clients");
  run->add_option("--m", m, "Tolerated malicious clients");
  run->add_option("--d", d, "Model dimension");
  run->add_option("--predicate", predicate,
                  "norm_bound, norm_ball, zeno or cosine");
  run->add_option("--attack", attack,
                  "none, sign_flip, scaling, additive_noise, min_max, min_sum");
  run->add_option("--recon", recon, "gao, probabilistic or partition");
  run->add_option("--project", project, "Projected dimension, or off");
  run->add_option("--seed", seed, "Seed");
  run->add_option("--iterations", iterations, "Training iterations");
  run->add_option("--out", out, "Output directory");

  CLI11_PARSE(app, argc, argv);

  std::vector<std::pair<std::string, std::string>> overrides;
  auto add = [&](const char* key, const std::optional<std::string>& v) {
    if (v.has_value()) overrides.emplace_back(key, *v);
  };
  add("n", n);
  add("m", m);
  add("d", d);
  add("predicate", predicate);
  add("attack", attack);
  add("recon", recon);
  add("project", project);
  add("seed", seed);
  add("iterations", iterations);
  add("out", out);
  return Run(config_path, overrides);
}
