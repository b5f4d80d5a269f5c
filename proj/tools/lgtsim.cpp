// Copyright 2026 The lgtstator Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

// lgtsim: run measurement scenarios, export gate schedules, self-test.
//
// Exit status: 0 when every cross-checked request agrees with the direct
// evaluation, 1 when one does not, 2 on usage, parse or validation errors.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"
#include "lgt/scenario.hpp"

namespace {

constexpr int kMismatch = 1;
constexpr int kError = 2;

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

void emit(const std::string& out_path, const std::string& content) {
  if (out_path.empty() || out_path == "-") {
    std::cout << content;
  } else {
    lgt::write_file_atomic(out_path, content);
  }
}

int selftest() {
  int failed = 0;
  for (const auto& r : lgt::run_selftest()) {
    std::printf("%s  %-40s %s\n", r.passed ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str());
    failed += r.passed ? 0 : 1;
  }
  std::printf("%d check(s) failed\n", failed);
  return failed == 0 ? 0 : kMismatch;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact simulation of ancilla-based measurements in finite-group lattice gauge theories"};
  std::string config_path;
  std::string out_path;
  std::string format = "json";
  std::uint64_t seed = 0;
  bool check_oracle = false;
  double tolerance = 0.0;
  std::string export_id;
  std::string schedule_path;
  bool parallel = false;
  bool run_selftest = false;

  app.add_option("--config", config_path, "Scenario file");
  app.add_option("--out", out_path, "Output file (default: stdout)");
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  auto* seed_opt = app.add_option("--seed", seed, "Override the scenario seed");
  app.add_flag("--check-oracle", check_oracle, "Cross-check every request against direct evaluation");
  auto* tol_opt = app.add_option("--tolerance", tolerance, "Agreement bound for cross-checks")
                      ->check(CLI::PositiveNumber);
  app.add_option("--export-schedule", export_id, "Write the gate schedule of one request and exit");
  app.add_option("--run-schedule", schedule_path,
                 "Execute a schedule file on the scenario's initial state");
  app.add_flag("--parallel", parallel, "Run independent requests concurrently");
  app.add_flag("--selftest", run_selftest, "Run the built-in invariant checks");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kError;
  }

  if (run_selftest) return selftest();
  if (config_path.empty()) {
    std::cerr << "lgtsim: --config is required (or use --selftest)\n";
    return kError;
  }

  try {
    const lgt::ScenarioConfig config = lgt::load_scenario(config_path);

    if (!export_id.empty()) {
      emit(out_path, lgt::format_schedule(lgt::export_schedule(config, export_id)));
      return 0;
    }

    if (!schedule_path.empty()) {
      const auto schedule = lgt::parse_schedule(read_file(schedule_path));
      lgt::check_locality(schedule, lgt::Lattice(schedule.lx, schedule.ly, schedule.boundary));
      const auto run = lgt::run_schedule(config, schedule);
      std::ostringstream text;
      text.precision(17);
      text << "gate_count " << run.gate_count << "\n";
      for (const auto& r : run.readouts) text << "readout " << r.real() << " " << r.imag() << "\n";
      emit(out_path, text.str());
      return 0;
    }

    lgt::RunOptions options;
    if (*seed_opt) options.seed = seed;
    if (check_oracle) options.crosscheck = true;
    if (*tol_opt) options.tolerance = tolerance;
    options.parallel = parallel;
    const auto report = lgt::run_scenario(config, options);
    emit(out_path, format == "csv" ? lgt::report_csv(report) : lgt::report_json(report));
    return report.all_passed() ? 0 : kMismatch;
  } catch (const lgt::ConfigError& e) {
    std::cerr << "lgtsim: " << config_path << ": " << e.what() << "\n";
  } catch (const lgt::DimensionError& e) {
    std::cerr << "lgtsim: " << e.what() << "\n";
  } catch (const std::exception& e) {
    std::cerr << "lgtsim: " << e.what() << "\n";
  }
  return kError;
}
