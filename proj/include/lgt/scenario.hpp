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

/**
 * @file
 * Scenario files and the runner behind the lgtsim tool.
 *
 * A scenario is a flat `key = value` file. Keys before the first section
 * describe the system; each `[request <id>]` section describes one
 * measurement or excitation, run in file order:
 *
 *     group = S3
 *     lattice = 2x2
 *     boundary = open
 *     state = random_gauge_invariant
 *     seed = 11
 *     crosscheck = true
 *
 *     [request plaquette]
 *     kind = wilson
 *     loop = rect:(0,0,1,1)
 *
 * See README.md for the full key list.
 */

#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "lgt/gauge_ops.hpp"
#include "lgt/protocols.hpp"

namespace lgt {

class ConfigError : public std::runtime_error {
 public:
  ConfigError(std::size_t line, std::size_t column, const std::string& what)
      : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) +
                           ": " + what),
        line_(line),
        column_(column) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }
  [[nodiscard]] std::size_t column() const noexcept { return column_; }

 private:
  std::size_t line_;
  std::size_t column_;
};

enum class StateKind { Product, StaggeredVacuum, RandomGaugeInvariant, Random };

enum class RequestKind { Wilson, Meson, Hamiltonian };

struct RequestConfig {
  std::string id;
  RequestKind kind = RequestKind::Wilson;
  std::string spec;  ///< loop or path spec; empty for hamiltonian
  ProtocolMode mode = ProtocolMode::Measure;
  MesonOperator which = MesonOperator::M;
  /// Excite only: later requests see the normalized excited state.
  bool update_state = false;
  std::size_t line = 0;
};

struct ScenarioConfig {
  std::string group = "Z2";
  int lx = 2;
  int ly = 2;
  Boundary boundary = Boundary::Open;
  StateKind state = StateKind::Product;
  std::uint64_t seed = 1;
  ProductStateSpec product;  ///< raw element labels resolved at parse time
  Couplings couplings;
  bool crosscheck = false;
  double tolerance = 1e-10;
  std::vector<RequestConfig> requests;
};

ScenarioConfig parse_scenario(std::string_view text);
ScenarioConfig load_scenario(const std::string& path);

struct RunOptions {
  std::optional<std::uint64_t> seed;
  std::optional<bool> crosscheck;
  std::optional<double> tolerance;
  bool parallel = false;
};

struct RequestRecord {
  std::string id;
  std::string kind;
  std::string spec;
  std::string mode;
  std::string which;
  Complex value;
  std::optional<Complex> oracle;
  double abs_diff = 0.0;
  double norm = 1.0;
  std::optional<double> ancilla_overlap;
  std::size_t gate_count = 0;
  double wall_seconds = 0.0;
  bool passed = true;
};

struct ScenarioReport {
  ScenarioConfig config;  ///< effective config after command-line overrides
  std::vector<RequestRecord> records;
  [[nodiscard]] bool all_passed() const;
};

/// The initial state a scenario describes, on the physical layout.
StateVector prepare_initial_state(const ScenarioConfig& config);

/// Validates every request and the dimension guard, then runs all requests.
ScenarioReport run_scenario(const ScenarioConfig& config, const RunOptions& options = {});

std::string report_json(const ScenarioReport& report);
std::string report_csv(const ScenarioReport& report);

/// Compiled schedule for one request; hamiltonian and measure-mode string requests are rejected.
GateSchedule export_schedule(const ScenarioConfig& config, const std::string& request_id);

/// Executes a schedule on the scenario's initial state (embedded with ancilla).
Execution run_schedule(const ScenarioConfig& config, const GateSchedule& schedule);

struct SelfTestResult {
  std::string name;
  bool passed = false;
  std::string detail;
};

/// Group axioms, fermionic anticommutation, stator residuals and a few
/// small protocol cross-checks.
std::vector<SelfTestResult> run_selftest();

/// Writes `content` to a sibling temporary file, then renames it over `path`.
void write_file_atomic(const std::string& path, const std::string& content);

}  // namespace lgt
