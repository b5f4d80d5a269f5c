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
 * Gate schedules: the ordered local steps an ancilla performs to measure or
 * excite a nonlocal operator, and their line-oriented text format.
 *
 * Text format, one step per line after the header:
 *
 *     # lgtstator schedule v1
 *     GROUP Z2
 *     LATTICE 2 2 open
 *     REQUEST wilson rect:(0,0,1,1) measure
 *     PREPARE qudit
 *     MOVE link=(0,0,2)
 *     ENTANGLE link=(0,0,2) orient=-1
 *     ...
 *     READOUT trU
 *
 * Optional trailing fields: `adjoint` on ENTANGLE/DEGAUGE/SWAP and
 * `ancilla=<k>` on qudit-ancilla steps when k != 0. Lines starting with '#'
 * are comments.
 */

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "lgt/lattice.hpp"
#include "lgt/oracle.hpp"

namespace lgt {

enum class AncillaKind { Qudit, Fermion };
enum class RotationAxis { Y, X };

struct PrepareAncilla {
  AncillaKind kind = AncillaKind::Qudit;
  std::size_t ancilla = 0;
  friend bool operator==(const PrepareAncilla&, const PrepareAncilla&) = default;
};

/// Bookkeeping only: the simulated ancilla has no position.
struct MoveAncilla {
  std::variant<Vertex, Link> site;
  std::size_t ancilla = 0;
  friend bool operator==(const MoveAncilla&, const MoveAncilla&) = default;
};

/// Controlled left translation of the ancilla qudit by the link's element.
struct EntangleW {
  Link link;
  int orientation = +1;
  bool adjoint = false;
  std::size_t ancilla = 0;
  friend bool operator==(const EntangleW&, const EntangleW&) = default;
};

struct SwapFermions {
  Vertex vertex;
  bool adjoint = false;
  friend bool operator==(const SwapFermions&, const SwapFermions&) = default;
};

/// Link-controlled rotation of the chi multiplet that strips one link from a string.
struct DeGauge {
  Link link;
  int orientation = +1;
  bool adjoint = false;
  friend bool operator==(const DeGauge&, const DeGauge&) = default;
};

struct Rotate {
  Vertex vertex;
  RotationAxis axis = RotationAxis::Y;
  friend bool operator==(const Rotate&, const Rotate&) = default;
};

struct ReadoutTrU {
  std::size_t ancilla = 0;
  friend bool operator==(const ReadoutTrU&, const ReadoutTrU&) = default;
};

struct ReadoutNumberDiff {
  Vertex vertex;
  friend bool operator==(const ReadoutNumberDiff&, const ReadoutNumberDiff&) = default;
};

/// Local action on the ancilla standing in for the nonlocal operator:
/// Tr U~ on the qudit, or the psi(x)/chi bilinear selected by `op`.
struct LocalExcite {
  enum class Kind { TraceU, Hopping };
  Kind kind = Kind::TraceU;
  Vertex vertex;
  MesonOperator op = MesonOperator::M;
  std::size_t ancilla = 0;
  friend bool operator==(const LocalExcite&, const LocalExcite&) = default;
};

using ScheduleStep = std::variant<PrepareAncilla, MoveAncilla, EntangleW, SwapFermions, DeGauge,
                                  Rotate, ReadoutTrU, ReadoutNumberDiff, LocalExcite>;

struct GateSchedule {
  std::string group;
  int lx = 0;
  int ly = 0;
  Boundary boundary = Boundary::Open;
  std::string request;
  std::vector<ScheduleStep> steps;

  /// Steps that act on the state (everything but prepare, move and readout).
  [[nodiscard]] std::size_t gate_count() const;
  template <class T>
  [[nodiscard]] std::size_t count() const {
    std::size_t n = 0;
    for (const auto& s : steps) n += std::holds_alternative<T>(s) ? 1 : 0;
    return n;
  }
  friend bool operator==(const GateSchedule&, const GateSchedule&) = default;
};

std::string format_step(const ScheduleStep& step);
std::string format_schedule(const GateSchedule& schedule);

class ScheduleParseError : public std::runtime_error {
 public:
  ScheduleParseError(std::size_t line, const std::string& what)
      : std::runtime_error("schedule line " + std::to_string(line) + ": " + what), line_(line) {}
  [[nodiscard]] std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

GateSchedule parse_schedule(std::string_view text);

/**
 * Structural checks: every interaction touches the ancilla and a single link
 * or a single vertex at the ancilla's current position, and consecutive
 * moves of one ancilla go between adjacent sites. Throws
 * std::invalid_argument describing the first violation.
 */
void check_locality(const GateSchedule& schedule, const Lattice& lattice);

}  // namespace lgt
