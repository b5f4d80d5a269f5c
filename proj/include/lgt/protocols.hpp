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
 * Ancilla protocols for Wilson loops and mesonic strings: the local gates,
 * the schedule compilers, an executor, and runners that compare the protocol
 * result against the direct evaluation.
 *
 * Wilson loops use one ancilla qudit per loop. Its gates are applied from
 * the last loop step back to the first, each left-multiplying the ancilla by
 * the link element (inverse for -1 steps), so the ancilla ends in
 * |g_1 g_2 ... g_L> and Tr D(ancilla) reproduces the loop trace.
 *
 * Mesons use the chi multiplet. The fermion at the path's end is swapped
 * onto chi, then each link from the end back to the start rotates chi by its
 * representation matrix, which leaves psi^dag(x) chi as the local stand-in
 * for the whole string. A final per-component rotation turns the Hermitian
 * parts into number differences.
 */

#pragma once

#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "lgt/schedule.hpp"

namespace lgt {

enum class ProtocolMode { Measure, Excite };
ProtocolMode parse_protocol_mode(std::string_view text);
std::string_view to_string(ProtocolMode mode);

/// Gate order for Wilson schedules. Forward is wrong for non-Abelian groups
/// and exists only as a negative control.
enum class GateOrder { Reverse, Forward };

// ---------------------------------------------------------------------------
// Gates. All act in place and require a layout with ancilla.
// ---------------------------------------------------------------------------

/// Link |g>, ancilla |h> -> ancilla |g h> (+1) or |g^-1 h> (-1); `adjoint` inverts.
void gate_entangle_w(StateVector& state, Link link, int orientation, bool adjoint = false,
                     std::size_t ancilla = 0);

/// Exchanges psi_m(v) and chi_m for every component, with -1 on double occupancy.
void gate_swap(StateVector& state, Vertex v);

/// sum_g |g><g|_link (x) lift(V_g) on chi, V_g = D(g) for +1 and D(g)^dag for -1.
void gate_degauge(StateVector& state, Link link, int orientation, bool adjoint = false);

/// Per component: exp(i pi S_y / 2) (axis Y) or exp(-i pi S_x / 2) (axis X) on
/// (psi_m(v), chi_m), with S_+ = psi^dag chi.
void gate_rotate(StateVector& state, Vertex v, RotationAxis axis);

void apply_local_excite(StateVector& state, const LocalExcite& step);

/// <Tr D(ancilla)>.
[[nodiscard]] Complex readout_trace(const StateVector& state, std::size_t ancilla = 0);
/// sum_m <n_psi_m(v) - n_chi_m>.
[[nodiscard]] double readout_number_difference(const StateVector& state, Vertex v);

// ---------------------------------------------------------------------------
// Compilation and execution
// ---------------------------------------------------------------------------

[[nodiscard]] GateSchedule compile_wilson(const FiniteGroup& group, const Lattice& lattice,
                                          const Loop& loop, ProtocolMode mode,
                                          std::size_t ancilla = 0,
                                          GateOrder order = GateOrder::Reverse);

/// Measure mode accepts M and MPrime; excite mode also accepts String.
[[nodiscard]] GateSchedule compile_meson(const FiniteGroup& group, const Lattice& lattice,
                                         const Path& path, MesonOperator which, ProtocolMode mode);

struct Execution {
  std::vector<Complex> readouts;
  std::size_t gate_count = 0;
};

/**
 * Runs a schedule on `state`, whose layout must carry the ancilla and match
 * the schedule header. PREPARE steps verify that the ancilla is in its
 * reference state and throw std::logic_error otherwise.
 */
Execution execute(const GateSchedule& schedule, StateVector& state);

// ---------------------------------------------------------------------------
// Runners
// ---------------------------------------------------------------------------

struct ExpectationResult {
  Complex value;
  std::optional<Complex> oracle;
  double abs_diff = 0.0;
  std::size_t gate_count = 0;
  double wall_seconds = 0.0;
  double norm = 1.0;  ///< norm of the final protocol state
};

struct ExcitationResult {
  StateVector state;     ///< final state including ancilla
  StateVector physical;  ///< its ancilla-reference component
  double norm = 0.0;     ///< norm of `physical`
  double ancilla_overlap = 0.0;
  std::optional<double> residual;  ///< distance to the directly applied operator
  std::size_t gate_count = 0;
  double wall_seconds = 0.0;
};

/// Accepts states with or without ancilla; physical states are embedded first.
[[nodiscard]] ExpectationResult run_wilson(const StateVector& state, const Loop& loop,
                                           bool crosscheck);
[[nodiscard]] ExcitationResult excite_wilson(const StateVector& state, const Loop& loop,
                                             bool crosscheck);

/// String returns (<M> + i<M'>)/2 from two measurement runs.
[[nodiscard]] ExpectationResult run_meson(const StateVector& state, const Path& path,
                                          MesonOperator which, bool crosscheck);
[[nodiscard]] ExcitationResult excite_meson(const StateVector& state, const Path& path,
                                            MesonOperator which, bool crosscheck);

/**
 * max_mn || U~_mn S|psi> - S W_mn|psi> || with S the compiled entangling
 * sequence acting on |psi> (x) |e~>, W_mn based at the loop's start vertex.
 */
[[nodiscard]] double stator_residual(const StateVector& state, const Loop& loop,
                                     GateOrder order = GateOrder::Reverse);

/// All loops at once, loop k on ancilla qudit k.
[[nodiscard]] std::vector<ExpectationResult> run_wilson_parallel(const StateVector& state,
                                                                 std::span<const Loop> loops,
                                                                 bool crosscheck);

/// Throws std::invalid_argument if two strings share an endpoint.
void check_parallel_mesons(const Lattice& lattice, std::span<const Path> paths);

/// -lambda_b * sum over plaquettes of 2 Re <Tr W>, each loop measured by the protocol.
[[nodiscard]] double magnetic_energy_protocol(const StateVector& state, double lambda_b);

/**
 * Z2 in the sigma_x link convention: link basis rotated by a Hadamard, the
 * Wilson ancilla prepared in |+>, controlled sigma_z entanglers and a sigma_x
 * readout; mesons de-gauged by the chi-controlled link sigma_x.
 */
namespace z2_convention {

/// Hadamard on every link qudit.
[[nodiscard]] StateVector rotate_links(const StateVector& state);
/// <Tr W> evaluated on a state given in the rotated convention.
[[nodiscard]] Complex wilson(const StateVector& rotated, const Loop& loop);
/// <M> or <M'> evaluated on a state given in the rotated convention.
[[nodiscard]] double meson(const StateVector& rotated, const Path& path, MesonOperator which);

}  // namespace z2_convention

}  // namespace lgt
