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

#include "lgt/protocols.hpp"

#include <chrono>
#include <cmath>
#include <numbers>

namespace lgt {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require_ancilla(const HilbertLayout& layout, const char* gate) {
  if (!layout.with_ancilla()) {
    throw std::invalid_argument(std::string(gate) + " needs a layout with ancilla");
  }
}

std::size_t chi_mask(const HilbertLayout& layout) {
  std::size_t mask = 0;
  for (std::size_t m = 0; m < layout.rep_dim(); ++m) mask |= std::size_t{1} << layout.chi_mode(m);
  return mask;
}

void require_reference(const StateVector& state, const PrepareAncilla& step) {
  const auto& layout = state.layout();
  double total = 0.0;
  double reference = 0.0;
  if (step.kind == AncillaKind::Qudit) {
    detail::for_each_digit_run(layout, layout.ancilla_qudit(step.ancilla),
                               [&](std::size_t begin, std::size_t end, std::size_t digit) {
                                 double w = 0.0;
                                 for (std::size_t i = begin; i < end; ++i) w += std::norm(state[i]);
                                 total += w;
                                 if (digit == 0) reference += w;
                               });
  } else {
    const std::size_t mask = chi_mask(layout);
    for (std::size_t i = 0; i < state.size(); ++i) {
      const double w = std::norm(state[i]);
      total += w;
      if ((i & mask) == 0) reference += w;
    }
  }
  if (total - reference > 1e-10 * total) {
    const std::string what = step.kind == AncillaKind::Qudit
                                 ? "ancilla qudit " + std::to_string(step.ancilla) + " is not in |e>"
                                 : "chi modes are occupied";
    throw std::logic_error(what + " (reference weight " + std::to_string(reference / total) +
                           "); the ancilla is already entangled");
  }
}

void check_header(const GateSchedule& schedule, const HilbertLayout& layout) {
  const auto& lat = layout.lattice();
  if (schedule.group != layout.group().label() || schedule.lx != lat.lx() ||
      schedule.ly != lat.ly() || schedule.boundary != lat.boundary()) {
    throw std::invalid_argument("schedule for " + schedule.group + " " + std::to_string(schedule.lx) +
                                "x" + std::to_string(schedule.ly) + " " +
                                to_string(schedule.boundary) + " does not match state layout '" +
                                layout.descriptor() + "'");
  }
}

LayoutPtr physical_layout(const HilbertLayout& layout) {
  return build_layout(layout.group(), layout.lattice(), false);
}

struct Working {
  StateVector physical;
  StateVector full;
};

/// Physical state for the oracle and the ancilla-carrying state the protocol runs on.
Working working_states(const StateVector& state, std::size_t ancilla_qudits) {
  const auto& layout = state.layout();
  if (!layout.with_ancilla()) {
    auto full = embed(state, build_layout(layout.group(), layout.lattice(), true, ancilla_qudits));
    return {state, std::move(full)};
  }
  if (layout.num_ancilla_qudits() < ancilla_qudits) {
    throw std::invalid_argument("state carries " + std::to_string(layout.num_ancilla_qudits()) +
                                " ancilla qudits, " + std::to_string(ancilla_qudits) + " needed");
  }
  auto projected = project_ancilla_reference(state, physical_layout(layout));
  return {std::move(projected.first), state};
}

GateSchedule header(const FiniteGroup& group, const Lattice& lattice, std::string request) {
  GateSchedule s;
  s.group = group.label();
  s.lx = lattice.lx();
  s.ly = lattice.ly();
  s.boundary = lattice.boundary();
  s.request = std::move(request);
  return s;
}

ExpectationResult finish(Complex value, const std::optional<Complex>& oracle, std::size_t gates,
                         Clock::time_point t0, double norm) {
  ExpectationResult r;
  r.value = value;
  r.oracle = oracle;
  r.abs_diff = oracle ? std::abs(value - *oracle) : 0.0;
  r.gate_count = gates;
  r.wall_seconds = seconds_since(t0);
  r.norm = norm;
  return r;
}

ExcitationResult finish_excitation(StateVector full, const StateVector& physical_input,
                                   const std::optional<StateVector>& expected, std::size_t gates,
                                   Clock::time_point t0) {
  auto [projected, overlap] = project_ancilla_reference(full, physical_input.layout_ptr());
  std::optional<double> residual;
  if (expected) residual = distance(full, embed(*expected, full.layout_ptr()));
  const double norm = projected.norm();
  // A vanishing excited state has no ancilla to speak of.
  if (full.norm() == 0.0) overlap = 1.0;
  return ExcitationResult{std::move(full), std::move(projected), norm, overlap,
                          residual,        gates,                seconds_since(t0)};
}

}  // namespace

ProtocolMode parse_protocol_mode(std::string_view text) {
  if (text == "measure") return ProtocolMode::Measure;
  if (text == "excite") return ProtocolMode::Excite;
  throw std::invalid_argument("mode must be 'measure' or 'excite', got '" + std::string(text) + "'");
}

std::string_view to_string(ProtocolMode mode) {
  return mode == ProtocolMode::Measure ? "measure" : "excite";
}

// ---------------------------------------------------------------------------
// Gates
// ---------------------------------------------------------------------------

void gate_entangle_w(StateVector& state, Link link, int orientation, bool adjoint,
                     std::size_t ancilla) {
  const auto& layout = state.layout();
  require_ancilla(layout, "entangling gate");
  if (orientation != 1 && orientation != -1) throw std::invalid_argument("orientation must be +-1");
  const auto& group = layout.group();
  const std::size_t order = group.order();
  const bool inverse = (orientation < 0) != adjoint;
  std::vector<std::size_t> perm(order * order);
  for (Element g = 0; g < order; ++g) {
    const Element left = inverse ? group.inv(g) : g;
    for (Element h = 0; h < order; ++h) perm[g * order + h] = g * order + group.mul(left, h);
  }
  const std::size_t qudits[2] = {layout.link_qudit(link), layout.ancilla_qudit(ancilla)};
  apply_qudit_permutation(state, perm, qudits);
}

void gate_swap(StateVector& state, Vertex v) {
  const auto& layout = state.layout();
  require_ancilla(layout, "fermion swap");
  TwoModeGate swap;
  swap.single << 0.0, 1.0, 1.0, 0.0;
  swap.both = -1.0;
  for (std::size_t m = 0; m < layout.rep_dim(); ++m) {
    apply_two_mode_gate(state, layout.matter_mode(v, m), layout.chi_mode(m), swap);
  }
}

void gate_degauge(StateVector& state, Link link, int orientation, bool adjoint) {
  const auto& layout = state.layout();
  require_ancilla(layout, "de-gauging gate");
  if (orientation != 1 && orientation != -1) throw std::invalid_argument("orientation must be +-1");
  const auto& group = layout.group();
  std::vector<Matrix> per_element;
  per_element.reserve(group.order());
  for (Element g = 0; g < group.order(); ++g) {
    Matrix v = orientation > 0 ? group.rep(g) : Matrix(group.rep(g).adjoint());
    if (adjoint) v = v.adjoint().eval();
    per_element.push_back(std::move(v));
  }
  apply_controlled_fock_lift(state, layout.link_qudit(link), layout.chi_mode(0), per_element);
}

void gate_rotate(StateVector& state, Vertex v, RotationAxis axis) {
  const auto& layout = state.layout();
  require_ancilla(layout, "rotation");
  const double c = std::numbers::sqrt2 / 2.0;
  const Complex i{0.0, 1.0};
  TwoModeGate rot;
  if (axis == RotationAxis::Y) {
    rot.single << c, c, -c, c;
  } else {
    rot.single << c, -i * c, -i * c, c;
  }
  for (std::size_t m = 0; m < layout.rep_dim(); ++m) {
    apply_two_mode_gate(state, layout.matter_mode(v, m), layout.chi_mode(m), rot);
  }
}

void apply_local_excite(StateVector& state, const LocalExcite& step) {
  const auto& layout = state.layout();
  require_ancilla(layout, "local excitation");
  if (step.kind == LocalExcite::Kind::TraceU) {
    std::vector<Complex> trace(layout.qudit_dim());
    for (Element h = 0; h < trace.size(); ++h) trace[h] = layout.group().rep_trace(h);
    apply_qudit_diagonal(state, layout.ancilla_qudit(step.ancilla), trace);
    return;
  }
  const Complex i{0.0, 1.0};
  Complex forward{1.0, 0.0};
  Complex backward{1.0, 0.0};
  if (step.op == MesonOperator::MPrime) {
    forward = -i;
    backward = i;
  } else if (step.op == MesonOperator::String) {
    backward = 0.0;
  }
  std::vector<BilinearTerm> terms;
  for (std::size_t m = 0; m < layout.rep_dim(); ++m) {
    const std::size_t psi = layout.matter_mode(step.vertex, m);
    const std::size_t chi = layout.chi_mode(m);
    terms.push_back({forward, psi, chi});
    if (backward != 0.0) terms.push_back({backward, chi, psi});
  }
  state = apply_fermionic_bilinear(state, terms);
}

Complex readout_trace(const StateVector& state, std::size_t ancilla) {
  const auto& layout = state.layout();
  require_ancilla(layout, "trace readout");
  const std::size_t q = layout.ancilla_qudit(ancilla);
  std::vector<double> weight(layout.qudit_dim(), 0.0);
  detail::for_each_digit_run(layout, q, [&](std::size_t begin, std::size_t end, std::size_t digit) {
    for (std::size_t i = begin; i < end; ++i) weight[digit] += std::norm(state[i]);
  });
  Complex sum{};
  for (Element h = 0; h < weight.size(); ++h) sum += weight[h] * layout.group().rep_trace(h);
  return sum;
}

double readout_number_difference(const StateVector& state, Vertex v) {
  const auto& layout = state.layout();
  require_ancilla(layout, "number readout");
  double sum = 0.0;
  for (std::size_t m = 0; m < layout.rep_dim(); ++m) {
    sum += mode_occupation(state, layout.matter_mode(v, m)) -
           mode_occupation(state, layout.chi_mode(m));
  }
  return sum;
}

// ---------------------------------------------------------------------------
// Compilation
// ---------------------------------------------------------------------------

GateSchedule compile_wilson(const FiniteGroup& group, const Lattice& lattice, const Loop& loop,
                            ProtocolMode mode, std::size_t ancilla, GateOrder order) {
  (void)lattice.make_loop(loop.path);
  GateSchedule s = header(group, lattice,
                          "wilson " + format_steps(loop.path) + " " + std::string(to_string(mode)));
  const auto& steps = loop.path.steps;
  const std::size_t n = steps.size();
  auto entangle = [&](std::size_t k, bool adjoint) {
    s.steps.push_back(MoveAncilla{steps[k].link, ancilla});
    s.steps.push_back(EntangleW{steps[k].link, steps[k].orientation, adjoint, ancilla});
  };

  s.steps.push_back(PrepareAncilla{AncillaKind::Qudit, ancilla});
  for (std::size_t j = 0; j < n; ++j) entangle(order == GateOrder::Reverse ? n - 1 - j : j, false);
  if (mode == ProtocolMode::Measure) {
    s.steps.push_back(ReadoutTrU{ancilla});
    return s;
  }
  LocalExcite excite;
  excite.kind = LocalExcite::Kind::TraceU;
  excite.ancilla = ancilla;
  s.steps.push_back(excite);
  for (std::size_t j = 0; j < n; ++j) entangle(order == GateOrder::Reverse ? j : n - 1 - j, true);
  return s;
}

GateSchedule compile_meson(const FiniteGroup& group, const Lattice& lattice, const Path& path,
                           MesonOperator which, ProtocolMode mode) {
  lattice.validate_simple_path(path);
  if (mode == ProtocolMode::Measure && which == MesonOperator::String) {
    throw std::invalid_argument(
        "the string operator is not Hermitian; measure M and M' separately");
  }
  const Vertex x = path.start;
  const Vertex y = lattice.path_end(path);
  GateSchedule s = header(group, lattice,
                          "meson " + format_steps(path) + " op=" + std::string(to_string(which)) +
                              " " + std::string(to_string(mode)));
  const auto& steps = path.steps;

  s.steps.push_back(PrepareAncilla{AncillaKind::Fermion, 0});
  s.steps.push_back(MoveAncilla{y, 0});
  s.steps.push_back(SwapFermions{y, false});
  for (std::size_t k = steps.size(); k-- > 0;) {
    s.steps.push_back(MoveAncilla{steps[k].link, 0});
    s.steps.push_back(DeGauge{steps[k].link, steps[k].orientation, false});
  }
  s.steps.push_back(MoveAncilla{x, 0});
  if (mode == ProtocolMode::Measure) {
    s.steps.push_back(Rotate{x, which == MesonOperator::M ? RotationAxis::Y : RotationAxis::X});
    s.steps.push_back(ReadoutNumberDiff{x});
    return s;
  }
  LocalExcite excite;
  excite.kind = LocalExcite::Kind::Hopping;
  excite.vertex = x;
  excite.op = which;
  s.steps.push_back(excite);
  for (std::size_t k = 0; k < steps.size(); ++k) {
    s.steps.push_back(MoveAncilla{steps[k].link, 0});
    s.steps.push_back(DeGauge{steps[k].link, steps[k].orientation, true});
  }
  s.steps.push_back(MoveAncilla{y, 0});
  s.steps.push_back(SwapFermions{y, true});
  return s;
}

Execution execute(const GateSchedule& schedule, StateVector& state) {
  check_header(schedule, state.layout());
  require_ancilla(state.layout(), "schedule execution");
  Execution out;
  for (const auto& step : schedule.steps) {
    std::visit(Overloaded{
                   [&](const PrepareAncilla& s) { require_reference(state, s); },
                   [&](const MoveAncilla&) {},
                   [&](const EntangleW& s) {
                     gate_entangle_w(state, s.link, s.orientation, s.adjoint, s.ancilla);
                     ++out.gate_count;
                   },
                   [&](const SwapFermions& s) {
                     gate_swap(state, s.vertex);  // Hermitian, so the adjoint is the same gate
                     ++out.gate_count;
                   },
                   [&](const DeGauge& s) {
                     gate_degauge(state, s.link, s.orientation, s.adjoint);
                     ++out.gate_count;
                   },
                   [&](const Rotate& s) {
                     gate_rotate(state, s.vertex, s.axis);
                     ++out.gate_count;
                   },
                   [&](const ReadoutTrU& s) { out.readouts.push_back(readout_trace(state, s.ancilla)); },
                   [&](const ReadoutNumberDiff& s) {
                     out.readouts.emplace_back(readout_number_difference(state, s.vertex), 0.0);
                   },
                   [&](const LocalExcite& s) {
                     apply_local_excite(state, s);
                     ++out.gate_count;
                   },
               },
               step);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Runners
// ---------------------------------------------------------------------------

ExpectationResult run_wilson(const StateVector& state, const Loop& loop, bool crosscheck) {
  const auto t0 = Clock::now();
  auto work = working_states(state, 1);
  const auto& layout = work.full.layout();
  const auto schedule = compile_wilson(layout.group(), layout.lattice(), loop, ProtocolMode::Measure);
  const auto run = execute(schedule, work.full);
  std::optional<Complex> oracle;
  if (crosscheck) oracle = wilson_expectation(work.physical, loop);
  return finish(run.readouts.at(0), oracle, run.gate_count, t0, work.full.norm());
}

ExcitationResult excite_wilson(const StateVector& state, const Loop& loop, bool crosscheck) {
  const auto t0 = Clock::now();
  auto work = working_states(state, 1);
  const auto& layout = work.full.layout();
  const auto schedule = compile_wilson(layout.group(), layout.lattice(), loop, ProtocolMode::Excite);
  const auto run = execute(schedule, work.full);
  std::optional<StateVector> expected;
  if (crosscheck) expected = wilson_apply(work.physical, loop);
  return finish_excitation(std::move(work.full), work.physical, expected, run.gate_count, t0);
}

ExpectationResult run_meson(const StateVector& state, const Path& path, MesonOperator which,
                            bool crosscheck) {
  const auto t0 = Clock::now();
  auto work = working_states(state, 0);
  const LayoutPtr layout_ptr = work.full.layout_ptr();  // outlives the moved working state
  const auto& layout = *layout_ptr;
  // The last measurement may consume the working state.
  auto measure = [&](MesonOperator op, std::size_t& gates, double& norm, bool last) {
    StateVector copy = last ? std::move(work.full) : work.full;
    const auto run =
        execute(compile_meson(layout.group(), layout.lattice(), path, op, ProtocolMode::Measure), copy);
    gates += run.gate_count;
    norm = copy.norm();
    return run.readouts.at(0).real();
  };
  std::size_t gates = 0;
  double norm = 1.0;
  Complex value;
  if (which == MesonOperator::String) {
    const double m = measure(MesonOperator::M, gates, norm, false);
    const double mp = measure(MesonOperator::MPrime, gates, norm, true);
    value = Complex{0.5 * m, 0.5 * mp};
  } else {
    value = measure(which, gates, norm, true);
  }
  std::optional<Complex> oracle;
  if (crosscheck) oracle = meson_expectation(work.physical, path, which);
  return finish(value, oracle, gates, t0, norm);
}

ExcitationResult excite_meson(const StateVector& state, const Path& path, MesonOperator which,
                              bool crosscheck) {
  const auto t0 = Clock::now();
  auto work = working_states(state, 0);
  const auto& layout = work.full.layout();
  const auto schedule =
      compile_meson(layout.group(), layout.lattice(), path, which, ProtocolMode::Excite);
  const auto run = execute(schedule, work.full);
  std::optional<StateVector> expected;
  if (crosscheck) expected = meson_apply(work.physical, path, which);
  return finish_excitation(std::move(work.full), work.physical, expected, run.gate_count, t0);
}

double stator_residual(const StateVector& state, const Loop& loop, GateOrder order) {
  auto work = working_states(state, 1);
  const auto& layout = work.full.layout();
  const auto& group = layout.group();
  const auto schedule =
      compile_wilson(group, layout.lattice(), loop, ProtocolMode::Measure, 0, order);
  auto entangle = [&](StateVector& s) {
    for (const auto& step : schedule.steps) {
      if (const auto* e = std::get_if<EntangleW>(&step)) {
        gate_entangle_w(s, e->link, e->orientation, e->adjoint, e->ancilla);
      }
    }
  };

  StateVector stated = work.full;
  require_reference(stated, PrepareAncilla{AncillaKind::Qudit, 0});
  entangle(stated);
  const std::size_t q = layout.ancilla_qudit(0);
  double worst = 0.0;
  for (std::size_t m = 0; m < group.rep_dim(); ++m) {
    for (std::size_t n = 0; n < group.rep_dim(); ++n) {
      std::vector<Complex> entry(group.order());
      for (Element h = 0; h < group.order(); ++h) {
        entry[h] = group.rep(h)(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
      }
      StateVector lhs = stated;
      apply_qudit_diagonal(lhs, q, entry);
      StateVector rhs = embed(wilson_matrix_apply(work.physical, loop, m, n), work.full.layout_ptr());
      entangle(rhs);
      worst = std::max(worst, distance(lhs, rhs));
    }
  }
  return worst;
}

std::vector<ExpectationResult> run_wilson_parallel(const StateVector& state,
                                                   std::span<const Loop> loops, bool crosscheck) {
  if (loops.empty()) return {};
  auto work = working_states(state, loops.size());
  const auto& layout = work.full.layout();
  std::vector<ExpectationResult> results;
  std::vector<GateSchedule> schedules;
  std::vector<Clock::time_point> starts;
  for (std::size_t k = 0; k < loops.size(); ++k) {
    schedules.push_back(compile_wilson(layout.group(), layout.lattice(), loops[k],
                                       ProtocolMode::Measure, k));
  }
  // Every ancilla is entangled before any is read, so the loops really run side by side.
  std::vector<std::size_t> gates(loops.size(), 0);
  std::vector<double> elapsed(loops.size(), 0.0);
  for (std::size_t k = 0; k < loops.size(); ++k) {
    const auto t0 = Clock::now();
    GateSchedule gates_only = schedules[k];
    std::erase_if(gates_only.steps,
                  [](const ScheduleStep& s) { return std::holds_alternative<ReadoutTrU>(s); });
    gates[k] = execute(gates_only, work.full).gate_count;
    elapsed[k] = seconds_since(t0);
  }
  for (std::size_t k = 0; k < loops.size(); ++k) {
    const auto t0 = Clock::now();
    const Complex value = readout_trace(work.full, k);
    std::optional<Complex> oracle;
    if (crosscheck) oracle = wilson_expectation(work.physical, loops[k]);
    auto r = finish(value, oracle, gates[k], t0, work.full.norm());
    r.wall_seconds += elapsed[k];
    results.push_back(r);
  }
  return results;
}

void check_parallel_mesons(const Lattice& lattice, std::span<const Path> paths) {
  for (std::size_t a = 0; a < paths.size(); ++a) {
    const Vertex ea[2] = {paths[a].start, lattice.path_end(paths[a])};
    for (std::size_t b = a + 1; b < paths.size(); ++b) {
      const Vertex eb[2] = {paths[b].start, lattice.path_end(paths[b])};
      for (const Vertex& u : ea) {
        for (const Vertex& w : eb) {
          if (u == w) {
            throw std::invalid_argument("strings " + std::to_string(a) + " and " + std::to_string(b) +
                                        " share endpoint " + to_string(u) +
                                        " and do not commute; run them sequentially");
          }
        }
      }
    }
  }
}

double magnetic_energy_protocol(const StateVector& state, double lambda_b) {
  const auto& lat = state.layout().lattice();
  double energy = 0.0;
  for (const Vertex& corner : lat.plaquette_corners()) {
    const auto r = run_wilson(state, rectangle_loop(lat, corner, 1, 1), false);
    energy += -lambda_b * 2.0 * r.value.real();
  }
  return energy;
}

// ---------------------------------------------------------------------------
// Z2 sigma_x convention
// ---------------------------------------------------------------------------

namespace z2_convention {

namespace {

void require_z2(const HilbertLayout& layout) {
  if (layout.group().order() != 2) {
    throw std::invalid_argument("the sigma_x convention is defined for Z2 only, not " +
                                layout.group().name());
  }
}

Matrix hadamard() {
  const double c = std::numbers::sqrt2 / 2.0;
  Matrix h(2, 2);
  h << c, c, c, -c;
  return h;
}

Matrix pauli_x() {
  Matrix x(2, 2);
  x << 0.0, 1.0, 1.0, 0.0;
  return x;
}

}  // namespace

StateVector rotate_links(const StateVector& state) {
  require_z2(state.layout());
  StateVector out = state;
  const Matrix h = hadamard();
  for (std::size_t q = 0; q < state.layout().num_link_qudits(); ++q) {
    apply_qudit_op(out, h, std::span(&q, 1));
  }
  return out;
}

Complex wilson(const StateVector& rotated, const Loop& loop) {
  require_z2(rotated.layout());
  auto work = working_states(rotated, 1);
  StateVector& s = work.full;
  const auto& layout = s.layout();
  const std::size_t anc = layout.ancilla_qudit(0);
  apply_qudit_op(s, hadamard(), std::span(&anc, 1));

  // |+><+|_link (x) 1 + |-><-|_link (x) sigma_z, link qudit most significant.
  Matrix u = Matrix::Zero(4, 4);
  const Matrix h = hadamard();
  Matrix plus = h.col(0) * h.col(0).adjoint();
  Matrix minus = h.col(1) * h.col(1).adjoint();
  Matrix z = Matrix::Identity(2, 2);
  z(1, 1) = -1.0;
  for (Eigen::Index a = 0; a < 2; ++a) {
    for (Eigen::Index b = 0; b < 2; ++b) {
      for (Eigen::Index c = 0; c < 2; ++c) {
        u(2 * a + c, 2 * b + c) += plus(a, b) + minus(a, b) * z(c, c);
      }
    }
  }
  for (const Step& step : loop.path.steps) {
    const std::size_t qudits[2] = {layout.link_qudit(step.link), anc};
    apply_qudit_op(s, u, qudits);
  }
  StateVector flipped = s;
  apply_qudit_op(flipped, pauli_x(), std::span(&anc, 1));
  return inner(s, flipped);
}

double meson(const StateVector& rotated, const Path& path, MesonOperator which) {
  require_z2(rotated.layout());
  if (which == MesonOperator::String) {
    throw std::invalid_argument("measure M and M' separately");
  }
  rotated.layout().lattice().validate_simple_path(path);
  auto work = working_states(rotated, 0);
  StateVector& s = work.full;
  const auto& layout = s.layout();
  const Vertex x = path.start;
  const Vertex y = layout.lattice().path_end(path);

  gate_swap(s, y);
  // exp(i pi n_chi (1 - sigma_x) / 2): sigma_x on the link when chi is occupied.
  const std::size_t chi = std::size_t{1} << layout.chi_mode(0);
  for (const Step& step : path.steps) {
    const std::size_t stride = layout.qudit_stride(layout.link_qudit(step.link));
    for (std::size_t i = 0; i < s.size(); ++i) {
      if ((i & chi) != 0 && (i / stride) % 2 == 0) std::swap(s[i], s[i + stride]);
    }
  }
  gate_rotate(s, x, which == MesonOperator::M ? RotationAxis::Y : RotationAxis::X);
  return readout_number_difference(s, x);
}

}  // namespace z2_convention

}  // namespace lgt
