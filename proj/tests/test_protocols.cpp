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

#include <cmath>

#include "doctest.h"
#include "lgt/gauge_ops.hpp"
#include "lgt/oracle.hpp"
#include "lgt/protocols.hpp"
#include "test_support.hpp"

using namespace lgt;

namespace {

/// Keeps only the amplitudes whose `qudit` digit equals `g`.
StateVector pin_qudit(const StateVector& s, std::size_t qudit, Element g) {
  StateVector out = s;
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (s.layout().qudit_digit(i, qudit) != g) out[i] = 0.0;
  }
  out.normalize();
  return out;
}

Complex bilinear_expectation(const StateVector& s, Vertex v, Complex forward, Complex backward) {
  const auto& layout = s.layout();
  std::vector<BilinearTerm> terms;
  for (std::size_t m = 0; m < layout.rep_dim(); ++m) {
    terms.push_back({forward, layout.matter_mode(v, m), layout.chi_mode(m)});
    terms.push_back({backward, layout.chi_mode(m), layout.matter_mode(v, m)});
  }
  return inner(s, apply_fermionic_bilinear(s, terms));
}

}  // namespace

TEST_CASE("entangler on Z2 makes a Bell pair") {
  const Lattice lat(2, 1);
  const auto layout = build_layout(FiniteGroup::cyclic(2), lat, true);
  auto s = prepare_state(layout, ProductStateSpec{});  // link in |+>, ancilla |e>
  gate_entangle_w(s, Link{{0, 0}, 1}, +1);
  const std::size_t link = layout->link_qudit(Link{{0, 0}, 1});
  const std::size_t anc = layout->ancilla_qudit();
  double weight = 0.0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (std::norm(s[i]) == 0.0) continue;
    CHECK(layout->qudit_digit(i, link) == layout->qudit_digit(i, anc));
    CHECK(std::abs(std::abs(s[i]) - M_SQRT1_2) < 1e-15);
    weight += std::norm(s[i]);
  }
  CHECK(std::abs(weight - 1.0) < 1e-15);
  gate_entangle_w(s, Link{{0, 0}, 1}, +1, true);
  CHECK(distance(s, prepare_state(layout, ProductStateSpec{})) < 1e-15);
}

TEST_CASE("entangler multiplies the ancilla from the left") {
  const auto g = FiniteGroup::symmetric3();
  const Lattice lat(2, 1);
  const auto layout = build_layout(g, lat, true);
  const Link l{{0, 0}, 1};
  const std::size_t anc = layout->ancilla_qudit();
  for (Element a = 0; a < 6; ++a) {
    for (Element h = 0; h < 6; ++h) {
      ProductStateSpec spec;
      spec.default_link = LinkPreparation::of(a);
      auto s = prepare_state(layout, spec);
      // Move the ancilla to |h> by hand.
      StateVector shifted(layout);
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (s[i] != Complex{}) shifted[i + h * layout->qudit_stride(anc)] = s[i];
      }
      auto plus = shifted;
      gate_entangle_w(plus, l, +1);
      auto minus = shifted;
      gate_entangle_w(minus, l, -1);
      for (std::size_t i = 0; i < s.size(); ++i) {
        if (plus[i] != Complex{}) CHECK(layout->qudit_digit(i, anc) == g.mul(a, h));
        if (minus[i] != Complex{}) CHECK(layout->qudit_digit(i, anc) == g.mul(g.inv(a), h));
      }
    }
  }
}

TEST_CASE("fermion swap") {
  const Lattice lat(2, 1);
  const auto layout = build_layout(FiniteGroup::cyclic(2), lat, true);
  const std::size_t psi = layout->matter_mode({0, 0}, 0);
  const std::size_t chi = layout->chi_mode(0);
  ProductStateSpec spec;
  spec.default_link = LinkPreparation::of(0);
  spec.occupied = {{Vertex{0, 0}, 0}};
  auto one = prepare_state(layout, spec);
  gate_swap(one, {0, 0});
  CHECK(mode_occupation(one, psi) == 0.0);
  CHECK(mode_occupation(one, chi) == 1.0);
  CHECK(std::abs(one.norm() - 1.0) < 1e-15);

  StateVector filled(layout);
  filled[(std::size_t{1} << psi) | (std::size_t{1} << chi)] = 1.0;
  auto swapped = filled;
  gate_swap(swapped, {0, 0});
  auto negated = filled;
  negated.scale(-1.0);
  CHECK(distance(swapped, negated) < 1e-15);

  StateVector empty(layout);
  empty[0] = 1.0;
  auto still = empty;
  gate_swap(still, {0, 0});
  CHECK(distance(still, empty) == 0.0);

  // Applying the swap twice is the identity.
  auto r = random_state(layout, 7);
  auto twice = r;
  gate_swap(twice, {0, 0});
  gate_swap(twice, {0, 0});
  CHECK(distance(twice, r) < 1e-14);
}

TEST_CASE("Z2 de-gauge flips the sign of an occupied chi on a flipped link") {
  const Lattice lat(2, 1);
  const auto layout = build_layout(FiniteGroup::cyclic(2), lat, true);
  const Link l{{0, 0}, 1};
  for (Element a : {Element{0}, Element{1}}) {
    for (int orient : {+1, -1}) {
      StateVector s(layout);
      s[(std::size_t{1} << layout->chi_mode(0)) + a * layout->qudit_stride(layout->link_qudit(l))] = 1.0;
      auto out = s;
      gate_degauge(out, l, orient);
      auto expect = s;
      expect.scale(a == 1 ? -1.0 : 1.0);
      CHECK(distance(out, expect) < 1e-15);
    }
  }
}

TEST_CASE("S3 de-gauge agrees with the Fock lift of D(g)") {
  const auto g = FiniteGroup::symmetric3();
  const auto layout = build_layout(g, Lattice(2, 1), true);
  const Link l{{0, 0}, 1};
  const std::size_t q = layout->link_qudit(l);
  const auto base = random_state(layout, 11);
  for (Element a = 0; a < 6; ++a) {
    const auto pinned = pin_qudit(base, q, a);
    for (int orient : {+1, -1}) {
      for (bool adj : {false, true}) {
        auto got = pinned;
        gate_degauge(got, l, orient, adj);
        Matrix v = g.rep(a);
        if (orient < 0) v = v.adjoint().eval();
        if (adj) v = v.adjoint().eval();
        auto want = pinned;
        apply_fock_lift(want, layout->chi_mode(0), v);
        CHECK(distance(got, want) < 1e-13);
      }
    }
  }
}

TEST_CASE("rotation turns bilinears into number differences") {
  for (const char* label : {"Z3", "S3"}) {
    CAPTURE(label);
    const auto layout = build_layout(FiniteGroup::from_label(label), Lattice(2, 1), true);
    for (std::uint64_t seed : {1u, 2u, 3u}) {
      const auto s = random_state(layout, seed);
      const Vertex v{1, 0};
      const Complex i{0.0, 1.0};
      auto y = s;
      gate_rotate(y, v, RotationAxis::Y);
      CHECK(std::abs(readout_number_difference(y, v) - bilinear_expectation(s, v, 1.0, 1.0)) < 1e-13);
      auto x = s;
      gate_rotate(x, v, RotationAxis::X);
      CHECK(std::abs(readout_number_difference(x, v) - bilinear_expectation(s, v, -i, i)) < 1e-13);
    }
  }
}

TEST_CASE("Wilson protocol against direct evaluation") {
  for (const char* label : {"Z2", "Z3", "S3"}) {
    CAPTURE(label);
    const Lattice lat(2, 2);
    const auto layout = build_layout(FiniteGroup::from_label(label), lat, false);
    const Loop loop = rectangle_loop(lat, {0, 0}, 1, 1);
    for (std::uint64_t seed : {1u, 2u}) {
      const auto raw = random_state(layout, seed);
      for (const auto& psi : {raw, gauge_project(raw)}) {
        const auto r = run_wilson(psi, loop, true);
        REQUIRE(r.oracle);
        CHECK(r.abs_diff < 1e-10);
        CHECK(std::abs(r.value - wilson_expectation(psi, loop)) < 1e-10);
        CHECK(r.gate_count == 4);
      }
    }
  }
}

TEST_CASE("executing an exported schedule matches the runner") {
  const Lattice lat(2, 2);
  const auto g = FiniteGroup::cyclic(3);
  const auto layout = build_layout(g, lat, false);
  const auto psi = random_state(layout, 4);
  const Loop loop = rectangle_loop(lat, {0, 0}, 1, 1);
  const auto schedule = parse_schedule(format_schedule(compile_wilson(g, lat, loop, ProtocolMode::Measure)));
  auto full = embed(psi, build_layout(g, lat, true));
  const auto exec = execute(schedule, full);
  REQUIRE(exec.readouts.size() == 1);
  CHECK(std::abs(exec.readouts[0] - wilson_expectation(psi, loop)) < 1e-12);
  CHECK(exec.gate_count == 4);

  // A second PREPARE on the now entangled ancilla is refused.
  CHECK_THROWS_AS((void)execute(schedule, full), std::logic_error);
  // The header must match the state.
  auto periodic = embed(random_state(build_layout(g, Lattice(2, 2, Boundary::Periodic), false), 4),
                        build_layout(g, Lattice(2, 2, Boundary::Periodic), true));
  CHECK_THROWS_AS((void)execute(schedule, periodic), std::invalid_argument);
}

TEST_CASE("meson protocol against direct evaluation") {
  struct Case {
    const char* group;
    int lx;
    int ly;
    Vertex to;
  };
  for (const Case& c : {Case{"Z2", 3, 2, {2, 1}}, Case{"Z3", 2, 2, {1, 1}}, Case{"S3", 2, 1, {1, 0}}}) {
    CAPTURE(c.group);
    const Lattice lat(c.lx, c.ly);
    const auto layout = build_layout(FiniteGroup::from_label(c.group), lat, false);
    const auto raw = random_state(layout, 9);
    for (const auto& psi : {raw, gauge_project(raw)}) {
      for (const Path& p : {shortest_path(lat, {0, 0}, c.to), shortest_path(lat, c.to, {0, 0})}) {
        for (auto op : {MesonOperator::M, MesonOperator::MPrime, MesonOperator::String}) {
          const auto r = run_meson(psi, p, op, true);
          CHECK(r.abs_diff < 1e-10);
          CHECK(std::abs(r.value - meson_expectation(psi, p, op)) < 1e-10);
        }
      }
    }
  }
}

TEST_CASE("excitations match the directly applied operator") {
  const Lattice lat(2, 2);
  for (const char* label : {"Z2", "Z3"}) {
    CAPTURE(label);
    const auto layout = build_layout(FiniteGroup::from_label(label), lat, false);
    const auto psi = gauge_project(random_state(layout, 5));
    const auto w = excite_wilson(psi, rectangle_loop(lat, {0, 0}, 1, 1), true);
    REQUIRE(w.residual);
    CHECK(*w.residual < 1e-10);
    CHECK(w.ancilla_overlap > 1.0 - 1e-12);
    CHECK(w.gate_count == 9);
    const Path p = shortest_path(lat, {0, 0}, {1, 1});
    for (auto op : {MesonOperator::M, MesonOperator::MPrime, MesonOperator::String}) {
      const auto m = excite_meson(psi, p, op, true);
      REQUIRE(m.residual);
      CHECK(*m.residual < 1e-10);
      CHECK(distance(m.physical, meson_apply(psi, p, op)) < 1e-10);
    }
  }
  const Lattice two(2, 1);
  const auto s3 = build_layout(FiniteGroup::symmetric3(), two, false);
  const auto psi = random_state(s3, 6);
  const auto m = excite_meson(psi, shortest_path(two, {1, 0}, {0, 0}), MesonOperator::String, true);
  CHECK(*m.residual < 1e-10);
  CHECK(m.ancilla_overlap > 1.0 - 1e-12);
}

TEST_CASE("stator relation and the gate-order control") {
  const Lattice lat(2, 2);
  const Loop loop = rectangle_loop(lat, {0, 0}, 1, 1);
  const auto z3 = build_layout(FiniteGroup::cyclic(3), lat, false);
  const auto a = random_state(z3, 12);
  CHECK(stator_residual(a, loop) < 1e-12);
  // Abelian groups do not care about the order.
  CHECK(stator_residual(a, loop, GateOrder::Forward) < 1e-12);

  const auto s3 = build_layout(FiniteGroup::symmetric3(), lat, false);
  const auto b = random_state(s3, 13);
  CHECK(stator_residual(b, loop) < 1e-12);
  CHECK(stator_residual(b, loop, GateOrder::Forward) > 0.1);
}

TEST_CASE("parallel Wilson loops") {
  const Lattice lat(3, 2);
  const auto layout = build_layout(FiniteGroup::cyclic(2), lat, false);
  const auto psi = random_state(layout, 14);
  const std::vector<Loop> loops = {rectangle_loop(lat, {0, 0}, 1, 1), rectangle_loop(lat, {1, 0}, 1, 1),
                                   rectangle_loop(lat, {0, 0}, 2, 1)};
  const auto results = run_wilson_parallel(psi, loops, true);
  REQUIRE(results.size() == 3);
  for (std::size_t k = 0; k < 3; ++k) {
    CHECK(results[k].abs_diff < 1e-10);
    CHECK(std::abs(results[k].value - wilson_expectation(psi, loops[k])) < 1e-10);
  }
}

TEST_CASE("parallel mesons may not share endpoints") {
  const Lattice lat(3, 3);
  const std::vector<Path> ok = {shortest_path(lat, {0, 0}, {1, 0}), shortest_path(lat, {2, 2}, {1, 2})};
  CHECK_NOTHROW(check_parallel_mesons(lat, ok));
  const std::vector<Path> clash = {shortest_path(lat, {0, 0}, {1, 0}), shortest_path(lat, {1, 0}, {1, 1})};
  CHECK_THROWS_AS(check_parallel_mesons(lat, clash), std::invalid_argument);
}

TEST_CASE("sigma_x link convention gives the same observables") {
  const Lattice lat(2, 2);
  const auto layout = build_layout(FiniteGroup::cyclic(2), lat, false);
  const Loop loop = rectangle_loop(lat, {0, 0}, 1, 1);
  const Path p = shortest_path(lat, {0, 0}, {1, 1});
  for (std::uint64_t seed : {1u, 2u, 3u}) {
    const auto psi = random_state(layout, seed);
    const auto rotated = z2_convention::rotate_links(psi);
    CHECK(std::abs(z2_convention::wilson(rotated, loop) - wilson_expectation(psi, loop)) < 1e-12);
    for (auto op : {MesonOperator::M, MesonOperator::MPrime}) {
      CHECK(std::abs(z2_convention::meson(rotated, p, op) - meson_expectation(psi, p, op).real()) < 1e-12);
    }
  }
}

TEST_CASE("magnetic energy via the protocol") {
  const Lattice lat(2, 2);
  const auto layout = build_layout(FiniteGroup::cyclic(2), lat, false);
  ProductStateSpec spec;
  spec.default_link = LinkPreparation::of(0);
  CHECK(std::abs(magnetic_energy_protocol(prepare_state(layout, spec), 1.0) + 2.0) < 1e-14);
  const auto psi = random_state(build_layout(FiniteGroup::cyclic(3), Lattice(3, 2), false), 15);
  Couplings c;
  c.lambda_b = 0.7;
  CHECK(std::abs(magnetic_energy_protocol(psi, 0.7) - hamiltonian_expectation(psi, c).magnetic) < 1e-10);
}

TEST_CASE("mode names") {
  CHECK(parse_protocol_mode("measure") == ProtocolMode::Measure);
  CHECK(parse_protocol_mode("excite") == ProtocolMode::Excite);
  CHECK(to_string(ProtocolMode::Excite) == "excite");
  CHECK_THROWS_AS((void)parse_protocol_mode("poke"), std::invalid_argument);
}
