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
#include "test_support.hpp"

using namespace lgt;

TEST_CASE("identity transformation is trivial") {
  const auto layout = build_layout(FiniteGroup::symmetric3(), Lattice(2, 1), false);
  const auto psi = random_state(layout, 1);
  CHECK(distance(gauss_transformed(psi, {0, 0}, 0), psi) == 0.0);
}

TEST_CASE("gauge transformations compose in reverse order at each vertex") {
  const auto g = FiniteGroup::symmetric3();
  const auto layout = build_layout(g, Lattice(2, 2), false);
  const auto psi = random_state(layout, 2);
  for (Vertex x : {Vertex{0, 0}, Vertex{1, 0}, Vertex{1, 1}}) {
    for (Element a : {Element{1}, Element{3}}) {
      for (Element b : {Element{2}, Element{4}}) {
        // |h> -> |g^-1 h> composes as Theta_a Theta_b = Theta_ba.
        const auto lhs = gauss_transformed(gauss_transformed(psi, x, b), x, a);
        const auto rhs = gauss_transformed(psi, x, g.mul(b, a));
        CHECK(distance(lhs, rhs) < 1e-12);
      }
    }
  }
}

TEST_CASE("staggered vacuum obeys the Gauss law") {
  for (const char* label : {"Z2", "Z3", "S3"}) {
    CAPTURE(label);
    const Lattice lat(2, 2);
    const auto group = FiniteGroup::from_label(label);
    const auto layout = build_layout(group, lat, false);
    const auto vac = prepare_state(layout, ProductStateSpec::staggered_vacuum(lat, group.rep_dim()));
    CHECK(gauss_residual(vac) < 1e-12);
    CHECK(distance(gauge_project(vac), vac) < 1e-12);
  }
}

TEST_CASE("empty odd vertex picks up the determinant factor") {
  const Lattice lat(2, 1);
  const auto layout = build_layout(FiniteGroup::cyclic(2), lat, false);
  ProductStateSpec spec;
  spec.default_link = LinkPreparation::of(0);
  const auto psi = prepare_state(layout, spec);
  const auto moved = gauss_transformed(psi, {1, 0}, 1);
  // Link (0,0;1) enters (1,0): |e> -> |e a> = |a>, and det D(a) = -1 on the odd vertex.
  spec.default_link = LinkPreparation::of(1);
  const auto translated = prepare_state(layout, spec);
  CHECK(distance(moved, translated) > 1.0);
  StateVector flipped = translated;
  flipped.scale(-1.0);
  CHECK(distance(moved, flipped) < 1e-15);
}

TEST_CASE("gauge projection") {
  const auto layout = build_layout(FiniteGroup::cyclic(3), Lattice(2, 2), false);
  const auto p = gauge_project(random_state(layout, 3));
  CHECK(gauss_residual(p) < 1e-12);
  CHECK(distance(gauge_project(p), p) < 1e-12);
  CHECK(std::abs(p.norm() - 1.0) < 1e-14);

  // With one odd vertex and no fermions the global Z2 charge is odd, so no
  // invariant component survives.
  const auto z2 = build_layout(FiniteGroup::cyclic(2), Lattice(2, 1), false);
  CHECK_THROWS_AS((void)gauge_project(prepare_state(z2, ProductStateSpec{})), std::domain_error);
}

TEST_CASE("number expectation") {
  const Lattice lat(2, 1);
  const auto s3 = build_layout(FiniteGroup::symmetric3(), lat, false);
  const auto vac = prepare_state(s3, ProductStateSpec::staggered_vacuum(lat, 2));
  CHECK(number_expectation(vac, {0, 0}) == 0.0);
  CHECK(std::abs(number_expectation(vac, {1, 0}) - 2.0) < 1e-14);
  const auto z2 = build_layout(FiniteGroup::cyclic(2), Lattice(3, 3), false);
  const auto zvac = prepare_state(z2, ProductStateSpec::staggered_vacuum(Lattice(3, 3), 1));
  CHECK(std::abs(number_expectation(zvac, {1, 0}) - 1.0) < 1e-14);
  CHECK(number_expectation(zvac, {1, 1}) == 0.0);
}

TEST_CASE("Hamiltonian terms") {
  const Lattice lat(2, 2);
  const auto layout = build_layout(FiniteGroup::cyclic(2), lat, false);
  ProductStateSpec spec;
  spec.default_link = LinkPreparation::of(0);
  const auto all_e = prepare_state(layout, spec);
  Couplings c;
  c.lambda_b = 1.0;
  CHECK(hamiltonian_expectation(all_e, c).magnetic == -2.0);
  CHECK(hamiltonian_expectation(all_e, Couplings{}).total() == 0.0);
  const auto singlet = prepare_state(layout, ProductStateSpec{});
  CHECK(std::abs(hamiltonian_expectation(singlet, c).magnetic) < 1e-15);

  // Gauge-matter term against the direct meson evaluation on every link.
  const auto psi = random_state(layout, 4);
  Couplings gm;
  gm.lambda_gm = 0.5;
  gm.lambda_gm_link[Link{{0, 0}, 2}] = -1.5;
  double expected = 0.0;
  for (std::size_t k = 0; k < lat.num_links(); ++k) {
    const Link l = lat.link_at(k);
    expected += gm.gauge_matter(l) *
                meson_expectation(psi, Path{l.site, {Step{l, +1}}}, MesonOperator::M).real();
  }
  const auto terms = hamiltonian_expectation(psi, gm);
  CHECK(std::abs(terms.gauge_matter - expected) < 1e-14);
  CHECK(terms.imaginary_residual < 1e-14);
}

TEST_CASE("nonlocal observables are gauge invariant") {
  const Lattice lat(2, 2);
  const auto layout = build_layout(FiniteGroup::cyclic(3), lat, false);
  const auto psi = random_state(layout, 5);
  const Loop loop = rectangle_loop(lat, {0, 0}, 1, 1);
  const Path path = shortest_path(lat, {0, 0}, {1, 1});
  const Complex w = wilson_expectation(psi, loop);
  const Complex m = meson_expectation(psi, path, MesonOperator::String);
  for (std::size_t v = 0; v < lat.num_vertices(); ++v) {
    const auto moved = gauss_transformed(psi, lat.vertex_at(v), 1);
    CHECK(std::abs(wilson_expectation(moved, loop) - w) < 1e-12);
    CHECK(std::abs(meson_expectation(moved, path, MesonOperator::String) - m) < 1e-12);
  }
}
