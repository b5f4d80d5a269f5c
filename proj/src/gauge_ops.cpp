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

#include "lgt/gauge_ops.hpp"

#include <cmath>

#include "lgt/oracle.hpp"

namespace lgt {

void gauss_transform(StateVector& state, Vertex x, Element g) {
  const auto& layout = state.layout();
  const auto& group = layout.group();
  const auto& lat = layout.lattice();
  if (!lat.contains(x)) throw std::out_of_range("vertex " + to_string(x) + " is off the lattice");
  if (g >= group.order()) throw std::out_of_range("group element out of range");
  if (g == group.identity()) return;

  std::vector<std::size_t> left(group.order());
  std::vector<std::size_t> right(group.order());
  for (Element h = 0; h < group.order(); ++h) {
    left[h] = group.mul(group.inv(g), h);
    right[h] = group.mul(h, g);
  }
  for (const Link& l : lat.outgoing_links(x)) {
    const std::size_t q = layout.link_qudit(l);
    apply_qudit_permutation(state, left, std::span(&q, 1));
  }
  for (const Link& l : lat.incoming_links(x)) {
    const std::size_t q = layout.link_qudit(l);
    apply_qudit_permutation(state, right, std::span(&q, 1));
  }
  apply_fock_lift(state, layout.matter_mode(x, 0), group.rep(g).adjoint());
  if (Lattice::parity(x) == 1) state.scale(group.rep_det(g));
}

StateVector gauss_transformed(const StateVector& state, Vertex x, Element g) {
  StateVector out = state;
  gauss_transform(out, x, g);
  return out;
}

double gauss_residual(const StateVector& state) {
  const auto& lat = state.layout().lattice();
  double worst = 0.0;
  for (std::size_t i = 0; i < lat.num_vertices(); ++i) {
    for (Element g = 0; g < state.layout().group().order(); ++g) {
      worst = std::max(worst, distance(gauss_transformed(state, lat.vertex_at(i), g), state));
    }
  }
  return worst;
}

StateVector gauge_project(const StateVector& state) {
  const auto& lat = state.layout().lattice();
  const std::size_t order = state.layout().group().order();
  StateVector current = state;
  StateVector sum(state.layout_ptr());
  for (std::size_t i = 0; i < lat.num_vertices(); ++i) {
    const Vertex x = lat.vertex_at(i);
    sum = current;  // identity element
    for (Element g = 1; g < order; ++g) {
      const StateVector moved = gauss_transformed(current, x, g);
      for (std::size_t k = 0; k < sum.size(); ++k) sum[k] += moved[k];
    }
    sum.scale(1.0 / static_cast<double>(order));
    std::swap(current, sum);
  }
  const double n = current.norm();
  if (n < 1e-10) {
    throw std::domain_error("state has no gauge-invariant component (projected norm " +
                            std::to_string(n) + ")");
  }
  current.scale(1.0 / n);
  return current;
}

double number_expectation(const StateVector& state, Vertex x) {
  const auto& layout = state.layout();
  double total = 0.0;
  for (std::size_t m = 0; m < layout.rep_dim(); ++m) {
    total += mode_occupation(state, layout.matter_mode(x, m));
  }
  return total;
}

EnergyTerms hamiltonian_expectation(const StateVector& state, const Couplings& couplings) {
  const auto& lat = state.layout().lattice();
  EnergyTerms terms;
  // H_GM: psi^dag(x) U(x;i) psi(x + e_i) + h.c. on every link.
  for (std::size_t k = 0; k < lat.num_links(); ++k) {
    const Link l = lat.link_at(k);
    const double lambda = couplings.gauge_matter(l);
    if (lambda == 0.0) continue;
    const Path hop{l.site, {Step{l, +1}}};
    const Complex m = meson_expectation(state, hop, MesonOperator::M);
    terms.gauge_matter += lambda * m.real();
    terms.imaginary_residual = std::max(terms.imaginary_residual, std::abs(m.imag()));
  }
  // H_B: -lambda_B (Tr U U U^dag U^dag + h.c.) per plaquette.
  if (couplings.lambda_b != 0.0) {
    for (const Vertex& corner : lat.plaquette_corners()) {
      const Complex w = wilson_expectation(state, rectangle_loop(lat, corner, 1, 1));
      terms.magnetic += -couplings.lambda_b * 2.0 * w.real();
    }
  }
  return terms;
}

}  // namespace lgt
