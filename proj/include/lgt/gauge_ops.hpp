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
 * Local gauge transformations, Gauss-law projection, and the local and
 * Hamiltonian observables of the lattice gauge theory.
 */

#pragma once

#include <map>

#include "lgt/hilbert.hpp"

namespace lgt {

/**
 * Applies the local gauge transformation at vertex x in place:
 * left translation |h> -> |g^-1 h> on links leaving x, right translation
 * |h> -> |h g> on links entering x, and the matter rotation that maps
 * psi^dag_m(x) -> psi^dag_n(x) D_nm(g^-1), times det D(g) on odd vertices.
 * Ancilla subsystems are untouched.
 */
void gauss_transform(StateVector& state, Vertex x, Element g);

[[nodiscard]] StateVector gauss_transformed(const StateVector& state, Vertex x, Element g);

/// Largest ||Theta_g(x) psi - psi|| over all vertices and group elements.
[[nodiscard]] double gauss_residual(const StateVector& state);

/// Group-averaging projector onto the gauge-invariant subspace, renormalized.
/// Throws std::domain_error when the projected norm falls below 1e-10.
[[nodiscard]] StateVector gauge_project(const StateVector& state);

/// Total fermion number <n(x)> at a vertex.
[[nodiscard]] double number_expectation(const StateVector& state, Vertex x);

struct Couplings {
  double lambda_b = 0.0;
  double lambda_gm = 0.0;                ///< uniform gauge-matter coupling
  std::map<Link, double> lambda_gm_link;  ///< per-link overrides

  [[nodiscard]] double gauge_matter(Link l) const {
    const auto it = lambda_gm_link.find(l);
    return it == lambda_gm_link.end() ? lambda_gm : it->second;
  }
};

struct EnergyTerms {
  double gauge_matter = 0.0;
  double magnetic = 0.0;
  /// Largest imaginary part met while summing; zero up to rounding.
  double imaginary_residual = 0.0;
  [[nodiscard]] double total() const noexcept { return gauge_matter + magnetic; }
};

/// <H_GM> + <H_B>, each term evaluated directly from the nonlocal operators.
[[nodiscard]] EnergyTerms hamiltonian_expectation(const StateVector& state, const Couplings& couplings);

}  // namespace lgt
