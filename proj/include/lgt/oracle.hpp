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
 * Brute-force ground truth for the nonlocal gauge-invariant operators.
 *
 * The string of link operators along a path is evaluated per basis state as
 * an explicit product of representation matrices, D(g) on +1 steps and
 * D(g)^dag on -1 steps, in path order. Nothing here uses the group
 * multiplication table, so the protocols (which accumulate group elements
 * through the table) are checked against an independent route.
 */

#pragma once

#include <string_view>

#include "lgt/hilbert.hpp"

namespace lgt {

/// The mesonic string and its two Hermitian combinations.
enum class MesonOperator {
  String,  ///< psi^dag_m(x) (prod U)_mn psi_n(y)
  M,       ///< String + String^dag
  MPrime,  ///< -i (String - String^dag)
};

MesonOperator parse_meson_operator(std::string_view text);
std::string_view to_string(MesonOperator op);

/// <psi| Tr W(C) |psi>.
[[nodiscard]] Complex wilson_expectation(const StateVector& state, const Loop& loop);
/// Tr W(C) |psi>.
[[nodiscard]] StateVector wilson_apply(const StateVector& state, const Loop& loop);
/// W_mn(C) |psi> with the product based at the loop's start vertex.
[[nodiscard]] StateVector wilson_matrix_apply(const StateVector& state, const Loop& loop,
                                              std::size_t m, std::size_t n);

[[nodiscard]] StateVector meson_apply(const StateVector& state, const Path& path, MesonOperator op);
/// <psi| op |psi>; M and MPrime are Hermitian so their imaginary part is rounding only.
[[nodiscard]] Complex meson_expectation(const StateVector& state, const Path& path, MesonOperator op);

/// Dense full-matrix operators built from Kronecker products; second-tier
/// oracle for small layouts.
namespace dense {

inline constexpr std::size_t kMaxDenseDimension = std::size_t{1} << 12;

[[nodiscard]] Matrix annihilation(const HilbertLayout& layout, std::size_t mode);
/// Diagonal of the link operator U_mn on qudit q.
[[nodiscard]] Eigen::VectorXcd link_element(const HilbertLayout& layout, std::size_t qudit,
                                            std::size_t m, std::size_t n);
[[nodiscard]] Matrix wilson(const HilbertLayout& layout, const Loop& loop);
[[nodiscard]] Matrix meson(const HilbertLayout& layout, const Path& path, MesonOperator op);

}  // namespace dense

}  // namespace lgt
