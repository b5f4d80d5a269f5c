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
 * Finite gauge groups realized by explicit multiplication tables, together
 * with the unitary irrep carried by the matter fields.
 */

#pragma once

#include <complex>
#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace lgt {

using Complex = std::complex<double>;
using Matrix = Eigen::MatrixXcd;

/// Index of a group element in the tables of a FiniteGroup.
using Element = std::size_t;

/**
 * A finite group with its designated matter representation.
 *
 * Multiplication follows the matrix order of the representation:
 * `rep(mul(g, h)) == rep(g) * rep(h)`. The identity is always element 0.
 * Instances are immutable after construction.
 */
class FiniteGroup {
 public:
  /// Cyclic group Z_N with the defining 1-dim rep D(g_k) = exp(2 pi i k / N).
  static FiniteGroup cyclic(std::size_t n);

  /// Symmetric group S3 with its real orthogonal 2-dim irrep.
  static FiniteGroup symmetric3();

  /// Builds a group from a config label: "Z2" | "Z3" | "ZN:<N>" | "S3".
  static FiniteGroup from_label(std::string_view label);

  [[nodiscard]] std::size_t order() const noexcept { return inv_.size(); }
  [[nodiscard]] Element identity() const noexcept { return 0; }
  [[nodiscard]] std::size_t rep_dim() const noexcept { return rep_dim_; }
  [[nodiscard]] bool is_abelian() const noexcept;

  /// Display name: "Z2", "ZN(5)", "S3".
  [[nodiscard]] const std::string& name() const noexcept { return name_; }
  /// Config label accepted by from_label.
  [[nodiscard]] const std::string& label() const noexcept { return label_; }

  [[nodiscard]] Element mul(Element g, Element h) const;
  [[nodiscard]] Element inv(Element g) const;
  [[nodiscard]] const Matrix& rep(Element g) const;
  [[nodiscard]] Complex rep_det(Element g) const;
  [[nodiscard]] Complex rep_trace(Element g) const;

  /// Element from a config token: "e" or a decimal index.
  [[nodiscard]] Element parse_element(std::string_view token) const;

  /// Exhaustive consistency report over all elements, pairs and triples.
  struct AxiomReport {
    bool associative = true;
    bool identity_ok = true;
    bool inverse_ok = true;
    bool inverse_antihomomorphic = true;
    double homomorphism_residual = 0.0;
    double unitarity_residual = 0.0;
    double inverse_adjoint_residual = 0.0;
    double determinant_residual = 0.0;

    [[nodiscard]] bool ok(double tol = 1e-12) const noexcept {
      return associative && identity_ok && inverse_ok && inverse_antihomomorphic &&
             homomorphism_residual < tol && unitarity_residual < tol &&
             inverse_adjoint_residual < tol && determinant_residual < tol;
    }
  };
  [[nodiscard]] AxiomReport verify() const;

 private:
  FiniteGroup(std::string name, std::string label, std::vector<std::vector<Element>> mul,
              std::vector<Matrix> rep);

  void check_element(Element g) const;

  std::string name_;
  std::string label_;
  std::vector<std::vector<Element>> mul_;
  std::vector<Element> inv_;
  std::vector<Matrix> rep_;
  std::vector<Complex> det_;
  std::vector<Complex> trace_;
  std::size_t rep_dim_ = 1;
};

}  // namespace lgt
