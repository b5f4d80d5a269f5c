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

#include "lgt/group.hpp"

#include <algorithm>
#include <array>
#include <charconv>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace lgt {

namespace {

using Perm = std::array<int, 3>;

// (p o q)(i) = p(q(i)), so that the permutation matrices multiply in the same order.
Perm compose(const Perm& p, const Perm& q) {
  return {p[q[0]], p[q[1]], p[q[2]]};
}

double max_abs(const Matrix& m) {
  return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff();
}

}  // namespace

FiniteGroup::FiniteGroup(std::string name, std::string label,
                         std::vector<std::vector<Element>> mul, std::vector<Matrix> rep)
    : name_(std::move(name)), label_(std::move(label)), mul_(std::move(mul)), rep_(std::move(rep)) {
  const std::size_t n = mul_.size();
  rep_dim_ = static_cast<std::size_t>(rep_.front().rows());
  inv_.assign(n, n);
  for (Element g = 0; g < n; ++g) {
    for (Element h = 0; h < n; ++h) {
      if (mul_[g][h] == identity()) {
        inv_[g] = h;
        break;
      }
    }
    if (inv_[g] == n) throw std::logic_error("group table without inverse for element");
  }
  det_.reserve(n);
  trace_.reserve(n);
  for (const auto& m : rep_) {
    det_.push_back(m.determinant());
    trace_.push_back(m.trace());
  }
}

FiniteGroup FiniteGroup::cyclic(std::size_t n) {
  if (n < 2) throw std::invalid_argument("ZN requires N >= 2, got " + std::to_string(n));
  std::vector<std::vector<Element>> mul(n, std::vector<Element>(n));
  std::vector<Matrix> rep;
  rep.reserve(n);
  for (Element g = 0; g < n; ++g) {
    for (Element h = 0; h < n; ++h) mul[g][h] = (g + h) % n;
    Matrix m(1, 1);
    if (g == 0) {
      m(0, 0) = 1.0;
    } else if (2 * g == n) {
      m(0, 0) = -1.0;
    } else {
      m(0, 0) = std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(g) /
                                    static_cast<double>(n));
    }
    rep.push_back(std::move(m));
  }
  std::string label = n == 2 ? "Z2" : n == 3 ? "Z3" : "ZN:" + std::to_string(n);
  std::string name = n <= 3 ? label : "ZN(" + std::to_string(n) + ")";
  return FiniteGroup(std::move(name), std::move(label), std::move(mul), std::move(rep));
}

FiniteGroup FiniteGroup::symmetric3() {
  // Elements in lexicographic order; index 0 is the identity.
  std::vector<Perm> perms;
  Perm p = {0, 1, 2};
  do {
    perms.push_back(p);
  } while (std::next_permutation(p.begin(), p.end()));

  const std::size_t n = perms.size();
  std::vector<std::vector<Element>> mul(n, std::vector<Element>(n));
  for (Element g = 0; g < n; ++g) {
    for (Element h = 0; h < n; ++h) {
      const Perm gh = compose(perms[g], perms[h]);
      mul[g][h] = static_cast<Element>(std::find(perms.begin(), perms.end(), gh) - perms.begin());
    }
  }

  // Standard irrep: the permutation action restricted to the plane orthogonal
  // to (1,1,1), written in a real orthonormal basis of that plane.
  Eigen::Matrix<double, 3, 2> basis;
  basis.col(0) << 1.0 / std::sqrt(2.0), -1.0 / std::sqrt(2.0), 0.0;
  basis.col(1) << 1.0 / std::sqrt(6.0), 1.0 / std::sqrt(6.0), -2.0 / std::sqrt(6.0);

  std::vector<Matrix> rep;
  rep.reserve(n);
  for (const auto& perm : perms) {
    Eigen::Matrix3d pm = Eigen::Matrix3d::Zero();
    for (int i = 0; i < 3; ++i) pm(perm[i], i) = 1.0;
    Eigen::Matrix2d d = basis.transpose() * pm * basis;
    // Entries are 0, +-1/2, +-1 or +-sqrt(3)/2; snap away rounding so that
    // determinants come out as exact +-1.
    for (int r = 0; r < 2; ++r) {
      for (int c = 0; c < 2; ++c) {
        const double v = d(r, c);
        for (double exact : {0.0, 0.5, 1.0, std::sqrt(3.0) / 2.0}) {
          if (std::abs(std::abs(v) - exact) < 1e-12) d(r, c) = std::copysign(exact, v);
        }
      }
    }
    rep.emplace_back(d.cast<Complex>());
  }
  return FiniteGroup("S3", "S3", std::move(mul), std::move(rep));
}

FiniteGroup FiniteGroup::from_label(std::string_view label) {
  if (label == "Z2") return cyclic(2);
  if (label == "Z3") return cyclic(3);
  if (label == "S3") return symmetric3();
  if (label.starts_with("ZN:")) {
    const std::string_view digits = label.substr(3);
    std::size_t n = 0;
    const auto [ptr, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), n);
    if (ec != std::errc() || ptr != digits.data() + digits.size() || digits.empty()) {
      throw std::invalid_argument("malformed group order in label '" + std::string(label) + "'");
    }
    return cyclic(n);
  }
  throw std::invalid_argument("unknown group label '" + std::string(label) +
                              "' (expected Z2, Z3, ZN:<N> or S3)");
}

bool FiniteGroup::is_abelian() const noexcept {
  for (Element g = 0; g < order(); ++g) {
    for (Element h = 0; h < g; ++h) {
      if (mul_[g][h] != mul_[h][g]) return false;
    }
  }
  return true;
}

void FiniteGroup::check_element(Element g) const {
  if (g >= order()) {
    throw std::out_of_range("group element " + std::to_string(g) + " out of range for " + name_ +
                            " of order " + std::to_string(order()));
  }
}

Element FiniteGroup::mul(Element g, Element h) const {
  check_element(g);
  check_element(h);
  return mul_[g][h];
}

Element FiniteGroup::inv(Element g) const {
  check_element(g);
  return inv_[g];
}

const Matrix& FiniteGroup::rep(Element g) const {
  check_element(g);
  return rep_[g];
}

Complex FiniteGroup::rep_det(Element g) const {
  check_element(g);
  return det_[g];
}

Complex FiniteGroup::rep_trace(Element g) const {
  check_element(g);
  return trace_[g];
}

Element FiniteGroup::parse_element(std::string_view token) const {
  if (token == "e") return identity();
  Element g = 0;
  const auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), g);
  if (ec != std::errc() || ptr != token.data() + token.size() || token.empty()) {
    throw std::invalid_argument("malformed group element '" + std::string(token) + "'");
  }
  check_element(g);
  return g;
}

FiniteGroup::AxiomReport FiniteGroup::verify() const {
  AxiomReport report;
  const std::size_t n = order();
  const Matrix eye = Matrix::Identity(static_cast<Eigen::Index>(rep_dim_),
                                      static_cast<Eigen::Index>(rep_dim_));
  for (Element g = 0; g < n; ++g) {
    if (mul_[identity()][g] != g || mul_[g][identity()] != g) report.identity_ok = false;
    if (mul_[g][inv_[g]] != identity() || mul_[inv_[g]][g] != identity()) report.inverse_ok = false;
    for (Element h = 0; h < n; ++h) {
      for (Element k = 0; k < n; ++k) {
        if (mul_[mul_[g][h]][k] != mul_[g][mul_[h][k]]) report.associative = false;
      }
      if (inv_[mul_[g][h]] != mul_[inv_[h]][inv_[g]]) report.inverse_antihomomorphic = false;
      report.homomorphism_residual = std::max(
          report.homomorphism_residual, max_abs(rep_[mul_[g][h]] - rep_[g] * rep_[h]));
    }
    report.unitarity_residual =
        std::max(report.unitarity_residual, max_abs(rep_[g].adjoint() * rep_[g] - eye));
    report.inverse_adjoint_residual =
        std::max(report.inverse_adjoint_residual, max_abs(rep_[inv_[g]] - rep_[g].adjoint()));
    report.determinant_residual =
        std::max(report.determinant_residual, std::abs(std::abs(det_[g]) - 1.0));
  }
  if (max_abs(rep_[identity()] - eye) > 1e-12) report.identity_ok = false;
  return report;
}

}  // namespace lgt
