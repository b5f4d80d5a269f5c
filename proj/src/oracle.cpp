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

#include "lgt/oracle.hpp"

#include <algorithm>

#include <Eigen/SparseCore>

namespace lgt {

namespace {

/// Ordered product of link matrices along a path, tabulated over the
/// configurations of the distinct links the path visits.
class StringTable {
 public:
  StringTable(const HilbertLayout& layout, const Path& path)
      : layout_(layout), d_(layout.rep_dim()) {
    layout.lattice().validate_path(path);
    std::vector<std::size_t> step_slot;
    for (const auto& s : path.steps) {
      const std::size_t q = layout.link_qudit(s.link);
      auto it = std::find(qudits_.begin(), qudits_.end(), q);
      step_slot.push_back(static_cast<std::size_t>(it - qudits_.begin()));
      if (it == qudits_.end()) qudits_.push_back(q);
    }
    const std::size_t g_count = layout.qudit_dim();
    std::size_t configs = 1;
    for (std::size_t k = 0; k < qudits_.size(); ++k) configs *= g_count;
    table_.resize(configs * d_ * d_);

    const auto& group = layout.group();
    std::vector<std::size_t> digit(qudits_.size(), 0);
    for (std::size_t c = 0; c < configs; ++c) {
      Matrix product = Matrix::Identity(static_cast<Eigen::Index>(d_), static_cast<Eigen::Index>(d_));
      for (std::size_t k = 0; k < path.steps.size(); ++k) {
        const Matrix& u = group.rep(digit[step_slot[k]]);
        if (path.steps[k].orientation > 0) {
          product = product * u;
        } else {
          product = product * u.adjoint();
        }
      }
      for (std::size_t m = 0; m < d_; ++m) {
        for (std::size_t n = 0; n < d_; ++n) {
          table_[(c * d_ + m) * d_ + n] =
              product(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
        }
      }
      for (std::size_t k = 0; k < digit.size(); ++k) {
        if (++digit[k] < g_count) break;
        digit[k] = 0;
      }
    }
  }

  /// Length of the aligned index blocks on which key() is constant.
  [[nodiscard]] std::size_t run() const {
    std::size_t r = layout_.dim();
    for (std::size_t q : qudits_) r = std::min(r, layout_.qudit_stride(q));
    return r;
  }

  [[nodiscard]] std::size_t key(std::size_t index) const {
    std::size_t k = 0;
    std::size_t radix = 1;
    for (std::size_t q : qudits_) {
      k += layout_.qudit_digit(index, q) * radix;
      radix *= layout_.qudit_dim();
    }
    return k;
  }

  [[nodiscard]] Complex entry(std::size_t key, std::size_t m, std::size_t n) const {
    return table_[(key * d_ + m) * d_ + n];
  }

  [[nodiscard]] Complex trace(std::size_t key) const {
    Complex t{};
    for (std::size_t m = 0; m < d_; ++m) t += entry(key, m, m);
    return t;
  }

 private:
  const HilbertLayout& layout_;
  std::size_t d_;
  std::vector<std::size_t> qudits_;
  std::vector<Complex> table_;
};

std::size_t below(std::size_t mode) { return (std::size_t{1} << mode) - 1; }

void check_meson_path(const Lattice& lattice, const Path& path) {
  if (lattice.path_end(path) == path.start) {
    throw std::invalid_argument("meson endpoints coincide at " + to_string(path.start));
  }
}

}  // namespace

MesonOperator parse_meson_operator(std::string_view text) {
  if (text == "M") return MesonOperator::M;
  if (text == "M'" || text == "Mprime" || text == "MPrime") return MesonOperator::MPrime;
  if (text == "string" || text == "String") return MesonOperator::String;
  throw std::invalid_argument("unknown meson operator '" + std::string(text) +
                              "' (expected M, M' or string)");
}

std::string_view to_string(MesonOperator op) {
  switch (op) {
    case MesonOperator::String: return "string";
    case MesonOperator::M: return "M";
    case MesonOperator::MPrime: return "M'";
  }
  return "?";
}

Complex wilson_expectation(const StateVector& state, const Loop& loop) {
  const StringTable table(state.layout(), loop.path);
  Complex sum{};
  for (std::size_t begin = 0; begin < state.size(); begin += table.run()) {
    double w = 0.0;
    for (std::size_t i = begin; i < begin + table.run(); ++i) w += std::norm(state[i]);
    if (w != 0.0) sum += w * table.trace(table.key(begin));
  }
  return sum;
}

StateVector wilson_apply(const StateVector& state, const Loop& loop) {
  const StringTable table(state.layout(), loop.path);
  StateVector out(state.layout_ptr());
  for (std::size_t begin = 0; begin < state.size(); begin += table.run()) {
    const Complex t = table.trace(table.key(begin));
    for (std::size_t i = begin; i < begin + table.run(); ++i) out[i] = t * state[i];
  }
  return out;
}

StateVector wilson_matrix_apply(const StateVector& state, const Loop& loop, std::size_t m,
                                std::size_t n) {
  if (m >= state.layout().rep_dim() || n >= state.layout().rep_dim()) {
    throw std::out_of_range("matrix index out of range");
  }
  const StringTable table(state.layout(), loop.path);
  StateVector out(state.layout_ptr());
  for (std::size_t begin = 0; begin < state.size(); begin += table.run()) {
    const Complex e = table.entry(table.key(begin), m, n);
    for (std::size_t i = begin; i < begin + table.run(); ++i) out[i] = e * state[i];
  }
  return out;
}

StateVector meson_apply(const StateVector& state, const Path& path, MesonOperator op) {
  const auto& layout = state.layout();
  check_meson_path(layout.lattice(), path);
  const StringTable table(layout, path);
  const Vertex x = path.start;
  const Vertex y = layout.lattice().path_end(path);
  const std::size_t d = layout.rep_dim();

  // String coefficient c and its adjoint coefficient c_dag per (m, n).
  Complex forward = 1.0;
  Complex backward = 0.0;
  if (op == MesonOperator::M) {
    backward = 1.0;
  } else if (op == MesonOperator::MPrime) {
    forward = Complex(0.0, -1.0);
    backward = Complex(0.0, 1.0);
  }

  std::vector<std::size_t> x_mode(d);
  std::vector<std::size_t> y_mode(d);
  for (std::size_t m = 0; m < d; ++m) {
    x_mode[m] = layout.matter_mode(x, m);
    y_mode[m] = layout.matter_mode(y, m);
  }

  StateVector out(state.layout_ptr());
  const std::size_t run = table.run();
  std::size_t key = 0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (i % run == 0) key = table.key(i);
    const Complex amp = state[i];
    if (amp == Complex{}) continue;
    for (std::size_t m = 0; m < d; ++m) {
      const std::size_t xm = x_mode[m];
      for (std::size_t n = 0; n < d; ++n) {
        const std::size_t yn = y_mode[n];
        const Complex p = table.entry(key, m, n);
        // psi^dag_m(x) psi_n(y)
        if ((i >> yn & 1U) && !((i ^ (std::size_t{1} << yn)) >> xm & 1U)) {
          const std::size_t mid = i ^ (std::size_t{1} << yn);
          const double sign = detail::parity_sign(i & below(yn)) * detail::parity_sign(mid & below(xm));
          out[mid | (std::size_t{1} << xm)] += forward * p * sign * amp;
        }
        // (psi^dag_m(x) p psi_n(y))^dag = conj(p) psi^dag_n(y) psi_m(x)
        if (backward != Complex{} && (i >> xm & 1U) && !((i ^ (std::size_t{1} << xm)) >> yn & 1U)) {
          const std::size_t mid = i ^ (std::size_t{1} << xm);
          const double sign = detail::parity_sign(i & below(xm)) * detail::parity_sign(mid & below(yn));
          out[mid | (std::size_t{1} << yn)] += backward * std::conj(p) * sign * amp;
        }
      }
    }
  }
  return out;
}

Complex meson_expectation(const StateVector& state, const Path& path, MesonOperator op) {
  return inner(state, meson_apply(state, path, op));
}

namespace dense {

namespace {

void check_dense(const HilbertLayout& layout) {
  if (layout.dim() > kMaxDenseDimension) {
    throw DimensionError("dense oracle limited to dimension " + std::to_string(kMaxDenseDimension) +
                             ", layout has " + std::to_string(layout.dim()),
                         static_cast<long double>(layout.dim()));
  }
}

Matrix kron(const Matrix& a, const Matrix& b) {
  Matrix out(a.rows() * b.rows(), a.cols() * b.cols());
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
    }
  }
  return out;
}

Eigen::VectorXcd kron(const Eigen::VectorXcd& a, const Eigen::VectorXcd& b) {
  Eigen::VectorXcd out(a.size() * b.size());
  for (Eigen::Index i = 0; i < a.size(); ++i) out.segment(i * b.size(), b.size()) = a(i) * b;
  return out;
}

Matrix identity(std::size_t n) {
  return Matrix::Identity(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
}

/// Path-ordered operator-valued matrix product, entry (m, n), as a diagonal.
Eigen::VectorXcd string_entry(const HilbertLayout& layout, const Path& path, std::size_t m,
                              std::size_t n) {
  const std::size_t d = layout.rep_dim();
  // rows[k] holds the diagonals of (U_1 ... U_j)_{m k}.
  std::vector<Eigen::VectorXcd> row(d, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dim())));
  for (std::size_t k = 0; k < d; ++k) {
    if (k == m) row[k].setOnes();
  }
  for (const auto& s : path.steps) {
    const std::size_t q = layout.link_qudit(s.link);
    std::vector<Eigen::VectorXcd> next(d, Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dim())));
    for (std::size_t k = 0; k < d; ++k) {
      for (std::size_t l = 0; l < d; ++l) {
        // (U^dag)_{kl} = conj(U_{lk})
        const Eigen::VectorXcd u = s.orientation > 0 ? link_element(layout, q, k, l)
                                                     : Eigen::VectorXcd(link_element(layout, q, l, k).conjugate());
        next[l] += row[k].cwiseProduct(u);
      }
    }
    row = std::move(next);
  }
  return row[n];
}

}  // namespace

Matrix annihilation(const HilbertLayout& layout, std::size_t mode) {
  check_dense(layout);
  if (mode >= layout.num_modes()) throw std::out_of_range("mode out of range");
  Matrix lower(2, 2);
  lower << 0.0, 1.0, 0.0, 0.0;  // |0><1|
  Matrix z(2, 2);
  z << 1.0, 0.0, 0.0, -1.0;
  // Most significant factor first: qudits, then modes from the highest down.
  std::size_t qudit_dim = 1;
  for (std::size_t q = 0; q < layout.num_qudits(); ++q) qudit_dim *= layout.qudit_dim();
  Matrix op = identity(qudit_dim);
  for (std::size_t j = layout.num_modes(); j-- > 0;) {
    const Matrix& factor = j == mode ? lower : (j < mode ? z : identity(2));
    op = kron(op, factor);
  }
  return op;
}

Eigen::VectorXcd link_element(const HilbertLayout& layout, std::size_t qudit, std::size_t m,
                              std::size_t n) {
  check_dense(layout);
  const auto& group = layout.group();
  Eigen::VectorXcd diag = Eigen::VectorXcd::Ones(1);
  for (std::size_t q = layout.num_qudits(); q-- > 0;) {
    Eigen::VectorXcd factor = Eigen::VectorXcd::Ones(static_cast<Eigen::Index>(layout.qudit_dim()));
    if (q == qudit) {
      for (Element g = 0; g < group.order(); ++g) {
        factor(static_cast<Eigen::Index>(g)) =
            group.rep(g)(static_cast<Eigen::Index>(m), static_cast<Eigen::Index>(n));
      }
    }
    diag = kron(diag, factor);
  }
  return kron(diag, Eigen::VectorXcd(Eigen::VectorXcd::Ones(std::int64_t{1} << layout.num_modes())));
}

Matrix wilson(const HilbertLayout& layout, const Loop& loop) {
  check_dense(layout);
  Eigen::VectorXcd trace = Eigen::VectorXcd::Zero(static_cast<Eigen::Index>(layout.dim()));
  for (std::size_t m = 0; m < layout.rep_dim(); ++m) trace += string_entry(layout, loop.path, m, m);
  return trace.asDiagonal();
}

Matrix meson(const HilbertLayout& layout, const Path& path, MesonOperator op) {
  check_dense(layout);
  check_meson_path(layout.lattice(), path);
  const Vertex x = path.start;
  const Vertex y = layout.lattice().path_end(path);
  Matrix string = Matrix::Zero(static_cast<Eigen::Index>(layout.dim()), static_cast<Eigen::Index>(layout.dim()));
  for (std::size_t m = 0; m < layout.rep_dim(); ++m) {
    const Eigen::SparseMatrix<Complex> create_x =
        Matrix(annihilation(layout, layout.matter_mode(x, m)).adjoint()).sparseView();
    for (std::size_t n = 0; n < layout.rep_dim(); ++n) {
      const Matrix annihilate_y = annihilation(layout, layout.matter_mode(y, n));
      const Eigen::VectorXcd u = string_entry(layout, path, m, n);
      string += create_x * (u.asDiagonal() * annihilate_y);
    }
  }
  switch (op) {
    case MesonOperator::String: return string;
    case MesonOperator::M: return string + string.adjoint();
    case MesonOperator::MPrime: return Complex(0.0, -1.0) * (string - string.adjoint());
  }
  return string;
}

}  // namespace dense

}  // namespace lgt
