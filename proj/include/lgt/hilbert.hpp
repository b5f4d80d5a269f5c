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
 * Composite Hilbert space of link qudits and fermionic modes, dense state
 * vectors over it, and the kernels that apply local operators.
 *
 * Basis index layout: the low `num_modes()` bits hold fermionic occupations
 * (mode j is bit j); above them sit the qudits in mixed radix |G|, qudit q
 * having stride 2^num_modes * |G|^q. Link qudits come first in lattice link
 * order, ancilla qudits last. Fermionic modes are ordered vertex-major,
 * component-minor, with the ancilla modes chi_m appended after all matter
 * modes. Basis states are |n> = prod_j (a_j^dag)^{n_j} |0> with the product
 * taken in ascending mode order, so a_j^dag carries the sign
 * (-1)^{number of occupied modes below j}.
 */

#pragma once

#include <algorithm>
#include <bit>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <set>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "lgt/group.hpp"
#include "lgt/lattice.hpp"

namespace lgt {

/// Upper bound on the dense state dimension.
inline constexpr std::size_t kMaxDimension = std::size_t{1} << 24;

class DimensionError : public std::length_error {
 public:
  DimensionError(const std::string& what, long double required)
      : std::length_error(what), required_(required) {}
  [[nodiscard]] long double required() const noexcept { return required_; }

 private:
  long double required_;
};

class HilbertLayout {
 public:
  /// `ancilla_qudits` is only used when `with_ancilla` is set; all ancilla
  /// qudits share one chi multiplet. Zero qudits leaves the chi multiplet alone.
  HilbertLayout(FiniteGroup group, Lattice lattice, bool with_ancilla,
                std::size_t ancilla_qudits = 1);

  [[nodiscard]] const FiniteGroup& group() const noexcept { return group_; }
  [[nodiscard]] const Lattice& lattice() const noexcept { return lattice_; }
  [[nodiscard]] bool with_ancilla() const noexcept { return with_ancilla_; }
  [[nodiscard]] std::size_t num_ancilla_qudits() const noexcept { return ancilla_qudits_; }

  [[nodiscard]] std::size_t qudit_dim() const noexcept { return group_.order(); }
  [[nodiscard]] std::size_t rep_dim() const noexcept { return group_.rep_dim(); }
  [[nodiscard]] std::size_t num_link_qudits() const noexcept { return lattice_.num_links(); }
  [[nodiscard]] std::size_t num_qudits() const noexcept {
    return num_link_qudits() + ancilla_qudits_;
  }
  [[nodiscard]] std::size_t num_matter_modes() const noexcept {
    return lattice_.num_vertices() * rep_dim();
  }
  [[nodiscard]] std::size_t num_modes() const noexcept {
    return num_matter_modes() + (with_ancilla_ ? rep_dim() : 0);
  }
  [[nodiscard]] std::size_t dim() const noexcept { return dim_; }

  [[nodiscard]] std::size_t link_qudit(Link l) const { return lattice_.link_index(l); }
  [[nodiscard]] std::size_t ancilla_qudit(std::size_t k = 0) const;
  [[nodiscard]] std::size_t matter_mode(Vertex v, std::size_t component) const;
  [[nodiscard]] std::size_t chi_mode(std::size_t component) const;

  [[nodiscard]] std::size_t qudit_stride(std::size_t q) const { return qudit_strides_.at(q); }
  [[nodiscard]] std::size_t qudit_digit(std::size_t index, std::size_t q) const {
    return (index / qudit_strides_[q]) % qudit_dim();
  }
  [[nodiscard]] std::size_t fermion_mask() const noexcept {
    return (std::size_t{1} << num_modes()) - 1;
  }

  /// Same group, lattice and ancilla content.
  [[nodiscard]] bool compatible(const HilbertLayout& other) const noexcept;

  /// One-line description, also used as the state dump header.
  [[nodiscard]] std::string descriptor() const;

 private:
  FiniteGroup group_;
  Lattice lattice_;
  bool with_ancilla_;
  std::size_t ancilla_qudits_;
  std::size_t dim_ = 0;
  std::vector<std::size_t> qudit_strides_;
};

using LayoutPtr = std::shared_ptr<const HilbertLayout>;

LayoutPtr build_layout(const FiniteGroup& group, const Lattice& lattice, bool with_ancilla,
                       std::size_t ancilla_qudits = 1);

/// Dimension the layout would need, without allocating; may exceed kMaxDimension.
long double required_dimension(const FiniteGroup& group, const Lattice& lattice,
                               bool with_ancilla, std::size_t ancilla_qudits = 1);

class StateVector {
 public:
  explicit StateVector(LayoutPtr layout);
  StateVector(LayoutPtr layout, std::vector<Complex> amplitudes);

  [[nodiscard]] const HilbertLayout& layout() const noexcept { return *layout_; }
  [[nodiscard]] const LayoutPtr& layout_ptr() const noexcept { return layout_; }
  [[nodiscard]] std::size_t size() const noexcept { return amps_.size(); }

  [[nodiscard]] std::span<Complex> amplitudes() noexcept { return amps_; }
  [[nodiscard]] std::span<const Complex> amplitudes() const noexcept { return amps_; }
  Complex& operator[](std::size_t i) noexcept { return amps_[i]; }
  const Complex& operator[](std::size_t i) const noexcept { return amps_[i]; }

  [[nodiscard]] double norm() const noexcept;
  /// Returns the norm before normalization; throws if it is zero.
  double normalize();
  void scale(Complex factor) noexcept;

  /// Sets every amplitude to zero, keeping the allocation.
  void clear() noexcept;

 private:
  LayoutPtr layout_;
  std::vector<Complex> amps_;
};

// ---------------------------------------------------------------------------
// Strided iteration
// ---------------------------------------------------------------------------

namespace detail {

/// One tensor factor of the basis index: digit = (index / stride) % dim.
struct Axis {
  std::size_t stride;
  std::size_t dim;
};

/// Calls fn(base) for every basis index whose digits on `axes` are all zero.
template <class Fn>
void for_each_base(std::size_t total, std::vector<Axis> axes, Fn&& fn) {
  std::sort(axes.begin(), axes.end(),
            [](const Axis& a, const Axis& b) { return a.stride < b.stride; });
  // The complement of the axes splits into contiguous runs (step, count).
  std::vector<std::size_t> step;
  std::vector<std::size_t> count;
  std::size_t low = 1;
  for (const auto& a : axes) {
    if (a.stride > low) {
      step.push_back(low);
      count.push_back(a.stride / low);
    }
    low = a.stride * a.dim;
  }
  if (total > low) {
    step.push_back(low);
    count.push_back(total / low);
  }
  if (step.empty()) {
    fn(std::size_t{0});
    return;
  }
  // Innermost loop: the lowest run long enough to amortize the odometer,
  // else the longest one.
  constexpr std::size_t kLongRun = 64;
  std::size_t pick = 0;
  for (std::size_t k = 0; k < step.size(); ++k) {
    if (count[k] > count[pick]) pick = k;
  }
  for (std::size_t k = 0; k < step.size(); ++k) {
    if (count[k] >= kLongRun) {
      pick = k;
      break;
    }
  }
  std::swap(step[0], step[pick]);
  std::swap(count[0], count[pick]);

  const std::size_t inner = count[0];
  const std::size_t inner_step = step[0];
  const std::size_t levels = step.size();
  std::vector<std::size_t> counter(levels, 0);
  std::size_t outer = 0;
  while (true) {
    for (std::size_t i = 0; i < inner; ++i) fn(outer + i * inner_step);
    std::size_t level = 1;
    while (level < levels) {
      outer += step[level];
      if (++counter[level] < count[level]) break;
      outer -= step[level] * count[level];
      counter[level] = 0;
      ++level;
    }
    if (level == levels) return;
  }
}

/// Calls fn(begin, end, digit) for each contiguous index range on which
/// qudit `q` holds a single digit.
template <class Fn>
void for_each_digit_run(const HilbertLayout& layout, std::size_t q, Fn&& fn) {
  const std::size_t stride = layout.qudit_stride(q);
  const std::size_t d = layout.qudit_dim();
  std::size_t digit = 0;
  for (std::size_t begin = 0; begin < layout.dim(); begin += stride) {
    fn(begin, begin + stride, digit);
    digit = digit + 1 == d ? 0 : digit + 1;
  }
}

/// Offsets of every digit combination on `axes`; the first axis is most significant.
std::vector<std::size_t> block_offsets(std::span<const Axis> axes);

std::vector<Axis> qudit_axes(const HilbertLayout& layout, std::span<const std::size_t> qudits);
Axis mode_axis(std::size_t mode);

inline int parity_sign(std::size_t bits) noexcept {
  return (std::popcount(bits) & 1) ? -1 : 1;
}

/// Second-quantized lift of a d x d single-particle matrix onto the 2^d Fock
/// space of d consecutive modes, indexed by occupation bits (component m = bit m).
Matrix fock_lift(const Matrix& single_particle);

}  // namespace detail

// ---------------------------------------------------------------------------
// Qudit kernels
// ---------------------------------------------------------------------------

/// Applies `matrix` to the listed qudits (first listed is most significant).
void apply_qudit_op(StateVector& state, const Matrix& matrix,
                    std::span<const std::size_t> qudits);

/// Applies the basis permutation |b> -> |perm[b]> on the listed qudits.
void apply_qudit_permutation(StateVector& state, std::span<const std::size_t> perm,
                             std::span<const std::size_t> qudits);

/// Multiplies every amplitude by weight(digit of qudit q).
void apply_qudit_diagonal(StateVector& state, std::size_t qudit, std::span<const Complex> weight);

// ---------------------------------------------------------------------------
// Fermionic kernels
// ---------------------------------------------------------------------------

StateVector apply_annihilate(const StateVector& state, std::size_t mode);
StateVector apply_create(const StateVector& state, std::size_t mode);
StateVector apply_number(const StateVector& state, std::size_t mode);

struct BilinearTerm {
  Complex coeff;
  std::size_t create;
  std::size_t annihilate;
};

/// Returns sum_k coeff_k a^dag_{create_k} a_{annihilate_k} |state>.
StateVector apply_fermionic_bilinear(const StateVector& state, std::span<const BilinearTerm> terms);

/**
 * Number-conserving two-mode gate on modes p < q, given in the
 * second-quantized basis {a_p^dag|R>, a_q^dag|R>} of the singly occupied
 * sector, with scalars on the empty and doubly occupied sectors. The
 * sign string between p and q is applied by the kernel.
 */
struct TwoModeGate {
  Complex empty{1.0, 0.0};
  Eigen::Matrix2cd single = Eigen::Matrix2cd::Identity();
  Complex both{1.0, 0.0};
};

void apply_two_mode_gate(StateVector& state, std::size_t p, std::size_t q, const TwoModeGate& gate);

/// Applies the Fock lift of `single_particle` (d x d) on modes first..first+d-1.
void apply_fock_lift(StateVector& state, std::size_t first_mode, const Matrix& single_particle);

/// Applies sum_g |g><g|_control (x) lift(per_element[g]) on modes first..first+d-1.
void apply_controlled_fock_lift(StateVector& state, std::size_t control_qudit,
                                std::size_t first_mode, std::span<const Matrix> per_element);

// ---------------------------------------------------------------------------
// Inner products and expectations
// ---------------------------------------------------------------------------

Complex inner(const StateVector& bra, const StateVector& ket);

/// <psi| op(psi)>, with op returning the image of its argument.
Complex expectation(const StateVector& state,
                    const std::function<StateVector(const StateVector&)>& op);

double mode_occupation(const StateVector& state, std::size_t mode);

/// Euclidean distance between two states on compatible layouts.
double distance(const StateVector& a, const StateVector& b);

// ---------------------------------------------------------------------------
// State preparation
// ---------------------------------------------------------------------------

struct LinkPreparation {
  enum class Kind { Element, Singlet };
  Kind kind = Kind::Singlet;
  Element element = 0;

  static LinkPreparation singlet() { return {Kind::Singlet, 0}; }
  static LinkPreparation of(Element g) { return {Kind::Element, g}; }
};

/// Product state: each link a group-element state or singlet, and a set of
/// occupied (vertex, component) matter modes. Ancilla qudits start in |e>
/// and chi modes empty.
struct ProductStateSpec {
  LinkPreparation default_link = LinkPreparation::singlet();
  std::map<Link, LinkPreparation> links;
  std::set<std::pair<Vertex, std::size_t>> occupied;

  /// All odd-parity vertices fully occupied, even empty, all links singlet.
  static ProductStateSpec staggered_vacuum(const Lattice& lattice, std::size_t rep_dim);
};

StateVector prepare_state(const LayoutPtr& layout, const ProductStateSpec& spec);

/**
 * Reproducible normalized random state. Amplitudes are i.i.d. complex
 * Gaussians drawn with std::mt19937_64 seeded by `seed`, 53-bit uniforms
 * taken from the top bits of each draw, and the Box-Muller transform, so the
 * amplitude sequence is identical on every platform.
 */
StateVector random_state(const LayoutPtr& layout, std::uint64_t seed);

/// Lifts a state without ancilla to |psi> (x) |e~...> (x) |Omega_chi>.
StateVector embed(const StateVector& physical, const LayoutPtr& with_ancilla);

/**
 * Splits off the ancilla reference component: returns the physical state
 * (<e~| <Omega_chi|) |state> and the fraction of the squared norm it carries.
 */
std::pair<StateVector, double> project_ancilla_reference(const StateVector& state,
                                                         const LayoutPtr& physical);

// ---------------------------------------------------------------------------
// Debug dump: one descriptor line, then little-endian (re, im) double pairs.
// ---------------------------------------------------------------------------

void write_state(const StateVector& state, const std::string& path);
/// Reads amplitudes written by write_state; the descriptor must match `layout`.
StateVector read_state(const LayoutPtr& layout, const std::string& path);

}  // namespace lgt
