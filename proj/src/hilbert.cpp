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

#include "lgt/hilbert.hpp"

#include <cmath>
#include <cstring>
#include <fstream>
#include <numbers>
#include <random>
#include <sstream>

namespace lgt {

// ---------------------------------------------------------------------------
// Layout
// ---------------------------------------------------------------------------

long double required_dimension(const FiniteGroup& group, const Lattice& lattice,
                               bool with_ancilla, std::size_t ancilla_qudits) {
  const std::size_t qudits = lattice.num_links() + (with_ancilla ? ancilla_qudits : 0);
  const std::size_t modes =
      (lattice.num_vertices() + (with_ancilla ? 1 : 0)) * group.rep_dim();
  return std::pow(static_cast<long double>(group.order()), static_cast<long double>(qudits)) *
         std::pow(2.0L, static_cast<long double>(modes));
}

HilbertLayout::HilbertLayout(FiniteGroup group, Lattice lattice, bool with_ancilla,
                             std::size_t ancilla_qudits)
    : group_(std::move(group)),
      lattice_(std::move(lattice)),
      with_ancilla_(with_ancilla),
      ancilla_qudits_(with_ancilla ? ancilla_qudits : 0) {
  const long double required =
      required_dimension(group_, lattice_, with_ancilla_, ancilla_qudits_);
  if (required > static_cast<long double>(kMaxDimension)) {
    std::ostringstream msg;
    msg.precision(0);
    msg << std::fixed << "Hilbert space dimension " << required << " (" << group_.order() << "^"
        << num_qudits() << " * 2^" << num_modes() << ") for " << group_.name() << " on "
        << lattice_.lx() << "x" << lattice_.ly() << (with_ancilla_ ? " with ancilla" : "")
        << " exceeds the allowed " << kMaxDimension;
    throw DimensionError(msg.str(), required);
  }
  dim_ = std::size_t{1} << num_modes();
  qudit_strides_.reserve(num_qudits());
  for (std::size_t q = 0; q < num_qudits(); ++q) {
    qudit_strides_.push_back(dim_);
    dim_ *= qudit_dim();
  }
}

std::size_t HilbertLayout::ancilla_qudit(std::size_t k) const {
  if (k >= ancilla_qudits_) throw std::out_of_range("layout has no ancilla qudit " + std::to_string(k));
  return num_link_qudits() + k;
}

std::size_t HilbertLayout::matter_mode(Vertex v, std::size_t component) const {
  if (component >= rep_dim()) throw std::out_of_range("spinor component out of range");
  return lattice_.vertex_index(v) * rep_dim() + component;
}

std::size_t HilbertLayout::chi_mode(std::size_t component) const {
  if (!with_ancilla_) throw std::logic_error("layout has no ancilla fermion modes");
  if (component >= rep_dim()) throw std::out_of_range("spinor component out of range");
  return num_matter_modes() + component;
}

bool HilbertLayout::compatible(const HilbertLayout& other) const noexcept {
  return group_.label() == other.group_.label() && lattice_.lx() == other.lattice_.lx() &&
         lattice_.ly() == other.lattice_.ly() &&
         lattice_.boundary() == other.lattice_.boundary() &&
         with_ancilla_ == other.with_ancilla_ && ancilla_qudits_ == other.ancilla_qudits_;
}

std::string HilbertLayout::descriptor() const {
  std::ostringstream out;
  out << "lgtstate group=" << group_.label() << " lattice=" << lattice_.lx() << "x"
      << lattice_.ly() << " boundary=" << to_string(lattice_.boundary())
      << " ancilla_qudits=" << ancilla_qudits_ << " chi=" << (with_ancilla_ ? 1 : 0)
      << " dim=" << dim_;
  return out.str();
}

LayoutPtr build_layout(const FiniteGroup& group, const Lattice& lattice, bool with_ancilla,
                       std::size_t ancilla_qudits) {
  return std::make_shared<const HilbertLayout>(group, lattice, with_ancilla, ancilla_qudits);
}

// ---------------------------------------------------------------------------
// StateVector
// ---------------------------------------------------------------------------

StateVector::StateVector(LayoutPtr layout)
    : layout_(std::move(layout)), amps_(layout_->dim(), Complex{}) {}

StateVector::StateVector(LayoutPtr layout, std::vector<Complex> amplitudes)
    : layout_(std::move(layout)), amps_(std::move(amplitudes)) {
  if (amps_.size() != layout_->dim()) {
    throw std::invalid_argument("amplitude count " + std::to_string(amps_.size()) +
                                " does not match layout dimension " +
                                std::to_string(layout_->dim()));
  }
}

double StateVector::norm() const noexcept {
  double sum = 0.0;
  for (const auto& a : amps_) sum += std::norm(a);
  return std::sqrt(sum);
}

double StateVector::normalize() {
  const double n = norm();
  if (!(n > 0.0)) throw std::domain_error("cannot normalize a zero state");
  scale(1.0 / n);
  return n;
}

void StateVector::scale(Complex factor) noexcept {
  for (auto& a : amps_) a *= factor;
}

void StateVector::clear() noexcept { std::fill(amps_.begin(), amps_.end(), Complex{}); }

// ---------------------------------------------------------------------------
// Iteration helpers
// ---------------------------------------------------------------------------

namespace detail {

std::vector<std::size_t> block_offsets(std::span<const Axis> axes) {
  std::vector<std::size_t> offsets{0};
  for (const auto& a : axes) {
    std::vector<std::size_t> next;
    next.reserve(offsets.size() * a.dim);
    for (std::size_t base : offsets) {
      for (std::size_t d = 0; d < a.dim; ++d) next.push_back(base + d * a.stride);
    }
    offsets = std::move(next);
  }
  return offsets;
}

std::vector<Axis> qudit_axes(const HilbertLayout& layout, std::span<const std::size_t> qudits) {
  std::vector<Axis> axes;
  for (std::size_t q : qudits) {
    if (q >= layout.num_qudits()) {
      throw std::out_of_range("qudit " + std::to_string(q) + " out of range");
    }
    for (const auto& a : axes) {
      if (a.stride == layout.qudit_stride(q)) throw std::invalid_argument("qudit listed twice");
    }
    axes.push_back({layout.qudit_stride(q), layout.qudit_dim()});
  }
  return axes;
}

Axis mode_axis(std::size_t mode) { return {std::size_t{1} << mode, 2}; }

Matrix fock_lift(const Matrix& single_particle) {
  const auto d = static_cast<std::size_t>(single_particle.rows());
  const std::size_t n = std::size_t{1} << d;
  Matrix lifted = Matrix::Zero(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
  auto members = [d](std::size_t bits) {
    std::vector<Eigen::Index> out;
    for (std::size_t m = 0; m < d; ++m) {
      if (bits >> m & 1U) out.push_back(static_cast<Eigen::Index>(m));
    }
    return out;
  };
  for (std::size_t to = 0; to < n; ++to) {
    const auto rows = members(to);
    for (std::size_t from = 0; from < n; ++from) {
      const auto cols = members(from);
      if (rows.size() != cols.size()) continue;
      if (rows.empty()) {
        lifted(0, 0) = 1.0;
        continue;
      }
      // Minor of the single-particle matrix: a^dag_{S} in ascending order
      // maps to the antisymmetrized product of the transformed creators.
      Matrix minor(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(cols.size()));
      for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < cols.size(); ++c) {
          minor(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
              single_particle(rows[r], cols[c]);
        }
      }
      lifted(static_cast<Eigen::Index>(to), static_cast<Eigen::Index>(from)) = minor.determinant();
    }
  }
  return lifted;
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Qudit kernels
// ---------------------------------------------------------------------------

void apply_qudit_op(StateVector& state, const Matrix& matrix, std::span<const std::size_t> qudits) {
  const auto& layout = state.layout();
  const auto axes = detail::qudit_axes(layout, qudits);
  const auto offsets = detail::block_offsets(axes);
  const auto n = static_cast<Eigen::Index>(offsets.size());
  if (matrix.rows() != n || matrix.cols() != n) {
    throw std::invalid_argument("operator of size " + std::to_string(matrix.rows()) + "x" +
                                std::to_string(matrix.cols()) + " does not match subsystem dimension " +
                                std::to_string(n));
  }
  // Plain loops: Eigen's dynamic-size product dispatch dominates for blocks this small.
  const auto size = static_cast<std::size_t>(n);
  std::vector<Complex> m(size * size);
  for (std::size_t r = 0; r < size; ++r) {
    for (std::size_t c = 0; c < size; ++c) {
      m[r * size + c] = matrix(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
    }
  }
  auto amps = state.amplitudes();
  std::vector<Complex> in(size);
  detail::for_each_base(layout.dim(), axes, [&](std::size_t base) {
    for (std::size_t b = 0; b < size; ++b) in[b] = amps[base + offsets[b]];
    for (std::size_t r = 0; r < size; ++r) {
      Complex acc{};
      for (std::size_t c = 0; c < size; ++c) acc += m[r * size + c] * in[c];
      amps[base + offsets[r]] = acc;
    }
  });
}

void apply_qudit_permutation(StateVector& state, std::span<const std::size_t> perm,
                             std::span<const std::size_t> qudits) {
  const auto& layout = state.layout();
  const auto axes = detail::qudit_axes(layout, qudits);
  const auto offsets = detail::block_offsets(axes);
  const std::size_t n = offsets.size();
  if (perm.size() != n) throw std::invalid_argument("permutation size does not match subsystems");
  std::vector<bool> hit(n, false);
  for (std::size_t p : perm) {
    if (p >= n || hit[p]) throw std::invalid_argument("not a permutation");
    hit[p] = true;
  }
  auto amps = state.amplitudes();
  std::vector<Complex> tmp(n);
  detail::for_each_base(layout.dim(), axes, [&](std::size_t base) {
    for (std::size_t b = 0; b < n; ++b) tmp[b] = amps[base + offsets[b]];
    for (std::size_t b = 0; b < n; ++b) amps[base + offsets[perm[b]]] = tmp[b];
  });
}

void apply_qudit_diagonal(StateVector& state, std::size_t qudit, std::span<const Complex> weight) {
  const auto& layout = state.layout();
  if (qudit >= layout.num_qudits()) throw std::out_of_range("qudit out of range");
  if (weight.size() != layout.qudit_dim()) throw std::invalid_argument("diagonal size mismatch");
  const std::size_t stride = layout.qudit_stride(qudit);
  const std::size_t g_count = layout.qudit_dim();
  auto amps = state.amplitudes();
  // Runs of `stride` consecutive indices share the same digit.
  for (std::size_t start = 0; start < amps.size(); start += stride) {
    const Complex w = weight[(start / stride) % g_count];
    for (std::size_t i = start; i < start + stride; ++i) amps[i] *= w;
  }
}

// ---------------------------------------------------------------------------
// Fermionic kernels
// ---------------------------------------------------------------------------

namespace {

void check_mode(const HilbertLayout& layout, std::size_t mode) {
  if (mode >= layout.num_modes()) {
    throw std::out_of_range("fermionic mode " + std::to_string(mode) + " out of range (" +
                            std::to_string(layout.num_modes()) + " modes)");
  }
}

std::size_t below_mask(std::size_t mode) { return (std::size_t{1} << mode) - 1; }

}  // namespace

StateVector apply_annihilate(const StateVector& state, std::size_t mode) {
  check_mode(state.layout(), mode);
  StateVector out(state.layout_ptr());
  const std::size_t bit = std::size_t{1} << mode;
  const std::size_t low = below_mask(mode);
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (i & bit) out[i ^ bit] = static_cast<double>(detail::parity_sign(i & low)) * state[i];
  }
  return out;
}

StateVector apply_create(const StateVector& state, std::size_t mode) {
  check_mode(state.layout(), mode);
  StateVector out(state.layout_ptr());
  const std::size_t bit = std::size_t{1} << mode;
  const std::size_t low = below_mask(mode);
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (!(i & bit)) out[i | bit] = static_cast<double>(detail::parity_sign(i & low)) * state[i];
  }
  return out;
}

StateVector apply_number(const StateVector& state, std::size_t mode) {
  check_mode(state.layout(), mode);
  StateVector out(state.layout_ptr());
  const std::size_t bit = std::size_t{1} << mode;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (i & bit) out[i] = state[i];
  }
  return out;
}

StateVector apply_fermionic_bilinear(const StateVector& state, std::span<const BilinearTerm> terms) {
  StateVector out(state.layout_ptr());
  for (const auto& t : terms) {
    check_mode(state.layout(), t.create);
    check_mode(state.layout(), t.annihilate);
    const std::size_t cbit = std::size_t{1} << t.create;
    const std::size_t abit = std::size_t{1} << t.annihilate;
    for (std::size_t i = 0; i < state.size(); ++i) {
      if (!(i & abit)) continue;
      const std::size_t mid = i ^ abit;
      if (mid & cbit) continue;
      const int sign = detail::parity_sign(i & below_mask(t.annihilate)) *
                       detail::parity_sign(mid & below_mask(t.create));
      out[mid | cbit] += t.coeff * static_cast<double>(sign) * state[i];
    }
  }
  return out;
}

void apply_two_mode_gate(StateVector& state, std::size_t p, std::size_t q, const TwoModeGate& gate) {
  const auto& layout = state.layout();
  check_mode(layout, p);
  check_mode(layout, q);
  if (p >= q) throw std::invalid_argument("two-mode gate needs p < q");
  const std::size_t pbit = std::size_t{1} << p;
  const std::size_t qbit = std::size_t{1} << q;
  const std::size_t between = below_mask(q) & ~below_mask(p + 1);
  auto amps = state.amplitudes();
  const auto& b = gate.single;
  detail::for_each_base(layout.dim(), {detail::mode_axis(p), detail::mode_axis(q)},
                        [&](std::size_t base) {
    // a_p^dag|R> and a_q^dag|R> differ from the occupation basis states by
    // the relative sign s = (-1)^{occupied modes strictly between p and q}.
    const double s = detail::parity_sign(base & between);
    const Complex a_p = amps[base | pbit];
    const Complex a_q = amps[base | qbit];
    amps[base] *= gate.empty;
    amps[base | pbit] = b(0, 0) * a_p + s * b(0, 1) * a_q;
    amps[base | qbit] = s * b(1, 0) * a_p + b(1, 1) * a_q;
    amps[base | pbit | qbit] *= gate.both;
  });
}

namespace {

/// Small dense block with its nonzero entries listed, for the Fock-lift kernels.
struct BlockMap {
  struct Entry {
    std::size_t row;
    std::size_t col;
    Complex value;
  };
  std::vector<Entry> entries;
  bool identity = true;

  explicit BlockMap(const Matrix& m) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      for (Eigen::Index r = 0; r < m.rows(); ++r) {
        const Complex v = m(r, c);
        if (v != Complex{}) {
          entries.push_back({static_cast<std::size_t>(r), static_cast<std::size_t>(c), v});
        }
        if (v != (r == c ? Complex{1.0, 0.0} : Complex{})) identity = false;
      }
    }
  }

  void apply(Complex* start, const std::vector<std::size_t>& offsets, std::vector<Complex>& buffer) const {
    for (std::size_t k = 0; k < offsets.size(); ++k) {
      buffer[k] = start[offsets[k]];
      start[offsets[k]] = Complex{};
    }
    for (const auto& e : entries) start[offsets[e.row]] += e.value * buffer[e.col];
  }
};

}  // namespace

void apply_fock_lift(StateVector& state, std::size_t first_mode, const Matrix& single_particle) {
  const auto& layout = state.layout();
  const auto d = static_cast<std::size_t>(single_particle.rows());
  if (single_particle.cols() != single_particle.rows()) {
    throw std::invalid_argument("single-particle matrix must be square");
  }
  check_mode(layout, first_mode + d - 1);
  const BlockMap lifted(detail::fock_lift(single_particle));
  std::vector<detail::Axis> axes;
  for (std::size_t m = d; m-- > 0;) axes.push_back(detail::mode_axis(first_mode + m));
  const auto offsets = detail::block_offsets(axes);
  if (lifted.identity) return;
  auto amps = state.amplitudes();
  std::vector<Complex> buffer(offsets.size());
  detail::for_each_base(layout.dim(), axes,
                        [&](std::size_t base) { lifted.apply(amps.data() + base, offsets, buffer); });
}

void apply_controlled_fock_lift(StateVector& state, std::size_t control_qudit,
                                std::size_t first_mode, std::span<const Matrix> per_element) {
  const auto& layout = state.layout();
  if (per_element.size() != layout.qudit_dim()) {
    throw std::invalid_argument("need one single-particle matrix per group element");
  }
  const auto d = static_cast<std::size_t>(per_element.front().rows());
  check_mode(layout, first_mode + d - 1);
  std::vector<BlockMap> lifted;
  lifted.reserve(per_element.size());
  for (const auto& m : per_element) lifted.emplace_back(detail::fock_lift(m));

  std::vector<detail::Axis> mode_axes;
  for (std::size_t m = d; m-- > 0;) mode_axes.push_back(detail::mode_axis(first_mode + m));
  const auto offsets = detail::block_offsets(mode_axes);

  std::vector<detail::Axis> axes = mode_axes;
  const auto control = detail::qudit_axes(layout, std::span(&control_qudit, 1)).front();
  axes.push_back(control);

  auto amps = state.amplitudes();
  std::vector<Complex> buffer(offsets.size());
  detail::for_each_base(layout.dim(), axes, [&](std::size_t base) {
    for (std::size_t g = 0; g < lifted.size(); ++g) {
      if (!lifted[g].identity) lifted[g].apply(amps.data() + base + g * control.stride, offsets, buffer);
    }
  });
}

// ---------------------------------------------------------------------------
// Inner products
// ---------------------------------------------------------------------------

namespace {

void check_compatible(const StateVector& a, const StateVector& b) {
  if (!a.layout().compatible(b.layout())) {
    throw std::invalid_argument("states live on different layouts: '" + a.layout().descriptor() +
                                "' vs '" + b.layout().descriptor() + "'");
  }
}

}  // namespace

Complex inner(const StateVector& bra, const StateVector& ket) {
  check_compatible(bra, ket);
  Complex sum{};
  for (std::size_t i = 0; i < bra.size(); ++i) sum += std::conj(bra[i]) * ket[i];
  return sum;
}

Complex expectation(const StateVector& state,
                    const std::function<StateVector(const StateVector&)>& op) {
  return inner(state, op(state));
}

double mode_occupation(const StateVector& state, std::size_t mode) {
  check_mode(state.layout(), mode);
  const std::size_t bit = std::size_t{1} << mode;
  double sum = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    if (i & bit) sum += std::norm(state[i]);
  }
  return sum;
}

double distance(const StateVector& a, const StateVector& b) {
  check_compatible(a, b);
  double sum = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) sum += std::norm(a[i] - b[i]);
  return std::sqrt(sum);
}

// ---------------------------------------------------------------------------
// Preparation
// ---------------------------------------------------------------------------

ProductStateSpec ProductStateSpec::staggered_vacuum(const Lattice& lattice, std::size_t rep_dim) {
  ProductStateSpec spec;
  spec.default_link = LinkPreparation::singlet();
  for (std::size_t i = 0; i < lattice.num_vertices(); ++i) {
    const Vertex v = lattice.vertex_at(i);
    if (Lattice::parity(v) == 1) {
      for (std::size_t m = 0; m < rep_dim; ++m) spec.occupied.insert({v, m});
    }
  }
  return spec;
}

StateVector prepare_state(const LayoutPtr& layout, const ProductStateSpec& spec) {
  const auto& lat = layout->lattice();
  const std::size_t g_count = layout->qudit_dim();
  for (const auto& [link, prep] : spec.links) {
    if (!lat.has_link(link)) {
      throw std::invalid_argument("state spec names link " + to_string(link) +
                                  " which is not on the lattice");
    }
  }
  std::vector<std::vector<Complex>> link_amps(layout->num_link_qudits());
  for (std::size_t q = 0; q < layout->num_link_qudits(); ++q) {
    const auto it = spec.links.find(lat.link_at(q));
    const LinkPreparation prep = it == spec.links.end() ? spec.default_link : it->second;
    auto& amps = link_amps[q];
    if (prep.kind == LinkPreparation::Kind::Singlet) {
      amps.assign(g_count, Complex(1.0 / std::sqrt(static_cast<double>(g_count)), 0.0));
    } else {
      if (prep.element >= g_count) throw std::invalid_argument("link state element out of range");
      amps.assign(g_count, Complex{});
      amps[prep.element] = 1.0;
    }
  }
  std::size_t fermions = 0;
  for (const auto& [v, m] : spec.occupied) {
    if (!lat.contains(v)) throw std::invalid_argument("occupied vertex " + to_string(v) + " is off the lattice");
    if (m >= layout->rep_dim()) throw std::invalid_argument("occupied component out of range");
    fermions |= std::size_t{1} << layout->matter_mode(v, m);
  }

  StateVector state(layout);
  const std::size_t links = layout->num_link_qudits();
  std::size_t configs = 1;
  for (std::size_t q = 0; q < links; ++q) configs *= g_count;
  std::vector<std::size_t> digit(links, 0);
  for (std::size_t c = 0; c < configs; ++c) {
    Complex amp = 1.0;
    std::size_t index = fermions;
    for (std::size_t q = 0; q < links; ++q) {
      amp *= link_amps[q][digit[q]];
      index += digit[q] * layout->qudit_stride(q);
    }
    state[index] = amp;
    for (std::size_t q = 0; q < links; ++q) {
      if (++digit[q] < g_count) break;
      digit[q] = 0;
    }
  }
  return state;
}

StateVector random_state(const LayoutPtr& layout, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng] { return static_cast<double>(rng() >> 11) * 0x1.0p-53; };
  std::vector<Complex> amps(layout->dim());
  for (auto& a : amps) {
    const double u1 = 1.0 - uniform();  // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double phi = 2.0 * std::numbers::pi * u2;
    a = Complex(r * std::cos(phi), r * std::sin(phi));
  }
  StateVector state(layout, std::move(amps));
  state.normalize();
  return state;
}

namespace {

void check_ancilla_pair(const HilbertLayout& physical, const HilbertLayout& ancilla) {
  if (physical.with_ancilla() || !ancilla.with_ancilla() ||
      physical.group().label() != ancilla.group().label() ||
      physical.lattice().lx() != ancilla.lattice().lx() ||
      physical.lattice().ly() != ancilla.lattice().ly() ||
      physical.lattice().boundary() != ancilla.lattice().boundary()) {
    throw std::invalid_argument("layouts are not a physical / ancilla pair: '" +
                                physical.descriptor() + "' and '" + ancilla.descriptor() + "'");
  }
}

}  // namespace

StateVector embed(const StateVector& physical, const LayoutPtr& with_ancilla) {
  check_ancilla_pair(physical.layout(), *with_ancilla);
  const std::size_t f = physical.layout().num_modes();
  const std::size_t shift = with_ancilla->rep_dim();
  const std::size_t low = (std::size_t{1} << f) - 1;
  StateVector out(with_ancilla);
  for (std::size_t i = 0; i < physical.size(); ++i) {
    out[((i >> f) << (f + shift)) | (i & low)] = physical[i];
  }
  return out;
}

std::pair<StateVector, double> project_ancilla_reference(const StateVector& state,
                                                         const LayoutPtr& physical) {
  check_ancilla_pair(*physical, state.layout());
  const std::size_t f = physical->num_modes();
  const std::size_t shift = state.layout().rep_dim();
  const std::size_t low = (std::size_t{1} << f) - 1;
  StateVector out(physical);
  double kept = 0.0;
  for (std::size_t i = 0; i < out.size(); ++i) {
    out[i] = state[((i >> f) << (f + shift)) | (i & low)];
    kept += std::norm(out[i]);
  }
  const double total = state.norm();
  return {std::move(out), total > 0.0 ? kept / (total * total) : 0.0};
}

// ---------------------------------------------------------------------------
// Dump
// ---------------------------------------------------------------------------

namespace {

void to_little_endian(unsigned char* bytes) {
  if constexpr (std::endian::native == std::endian::big) std::reverse(bytes, bytes + 8);
}

}  // namespace

void write_state(const StateVector& state, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open '" + path + "' for writing");
  out << state.layout().descriptor() << '\n';
  for (const auto& a : state.amplitudes()) {
    for (double part : {a.real(), a.imag()}) {
      unsigned char bytes[8];
      std::memcpy(bytes, &part, 8);
      to_little_endian(bytes);
      out.write(reinterpret_cast<const char*>(bytes), 8);
    }
  }
  if (!out) throw std::runtime_error("failed writing '" + path + "'");
}

StateVector read_state(const LayoutPtr& layout, const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open '" + path + "'");
  std::string header;
  std::getline(in, header);
  if (header != layout->descriptor()) {
    throw std::runtime_error("state dump header '" + header + "' does not match layout '" +
                             layout->descriptor() + "'");
  }
  std::vector<Complex> amps(layout->dim());
  for (auto& a : amps) {
    double parts[2];
    for (double& part : parts) {
      unsigned char bytes[8];
      in.read(reinterpret_cast<char*>(bytes), 8);
      to_little_endian(bytes);
      std::memcpy(&part, bytes, 8);
    }
    a = Complex(parts[0], parts[1]);
  }
  if (!in) throw std::runtime_error("state dump '" + path + "' is truncated");
  return StateVector(layout, std::move(amps));
}

}  // namespace lgt
