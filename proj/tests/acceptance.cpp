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

// End-to-end acceptance checks at full size. Prints one PASS/FAIL line per
// check and exits nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstring>
#include <functional>
#include <regex>
#include <string>
#include <vector>

#include "lgt/gauge_ops.hpp"
#include "lgt/oracle.hpp"
#include "lgt/protocols.hpp"
#include "lgt/scenario.hpp"

using namespace lgt;

namespace {

struct Outcome {
  bool passed = false;
  std::string detail;
};

/// Tracks the largest deviation seen against an upper bound.
struct Worst {
  double limit;
  double value = 0.0;
  std::size_t samples = 0;
  void add(double d) {
    value = std::max(value, std::isnan(d) ? INFINITY : d);
    ++samples;
  }
  [[nodiscard]] bool ok() const { return samples > 0 && value < limit; }
  [[nodiscard]] std::string text(const char* what) const {
    char buf[160];
    std::snprintf(buf, sizeof buf, "%s %.3g < %.0e over %zu samples", what, value, limit, samples);
    return buf;
  }
};

Outcome combine(std::initializer_list<std::pair<const char*, const Worst*>> parts) {
  Outcome out{true, ""};
  for (const auto& [name, w] : parts) {
    out.passed = out.passed && w->ok();
    if (!out.detail.empty()) out.detail += "; ";
    out.detail += w->text(name);
  }
  return out;
}

StateVector sample(const LayoutPtr& layout, std::uint64_t seed, bool project) {
  auto s = random_state(layout, seed);
  return project ? gauge_project(s) : s;
}

Outcome wilson_z2() {
  const Lattice lat(3, 3);
  const auto layout = build_layout(FiniteGroup::cyclic(2), lat, false);
  const std::vector<Loop> loops = {rectangle_loop(lat, {0, 0}, 1, 1), rectangle_loop(lat, {0, 1}, 2, 1),
                                   rectangle_loop(lat, {0, 0}, 2, 2)};
  Worst w{1e-10};
  for (std::uint64_t k = 0; k < 50; ++k) {
    const auto psi = sample(layout, 100 + k, k < 25);
    for (const Loop& loop : loops) w.add(run_wilson(psi, loop, true).abs_diff);
  }
  return combine({{"|protocol - direct|", &w}});
}

Outcome wilson_s3() {
  const Lattice lat(2, 2);
  const auto layout = build_layout(FiniteGroup::symmetric3(), lat, false);
  const Loop loop = rectangle_loop(lat, {0, 0}, 1, 1);
  Worst w{1e-10};
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto psi = sample(layout, 200 + k, k % 2 == 0);
    w.add(run_wilson(psi, loop, true).abs_diff);
  }
  return combine({{"|protocol - direct|", &w}});
}

Outcome stator() {
  Worst z2{1e-12};
  Worst s3{1e-12};
  Worst control{INFINITY};
  double smallest_control = INFINITY;
  {
    const Lattice lat(3, 3);
    const auto layout = build_layout(FiniteGroup::cyclic(2), lat, false);
    const Loop loop = rectangle_loop(lat, {0, 0}, 2, 1);
    for (std::uint64_t k = 0; k < 10; ++k) z2.add(stator_residual(random_state(layout, 300 + k), loop));
  }
  {
    const Lattice lat(2, 2);
    const auto layout = build_layout(FiniteGroup::symmetric3(), lat, false);
    const Loop loop = rectangle_loop(lat, {0, 0}, 1, 1);
    for (std::uint64_t k = 0; k < 10; ++k) {
      const auto psi = random_state(layout, 310 + k);
      s3.add(stator_residual(psi, loop));
      const double c = stator_residual(psi, loop, GateOrder::Forward);
      control.add(c);
      smallest_control = std::min(smallest_control, c);
    }
  }
  Outcome out = combine({{"Z2 residual", &z2}, {"S3 residual", &s3}});
  char buf[96];
  std::snprintf(buf, sizeof buf, "; forward-order S3 residual min %.3g > 0.1", smallest_control);
  out.detail += buf;
  out.passed = out.passed && smallest_control > 0.1;
  return out;
}

Outcome mesons() {
  Worst w{1e-10};
  Worst s{1e-10};
  auto check = [&](const StateVector& psi, const Path& p) {
    const auto m = run_meson(psi, p, MesonOperator::M, true);
    const auto mp = run_meson(psi, p, MesonOperator::MPrime, true);
    w.add(m.abs_diff);
    w.add(mp.abs_diff);
    const Complex string = 0.5 * (m.value + Complex(0.0, 1.0) * mp.value);
    s.add(std::abs(string - meson_expectation(psi, p, MesonOperator::String)));
  };
  {
    const Lattice lat(3, 3);
    const auto layout = build_layout(FiniteGroup::cyclic(2), lat, false);
    const std::vector<Path> paths = {shortest_path(lat, {1, 1}, {2, 1}), shortest_path(lat, {0, 0}, {1, 1}),
                                     shortest_path(lat, {2, 2}, {0, 1}), shortest_path(lat, {0, 0}, {2, 2})};
    for (std::uint64_t k = 0; k < 50; ++k) {
      const auto psi = sample(layout, 400 + k, k < 25);
      for (const Path& p : paths) check(psi, p);
    }
  }
  {
    const Lattice lat(2, 2);
    const auto layout = build_layout(FiniteGroup::symmetric3(), lat, false);
    const Path p = shortest_path(lat, {0, 0}, {1, 1});
    for (std::uint64_t k = 0; k < 10; ++k) check(sample(layout, 450 + k, k % 2 == 0), p);
  }
  return combine({{"M and M'", &w}, {"string from two runs", &s}});
}

Outcome excitations() {
  Worst residual{1e-10};
  double smallest_overlap = INFINITY;
  auto record = [&](const ExcitationResult& r) {
    residual.add(r.residual.value_or(INFINITY));
    smallest_overlap = std::min(smallest_overlap, r.ancilla_overlap);
  };
  {
    const Lattice lat(3, 3);
    const auto layout = build_layout(FiniteGroup::cyclic(2), lat, false);
    const Loop loop = rectangle_loop(lat, {0, 1}, 2, 1);
    const Path path = shortest_path(lat, {2, 0}, {0, 1});
    for (std::uint64_t k = 0; k < 10; ++k) {
      const auto psi = random_state(layout, 500 + k);
      record(excite_wilson(psi, loop, true));
      for (auto op : {MesonOperator::M, MesonOperator::MPrime, MesonOperator::String}) {
        record(excite_meson(psi, path, op, true));
      }
    }
  }
  {
    const Lattice lat(2, 2);
    const auto layout = build_layout(FiniteGroup::symmetric3(), lat, false);
    const Loop loop = rectangle_loop(lat, {0, 0}, 1, 1);
    const Path path = shortest_path(lat, {1, 1}, {0, 0});
    for (std::uint64_t k = 0; k < 10; ++k) {
      const auto psi = random_state(layout, 520 + k);
      record(excite_wilson(psi, loop, true));
      for (auto op : {MesonOperator::M, MesonOperator::String}) record(excite_meson(psi, path, op, true));
    }
  }
  Outcome out = combine({{"state residual", &residual}});
  char buf[96];
  std::snprintf(buf, sizeof buf, "; ancilla overlap min 1 - %.3g", 1.0 - smallest_overlap);
  out.detail += buf;
  out.passed = out.passed && smallest_overlap > 1.0 - 1e-10;
  return out;
}

Outcome gauge_machinery() {
  Worst vacuum{1e-12};
  Worst projection{1e-12};
  Worst invariance{1e-10};
  struct System {
    FiniteGroup group;
    Lattice lattice;
    Path path;
  };
  const std::vector<System> systems = {
      {FiniteGroup::cyclic(2), Lattice(3, 3), shortest_path(Lattice(3, 3), {0, 0}, {2, 1})},
      {FiniteGroup::symmetric3(), Lattice(2, 2), shortest_path(Lattice(2, 2), {0, 0}, {1, 1})}};
  std::uint64_t seed = 600;
  for (const auto& sys : systems) {
    const auto layout = build_layout(sys.group, sys.lattice, false);
    vacuum.add(gauss_residual(prepare_state(layout, ProductStateSpec::staggered_vacuum(sys.lattice, sys.group.rep_dim()))));
    const Loop loop = rectangle_loop(sys.lattice, {0, 0}, 1, 1);
    for (int k = 0; k < 3; ++k) {
      const auto raw = random_state(layout, seed++);
      const auto p = gauge_project(raw);
      projection.add(distance(gauge_project(p), p));
      projection.add(gauss_residual(p));
      for (const auto& psi : {raw, p}) {
        const Complex w = wilson_expectation(psi, loop);
        const Complex m = meson_expectation(psi, sys.path, MesonOperator::String);
        for (std::size_t v = 0; v < sys.lattice.num_vertices(); ++v) {
          for (Element g = 1; g < sys.group.order(); ++g) {
            const auto moved = gauss_transformed(psi, sys.lattice.vertex_at(v), g);
            invariance.add(std::abs(wilson_expectation(moved, loop) - w));
            invariance.add(std::abs(meson_expectation(moved, sys.path, MesonOperator::String) - m));
          }
        }
      }
    }
  }
  return combine({{"vacuum Gauss residual", &vacuum},
                  {"projection", &projection},
                  {"transformed expectations", &invariance}});
}

Outcome z2_convention_check() {
  const Lattice lat(3, 3);
  const auto layout = build_layout(FiniteGroup::cyclic(2), lat, false);
  const std::vector<Loop> loops = {rectangle_loop(lat, {0, 0}, 1, 1), rectangle_loop(lat, {0, 0}, 2, 2)};
  const Path path = shortest_path(lat, {0, 2}, {2, 1});
  Worst w{1e-12};
  for (std::uint64_t k = 0; k < 20; ++k) {
    const auto psi = random_state(layout, 700 + k);
    const auto rotated = z2_convention::rotate_links(psi);
    for (const Loop& loop : loops) {
      w.add(std::abs(z2_convention::wilson(rotated, loop) - run_wilson(psi, loop, false).value));
    }
    for (auto op : {MesonOperator::M, MesonOperator::MPrime}) {
      w.add(std::abs(z2_convention::meson(rotated, path, op) - run_meson(psi, path, op, false).value.real()));
    }
  }
  return combine({{"|rotated - diagonal|", &w}});
}

Outcome hamiltonian() {
  const Lattice lat(2, 2);
  const auto layout = build_layout(FiniteGroup::cyclic(2), lat, false);
  ProductStateSpec spec;
  spec.default_link = LinkPreparation::of(0);
  const auto all_e = prepare_state(layout, spec);
  Couplings c;
  c.lambda_b = 1.0;
  Worst exact{1e-12};
  exact.add(std::abs(hamiltonian_expectation(all_e, c).magnetic + 2.0));
  exact.add(std::abs(magnetic_energy_protocol(all_e, 1.0) + 2.0));
  Worst agree{1e-10};
  const Lattice big(3, 3);
  const auto big_layout = build_layout(FiniteGroup::cyclic(2), big, false);
  for (std::uint64_t k = 0; k < 3; ++k) {
    const auto psi = random_state(big_layout, 800 + k);
    agree.add(std::abs(magnetic_energy_protocol(psi, 1.0) - hamiltonian_expectation(psi, c).magnetic));
  }
  return combine({{"|<H_B> + 2|", &exact}, {"protocol vs direct", &agree}});
}

Outcome determinism_and_algebra() {
  Outcome out{true, ""};
  {
    const auto layout = build_layout(FiniteGroup::symmetric3(), Lattice(2, 2), false);
    const auto a = random_state(layout, 42);
    const auto b = random_state(layout, 42);
    const bool same_state =
        std::memcmp(a.amplitudes().data(), b.amplitudes().data(), a.size() * sizeof(Complex)) == 0;
    const Loop loop = rectangle_loop(Lattice(2, 2), {0, 0}, 1, 1);
    const Complex va = run_wilson(a, loop, false).value;
    const Complex vb = run_wilson(b, loop, false).value;
    const bool same_value = std::memcmp(&va, &vb, sizeof(Complex)) == 0;

    const auto config = parse_scenario(
        "group = Z3\nlattice = 3x2\nstate = random\nseed = 5\ncrosscheck = true\n"
        "[request w]\nkind = wilson\nloop = rect:(0,0,2,1)\n"
        "[request m]\nkind = meson\npath = auto:(0,1)->(2,0)\nwhich = M'\n"
        "[request x]\nkind = meson\npath = auto:(2,1)->(1,0)\nwhich = string\nmode = excite\n");
    const std::regex timing("\"wall_seconds\": [0-9.eE+-]+");
    const auto strip = [&](const std::string& s) { return std::regex_replace(s, timing, ""); };
    const bool same_report =
        strip(report_json(run_scenario(config))) == strip(report_json(run_scenario(config)));
    out.passed = same_state && same_value && same_report;
    out.detail = std::string("states ") + (same_state ? "identical" : "differ") + ", readouts " +
                 (same_value ? "identical" : "differ") + ", reports " + (same_report ? "identical" : "differ");
  }
  {
    // Two matter multiplets of dimension 2: four modes.
    const auto layout = build_layout(FiniteGroup::symmetric3(), Lattice(2, 1), false);
    const std::size_t modes = layout->num_modes();
    std::vector<Matrix> a;
    for (std::size_t j = 0; j < modes; ++j) a.push_back(dense::annihilation(*layout, j));
    const auto n = static_cast<Eigen::Index>(layout->dim());
    double worst = 0.0;
    for (std::size_t i = 0; i < modes; ++i) {
      for (std::size_t j = 0; j < modes; ++j) {
        const Matrix adj = a[j].adjoint();
        const Matrix expect = i == j ? Matrix(Matrix::Identity(n, n)) : Matrix(Matrix::Zero(n, n));
        worst = std::max(worst, (a[i] * adj + adj * a[i] - expect).cwiseAbs().maxCoeff());
        worst = std::max(worst, (a[i] * a[j] + a[j] * a[i]).cwiseAbs().maxCoeff());
      }
    }
    // The in-place kernels agree with the matrices on every basis state.
    double kernel = 0.0;
    for (std::size_t b = 0; b < layout->dim(); ++b) {
      StateVector e(layout);
      e[b] = 1.0;
      for (std::size_t j = 0; j < modes; ++j) {
        const auto got = apply_annihilate(e, j);
        for (std::size_t r = 0; r < layout->dim(); ++r) {
          kernel = std::max(kernel, std::abs(got[r] - a[j](static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(b))));
        }
      }
    }
    const bool exact = modes == 4 && worst == 0.0 && kernel == 0.0;
    out.passed = out.passed && exact;
    char buf[128];
    std::snprintf(buf, sizeof buf, "; %zu modes, anticommutator deviation %g, kernel deviation %g", modes, worst,
                  kernel);
    out.detail += buf;
  }
  return out;
}

}  // namespace

int main() {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> checks = {
      {"1 Wilson protocol, Z2 3x3, 50 states x 3 loops", wilson_z2},
      {"2 Wilson protocol, S3 plaquette, 20 states", wilson_s3},
      {"3 stator relation and gate-order control", stator},
      {"4 meson protocol, Z2 3x3 and S3 2x2", mesons},
      {"5 excitation round trips", excitations},
      {"6 Gauss law, projection, invariance", gauge_machinery},
      {"7 Z2 sigma_x convention, 20 states", z2_convention_check},
      {"8 magnetic energy", hamiltonian},
      {"9 determinism and anticommutation", determinism_and_algebra},
  };
  int failed = 0;
  for (const auto& [name, fn] : checks) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome r;
    try {
      r = fn();
    } catch (const std::exception& e) {
      r = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  %-48s %s [%.1fs]\n", r.passed ? "PASS" : "FAIL", name, r.detail.c_str(), secs);
    std::fflush(stdout);
    failed += r.passed ? 0 : 1;
  }
  std::printf("%d of %zu acceptance checks failed\n", failed, checks.size());
  return failed == 0 ? 0 : 1;
}
