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

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <algorithm>

#include "lgt/gauge_ops.hpp"
#include "lgt/oracle.hpp"
#include "lgt/protocols.hpp"
#include "lgt/scenario.hpp"

namespace py = pybind11;
using namespace pybind11::literals;
using namespace lgt;

namespace {

py::array_t<Complex> to_numpy(std::span<const Complex> values) {
  py::array_t<Complex> out(static_cast<py::ssize_t>(values.size()));
  std::copy(values.begin(), values.end(), out.mutable_data());
  return out;
}

py::array_t<Complex> matrix_to_numpy(const Matrix& m) {
  py::array_t<Complex> out({m.rows(), m.cols()});
  auto view = out.mutable_unchecked<2>();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    for (Eigen::Index c = 0; c < m.cols(); ++c) view(r, c) = m(r, c);
  }
  return out;
}

StateVector with_amplitudes(const StateVector& like, const py::array_t<Complex, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1 || static_cast<std::size_t>(a.shape(0)) != like.size()) {
    throw std::invalid_argument("expected a vector of length " + std::to_string(like.size()));
  }
  return StateVector(like.layout_ptr(), std::vector<Complex>(a.data(), a.data() + a.shape(0)));
}

py::dict expectation_dict(const ExpectationResult& r) {
  py::dict d("value"_a = r.value, "abs_diff"_a = r.abs_diff, "gate_count"_a = r.gate_count,
             "wall_seconds"_a = r.wall_seconds, "norm"_a = r.norm);
  d["oracle"] = r.oracle ? py::cast(*r.oracle) : py::none();
  return d;
}

py::dict excitation_dict(const ExcitationResult& r) {
  py::dict d("physical"_a = r.physical, "norm"_a = r.norm, "ancilla_overlap"_a = r.ancilla_overlap,
             "gate_count"_a = r.gate_count, "wall_seconds"_a = r.wall_seconds);
  d["residual"] = r.residual ? py::cast(*r.residual) : py::none();
  return d;
}

const Lattice& lattice_of(const StateVector& s) { return s.layout().lattice(); }

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Exact simulation of ancilla-based measurement protocols in finite-group lattice gauge theories";

  py::register_exception<DimensionError>(m, "DimensionError", PyExc_MemoryError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);

  py::class_<FiniteGroup>(m, "Group")
      .def(py::init([](const std::string& label) { return FiniteGroup::from_label(label); }), "label"_a)
      .def_property_readonly("order", &FiniteGroup::order)
      .def_property_readonly("rep_dim", &FiniteGroup::rep_dim)
      .def_property_readonly("name", &FiniteGroup::name)
      .def_property_readonly("label", &FiniteGroup::label)
      .def_property_readonly("is_abelian", &FiniteGroup::is_abelian)
      .def("mul", &FiniteGroup::mul)
      .def("inv", &FiniteGroup::inv)
      .def("rep", [](const FiniteGroup& g, Element a) { return matrix_to_numpy(g.rep(a)); })
      .def("__repr__", [](const FiniteGroup& g) { return "Group('" + g.label() + "')"; });

  py::class_<Lattice>(m, "Lattice")
      .def(py::init([](int lx, int ly, const std::string& boundary) {
             return Lattice(lx, ly, parse_boundary(boundary));
           }),
           "lx"_a, "ly"_a, "boundary"_a = "open")
      .def_property_readonly("lx", &Lattice::lx)
      .def_property_readonly("ly", &Lattice::ly)
      .def_property_readonly("num_links", &Lattice::num_links)
      .def_property_readonly("num_vertices", &Lattice::num_vertices);

  py::class_<StateVector>(m, "State")
      .def_property_readonly("dim", &StateVector::size)
      .def_property_readonly("norm", &StateVector::norm)
      .def_property_readonly("amplitudes", [](const StateVector& s) { return to_numpy(s.amplitudes()); })
      .def("with_amplitudes", &with_amplitudes, "amplitudes"_a)
      .def("__len__", &StateVector::size);

  m.def(
      "random_state",
      [](const FiniteGroup& g, const Lattice& lat, std::uint64_t seed, bool gauge_invariant) {
        auto s = random_state(build_layout(g, lat, false), seed);
        return gauge_invariant ? gauge_project(s) : s;
      },
      "group"_a, "lattice"_a, "seed"_a, "gauge_invariant"_a = false);
  m.def(
      "staggered_vacuum",
      [](const FiniteGroup& g, const Lattice& lat) {
        return prepare_state(build_layout(g, lat, false), ProductStateSpec::staggered_vacuum(lat, g.rep_dim()));
      },
      "group"_a, "lattice"_a);

  m.def("gauge_project", &gauge_project, "state"_a);
  m.def("gauss_residual", &gauss_residual, "state"_a);
  m.def("gauss_transformed",
        [](const StateVector& s, int x, int y, Element g) { return gauss_transformed(s, Vertex{x, y}, g); },
        "state"_a, "x"_a, "y"_a, "element"_a);

  m.def(
      "wilson_expectation",
      [](const StateVector& s, const std::string& loop) {
        return wilson_expectation(s, parse_loop_spec(lattice_of(s), loop));
      },
      "state"_a, "loop"_a);
  m.def(
      "meson_expectation",
      [](const StateVector& s, const std::string& path, const std::string& which) {
        return meson_expectation(s, parse_path_spec(lattice_of(s), path), parse_meson_operator(which));
      },
      "state"_a, "path"_a, "which"_a = "M");

  m.def(
      "run_wilson",
      [](const StateVector& s, const std::string& loop, bool crosscheck) {
        return expectation_dict(run_wilson(s, parse_loop_spec(lattice_of(s), loop), crosscheck));
      },
      "state"_a, "loop"_a, "crosscheck"_a = true);
  m.def(
      "run_meson",
      [](const StateVector& s, const std::string& path, const std::string& which, bool crosscheck) {
        return expectation_dict(
            run_meson(s, parse_path_spec(lattice_of(s), path), parse_meson_operator(which), crosscheck));
      },
      "state"_a, "path"_a, "which"_a = "M", "crosscheck"_a = true);
  m.def(
      "excite_wilson",
      [](const StateVector& s, const std::string& loop, bool crosscheck) {
        return excitation_dict(excite_wilson(s, parse_loop_spec(lattice_of(s), loop), crosscheck));
      },
      "state"_a, "loop"_a, "crosscheck"_a = true);
  m.def(
      "excite_meson",
      [](const StateVector& s, const std::string& path, const std::string& which, bool crosscheck) {
        return excitation_dict(
            excite_meson(s, parse_path_spec(lattice_of(s), path), parse_meson_operator(which), crosscheck));
      },
      "state"_a, "path"_a, "which"_a = "M", "crosscheck"_a = true);
  m.def(
      "stator_residual",
      [](const StateVector& s, const std::string& loop, bool forward) {
        return stator_residual(s, parse_loop_spec(lattice_of(s), loop),
                               forward ? GateOrder::Forward : GateOrder::Reverse);
      },
      "state"_a, "loop"_a, "forward_order"_a = false);

  m.def(
      "compile_wilson",
      [](const FiniteGroup& g, const Lattice& lat, const std::string& loop, const std::string& mode) {
        return format_schedule(compile_wilson(g, lat, parse_loop_spec(lat, loop), parse_protocol_mode(mode)));
      },
      "group"_a, "lattice"_a, "loop"_a, "mode"_a = "measure");
  m.def(
      "compile_meson",
      [](const FiniteGroup& g, const Lattice& lat, const std::string& path, const std::string& which,
         const std::string& mode) {
        return format_schedule(compile_meson(g, lat, parse_path_spec(lat, path), parse_meson_operator(which),
                                             parse_protocol_mode(mode)));
      },
      "group"_a, "lattice"_a, "path"_a, "which"_a = "M", "mode"_a = "measure");

  m.def(
      "run_scenario",
      [](const std::string& text, const std::string& format) {
        const auto report = run_scenario(parse_scenario(text));
        return format == "csv" ? report_csv(report) : report_json(report);
      },
      "text"_a, "format"_a = "json");
  m.def("selftest", [] {
    std::vector<std::tuple<std::string, bool, std::string>> out;
    for (const auto& r : run_selftest()) out.emplace_back(r.name, r.passed, r.detail);
    return out;
  });
}
