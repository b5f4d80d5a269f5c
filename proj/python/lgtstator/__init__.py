# Copyright 2026 The lgtstator Authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""Exact simulation of ancilla-based measurements in finite-group lattice gauge theories."""

from ._core import (
    ConfigError,
    DimensionError,
    Group,
    Lattice,
    State,
    compile_meson,
    compile_wilson,
    excite_meson,
    excite_wilson,
    gauge_project,
    gauss_residual,
    gauss_transformed,
    meson_expectation,
    random_state,
    run_meson,
    run_scenario,
    run_wilson,
    selftest,
    staggered_vacuum,
    stator_residual,
    wilson_expectation,
)

__version__ = "0.1.0"

__all__ = [
    "ConfigError",
    "DimensionError",
    "Group",
    "Lattice",
    "State",
    "compile_meson",
    "compile_wilson",
    "excite_meson",
    "excite_wilson",
    "gauge_project",
    "gauss_residual",
    "gauss_transformed",
    "meson_expectation",
    "random_state",
    "run_meson",
    "run_scenario",
    "run_wilson",
    "selftest",
    "staggered_vacuum",
    "stator_residual",
    "wilson_expectation",
]
