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

import json

import numpy as np
import pytest

import lgtstator as lgt


def test_group_rep_is_a_homomorphism():
    g = lgt.Group("S3")
    assert g.order == 6 and g.rep_dim == 2 and not g.is_abelian
    for a in range(6):
        for b in range(6):
            np.testing.assert_allclose(g.rep(g.mul(a, b)), g.rep(a) @ g.rep(b), atol=1e-15)


def test_wilson_protocol_matches_direct():
    g, lat = lgt.Group("Z3"), lgt.Lattice(2, 2)
    psi = lgt.random_state(g, lat, seed=5, gauge_invariant=True)
    assert lgt.gauss_residual(psi) < 1e-12
    r = lgt.run_wilson(psi, "rect:(0,0,1,1)")
    assert r["abs_diff"] < 1e-10
    assert r["gate_count"] == 4
    assert abs(r["value"] - lgt.wilson_expectation(psi, "rect:(0,0,1,1)")) < 1e-10


def test_meson_and_excitation():
    g, lat = lgt.Group("S3"), lgt.Lattice(2, 1)
    psi = lgt.random_state(g, lat, seed=2)
    for which in ("M", "M'", "string"):
        r = lgt.run_meson(psi, "auto:(0,0)->(1,0)", which)
        assert r["abs_diff"] < 1e-10
    e = lgt.excite_meson(psi, "auto:(1,0)->(0,0)", "string")
    assert e["residual"] < 1e-10
    assert e["ancilla_overlap"] > 1 - 1e-12


def test_amplitudes_roundtrip():
    psi = lgt.random_state(lgt.Group("Z2"), lgt.Lattice(2, 2), seed=1)
    amps = psi.amplitudes
    assert amps.shape == (psi.dim,)
    assert abs(np.linalg.norm(amps) - 1) < 1e-14
    flipped = psi.with_amplitudes(-amps)
    same = lgt.wilson_expectation(psi, "rect:(0,0,1,1)")
    assert abs(lgt.wilson_expectation(flipped, "rect:(0,0,1,1)") - same) < 1e-14
    assert abs(flipped.norm - 1) < 1e-14
    with pytest.raises(ValueError):
        psi.with_amplitudes(amps[:-1])


def test_schedule_text():
    text = lgt.compile_wilson(lgt.Group("Z2"), lgt.Lattice(2, 2), "rect:(0,0,1,1)", "excite")
    assert text.startswith("# lgtstator schedule v1")
    assert text.count("ENTANGLE") == 8
    with pytest.raises(ValueError):
        lgt.compile_meson(lgt.Group("Z2"), lgt.Lattice(2, 2), "auto:(0,0)->(1,1)", "string", "measure")


def test_scenario_and_errors():
    report = json.loads(
        lgt.run_scenario("group = Z2\nlattice = 2x2\nstate = random\ncrosscheck = true\n"
                         "[request p]\nkind = wilson\nloop = rect:(0,0,1,1)\n"))
    assert report["all_passed"] is True
    with pytest.raises(lgt.ConfigError):
        lgt.run_scenario("group = Z2\nbogus = 1\n")
    with pytest.raises(lgt.DimensionError):
        lgt.random_state(lgt.Group("S3"), lgt.Lattice(3, 3), seed=1)
    assert all(passed for _, passed, _ in lgt.selftest())
