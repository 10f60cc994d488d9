import numpy as np
import pytest

import hfs
from hfs import identities
from hfs.identities import (GridNotSymmetric, check_evenness,
                            check_mirror_relations, check_raman_steady,
                            check_raman_steady_table,
                            check_raman_symmetric_form, corrupt_coherence,
                            two_level_oracle_check, two_level_reduction,
                            two_level_steady, write_report_json)
from hfs.sweep import SweepSpec, run_sweep


@pytest.fixture(scope="module")
def params():
    return hfs.sodium_d1()


@pytest.fixture(scope="module")
def table(params):
    spec = SweepSpec.paper_grid(params, count=201, span_delta_u=2.0,
                                omegas=(5.0,))
    return run_sweep(params, spec)


class TestMirrorRelations:

    def test_hold_on_symmetric_sweep(self, table):
        rep = check_mirror_relations(table, 5.0)
        assert rep.passed
        assert rep.max_residual < 1e-10
        assert rep.n_points == 4 * 101

    def test_detector_catches_corruption(self, table):
        bad = corrupt_coherence(table, "31", 17)
        rep = check_mirror_relations(bad, 5.0)
        assert not rep.passed

    def test_asymmetric_grid_rejected(self, params):
        spec = SweepSpec.linear(-1.0, 2.0, 7, omegas=(5.0,))
        t = run_sweep(params, spec)
        with pytest.raises(GridNotSymmetric):
            check_mirror_relations(t, 5.0)


class TestRamanSteady:

    def test_single_point(self, params):
        drive = hfs.Drive(omega=5.0, delta_c=0.3 * params.delta_u)
        rho = hfs.solve_selfconsistent(params, drive).rho
        rep = check_raman_steady(params, drive, rho)
        assert rep.passed
        assert rep.max_residual < 1e-11

    def test_table_wide(self, params, table):
        rep = check_raman_steady_table(params, table, 5.0)
        assert rep.passed
        assert rep.n_points == 201

    def test_symmetric_form(self, params, table):
        rep = check_raman_symmetric_form(params, table, 5.0)
        assert rep.passed
        assert rep.max_residual < 1e-10

    def test_violated_by_random_state(self, params):
        rng = np.random.default_rng(5)
        m = rng.normal(size=(4, 4)) + 1j * rng.normal(size=(4, 4))
        rho = m @ m.conj().T
        rho /= np.trace(rho).real
        rep = check_raman_steady(params, hfs.Drive(omega=5.0), rho)
        assert not rep.passed


class TestEvenness:

    def test_raman_spectra_even(self, table):
        rep = check_evenness(table, 5.0)
        assert rep.passed
        assert rep.max_residual < 1e-10

    def test_detector_catches_corruption(self, table):
        bad = corrupt_coherence(table, "21", 3)
        assert not check_evenness(bad, 5.0).passed


class TestTwoLevel:

    def test_closed_form_values(self):
        r33, r31 = two_level_steady(1.0, 0.0)
        assert r33 == pytest.approx(4.0 / 9.0, abs=1e-15)
        assert r31.real == 0.0
        assert r31.imag == pytest.approx(-2.0 / 9.0, abs=1e-15)

    def test_weak_field_linear_response(self):
        # first order in omega: rho31 ~ omega (delta + i gamma/2)^-1 * ...
        om, de = 1e-4, 3.0
        _, r31 = two_level_steady(om, de)
        expect = om / (de + 0.5j)   # = om (de - i/2)/(de^2 + 1/4)
        assert r31 == pytest.approx(expect, rel=1e-6)

    def test_reduction_params(self):
        p = two_level_reduction()
        assert p.gamma31 == 1.0
        assert p.gamma32 == p.gamma41 == p.gamma42 == 0.0
        assert p.mu14 == p.mu23 == p.mu24 == 0.0
        assert p.mu13 == 1.0

    def test_solver_matches_oracle_grid(self):
        rep = two_level_oracle_check(
            omegas=(0.25, 1.0, 5.0), deltas=(-4.0, 0.0, 2.0))
        assert rep.passed
        assert rep.max_residual < 1e-12


def test_report_serialization(tmp_path, params):
    drive = hfs.Drive(omega=5.0, delta_c=10.0)
    rho = hfs.solve_selfconsistent(params, drive).rho
    rep = check_raman_steady(params, drive, rho)
    path = tmp_path / "reports.json"
    write_report_json([rep], path)
    import json
    data = json.loads(path.read_text())
    assert data[0]["identity"] == "raman_steady"
    assert data[0]["pass"] is True
    assert "passed" not in data[0]
