import numpy as np
import pytest

from coupled_otto import analysis, oracles
from coupled_otto.cycle import CycleSpec, cycle_heats_batch, cycle_work_batch, run_cycle
from coupled_otto.exceptions import ParameterError
from coupled_otto.model import max_delta


class TestF:
    def test_symmetric_zero(self):
        assert analysis.f_function(1.0, 0.2, 0.4, 0.4, 2.0, 2.0) == 0

    def test_high_temperature_limit(self):
        # error of the linear form shrinks like beta^3
        errs = []
        for scale in (1e-1, 1e-2):
            b1, b2 = scale, 3 * scale
            f = analysis.f_function(1.0, 0.2, 0.3, 0.5, b1, b2)
            errs.append(abs(f - analysis.f_high_temperature(1.0, 0.2, 0.3, 0.5, b1, b2)))
        assert errs[1] / errs[0] == pytest.approx(1e-3, rel=0.05)

    def test_low_temperature_limit(self):
        for scale in (20.0, 40.0):
            b1, b2 = scale, 1.5 * scale
            f = analysis.f_function(1.0, 0.2, 0.3, 0.5, b1, b2)
            ref = analysis.f_low_temperature(1.0, 0.2, 0.3, 0.5, b1, b2)
            assert f == pytest.approx(ref, rel=1e-5)

    def test_monotonicity_in_delta2(self):
        d2 = np.linspace(0, 0.97, 2000)
        for b1 in (0.5, 1.0, 2.0):
            f = analysis.f_function(1.0, 0.2, 0.35, d2, b1, 3 * b1)
            assert np.all(np.diff(f) < 0)
        assert np.all(np.diff(np.hypot(d2, 0.2)) > 0)


class TestLimitConditions:
    def test_boundary_is_strict(self):
        low, high = analysis.limit_conditions(1.0, 0.2, 0.4, 0.4, 2.0, 2.0)
        assert not low and not high

    def test_necessity_examples(self, rng):
        n = 20000
        omega = rng.uniform(0.5, 2, n)
        j = rng.uniform(0.05, 0.9, n) * omega
        top = max_delta(omega, j) * 0.999
        d1, d2 = rng.uniform(0, 1, n) * top, rng.uniform(0, 1, n) * top
        b = np.sort(np.exp(rng.uniform(-2, 2, (n, 2))), axis=1)
        W = cycle_work_batch(omega, j, d1, d2, b[:, 0], b[:, 1])
        low, high = analysis.limit_conditions(omega, j, d1, d2, b[:, 0], b[:, 1])
        assert np.any(W > 0)
        assert np.all(low[(W > 0) & (d2 > d1)])
        assert np.all(high[(W > 0) & (d2 < d1)])


class TestEfficiencyBound:
    def test_vanishes_at_diagonal(self):
        for eps in (1e-6, -1e-6):
            assert abs(analysis.efficiency_bound(1.0, 0.2, 0.5, 0.5 + eps)) < 1e-5

    def test_undefined_on_diagonal(self):
        with pytest.raises(ParameterError):
            analysis.efficiency_bound(1.0, 0.2, 0.5, 0.5)

    @pytest.mark.parametrize("beta1", [5.0, 2.5, 0.1, 0.5])
    def test_fig3_dominance(self, beta1):
        d2 = np.linspace(0, max_delta(1.0, 0.2), 4001, endpoint=False)
        sweep = analysis.efficiency_sweep(1.0, 0.2, 0.5, beta1, 2 * beta1, d2)
        defined = ~np.isnan(sweep.eta)
        assert defined.any()
        assert np.all(sweep.eta_up[defined] - sweep.eta[defined] > 1e-12)
        assert np.all(0.5 - sweep.eta_up[defined] > 1e-12)
        lo, hi = sweep.work_range
        assert np.all((d2[sweep.positive_work] > lo) & (d2[sweep.positive_work] < hi))

    def test_fig3_height_order(self):
        d2 = np.linspace(0, max_delta(1.0, 0.2), 4001, endpoint=False)
        heights = [np.nanmax(analysis.efficiency_sweep(1.0, 0.2, 0.5, b, 2 * b, d2).eta)
                   for b in (5.0, 2.5, 0.1, 0.5)]
        assert heights == sorted(heights, reverse=True)

    def test_range_requires_hot_first(self):
        assert analysis.positive_work_range(1.0, 0.2, 0.5, 2.0, 1.0) is None


class TestTwoLevel:
    def test_equal_frequencies(self):
        assert analysis.two_level_oracle(0.4, 0.4, 1.0, 2.0)[0] == 0

    def test_matched_ratio(self):
        assert analysis.two_level_oracle(0.4, 0.2, 1.0, 2.0)[0] == 0

    def test_value(self):
        w, q1, eta = analysis.two_level_oracle(0.4, 0.25, 1.0, 2.0)
        assert w == pytest.approx(0.012325229250717726, abs=1e-16)
        assert q1 == pytest.approx(0.032867278001913934, abs=1e-16)
        assert eta == pytest.approx(1 - 0.25 / 0.4)
        w_ref, q_ref = oracles.two_level_otto(0.4, 0.25, 1.0, 2.0)
        assert w == pytest.approx(w_ref, abs=1e-15) and q1 == pytest.approx(q_ref, abs=1e-15)

    def test_rejects_nonpositive(self):
        with pytest.raises(ParameterError):
            analysis.two_level_oracle(0.0, 0.2, 1, 2)


class TestAppendixIdentities:
    def test_random(self, rng):
        for _ in range(1000):
            omega = rng.uniform(0.5, 2)
            j = rng.uniform(0.0, 0.9) * omega
            d1, d2 = np.sort(rng.uniform(0, 0.999, 2) * max_delta(omega, j))
            b1, b2 = np.exp(rng.uniform(-3, 3, 2))
            assert analysis.appendix_identity_check(omega, j, d1, d2, b1, b2) <= 1e-12
            assert analysis.appendix_identity_check(omega, j, d1, d2, b1, b1) <= 1e-12

    def test_degenerate(self):
        assert analysis.appendix_identity_check(1.0, 0.2, 0.4, 0.4, 1.0, 3.0) <= 1e-15

    def test_wrong_order(self):
        with pytest.raises(ParameterError):
            analysis.appendix_identity_check(1.0, 0.2, 0.6, 0.4, 1.0, 3.0)

    def test_middle_levels(self, rng):
        r = analysis.middle_levels_oracle(1.0, 0.2, 0.4, 0.4, 1.0, 3.0)
        assert r.W_middle == 0
        for _ in range(500):
            omega = rng.uniform(0.5, 2)
            j = rng.uniform(0.05, 0.9) * omega
            d2, d1 = np.sort(rng.uniform(0, 0.999, 2) * max_delta(omega, j))
            b1, b2 = np.sort(np.exp(rng.uniform(-3, 3, 2)))
            rep = analysis.middle_levels_oracle(omega, j, d1, d2, b1, b2)
            assert rep.residual <= 1e-12
            if rep.W_middle <= 0:
                assert rep.W_closed_form <= 0

    def test_outer_weight_grows_with_beta(self):
        betas = np.linspace(0.01, 20, 500)
        for d in (0.0, 0.3, 0.99):
            assert np.all(np.diff(analysis.outer_weight(1.0, d, betas)) > 0)


def _uncoupled_f(delta1, delta2, beta1, beta2, omega=1.0):
    # J = 0: p_- - p_+ = pA - pB with independent Fermi factors of each qubit.
    def gap(delta, beta):
        pa = 1.0 / (1.0 + np.exp(beta * (omega - delta)))
        pb = 1.0 / (1.0 + np.exp(beta * (omega + delta)))
        return pa - pb

    return gap(delta1, beta1) - gap(delta2, beta2)


class TestWindowScan:
    def test_structure(self):
        g = analysis.window_scan(1.0, 0.2, 1.0, 3.0, 50)
        assert g.W.shape == (50, 50)
        np.testing.assert_array_equal(np.diag(g.W), 0.0)
        np.testing.assert_array_equal(g.W, g.f * g.d2_minus_d1)
        nz = g.W != 0
        np.testing.assert_array_equal(g.sign[nz], (np.sign(g.f) * np.sign(g.d2_minus_d1))[nz])

    def test_grid_too_small(self):
        with pytest.raises(ParameterError):
            analysis.window_scan(1.0, 0.2, 1.0, 3.0, 1)

    def test_boundary_is_root(self):
        g = analysis.window_scan(1.0, 0.2, 1.0, 3.0, 40)
        ok = ~np.isnan(g.boundary)
        f_at = analysis.f_function(1.0, 0.2, g.delta1[ok], g.boundary[ok], 1.0, 3.0)
        slope = np.abs(analysis.f_function(1.0, 0.2, g.delta1[ok], g.boundary[ok] + 1e-6, 1.0, 3.0) - f_at) / 1e-6
        assert np.all(np.abs(f_at) <= slope * 1e-10 + 1e-15)

    def test_uncoupled_boundary_matches_fermi_construction(self):
        g = analysis.window_scan(1.0, 0.0, 1.0, 3.0, 30)
        fine = np.linspace(0, 1, 200001)[:-1]
        for d1, edge in zip(g.delta1, g.boundary):
            vals = _uncoupled_f(d1, fine, 1.0, 3.0)
            cross = np.flatnonzero(np.diff(np.sign(vals)) != 0)
            if np.isnan(edge):
                assert cross.size == 0
            else:
                assert cross.size == 1
                i = cross[0]
                root = fine[i] - vals[i] * (fine[i + 1] - fine[i]) / (vals[i + 1] - vals[i])
                assert edge == pytest.approx(root, abs=1e-8)

    def test_window_membership_matches_grid(self):
        g = analysis.window_scan(1.0, 0.2, 1.0, 3.0, 60)
        d1, d2 = np.meshgrid(g.delta1, g.delta2, indexing="ij")
        inside = g.in_window(d1.ravel(), d2.ravel()).reshape(d1.shape)
        np.testing.assert_array_equal(inside, g.W > 0)


def test_batch_matches_run_cycle(rng):
    for _ in range(50):
        omega = rng.uniform(0.5, 2)
        j = rng.uniform(0, 0.9) * omega
        d1, d2 = rng.uniform(0, 0.999, 2) * max_delta(omega, j)
        b1, b2 = np.exp(rng.uniform(-2, 2, 2))
        _, ex = run_cycle(CycleSpec(omega, d1, d2, j, b1, b2, 5))
        assert float(cycle_work_batch(omega, j, d1, d2, b1, b2)) == pytest.approx(ex.W, abs=1e-15)
        q1, q2 = cycle_heats_batch(omega, j, d1, d2, b1, b2)
        assert (float(q1), float(q2)) == pytest.approx((ex.Q1, ex.Q2), abs=1e-15)
