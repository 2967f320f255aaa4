import numpy as np
import pytest

from tfcorner import painleve as pl
from tfcorner.errors import TruncationError

from oracles import shoot_full_line_v0

# frozen reference values, measured once at n = 4000 on [-30, 15] and stable
# to the shown digits under grid doubling
GOLDEN_POTENTIAL_MIN = 0.77697
GOLDEN_MU1 = 1.51854
GOLDEN_HALF_TAIL15 = -0.1252


class TestFullLine:
    def test_monotone_decreasing(self, hm):
        assert np.all(hm.v_x < 0)

    def test_left_tail_coefficient(self, hm):
        val = (hm(-20.0) - np.sqrt(20.0)) * 20.0**2.5
        assert val == pytest.approx(-0.125, rel=0.05)

    def test_left_tail_derivative(self, hm):
        assert hm.derivative(-20.0) + 0.5 * 20.0**-0.5 == pytest.approx(0.0, abs=1e-4)

    def test_shooting_oracle_agreement(self, hm):
        v0 = shoot_full_line_v0()
        assert abs(hm(0.0) - v0) <= 1e-7

    def test_residual_and_positivity(self, hm):
        assert hm.residual_sup <= 1e-9
        assert np.all(hm.v > 0)

    def test_grid_refinement_v0(self, hm):
        fine = pl.solve_full_line(2.0, -30.0, 15.0, 8000)
        assert abs(fine(0.0) - hm(0.0)) <= 1e-8

    def test_tail_band_property(self, hm):
        mask = hm.grid <= -5.0
        gap = hm.v[mask] - np.sqrt(-hm.grid[mask])
        assert np.all(gap < 0)
        C = np.max(np.abs(gap) * np.abs(hm.grid[mask]) ** 2.5)
        fine = pl.solve_full_line(2.0, -30.0, 15.0, 6000)
        mask2 = fine.grid <= -5.0
        C2 = np.max(np.abs(fine.v[mask2] - np.sqrt(-fine.grid[mask2]))
                    * np.abs(fine.grid[mask2]) ** 2.5)
        assert C == pytest.approx(C2, rel=1e-3)

    def test_between_lower_and_upper_profiles(self, hm):
        # zero-extended mirrored half-line solution is a lower bound
        # everywhere; the algebraic profile bounds from above away from the
        # corner (nearer the turning point the upper solution carries a bump,
        # and v - sqrt(-x) indeed turns positive around x = -0.6)
        lower = pl.solve_half_line_dirichlet(2.0, 30.0, 3000)
        left = hm.grid <= 0.0
        assert np.all(hm.v[left] >= lower(-hm.grid[left]) - 1e-9)
        assert np.all(hm.v[~left] >= 0.0)
        away = hm.grid <= -1.0
        assert np.all(hm.v[away] <= (-hm.grid[away]) ** 0.5)

    def test_preconditions(self):
        with pytest.raises(ValueError):
            pl.solve_full_line(0.9, -30.0, 15.0, 4000)
        with pytest.raises(ValueError):
            pl.solve_full_line(2.0, -10.0, 15.0, 4000)
        with pytest.raises(ValueError):
            pl.solve_full_line(2.0, -30.0, 5.0, 4000)
        with pytest.raises(ValueError):
            pl.solve_full_line(2.0, -30.0, 15.0, 500)

    def test_truncation_gate_for_general_p(self):
        # without the tail correction the closure defect at -15 is too large
        with pytest.raises(TruncationError):
            pl.solve_full_line(3.0, -15.0, 15.0, 2000)

    def test_general_power(self):
        sol = pl.solve_full_line(3.0, -80.0, 10.0, 4000)
        assert sol.residual_sup <= 1e-9
        assert np.all(sol.v > 0)
        # algebraic left behavior
        assert sol(-60.0) == pytest.approx(60.0 ** (1 / 3), rel=1e-3)


class TestHalfLine:
    def test_dirichlet_contract(self):
        sol = pl.solve_half_line_dirichlet(2.0, 25.0, 2000)
        assert sol.v[0] == 0.0  # imposed exactly
        assert sol.v_x[0] > 0
        assert np.all(sol.v_x > 0)
        inner = (sol.grid > 0) & (sol.grid < 25.0)
        assert np.all(sol.v[inner] < sol.grid[inner] ** 0.5)
        assert sol.residual_sup <= 1e-9

    def test_dirichlet_tail_coefficient(self):
        sol = pl.solve_half_line_dirichlet(2.0, 25.0, 2000)
        val = (sol(15.0) - np.sqrt(15.0)) * 15.0**2.5
        assert abs(val) <= 1.0
        assert val == pytest.approx(GOLDEN_HALF_TAIL15, abs=2e-3)

    def test_neumann_contract(self):
        sol = pl.solve_half_line_neumann(2.0, 25.0, 2000)
        assert sol.v_x[0] == pytest.approx(0.0, abs=1e-12)
        assert np.all(sol.v > 0)
        assert sol(15.0) - np.sqrt(15.0) == pytest.approx(0.0, abs=1e-2)

    def test_neumann_uniqueness_under_perturbed_start(self):
        base = pl.solve_half_line_neumann(2.0, 25.0, 2000)
        again = pl.solve_half_line_neumann(2.0, 25.0, 2000, initial_guess=1.1 * base.v)
        assert np.max(np.abs(again.v - base.v)) <= 1e-8

    def test_nondegeneracy_across_refinements(self):
        for n in (2000, 4000):
            sol = pl.solve_half_line_dirichlet(2.0, 25.0, n)
            spec = pl.linearization(sol)
            assert abs(spec.mu1) >= 1e-3

    def test_preconditions(self):
        with pytest.raises(ValueError):
            pl.solve_half_line_dirichlet(2.0, 10.0, 2000)


class TestDerivedQuantities:
    def test_identity_defect(self, hm):
        assert abs(pl.hm_identity_defect(hm)) <= 1e-6

    def test_identity_domain_stability(self, hm):
        wide = pl.solve_full_line(2.0, -60.0, 20.0, 6000)
        assert abs(pl.hm_identity_defect(wide) - pl.hm_identity_defect(hm)) <= 1e-6

    def test_identity_detects_perturbation(self, hm):
        bump = 0.01 * np.exp(-hm.grid**2)
        dbump = -2.0 * hm.grid * bump
        perturbed = pl.ProfileSolution(
            hm.p, hm.orientation, hm.grid.copy(), hm.v + bump, hm.v_x + dbump,
            hm.closure_left, hm.closure_right, hm.residual_sup, hm.newton_iters)
        assert abs(pl.hm_identity_defect(perturbed)) >= 1e-3

    def test_vx_log_constant_converges(self, hm):
        assert abs(pl.vx_log_constant(hm, 20.0) - pl.vx_log_constant(hm, 10.0)) <= 2e-2

    def test_vx_small_on_decaying_side(self, hm):
        assert abs(hm.derivative(5.0)) <= 1e-3

    def test_vx_log_constant_synthetic(self):
        # v_x = -1/2 (-x)^{-1/2} on a grid ending at -1: the lower-limit
        # constant is exactly zero, so the result vanishes for every X
        grid = np.linspace(-40.0, -1.0, 4000)
        vx = -0.5 * (-grid) ** -0.5
        synthetic = pl.ProfileSolution(2.0, pl.FULL_LINE, grid, np.sqrt(-grid), vx,
                                       pl.LEFT_ALGEBRAIC, pl.RIGHT_AIRY_ROBIN, 0.0, 0)
        for X in (5.0, 10.0, 20.0):
            assert pl.vx_log_constant(synthetic, X) == pytest.approx(0.0, abs=1e-9)

    def test_vx_log_constant_truncation_error(self, hm):
        with pytest.raises(TruncationError):
            pl.vx_log_constant(hm, 40.0)

    def test_connection_ratio_plateau(self, hm):
        from tfcorner.specfun import airy

        cr = pl.connection_ratio(hm)
        assert cr.converged and cr.value > 0
        r4 = hm(4.0) / airy(4.0).ai
        r6 = hm(6.0) / airy(6.0).ai
        assert abs(r4 - r6) <= 1e-3 * abs(r4)

    def test_connection_ratio_matches_sqrt2_not_1(self, hm):
        # the plateau sits at sqrt(2): rescaling v = sqrt(2) q maps the
        # equation onto the Airy-normalized profile q'' = 2q^3 + xq, q ~ Ai
        cr = pl.connection_ratio(hm)
        assert cr.value == pytest.approx(np.sqrt(2.0), abs=1e-3)
        assert abs(cr.value - 1.0) > 0.4

    def test_tail_mass_identity(self, hm):
        T = pl.tail_mass(hm)
        expected = hm.derivative(0.0) ** 2 - hm(0.0) ** 4 / 2.0
        assert T(0.0) == pytest.approx(expected, abs=1e-8)
        assert T(hm.grid[-1]) >= 0.0


class TestLinearization:
    def test_full_line_spectrum(self, hm):
        spec = pl.linearization(hm)
        assert spec.potential_min > 0
        assert spec.potential_min == pytest.approx(GOLDEN_POTENTIAL_MIN, abs=1e-3)
        assert spec.mu1 > 0
        assert spec.mu1 == pytest.approx(GOLDEN_MU1, abs=1e-3)
        assert spec.tail_monotone

    def test_principal_eigenfunction_sign(self, hm):
        spec = pl.linearization(hm)
        interior = spec.psi1[1:-1]
        body = interior[np.abs(interior) > 1e-12]
        assert np.all(body > 0) or np.all(body < 0)

    def test_stability_under_doubling(self, hm):
        fine = pl.solve_full_line(2.0, -30.0, 15.0, 8000)
        a, b = pl.linearization(hm), pl.linearization(fine)
        assert abs(a.potential_min - b.potential_min) <= 1e-4
        assert abs(a.mu1 - b.mu1) <= 1e-4

    def test_half_line_potential_dips(self):
        sol = pl.solve_half_line_dirichlet(2.0, 25.0, 2000)
        spec = pl.linearization(sol)
        assert spec.potential_min < 0  # dips are allowed for half-line problems
        assert spec.mu1 > 0


def test_profile_csv_roundtrip(hm, tmp_path):
    path = tmp_path / "hm.csv"
    pl.write_profile_csv(hm, path)
    back = pl.read_profile_csv(path)
    assert np.array_equal(back.grid, hm.grid)
    assert np.array_equal(back.v, hm.v)
    assert np.array_equal(back.v_x, hm.v_x)
