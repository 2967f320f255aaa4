import numpy as np
import pytest

from tfcorner import layers as ly
from tfcorner import trap as tp
from tfcorner.errors import ParameterError

EPS_SET = (0.05, 0.02, 0.01)


def stretched_residual_sup(ap, t_values, theta=0.0):
    ys = ap.fermi.inverse(t_values, np.full_like(t_values, theta))
    return ap.epsilon ** (4.0 / 3.0) * np.abs(ap.residual_at(ys))


class TestConstruction:
    def test_deep_interior_is_tf(self, approxes, tfdata0, lam0):
        ap, _ = approxes[0.02]
        y = np.array([tfdata0.R - 10 * ap.delta, 0.0])
        assert ap(y) == np.sqrt(ap.lambda_used - float(tfdata0.trap.W(y)))

    def test_far_outside_is_zero(self, approxes, tfdata0):
        ap, _ = approxes[0.02]
        y = np.array([tfdata0.R + 30 * ap.delta, 0.0])
        assert ap(y) == 0.0

    def test_boundary_value(self, approxes):
        ap, _ = approxes[0.02]
        td = ap.tfdata
        y = np.array([td.R, 0.0])
        expected = ap.epsilon ** (1 / 3) * td.beta[0] * ap.hm(0.0)
        assert abs(ap(y) - expected) <= 1e-10

    def test_positive_inside(self, approxes):
        ap, _ = approxes[0.02]
        t = np.linspace(-ap.fermi.delta0 * 0.9, 0.0, 200)
        assert np.all(ap.evaluate_section(0.0, t) > 0)

    def test_glue_pre_violation(self, tfdata0, hm):
        with pytest.raises(ParameterError):
            ly.build_u_ap(tfdata0, hm, 0.05, L=4.0)  # delta eps^{-2/3} < 16

    def test_needs_full_line_profile(self, tfdata0):
        from tfcorner import painleve as pl

        half = pl.solve_half_line_dirichlet(2.0, 25.0, 2000)
        with pytest.raises(ValueError):
            ly.build_u_ap(tfdata0, half, 0.02)

    def test_continuity_across_seams(self, approxes):
        ap, _ = approxes[0.02]
        beta = float(ap.tfdata.beta[0])
        e23 = ap.epsilon ** (2 / 3)
        for t_seam in (-2 * ap.L * e23 / beta, ap.delta / beta, 10 * ap.delta / beta,
                       20 * ap.delta / beta):
            left = ap.evaluate_section(0.0, np.array([t_seam - 1e-9]))[0]
            right = ap.evaluate_section(0.0, np.array([t_seam + 1e-9]))[0]
            assert abs(left - right) <= 1e-7


class TestFermi:
    def test_radial_roundtrip(self, approxes):
        ap, _ = approxes[0.02]
        for t, th in ((0.01, 1.0), (-0.02, 3.5), (0.1, 0.0)):
            y = ap.fermi.inverse(t, th)
            t2, th2 = ap.fermi.forward(y)
            assert abs(t2 - t) <= 1e-10 and abs(th2 - th) <= 1e-10

    def test_general_roundtrip(self, hm):
        trap = tp.Trap.harmonic(0.8)
        lam = tp.compute_lambda0(trap)
        td = tp.boundary_and_beta(trap, lam, 256)
        fm = ly.FermiMap(td)
        for t, th in ((0.02, 1.3), (-0.03, 4.0), (0.0, 0.5)):
            y = fm.inverse(t, th)
            t2, th2 = fm.forward(y)
            assert abs(t2 - t) <= 1e-10 and abs(th2 - th) <= 1e-10

    def test_inward_reach_guard(self, approxes):
        ap, _ = approxes[0.02]
        with pytest.raises(ValueError):
            ap.fermi.forward(np.array([1e-9, 0.0]))  # center is far beyond delta0


class TestResidual:
    def test_band_bounded_across_eps(self, approxes):
        ratios = []
        for eps in EPS_SET:
            ap, _ = approxes[eps]
            beta = float(ap.tfdata.beta[0])
            t = np.linspace(-ap.delta / beta, -1e-9, 250)
            s = t / eps ** (2 / 3)
            weight = eps * (np.abs(s) + 1.0) ** -0.5
            ratios.append(np.max(stretched_residual_sup(ap, t) / weight))
        assert max(ratios) / min(ratios) <= 3.0

    def test_interior_bounded_across_eps(self, approxes):
        ratios = []
        for eps in EPS_SET:
            ap, _ = approxes[eps]
            beta = float(ap.tfdata.beta[0])
            r = np.linspace(0.15, ap.tfdata.R - 2.2 * ap.delta / beta, 60)
            ys = np.stack([r, np.zeros_like(r)], axis=-1)
            res = eps ** (4 / 3) * np.abs(ap.residual_at(ys))
            ratios.append(np.max(res) / eps ** (4 / 3))
        assert max(ratios) / min(ratios) <= 3.0

    def test_exterior_band_bounded(self, approxes):
        ratios = []
        for eps in EPS_SET:
            ap, _ = approxes[eps]
            beta = float(ap.tfdata.beta[0])
            t = np.linspace(1e-9, 2 * ap.delta / beta, 150)
            ratios.append(np.max(stretched_residual_sup(ap, t)) / eps)
        assert max(ratios) / min(ratios) <= 3.0

    def test_far_exterior_exactly_zero(self, approxes, tfdata0):
        ap, _ = approxes[0.02]
        y = np.array([tfdata0.R + 30 * ap.delta, 0.0])
        assert ap.residual_at(y) == 0.0

    def test_stencil_domain_guard(self, approxes):
        ap, _ = approxes[0.02]
        with pytest.raises(ValueError):
            ap.residual_at(np.array([ap.tfdata.trap.r_far + 1.0, 0.0]))

    def test_curried_form(self, approxes, tfdata0):
        ap, _ = approxes[0.02]
        res = ly.residual(ap)
        y = np.array([tfdata0.R - 0.3, 0.0])
        assert res(y) == ap.residual_at(y)


class TestMatchingEstimates:
    def test_glue_consistency(self, approxes):
        # |u_out_tilde - u_in| <= C eps |s|^{3/2} over the glue band
        vals = []
        for eps in EPS_SET:
            ap, _ = approxes[eps]
            beta = float(ap.tfdata.beta[0])
            t = np.linspace(-ap.delta / beta, -ap.L * eps ** (2 / 3) / beta, 200)
            u_in, radicand, _ = ap.pieces(t, np.zeros_like(t))
            s = t / eps ** (2 / 3)
            vals.append(np.max(np.abs(np.sqrt(radicand) - u_in) / (eps * np.abs(s) ** 1.5)))
        assert max(vals) / min(vals) <= 3.0

    def test_outer_closeness(self, approxes, lam0):
        # |u_out_tilde - sqrt(a)| |s|^{5/2} / eps^{1/3} bounded
        vals = []
        for eps in EPS_SET:
            ap, _ = approxes[eps]
            td = ap.tfdata
            beta = float(td.beta[0])
            t = np.linspace(-2 * ap.delta / beta, -ap.L * eps ** (2 / 3) / beta, 200)
            _, radicand, _ = ap.pieces(t, np.zeros_like(t))
            y = ap.fermi.inverse(t, np.zeros_like(t))
            sqa = np.sqrt(np.maximum(ap.lambda_used - td.trap.W(y), 0.0))
            s = t / eps ** (2 / 3)
            vals.append(np.max(np.abs(np.sqrt(radicand) - sqa) * np.abs(s) ** 2.5
                               / eps ** (1 / 3)))
        assert max(vals) <= 10.0 * max(min(vals), 1e-3)

    def test_linearization_lower_bound(self, approxes):
        mins = []
        for eps in EPS_SET:
            ap, _ = approxes[eps]
            beta = float(ap.tfdata.beta[0])
            t = np.linspace(-ap.delta / beta, ap.delta / beta, 300)
            u = ap.evaluate_section(0.0, t)
            y = ap.fermi.inverse(t, np.zeros_like(t))
            a = ap.lambda_used - ap.tfdata.trap.W(y)
            mins.append(np.min(3 * u**2 - a) / eps ** (2 / 3))
        assert min(mins) > 0
        assert max(mins) / min(mins) <= 2.0


@pytest.fixture(scope="module")
def bundle0(tfdata0, hm):
    # closed-form targets hold for the geometry at the TF level lambda0
    # (the ladder bundles sit at the solved multipliers instead)
    return ly.predict(tfdata0, hm, 0.01)


class TestPredict:
    def test_energy_coefficients(self, bundle0):
        assert bundle0.c_minus2 == pytest.approx(0.265965, abs=1e-5)
        assert bundle0.c_log == pytest.approx(0.835543, abs=1e-5)

    def test_f0_profile(self, bundle0, lam0):
        assert bundle0.f0(0.0) == pytest.approx(lam0 / 4.0, abs=1e-6)
        R = bundle0.tfdata.R
        d = 1e-6
        slope = (bundle0.f0(R) - bundle0.f0(R - d)) / d
        assert slope == pytest.approx(-R / 2.0, abs=1e-3)
        assert bundle0.f0(R + 0.1) == 0.0

    def test_inner_prediction_matches_u_ap_on_boundary(self, approxes):
        ap, bundle = approxes[0.02]
        assert bundle.inner(0.0) == pytest.approx(
            ap.epsilon ** (1 / 3) * ap.tfdata.beta[0] * ap.hm(0.0), abs=1e-12)

    def test_f_pred_positive_near_boundary(self, approxes):
        _, bundle = approxes[0.01]
        R = bundle.tfdata.R
        vals = bundle.f_pred(np.linspace(R - 0.01, R + 0.02, 20))
        assert np.all(vals > 0)


class TestNonRadial:
    def test_anisotropic_build_and_boundary_value(self, hm):
        trap = tp.Trap.harmonic(0.8)
        lam = tp.compute_lambda0(trap)
        td = tp.boundary_and_beta(trap, lam, 256)
        ap = ly.build_u_ap(td, hm, 0.02)
        for th in (0.0, 1.0, 2.5, 4.4):
            y = ap.fermi.inverse(0.0, th)
            expected = 0.02 ** (1 / 3) * float(td.beta_at(th)) * ap.hm(0.0)
            assert abs(float(ap(y)) - expected) <= 1e-9

    def test_section_csv(self, approxes, tmp_path):
        ap, bundle = approxes[0.02]
        t = np.linspace(-0.1, 0.1, 51)
        path = tmp_path / "section.csv"
        ly.write_section_csv(ap, bundle, 0.0, t, path)
        data = np.loadtxt(path, delimiter=",", skiprows=1)
        assert data.shape == (51, 5)
