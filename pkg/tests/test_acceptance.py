"""Acceptance criteria, one test per criterion, each printing a PASS/FAIL
line with the measured value next to its stated tolerance."""

import time

import numpy as np

from tfcorner import gpsolve as gp
from tfcorner import layers as ly
from tfcorner import painleve as pl
from tfcorner import trap as tp
from tfcorner import verify as vf
from tfcorner.cli import main as cli_main

from oracles import shoot_full_line_v0

LADDER = (0.05, 0.03, 0.02, 0.01)


def report(num, name, passed, detail):
    print(f"ACCEPTANCE {num:02d} {name}: {'PASS' if passed else 'FAIL'} ({detail})")
    assert passed, f"criterion {num} ({name}): {detail}"


def test_01_painleve_identity():
    t0 = time.perf_counter()
    sol = pl.solve_full_line(2.0, -30.0, 15.0, 4000)
    defect = pl.hm_identity_defect(sol)
    elapsed = time.perf_counter() - t0
    ok = abs(defect) <= 1e-6 and elapsed <= 5.0
    report(1, "painleve identity", ok,
           f"|defect| = {abs(defect):.2e} <= 1e-6, runtime {elapsed:.2f}s <= 5s")


def test_02_left_tail_coefficient(hm):
    val = (hm(-20.0) - np.sqrt(20.0)) * 20.0**2.5
    ok = abs(val + 0.125) <= 0.05 * 0.125
    report(2, "left-tail coefficient", ok, f"value {val:.5f} vs -0.125 +- 5%")


def test_03_linearized_potential_and_spectrum(hm):
    a = pl.linearization(hm)
    fine = pl.solve_full_line(2.0, -30.0, 15.0, 8000)
    b = pl.linearization(fine)
    ok = (a.potential_min > 0 and a.mu1 > 0
          and abs(a.potential_min - b.potential_min) <= 1e-4
          and abs(a.mu1 - b.mu1) <= 1e-4)
    report(3, "linearized positivity", ok,
           f"min(3V^2+x) = {a.potential_min:.5f}, mu1 = {a.mu1:.5f}, "
           f"doubling drift {abs(a.mu1 - b.mu1):.2e} <= 1e-4")


def test_04_oracle_equivalence(hm):
    v0 = shoot_full_line_v0()
    collocation = float(hm(0.0))
    neu = pl.solve_half_line_neumann(2.0, 25.0, 2000)
    neu2 = pl.solve_half_line_neumann(2.0, 25.0, 2000, initial_guess=1.1 * neu.v)
    sup = float(np.max(np.abs(neu2.v - neu.v)))
    ok = abs(collocation - v0) <= 1e-7 and sup <= 1e-8
    report(4, "oracle equivalence", ok,
           f"|v(0) - shooting| = {abs(collocation - v0):.2e} <= 1e-7, "
           f"perturbed-restart sup = {sup:.2e} <= 1e-8")


def test_05_tf_chemical_potential():
    details = []
    ok = True
    for aniso in (1.0, 0.8):
        t0 = time.perf_counter()
        lam = tp.compute_lambda0(tp.Trap.harmonic(aniso), 1e-10)
        elapsed = time.perf_counter() - t0
        err = abs(lam - np.sqrt(2.0 * aniso / np.pi))
        ok = ok and err <= 1e-8 and elapsed <= 1.0
        details.append(f"L={aniso}: err {err:.1e}, {elapsed:.2f}s")
    report(5, "TF chemical potential", ok, "; ".join(details))


def test_06_lagrange_multiplier_rate(harmonic_trap, hm, lam0):
    t0 = time.perf_counter()
    states = gp.solve_radial_ladder(harmonic_trap, LADDER, n=3000, profile=hm)
    elapsed = time.perf_counter() - t0
    fit = vf.rate_fit([(s.epsilon, s.lambda_eps - lam0) for s in states],
                      log_power=1.0)
    ok = fit.exponent >= 1.8 and fit.r_squared >= 0.98 and elapsed <= 120.0
    report(6, "lambda rate", ok,
           f"exponent {fit.exponent:.3f} >= 1.8, r2 {fit.r_squared:.5f} >= 0.98, "
           f"ladder runtime {elapsed:.1f}s <= 120s")


def test_07_energy_expansion(ladder_states, tfdata0, hm):
    bundle = ly.predict(tfdata0, hm, LADDER[-1])
    eps = np.array([s.epsilon for s in ladder_states])
    G = np.array([gp.energy(s, tfdata0).total for s in ladder_states])
    rem = G - bundle.c_minus2 / eps**2
    L = np.abs(np.log(eps))
    slope = float(np.linalg.lstsq(np.vstack([L, np.ones_like(L)]).T, rem,
                                  rcond=None)[0][0])
    rel = abs(slope - 0.835543) / 0.835543
    ok = rel <= 0.10 and abs(bundle.c_minus2 - 0.265965) <= 1e-5
    report(7, "energy expansion", ok,
           f"slope {slope:.5f} within {100 * rel:.1f}% of 0.835543 (<= 10%), "
           f"c_minus2 = {bundle.c_minus2:.6f}")


def test_08_corner_layer_envelope(ladder_states, approxes):
    vals = {s.epsilon: vf.corner_layer_error(s, approxes[s.epsilon][0]).inner_minus
            for s in ladder_states}
    ratio = max(vals.values()) / min(vals.values())
    ok = ratio <= 3.0
    report(8, "corner-layer envelope", ok,
           f"weighted sup ratio over ladder {ratio:.3f} <= 3")


def test_09_holder_uniformity(ladder_states):
    half = [vf.holder_and_gradient(s, 0.5)[0] for s in ladder_states]
    six = [vf.holder_and_gradient(s, 0.6)[0] for s in ladder_states]
    ratio = max(half) / min(half)
    increasing = bool(np.all(np.diff(six) > 0))
    ok = ratio <= 1.5 and increasing
    report(9, "Holder uniformity", ok,
           f"C^1/2 ratio {ratio:.3f} <= 1.5, C^0.6 strictly increasing: {increasing}")


def test_10_monotonicity(ladder_states, approxes):
    worsts, cs = [], []
    for s in ladder_states:
        w, c = vf.monotonicity_check(s, approxes[s.epsilon][0].delta)
        worsts.append(w)
        cs.append(c)
    ratio = max(cs) / min(cs)
    ok = max(worsts) < 0 and ratio <= 2.0
    report(10, "monotonicity", ok,
           f"max weighted derivative {max(worsts):.4f} < 0, c spread {ratio:.2f} <= 2")


def test_11_auxiliary_function(ladder_states, approxes):
    scaled = [vf.f_compare(s, approxes[s.epsilon][1]).sup_diff_scaled
              for s in ladder_states]
    ratio = max(scaled) / min(scaled)
    small = next(s for s in ladder_states if s.epsilon == 0.01)
    fd = vf.f_compare(small, approxes[0.01][1])
    ok = ratio <= 2.0 and fd.boundary_rel_err <= 0.15
    report(11, "auxiliary function", ok,
           f"||f-f0|| eps^-1/2 spread {ratio:.2f} <= 2, "
           f"boundary value off by {100 * fd.boundary_rel_err:.1f}% <= 15%")


def test_12_2d_cross_check(harmonic_trap, ladder_states):
    t0 = time.perf_counter()
    s2d = gp.solve_2d(harmonic_trap, 0.05, n=256)
    elapsed = time.perf_counter() - t0
    radial = next(s for s in ladder_states if s.epsilon == 0.05)
    X, Y = np.meshgrid(s2d.grid, s2d.grid, indexing="ij")
    sup = float(np.max(np.abs(s2d.eta - radial.eta_at(np.hypot(X, Y)))))
    ok = sup <= 5e-3 and elapsed <= 600.0
    report(12, "2-D cross-check", ok,
           f"sup difference {sup:.2e} <= 5e-3, runtime {elapsed:.0f}s <= 600s")


def test_13_determinism(tmp_path):
    args = ["ground", "--trap", "harmonic", "--eps", "0.05", "--n", "2000"]
    out1, out2 = tmp_path / "a", tmp_path / "b"
    assert cli_main(args + ["--out", str(out1)]) == 0
    assert cli_main(args + ["--out", str(out2)]) == 0
    names = ["ground_eps0.05.csv", "ground_eps0.05.json"]
    same = all((out1 / n).read_bytes() == (out2 / n).read_bytes() for n in names)
    report(13, "determinism", same,
           "CSV/JSON artifacts byte-identical across reruns")
