import pytest

from tfcorner import gpsolve, layers, painleve, trap

LADDER = (0.05, 0.03, 0.02, 0.01)


@pytest.fixture(scope="session")
def hm():
    return painleve.solve_full_line(2.0, -30.0, 15.0, 4000)


@pytest.fixture(scope="session")
def harmonic_trap():
    return trap.Trap.harmonic(1.0)


@pytest.fixture(scope="session")
def lam0(harmonic_trap):
    return trap.compute_lambda0(harmonic_trap)


@pytest.fixture(scope="session")
def tfdata0(harmonic_trap, lam0):
    return trap.boundary_and_beta(harmonic_trap, lam0, 128)


@pytest.fixture(scope="session")
def ladder_states(harmonic_trap, hm):
    return gpsolve.solve_radial_ladder(harmonic_trap, LADDER, n=3000, profile=hm)


@pytest.fixture(scope="session")
def approxes(harmonic_trap, hm, ladder_states):
    """Per-epsilon (approx, bundle) pairs at the solved Lagrange multipliers."""
    out = {}
    for s in ladder_states:
        td = trap.boundary_and_beta(harmonic_trap, s.lambda_eps, 128)
        out[s.epsilon] = (layers.build_u_ap(td, hm, s.epsilon),
                          layers.predict(td, hm, s.epsilon))
    return out


@pytest.fixture(scope="session")
def state_2d(harmonic_trap):
    return gpsolve.solve_2d(harmonic_trap, 0.05, n=256)
