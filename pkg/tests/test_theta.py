import itertools
import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest

from cobletheta import _kernels, arith, coble, gf3, theta
from cobletheta.theta import HALF_CHAR, ZERO_CHAR, ThetaChar, TruncationSpec

TAU0 = arith.tau0()


def brute_theta(m: ThetaChar, tau, z=None, R=6):
    """Plain box sum, independent of the kernels."""
    mp, mpp = m.arrays()
    z = np.zeros(5) if z is None else np.asarray(z)
    p = np.array(list(itertools.product(range(-R, R + 1), repeat=5)), dtype=float) + mp
    ex = 1j * np.pi * np.einsum("ni,ij,nj->n", p, tau, p) + 2j * np.pi * p @ (z + mpp)
    return np.exp(ex).sum()


@pytest.fixture(scope="module")
def tau_ball():
    return arith.tau_from_ball([0.1 + 0.2j, -0.3j, 0.2, 0.1])


def test_matches_brute_force_at_tau0():
    assert abs(theta.theta(HALF_CHAR, TAU0) - brute_theta(HALF_CHAR, TAU0)) < 1e-12


def test_matches_brute_force_with_z(tau_ball):
    m = theta.char_of_v((1, 1, 1, 0, 0))
    z = np.array([0.1 + 0.05j, -0.2, 0.3j, 0.0, 0.1])
    assert abs(theta.theta(m, tau_ball, z) - brute_theta(m, tau_ball, z)) < 1e-11


def test_backends_agree(tau_ball):
    if not _kernels.HAVE_NUMBA:
        pytest.skip("numba unavailable")
    m = theta.char_of_v((1, 2, 0, 1, 0))
    a = theta.theta(m, tau_ball, use_numba=True)
    b = theta.theta(m, tau_ball, use_numba=False)
    assert abs(a - b) < 1e-14


def test_pruned_sum_matches_full_box(tau_ball):
    m = HALF_CHAR
    a, na = theta.theta(m, tau_ball, with_count=True)
    b, nb = theta.theta(m, tau_ball, spec=TruncationSpec(prune=False), with_count=True)
    assert nb > na
    assert abs(a - b) < 1e-14


def test_truncation_stable_at_R_plus_2():
    R = theta.truncation_radius(TAU0, np.full(5, 0.5), 1e-12)
    a = theta.theta(HALF_CHAR, TAU0, spec=TruncationSpec(radius=R, prune=False))
    b = theta.theta(HALF_CHAR, TAU0, spec=TruncationSpec(radius=R + 2, prune=False))
    assert abs(a - b) < 1e-12


def test_rejects_non_positive_imaginary_part():
    with pytest.raises(theta.ThetaDomainError):
        theta.theta(ZERO_CHAR, np.eye(5, dtype=complex))


def test_evenness(tau_ball):
    m = ThetaChar.of([Fraction(k, 6) for k in (1, 2, -3, 5, 0)], [Fraction(k, 6) for k in (4, -1, 1, 0, 3)])
    assert abs(theta.theta(m, tau_ball) - theta.theta(-m, tau_ball)) < 1e-12


def test_quasi_periodicity_in_z(tau_ball, rng):
    z = rng.normal(size=5) * 0.2 + 0.1j * rng.normal(size=5)
    a, b = np.array([1, 0, -1, 0, 1.0]), np.array([0, 2, 1, -1, 0.0])
    lhs = theta.theta(ZERO_CHAR, tau_ball, z + a @ tau_ball + b)
    rhs = theta.e(-0.5 * a @ tau_ball @ a - a @ z) * theta.theta(ZERO_CHAR, tau_ball, z)
    assert abs(lhs - rhs) < 1e-10 * max(1, abs(rhs))


def test_char_shift_factor():
    assert theta.char_shift_factor(HALF_CHAR, [0] * 5, [0] * 5) == 1
    assert abs(theta.char_shift_factor(HALF_CHAR, [0] * 5, [1] * 5) + 1) < 1e-15


def test_char_shift_against_theta(tau_ball):
    m = theta.char_of_v((1, 1, 1, 0, 0))
    p, q = [1, 0, -1, 0, 0], [0, 1, 1, 0, -1]
    lhs = theta.theta(m.shifted(p, q), tau_ball)
    rhs = theta.char_shift_factor(m, p, q) * theta.theta(m, tau_ball)
    assert abs(lhs - rhs) < 1e-10


def test_const_from_function(tau_ball):
    lhs, rhs = theta.const_from_function([0] * 5, [0] * 5, tau_ball)
    assert lhs == pytest.approx(theta.theta(ZERO_CHAR, tau_ball))
    a = [Fraction(1, 6), Fraction(-1, 3), 0, Fraction(1, 2), Fraction(5, 6)]
    b = [Fraction(1, 3), 0, Fraction(-1, 6), Fraction(1, 2), 0]
    lhs, rhs = theta.const_from_function(a, b, tau_ball)
    assert abs(lhs - rhs) < 1e-10


def test_beta_examples():
    assert tuple(theta.beta_of((1, 0, 0, 0, 0))) == (1, 1, 0, 0, 0)
    for v in gf3.enumerate_S():
        assert np.array_equal(theta.beta_of(gf3.neg(v)), -theta.beta_of(v))


def test_char_of_v_rejects_bad_lift():
    with pytest.raises(ValueError):
        theta.char_of_v((1, 0, 0, 0, 0), lift=[2, 0, 0, 0, 0])
    with pytest.raises(ValueError):
        theta.beta_of((1, 0, 0, 0, 0), convention="other")


def test_cube_symmetries(tau_main, cubes_main):
    scale = max(abs(x) for x in cubes_main.values())
    assert max(abs(cubes_main[gf3.neg(v)] + cubes_main[v]) for v in cubes_main) < 1e-10 * scale
    assert min(abs(x) for x in cubes_main.values()) > 1e-3 * scale
    v = (1, 2, 1, 0, 0)
    lift = np.array(gf3.signed(v)) + 3 * np.array([1, -1, 0, 2, 0])
    assert abs(theta.theta_v_cubed(v, tau_main, lift=lift) - cubes_main[v]) < 1e-10 * scale


def test_rho_transform():
    rng = np.random.default_rng(1)
    z = 0.3 * (rng.normal(size=5) + 1j * rng.normal(size=5))
    assert theta.rho_transform_residual(TAU0, z)["abs"] < 1e-9
    assert theta.rho_transform_residual(TAU0, np.zeros(5))["abs"] < 1e-14


def test_rho_transform_at_computed_tau(tau_main):
    z = np.array([0.1 + 0.1j, -0.2, 0.05j, 0.3, -0.1 + 0.2j])
    assert theta.rho_transform_residual(tau_main, z)["abs"] < 1e-8


def test_equivariance_identity_and_swap(tau_main):
    S = gf3.enumerate_S()
    assert theta.equivariance_residual(arith.eis_identity(), S[0], S[5], tau_main)["abs"] == 0
    swap = np.eye(5, dtype=np.int64)
    swap[[0, 1]] = swap[[1, 0]]
    assert theta.equivariance_residual(arith.EisMat.of(swap), S[3], S[40], tau_main)["rel"] < 1e-7


def test_equivariance_rejects_mod4_failures(tau_main):
    g = arith.unitary_reflection([1, 1, 0, 0, 1])
    assert not theta.mod4_condition(g)
    with pytest.raises(ValueError):
        theta.equivariance_residual(g, (1, 1, 1, 0, 0), (1, 2, 1, 0, 0), tau_main)


def test_non_isotropic_characteristics_vanish(tau_main):
    for v in [(1, 0, 0, 0, 0), (1, 1, 0, 0, 0), (1, 1, 1, 1, 0)]:
        assert abs(theta.theta(theta.char_of_v(v), tau_main)) < 1e-9


def test_row_convention_breaks_the_proportionality(tau_main):
    Z = coble.coble_vector(coble.normal_form_config(coble.CurveParams.of((1, 2, 3, 4, 5))).as_complex())
    T = theta.theta_cubes(tau_main, convention="rows")
    r = np.array([T[v] / Z[v] for v in T])
    assert np.abs(r / r[0] - 1).max() > 1e-2


def test_numpy_fallback_flag():
    env = dict(os.environ, COBLETHETA_DISABLE_NUMBA="1")
    out = subprocess.run([sys.executable, "-c", "from cobletheta import _kernels; print(_kernels.backend())"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "numpy"
