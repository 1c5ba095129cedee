import math
from fractions import Fraction

import numpy as np
import pytest
import sympy as sp

from cobletheta import coble, gf3
from cobletheta.coble import CurveParams, PointConfig


@pytest.fixture(scope="module")
def cfg():
    return coble.random_rational_config(np.random.default_rng(7))


@pytest.fixture(scope="module")
def Z(cfg):
    return coble.coble_vector(cfg)


def test_eighty_nonzero_values(Z):
    assert len(Z) == 80 and all(z != 0 for z in Z.values())
    assert all(isinstance(z, Fraction) for z in Z.values())


def test_odd(Z):
    assert all(Z[gf3.neg(v)] == -Z[v] for v in Z)


def test_s6_equivariance_exact(cfg, Z, rng):
    for _ in range(12):
        p = tuple(int(x) + 1 for x in rng.permutation(6))
        g = gf3.s6_matrix(p)
        Zg = coble.coble_vector(coble.s6_act_config(p, cfg))
        assert all(Zg[v] == Z[gf3.apply(v, g)] for v in Z)


def test_plucker_for_every_R_pair(Z):
    for w in gf3.enumerate_R():
        assert sum(Z[v] for v in gf3.isotropic_span_of(w)) == 0


def test_degree9_reference_triple(Z):
    v = [(1, 1, 0, 1, 0), (0, 1, 1, -1, 0), (1, -1, 1, 0, 0)]
    w = [(-1, 0, 0, -1, -1), (1, 0, 1, 0, -1), (0, 0, 1, -1, 1)]
    assert math.prod(Z[gf3.vec(x)] for x in v) == math.prod(Z[gf3.vec(x)] for x in w)


def test_degree9_all_Q_with_random_signs(Z, rng):
    for P, Q in gf3.enumerate_Q():
        a, b = gf3.plane_reps(P, Q)
        a = [gf3.vec(s * x for x in v) for s, v in zip(rng.choice([1, -1], 3), a)]
        b = [gf3.vec(s * x for x in v) for s, v in zip(rng.choice([1, -1], 3), b)]
        assert math.prod(Z[v] for v in a) == gf3.epsilon_sign(a, b) * math.prod(Z[v] for v in b)


def test_ratios_are_projective_invariants(cfg, Z):
    g = [[2, 1, 0], [0, 1, 3], [1, 0, -1]]
    t = [Fraction(1, 2), 3, 5, Fraction(-2, 7), 1, 4]
    Zg = coble.coble_vector(coble.scale_config(cfg, g, t))
    assert len({Zg[v] / Z[v] for v in Z}) == 1


def test_cremona_acts_as_the_reflection(cfg, Z):
    Zc = coble.coble_vector(coble.cremona_r123(cfg))
    R = gf3.reflection(gf3.R123)
    assert len({Zc[v] / Z[gf3.apply(v, R)] for v in Z}) == 1


def test_cremona_is_an_involution_on_the_frame(cfg):
    twice = coble.cremona_r123(coble.cremona_r123(cfg))
    once = coble.frame_normalize(cfg)
    for p, q in zip(twice.points[4:], once.points[4:]):
        assert p[1] / p[0] == q[1] / q[0] and p[2] / p[0] == q[2] / q[0]


def test_degenerate_configs_are_named():
    pts = [[1, 0, 0], [0, 1, 0], [0, 0, 1], [1, 1, 0], [1, 2, 3], [3, 1, 7]]
    with pytest.raises(coble.DegenerateConfig) as e:
        coble.coble_vector(PointConfig.of(pts))
    assert "D124" in e.value.offending
    conic = [[1, t, t * t] for t in range(6)]
    assert coble.genericity_failures(PointConfig.of(conic)) == ["D123456"]


def test_normal_form_ratio_exact():
    a = [Fraction(x) for x in (1, 2, 3, 4, 5)]
    c = coble.normal_form_config(CurveParams.of(a))
    r = coble.z_of((1, 1, 1, 0, 0), c) / coble.z_of((1, 1, 2, 0, 0), c)
    assert abs(r) == Fraction(1, 10)
    assert r ** 6 > 0


def test_curve_params_validation():
    with pytest.raises(ValueError):
        CurveParams.of((1, 3, 2, 4, 5))
    with pytest.raises(ValueError):
        CurveParams.of((0, 1, 2, 3, 4))
    with pytest.raises(ValueError):
        CurveParams.of((1, 2, 3))


def test_cubic_surface_vanishes_on_u_map():
    params = CurveParams.of((1, 2, 3, 4, 5))
    F = coble.cubic_surface_coeffs(params)
    rng = np.random.default_rng(0)
    for _ in range(5):
        x = rng.normal(size=3) + 1j * rng.normal(size=3)
        u = coble.u_basis(params, x)
        scale = max(abs(c) for c in F.values()) * max(abs(t) for t in u) ** 3
        assert abs(coble.eval_cubic(F, u)) < 1e-12 * scale


def test_line_family_against_symbolic_expansion():
    params = CurveParams.of((2, 3, 5, 7, 11))
    out = coble.line_family_check(params, 0.7 + 0.2j)
    assert out["line_residual"] < 1e-12 and out["curve_residual"] < 1e-12
    # second route: sympy expands F(t, bt, ct + x, 1) - e^3 t^3 symbolically
    F = coble.cubic_surface_coeffs(params)
    t, x = sp.symbols("t x")
    s = params.s()
    b = x**2
    c = (x**5 + s[0] * x**4 - s[1] * x**3 + s[2] * x**2 - s[3] * x - s[4]) / (2 * x)
    hx = sp.prod([x - ai for ai in params.a])
    e3 = hx * hx.subs(x, -x) / (4 * x**2)
    u = (t, b * t, c * t + x, 1)
    poly = sum(coef * sp.prod([ui**k for ui, k in zip(u, exps)]) for exps, coef in F.items())
    assert sp.simplify(sp.expand(poly - e3 * t**3)) == 0
