"""Six points in the plane and Coble's 80 determinantal invariants Z_v.

Scalars are generic: Fraction for exact identity checks, float or complex for
the analytic pipeline.  Only +, -, *, / and comparison with zero are used.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Number
from typing import Iterable, Sequence

import numpy as np

from . import gf3

Point = tuple


class DegenerateConfig(ValueError):
    def __init__(self, offending: list[str]):
        self.offending = offending
        super().__init__("degenerate configuration: " + ", ".join(offending) + " vanish")


def _is_zero(x, tol=0.0) -> bool:
    if isinstance(x, Fraction) or isinstance(x, int):
        return x == 0
    return abs(x) <= tol


def det(rows: Sequence[Sequence]) -> object:
    """Determinant by Gaussian elimination; works over any field of scalars."""
    m = [list(r) for r in rows]
    n = len(m)
    sign = 1
    acc = None
    for c in range(n):
        exact = all(isinstance(m[r][c], (int, Fraction)) for r in range(c, n))
        if exact:
            piv = next((r for r in range(c, n) if m[r][c] != 0), None)
        else:
            piv = max(range(c, n), key=lambda r: abs(m[r][c]))
            if m[piv][c] == 0:
                piv = None
        if piv is None:
            return m[0][0] * 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            sign = -sign
        p = m[c][c]
        acc = p if acc is None else acc * p
        for r in range(c + 1, n):
            f = m[r][c] / p
            if f != 0:
                m[r] = [a - f * b for a, b in zip(m[r], m[c])]
    return acc if sign > 0 else -acc


def _solve(A: Sequence[Sequence], b: Sequence) -> list:
    """Solve A x = b (Cramer's rule, fine for 3x3)."""
    d = det(A)
    out = []
    for k in range(len(b)):
        Ak = [list(r) for r in A]
        for r in range(len(b)):
            Ak[r][k] = b[r]
        out.append(det(Ak) / d)
    return out


@dataclass(frozen=True)
class PointConfig:
    points: tuple  # six 3-tuples

    def __post_init__(self):
        if len(self.points) != 6 or any(len(p) != 3 for p in self.points):
            raise ValueError("need six points with three coordinates each")

    @classmethod
    def of(cls, pts: Iterable[Iterable]) -> "PointConfig":
        return cls(tuple(tuple(p) for p in pts))

    def __getitem__(self, i: int) -> Point:
        """1-based access."""
        return self.points[i - 1]

    def is_exact(self) -> bool:
        return all(isinstance(x, (int, Fraction)) for p in self.points for x in p)

    def as_complex(self) -> "PointConfig":
        return PointConfig.of([[complex(x) for x in p] for p in self.points])


def det3(cfg: PointConfig, i: int, j: int, k: int):
    if len({i, j, k}) < 3:
        raise ValueError("indices must be distinct")
    a, b, c = cfg[i], cfg[j], cfg[k]
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - b[0] * (a[1] * c[2] - a[2] * c[1])
        + c[0] * (a[1] * b[2] - a[2] * b[1])
    )


def _veronese(p: Point) -> list:
    x, y, z = p
    return [x * x, y * y, z * z, x * y, y * z, z * x]


def veronese_det(cfg: PointConfig):
    cols = [_veronese(p) for p in cfg.points]
    return det([list(r) for r in zip(*cols)])


def genericity_failures(cfg: PointConfig, tol: float = 1e-10) -> list[str]:
    """Names of vanishing determinants.  Float inputs are compared with the
    Hadamard bound of the determinant, exact inputs with zero."""
    exact = cfg.is_exact()
    norm = lambda r: math.sqrt(sum(abs(x) ** 2 for x in r))
    bad = []
    for i, j, k in itertools.combinations(range(1, 7), 3):
        bound = 0.0 if exact else tol * norm(cfg[i]) * norm(cfg[j]) * norm(cfg[k])
        if _is_zero(det3(cfg, i, j, k), bound):
            bad.append(f"D{i}{j}{k}")
    bound = 0.0
    if not exact:
        bound = tol * math.prod(norm(_veronese(p)) for p in cfg.points)
    if _is_zero(veronese_det(cfg), bound):
        bad.append("D123456")
    return bad


class _Dets:
    """Memoized D_ijk and D_1..6 of a configuration."""

    def __init__(self, cfg: PointConfig):
        self.cfg = cfg
        self._d: dict = {}
        self.d6 = veronese_det(cfg)

    def __call__(self, i, j, k):
        key = tuple(sorted((i, j, k)))
        if key not in self._d:
            self._d[key] = det3(self.cfg, *key)
        # sign of the permutation that sorts (i, j, k)
        perm = [i, j, k]
        s = 1
        for a, b in itertools.combinations(range(3), 2):
            if perm[a] > perm[b]:
                s = -s
        return self._d[key] if s > 0 else -self._d[key]


def _z(v, D: _Dets):
    sv = gf3.signed(v)
    nz = [i + 1 for i, x in enumerate(sv) if x]
    if len(nz) != 3:
        raise ValueError(f"{gf3.label(v)} is not isotropic")
    signs = [sv[i - 1] for i in nz]
    if len(set(signs)) == 1:
        i, j, k = nz
        l, m = [t for t in range(1, 6) if t not in nz]
        val = D(i, j, k) * D(l, m, 6) * D.d6
        if (i + j + k) % 2:
            val = -val
        return val if signs[0] > 0 else -val
    plus = [t for t in nz if sv[t - 1] > 0]
    minus = [t for t in nz if sv[t - 1] < 0]
    if len(plus) == 2:
        (k, l), (m,), s = plus, minus, 1
    else:
        (k, l), (m,), s = minus, plus, -1
    i, j = [t for t in range(1, 6) if t not in nz]
    val = D(i, k, l) * D(j, k, l) * D(k, m, 6) * D(l, m, 6) * D(m, i, j) * D(6, i, j)
    return val if s > 0 else -val


def z_of(v, cfg: PointConfig):
    return _z(v, _Dets(cfg))


def coble_vector(cfg: PointConfig, check: bool = True) -> dict:
    """All 80 values, keyed by residue vector."""
    if check:
        bad = genericity_failures(cfg)
        if bad:
            raise DegenerateConfig(bad)
    D = _Dets(cfg)
    return {v: _z(v, D) for v in gf3.enumerate_S()}


# ---------------------------------------------------------------- actions

def s6_act_config(perm: Sequence[int], cfg: PointConfig) -> PointConfig:
    """(g.P)_i = P_{g^{-1}(i)} for perm in one-line notation."""
    inv = [0] * 6
    for i, p in enumerate(perm):
        inv[p - 1] = i + 1
    return PointConfig(tuple(cfg[inv[i]] for i in range(6)))


def scale_config(cfg: PointConfig, g, t: Sequence) -> PointConfig:
    """Apply a 3x3 matrix g to every point and rescale point i by t[i]."""
    out = []
    for p, ti in zip(cfg.points, t):
        q = [sum(g[r][c] * p[c] for c in range(3)) * ti for r in range(3)]
        out.append(tuple(q))
    return PointConfig(tuple(out))


def frame_normalize(cfg: PointConfig) -> PointConfig:
    """Projective transform taking P1..P4 to (1:0:0), (0:1:0), (0:0:1), (1:1:1)."""
    A = [[cfg[c][r] for c in (1, 2, 3)] for r in range(3)]
    lam = _solve(A, list(cfg[4]))
    # columns of A scaled by lam map e_i to P_i; invert that map
    Al = [[A[r][c] * lam[c] for c in range(3)] for r in range(3)]
    d = det(Al)
    inv = [[None] * 3 for _ in range(3)]
    for r in range(3):
        for c in range(3):
            minor = [[Al[i][j] for j in range(3) if j != r] for i in range(3) if i != c]
            cof = det(minor)
            inv[r][c] = cof / d if (r + c) % 2 == 0 else -cof / d
    return scale_config(cfg, inv, [1] * 6)


def cremona_r123(cfg: PointConfig) -> PointConfig:
    """Standard quadratic transformation centred at P1, P2, P3 after moving
    P1..P4 to the standard frame."""
    n = frame_normalize(cfg)
    p5, p6 = n[5], n[6]
    if any(_is_zero(x, 1e-14) for x in (*p5, *p6)):
        raise ValueError("P5 or P6 lies on a coordinate line; the image is not defined")
    one = p5[0] / p5[0]
    x1, x3 = p5[1] / p5[0], p5[2] / p5[0]
    x2, x4 = p6[1] / p6[0], p6[2] / p6[0]
    zero = one - one
    frame = [(one, zero, zero), (zero, one, zero), (zero, zero, one), (one, one, one)]
    return PointConfig(tuple(frame + [(one, one / x1, one / x3), (one, one / x2, one / x4)]))


# ---------------------------------------------------------------- normal form

@dataclass(frozen=True)
class CurveParams:
    a: tuple

    def __post_init__(self):
        if len(self.a) != 5:
            raise ValueError("need five parameters")
        if any(not (x > 0) for x in self.a):
            raise ValueError("parameters must be positive")
        if any(not (x < y) for x, y in zip(self.a, self.a[1:])):
            raise ValueError("parameters must be strictly increasing")

    @classmethod
    def of(cls, a: Iterable) -> "CurveParams":
        return cls(tuple(a))

    def s(self) -> list:
        """Coefficients s_1..s_5 of h(x) = prod (x - a_i)."""
        coeffs = [self.a[0] * 0 + 1]
        for ai in self.a:
            nxt = coeffs + [0 * ai]
            for k in range(1, len(nxt)):
                nxt[k] = nxt[k] - ai * coeffs[k - 1]
            coeffs = nxt
        return coeffs[1:]

    def h(self, x):
        out = 1
        for ai in self.a:
            out = out * (x - ai)
        return out


def normal_form_config(params: CurveParams) -> PointConfig:
    one = params.a[0] * 0 + 1
    pts = [(one, ai * ai, ai) for ai in params.a] + [(0 * one, 0 * one, one)]
    return PointConfig(tuple(pts))


def cubic_surface_coeffs(params: CurveParams) -> dict:
    """Coefficients of F(u0, u1, u2, u3) keyed by exponent tuples."""
    s1, s2, s3, s4, s5 = params.s()
    terms = {
        (1, 0, 2, 0): 1,
        (1, 1, 1, 0): s2,
        (2, 0, 1, 0): s4,
        (0, 2, 1, 0): -1,
        (0, 1, 0, 2): -1,
        (1, 1, 0, 1): -s3,
        (0, 2, 0, 1): -s1,
        (2, 0, 0, 1): s5,
        (0, 3, 0, 0): -s2,
        (1, 2, 0, 0): -s4,
        (2, 1, 0, 0): s1 * s5,
        (3, 0, 0, 0): s3 * s5,
    }
    return terms


def eval_cubic(coeffs: dict, u: Sequence):
    tot = 0
    for e, c in coeffs.items():
        term = c
        for ui, ei in zip(u, e):
            term = term * ui**ei
        tot = tot + term
    return tot


def u_basis(params: CurveParams, x: Sequence) -> list:
    """The four cubics through the six normal-form points, evaluated at x."""
    s1, s2, s3, s4, s5 = params.s()
    x0, x1, x2 = x
    c = x0 * x1 - x2 * x2
    return [
        c * x0,
        c * x1,
        x1**3 + s1 * x1**2 * x2 + s2 * x1 * x2**2 + s3 * x0 * x1 * x2 + s4 * x0 * x2**2 + s5 * x0**2 * x2,
        x1**2 * x2 + s1 * x1 * x2**2 + s2 * x0 * x1 * x2 + s3 * x0 * x2**2 + s4 * x0**2 * x2 + s5 * x0**3,
    ]


def line_family_check(params: CurveParams, x: complex, ts: Sequence[complex] | None = None) -> dict:
    """Residual of F(t, b t, c t + x, 1) = (e t)^3 for the line through (0:0:x:1)."""
    if x == 0 or any(abs(x * x - ai * ai) == 0 for ai in params.a):
        raise ZeroDivisionError("x must avoid 0 and the branch values")
    s1, s2, s3, s4, s5 = params.s()
    b = x * x
    c = (x**5 + s1 * x**4 - s2 * x**3 + s3 * x**2 - s4 * x - s5) / (2 * x)
    e3 = params.h(x) * params.h(-x) / (4 * x * x)
    F = cubic_surface_coeffs(params)
    ts = np.linspace(-2, 2, 9) + 0.3j if ts is None else ts
    scale = max(1.0, abs(e3))
    res = max(abs(eval_cubic(F, (t, b * t, c * t + x, 1)) - e3 * t**3) for t in ts)
    # y = 4^{1/3} x e must satisfy y^3 = x h(x) h(-x)
    y3 = 4 * x**3 * e3
    curve = abs(y3 - x * params.h(x) * params.h(-x))
    return {"line_residual": float(res / scale / max(1.0, max(abs(t) for t in ts) ** 3)),
            "curve_residual": float(curve / max(1.0, abs(y3))), "e_cubed": complex(e3)}


def random_rational_config(rng: np.random.Generator, size: int = 20) -> PointConfig:
    while True:
        pts = [tuple(Fraction(int(rng.integers(-size, size + 1)), int(rng.integers(1, 6))) for _ in range(3))
               for _ in range(6)]
        cfg = PointConfig(tuple(pts))
        if not genericity_failures(cfg):
            return cfg


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, str):
        return Fraction(x)
    if isinstance(x, Number):
        return Fraction(x).limit_denominator() if isinstance(x, float) else Fraction(x)
    raise TypeError(f"cannot convert {x!r}")
