"""End-to-end checks with structured, JSON-serializable reports.

Each suite returns a :class:`Report`.  A report passes when all of its gated
checks pass; ungated checks are informational.  Random choices come from a
seeded generator so a report body is reproducible given its inputs.
"""
from __future__ import annotations

import hashlib
import itertools
import json
import logging
import math
import time
from contextlib import contextmanager
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from . import arith, coble, gf3, periods, theta
from .store import to_jsonable

log = logging.getLogger(__name__)

DEFAULT_A = (1, 2, 3, 4, 5)
SECOND_A = (1, 1.5, 2.2, 3.1, 4.7)
SUITES = ("geometry", "periods", "theta", "main", "plucker", "cubic", "degree9", "tables", "conventions",
          "optional")


class StageError(RuntimeError):
    """An upstream computation failed; ``stage`` names where."""

    def __init__(self, stage: str, exc: BaseException):
        super().__init__(f"{stage}: {type(exc).__name__}: {exc}")
        self.stage = stage
        self.cause = exc


@dataclass
class Check:
    name: str
    residual: float | None
    tol: float
    passed: bool
    gated: bool = True
    compare: str = "<"
    inputs: str = ""
    seconds: float = 0.0
    details: dict = field(default_factory=dict)

    def body(self) -> dict:
        d = asdict(self)
        d.pop("seconds")
        return to_jsonable(d)


@dataclass
class Report:
    title: str
    checks: list = field(default_factory=list)
    seed: int | None = None

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks if c.gated)

    def failures(self) -> list[str]:
        return [c.name for c in self.checks if c.gated and not c.passed]

    def extend(self, other: "Report") -> "Report":
        self.checks.extend(other.checks)
        return self

    def find(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def to_json(self, timing: bool = True) -> dict:
        out = {"title": self.title, "seed": self.seed, "passed": self.passed,
               "failures": self.failures(), "checks": [c.body() for c in self.checks]}
        if timing:
            out["timing"] = {c.name: round(c.seconds, 4) for c in self.checks}
        return out

    @contextmanager
    def check(self, name: str, tol: float, inputs=None, gated: bool = True, exact: bool = False,
              above: bool = False):
        """Record one check.  The body fills ``rec['residual']`` and
        optionally ``rec['details']``; exact checks pass only on residual 0,
        ``above`` checks pass when the value exceeds ``tol``."""
        rec = {"residual": None, "details": {}}
        t0 = time.perf_counter()
        yield rec
        r = rec["residual"]
        if r is None or (isinstance(r, float) and math.isnan(r)):
            ok = False
        elif exact:
            ok = r == 0
        elif above:
            ok = r > tol
        else:
            ok = r < tol
        if "passed" in rec:
            ok = ok and bool(rec["passed"])
        cmp = "==" if exact else ">" if above else "<"
        c = Check(name, None if r is None else float(r), float(tol), bool(ok), gated, cmp, digest(inputs),
                  time.perf_counter() - t0, rec["details"])
        self.checks.append(c)
        log.info("%-44s %s residual=%s tol=%g%s", name, "PASS" if ok else "FAIL", c.residual, tol,
                 "" if gated else " (ungated)")


def digest(obj) -> str:
    if obj is None:
        return ""
    return hashlib.sha256(json.dumps(to_jsonable(obj), sort_keys=True, default=str).encode()).hexdigest()[:16]


def _stage(name, fn, *args, **kw):
    try:
        return fn(*args, **kw)
    except StageError:
        raise
    except Exception as exc:
        raise StageError(name, exc) from exc


def _rel(x, y) -> float:
    s = max(abs(x), abs(y))
    return 0.0 if s == 0 else float(abs(x - y) / s)


def _rel1(x, y) -> float:
    """Relative residual that falls back to absolute near zero (theta values are O(1))."""
    return float(abs(x - y) / max(1.0, abs(x), abs(y)))


def _sym(tau: np.ndarray) -> np.ndarray:
    return (tau + tau.T) / 2


def _exact_fractions(a: Sequence) -> tuple:
    return tuple(coble.to_fraction(str(x)) if isinstance(x, float) else coble.to_fraction(x) for x in a)


# ---------------------------------------------------------------- finite geometry

def verify_finite_geometry(check_group: bool = True) -> Report:
    rep = Report("finite geometry")
    counts = {"S": 80, "S_r": 20, "S_rbar": 60, "T": 45, "lines": 27, "q2_classes": 36, "R": 270,
              "planes": 40, "Q": 240}
    with rep.check("counts", 0, counts, exact=True) as r:
        sr, srb = gf3.split_S()
        got = {"S": len(gf3.enumerate_S()), "S_r": len(sr), "S_rbar": len(srb), "T": len(gf3.enumerate_T()),
               "lines": len(gf3.enumerate_lines()), "q2_classes": len(gf3.enumerate_q2_classes()),
               "R": len(gf3.enumerate_R()), "planes": len(gf3.isotropic_planes()), "Q": len(gf3.enumerate_Q())}
        r["residual"] = sum(abs(got[k] - counts[k]) for k in counts)
        r["details"] = got
    with rep.check("tritangent dictionary reproduces the lines", 0, exact=True) as r:
        import networkx as nx
        named = set(gf3.lines_from_dictionary().values())
        iso = nx.is_isomorphic(gf3.line_intersection_graph(), gf3.dual_graph_std())
        r["residual"] = len(named ^ set(gf3.enumerate_lines())) + (0 if iso else 1)
        r["details"] = {"graph_isomorphic": iso}
    if check_group:
        with rep.check("group order mod +-I", 0, 51840, exact=True) as r:
            n = len(gf3.group_closure(gf3.weyl_generators(), mod_center=True))
            r["residual"] = abs(n - 51840)
            r["details"] = {"order": n}
    return rep


# ---------------------------------------------------------------- periods

def verify_periods(pd: periods.PeriodData, tol: float = 1e-8, aj_tol: float = 1e-6) -> Report:
    rep = Report("periods")
    c = pd.checks
    inp = {"a": pd.a}
    with rep.check("tau symmetric", tol, inp) as r:
        r["residual"] = c["symmetry"]
    with rep.check("smallest eigenvalue of Im tau", 0.0, inp, above=True) as r:
        r["residual"] = c["min_eig_im"]
    with rep.check("(H tau)^2 + H tau + I = 0", tol, inp) as r:
        r["residual"] = c["quadratic"]
    with rep.check("conjugate eigenspace of H tau is a line", 0, inp, exact=True) as r:
        r["residual"] = abs(c["omega_bar_dim"] - 1)
    with rep.check("homology relation", tol, inp) as r:
        r["residual"] = c["relation"]
        r["details"] = {"cond_PB": c.get("cond_PB"), "phases": list(pd.phases)}
    with rep.check("Abel-Jacobi images of branch points", aj_tol, inp) as r:
        res = periods.aj_congruence(pd)
        r["residual"] = max(res)
        r["details"] = {f"p{i + 1}": x for i, x in enumerate(res)}
    with rep.check("Abel-Jacobi image of infinity is a lattice point", aj_tol, inp, gated=False) as r:
        r["residual"] = periods.lattice_reduce(periods.abel_jacobi_infinity(pd), pd.tau)[2]
    return rep


# ---------------------------------------------------------------- theta engine

def _random_char(rng, den: int = 6) -> theta.ThetaChar:
    mp = [Fraction(int(x), den) for x in rng.integers(-den, den + 1, 5)]
    mpp = [Fraction(int(x), den) for x in rng.integers(-den, den + 1, 5)]
    return theta.ThetaChar.of(mp, mpp)


def verify_theta_identities(tau: np.ndarray, label: str = "tau", tol: float = 1e-10, rho_tol: float = 1e-8,
                            spec: theta.TruncationSpec = theta.TruncationSpec(), seed: int = 0) -> Report:
    rng = np.random.default_rng(seed)
    tau = _sym(np.asarray(tau, dtype=complex))
    rep = Report(f"theta identities at {label}")
    inp = {"tau": tau, "seed": seed}

    with rep.check(f"[{label}] truncation stable at R+2", tol, inp) as r:
        m = theta.HALF_CHAR
        R = theta.truncation_radius(tau, m.arrays()[0], spec.tol)
        a = theta.theta(m, tau, None, theta.TruncationSpec(spec.tol, R, False))
        b = theta.theta(m, tau, None, theta.TruncationSpec(spec.tol, R + 2, False))
        r["residual"] = abs(a - b)
        r["details"] = {"radius": R}

    with rep.check(f"[{label}] evenness of theta constants", tol, inp) as r:
        res = []
        for _ in range(5):
            m = _random_char(rng)
            res.append(abs(theta.theta(m, tau, None, spec) - theta.theta(-m, tau, None, spec)))
        r["residual"] = max(res)

    with rep.check(f"[{label}] quasi-periodicity in z", tol, inp) as r:
        res = []
        for _ in range(5):
            z = rng.normal(size=5) * 0.3 + 1j * rng.normal(size=5) * 0.3
            a = rng.integers(-1, 2, 5).astype(float)
            b = rng.integers(-2, 3, 5).astype(float)
            lhs = theta.theta(theta.ZERO_CHAR, tau, z + a @ tau + b, spec)
            rhs = theta.e(-0.5 * a @ tau @ a - a @ z) * theta.theta(theta.ZERO_CHAR, tau, z, spec)
            res.append(_rel1(lhs, rhs))
        r["residual"] = max(res)

    with rep.check(f"[{label}] quasi-periodicity in the characteristic", tol, inp) as r:
        res = []
        for _ in range(5):
            m = _random_char(rng)
            p = [int(x) for x in rng.integers(-1, 2, 5)]
            q = [int(x) for x in rng.integers(-1, 2, 5)]
            lhs = theta.theta(m.shifted(p, q), tau, None, spec)
            rhs = theta.char_shift_factor(m, p, q) * theta.theta(m, tau, None, spec)
            res.append(_rel1(lhs, rhs))
        r["residual"] = max(res)

    with rep.check(f"[{label}] constants from the function", tol, inp) as r:
        res = []
        for _ in range(5):
            m = _random_char(rng)
            lhs, rhs = theta.const_from_function(m.mp, m.mpp, tau, spec)
            res.append(_rel1(lhs, rhs))
        r["residual"] = max(res)

    cubes = theta.theta_cubes(tau, spec)
    scale = max(abs(x) for x in cubes.values())
    with rep.check(f"[{label}] cube at -v is minus cube at v", tol, inp) as r:
        r["residual"] = max(abs(cubes[gf3.neg(v)] + cubes[v]) for v in cubes) / scale

    with rep.check(f"[{label}] cube independent of the lift", tol, inp) as r:
        res = []
        for v in list(cubes)[::8]:
            lift = np.array(gf3.signed(v)) + 3 * rng.integers(-1, 2, 5)
            res.append(abs(theta.theta_v_cubed(v, tau, spec, lift=lift) - cubes[v]) / scale)
        r["residual"] = max(res)

    with rep.check(f"[{label}] rho transform", rho_tol, inp) as r:
        res = []
        for _ in range(3):
            z = 0.3 * (rng.normal(size=5) + 1j * rng.normal(size=5))
            d = theta.rho_transform_residual(tau, z, spec)
            res.append(d["abs"] / max(d["scale"], 1.0))
        r["residual"] = max(res)
    return rep


# ---------------------------------------------------------------- main comparison

def coble_for(a) -> dict:
    cfg = coble.normal_form_config(coble.CurveParams.of(tuple(float(x) for x in a))).as_complex()
    return coble.coble_vector(cfg)


def _unit(vals: dict) -> dict:
    s = max(abs(x) for x in vals.values())
    return {k: complex(x) / s for k, x in vals.items()}


def cross_residuals(T: dict, Z: dict, pairs: Iterable[tuple]) -> float:
    t, z = _unit(T), _unit(Z)
    return max(abs(t[v] * z[w] - t[w] * z[v]) for v, w in pairs)


def verify_proportionality(a, pd: periods.PeriodData, tol: float = 1e-5,
                        spec: theta.TruncationSpec = theta.TruncationSpec(), seed: int = 0,
                        n_random: int = 100, convention: str = "basis") -> Report:
    rng = np.random.default_rng(seed)
    rep = Report(f"theta cubes against Coble invariants, a={tuple(a)}")
    inp = {"a": a, "tol": tol, "seed": seed, "convention": convention}
    T = _stage("theta", theta.theta_cubes, _sym(pd.tau), spec, convention)
    Z = _stage("coble", coble_for, a)
    S = list(T)
    t = _unit(T)
    w0 = max(S, key=lambda v: abs(t[v]))
    with rep.check(f"[a={tuple(a)}] cross residual against reference", tol, inp) as r:
        r["residual"] = cross_residuals(T, Z, [(v, w0) for v in S])
        r["details"] = {"reference": gf3.label(w0)}
    with rep.check(f"[a={tuple(a)}] cross residual on random pairs", tol, inp) as r:
        idx = rng.integers(0, len(S), (n_random, 2))
        r["residual"] = cross_residuals(T, Z, [(S[i], S[j]) for i, j in idx])
    with rep.check(f"[a={tuple(a)}] sign coherence under v -> -v", tol, inp) as r:
        tz = max(abs(T[gf3.neg(v)] + T[v]) for v in S) / max(abs(x) for x in T.values())
        zz = max(abs(Z[gf3.neg(v)] + Z[v]) for v in S) / max(abs(x) for x in Z.values())
        r["residual"] = max(tz, zz)
    with rep.check(f"[a={tuple(a)}] smallest normalized cube modulus", 1e-3, inp, above=True) as r:
        r["residual"] = min(abs(x) for x in t.values())
    return rep


# ---------------------------------------------------------------- relation suites

def verify_plucker(cfg: coble.PointConfig, float_tol: float = 1e-12) -> Report:
    rep = Report("Pluecker relations")
    Z = _stage("coble", coble.coble_vector, cfg)
    exact = cfg.is_exact()
    scale = max(abs(x) for x in Z.values())
    pairs = gf3.enumerate_R()
    inp = {"points": cfg.points}
    tol = 0 if exact else float_tol

    def quad_sum(vs):
        return sum(Z[v] for v in vs)

    quad = [gf3.vec(v) for v in ((1, 1, 0, 1, 0), (-1, 0, 0, -1, -1), (0, 1, 1, 0, 1), (-1, 0, -1, -1, 0))]
    with rep.check("reference quadruple, signs with pairwise product -1", tol, inp, exact=exact) as r:
        # keep the first vector, flip the others so every pairwise product is -1
        vs = [quad[0]] + [v if gf3.dot(quad[0], v) == 2 else gf3.neg(v) for v in quad[1:]]
        r["residual"] = abs(quad_sum(vs)) / (1 if exact else scale)
        r["details"] = {"vectors": [gf3.label(v) for v in vs],
                        "pairwise": sorted({gf3.dot(v, w) for v, w in itertools.combinations(vs, 2)})}
    with rep.check("reference quadruple, signs with pairwise product +1", tol, inp, gated=False, exact=exact) as r:
        r["residual"] = abs(quad_sum(quad)) / (1 if exact else scale)
    with rep.check("every isotropic span", tol, inp, exact=exact) as r:
        r["residual"] = max(abs(quad_sum(gf3.isotropic_span_of(w))) for w in pairs) / (1 if exact else scale)
        r["details"] = {"pairs": len(pairs)}
    with rep.check("negative control: perturbed quadruple", 0, inp, exact=True) as r:
        vs = list(gf3.isotropic_span_of(pairs[0]))
        others = [v for v in gf3.enumerate_S() if v not in vs and gf3.neg(v) not in vs]
        bad = [vs[:3] + [o] for o in others[:10]]
        r["residual"] = sum(1 for b in bad if abs(quad_sum(b)) / (1 if exact else scale) <= (0 if exact else 1e-6))
    return rep


def verify_coble_exact(cfg: coble.PointConfig, rng: np.random.Generator, n_q: int = 20) -> Report:
    """Odd symmetry, S6 equivariance, Pluecker sums and degree-9 products on one exact config."""
    rep = Report("Coble relations, exact")
    inp = {"points": cfg.points}
    Z = coble.coble_vector(cfg)
    with rep.check("Z at -v is -Z at v", 0, inp, exact=True) as r:
        r["residual"] = sum(1 for v in Z if Z[gf3.neg(v)] != -Z[v])
    with rep.check("S6 equivariance", 0, inp, exact=True) as r:
        r["residual"] = _s6_failures(cfg, Z, rng)
    with rep.check("Pluecker sums over isotropic spans", 0, inp, exact=True) as r:
        r["residual"] = sum(1 for w in gf3.enumerate_R() if sum(Z[v] for v in gf3.isotropic_span_of(w)) != 0)
    with rep.check("degree-9 products with sign", 0, inp, exact=True) as r:
        r["residual"] = sum(1 for lhs, rhs in _degree9_pairs(Z, rng, n_q) if lhs != rhs)
    return rep


def _s6_words(rng: np.random.Generator, n: int = 16) -> list[tuple]:
    words = []
    for i in range(5):
        p = list(range(1, 7))
        p[i], p[i + 1] = p[i + 1], p[i]
        words.append(tuple(p))
    while len(words) < n:
        words.append(tuple(int(x) + 1 for x in rng.permutation(6)))
    return words


def _s6_failures(cfg, Z, rng, n: int = 16) -> int:
    bad = 0
    for p in _s6_words(rng, n):
        g = gf3.s6_matrix(p)
        Zg = coble.coble_vector(coble.s6_act_config(p, cfg), check=False)
        bad += sum(1 for v in Z if Zg[v] != Z[gf3.apply(v, g)])
    return bad


def _signed_reps(reps, rng):
    return [gf3.vec(s * x for x in v) for s, v in zip(rng.choice([1, 2], len(reps)), reps)]


def _degree9_pairs(vals: dict, rng: np.random.Generator, n: int):
    Q = gf3.enumerate_Q()
    for k in rng.choice(len(Q), size=min(n, len(Q)), replace=False):
        P1, P2 = Q[int(k)]
        A, B = gf3.plane_reps(P1, P2)
        A, B = _signed_reps(A, rng), _signed_reps(B, rng)
        eps = gf3.epsilon_sign(A, B)
        yield math.prod(vals[v] for v in A), eps * math.prod(vals[v] for v in B)


def verify_cubic_theta(tau: np.ndarray, tol: float = 1e-5, spec: theta.TruncationSpec = theta.TruncationSpec(),
                       cubes: dict | None = None, seed: int = 0) -> Report:
    rep = Report("cubic theta relations")
    rng = np.random.default_rng(seed)
    T = cubes if cubes is not None else _stage("theta", theta.theta_cubes, _sym(tau), spec)
    inp = {"tau": tau, "tol": tol}

    def norm_sum(vs):
        return abs(sum(T[v] for v in vs)) / max(abs(T[v]) for v in vs)

    spans = [gf3.isotropic_span_of(w) for w in gf3.enumerate_R()]
    with rep.check("every isotropic span sums to zero", tol, inp) as r:
        res = [norm_sum(vs) for vs in spans]
        r["residual"] = max(res)
        r["details"] = {"pairs": len(res)}
    with rep.check("global sign flip keeps the modulus", 1e-12, inp) as r:
        r["residual"] = max(abs(norm_sum(vs) - norm_sum([gf3.neg(v) for v in vs])) for vs in spans[:20])
    with rep.check("negative control: non-isotropic quadruples fail", 0, inp, exact=True) as r:
        S = gf3.enumerate_S()
        misses = 0
        tried = 0
        for vs in spans[:: 27]:
            # swap one vector for a random S-vector outside the span
            out = [v for v in S if v not in vs and gf3.neg(v) not in vs]
            b = list(vs[:3]) + [out[int(rng.integers(len(out)))]]
            tried += 1
            misses += norm_sum(b) < tol
        r["residual"] = misses
        r["details"] = {"tried": tried}
    return rep


def verify_degree9(cfg: coble.PointConfig | None = None, tau: np.ndarray | None = None, tol: float = 1e-4,
                   spec: theta.TruncationSpec = theta.TruncationSpec(), seed: int = 0, n: int = 20,
                   cubes: dict | None = None) -> Report:
    rep = Report("degree-9 relations")
    rng = np.random.default_rng(seed)
    if cfg is not None:
        Z = _stage("coble", coble.coble_vector, cfg)
        exact = cfg.is_exact()
        inp = {"points": cfg.points, "seed": seed}
        with rep.check("reference triple identity", 0 if exact else 1e-10, inp, exact=exact) as r:
            v = [(1, 1, 0, 1, 0), (0, 1, 1, -1, 0), (1, -1, 1, 0, 0)]
            w = [(-1, 0, 0, -1, -1), (1, 0, 1, 0, -1), (0, 0, 1, -1, 1)]
            lhs = math.prod(Z[gf3.vec(x)] for x in v)
            rhs = math.prod(Z[gf3.vec(x)] for x in w)
            r["residual"] = abs(lhs - rhs) if exact else _rel(lhs, rhs)
        with rep.check("sampled plane pairs", 0 if exact else 1e-10, inp, exact=exact) as r:
            r["residual"] = max((abs(lhs - rhs) if exact else _rel(lhs, rhs))
                                for lhs, rhs in _degree9_pairs(Z, rng, n))
        with rep.check("sign flips with one representative", 0, inp, exact=True) as r:
            P1, P2 = gf3.enumerate_Q()[0]
            A, B = gf3.plane_reps(P1, P2)
            A2 = [gf3.neg(A[0])] + list(A[1:])
            r["residual"] = int(gf3.epsilon_sign(A, B) != -gf3.epsilon_sign(A2, B))
    if tau is not None:
        T = cubes if cubes is not None else _stage("theta", theta.theta_cubes, _sym(tau), spec)
        with rep.check("theta products on sampled plane pairs", tol, {"tau": tau, "seed": seed}) as r:
            r["residual"] = max(_rel(lhs, rhs) for lhs, rhs in _degree9_pairs(T, rng, n))
    return rep


# ---------------------------------------------------------------- vanishing tables

# orders at (p1..p5, p0) and (sigma p1..sigma p5, p_inf)
VANISHING_TABLES = {
    (1, 1, 0, 0, 0): ((2, 2, 0, 0, 0, 2), (1, 1, 0, 0, 0, 2)),
    (1, 1, 1, 0, 0): ((0, 0, 0, 1, 1, 0), (2, 2, 2, 1, 1, 0)),
    (1, 1, 1, 1, 0): ((1, 1, 1, 1, 2, 1), (0, 0, 0, 0, 2, 1)),
}
IDENTICALLY_ZERO = ((0, 0, 0, 0, 0), (1, 0, 0, 0, 0), (1, 1, 1, 1, 1))


@dataclass
class MarkedPoint:
    name: str
    image: np.ndarray
    approach: object  # delta -> Abel-Jacobi vector of a nearby curve point
    ramification: int
    torsion: tuple


def torsion_class(w: np.ndarray, pd: periods.PeriodData, tol: float = 1e-6) -> tuple:
    """The residue vector v with w congruent to the lift of v modulo the lattice."""
    for v in gf3.all_vectors():
        if periods.lattice_reduce(w - periods.v_lift(v, pd.S), pd.tau)[2] < tol:
            return v
    raise ValueError("point is not a (1 - rho)-torsion point")


def marked_points(pd: periods.PeriodData) -> list[MarkedPoint]:
    a2 = [0.0] + [x * x for x in pd.a]
    pts = []
    for sgn, fmt in ((1, "p{}"), (-1, "sigma(p{})")):
        for i in range(1, 6):
            c, L = a2[i], a2[i] - a2[i - 1]
            img = sgn * periods.abel_jacobi_branch(i, pd)
            pts.append(MarkedPoint(fmt.format(i), img,
                                   lambda d, i=i, c=c, L=L, s=sgn: s * periods.aj_point(pd, i, c - d * L), 3,
                                   torsion_class(img, pd)))
        if sgn == 1:
            pts.append(MarkedPoint("p0", np.zeros(5, complex), lambda d: periods.aj_point(pd, 1, d * a2[1]), 6,
                                   (0,) * 5))
    inf = periods.abel_jacobi_infinity(pd)
    pts.append(MarkedPoint("p_inf", inf, lambda d: periods.aj_point(pd, 0, -1 / d), 6, torsion_class(inf, pd)))
    return pts


def vanishing_order(v, pt: MarkedPoint, tau, spec, deltas=(1e-6, 1e-9)) -> float:
    """Exponent fit of |Theta| along the approach, in the local parameter."""
    d1, d2 = deltas
    t1 = abs(theta.restricted_theta(v, pt.approach(d1), tau, spec))
    t2 = abs(theta.restricted_theta(v, pt.approach(d2), tau, spec))
    if t1 == 0 or t2 == 0:
        return float("nan")
    return pt.ramification * math.log(t2 / t1) / math.log(d2 / d1)


def verify_vanishing_tables(pd: periods.PeriodData, spec: theta.TruncationSpec = theta.TruncationSpec(),
                            seed: int = 0, zero_rel: float = 1e-8) -> Report:
    rep = Report("vanishing at marked points")
    rng = np.random.default_rng(seed)
    tau = _sym(pd.tau)
    pts = _stage("abel-jacobi", marked_points, pd)
    typical = float(np.median([abs(theta.theta(theta.ZERO_CHAR, tau, rng.random(5) @ tau + rng.random(5), spec,
                                               normalized=True)) for _ in range(50)]))
    thresh = zero_rel * typical
    inp = {"a": pd.a, "seed": seed}
    for v, (top, bottom) in VANISHING_TABLES.items():
        expected = dict(zip([p.name for p in pts], top[:5] + (top[5],) + bottom[:5] + (bottom[5],)))
        observed_zero, orders = {}, {}
        for p in pts:
            observed_zero[p.name] = abs(theta.restricted_theta(v, p.image, tau, spec)) < thresh
            orders[p.name] = vanishing_order(v, p, tau, spec)
        lab = gf3.label(v)
        with rep.check(f"[{lab}] zero pattern", 0, inp, exact=True) as r:
            r["residual"] = sum(1 for k in expected if observed_zero[k] != (expected[k] >= 1))
            r["details"] = {"zero": observed_zero}
        rounded = {k: int(round(x)) for k, x in orders.items()}
        with rep.check(f"[{lab}] orders sum to 10", 0, inp, exact=True) as r:
            r["residual"] = abs(sum(rounded.values()) - 10)
            r["details"] = {"fitted": {k: round(x, 3) for k, x in orders.items()}}
        with rep.check(f"[{lab}] order mod 3 equals q(v + j(p))", 0, inp, exact=True) as r:
            r["residual"] = sum(1 for p in pts
                                if rounded[p.name] % 3 != gf3.q_value(gf3.add(v, p.torsion)))
        with rep.check(f"[{lab}] fitted orders equal the table", 0.05, inp, gated=False) as r:
            r["residual"] = max(abs(orders[k] - expected[k]) for k in expected)
    with rep.check("distance 0, 1, 5: identically zero", 0, inp, exact=True) as r:
        hits = 0
        for v in IDENTICALLY_ZERO:
            for p in pts:
                for d in (0.3, 0.01):
                    hits += abs(theta.restricted_theta(v, p.approach(d), tau, spec)) >= thresh
        r["residual"] = hits
        r["details"] = {"threshold": thresh}
    return rep


# ---------------------------------------------------------------- conventions

CREMONA_NUM = (0, 0, 1, 1, -1)
CREMONA_DEN = (1, 1, 0, 0, -1)
CREMONA_IMAGE = (-1, -1, 0, -1, 0)
CREMONA_ALT_DEN = (0, 1, 0, 1, -1)


def cremona_identity(cfg: coble.PointConfig, numerator=CREMONA_IMAGE, denominator=CREMONA_DEN) -> tuple:
    """Both sides of Z_num/Z_den (r123 x) = Z_numerator/Z_denominator (x)."""
    img = coble.cremona_r123(cfg)
    lhs = coble.z_of(gf3.vec(CREMONA_NUM), img) / coble.z_of(gf3.vec(CREMONA_DEN), img)
    rhs = coble.z_of(gf3.vec(numerator), cfg) / coble.z_of(gf3.vec(denominator), cfg)
    return lhs, rhs


def quotient_ratio(a) -> dict:
    """Z_{+1+2+3}/Z_{+1+2-3} on the normal form against the closed expression."""
    cfg = coble.normal_form_config(coble.CurveParams.of(a))
    r = coble.z_of((1, 1, 1, 0, 0), cfg) / coble.z_of((1, 1, 2, 0, 0), cfg)
    a1, a2, a3 = a[:3]
    expected = abs((a3 - a2) * (a3 - a1) / ((a3 + a2) * (a3 + a1)))
    r6 = complex(r) ** 6
    return {"ratio": r, "modulus_residual": abs(abs(complex(r)) / float(expected) - 1),
            "sixth_power": r6, "sixth_power_imag": abs(r6.imag) / abs(r6), "sixth_power_positive": r6.real > 0}


def verify_conventions(a=DEFAULT_A, seed: int = 0, tol: float = 1e-10, n_random_a: int = 5) -> Report:
    rep = Report("conventions")
    rng = np.random.default_rng(seed)
    cfg = coble.random_rational_config(rng)
    Z = coble.coble_vector(cfg)
    inp = {"points": cfg.points, "a": a, "seed": seed}

    with rep.check("S6 equivariance over 16 words", 0, inp, exact=True) as r:
        r["residual"] = _s6_failures(cfg, Z, rng)

    with rep.check("Cremona image matches the reflection", 0, inp, exact=True) as r:
        Zc = coble.coble_vector(coble.cremona_r123(cfg), check=False)
        R = gf3.reflection(gf3.R123)
        ratios = {Zc[v] / Z[gf3.apply(v, R)] for v in Z}
        r["residual"] = len(ratios) - 1

    with rep.check("Cremona ratio identity, exact", 0, inp, exact=True) as r:
        lhs, rhs = cremona_identity(cfg)
        r["residual"] = abs(lhs - rhs)
    with rep.check("Cremona ratio identity, normal form", tol, inp) as r:
        nf = coble.normal_form_config(coble.CurveParams.of(tuple(float(x) for x in a))).as_complex()
        lhs, rhs = cremona_identity(nf)
        r["residual"] = _rel(lhs, rhs)
        r["details"] = {"lhs": lhs, "rhs": rhs}
    with rep.check("Cremona ratio with denominator Z_(0,1,0,1,-1)", tol, inp, gated=False) as r:
        lhs, rhs = cremona_identity(cfg, CREMONA_IMAGE, CREMONA_ALT_DEN)
        r["residual"] = _rel(float(lhs), float(rhs))

    with rep.check("projective invariance of ratios", 0, inp, exact=True) as r:
        g = [[Fraction(int(rng.integers(-5, 6))) for _ in range(3)] for _ in range(3)]
        while coble.det(g) == 0:
            g = [[Fraction(int(rng.integers(-5, 6))) for _ in range(3)] for _ in range(3)]
        t = [Fraction(int(rng.integers(1, 7)), int(rng.integers(1, 7))) for _ in range(6)]
        Zg = coble.coble_vector(coble.scale_config(cfg, g, t), check=False)
        r["residual"] = len({Zg[v] / Z[v] for v in Z}) - 1

    avs = [tuple(a)] + [tuple(np.sort(rng.uniform(0.2, 6.0, 5))) for _ in range(n_random_a)]
    with rep.check("normal-form ratio modulus", tol, {"a": avs}) as r:
        qs = [quotient_ratio(x) for x in avs]
        r["residual"] = max(q["modulus_residual"] for q in qs)
    with rep.check("normal-form ratio sixth power is positive real", 1e-9, {"a": avs}) as r:
        r["residual"] = max(q["sixth_power_imag"] for q in qs)
        r["passed"] = all(q["sixth_power_positive"] for q in qs)
    with rep.check("normal-form ratio exact for integer a", 0, {"a": a}, exact=True) as r:
        fa = _exact_fractions(a)
        q = quotient_ratio(fa)
        a1, a2, a3 = fa[:3]
        r["residual"] = abs(abs(q["ratio"]) - abs((a3 - a2) * (a3 - a1) / ((a3 + a2) * (a3 + a1))))
        r["details"] = {"ratio": q["ratio"]}
    return rep


# ---------------------------------------------------------------- optional

def verify_optional(pd: periods.PeriodData, spec: theta.TruncationSpec = theta.TruncationSpec(),
                    eq_tol: float = 1e-7, zero_tol: float = 1e-9, seed: int = 0) -> Report:
    rep = Report("optional checks")
    tau = _sym(pd.tau)
    inp = {"a": pd.a}
    with rep.check("theta at non-isotropic characteristics vanishes", zero_tol, inp, gated=False) as r:
        r["residual"] = max(abs(theta.theta(theta.char_of_v(x), tau, None, spec))
                            for x in gf3.all_vectors() if any(x) and gf3.q_value(x) != 0)
    S = gf3.enumerate_S()
    rng = np.random.default_rng(seed)
    swap = np.eye(5, dtype=np.int64)
    swap[[0, 1]] = swap[[1, 0]]
    elems = {"swap12": arith.EisMat.of(swap), "diag(-1,-1,1,1,1)": arith.EisMat.of(np.diag([-1, -1, 1, 1, 1])),
             "reflection(1,1,0,0,-2)": arith.unitary_reflection([1, 1, 0, 0, -2])}
    for name, g in elems.items():
        with rep.check(f"theta cube ratios under {name}", eq_tol, inp, gated=False) as r:
            i, j = rng.choice(len(S), 2, replace=False)
            d = theta.equivariance_residual(g, S[int(i)], S[int(j)], tau, spec)
            r["residual"] = d["rel"]
            r["details"] = {"v": gf3.label(S[int(i)]), "w": gf3.label(S[int(j)])}
    return rep


# ---------------------------------------------------------------- driver

def parse_suites(spec: str | Sequence[str]) -> list[str]:
    items = spec.replace(",", " ").split() if isinstance(spec, str) else list(spec)
    if "all" in items:
        return [s for s in SUITES if s != "optional"] + (["optional"] if "optional" in items else [])
    bad = [s for s in items if s not in SUITES]
    if bad:
        raise ValueError(f"unknown suites {bad}; choose from {SUITES + ('all',)}")
    return items


def run_suites(suites, a=DEFAULT_A, tol: float = 1e-5, seed: int = 0,
               spec: theta.TruncationSpec = theta.TruncationSpec(), get_periods=None,
               cfg: coble.PointConfig | None = None, second_a=SECOND_A) -> Report:
    """Run named suites and merge them into a single report."""
    suites = parse_suites(suites)
    rep = Report(f"verify {' '.join(suites)}", seed=seed)
    if get_periods is None:
        get_periods = periods.compute_periods
    cache: dict = {}

    def pd_for(x):
        if x not in cache:
            cache[x] = _stage("periods", get_periods, x)
        return cache[x]

    def cubes_for(x):
        key = ("cubes", x)
        if key not in cache:
            cache[key] = _stage("theta", theta.theta_cubes, _sym(pd_for(x).tau), spec)
        return cache[key]

    a = tuple(a)
    rng = np.random.default_rng(seed)
    if "geometry" in suites:
        rep.extend(verify_finite_geometry())
    if "periods" in suites:
        rep.extend(verify_periods(pd_for(a)))
    if "theta" in suites:
        rep.extend(verify_theta_identities(pd_for(a).tau, "computed tau", spec=spec, seed=seed))
        rep.extend(verify_theta_identities(arith.tau0(), "tau0", rho_tol=1e-9, spec=spec, seed=seed))
    if "main" in suites:
        rep.extend(verify_proportionality(a, pd_for(a), tol, spec, seed))
        if second_a is not None and tuple(second_a) != a:
            rep.extend(verify_proportionality(tuple(second_a), pd_for(tuple(second_a)), tol, spec, seed))
    if "plucker" in suites:
        c = cfg if cfg is not None else coble.random_rational_config(rng)
        rep.extend(verify_plucker(c))
        rep.extend(verify_plucker(coble.normal_form_config(coble.CurveParams.of(a)).as_complex()))
    if "cubic" in suites:
        rep.extend(verify_cubic_theta(pd_for(a).tau, tol, spec, cubes_for(a), seed))
    if "degree9" in suites:
        c = cfg if cfg is not None else coble.random_rational_config(rng)
        rep.extend(verify_degree9(c, pd_for(a).tau, seed=seed, cubes=cubes_for(a)))
    if "tables" in suites:
        rep.extend(verify_vanishing_tables(pd_for(a), spec, seed))
    if "conventions" in suites:
        rep.extend(verify_conventions(a, seed))
    if "optional" in suites:
        rep.extend(verify_optional(pd_for(a), spec, seed=seed))
    return rep
