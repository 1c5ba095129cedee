"""Period matrix of the Prym variety of y^3 = x prod (a_i^2 - x^2).

Everything is integrated in xi = x^2, where the curve reads
y^6 = xi prod (xi - a_i^2)^2 and a form x^a dx / y^b becomes
(1/2) x^(a-1) y^(-b) dxi.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np

from . import arith, gf3
from .quadrature import QuadratureError, integrate, integrate_checked

OMEGA = arith.OMEGA
ZETA = np.exp(1j * np.pi / 3)
FORMS = ((1, 1), (0, 2), (2, 2), (4, 2), (6, 2))
# eigenvalue of rho^* (y -> omega y) on each form
LAMBDA = np.array([OMEGA ** (-b) for _, b in FORMS])
# y -> zeta y, x -> zeta^3 x multiplies x^a dx / y^b by zeta^(3(a+1) - b)
DECK = np.array([(3 * (a + 1) - b) % 6 for a, b in FORMS])
DECK = np.where(DECK > 3, DECK - 6, DECK)
H = arith.H.astype(float)

# coefficient of row j in the homology relation among the paths
_REL = np.array(
    [1 + LAMBDA**2, 1 - LAMBDA, 1 - LAMBDA**2, 0 * LAMBDA, 1 - LAMBDA, 1 - LAMBDA**2]
)


class CalibrationError(RuntimeError):
    pass


# ---------------------------------------------------------------- integrands

def _form_values(logxi, logy, xfac, yfac, jac_log=0.0):
    """Values of the five forms (times dxi / dparameter) at a batch of nodes."""
    out = np.empty(np.shape(logxi) + (5,), dtype=complex)
    for k, (a, b) in enumerate(FORMS):
        mag = np.exp(0.5 * (a - 1) * logxi - b * logy + jac_log)
        out[..., k] = 0.5 * mag * xfac ** (a - 1) * yfac ** (-b)
    return out


def _branch_logdist(a2, xi, lo, hi, dl, dr):
    """sum_i log|xi - a_i^2| and sign of prod (a_i^2 - xi), exact near lo / hi."""
    logd = np.zeros_like(xi)
    sgn = np.ones_like(xi)
    for c in a2:
        if c == lo:
            f = -dl
        elif c == hi:
            f = dr
        else:
            f = c - xi
        logd += np.log(np.abs(f))
        sgn *= np.sign(f)
    return logd, sgn


def _positive_piece(a2, lo, hi):
    def f(xi, dl, dr):
        logd, sgn = _branch_logdist(a2, xi, lo, hi, dl, dr)
        if lo == 0:
            lx = np.log(dl)
        else:
            lx = np.log(xi)
        logy = (lx + 2 * logd) / 6
        # y > 0, x = y^3 / prod(a_i^2 - xi) has the sign of the product
        return _form_values(lx, logy, sgn, 1.0)
    return f


_Y_NEG = np.exp(1j * np.pi / 6)


def _negative_piece(a2, lo, hi):
    def f(xi, dl, dr):
        logd, _ = _branch_logdist(a2, xi, lo, hi, dl, dr)
        lx = np.log(dr) if hi == 0 else np.log(-xi)
        logy = (lx + 2 * logd) / 6
        # y = |y| e^{i pi/6}, x = y^3 / prod = i |x|
        return _form_values(lx, logy, 1j, _Y_NEG)
    return f


def _tail_piece(a2):
    """Integrand in u for xi = -1/u, u in (0, u_hi]."""
    def f(u, dl, dr):
        lu = np.log(dl)
        logd = np.zeros_like(u)
        for c in a2:
            logd += -lu + np.log1p(c * dl)
        lx = -lu
        logy = (lx + 2 * logd) / 6
        return _form_values(lx, logy, 1j, _Y_NEG, jac_log=-2 * lu)
    return f


def path_integral(a, lo: float, hi: float, tol: float = 1e-12, h: float = 1 / 64,
                  checked: bool = True) -> np.ndarray:
    """Integrals of the five forms along (lo, hi) on the unit-phase branch.

    The interval must sit inside one segment of the real xi-line cut at
    -inf, 0, a_1^2, ..., a_5^2.  ``lo`` may be -inf.
    """
    a2 = np.asarray(a, dtype=float) ** 2
    run = (lambda f, c, d, what: integrate_checked(f, c, d, tol, h, what=what)[0]) if checked else \
        (lambda f, c, d, what: integrate(f, c, d, h))
    if hi <= 0:
        total = np.zeros(5, dtype=complex)
        cut = -1.0
        if np.isinf(lo):
            top = min(hi, cut)
            total += run(_tail_piece(a2), 0.0, -1.0 / top, f"(-inf, {top})")
            lo = top
        if hi > lo:
            total += run(_negative_piece(a2, lo, hi), lo, hi, f"({lo}, {hi})")
        return total
    if lo < 0:
        raise ValueError("interval crosses 0")
    return run(_positive_piece(a2, lo, hi), lo, hi, f"({lo}, {hi})")


def segment_bounds(a, j: int) -> tuple[float, float]:
    """xi-range of gamma_j: gamma_0 = (-inf, 0), gamma_1 = (0, a_1^2), ..."""
    a2 = [0.0] + [float(x) ** 2 for x in a]
    if j == 0:
        return -np.inf, 0.0
    return a2[j - 1], a2[j]


def base_integrals(a, tol: float = 1e-12, h: float = 1 / 64) -> np.ndarray:
    """6x5 table of raw path integrals, rows gamma_0..gamma_5."""
    rows = [path_integral(a, *segment_bounds(a, j), tol=tol, h=h) for j in range(6)]
    return np.array(rows)


# ---------------------------------------------------------------- calibration

def apply_calibration(I: np.ndarray, phases) -> np.ndarray:
    m = np.asarray(phases)
    return I * ZETA ** (m[:, None] * DECK[None, :])


def relation_residual(Ic: np.ndarray) -> float:
    rel = np.sum(_REL * Ic, axis=0)
    return float(np.max(np.abs(rel) / np.max(np.abs(Ic), axis=0)))


def beta_alpha_periods(Ic: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Periods of the raw forms over B_i and A_i (rows) from calibrated rows."""
    L = LAMBDA
    b = np.empty((5, 5), dtype=complex)
    b[0] = (1 + L**2) * Ic[0]
    b[1] = (-L**2 - L) * Ic[0] + (1 - L**2) * Ic[1]
    b[2] = (1 - L**2) * Ic[3]
    b[3] = (1 - L**2) * Ic[5]
    b[4] = (1 - L) * Ic[3] + (1 - L**2) * Ic[4] + (L - L**2) * Ic[5]
    PB = 2 * b  # sigma is -1 on these forms, so B = beta - sigma beta doubles
    PA = H @ PB * L[None, :]
    return PB, PA


@dataclass
class PeriodData:
    a: tuple
    I: np.ndarray
    phases: tuple
    PB: np.ndarray
    PA: np.ndarray
    tau: np.ndarray
    checks: dict = field(default_factory=dict)

    @property
    def S(self) -> np.ndarray:
        return H @ self.tau

    @property
    def PB_inv(self) -> np.ndarray:
        return np.linalg.inv(self.PB)

    def calibrated(self) -> np.ndarray:
        return apply_calibration(self.I, self.phases)

    def to_json(self) -> dict:
        cx = lambda m: [[[float(z.real), float(z.imag)] for z in row] for row in np.atleast_2d(m)]
        return {
            "a": [float(x) for x in self.a],
            "phases": list(map(int, self.phases)),
            "I": cx(self.I),
            "PB": cx(self.PB),
            "PA": cx(self.PA),
            "tau": cx(self.tau),
            "checks": self.checks,
        }

    @classmethod
    def from_json(cls, d: dict) -> "PeriodData":
        cx = lambda m: np.array([[complex(re, im) for re, im in row] for row in m])
        return cls(tuple(d["a"]), cx(d["I"]), tuple(d["phases"]), cx(d["PB"]), cx(d["PA"]),
                   cx(d["tau"]), dict(d.get("checks", {})))


def structure_checks(tau: np.ndarray) -> dict:
    im = (tau.imag + tau.imag.T) / 2
    return {
        "symmetry": float(np.abs(tau - tau.T).max()),
        "min_eig_im": float(np.linalg.eigvalsh(im).min()),
        "quadratic": arith.quadratic_residual(tau),
        "omega_bar_dim": arith.omega_bar_eigenspace_dim(tau),
    }


def _admissible(checks: dict, tol: float) -> bool:
    return (checks["symmetry"] < tol and checks["min_eig_im"] > 0
            and checks["quadratic"] < tol and checks["omega_bar_dim"] == 1)


@lru_cache(maxsize=1)
def _all_phases() -> np.ndarray:
    return np.array(list(itertools.product(range(6), repeat=6)), dtype=np.int64)


def calibrate_sheets(I: np.ndarray, tol: float = 1e-8) -> dict:
    """Search all 6^6 per-path deck labels for ones satisfying the homology
    relation and producing a period point on the ball locus."""
    m = _all_phases()
    fac = ZETA ** (m[:, :, None] * DECK[None, None, :])
    Ic = fac * I[None]
    rel = np.abs(np.einsum("jk,njk->nk", _REL, Ic)) / np.max(np.abs(I), axis=0)[None]
    cand = np.nonzero(rel.max(axis=1) < tol)[0]
    admissible = []
    for n in cand:
        PB, PA = beta_alpha_periods(Ic[n])
        if np.linalg.cond(PB) > 1e12:
            continue
        tau = PA @ np.linalg.inv(PB)
        if _admissible(structure_checks(tau), tol):
            admissible.append(tuple(int(x) for x in m[n]))
    if not admissible:
        raise CalibrationError(
            f"no admissible sheet labels; best relation residual {rel.max(axis=1).min():.3g}")
    classes = {tuple(sorted(tuple((x + s) % 6 for x in p) for s in range(6))[0]) for p in admissible}
    return {
        "phases": min(admissible),
        "n_admissible": len(admissible),
        "n_classes": len(classes),
        "relation_candidates": int(len(cand)),
    }


def assemble_tau(PB: np.ndarray, PA: np.ndarray) -> np.ndarray:
    c = np.linalg.cond(PB)
    if c > 1e12:
        raise np.linalg.LinAlgError(f"B-periods ill-conditioned (cond {c:.3g})")
    return PA @ np.linalg.inv(PB)


def compute_periods(a, tol: float = 1e-12, structure_tol: float = 1e-8, h: float = 1 / 64) -> PeriodData:
    a = tuple(float(x) for x in a)
    if len(a) != 5 or any(x <= 0 for x in a) or any(x >= y for x, y in zip(a, a[1:])):
        raise ValueError("need 0 < a_1 < ... < a_5")
    I = base_integrals(a, tol=tol, h=h)
    cal = calibrate_sheets(I, structure_tol)
    Ic = apply_calibration(I, cal["phases"])
    PB, PA = beta_alpha_periods(Ic)
    tau = assemble_tau(PB, PA)
    checks = structure_checks(tau)
    checks["relation"] = relation_residual(Ic)
    checks["cond_PB"] = float(np.linalg.cond(PB))
    checks.update({k: v for k, v in cal.items() if k != "phases"})
    pd = PeriodData(a, I, tuple(cal["phases"]), PB, PA, tau, checks)
    return pd


# ---------------------------------------------------------------- Abel-Jacobi

def lattice_reduce(w: np.ndarray, tau: np.ndarray) -> tuple[np.ndarray, np.ndarray, float]:
    """Write w = u tau + v with real u, v; residual is the distance of (u, v)
    to the nearest integer pair."""
    w = np.asarray(w, dtype=complex)
    A = np.block([[tau.real.T, np.eye(5)], [tau.imag.T, np.zeros((5, 5))]])
    sol = np.linalg.solve(A, np.concatenate([w.real, w.imag]))
    u, v = sol[:5], sol[5:]
    res = float(np.abs(sol - np.round(sol)).max())
    return u, v, res


def v_lift(v, S: np.ndarray) -> np.ndarray:
    """Representative in C^5 of the (1 - rho)-torsion point labelled by v."""
    beta = np.asarray(gf3.signed(v), dtype=float) @ arith.M_BASIS
    return beta @ (np.eye(5) - S) / 3.0


def abel_jacobi_branch(i: int, pd: PeriodData) -> np.ndarray:
    """Normalized image of p_i, integrated from p_0 along gamma_1..gamma_i."""
    if not 1 <= i <= 5:
        raise ValueError("branch index must be in 1..5")
    Ic = pd.calibrated()
    return 2 * Ic[1:i + 1].sum(axis=0) @ pd.PB_inv


def abel_jacobi_infinity(pd: PeriodData) -> np.ndarray:
    return -2 * pd.calibrated()[0] @ pd.PB_inv


def aj_congruence(pd: PeriodData) -> list[float]:
    out = []
    for i in range(1, 6):
        e = [0] * 5
        e[i - 1] = 1
        w = abel_jacobi_branch(i, pd) - v_lift(e, pd.S)
        out.append(lattice_reduce(w, pd.tau)[2])
    return out


def partial_path(pd: PeriodData, j: int, lo: float, hi: float, tol: float = 1e-12) -> np.ndarray:
    """Calibrated integral over the part (lo, hi) of gamma_j (raw forms)."""
    raw = path_integral(pd.a, lo, hi, tol=tol)
    return raw * ZETA ** (pd.phases[j] * DECK)


def aj_point(pd: PeriodData, j: int, xi: float, tol: float = 1e-12) -> np.ndarray:
    """Normalized image of the point over xi on the calibrated sheet of gamma_j,
    integrated from p_0 (j >= 1) or from p_0 backwards along gamma_0 (j = 0)."""
    Ic = pd.calibrated()
    c, d = segment_bounds(pd.a, j)
    if not c <= xi <= d:
        raise ValueError("xi is outside the segment")
    if j == 0:
        if xi < -1.0:
            w = -(Ic[0] - partial_path(pd, 0, -np.inf, xi, tol))
        else:
            w = -partial_path(pd, 0, xi, 0.0, tol) if xi < 0 else np.zeros(5, complex)
    else:
        before = Ic[1:j].sum(axis=0)
        # integrate over the shorter side for accuracy near the far endpoint
        if xi - c <= d - xi:
            w = before + (partial_path(pd, j, c, xi, tol) if xi > c else 0)
        else:
            w = before + Ic[j] - (partial_path(pd, j, xi, d, tol) if xi < d else 0)
    return 2 * w @ pd.PB_inv
