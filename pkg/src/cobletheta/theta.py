"""Genus-5 theta functions with rational characteristics.

Theta_m(tau, z) = sum_p e(1/2 (p+m') tau (p+m') + (p+m') (z+m'')),
e(x) = exp(2 pi i x).  The series is cut to the integer points of a box
(radius from a Gaussian tail bound) that also lie in the ellipsoid where the
term modulus is within ``tol * exp(-margin)`` of the largest term.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import _kernels, arith, gf3
from .periods import v_lift

H = arith.H.astype(float)
HALF = np.full(5, 0.5)
ONES = np.ones(5)

# beta as dot products with fixed rows; an alternative sign convention kept for comparison runs
ROW_FORM_R = np.array(
    [
        [-1, -1, -1, -1, -1],
        [-1, 1, 1, 1, 1],
        [0, -1, 1, 0, 0],
        [0, 0, 0, -1, 1],
        [0, 1, 1, -1, -1],
    ],
    dtype=np.int64,
)


def e(x):
    return np.exp(2j * np.pi * x)


@dataclass(frozen=True)
class ThetaChar:
    mp: tuple
    mpp: tuple

    @classmethod
    def of(cls, mp: Sequence, mpp: Sequence) -> "ThetaChar":
        return cls(tuple(mp), tuple(mpp))

    def arrays(self) -> tuple[np.ndarray, np.ndarray]:
        return np.array([float(x) for x in self.mp]), np.array([float(x) for x in self.mpp])

    def __neg__(self) -> "ThetaChar":
        return ThetaChar(tuple(-x for x in self.mp), tuple(-x for x in self.mpp))

    def shifted(self, p: Sequence[int], q: Sequence[int]) -> "ThetaChar":
        return ThetaChar(tuple(a + b for a, b in zip(self.mp, p)), tuple(a + b for a, b in zip(self.mpp, q)))


ZERO_CHAR = ThetaChar((0,) * 5, (0,) * 5)
HALF_CHAR = ThetaChar((Fraction(1, 2),) * 5, (Fraction(1, 2),) * 5)


@dataclass(frozen=True)
class TruncationSpec:
    tol: float = 1e-12
    radius: int | None = None
    prune: bool = True
    margin: float = 12.0


class ThetaDomainError(ValueError):
    pass


def truncation_radius(tau: np.ndarray, mp: np.ndarray, tol: float) -> int:
    lam = float(np.linalg.eigvalsh((tau.imag + tau.imag.T) / 2).min())
    if lam <= 0:
        raise ThetaDomainError("Im tau is not positive definite")
    return int(math.ceil(math.sqrt(math.log(1 / tol) * 5 / (math.pi * lam)) + np.abs(mp).max() + 1))


def _prepare(tau: np.ndarray, mp: np.ndarray, z: np.ndarray, spec: TruncationSpec):
    Y = (tau.imag + tau.imag.T) / 2
    try:
        L = np.linalg.cholesky(Y)
    except np.linalg.LinAlgError as exc:
        raise ThetaDomainError("Im tau is not positive definite") from exc
    U = L.T
    y = np.imag(z)
    n0 = -np.linalg.solve(Y, y)  # centre of the Gaussian in n = p + m'
    shift = math.pi * float(y @ np.linalg.solve(Y, y))  # log of the largest modulus
    c = n0 - mp
    R = spec.radius if spec.radius is not None else truncation_radius(tau, mp, spec.tol)
    centre = np.round(c).astype(np.int64)
    lo, hi = centre - R, centre + R
    if spec.prune:
        r2 = (math.log(1 / spec.tol) + spec.margin) / math.pi
    else:
        r2 = np.inf
    return U, c, r2, lo, hi, shift


def theta(m: ThetaChar, tau: np.ndarray, z=None, spec: TruncationSpec = TruncationSpec(),
          use_numba: bool | None = None, normalized: bool = False, with_count: bool = False):
    """Theta with characteristic m at (tau, z).

    With ``normalized`` the value is divided by exp(pi y Y^-1 y), y = Im z,
    which removes the growth in Im z; handy when comparing sizes.
    """
    tau = np.asarray(tau, dtype=complex)
    z = np.zeros(5, complex) if z is None else np.asarray(z, dtype=complex)
    mp, mpp = m.arrays()
    U, c, r2, lo, hi, shift = _prepare(tau, mp, z, spec)
    if not np.isfinite(r2):
        r2 = 1e300
    # the leading exponent is -pi (n - n0) Y (n - n0) + shift; subtract shift,
    # the quadratic term in n0 is exactly the shift
    val, cnt = _kernels.theta_sum(U, c, r2, lo, hi, mp, tau, z + mpp, shift, use_numba)
    if not normalized:
        val = val * math.exp(shift)
    return (val, cnt) if with_count else val


def char_shift_factor(m: ThetaChar, p: Sequence[int], q: Sequence[int]) -> complex:
    """Theta_{m + (p, q)} = e(m' . q) Theta_m for integer p, q."""
    mp, _ = m.arrays()
    return complex(e(float(mp @ np.asarray(q, dtype=float))))


def const_from_function(a: Sequence, b: Sequence, tau: np.ndarray, spec: TruncationSpec = TruncationSpec()):
    """Both sides of Theta_{(a,b)}(tau) = Theta(tau, a tau + b) e(1/2 a tau a + a b)."""
    a_ = np.array([float(x) for x in a])
    b_ = np.array([float(x) for x in b])
    lhs = theta(ThetaChar.of(a, b), tau, None, spec)
    rhs = theta(ZERO_CHAR, tau, a_ @ tau + b_, spec) * e(0.5 * a_ @ tau @ a_ + a_ @ b_)
    return lhs, complex(rhs)


# ---------------------------------------------------------------- S-indexed constants

def beta_of(v, lift=None, convention: str = "basis") -> np.ndarray:
    """Coordinates of the lifted vector in the delta-bar basis."""
    lv = np.asarray(gf3.signed(v) if lift is None else lift, dtype=np.int64)
    if lift is not None and gf3.vec(lv) != gf3.vec(v):
        raise ValueError("lift is not congruent to v mod 3")
    if convention == "basis":
        return lv @ arith.M_BASIS
    if convention == "rows":
        return ROW_FORM_R @ lv
    raise ValueError(f"unknown convention {convention!r}")


def char_of_v(v, lift=None, convention: str = "basis") -> ThetaChar:
    beta = beta_of(v, lift, convention)
    mp = tuple(Fraction(1, 2) - Fraction(int(x), 3) for x in beta @ arith.H)
    mpp = tuple(Fraction(1, 2) + Fraction(int(x), 3) for x in beta)
    return ThetaChar(mp, mpp)


def theta_v_cubed(v, tau: np.ndarray, spec: TruncationSpec = TruncationSpec(), lift=None,
                  convention: str = "basis") -> complex:
    return complex(theta(char_of_v(v, lift, convention), tau, None, spec)) ** 3


def theta_cubes(tau: np.ndarray, spec: TruncationSpec = TruncationSpec(), convention: str = "basis",
                vs=None) -> dict:
    vs = gf3.enumerate_S() if vs is None else vs
    return {v: theta_v_cubed(v, tau, spec, convention=convention) for v in vs}


def rho_transform_residual(tau: np.ndarray, z, spec: TruncationSpec = TruncationSpec()) -> dict:
    """Residual of Theta_{1/2,1/2}(tau, z (H tau)^-1) = e(1/2 z tau^-1 z) Theta_{1/2,1/2}(tau, z)."""
    z = np.asarray(z, dtype=complex)
    lhs = theta(HALF_CHAR, tau, z @ np.linalg.inv(H @ tau), spec)
    rhs = e(0.5 * z @ np.linalg.inv(tau) @ z) * theta(HALF_CHAR, tau, z, spec)
    return {"abs": float(abs(lhs - rhs)), "scale": float(max(abs(lhs), abs(rhs))),
            "lhs": complex(lhs), "rhs": complex(rhs)}


def mod4_condition(g: arith.EisMat) -> bool:
    one = np.ones(5, dtype=np.int64)
    return int((one @ g.A - one) @ one) % 4 == 0


def equivariance_residual(g: arith.EisMat, v, w, tau: np.ndarray, spec: TruncationSpec = TruncationSpec()) -> dict:
    """Ratio identity Theta_v^3 / Theta_w^3 at iota(g) tau versus the pair
    moved by pi(g) at tau, for integral orthogonal g."""
    if np.any(g.B):
        raise ValueError("g must have rational integer entries")
    if not arith.is_unitary(g):
        raise ValueError("g is not in O(4,1)")
    if not mod4_condition(g):
        raise ValueError("(1 g - 1) . 1 is not divisible by 4")
    tau2 = arith.sp_act(arith.iota(g), tau)
    tau2 = (tau2 + tau2.T) / 2
    P = arith.pi_f3(g)
    lhs = theta_v_cubed(v, tau2, spec) / theta_v_cubed(w, tau2, spec)
    rhs = theta_v_cubed(gf3.apply(v, P), tau, spec) / theta_v_cubed(gf3.apply(w, P), tau, spec)
    return {"abs": float(abs(lhs - rhs)), "rel": float(abs(lhs - rhs) / max(abs(rhs), 1e-300)),
            "lhs": complex(lhs), "rhs": complex(rhs)}


def restricted_theta(v, jvec: np.ndarray, tau: np.ndarray, spec: TruncationSpec = TruncationSpec(),
                     normalized: bool = True) -> complex:
    """Theta(1/2 (1 tau + 1) + lift(v) + j) for a normalized Abel-Jacobi vector j."""
    S = H @ tau
    z = 0.5 * (ONES @ tau + ONES) + v_lift(v, S) + np.asarray(jvec)
    return complex(theta(ZERO_CHAR, tau, z, spec, normalized=normalized))
