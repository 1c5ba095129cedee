"""Eisenstein-integer lattice, the embedding U(4,1) -> Sp(10, Z), reduction to
O(5, F_3), and the dictionary between the 4-ball and the period locus.

Row-vector conventions throughout: groups act on the right.  A matrix over
Z[rho] is carried as a pair of integer arrays (A, B) meaning A + B*rho.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

OMEGA = np.exp(2j * np.pi / 3)
H = np.diag([1, 1, 1, 1, -1]).astype(np.int64)
I5 = np.eye(5, dtype=np.int64)

# rows: v_i in the delta-bar basis
M_BASIS = np.array(
    [
        [1, 1, 0, 0, 0],
        [1, -1, 1, 0, 1],
        [1, -1, -1, 0, 1],
        [1, -1, 0, 1, -1],
        [1, -1, 0, -1, -1],
    ],
    dtype=np.int64,
)
DELTA_FORM = np.diag([-1, -1, -1, -1, 1]).astype(np.int64)


@dataclass(frozen=True)
class EisInt:
    """a + b*rho with rho^2 + rho + 1 = 0."""

    a: int
    b: int

    def __add__(self, o: "EisInt") -> "EisInt":
        return EisInt(self.a + o.a, self.b + o.b)

    def __sub__(self, o: "EisInt") -> "EisInt":
        return EisInt(self.a - o.a, self.b - o.b)

    def __neg__(self) -> "EisInt":
        return EisInt(-self.a, -self.b)

    def __mul__(self, o: "EisInt") -> "EisInt":
        return EisInt(self.a * o.a - self.b * o.b, self.a * o.b + self.b * o.a - self.b * o.b)

    def conj(self) -> "EisInt":
        return EisInt(self.a - self.b, -self.b)

    def norm(self) -> int:
        return self.a * self.a - self.a * self.b + self.b * self.b

    def __complex__(self) -> complex:
        return complex(self.a + self.b * OMEGA)

    def mod_one_minus_rho(self) -> int:
        """Residue in Z[rho]/(1 - rho) = F_3 (rho maps to 1)."""
        return (self.a + self.b) % 3


RHO = EisInt(0, 1)


@dataclass(frozen=True)
class EisMat:
    """Square matrix A + B*rho over Z[rho]."""

    A: np.ndarray
    B: np.ndarray

    @classmethod
    def of(cls, A, B=None) -> "EisMat":
        A = np.asarray(A, dtype=np.int64)
        B = np.zeros_like(A) if B is None else np.asarray(B, dtype=np.int64)
        return cls(A, B)

    def __matmul__(self, o: "EisMat") -> "EisMat":
        AC, BD = self.A @ o.A, self.B @ o.B
        return EisMat(AC - BD, self.A @ o.B + self.B @ o.A - BD)

    def conj_t(self) -> "EisMat":
        return EisMat((self.A - self.B).T, -self.B.T)

    def complex(self) -> np.ndarray:
        return self.A + self.B * OMEGA

    def __eq__(self, o) -> bool:
        return isinstance(o, EisMat) and np.array_equal(self.A, o.A) and np.array_equal(self.B, o.B)

    def __hash__(self):
        return hash((self.A.tobytes(), self.B.tobytes()))

    def entry(self, i, j) -> EisInt:
        return EisInt(int(self.A[i, j]), int(self.B[i, j]))


def is_unitary(g: EisMat) -> bool:
    lhs = g.conj_t() @ EisMat.of(H) @ g
    return lhs == EisMat.of(H)


def eis_identity() -> EisMat:
    return EisMat.of(I5)


def rho_scalar() -> EisMat:
    return EisMat.of(np.zeros((5, 5)), I5)


def unitary_reflection(r) -> EisMat:
    """Order-2 reflection x -> x - 2 h(x, r)/h(r, r) r for a rational-integer root r
    with h(r, r) = +-1 or +-2."""
    r = np.asarray(r, dtype=np.int64)
    n = int(r @ H @ r)
    if n not in (1, -1, 2, -2):
        raise ValueError(f"root norm {n} does not give an integral reflection")
    num = 2 * np.outer(H @ r, r)
    if np.any(num % n):
        raise ValueError("reflection is not integral")
    return EisMat.of(I5 - num // n)


def unitary_generators() -> list[EisMat]:
    """A handful of elements of U(4,1) used for sampled group checks."""
    gens = []
    for i in range(3):
        p = np.eye(5, dtype=np.int64)
        p[[i, i + 1]] = p[[i + 1, i]]
        gens.append(EisMat.of(p))
    d = np.zeros((5, 5), dtype=np.int64)
    np.fill_diagonal(d, [1, 0, 0, 0, 0])
    gens.append(EisMat.of(I5 - d, d))  # rho on the first coordinate
    gens.append(EisMat.of(np.diag([1, 1, 1, 1, -1])))
    gens.append(unitary_reflection([1, 1, 0, 0, -2]))
    gens.append(unitary_reflection([1, 1, 0, 0, 1]))
    return gens


# ---------------------------------------------------------------- symplectic side

def w_matrix() -> np.ndarray:
    Z = np.zeros((5, 5), dtype=np.int64)
    return np.block([[-I5, -H], [H, Z]])


def j_form() -> np.ndarray:
    """Gram matrix of the pairing with phi(a_i, b_j) = -delta_ij."""
    Z = np.zeros((5, 5), dtype=np.int64)
    return np.block([[Z, -I5], [I5, Z]])


def is_symplectic(g: np.ndarray) -> bool:
    J = j_form()
    return bool(np.array_equal(g @ J @ g.T, J))


def hermitian_h(x) -> int:
    """h(x) = phi(x, x W) for an integer row vector x in the (a, b) basis."""
    x = np.asarray(x, dtype=np.int64)
    return int(x @ j_form() @ (x @ w_matrix()).T)


def h_polar_gram() -> np.ndarray:
    """Matrix of the polar bilinear form h(x+y) - h(x) - h(y)."""
    G = j_form() @ w_matrix().T
    return G + G.T


def iota(g: EisMat) -> np.ndarray:
    if not is_unitary(g):
        raise ValueError("matrix is not in U(4,1)")
    A, B = g.A, g.B
    return np.block([[H @ (A - B) @ H, -H @ B], [B @ H, A]])


def pi_f3(g: EisMat) -> np.ndarray:
    """Reduction to O(5, F_3), written in the v-basis."""
    red = (g.A + g.B) % 3
    # M is orthogonal for DELTA_FORM, so M^{-1} = DELTA_FORM M^T over F_3
    Minv = (DELTA_FORM @ M_BASIS.T) % 3
    return (M_BASIS @ red @ Minv) % 3


def in_gamma_level(g: EisMat) -> bool:
    return bool(np.all((g.A + g.B - I5) % 3 == 0))


def sp_act(g: np.ndarray, tau: np.ndarray) -> np.ndarray:
    g = np.asarray(g)
    A, B, C, D = g[:5, :5], g[:5, 5:], g[5:, :5], g[5:, 5:]
    den = C @ tau + D
    if np.linalg.cond(den) > 1e12:
        raise np.linalg.LinAlgError("C tau + D is numerically singular")
    return (A @ tau + B) @ np.linalg.inv(den)


# ---------------------------------------------------------------- ball locus

def quadratic_residual(tau: np.ndarray) -> float:
    S = H @ tau
    return float(np.abs(S @ S + S + np.eye(5)).max())


def omega_bar_eigenspace_dim(tau: np.ndarray, tol: float = 1e-6) -> int:
    sv = np.linalg.svd(H @ tau - np.conj(OMEGA) * np.eye(5), compute_uv=False)
    return int(np.sum(sv < tol * max(1.0, sv[0])))


def tau_from_ball(x) -> np.ndarray:
    """Period point for a ball point: H tau acts by conj(omega) on the line of
    eta = (x, 1) and by omega on its H-orthogonal complement."""
    x = np.asarray(x, dtype=complex)
    if np.sum(np.abs(x) ** 2) >= 1:
        raise ValueError("point is not inside the unit ball")
    eta = np.append(x, 1.0)
    Heta = H @ eta
    K = OMEGA * np.eye(5) + (np.conj(OMEGA) - OMEGA) * np.outer(eta, Heta) / (eta @ Heta)
    return H @ K


def ball_from_tau(tau: np.ndarray) -> np.ndarray:
    K = H @ tau - np.conj(OMEGA) * np.eye(5)
    sol, *_ = np.linalg.lstsq(K[:, :4], -K[:, 4], rcond=None)
    if np.abs(K[:, :4] @ sol + K[:, 4]).max() > 1e-6 * max(1.0, np.abs(K).max()):
        raise ValueError("eigenvector has vanishing last coordinate or tau is off the locus")
    return sol


def tau0() -> np.ndarray:
    return np.diag([OMEGA] * 4 + [-OMEGA**2])
