"""Finite orthogonal geometry of F_3^5 with the form q(v) = sum v_i^2.

Vectors are stored as tuples of residues in {0, 1, 2}.  Use ``signed`` to get
the {-1, 0, 1} rendering used in labels and in sign-sensitive formulas.
"""
from __future__ import annotations

import itertools
from functools import lru_cache
from typing import Iterable, Sequence

import networkx as nx
import numpy as np

Vec = tuple[int, int, int, int, int]

R_VEC: Vec = (1, 1, 1, 1, 1)


def vec(v: Iterable[int]) -> Vec:
    """Reduce an integer sequence of length 5 to residues mod 3."""
    t = tuple(int(x) % 3 for x in v)
    if len(t) != 5:
        raise ValueError(f"expected 5 entries, got {len(t)}")
    return t  # type: ignore[return-value]


def signed(v: Iterable[int]) -> tuple[int, ...]:
    return tuple(((int(x) + 1) % 3) - 1 for x in v)


def neg(v: Iterable[int]) -> Vec:
    return vec(-int(x) for x in v)


def add(v: Iterable[int], w: Iterable[int]) -> Vec:
    return vec(a + b for a, b in zip(v, w))


def dot(v: Iterable[int], w: Iterable[int]) -> int:
    return sum(int(a) * int(b) for a, b in zip(v, w)) % 3


def q_value(v: Iterable[int]) -> int:
    return dot(v, v)


def canonical(v: Iterable[int]) -> Vec:
    """Representative of the projective class with first nonzero entry 1."""
    v = vec(v)
    for x in v:
        if x:
            return v if x == 1 else neg(v)
    raise ValueError("zero vector has no projective class")


def label(v: Iterable[int]) -> str:
    """Render a vector as a signed sum of basis labels, e.g. "+1+2-3"."""
    parts = []
    for i, x in enumerate(signed(v)):
        if x:
            parts.append(("+" if x > 0 else "-") + str(i + 1))
    return "".join(parts) or "0"


def parse_label(s: str) -> Vec:
    out = [0] * 5
    for sign, idx in zip(s[0::2], s[1::2]):
        out[int(idx) - 1] = 1 if sign == "+" else -1
    return vec(out)


@lru_cache(maxsize=None)
def all_vectors() -> tuple[Vec, ...]:
    return tuple(itertools.product(range(3), repeat=5))  # type: ignore[return-value]


@lru_cache(maxsize=None)
def enumerate_S() -> tuple[Vec, ...]:
    return tuple(v for v in all_vectors() if any(v) and q_value(v) == 0)


def split_S(vs: Sequence[Vec] | None = None) -> tuple[list[Vec], list[Vec]]:
    vs = enumerate_S() if vs is None else vs
    on = [v for v in vs if dot(v, R_VEC) == 0]
    off = [v for v in vs if dot(v, R_VEC) != 0]
    return on, off


def _classes(qval: int) -> tuple[Vec, ...]:
    return tuple(sorted({canonical(v) for v in all_vectors() if any(v) and q_value(v) == qval}))


@lru_cache(maxsize=None)
def enumerate_T() -> tuple[Vec, ...]:
    return _classes(1)


@lru_cache(maxsize=None)
def enumerate_q2_classes() -> tuple[Vec, ...]:
    return _classes(2)


@lru_cache(maxsize=None)
def enumerate_lines() -> tuple[frozenset, ...]:
    """All orthonormal 5-frames of T, i.e. 5-cliques of the orthogonality graph."""
    T = enumerate_T()
    g = nx.Graph()
    g.add_nodes_from(T)
    g.add_edges_from((u, w) for u, w in itertools.combinations(T, 2) if dot(u, w) == 0)
    cliques = [frozenset(c) for c in nx.find_cliques(g) if len(c) == 5]
    return tuple(sorted(cliques, key=sorted))


# ---------------------------------------------------------------- matrices

def as_matrix(rows) -> np.ndarray:
    return np.asarray(rows, dtype=np.int64) % 3


def identity() -> np.ndarray:
    return np.eye(5, dtype=np.int64)


def apply(v: Iterable[int], g: np.ndarray) -> Vec:
    """Right action of a matrix on a row vector."""
    return vec(np.asarray(v, dtype=np.int64) @ g)


def is_orthogonal(g: np.ndarray) -> bool:
    return bool(np.all((g @ g.T) % 3 == np.eye(5, dtype=np.int64)))


def det_f3(g: np.ndarray) -> int:
    return int(round(np.linalg.det(np.asarray(g, dtype=float)))) % 3


def reflection(v: Iterable[int]) -> np.ndarray:
    """Reflection in the hyperplane orthogonal to a vector with q(v) = 2."""
    v = vec(v)
    if q_value(v) != 2:
        raise ValueError(f"reflection needs q(v) = 2, got q({label(v)}) = {q_value(v)}")
    a = np.asarray(v, dtype=np.int64)
    # x -> x - 2 (x.v)/(v.v) v, and 2/(v.v) = 2/2 = 1 over F_3
    return (np.eye(5, dtype=np.int64) - np.outer(a, a)) % 3


def coordinate_swap(i: int, j: int) -> np.ndarray:
    if not (1 <= i < j <= 5):
        raise ValueError("need 1 <= i < j <= 5")
    g = np.eye(5, dtype=np.int64)
    g[[i - 1, j - 1]] = g[[j - 1, i - 1]]
    return g


R56 = (1, 1, 1, 1, 2)
R123 = (1, 1, 1, 2, 2)


def weyl_generators() -> list[np.ndarray]:
    gens = [coordinate_swap(i, i + 1) for i in range(1, 5)]
    gens.append(reflection(R56))
    gens.append(reflection(R123))
    return gens


_POW3 = 3 ** np.arange(25, dtype=np.int64)


def pack(mats: np.ndarray) -> np.ndarray:
    """Encode stacked 5x5 F_3 matrices as integers (25 trits each)."""
    return (np.asarray(mats).reshape(-1, 25) % 3) @ _POW3


def unpack(codes: np.ndarray) -> np.ndarray:
    codes = np.asarray(codes, dtype=np.int64)
    digits = (codes[:, None] // _POW3[None, :]) % 3
    return digits.reshape(-1, 5, 5)


def group_closure(generators: Sequence[np.ndarray], mod_center: bool = False) -> np.ndarray:
    """All products of the generators, as packed codes (sorted).

    With ``mod_center`` each element is identified with its negative and the
    smaller code is kept.  Breadth-first, one frontier at a time.
    """
    gens = np.stack([np.asarray(g, dtype=np.int64) % 3 for g in generators]) if generators else np.zeros((0, 5, 5), np.int64)

    def canon(mats):
        c = pack(mats)
        if mod_center:
            c = np.minimum(c, pack(-mats))
        return c

    start = np.eye(5, dtype=np.int64)[None]
    seen = np.unique(canon(start))
    frontier = start
    while len(frontier) and len(gens):
        prod = np.einsum("nij,gjk->ngik", frontier, gens) % 3
        prod = prod.reshape(-1, 5, 5)
        codes = canon(prod)
        codes, idx = np.unique(codes, return_index=True)
        fresh = ~np.isin(codes, seen, assume_unique=True)
        frontier = prod[idx[fresh]]
        seen = np.union1d(seen, codes[fresh])
    return seen


def s6_matrix(perm: Sequence[int]) -> np.ndarray:
    """Image of a permutation of {1..6} (one-line notation, perm[i-1] = sigma(i)).

    Built as a product of adjacent transpositions (i i+1) mapped to R_{i,i+1}
    for i < 5 and to R_56 for i = 5.  Composition convention: the matrix of
    sigma*tau (apply tau first) is the matrix of sigma times the matrix of tau.
    """
    p = [int(x) for x in perm]
    if sorted(p) != list(range(1, 7)):
        raise ValueError("not a permutation of 1..6")
    gens = {i: coordinate_swap(i, i + 1) for i in range(1, 5)}
    gens[5] = reflection(R56)
    # bubble sort p to the identity, recording adjacent swaps on positions
    arr = p[:]
    word = []
    for _ in range(6):
        for i in range(5):
            if arr[i] > arr[i + 1]:
                arr[i], arr[i + 1] = arr[i + 1], arr[i]
                word.append(i + 1)
    # p o s_{w_1} o ... o s_{w_k} = id, so p = s_{w_k} o ... o s_{w_1}
    g = np.eye(5, dtype=np.int64)
    for i in reversed(word):
        g = (g @ gens[i]) % 3
    return g


def compose_perm(s: Sequence[int], t: Sequence[int]) -> tuple[int, ...]:
    """(s*t)(i) = s(t(i))."""
    return tuple(s[t[i] - 1] for i in range(6))


# ---------------------------------------------------------------- tritangents

def _sum(idx: Iterable[int], signs: Iterable[int] | None = None) -> Vec:
    out = [0] * 5
    idx = list(idx)
    signs = [1] * len(idx) if signs is None else list(signs)
    for i, s in zip(idx, signs):
        out[i - 1] += s
    return vec(out)


@lru_cache(maxsize=None)
def tritangent_dictionary() -> dict[tuple[str, str, str], Vec]:
    """Map each tritangent plane (as a triple of line names) to its class in T."""
    d: dict[tuple[str, str, str], Vec] = {}
    for i in range(1, 6):
        d[("C6", f"E{i}", f"L{i}6")] = canonical(_sum([i]))
        d[("E6", f"C{i}", f"L{i}6")] = canonical(_sum(k for k in range(1, 6) if k != i))
    for i, j in itertools.permutations(range(1, 6), 2):
        a, b = sorted((i, j))
        rest = [k for k in range(1, 6) if k not in (i, j)]
        d[(f"E{i}", f"C{j}", f"L{a}{b}")] = canonical(_sum([j] + rest, [1, -1, -1, -1]))
    for m in range(1, 6):
        rest = [k for k in range(1, 6) if k != m]
        for i, j, k, l in _pairings(rest):
            d[(f"L{i}{j}", f"L{k}{l}", f"L{m}6")] = canonical(_sum([i, j, k, l], [1, 1, -1, -1]))
    return d


def _pairings(four: list[int]):
    a = four[0]
    for b in four[1:]:
        c, d = [x for x in four[1:] if x != b]
        yield a, b, c, d


def line_names() -> list[str]:
    names = [f"E{i}" for i in range(1, 7)] + [f"C{i}" for i in range(1, 7)]
    names += [f"L{i}{j}" for i, j in itertools.combinations(range(1, 7), 2)]
    return names


def lines_from_dictionary() -> dict[str, frozenset]:
    """For each of the 27 lines, the set of T-classes of tritangents through it."""
    out: dict[str, set] = {n: set() for n in line_names()}
    for trip, cls in tritangent_dictionary().items():
        for name in trip:
            out[name].add(cls)
    return {k: frozenset(v) for k, v in out.items()}


def dual_graph_std() -> nx.Graph:
    """The standard 27-vertex graph; edges join intersecting lines."""
    g = nx.Graph()
    g.add_nodes_from(line_names())
    for i, j in itertools.permutations(range(1, 7), 2):
        g.add_edge(f"E{i}", f"C{j}")
    for i, j in itertools.combinations(range(1, 7), 2):
        for x in (i, j):
            g.add_edge(f"E{x}", f"L{i}{j}")
            g.add_edge(f"C{x}", f"L{i}{j}")
    pairs = list(itertools.combinations(range(1, 7), 2))
    for p, r in itertools.combinations(pairs, 2):
        if not set(p) & set(r):
            g.add_edge(f"L{p[0]}{p[1]}", f"L{r[0]}{r[1]}")
    return g


def line_intersection_graph(disjoint: bool = False) -> nx.Graph:
    """Graph on enumerate_lines(); edge when the lines share a T element
    (or, with ``disjoint``, when they share none)."""
    lines = enumerate_lines()
    g = nx.Graph()
    g.add_nodes_from(range(len(lines)))
    for a, b in itertools.combinations(range(len(lines)), 2):
        meet = bool(lines[a] & lines[b])
        if meet != disjoint:
            g.add_edge(a, b)
    return g


# ---------------------------------------------------------------- R and Q

@lru_cache(maxsize=None)
def enumerate_R() -> tuple[tuple[Vec, Vec], ...]:
    cls = enumerate_q2_classes()
    return tuple((a, b) for a, b in itertools.combinations(cls, 2) if dot(a, b) == 0)


def isotropic_span_of(w_pair: tuple[Iterable[int], Iterable[int]]) -> tuple[Vec, ...]:
    """Signed representatives of the 4 isotropic classes orthogonal to w1, w2.

    The signs are fixed by requiring every pairwise product to be -1 mod 3;
    that choice is unique up to a global sign, which is fixed by making the
    first vector canonical.
    """
    w1, w2 = (vec(w) for w in w_pair)
    cls = [canonical(v) for v in enumerate_S() if dot(v, w1) == 0 and dot(v, w2) == 0]
    cls = sorted(set(cls))
    if len(cls) != 4:
        raise ValueError(f"expected 4 isotropic classes, got {len(cls)}")
    found = []
    for signs in itertools.product((1, 2), repeat=3):
        reps = [cls[0]] + [vec(s * x for x in c) for s, c in zip(signs, cls[1:])]
        if all(dot(a, b) == 2 for a, b in itertools.combinations(reps, 2)):
            found.append(tuple(reps))
    if len(found) != 1:
        raise RuntimeError(f"sign condition gave {len(found)} solutions for {w_pair}")
    return found[0]


def span(basis: Sequence[Iterable[int]]) -> frozenset:
    basis = [vec(b) for b in basis]
    out = set()
    for coeffs in itertools.product(range(3), repeat=len(basis)):
        acc = (0, 0, 0, 0, 0)
        for c, b in zip(coeffs, basis):
            acc = add(acc, (c * x for x in b))
        out.add(acc)
    return frozenset(out)


@lru_cache(maxsize=None)
def isotropic_planes() -> tuple[frozenset, ...]:
    """All totally isotropic 2-dimensional subspaces, each as its 9 vectors."""
    S = enumerate_S()
    planes = set()
    for a, b in itertools.combinations(S, 2):
        if dot(a, b) == 0:
            P = span([a, b])
            if len(P) == 9:
                planes.add(P)
    return tuple(sorted(planes, key=sorted))


@lru_cache(maxsize=None)
def enumerate_Q() -> tuple[tuple[frozenset, frozenset], ...]:
    planes = isotropic_planes()
    return tuple(
        (P, Q) for P, Q in itertools.combinations(planes, 2) if len(P & Q) == 3
    )


def plane_reps(P: frozenset, Q: frozenset) -> tuple[list[Vec], list[Vec]]:
    """Canonical representatives of P(V)-P(V∩W) for both planes."""
    common = P & Q
    a = sorted({canonical(v) for v in P if v not in common})
    b = sorted({canonical(v) for v in Q if v not in common})
    return a, b


def _lift_sign(x: int) -> int:
    if x % 3 == 0:
        raise ValueError("zero pairing")
    return 1 if x % 3 == 1 else -1


def epsilon_sign(SV1: Sequence[Iterable[int]], SV2: Sequence[Iterable[int]]) -> int:
    eps = 1
    for v in SV1:
        for w in SV2:
            eps *= _lift_sign(dot(v, w))
    return eps
