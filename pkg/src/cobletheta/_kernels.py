"""Lattice-sum kernels for the theta series.

Two interchangeable backends: a numba-compiled nested enumeration and a
vectorized numpy one.  Set COBLETHETA_DISABLE_NUMBA=1 (or run without numba
installed) to force the numpy path.

The sum runs over integer p in a box lo <= p <= hi whose shifted point
x = p - c lies in the ellipsoid |U x|^2 <= r2, U upper triangular.
"""
from __future__ import annotations

import math
import os

import numpy as np

_FLAG = os.environ.get("COBLETHETA_DISABLE_NUMBA", "").strip().lower()
DISABLED = _FLAG not in ("", "0", "false", "no")

try:
    if DISABLED:
        raise ImportError
    from numba import njit

    HAVE_NUMBA = True
except ImportError:  # pragma: no cover - depends on the environment
    HAVE_NUMBA = False

    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


def backend() -> str:
    return "numba" if HAVE_NUMBA else "numpy"


# ---------------------------------------------------------------- numpy path

def enumerate_points_np(U, c, r2, lo, hi) -> np.ndarray:
    """All admissible lattice points, built one coordinate at a time from the last."""
    d = len(c)
    pts = np.zeros((1, 0), dtype=np.int64)
    part = np.zeros(1)  # squared norm of the already fixed rows
    for i in range(d - 1, -1, -1):
        # s = sum_{j > i} U[i, j] (p_j - c_j) for every partial point
        if pts.shape[1]:
            s = (pts - c[i + 1:]) @ U[i, i + 1:]
        else:
            s = np.zeros(len(pts))
        rem = np.maximum(r2 - part, 0.0)
        rad = np.sqrt(rem) / U[i, i]
        a = np.maximum(np.ceil(c[i] - s / U[i, i] - rad), lo[i]).astype(np.int64)
        b = np.minimum(np.floor(c[i] - s / U[i, i] + rad), hi[i]).astype(np.int64)
        cnt = np.maximum(b - a + 1, 0)
        rep = np.repeat(np.arange(len(pts)), cnt)
        offs = np.arange(cnt.sum()) - np.repeat(np.cumsum(cnt) - cnt, cnt)
        newc = a[rep] + offs
        t = U[i, i] * (newc - c[i]) + s[rep]
        part = part[rep] + t * t
        pts = np.concatenate([newc[:, None], pts[rep]], axis=1)
        keep = part <= r2
        pts, part = pts[keep], part[keep]
    return pts


def theta_sum_np(U, c, r2, lo, hi, mp, tau, w, shift):
    """sum over p of exp(pi i n tau n + 2 pi i n w - shift), n = p + mp."""
    pts = enumerate_points_np(U, c, r2, lo, hi)
    n = pts + mp
    expo = 1j * np.pi * np.einsum("ni,ij,nj->n", n, tau, n) + 2j * np.pi * (n @ w) - shift
    return complex(np.sum(np.exp(expo))), len(pts)


# ---------------------------------------------------------------- numba path

@njit(cache=True)
def _theta_sum_nb(U, c, r2, lo, hi, mp, tau_re, tau_im, w_re, w_im, shift):
    d = c.shape[0]
    p = np.zeros(d, dtype=np.int64)
    top = np.zeros(d, dtype=np.int64)
    part = np.zeros(d + 1)
    acc_re = 0.0
    acc_im = 0.0
    comp_re = 0.0
    comp_im = 0.0
    count = 0
    n = np.zeros(d)
    i = d - 1
    fresh = True
    while True:
        if fresh:
            s = 0.0
            for j in range(i + 1, d):
                s += U[i, j] * (p[j] - c[j])
            rem = r2 - part[i + 1]
            if rem < 0.0:
                rem = 0.0
            rad = math.sqrt(rem) / U[i, i]
            af = c[i] - s / U[i, i] - rad
            bf = c[i] - s / U[i, i] + rad
            if af < lo[i]:
                af = lo[i]
            if bf > hi[i]:
                bf = hi[i]
            p[i] = np.int64(math.ceil(af)) - 1
            top[i] = np.int64(math.floor(bf))
            fresh = False
        p[i] += 1
        if p[i] > top[i]:
            i += 1
            if i == d:
                break
            continue
        s = 0.0
        for j in range(i, d):
            s += U[i, j] * (p[j] - c[j])
        part[i] = part[i + 1] + s * s
        if part[i] > r2:
            continue
        if i > 0:
            i -= 1
            fresh = True
            continue
        # full point: accumulate its term with compensated summation
        for k in range(d):
            n[k] = p[k] + mp[k]
        qr = 0.0
        qi = 0.0
        for k in range(d):
            for l in range(d):
                qr += n[k] * tau_re[k, l] * n[l]
                qi += n[k] * tau_im[k, l] * n[l]
        lr = 0.0
        li = 0.0
        for k in range(d):
            lr += n[k] * w_re[k]
            li += n[k] * w_im[k]
        ex_re = -math.pi * qi - 2.0 * math.pi * li - shift
        ex_im = math.pi * qr + 2.0 * math.pi * lr
        mag = math.exp(ex_re)
        tr = mag * math.cos(ex_im) - comp_re
        ti = mag * math.sin(ex_im) - comp_im
        yr = acc_re + tr
        yi = acc_im + ti
        comp_re = (yr - acc_re) - tr
        comp_im = (yi - acc_im) - ti
        acc_re = yr
        acc_im = yi
        count += 1
    return acc_re, acc_im, count


def theta_sum_nb(U, c, r2, lo, hi, mp, tau, w, shift):
    re, im, cnt = _theta_sum_nb(
        np.ascontiguousarray(U, dtype=np.float64), np.ascontiguousarray(c, dtype=np.float64), float(r2),
        np.ascontiguousarray(lo, dtype=np.int64), np.ascontiguousarray(hi, dtype=np.int64),
        np.ascontiguousarray(mp, dtype=np.float64),
        np.ascontiguousarray(tau.real), np.ascontiguousarray(tau.imag),
        np.ascontiguousarray(np.real(w), dtype=np.float64), np.ascontiguousarray(np.imag(w), dtype=np.float64),
        float(shift),
    )
    return complex(re, im), int(cnt)


def theta_sum(U, c, r2, lo, hi, mp, tau, w, shift, use_numba: bool | None = None):
    use = HAVE_NUMBA if use_numba is None else (use_numba and HAVE_NUMBA)
    if use:
        return theta_sum_nb(U, c, r2, lo, hi, mp, tau, w, shift)
    return theta_sum_np(U, c, r2, lo, hi, mp, tau, w, shift)
