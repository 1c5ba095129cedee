"""JSON helpers and the on-disk cache for period data."""
from __future__ import annotations

import hashlib
import json
import logging
import os
import tempfile
from fractions import Fraction
from pathlib import Path

import numpy as np

from . import gf3
from .periods import PeriodData, compute_periods

log = logging.getLogger(__name__)

CACHE_ENV = "COBLETHETA_CACHE"
FORMAT_VERSION = 1


class CacheCorrupt(RuntimeError):
    pass


def to_jsonable(x):
    """Complex as [re, im], Fraction as a decimal string, vectors by label."""
    if isinstance(x, Fraction):
        return str(x)
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (np.floating,)):
        return float(x)
    if isinstance(x, (np.integer,)):
        return int(x)
    if isinstance(x, (np.bool_,)):
        return bool(x)
    if isinstance(x, np.ndarray):
        return [to_jsonable(y) for y in x.tolist()] if x.dtype != object else [to_jsonable(y) for y in x]
    if isinstance(x, dict):
        return {(gf3.label(k) if isinstance(k, tuple) else str(k)): to_jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [to_jsonable(y) for y in x]
    return x


def dumps(obj, **kw) -> str:
    return json.dumps(to_jsonable(obj), sort_keys=True, **kw)


def cache_root(override: str | os.PathLike | None = None) -> Path:
    if override:
        return Path(override)
    env = os.environ.get(CACHE_ENV)
    if env:
        return Path(env)
    return Path.home() / ".cache" / "cobletheta"


def period_key(a, tol: float, structure_tol: float, h: float) -> str:
    payload = json.dumps({"a": [float(x) for x in a], "tol": float(tol), "structure_tol": float(structure_tol),
                          "h": float(h), "version": FORMAT_VERSION}, sort_keys=True)
    return hashlib.sha256(payload.encode()).hexdigest()[:32]


def atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=".tmp-", suffix=".json")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def get_periods(a, tol: float = 1e-12, structure_tol: float = 1e-8, h: float = 1 / 64,
                root: str | os.PathLike | None = None, use_cache: bool = True) -> tuple[PeriodData, bool]:
    """Period data for ``a``, read from or written to the cache."""
    if not use_cache:
        return compute_periods(a, tol, structure_tol, h), False
    path = cache_root(root) / f"periods-{period_key(a, tol, structure_tol, h)}.json"
    if path.exists():
        try:
            pd = PeriodData.from_json(json.loads(path.read_text()))
        except (ValueError, KeyError, TypeError) as exc:
            path.unlink(missing_ok=True)
            raise CacheCorrupt(f"unreadable cache entry {path} removed: {exc}") from exc
        log.info("period cache hit %s", path.name)
        return pd, True
    pd = compute_periods(a, tol, structure_tol, h)
    atomic_write(path, json.dumps(pd.to_json(), sort_keys=True))
    log.info("period cache write %s", path.name)
    return pd, False
