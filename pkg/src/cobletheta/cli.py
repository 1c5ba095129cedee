"""Command-line front end.

JSON goes to stdout (or ``--out``), logs go to stderr.  Exit codes: 0 on
success, 1 when a verification fails or a configuration is degenerate,
2 on usage errors and failed upstream computations.
"""
from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__, _kernels, arith, coble, gf3, store, theta, verify
from .periods import CalibrationError

log = logging.getLogger("cobletheta")

EXIT_OK, EXIT_FAIL, EXIT_ERROR = 0, 1, 2


class UsageError(Exception):
    pass


# ---------------------------------------------------------------- inputs

def _load_points(source: str, exact: bool, seed: int) -> coble.PointConfig:
    if source == "random":
        cfg = coble.random_rational_config(np.random.default_rng(seed))
        return cfg if exact else cfg.as_complex()
    try:
        data = json.loads(Path(source).read_text())
    except (OSError, ValueError) as exc:
        raise UsageError(f"cannot read points from {source}: {exc}") from exc
    pts = data["points"] if isinstance(data, dict) else data
    conv = coble.to_fraction if exact else (lambda x: complex(coble.to_fraction(x)) if isinstance(x, str) else complex(x))
    try:
        return coble.PointConfig.of([[conv(x) for x in p] for p in pts])
    except (TypeError, ValueError, ZeroDivisionError) as exc:
        raise UsageError(f"bad point data: {exc}") from exc


def _params(a, exact: bool = False):
    vals = [coble.to_fraction(x) for x in a] if exact else [float(x) for x in a]
    try:
        return coble.CurveParams.of(vals)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


def _spec(args) -> theta.TruncationSpec:
    tol = args.tol if args.command == "theta" and args.tol is not None else 1e-12
    return theta.TruncationSpec(tol=tol, radius=args.radius)


def _period_getter(args):
    def get(a):
        tol = args.tol if args.command == "periods" and args.tol is not None else 1e-12
        pd, hit = store.get_periods(a, tol=tol, root=args.cache, use_cache=not args.no_cache)
        log.info("periods for a=%s: %s", tuple(a), "cache hit" if hit else "computed")
        return pd
    return get


# ---------------------------------------------------------------- commands

def cmd_finite_geometry(args) -> tuple[dict, int]:
    rep = verify.verify_finite_geometry(check_group=args.check_group)
    counts = rep.find("counts").details
    out = {"counts": counts,
           "tritangents": {" ".join(k): gf3.label(v) for k, v in gf3.tritangent_dictionary().items()},
           "lines": {name: sorted(gf3.label(v) for v in vs) for name, vs in gf3.lines_from_dictionary().items()},
           "report": rep.to_json(timing=not args.no_timing)}
    if args.check_group:
        out["group_order"] = rep.find("group order mod +-I").details["order"]
    return out, EXIT_OK if rep.passed else EXIT_FAIL


def cmd_coble(args) -> tuple[dict, int]:
    if (args.a is None) == (args.points is None):
        raise UsageError("give exactly one of --a and --points")
    if args.a is not None:
        cfg = coble.normal_form_config(_params(args.a, args.exact))
        if not args.exact:
            cfg = cfg.as_complex()
    else:
        cfg = _load_points(args.points, args.exact, args.seed)
    bad = coble.genericity_failures(cfg)
    if bad:
        return {"error": "degenerate configuration", "offending": bad}, EXIT_FAIL
    Z = coble.coble_vector(cfg, check=False)
    vals = {gf3.label(v): (str(z) if cfg.is_exact() else store.to_jsonable(complex(z))) for v, z in Z.items()}
    return {"exact": cfg.is_exact(), "values": vals, "all_nonzero": all(z != 0 for z in Z.values()),
            "genericity": "generic"}, EXIT_OK


def cmd_periods(args) -> tuple[dict, int]:
    a = _params(args.a).a
    pd = _period_getter(args)(a)
    rep = verify.verify_periods(pd)
    out = pd.to_json()
    out["report"] = rep.to_json(timing=not args.no_timing)
    return out, EXIT_OK if rep.passed else EXIT_FAIL


def cmd_theta(args) -> tuple[dict, int]:
    spec = _spec(args)
    if args.tau0:
        tau, src = arith.tau0(), "tau0"
    else:
        a = _params(args.a).a
        tau, src = _period_getter(args)(a).tau, {"a": list(a)}
    tau = (tau + tau.T) / 2
    T = theta.theta_cubes(tau, spec)
    R = spec.radius or max(theta.truncation_radius(tau, theta.char_of_v(v).arrays()[0], spec.tol) for v in T)
    return {"source": src, "backend": _kernels.backend(), "tol": spec.tol, "radius": R,
            "cubes": {gf3.label(v): store.to_jsonable(x) for v, x in T.items()}}, EXIT_OK


def cmd_verify(args) -> tuple[dict, int]:
    try:
        suites = verify.parse_suites(args.suites)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    a = _params(args.a).a
    cfg = _load_points(args.points, args.exact, args.seed) if args.points else None
    tol = args.tol if args.tol is not None else 1e-5
    rep = verify.run_suites(suites, a, tol=tol, seed=args.seed, spec=_spec(args),
                            get_periods=_period_getter(args), cfg=cfg)
    return rep.to_json(timing=not args.no_timing), EXIT_OK if rep.passed else EXIT_FAIL


COMMANDS = {"finite-geometry": cmd_finite_geometry, "coble": cmd_coble, "periods": cmd_periods,
            "theta": cmd_theta, "verify": cmd_verify}


# ---------------------------------------------------------------- parser

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, help="quadrature (periods), truncation (theta) or gate (verify) tolerance")
    common.add_argument("--radius", type=int, help="explicit theta truncation radius")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--cache", help=f"cache directory (default ${store.CACHE_ENV} or ~/.cache/cobletheta)")
    common.add_argument("--no-cache", action="store_true", help="always recompute periods")
    common.add_argument("--out", help="write JSON here instead of stdout")
    common.add_argument("--no-timing", action="store_true", help="leave wall times out of reports")
    common.add_argument("-v", "--verbose", action="count", default=0)

    p = argparse.ArgumentParser(prog="cobletheta", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("finite-geometry", parents=[common], help="counts and dictionaries over F_3")
    g.add_argument("--check-group", action="store_true", help="also close the reflection group")

    c = sub.add_parser("coble", parents=[common], help="the 80 Coble invariants of a configuration")
    c.add_argument("--a", nargs=5, metavar="A", help="curve parameters 0 < a1 < ... < a5 (normal form)")
    c.add_argument("--points", help="JSON file with six points, or 'random'")
    c.add_argument("--exact", action="store_true", help="rational arithmetic throughout")

    pe = sub.add_parser("periods", parents=[common], help="normalized period matrix (cached)")
    pe.add_argument("--a", nargs=5, metavar="A", default=list(map(str, verify.DEFAULT_A)))

    t = sub.add_parser("theta", parents=[common], help="the 80 cubed theta constants")
    t.add_argument("--a", nargs=5, metavar="A", default=list(map(str, verify.DEFAULT_A)))
    t.add_argument("--tau0", action="store_true", help="evaluate at diag(w, w, w, w, -w^2)")

    v = sub.add_parser("verify", parents=[common], help="run verification suites")
    v.add_argument("--a", nargs=5, metavar="A", default=list(map(str, verify.DEFAULT_A)))
    v.add_argument("--suites", default="all", help=f"comma list from {', '.join(verify.SUITES)}, all")
    v.add_argument("--points", help="configuration for the relation suites: JSON file or 'random'")
    v.add_argument("--exact", action="store_true")
    return p


def _emit(obj: dict, out: str | None) -> None:
    text = json.dumps(store.to_jsonable(obj), sort_keys=True, indent=1) + "\n"
    if out:
        store.atomic_write(Path(out), text)
    else:
        sys.stdout.write(text)


def _setup_logging(verbose: int) -> None:
    root = logging.getLogger("cobletheta")
    for h in list(root.handlers):
        if getattr(h, "_cobletheta", False):
            root.removeHandler(h)
    h = logging.StreamHandler(sys.stderr)
    h._cobletheta = True
    h.setFormatter(logging.Formatter("%(levelname)s %(name)s: %(message)s"))
    root.addHandler(h)
    root.setLevel(logging.DEBUG if verbose > 1 else logging.INFO)
    root.propagate = False
    logging.getLogger("cobletheta.verify").setLevel(logging.INFO if verbose else logging.WARNING)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    _setup_logging(args.verbose)
    try:
        out, code = COMMANDS[args.command](args)
    except UsageError as exc:
        log.error("%s", exc)
        return EXIT_ERROR
    except store.CacheCorrupt as exc:
        log.error("%s", exc)
        _emit({"error": "corrupt cache", "detail": str(exc)}, args.out)
        return EXIT_ERROR
    except verify.StageError as exc:
        log.error("stage %s failed: %s", exc.stage, exc)
        cause = exc.cause
        if isinstance(cause, store.CacheCorrupt):
            _emit({"error": "corrupt cache", "detail": str(cause)}, args.out)
        else:
            _emit({"error": "computation failed", "stage": exc.stage, "detail": str(exc)}, args.out)
        return EXIT_ERROR
    except CalibrationError as exc:
        log.error("calibration failed: %s", exc)
        _emit({"error": "calibration failed", "detail": str(exc)}, args.out)
        return EXIT_ERROR
    except coble.DegenerateConfig as exc:
        _emit({"error": "degenerate configuration", "offending": list(exc.args[0])}, args.out)
        return EXIT_FAIL
    except (ValueError, np.linalg.LinAlgError, ArithmeticError) as exc:
        log.error("computation failed: %s", exc)
        _emit({"error": "computation failed", "detail": str(exc)}, args.out)
        return EXIT_ERROR
    _emit(out, args.out)
    return code


if __name__ == "__main__":
    sys.exit(main())
