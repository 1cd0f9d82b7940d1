"""``htl`` command line: apply, norm, constants, verify, slice, search, equivalence.

Every output carries the fully resolved run configuration and a UTC
timestamp. Exit codes: 0 ok, 2 bad input, 3 domain violation, 4 numerical
anomaly (a bound that fails or a search ratio above its constant).
"""

from __future__ import annotations

import argparse
import datetime as _dt
import json
import logging
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor
from pathlib import Path

import numpy as np

from . import __version__
from .experiments import (
    BoundAnomaly,
    Grids,
    extremal_search,
    verify_bound,
    verify_fh_bound,
    verify_slice_bound,
)
from .hilbert import DomainError, apply_integral, apply_mobius, apply_series, apply_series_at
from .quadrature import DEFAULT_LEVELS, DEFAULT_ORDER, disk_grid, mirrored, singular_line_rule
from .reports import (
    APPLY_CSV_HEADER,
    CONSTANTS_CSV_HEADER,
    EQUIVALENCE_CSV_HEADER,
    NORM_CSV_HEADER,
    SCHEMA_VERSION,
    bound_reports_csv,
    dumps,
    search_csv,
    table_csv,
    trajectory_csv,
)
from .series import PowerSeries, coeffs_from_json, random_corpus, series_to_list
from .spaces import DEFAULT_HARDY_N_THETA, bergman_norm, hardy_norm
from .special import BoundConstantSpec, Regime, bound_constant

log = logging.getLogger(__name__)

EXIT_OK, EXIT_INPUT, EXIT_DOMAIN, EXIT_ANOMALY = 0, 2, 3, 4
PATHS = ("series", "integral", "mobius")
DEFAULT_P_GRID = (2.5, 3, 3.5, 4, 5, 6, 8, 10, 12, 16, 20)


class InputError(ValueError):
    """Malformed user input (exit code 2)."""


class Anomaly(RuntimeError):
    """Result computed but a bound failed (exit code 4)."""

    def __init__(self, message: str, payload: str):
        super().__init__(message)
        self.payload = payload


# --- input helpers ----------------------------------------------------------


def parse_coeffs(text: str) -> PowerSeries:
    """Inline JSON array or path to a JSON file; real entries are promoted to complex."""
    path = Path(text)
    source = text
    if not text.lstrip().startswith("[") and not text.lstrip().startswith("{"):
        try:
            source = path.read_text()
        except OSError as exc:
            raise InputError(f"cannot read coefficient file {text!r}: {exc}") from exc
    try:
        return PowerSeries(coeffs_from_json(json.loads(source)))
    except (ValueError, TypeError) as exc:
        raise InputError(f"malformed coefficients in {text!r}: {exc}") from exc


def parse_complex(text: str) -> complex:
    try:
        return complex(text.replace(" ", ""))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"not a complex number: {text!r}") from exc


def _cli_p(p: float) -> float:
    if not p >= 1:
        raise DomainError(f"the CLI accepts p >= 1 only; got p={p}")
    return p


def _threads() -> int:
    raw = os.environ.get("HTL_THREADS")
    if raw is None:
        return min(4, os.cpu_count() or 1)
    try:
        n = int(raw)
    except ValueError as exc:
        raise InputError(f"HTL_THREADS must be an integer; got {raw!r}") from exc
    if n < 1:
        raise InputError("HTL_THREADS must be >= 1")
    return n


def _grids(args) -> Grids:
    return Grids(input=disk_grid(args.radial_order, args.n_theta),
                 output=disk_grid(args.radial_order, args.output_n_theta),
                 fh=disk_grid(args.radial_order, args.fh_n_theta),
                 search=disk_grid(args.radial_order, args.search_n_theta),
                 tail_tol=args.tail_tol)


def _rule(args):
    return singular_line_rule(args.order, args.levels)


def resolved_config(args) -> dict:
    skip = {"func", "format", "output"}
    out = {}
    for k, v in sorted(vars(args).items()):
        if k in skip:
            continue
        if isinstance(v, complex):
            v = [v.real, v.imag]
        elif isinstance(v, list):
            v = [[x.real, x.imag] if isinstance(x, complex) else x for x in v]
        out[k] = v
    out["format"] = args.format
    out["version"] = __version__
    return out


def envelope(args, payload: dict) -> dict:
    return {
        "schema_version": SCHEMA_VERSION,
        "command": args.command,
        "config": resolved_config(args),
        "timestamp": _dt.datetime.now(_dt.timezone.utc).isoformat(timespec="seconds"),
        **payload,
    }


def _cpair(z) -> list[float]:
    z = complex(z)
    return [z.real, z.imag]


# --- subcommands ----------------------------------------------------------------


def cmd_apply(args) -> str:
    f = parse_coeffs(args.coeffs)
    K = args.K if args.K is not None else len(f)
    out = apply_series(f, args.m, K)
    paths = PATHS if args.paths == "all" else (args.paths,)
    rule = _rule(args)
    points = []
    for z in args.z:
        vals = {}
        if "series" in paths:
            vals["series"] = complex(apply_series_at(f, args.m, z))
        if "integral" in paths:
            vals["integral"] = complex(apply_integral(f, args.m, z, rule))
        if "mobius" in paths:
            vals["mobius"] = complex(apply_mobius(f, args.m, z, mirrored(rule)))
        devs = {f"{a}-{b}": abs(vals[a] - vals[b]) for i, a in enumerate(paths) for b in paths[i + 1:]}
        points.append({
            "z": _cpair(z),
            "values": {k: _cpair(v) for k, v in vals.items()},
            "deviations": devs,
            "max_deviation": max(devs.values(), default=0.0),
        })
    if args.format == "csv":
        return table_csv(APPLY_CSV_HEADER, ([k, float(c.real), float(c.imag)] for k, c in enumerate(out.coeffs)))
    return dumps(envelope(args, {"coeffs": series_to_list(out.series), "points": points}))


def cmd_norm(args) -> str:
    p = _cli_p(args.p)
    f = parse_coeffs(args.coeffs)
    if args.space == "bergman":
        value = bergman_norm(f, p, disk_grid(args.radial_order, args.n_theta))
    else:
        value = hardy_norm(f, p, n_theta=args.hardy_n_theta, radii=tuple(args.radii))
    if args.format == "csv":
        return table_csv(NORM_CSV_HEADER, [[args.space, p, repr(value)]])
    return dumps(envelope(args, {"space": args.space, "p": p, "norm": value}))


def _constant_rows(args) -> list[dict]:
    regimes = [Regime(args.regime)] if args.regime else list(Regime)
    explicit = args.p is not None
    p_grid = args.p if explicit else list(DEFAULT_P_GRID)
    rows = []
    for regime in regimes:
        for p in p_grid:
            if regime in (Regime.FH_LARGE_P, Regime.FH_SMALL_P) and args.m % 2:
                # F_H needs even m; skip silently in table mode
                if explicit and args.regime:
                    raise DomainError(f"{regime.value} needs even m; got m={args.m}")
                continue
            try:
                spec = BoundConstantSpec(p, args.m, regime)
            except DomainError:
                if explicit and args.regime:
                    raise
                continue
            rows.append({"regime": regime.value, "p": float(p), "m": args.m, "value": bound_constant(spec)})
    return rows


def cmd_constants(args) -> str:
    rows = _constant_rows(args)
    if args.format == "csv":
        return table_csv(CONSTANTS_CSV_HEADER, ([r["regime"], r["p"], r["m"], repr(r["value"])] for r in rows))
    safe = [{**r, "value": r["value"] if math.isfinite(r["value"]) else "inf"} for r in rows]
    return dumps(envelope(args, {"constants": safe}))


def _series_inputs(args) -> list[tuple[str, PowerSeries]]:
    if (args.coeffs is None) == (args.dir is None):
        raise InputError("give exactly one of --coeffs or --dir")
    if args.coeffs is not None:
        return [("inline" if args.coeffs.lstrip().startswith("[") else args.coeffs, parse_coeffs(args.coeffs))]
    folder = Path(args.dir)
    if not folder.is_dir():
        raise InputError(f"not a directory: {args.dir}")
    files = sorted(folder.glob("*.json"))
    if not files:
        raise InputError(f"no *.json series files in {args.dir}")
    return [(f.name, parse_coeffs(str(f))) for f in files]


def _emit_reports(args, named_reports, extra: dict | None = None) -> str:
    if args.format == "csv":
        text = bound_reports_csv([r for _, r in named_reports])
    else:
        items = [{"source": name, **r.to_dict()} for name, r in named_reports]
        text = dumps(envelope(args, {"reports": items, **(extra or {})}))
    bad = [name for name, r in named_reports if not r.holds]
    if bad:
        raise Anomaly(f"bound fails for {len(bad)} input(s): {', '.join(bad[:5])}", text)
    return text


def cmd_verify(args) -> str:
    p = _cli_p(args.p)
    inputs = _series_inputs(args)
    grids = _grids(args)
    rule = _rule(args)

    def one(item):
        name, f = item
        if args.bound == "fh":
            return name, verify_fh_bound(f, p, args.m, grids, rule)
        return name, verify_bound(f, p, args.m, grids)

    workers = min(_threads(), len(inputs))
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, inputs))  # map keeps input order
    else:
        results = [one(item) for item in inputs]
    return _emit_reports(args, results)


def cmd_slice(args) -> str:
    p = _cli_p(args.p)
    f = parse_coeffs(args.coeffs)
    grid = disk_grid(args.radial_order, args.n_theta)
    results = [(f"t={t!r}", verify_slice_bound(f, p, args.m, t, grid)) for t in args.t]
    return _emit_reports(args, results)


def cmd_search(args) -> str:
    _cli_p(args.p)
    try:
        result = extremal_search(args.p, args.m, args.n, args.budget, args.seed, restarts=args.restarts,
                                 grids=_grids(args), workers=_threads())
        anomaly = None
    except BoundAnomaly as exc:
        if exc.result is None:
            raise
        result, anomaly = exc.result, str(exc)
    if args.trajectory:
        Path(args.trajectory).write_text(trajectory_csv(result))
    if args.format == "csv":
        text = search_csv(result)
    else:
        text = dumps(envelope(args, {"result": result.to_dict()}))
    if anomaly:
        raise Anomaly(anomaly, text)
    return text


def cmd_equivalence(args) -> str:
    if args.coeffs is not None:
        corpus = [parse_coeffs(args.coeffs)]
    else:
        corpus = random_corpus(args.count, args.seed)
    if not 0 <= args.max_radius < 1:
        raise DomainError(f"--max-radius must lie in [0, 1); got {args.max_radius}")
    radii = np.linspace(0, args.max_radius, args.n_radii)
    thetas = 2 * np.pi * np.arange(args.n_angles) / args.n_angles
    zs = (radii[:, None] * np.exp(1j * thetas)[None, :]).ravel()
    rule = _rule(args)
    rows, worst = [], 0.0
    for i, f in enumerate(corpus):
        s = apply_series_at(f, args.m, zs)
        a = apply_integral(f, args.m, zs, rule)
        b = apply_mobius(f, args.m, zs, mirrored(rule))
        d = np.stack([np.abs(s - a), np.abs(s - b), np.abs(a - b)], axis=1)
        worst = max(worst, float(d.max()))
        rows.extend([i, z.real, z.imag, *map(float, dd)] for z, dd in zip(zs, d))
    if args.format == "csv":
        return table_csv(EQUIVALENCE_CSV_HEADER, rows)
    return dumps(envelope(args, {"n_series": len(corpus), "n_points": int(zs.size),
                                 "max_deviation": worst}))


# --- parser ---------------------------------------------------------------------


def _add_common(sp, quad=False, grids=False):
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--output", "-o", help="write here instead of stdout")
    if quad:
        sp.add_argument("--order", type=int, default=DEFAULT_ORDER, help="Gauss order per panel")
        sp.add_argument("--levels", type=int, default=DEFAULT_LEVELS, help="geometric refinement levels")
    if grids:
        sp.add_argument("--radial-order", type=int, default=64)
        sp.add_argument("--n-theta", type=int, default=256, help="angles for input norms")
        sp.add_argument("--output-n-theta", type=int, default=16384, help="angles for ||H(f)||")
        sp.add_argument("--fh-n-theta", type=int, default=1024)
        sp.add_argument("--search-n-theta", type=int, default=2048)
        sp.add_argument("--tail-tol", type=float, default=1e-8)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="htl", description="Hilbert tensor operator toolkit")
    ap.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    ap.add_argument("-v", "--verbose", action="store_true")
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("apply", help="coefficients of H(f), optionally point values by each route")
    sp.add_argument("--coeffs", required=True, help="JSON array or path to a JSON file")
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--K", type=int, default=None, help="output coefficients (default: len(f))")
    sp.add_argument("--paths", choices=(*PATHS, "all"), default="series")
    sp.add_argument("--z", type=parse_complex, action="append", default=[])
    _add_common(sp, quad=True)
    sp.set_defaults(func=cmd_apply)

    sp = sub.add_parser("norm", help="Bergman or Hardy norm")
    sp.add_argument("--space", choices=("bergman", "hardy"), required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--coeffs", required=True)
    sp.add_argument("--radial-order", type=int, default=64)
    sp.add_argument("--n-theta", type=int, default=256)
    sp.add_argument("--hardy-n-theta", type=int, default=DEFAULT_HARDY_N_THETA)
    sp.add_argument("--radii", type=float, nargs="+", default=[0.9, 0.99, 0.999])
    _add_common(sp)
    sp.set_defaults(func=cmd_norm)

    sp = sub.add_parser("constants", help="bound constants over a p grid")
    sp.add_argument("--regime", choices=[r.value for r in Regime])
    sp.add_argument("--p", type=float, action="append", help="repeatable; default is a fixed grid")
    sp.add_argument("--m", type=int, default=2)
    _add_common(sp)
    sp.set_defaults(func=cmd_constants)

    sp = sub.add_parser("verify", help="check the tensor or F_H bound for one series or a directory")
    sp.add_argument("--coeffs")
    sp.add_argument("--dir", help="directory of *.json series files (processed in name order)")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--bound", choices=("tensor", "fh"), default="tensor")
    _add_common(sp, quad=True, grids=True)
    sp.set_defaults(func=cmd_verify)

    sp = sub.add_parser("slice", help="single-slice bounds at given t")
    sp.add_argument("--coeffs", required=True)
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--t", type=float, nargs="+", default=[0.1, 0.2, 0.3, 0.4, 0.5, 0.6, 0.7, 0.8, 0.9])
    sp.add_argument("--radial-order", type=int, default=64)
    sp.add_argument("--n-theta", type=int, default=256)
    _add_common(sp)
    sp.set_defaults(func=cmd_slice)

    sp = sub.add_parser("search", help="extremal search for large ||H(f)|| / ||f||^(m-1)")
    sp.add_argument("--p", type=float, required=True)
    sp.add_argument("--m", type=int, required=True)
    sp.add_argument("--n", type=int, required=True, help="number of real coefficients")
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--budget", type=int, default=5000)
    sp.add_argument("--restarts", type=int, default=8)
    sp.add_argument("--trajectory", help="CSV file for the (evaluation, ratio) trajectory")
    _add_common(sp, grids=True)
    sp.set_defaults(func=cmd_search)

    sp = sub.add_parser("equivalence", help="max deviation between the three evaluation routes")
    sp.add_argument("--coeffs", help="single series; default is a seeded random corpus")
    sp.add_argument("--count", type=int, default=50)
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--m", type=int, default=2)
    sp.add_argument("--max-radius", type=float, default=0.9)
    sp.add_argument("--n-radii", type=int, default=5)
    sp.add_argument("--n-angles", type=int, default=8)
    _add_common(sp, quad=True)
    sp.set_defaults(func=cmd_equivalence)
    return ap


def _write(text: str, output: str | None) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        _write(args.func(args), args.output)
        return EXIT_OK
    except Anomaly as exc:
        _write(exc.payload, args.output)
        print(f"htl: anomaly: {exc}", file=sys.stderr)
        return EXIT_ANOMALY
    except BoundAnomaly as exc:
        print(f"htl: anomaly: {exc}", file=sys.stderr)
        return EXIT_ANOMALY
    except DomainError as exc:
        print(f"htl: domain error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except (InputError, ValueError, OSError) as exc:
        print(f"htl: bad input: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
