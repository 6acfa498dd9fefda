"""Command-line front end: solvers, verification campaigns, CSV/JSON artifacts.

All numeric output is written with 17 significant digits, '.' decimal
separator and '\\n' line endings, so identical configurations produce
byte-identical artifacts.  Exit codes: 0 success, 1 acceptance failure,
2 invalid configuration, 3 solver error.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import asym, degennes, fiber, steklov
from .errors import MagspecError

__all__ = ["main", "format_float", "RunConfig"]

EXIT_OK = 0
EXIT_ACCEPT_FAIL = 1
EXIT_BAD_CONFIG = 2
EXIT_SOLVER = 3


def format_float(x: float) -> str:
    """Deterministic decimal rendering: 17 significant digits, C locale."""
    if isinstance(x, (int, np.integer)):
        return str(int(x))
    return format(float(x), ".17g")


@dataclass(frozen=True)
class RunConfig:
    """One validated CLI invocation: a command plus its flat parameter map."""

    command: str
    parameters: dict


def _workers() -> int:
    raw = os.environ.get("MAGSPEC_THREADS", "1")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def _write_csv(path: Path, header: list[str], rows: list[tuple]) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(format_float(v) for v in row) + "\n")


def _parse_m_range(text: str) -> list[int]:
    if ".." in text:
        lo, hi = text.split("..")
        return list(range(int(lo), int(hi) + 1))
    return [int(tok) for tok in text.split(",")]


def _cmd_degennes(args) -> int:
    K = degennes.constants(args.gamma)
    out = Path(args.out) / "degennes.json"
    doc = K.to_dict()
    with open(out, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(doc, fh, indent=1, sort_keys=True)
        fh.write("\n")
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_dispersion(args) -> int:
    points = args.points // 2 if args.fast else args.points
    nu_n, shift = fiber.normalize_nu(args.nu)
    if shift:
        print(f"note: nu normalized by integer shift {shift} to {nu_n}", file=sys.stderr)
    b_grid = [args.bmax * j / points for j in range(1, points + 1)]
    m_list = _parse_m_range(args.m)
    sweep = fiber.dispersion_sweep(
        nu_n, args.gamma, m_list, b_grid, args.levels, workers=_workers()
    )
    rows = [
        (p.spec.nu, p.spec.gamma, p.spec.m, p.level, p.spec.b, p.mu, p.error)
        for p in sweep
    ]
    out = Path(args.out) / "dispersion.csv"
    _write_csv(out, ["nu", "gamma", "m", "level", "b", "mu", "err"], rows)
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_strong(args) -> int:
    K = degennes.constants(args.gamma)
    rows = []
    for b in args.b:
        pred = asym.predict_strong(b, args.nu, K)
        mu = fiber.exterior_spectrum(b, args.nu, args.gamma, 0)[0][2]
        resid = mu - pred.total
        rows.append(
            (
                b,
                args.nu,
                args.gamma,
                mu,
                pred.term_theta_b,
                pred.term_c_sqrtb,
                pred.term_osc,
                pred.total,
                pred.m_star,
                resid,
                resid * math.sqrt(b),
            )
        )
    out = Path(args.out) / "strong.csv"
    _write_csv(
        out,
        [
            "b",
            "nu",
            "gamma",
            "mu_numeric",
            "term_theta_b",
            "term_c_sqrtb",
            "term_osc",
            "total",
            "m_star",
            "residual",
            "scaled_residual",
        ],
        rows,
    )
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_weak(args) -> int:
    nu_n, _ = fiber.normalize_nu(args.nu)
    m = (args.k + 1) if nu_n >= 0 else args.k  # fiber carrying level k
    rows = []
    for b in args.b:
        vals, _ = fiber._levels(m, nu_n, b, 0.0, 1)
        mu_fd = vals[0]
        pred = asym.predict_weak(args.k, nu_n, b)
        try:
            mu_u = fiber.implicit_eig_U(m, nu_n, b)
        except MagspecError:
            mu_u = math.nan
        try:
            tb = fiber.temple_bounds(m, nu_n, b)
            lo, hi = tb.lower, tb.upper
        except MagspecError:
            lo = hi = math.nan
        rows.append((b, nu_n, args.k, m, mu_fd, mu_u, pred, lo, hi))
    out = Path(args.out) / "weak.csv"
    _write_csv(
        out,
        ["b", "nu", "k", "m", "mu_fd", "mu_implicit_u", "prediction", "lower", "upper"],
        rows,
    )
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_steklov(args) -> int:
    out_dir = Path(args.out)
    if args.mode == "strong":
        table = steklov.verify_steklov_thirdterm(args.e0, args.nu, args.n_list)
        out = out_dir / "steklov_strong.csv"
    else:
        table = steklov.verify_weak_steklov(args.nu, args.b)
        out = out_dir / "steklov_weak.csv"
    table.write_csv(out)
    for key in sorted(table.summary):
        print(f"{key} = {table.summary[key]}")
    print(f"wrote {out}")
    return EXIT_OK


def _cmd_accept(args) -> int:
    from . import acceptance

    only = set(int(t) for t in args.only.split(",")) if args.only else None
    results = acceptance.run_all(only=only)
    failed = [r for r in results if not r.passed]
    return EXIT_ACCEPT_FAIL if failed else EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="magspec",
        description="Exterior-disk magnetic Laplace/Steklov spectral laboratory",
    )
    ap.add_argument("--out", default=".", help="output directory for artifacts")
    ap.add_argument("--fast", action="store_true", help="halve sweep grids (smoke runs)")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("degennes", help="write the constant record at one gamma")
    p.add_argument("--gamma", type=float, required=True)

    p = sub.add_parser("dispersion", help="sweep dispersion curves to CSV")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--m", type=str, required=True, help="range a..b or comma list")
    p.add_argument("--bmax", type=float, required=True)
    p.add_argument("--points", type=int, required=True)
    p.add_argument("--levels", type=int, default=1)

    p = sub.add_parser("strong", help="strong-field three-term comparison")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--gamma", type=float, default=0.0)
    p.add_argument("--b", type=float, nargs="+", required=True)

    p = sub.add_parser("weak", help="weak-field splitting comparison")
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--k", type=int, default=0)
    p.add_argument("--b", type=float, nargs="+", required=True)

    p = sub.add_parser("steklov", help="Steklov verification campaigns")
    p.add_argument("--mode", choices=("strong", "weak"), required=True)
    p.add_argument("--nu", type=float, required=True)
    p.add_argument("--e0", type=float, default=0.0)
    p.add_argument("--n-list", type=int, nargs="+", default=[60, 120, 240, 440])
    p.add_argument("--b", type=float, nargs="+", default=[0.0005, 0.001, 0.002, 0.004])

    p = sub.add_parser("accept", help="run the acceptance suite")
    p.add_argument("--only", type=str, default="")

    return ap


_DISPATCH = {
    "degennes": _cmd_degennes,
    "dispersion": _cmd_dispersion,
    "strong": _cmd_strong,
    "weak": _cmd_weak,
    "steklov": _cmd_steklov,
    "accept": _cmd_accept,
}


def main(argv: list[str] | None = None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_BAD_CONFIG if exc.code not in (0, None) else EXIT_OK
    try:
        Path(args.out).mkdir(parents=True, exist_ok=True)
        config = RunConfig(args.command, {k: v for k, v in vars(args).items() if k != "command"})
        _ = config  # the validated record; handlers read the argparse namespace
        return _DISPATCH[args.command](args)
    except (ValueError, OSError) as exc:
        print(f"invalid configuration: {exc}", file=sys.stderr)
        return EXIT_BAD_CONFIG
    except MagspecError as exc:
        print(f"solver error: {exc}", file=sys.stderr)
        return EXIT_SOLVER


if __name__ == "__main__":
    raise SystemExit(main())
