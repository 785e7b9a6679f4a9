"""Command-line front end: CSV emission, config files, metadata sidecars.

Every subcommand prints CSV (or writes it to --out with a JSON metadata
sidecar next to it).  All floats use %.12g; all randomness flows from a
single --seed.  Exit codes: 0 ok, 1 generic, 2 bad field spec / usage,
3 budget exceeded, 4 box query outside the grid extent.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .errors import QuadPrimesError
from .fields import parse_field_spec
from .ideals import (
    condensation_sum,
    dual_lattice_count,
    enumerate_squarefree_ideals,
    ideal_lattice,
    ideal_smoothed_count,
)
from .primes import build_grid, count_primes_box, load_grid, save_grid
from .singular_series import (
    DEFAULT_CUTOFF,
    montgomery_sum,
    residue_rk,
    singular_series,
    singular_sum_smoothed,
)
from .smoothing import Kind, TestFunction
from .statistics import Sampler, variance_profile, zbaseline_row


def _fmt(v) -> str:
    if isinstance(v, float):
        return "%.12g" % v
    return str(v)


def _emit(args, header: list[str], rows: list[tuple], meta: dict, trailer: str = ""):
    lines = [",".join(header)]
    lines += [",".join(_fmt(v) for v in row) for row in rows]
    if trailer:
        lines.append(trailer)
    text = "\n".join(lines) + "\n"
    if getattr(args, "out", None):
        with open(args.out, "w") as f:
            f.write(text)
        _write_sidecar(args, meta)
    else:
        sys.stdout.write(text)


def _write_sidecar(args, meta: dict):
    config = {
        k: v
        for k, v in vars(args).items()
        if k not in ("func",) and not callable(v)
    }
    payload = {"version": __version__, "config": config, **meta}
    with open(args.out + ".meta.json", "w") as f:
        json.dump(payload, f, indent=2, default=str)
        f.write("\n")


def _parse_deltas(text: str) -> list[float]:
    if ":" in text:
        lo, hi, step = (float(p) for p in text.split(":"))
        n = int(round((hi - lo) / step))
        return [round(lo + i * step, 12) for i in range(n + 1)]
    return [float(p) for p in text.split(",")]


def _parse_pair(text: str, cast):
    parts = text.split(",")
    if len(parts) != 2:
        raise argparse.ArgumentTypeError(f"expected two comma-separated values: {text!r}")
    return cast(parts[0]), cast(parts[1])


def _w_kind(name: str) -> TestFunction:
    return TestFunction({"square": Kind.SQUARE_AUTOCORR, "disc": Kind.DISC_AUTOCORR,
                         "triangle": Kind.TRIANGLE_1D}[name])


def _slope(xs, ys) -> float:
    return float(np.polyfit(np.asarray(xs, dtype=float), np.asarray(ys, dtype=float), 1)[0])


# ---------------------------------------------------------------------------
# Subcommand bodies


def cmd_field_info(args) -> int:
    field = parse_field_spec(args.field)
    res = residue_rk(field, args.tol)
    _emit(
        args,
        ["field", "D", "basis", "discriminant", "rk", "rk_error_bound"],
        [(field.spec_string(), field.D, field.basis.value, field.discriminant,
          res.value, res.error_bound)],
        {"method": res.method},
    )
    return 0


def cmd_residue(args) -> int:
    field = parse_field_spec(args.field)
    res = residue_rk(field, args.tol)
    _emit(
        args,
        ["field", "tol", "value", "error_bound", "method"],
        [(field.spec_string(), args.tol, res.value, res.error_bound, res.method)],
        {},
    )
    return 0


def cmd_primes(args) -> int:
    field = parse_field_spec(args.field)
    if args.action == "grid":
        if not args.out:
            raise QuadPrimesError("primes grid requires --out for the binary file")
        grid = build_grid(field, args.extent)
        save_grid(grid, args.out)
        _write_sidecar(args, {"total_primes": grid.total_primes(),
                              "total_weight": grid.total_weight()})
        return 0
    x1, x2 = args.center
    if args.grid:
        grid = load_grid(args.grid)
        if grid.field != field:
            raise QuadPrimesError("grid file was built for a different field")
    else:
        extent = math.ceil(max(abs(x1), abs(x2)) + args.H) + 1
        grid = build_grid(field, extent)
    count = count_primes_box(grid, x1, x2, args.H)
    _emit(
        args,
        ["field", "center1", "center2", "H", "count"],
        [(field.spec_string(), x1, x2, args.H, count)],
        {"extent": grid.extent},
    )
    return 0


def cmd_sstar(args) -> int:
    field = parse_field_spec(args.field)
    k1, k2 = args.eta
    val = singular_series(field.element(k1, k2), args.cutoff)
    _emit(
        args,
        ["field", "eta1", "eta2", "cutoff", "value", "tail_bound"],
        [(field.spec_string(), k1, k2, val.cutoff, val.value, val.tail_bound)],
        {},
    )
    return 0


def cmd_sum_singular(args) -> int:
    field = parse_field_spec(args.field)
    w = _w_kind(args.w)
    if w.dimension != 2:
        raise QuadPrimesError("sum-singular needs a 2D weight (square or disc)")
    rk = residue_rk(field, 1e-8)
    rows = []
    for H in (float(h) for h in args.H.split(",")):
        res = singular_sum_smoothed(field, w, H, args.cutoff)
        target = -w.value_at_zero * rk.value * math.log(H**2)
        rows.append((field.spec_string(), args.w, args.cutoff, H, res.value,
                     target, res.value / target))
    _emit(args, ["field", "w", "cutoff", "H", "sum", "target", "ratio"], rows,
          {"rk": rk.value, "rk_error_bound": rk.error_bound})
    return 0


def cmd_montgomery(args) -> int:
    rows = []
    H = 4
    while H <= args.Hmax:
        rows.append((H, montgomery_sum(H, args.cutoff)))
        H *= 2
    fit = [r for r in rows if r[0] >= 1024]
    if len(fit) < 3:
        fit = rows
    slope = _slope([math.log(h) for h, _ in fit], [s for _, s in fit])
    _emit(args, ["H", "sum"], rows, {"slope": slope},
          trailer="# slope vs log H: %.12g (target -0.5)" % slope)
    return 0


def cmd_variance(args) -> int:
    field = parse_field_spec(args.field)
    sampler = Sampler(kind=args.sampler, q=args.q, seed=args.seed)
    deltas = _parse_deltas(args.deltas)
    rows = variance_profile(field, args.X, deltas, sampler)
    res = residue_rk(field, 1e-8)
    _emit(
        args,
        ["field", "X", "delta", "H", "n_samples", "E", "V", "ratio", "target"],
        [(r.field, r.X, r.delta, r.H, r.n_samples, r.E, r.V, r.ratio, r.target)
         for r in rows],
        {"rk": res.value, "rk_error_bound": res.error_bound,
         "sampler": args.sampler, "seed": args.seed,
         "grid_extent": math.ceil(args.X + args.X ** max(deltas)) + 2},
    )
    return 0


def cmd_variance_z(args) -> int:
    rows = []
    for delta in _parse_deltas(args.deltas):
        r = zbaseline_row(args.X, delta)
        rows.append((r.X, r.delta, r.H, r.E, r.V_prime, r.V_lambda,
                     r.ratio_prime, r.ratio_lambda))
    _emit(args, ["X", "delta", "H", "E", "V_prime", "V_lambda",
                 "ratio_prime", "ratio_lambda"], rows, {})
    return 0


def cmd_diagnose(args) -> int:
    field = parse_field_spec(args.field)
    name = field.spec_string()
    if args.topic == "dual-count":
        rows = []
        for q in enumerate_squarefree_ideals(field, args.Y):
            if q.norm == 1:
                continue
            lat = ideal_lattice(q)
            for r in (0.2, 0.5, 1.0, 2.0):
                cnt = dual_lattice_count(lat, r)
                rows.append((name, q.norm, r, cnt, cnt / (q.norm * r * r)))
        _emit(args, ["field", "norm", "r", "count", "normalized"], rows, {})
        return 0
    if args.topic == "smooth-count":
        w = _w_kind("square")
        rows = []
        for q in enumerate_squarefree_ideals(field, args.Y):
            cnt = ideal_smoothed_count(q, w, args.H)
            rows.append((name, q.norm, float(args.H), cnt, w.value_at_zero,
                         args.H**2 * w.fourier_at_zero / q.norm))
        _emit(args, ["field", "norm", "H", "count", "w0", "riemann_ref"], rows, {})
        return 0
    if args.topic == "condensation":
        rows = []
        for c in enumerate_squarefree_ideals(field, args.Y):
            for k1 in range(-3, 4):
                for k2 in range(-3, 4):
                    eta = field.element(k1, k2)
                    got = condensation_sum(c, eta)
                    want = c.norm if c.contains(eta) else 0
                    rows.append((name, c.norm, k1, k2, got, want, int(got == want)))
        _emit(args, ["field", "norm", "eta1", "eta2", "sum", "expected", "ok"],
              rows, {})
        return 0
    raise QuadPrimesError(f"unknown diagnostic {args.topic!r}")


# ---------------------------------------------------------------------------
# Parser assembly


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--config", help="key = value file; flags override entries")
    p.add_argument("--out", help="write CSV here (plus <out>.meta.json sidecar)")
    p.add_argument("--seed", type=int, default=0, help="RNG seed (64-bit)")
    p.add_argument("--threads", type=int, default=1,
                   help="worker cap; results are identical for any value")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="quadprimes",
        description="Prime statistics and singular series in quadratic fields. "
        "Exit codes: 0 ok, 1 error, 2 bad field spec, 3 budget, 4 extent.",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("field-info", help="field metadata and residue")
    p.add_argument("--field", required=True, help="D=<int>[,half]")
    p.add_argument("--tol", type=float, default=1e-8, help="residue tolerance")
    _add_common(p)
    p.set_defaults(func=cmd_field_info)

    p = sub.add_parser("residue", help="residue of the Dedekind zeta at s=1")
    p.add_argument("--field", required=True)
    p.add_argument("--tol", type=float, default=1e-8)
    _add_common(p)
    p.set_defaults(func=cmd_residue)

    p = sub.add_parser("primes", help="prime-element box counts and grids")
    p.add_argument("action", choices=["count", "grid"])
    p.add_argument("--field", required=True)
    p.add_argument("--center", type=lambda s: _parse_pair(s, float),
                   default=(0.0, 0.0), help="box center x1,x2")
    p.add_argument("--H", type=float, default=10.0, help="box half-width")
    p.add_argument("--extent", type=int, default=100, help="grid extent R")
    p.add_argument("--grid", help="load a saved grid instead of building one")
    _add_common(p)
    p.set_defaults(func=cmd_primes)

    p = sub.add_parser("sstar", help="singular series at one shift")
    p.add_argument("--field", required=True)
    p.add_argument("--eta", type=lambda s: _parse_pair(s, int), required=True,
                   help="coordinates k1,k2")
    p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF,
                   help="Euler product norm cutoff P")
    _add_common(p)
    p.set_defaults(func=cmd_sstar)

    p = sub.add_parser("sum-singular", help="smoothed sum of (S(eta)-1)")
    p.add_argument("--field", required=True)
    p.add_argument("--H", required=True, help="scale(s), comma separated")
    p.add_argument("--w", choices=["square", "disc"], default="square")
    p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    _add_common(p)
    p.set_defaults(func=cmd_sum_singular)

    p = sub.add_parser("montgomery", help="weighted rational singular sum table")
    p.add_argument("--Hmax", type=int, default=131072)
    p.add_argument("--cutoff", type=int, default=DEFAULT_CUTOFF)
    _add_common(p)
    p.set_defaults(func=cmd_montgomery)

    p = sub.add_parser("variance", help="field variance profile vs delta")
    p.add_argument("--field", required=True)
    p.add_argument("--X", type=float, default=1000.0, help="ball radius")
    p.add_argument("--deltas", default="0.1:0.9:0.1",
                   help="lo:hi:step or comma list of exponents")
    p.add_argument("--sampler", choices=["grid", "jitter"], default="grid")
    p.add_argument("--q", type=int, default=2, help="jitter strata per axis")
    _add_common(p)
    p.set_defaults(func=cmd_variance)

    p = sub.add_parser("variance-z", help="rational-integer baselines")
    p.add_argument("--X", type=int, default=100000)
    p.add_argument("--deltas", default="0.5")
    _add_common(p)
    p.set_defaults(func=cmd_variance_z)

    p = sub.add_parser("diagnose", help="identity and lattice diagnostics (CSV)")
    p.add_argument("topic", choices=["dual-count", "smooth-count", "condensation"])
    p.add_argument("--field", default="D=-1")
    p.add_argument("--Y", type=int, default=30, help="ideal norm bound")
    p.add_argument("--H", type=float, default=50.0, help="scale for smooth-count")
    _add_common(p)
    p.set_defaults(func=cmd_diagnose)

    return parser


def _load_config_args(path: str) -> list[str]:
    out = []
    with open(path) as f:
        for line in f:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise QuadPrimesError(f"bad config line: {line!r}")
            key, value = (p.strip() for p in line.split("=", 1))
            out += ["--" + key.replace("_", "-"), value]
    return out


def _inject_config(argv: list[str]) -> list[str]:
    if "--config" not in argv:
        return argv
    path = argv[argv.index("--config") + 1]
    cfg = _load_config_args(path)
    # insert after the leading positionals so explicit flags win
    j = 0
    while j < len(argv) and not argv[j].startswith("-"):
        j += 1
    return argv[:j] + cfg + argv[j:]


def main(argv: list[str] | None = None) -> int:
    if argv is None:
        argv = sys.argv[1:]
    parser = build_parser()
    try:
        args = parser.parse_args(_inject_config(argv))
        return args.func(args)
    except QuadPrimesError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.exit_code


if __name__ == "__main__":
    sys.exit(main())
