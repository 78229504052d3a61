"""Command-line entry point: ``lattice-angles <command> [options]``.

Every table goes to ``--output`` (stdout by default) as CSV or as a JSON
array of flat objects. Floats carry 12 significant digits in positional
notation. Exit codes: 0 success, 1 verification failure, 2 bad usage.

Options may also come from ``--config FILE`` holding ``key=value`` lines
(keys are option names, ``-`` or ``_`` both accepted); flags given on the
command line win.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import sys
from collections.abc import Sequence
from pathlib import Path

import numpy as np

from . import arith, group, stats, theory, verify
from .geometry import NormalizedTarget, Point

HALF_PI = math.pi / 2

DEFAULTS = {
    "level": 1,
    "z0": Point(0.0, 1.0),
    "z1": None,
    "radius": None,
    "norm_sq": None,
    "omega": (-HALF_PI, HALF_PI, 181),
    "beta": [-math.inf, -1.0, 0.0, 1.0, math.inf],
    "bins": 18,
    "workers": 1,
    "output": None,
    "summary": None,
    "format": "csv",
    "q_max": 10,
    "m_range": (-2, 2),
    "n_range": (-2, 2),
    "suites": None,
}


def fmt(value) -> str:
    if isinstance(value, (bool, np.bool_)):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return "nan"
        if math.isinf(value):
            return "inf" if value > 0 else "-inf"
        if value == 0:
            return "0"
        return np.format_float_positional(float(value), precision=12, unique=False, fractional=False, trim="-")
    return str(value)


def _json_value(value) -> str:
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, (float, np.floating)):
        if math.isnan(value):
            return "null"
        if math.isinf(value):
            return json.dumps(fmt(value))
    return fmt(value)


def to_json(obj: dict) -> str:
    return "{" + ", ".join(f"{json.dumps(k)}: {_json_value(v)}" for k, v in obj.items()) + "}"


def render(rows: list[dict], columns: Sequence[str], form: str) -> str:
    if form == "json":
        return "[\n" + ",\n".join("  " + to_json({c: r[c] for c in columns}) for r in rows) + "\n]\n"
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(columns)
    for r in rows:
        writer.writerow([fmt(r[c]) for c in columns])
    return buf.getvalue()


# argument parsing -----------------------------------------------------------


def parse_point(text: str) -> Point:
    try:
        x, y = (float(v) for v in text.split(","))
        return Point(x, y)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 'x,y' with y > 0, got {text!r}") from exc


def _real(text: str) -> float:
    t = text.strip().lower().replace("+", "")
    table = {"inf": math.inf, "-inf": -math.inf, "pi": math.pi, "-pi": -math.pi,
             "pi/2": HALF_PI, "-pi/2": -HALF_PI}
    if t in table:
        return table[t]
    return float(t)


def parse_reals(text: str) -> list[float]:
    try:
        return [_real(v) for v in text.split(",")]
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from exc


def parse_grid(text: str) -> tuple[float, float, int]:
    try:
        start, stop, steps = text.split(":")
        grid = (_real(start), _real(stop), int(steps))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 'start:stop:steps', got {text!r}") from exc
    if grid[2] < 1:
        raise argparse.ArgumentTypeError("grid needs at least one step")
    return grid


def parse_int_range(text: str) -> tuple[int, int]:
    try:
        lo, hi = (int(v) for v in text.split(":"))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"expected 'lo:hi', got {text!r}") from exc
    return lo, hi


def _common(p: argparse.ArgumentParser, ball: bool = True, z1: bool = False) -> None:
    p.add_argument("--config", type=Path, help="key=value file with default options")
    p.add_argument("--output", "-o", type=Path, help="output file (default stdout)")
    p.add_argument("--format", choices=("csv", "json"))
    if ball:
        p.add_argument("--level", "-N", type=int, help="level N of Gamma(N)")
        p.add_argument("--z0", type=parse_point, help="base point 'x,y'")
        p.add_argument("--radius", "-R", type=parse_reals, help="hyperbolic radius R (comma list for count)")
        p.add_argument("--norm-sq", type=parse_reals, help="norm bound Q^2 = 2 cosh R (comma list for count)")
        p.add_argument("--workers", "-j", type=int, help="enumeration threads")
    if z1:
        p.add_argument("--z1", type=parse_point, help="observation point 'x,y' (default z0)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="lattice-angles", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sp = lambda name, help: sub.add_parser(name, help=help, argument_default=argparse.SUPPRESS)

    p = sp("count", "ball counts against 6 e^R / index")
    _common(p)

    p = sp("angles", "angle of every ball element")
    _common(p, z1=True)
    p.add_argument("--summary", type=Path, help="summary JSON file (default stderr)")

    p = sp("cdf", "empirical CDF against the limiting CDF")
    _common(p, z1=True)
    p.add_argument("--omega", type=parse_grid, help="grid 'start:stop:steps'")

    p = sp("density", "limiting density against finite differences of the CDF")
    _common(p, ball=False)
    p.add_argument("--level", "-N", type=int, help="level N (unused by the density)")
    p.add_argument("--z0", type=parse_point, help="base point 'x,y'")
    p.add_argument("--z1", type=parse_point, help="observation point 'x,y' (default z0)")
    p.add_argument("--omega", type=parse_grid, help="grid 'start:stop:steps'")

    p = sp("chisq", "binned chi-square of the angles against the density")
    _common(p, z1=True)
    p.add_argument("--bins", type=int)

    p = sp("sector", "sector counts against the sector main term")
    _common(p)
    p.add_argument("--beta", type=parse_reals, help="comma list of slopes, inf allowed")

    p = sp("kloosterman", "Kloosterman sums with Weil ratios")
    _common(p, ball=False)
    p.add_argument("--q-max", type=int)
    p.add_argument("--m-range", type=parse_int_range, help="'lo:hi' inclusive")
    p.add_argument("--n-range", type=parse_int_range, help="'lo:hi' inclusive")

    p = sp("verify", "run the self-check suites")
    _common(p, ball=False)
    p.add_argument("--suites", type=lambda s: s.split(","), help="comma list of suite names")
    return parser


def _read_config(path: Path) -> list[str]:
    argv = []
    for n, line in enumerate(path.read_text().splitlines(), 1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ValueError(f"{path}:{n}: expected key=value")
        key, value = (s.strip() for s in line.split("=", 1))
        argv.append(f"--{key.replace('_', '-')}={value}")
    return argv


def resolve(argv: Sequence[str] | None = None) -> argparse.Namespace:
    """Parse ``argv`` and merge defaults, config file values and flags."""
    parser = build_parser()
    cli = vars(parser.parse_args(argv))
    command = cli["command"]
    merged = dict(DEFAULTS)
    if "config" in cli:
        try:
            cfg_argv = _read_config(cli["config"])
        except (OSError, ValueError) as exc:
            parser.error(str(exc))
        cfg = vars(parser.parse_args([command, *cfg_argv]))
        if "radius" in cli or "norm_sq" in cli:
            cfg.pop("radius", None)
            cfg.pop("norm_sq", None)
        merged.update(cfg)
    merged.update(cli)
    args = argparse.Namespace(**merged)
    if args.level < 1:
        parser.error("--level must be >= 1")
    if args.workers < 1:
        parser.error("--workers must be >= 1")
    if args.z1 is None:
        args.z1 = args.z0
    needs_ball = command in ("count", "angles", "cdf", "chisq", "sector")
    if needs_ball:
        if (args.radius is None) == (args.norm_sq is None):
            parser.error("give exactly one of --radius / --norm-sq")
        bounds = args.norm_sq if args.norm_sq is not None else [2 * math.cosh(r) for r in args.radius]
        if command != "count" and len(bounds) != 1:
            parser.error(f"{command} takes a single radius or norm bound")
        if min(bounds) < 2:
            parser.error("norm bound Q^2 must be >= 2 (radius >= 0)")
        args.bounds = bounds
    return args


# commands -------------------------------------------------------------------


def _ball(args, q2: float) -> group.BallSpec:
    return group.BallSpec(args.level, args.z0, q2)


def _omega_grid(args) -> np.ndarray:
    start, stop, steps = args.omega
    return np.clip(np.linspace(start, stop, steps), -HALF_PI, HALF_PI)


def cmd_count(args):
    rows = []
    radii = args.radius if args.radius is not None else [None] * len(args.bounds)
    for R, q2 in zip(radii, args.bounds):
        n = group.count_ball(_ball(args, q2), workers=args.workers)
        R = math.acosh(q2 / 2) if R is None else R
        main = theory.ball_main_term(args.level, R)
        rows.append({"radius": R, "norm_sq": q2, "count": n, "main_term": main, "rel_error": abs(n / main - 1)})
    return rows, ["radius", "norm_sq", "count", "main_term", "rel_error"], 0


def angles_summary(samples: group.AngleSamples) -> dict:
    th = samples.theta
    return {
        "count": len(samples),
        "undefined_count": samples.undefined_count,
        "ball_count": samples.ball_count,
        "theta_min": float(th.min()) if len(th) else math.nan,
        "theta_max": float(th.max()) if len(th) else math.nan,
    }


def cmd_angles(args):
    samples = group.collect_angles(_ball(args, args.bounds[0]), args.z1, workers=args.workers).sorted()
    g = samples.gamma
    rows = [
        {"a": r[0], "b": r[1], "c": r[2], "d": r[3], "theta": t, "dist": s}
        for r, t, s in zip(g.tolist(), samples.theta.tolist(), samples.dist.tolist())
    ]
    summary = to_json(angles_summary(samples)) + "\n"
    if args.summary is not None:
        args.summary.write_text(summary)
    else:
        sys.stderr.write(summary)
    return rows, ["a", "b", "c", "d", "theta", "dist"], 0


def cmd_cdf(args):
    samples = group.collect_angles(_ball(args, args.bounds[0]), args.z1, workers=args.workers, keep_gamma=False)
    grid = _omega_grid(args)
    target = NormalizedTarget.from_points(args.z0, args.z1)
    emp = stats.ecdf(samples, grid) if len(samples) else np.full(len(grid), math.nan)
    lim = theory.xi(target, grid)
    rows = [
        {"omega": w, "ecdf": e, "xi": x, "abs_err": abs(e - x)}
        for w, e, x in zip(grid.tolist(), np.atleast_1d(emp).tolist(), np.atleast_1d(lim).tolist())
    ]
    return rows, ["omega", "ecdf", "xi", "abs_err"], 0


def xi_prime_fd(target: NormalizedTarget, t: np.ndarray, h: float = 1e-5) -> np.ndarray:
    """Central differences of the limiting CDF, one-sided at the ends."""
    lo = np.clip(t - h, -HALF_PI, HALF_PI)
    hi = np.clip(t + h, -HALF_PI, HALF_PI)
    return (theory.xi(target, hi) - theory.xi(target, lo)) / (hi - lo)


def cmd_density(args):
    grid = _omega_grid(args)
    ctx = theory.TheoryContext(args.level, args.z0, args.z1)
    rho = np.atleast_1d(theory.density_rho(ctx, grid))
    fd = np.atleast_1d(xi_prime_fd(ctx.target, grid))
    rows = [{"t": t, "rho": r, "xi_prime_fd": f} for t, r, f in zip(grid.tolist(), rho.tolist(), fd.tolist())]
    return rows, ["t", "rho", "xi_prime_fd"], 0


def cmd_chisq(args):
    samples = group.collect_angles(_ball(args, args.bounds[0]), args.z1, workers=args.workers, keep_gamma=False)
    ctx = theory.TheoryContext(args.level, args.z0, args.z1)
    stat, table = stats.chi_square_bins(samples, ctx, args.bins)
    rows = [vars(r) | {"statistic": stat} for r in table]
    return rows, ["lo", "hi", "observed", "expected", "flagged", "statistic"], 0


def cmd_sector(args):
    q2 = args.bounds[0]
    rows = []
    for beta in args.beta:
        n = group.count_sector(group.SectorSpec(_ball(args, q2), beta), workers=args.workers)
        main = theory.sector_main_term(args.level, beta, math.sqrt(q2))
        rel = 0.0 if main == 0 and n == 0 else (abs(n / main - 1) if main else math.inf)
        rows.append({"beta": beta, "count": n, "main_term": main, "rel_error": rel})
    return rows, ["beta", "count", "main_term", "rel_error"], 0


def cmd_kloosterman(args):
    ms = np.arange(args.m_range[0], args.m_range[1] + 1)
    ns = np.arange(args.n_range[0], args.n_range[1] + 1)
    rows = []
    for q in range(1, args.q_max + 1):
        S = arith.kloosterman_grid(ms, ns, q)
        for i, m in enumerate(ms.tolist()):
            for j, n in enumerate(ns.tolist()):
                s = S[i, j]
                rows.append({"m": m, "n": n, "q": q, "re": s.real, "im": s.imag,
                             "weil_ratio": abs(s) / arith.weil_bound(m, n, q)})
    code = 1 if any(r["weil_ratio"] > 1 + 1e-12 for r in rows) else 0
    return rows, ["m", "n", "q", "re", "im", "weil_ratio"], code


def cmd_verify(args):
    results = verify.run_all(args.suites)
    report = {name: "pass" if ok else "fail" for name, (ok, _) in results.items()}
    report |= {f"{name}_detail": detail for name, (_, detail) in results.items()}
    passed = all(ok for ok, _ in results.values())
    report["all_passed"] = passed
    return report, None, 0 if passed else 1


COMMANDS = {
    "count": cmd_count,
    "angles": cmd_angles,
    "cdf": cmd_cdf,
    "density": cmd_density,
    "chisq": cmd_chisq,
    "sector": cmd_sector,
    "kloosterman": cmd_kloosterman,
    "verify": cmd_verify,
}


def main(argv: Sequence[str] | None = None) -> int:
    args = resolve(argv)
    try:
        rows, columns, code = COMMANDS[args.command](args)
    except (ValueError, OverflowError) as exc:
        print(f"lattice-angles: error: {exc}", file=sys.stderr)
        return 2
    text = to_json(rows) + "\n" if columns is None else render(rows, columns, args.format)
    if args.output is None:
        sys.stdout.write(text)
    else:
        args.output.write_text(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
