"""Command-line front end.

Exit codes: 0 success, 1 a verification check failed, 2 bad arguments or
configuration, 3 numerical range or unsupported-regime errors. With
``--json-errors`` failures also print a JSON object on stderr.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import sys
from dataclasses import asdict, fields, is_dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .errors import (
    ConfigurationError, DivergentIntegralError, DomainError, GridError, InversionError,
    LengthError, PreconditionError, RangeError, RegimeError, SigmaEvoError, UnsupportedCaseError,
)
from .estimates import write_reports
from .kernels import HankelOptions, kernel_J, kernel_K, kernel_M, kernel_N
from .ml import mittag_leffler
from .solver import SCHEMA_VERSION, Grid, SpectralField, default_workers, solve_cp1, solve_cp2
from .spectral import ModelParams
from .verify import SUITES, SuiteConfig, run_suites

EXIT_OK, EXIT_FAILED, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3

_NUMERIC = (RangeError, InversionError, UnsupportedCaseError, RegimeError, DivergentIntegralError,
            ArithmeticError)
_USAGE = (ConfigurationError, DomainError, PreconditionError, GridError, LengthError,
          ValueError, KeyError, TypeError, OSError)


class UsageError(Exception):
    """Raised instead of argparse's own exit so errors share one reporting path."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _write_rows(path, header, rows):
    fh = open(path, "w", newline="") if path else sys.stdout
    try:
        w = csv.writer(fh)
        w.writerow(header)
        for row in rows:
            w.writerow([f"{v:.17g}" if isinstance(v, float) else v for v in row])
    finally:
        if path:
            fh.close()


# ---------------------------------------------------------------------------
# ml-eval
# ---------------------------------------------------------------------------

def cmd_ml_eval(args) -> int:
    if args.z_grid is not None:
        start, stop, count = args.z_grid
        count = int(count)
        if count < 1:
            raise UsageError("--z-grid COUNT must be positive")
        z = np.linspace(start, stop, count) + 1j * args.z_im
    else:
        if args.z_re is None:
            raise UsageError("give --z-re (and optionally --z-im) or --z-grid")
        z = np.array([complex(args.z_re, args.z_im)])
    vals = np.atleast_1d(mittag_leffler(args.alpha, args.beta, z, args.gamma))
    rows = [(float(a.real), float(a.imag), float(v.real), float(v.imag)) for a, v in zip(z, vals)]
    _write_rows(args.out, ("z_re", "z_im", "value_re", "value_im"), rows)
    return EXIT_OK


# ---------------------------------------------------------------------------
# solve
# ---------------------------------------------------------------------------

def _profile(grid: Grid, desc: dict, rng) -> np.ndarray:
    """Built-in spatial profiles or a CSV sample file (column ``u``)."""
    desc = dict(desc)
    coords = grid.coords()
    if "file" in desc:
        with open(desc["file"], newline="") as fh:
            vals = np.array([float(r["u"]) for r in csv.DictReader(fh)])
        if vals.size != math.prod(grid.shape):
            raise ConfigurationError(
                f"{desc['file']} has {vals.size} samples, grid needs {math.prod(grid.shape)}")
        out = vals.reshape(grid.shape)
    else:
        kind = desc.get("profile", "gaussian")
        amp = float(desc.get("amplitude", 1.0))
        width = float(desc.get("width", 1.0))
        center = np.broadcast_to(np.asarray(desc.get("center", 0.0), float), (grid.n,))
        r2 = sum((c - x0) ** 2 for c, x0 in zip(coords, center))
        if kind == "gaussian":
            out = amp * np.exp(-r2 / (2 * width ** 2))
        elif kind == "bump":
            inside = r2 < width ** 2
            out = np.where(inside, amp * np.exp(-1 / np.where(inside, 1 - r2 / width ** 2, 1)), 0.0)
        elif kind == "plane-wave":
            k = np.broadcast_to(np.asarray(desc.get("k", 1), float), (grid.n,))
            out = amp * np.cos(sum(kk * c for kk, c in zip(k, coords)))
        elif kind == "zero":
            out = np.zeros(grid.shape)
        else:
            raise ConfigurationError(
                f"unknown profile {kind!r}; use gaussian, bump, plane-wave, zero or file")
    noise = float(desc.get("noise", 0.0))
    if noise:
        out = out + noise * rng.standard_normal(grid.shape)
    return out


def load_config(path) -> dict:
    """Read a run config; a manifest written by ``solve`` is accepted as well."""
    data = json.loads(Path(path).read_text())
    if "config" in data and "schema_version" in data:
        data = data["config"]
    return data


def build_run(cfg: dict, problem: str):
    """Validate a config and return ``(params, u0, u1, f, times)``."""
    try:
        pd = cfg["params"]
        p = ModelParams(float(pd["alpha"]), float(pd["beta"]), float(pd["sigma"]),
                        float(pd["mu"]), int(pd.get("n", 1)))
        gd = cfg["grid"]
        grid = Grid(p.n, int(gd["points"]), float(gd["length"]))
    except KeyError as exc:
        raise ConfigurationError(f"config is missing the key {exc}") from exc
    p.check_problem(problem)
    td = cfg.get("times", {"start": 0.0, "stop": 1.0, "count": 65})
    if isinstance(td, list):
        times = np.asarray(td, float)
    elif td.get("spacing", "uniform") == "geometric":
        times = np.geomspace(float(td["start"]), float(td["stop"]), int(td["count"]))
    else:
        times = np.linspace(float(td["start"]), float(td["stop"]), int(td["count"]))
    rng = np.random.default_rng(int(cfg.get("seed", 0)))
    u0 = SpectralField(grid, physical=_profile(grid, cfg.get("u0", {}), rng))
    u1 = None
    if problem == "cp2":
        u1 = SpectralField(grid, physical=_profile(grid, cfg.get("u1", {"profile": "zero"}), rng))
    fd = cfg.get("f", {"profile": "zero"})
    f = None
    if fd.get("profile", "file" if "file" in fd else "zero") != "zero":
        space = _profile(grid, fd, rng)
        k = float(fd.get("time_power", 0.0))
        f = lambda t: (t ** k if k else 1.0) * space                      # noqa: E731
    return p, u0, u1, f, times


def cmd_solve(args) -> int:
    cfg = load_config(args.config)
    p, u0, u1, f, times = build_run(cfg, args.problem)
    workers = default_workers()
    traj = solve_cp1(u0, f, p, times, workers) if args.problem == "cp1" else \
        solve_cp2(u0, u1, f, p, times, workers)
    out = Path(args.out or cfg.get("output", "run"))
    full = dict(cfg)
    full["problem"] = args.problem
    manifest = traj.export(out, full)
    print(manifest)
    return EXIT_OK


# ---------------------------------------------------------------------------
# verify
# ---------------------------------------------------------------------------

def _merge(dc, data: dict):
    for f in fields(dc):
        if f.name in data:
            cur = getattr(dc, f.name)
            val = data[f.name]
            if is_dataclass(cur):
                _merge(cur, val)
            else:
                setattr(dc, f.name, tuple(map(_tuplify, val)) if isinstance(val, list) else val)
    unknown = set(data) - {f.name for f in fields(dc)}
    if unknown:
        raise ConfigurationError(f"unknown config keys {sorted(unknown)} for {type(dc).__name__}")
    return dc


def _tuplify(v):
    return tuple(v) if isinstance(v, list) else v


def cmd_verify(args) -> int:
    if args.suite != "all" and args.suite not in SUITES:
        raise UsageError(f"unknown suite {args.suite!r}; choose from {sorted(SUITES)} or all")
    cfg = SuiteConfig()
    if args.config:
        _merge(cfg, json.loads(Path(args.config).read_text()))
    reports = run_suites([args.suite], cfg, default_workers())
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_reports(reports, out / "report.json", out / "report.csv")
    (out / "config.json").write_text(json.dumps(
        {"schema_version": SCHEMA_VERSION, "suite": args.suite, "config": asdict(cfg)}, indent=2))
    failed = [r for r in reports if not r.passed]
    for r in reports:
        print(f"{'PASS' if r.passed else 'FAIL'}  {r.claim_id}  measured={r.measured:.6g}"
              f"  predicted={r.predicted:.6g}  tol={r.tolerance:.3g}")
    print(f"{len(reports) - len(failed)}/{len(reports)} checks passed")
    return EXIT_FAILED if failed else EXIT_OK


# ---------------------------------------------------------------------------
# kernel
# ---------------------------------------------------------------------------

def cmd_kernel(args) -> int:
    if args.count < 1 or not 0 < args.r_min < args.r_max:
        raise UsageError("need 0 < --r-min < --r-max and a positive --count")
    radii = np.linspace(args.r_min, args.r_max, args.count)
    opts = HankelOptions(r_max=args.cutoff) if args.cutoff else None
    if args.kernel == "K":
        prof = kernel_K(args.t, radii, args.eta, args.alpha, args.beta, args.sigma,
                        complex(args.lam), args.n, opts)
    else:
        p = ModelParams(args.alpha, args.beta, args.sigma, args.mu, args.n)
        fn = {"N": kernel_N, "M": kernel_M, "J": kernel_J}[args.kernel]
        prof = fn(args.t, radii, p, opts)
    path = prof.to_csv(args.out)
    print(path)
    return EXIT_OK


# ---------------------------------------------------------------------------
# Parser and entry point
# ---------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("--json-errors", action="store_true", default=argparse.SUPPRESS,
                        help="also print failures as JSON on stderr")
    ap = _Parser(prog="sigmaevo", description="Structurally damped fractional evolution toolkit",
                 parents=[common])
    ap.add_argument("--version", action="version", version=__version__)
    sub = ap.add_subparsers(dest="command", parser_class=_Parser)

    ml = sub.add_parser("ml-eval", parents=[common], help="evaluate the Mittag-Leffler function")
    ml.add_argument("--alpha", type=float, required=True)
    ml.add_argument("--beta", type=float, default=1.0)
    ml.add_argument("--gamma", type=float, default=1.0)
    ml.add_argument("--z-re", type=float)
    ml.add_argument("--z-im", type=float, default=0.0)
    ml.add_argument("--z-grid", type=float, nargs=3, metavar=("START", "STOP", "COUNT"))
    ml.add_argument("--out", help="CSV path (default stdout)")
    ml.set_defaults(func=cmd_ml_eval)

    sv = sub.add_parser("solve", parents=[common], help="run a Cauchy-problem solver from a JSON config")
    sv.add_argument("problem", choices=("cp1", "cp2"))
    sv.add_argument("--config", required=True)
    sv.add_argument("--out", help="output directory (default: config 'output' or ./run)")
    sv.set_defaults(func=cmd_solve)

    vf = sub.add_parser("verify", parents=[common], help="run verification suites")
    vf.add_argument("suite", help=f"one of {', '.join(SUITES)}, all")
    vf.add_argument("--out", default="verify-out")
    vf.add_argument("--config", help="JSON overrides of the suite configuration")
    vf.set_defaults(func=cmd_verify)

    kn = sub.add_parser("kernel", parents=[common], help="tabulate a radial kernel")
    kn.add_argument("--kernel", choices=("K", "M", "N", "J"), required=True)
    kn.add_argument("--t", type=float, default=1.0)
    kn.add_argument("--alpha", type=float, required=True)
    kn.add_argument("--beta", type=float, default=1.0)
    kn.add_argument("--sigma", type=float, required=True)
    kn.add_argument("--mu", type=float, default=3.0)
    kn.add_argument("--n", type=int, default=1)
    kn.add_argument("--eta", type=float, default=0.0, help="multiplier power (K only)")
    kn.add_argument("--lam", type=complex, default=1.0, help="damping root (K only)")
    kn.add_argument("--r-min", type=float, default=0.01)
    kn.add_argument("--r-max", type=float, default=10.0)
    kn.add_argument("--count", type=int, default=200)
    kn.add_argument("--cutoff", type=float, help="frequency truncation of the transform")
    kn.add_argument("--out", default="kernel.csv")
    kn.set_defaults(func=cmd_kernel)
    return ap


def _classify(exc) -> int:
    if isinstance(exc, UsageError):
        return EXIT_USAGE
    if isinstance(exc, _NUMERIC):
        return EXIT_NUMERIC
    if isinstance(exc, (SigmaEvoError,) + _USAGE):
        return EXIT_USAGE
    raise exc


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    json_errors = "--json-errors" in argv
    try:
        args = build_parser().parse_args(argv)
        if args.command is None:
            raise UsageError("a command is required: ml-eval, solve, verify or kernel")
        return args.func(args)
    except Exception as exc:                                   # noqa: BLE001
        code = _classify(exc)
        msg = str(exc)
        print(f"sigmaevo: error: {msg}", file=sys.stderr)
        if json_errors:
            print(json.dumps({"error": type(exc).__name__, "message": msg, "exit_code": code}),
                  file=sys.stderr)
        return code


if __name__ == "__main__":
    sys.exit(main())
