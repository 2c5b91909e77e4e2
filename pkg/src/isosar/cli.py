"""Command-line front end: sweeps, cost tables, oracle runs, machine output.

Every invocation is a pure function of its flags plus the seed: repeated
runs are byte-identical.  Output lands on stdout or, with --out, in a file
written atomically (temp file then rename).  Exit codes: 0 success,
1 invalid input, 2 internal consistency failure, 3 oracle outside three
standard errors.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import tempfile
from dataclasses import dataclass, field

import numpy as np

from . import estimation, figures, oracle, pbt, protocol

DEFAULT_SEED = 0xC0FFEE  # documented reproducibility default; --seed overrides

EXIT_OK = 0
EXIT_INVALID = 1
EXIT_INCONSISTENT = 2
EXIT_ORACLE = 3


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse defaults to exit code 2
        self.print_usage(sys.stderr)
        self.exit(EXIT_INVALID, f"{self.prog}: error: {message}\n")


class ConsistencyError(RuntimeError):
    """An internal cross-check failed; the run output cannot be trusted."""


@dataclass
class RunConfig:
    subcommand: str
    d: int = 2
    D: int = 2
    n: int = 1
    n_values: list[int] = field(default_factory=list)
    N: int | None = None
    t: float | None = None
    strategy: str = protocol.STRATEGY_ESTIMATION
    eps: list[float] = field(default_factory=list)
    samples: int = 10**5
    seed: int = DEFAULT_SEED
    theta_points: int = 20
    fmt: str = "csv"
    out: str | None = None
    plot: bool = False
    plot_out: str | None = None
    bounds: bool = False
    dump_matrix: str | None = None
    tol: float = 1e-12
    max_iter: int = 10**6


def _fmt(x) -> str:
    if isinstance(x, float):
        return format(x, ".12g")
    return "" if x is None else str(x)


def _render_csv(columns: tuple[str, ...], rows: list[dict], footer: list[str]) -> str:
    lines = [",".join(columns)]
    for r in rows:
        lines.append(",".join(_fmt(r.get(c)) for c in columns))
    lines.extend(footer)
    return "\n".join(lines) + "\n"


def _render_json(payload: dict) -> str:
    return json.dumps(payload, sort_keys=True, indent=2) + "\n"


def _write(text: str, out: str | None) -> None:
    if out is None:
        sys.stdout.write(text)
        return
    directory = os.path.dirname(os.path.abspath(out))
    fd, tmp = tempfile.mkstemp(dir=directory, prefix=".isosar-")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        # mkstemp creates 0600; give the report file ordinary permissions
        umask = os.umask(0)
        os.umask(umask)
        os.chmod(tmp, 0o666 & ~umask)
        os.replace(tmp, out)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _plot_path(cfg: RunConfig) -> str:
    if cfg.plot_out:
        return cfg.plot_out
    if cfg.out is None:
        raise ValueError("--plot needs --out (the figure lands alongside the data file)")
    stem, _ = os.path.splitext(cfg.out)
    return stem + ".png"


def _n_grid(n_min: int, n_max: int, count: int) -> list[int]:
    if n_min < 1 or n_max < n_min or count < 1:
        raise ValueError("need 1 <= n-min <= n-max and n-count >= 1")
    if count == 1:
        return [n_min]
    raw = np.exp(np.linspace(math.log(n_min), math.log(n_max), count))
    return sorted({int(round(x)) for x in raw})


def _ols(xs: list[float], ys: list[float]) -> tuple[float, float]:
    if len(xs) < 2:  # a fit needs two points; report the bare value
        return math.nan, ys[0] if ys else math.nan
    slope, intercept = np.polyfit(np.asarray(xs), np.asarray(ys), 1)
    return float(slope), float(intercept)


def cmd_fidelity(cfg: RunConfig) -> int:
    report = estimation.optimal_fidelity(cfg.n, cfg.d, cfg.D, tol=cfg.tol, max_iter=cfg.max_iter)
    if cfg.dump_matrix:
        M = estimation.fidelity_matrix(cfg.n, cfg.d, cfg.D)
        _write(M.dumps(cfg.D) + "\n", cfg.dump_matrix)
    payload = {
        "n": report.n,
        "d": report.d,
        "D": report.D,
        "fidelity": report.fidelity,
        "rowsum_bound": report.rowsum_bound,
        "jensen_bound": report.jensen_bound,
        "iterations": report.iterations,
        "residual": report.residual,
        "eigvector": [float(x) for x in report.eigvector],
    }
    _write(_render_json(payload), cfg.out)
    slack = 1e-9
    ok = (
        report.fidelity <= report.rowsum_bound + slack
        and report.rowsum_bound <= report.jensen_bound + slack
        and report.residual <= cfg.tol
        and float(np.min(report.eigvector)) >= -1e-12
    )
    return EXIT_OK if ok else EXIT_INCONSISTENT


SCAN_COLUMNS = ("n", "fidelity", "infidelity", "n_infidelity", "n2_infidelity", "richardson")


def cmd_scan(cfg: RunConfig) -> int:
    if cfg.bounds:
        return _scan_bounds(cfg)
    rows = []
    a_of = {}
    for n in cfg.n_values:
        rep = estimation.optimal_fidelity(n, cfg.d, cfg.D, tol=cfg.tol, max_iter=cfg.max_iter)
        a_of[n] = n * (1.0 - rep.fidelity)
        rows.append(
            {
                "n": n,
                "fidelity": rep.fidelity,
                "infidelity": 1.0 - rep.fidelity,
                "n_infidelity": a_of[n],
                "n2_infidelity": n * n * (1.0 - rep.fidelity),
                "richardson": None,
            }
        )
    for r in rows:
        half = r["n"] // 2
        if r["n"] % 2 == 0 and half in a_of:
            r["richardson"] = 2.0 * a_of[r["n"]] - a_of[half]
    if cfg.fmt == "json":
        text = _render_json({"d": cfg.d, "D": cfg.D, "rows": rows})
    else:
        text = _render_csv(SCAN_COLUMNS, rows, [])
    _write(text, cfg.out)
    if cfg.plot:
        figures.scan_figure(rows, cfg.d, cfg.D, _plot_path(cfg))
    return EXIT_OK


def _scan_bounds(cfg: RunConfig) -> int:
    t = 0.5 if cfg.t is None else cfg.t
    rows = []
    for n in cfg.n_values:
        N = cfg.N if cfg.N is not None else protocol.schedule_window(n, cfg.d, t)
        rows.append(protocol.bounds_row(n, cfg.d, cfg.D, N))
    if cfg.fmt == "json":
        text = _render_json({"rows": rows})
    else:
        text = _render_csv(protocol.BOUNDS_COLUMNS, rows, [])
    _write(text, cfg.out)
    if cfg.plot:
        figures.bounds_figure(rows, _plot_path(cfg))
    slack = 1e-9
    for r in rows:
        if not (r["lower_bound"] <= r["achieved"] + slack and r["achieved"] <= r["optimal"] + slack):
            return EXIT_INCONSISTENT
    return EXIT_OK


COST_COLUMNS = ("eps", "n", "N", "cost_bits")

_COST_TARGETS = {
    protocol.STRATEGY_ESTIMATION: lambda d, D, t: protocol.cost_exponent(t, d, D),
    protocol.STRATEGY_PBT: lambda d, D, t: (D * d - 1) / 2,
    protocol.STRATEGY_CPTP: lambda d, D, t: (D * d * d - 1) / 2,
}

_DEFAULT_T = {
    protocol.STRATEGY_ESTIMATION: 0.5,
    protocol.STRATEGY_PBT: 1.0,
    protocol.STRATEGY_CPTP: 1.0,
}


def cost_rows(strategy: str, d: int, D: int, n_values: list[int], t: float) -> list[dict]:
    rows = []
    for n in n_values:
        N = protocol.schedule_window(n, d, t)
        if strategy == protocol.STRATEGY_ESTIMATION:
            rep = protocol.estimation_program_cost(n, d, D, N)
        elif strategy == protocol.STRATEGY_PBT:
            rep = pbt.pbt_program_cost(n, d, D, N)
        elif strategy == protocol.STRATEGY_CPTP:
            rep = pbt.cptp_cost_bound(d, D, n, N)
        else:
            raise ValueError(f"unknown strategy {strategy!r}")
        rows.append({"eps": rep.epsilon_proxy, "n": n, "N": N, "cost_bits": rep.cost_bits})
    return rows


def cmd_cost(cfg: RunConfig) -> int:
    t = cfg.t if cfg.t is not None else _DEFAULT_T[cfg.strategy]
    rows = cost_rows(cfg.strategy, cfg.d, cfg.D, cfg.n_values, t)
    slope, intercept = _ols([math.log2(1.0 / r["eps"]) for r in rows], [r["cost_bits"] for r in rows])
    target = _COST_TARGETS[cfg.strategy](cfg.d, cfg.D, t)
    footer = [f"# fit: slope={_fmt(slope)} intercept={_fmt(intercept)} target={_fmt(target)}"]
    if cfg.fmt == "json":
        text = _render_json(
            {
                "strategy": cfg.strategy,
                "d": cfg.d,
                "D": cfg.D,
                "t": t,
                "rows": rows,
                "fit": {"slope": slope, "intercept": intercept, "target": target},
            }
        )
    else:
        text = _render_csv(COST_COLUMNS, rows, footer)
    _write(text, cfg.out)
    if cfg.plot:
        figures.cost_figure(rows, slope, intercept, target, _plot_path(cfg))
    return EXIT_OK


def cmd_oracle(cfg: RunConfig) -> int:
    report = estimation.optimal_fidelity(cfg.n, cfg.d, cfg.D, tol=cfg.tol, max_iter=cfg.max_iter)
    est = oracle.mc_fidelity(report.eigvector, cfg.n, cfg.d, cfg.D, cfg.samples, cfg.seed)
    sigma = abs(est.mean - report.fidelity) / est.std_error if est.std_error > 0 else math.inf
    payload = est.as_dict()
    payload["exact"] = report.fidelity
    payload["sigma_distance"] = sigma
    _write(_render_json(payload), cfg.out)
    return EXIT_OK if sigma <= 3.0 else EXIT_ORACLE


def cmd_hnks(cfg: RunConfig) -> int:
    if cfg.d < 2:
        raise ValueError("hnks needs d >= 2")
    thetas = np.linspace(0.0, math.pi, cfg.theta_points)
    iso_max = 0.0
    uni_res = 0.0
    expected = np.zeros((cfg.d + 1, cfg.d + 1), dtype=complex)
    expected[cfg.d, cfg.d - 1] = 1j
    expected[cfg.d - 1, cfg.d] = -1j
    for th in thetas:
        h_iso = oracle.hnks_hamiltonian(float(th), cfg.d, "isometry").matrix
        iso_max = max(iso_max, float(np.max(np.abs(h_iso))))
        h_uni = oracle.hnks_hamiltonian(float(th), cfg.d, "unitary").matrix
        uni_res = max(uni_res, float(np.max(np.abs(h_uni - expected))))
    payload = {
        "d": cfg.d,
        "theta_points": cfg.theta_points,
        "isometry_max_abs": iso_max,
        "unitary_max_residual": uni_res,
    }
    _write(_render_json(payload), cfg.out)
    ok = iso_max <= 1e-14 and uni_res <= 1e-12
    return EXIT_OK if ok else EXIT_INCONSISTENT


QUERY_COLUMNS = ("eps", "n_classical", "n_quantum", "slope_classical", "slope_quantum")


def cmd_queries(cfg: RunConfig) -> int:
    rows = []
    for e in cfg.eps:
        rows.append(
            {
                "eps": e,
                "n_classical": pbt.query_complexity(cfg.d, cfg.D, e, "classical"),
                "n_quantum": pbt.query_complexity(cfg.d, cfg.D, e, "quantum"),
                "slope_classical": None,
                "slope_quantum": None,
            }
        )
    for prev, cur in zip(rows, rows[1:]):
        dx = math.log(1.0 / cur["eps"]) - math.log(1.0 / prev["eps"])
        cur["slope_classical"] = (math.log(cur["n_classical"]) - math.log(prev["n_classical"])) / dx
        cur["slope_quantum"] = (math.log(cur["n_quantum"]) - math.log(prev["n_quantum"])) / dx
    xs = [math.log(1.0 / r["eps"]) for r in rows]
    fits = {}
    for key in ("n_classical", "n_quantum"):
        slope, intercept = _ols(xs, [math.log(r[key]) for r in rows])
        fits[key] = {"slope": slope, "intercept": intercept}
    footer = [
        f"# fit_classical: slope={_fmt(fits['n_classical']['slope'])}",
        f"# fit_quantum: slope={_fmt(fits['n_quantum']['slope'])}",
    ]
    if cfg.fmt == "json":
        text = _render_json({"d": cfg.d, "D": cfg.D, "rows": rows, "fit": fits})
    else:
        text = _render_csv(QUERY_COLUMNS, rows, footer)
    _write(text, cfg.out)
    if cfg.plot:
        figures.queries_figure(rows, _plot_path(cfg))
    return EXIT_OK


def _add_common(p: argparse.ArgumentParser, *, seed: bool = False, plot: bool = False) -> None:
    p.add_argument("--format", choices=("csv", "json"), default="csv", dest="fmt")
    p.add_argument("--out", default=None, help="output path (atomic write); default stdout")
    if plot:
        p.add_argument("--plot", action="store_true", help="render a figure alongside --out")
        p.add_argument("--plot-out", default=None, help="explicit figure path (implies --plot)")
    if seed:
        p.add_argument("--seed", type=int, default=DEFAULT_SEED, help=f"RNG seed (default {DEFAULT_SEED:#x})")


def build_parser() -> argparse.ArgumentParser:
    ap = _Parser(prog="isosar", description=__doc__)
    sub = ap.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("fidelity", help="optimal estimation fidelity for one (n, d, D)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=10**6)
    p.add_argument("--dump-matrix", default=None, help="also dump the sparse matrix to this path")
    _add_common(p)

    p = sub.add_parser("scan", help="fidelity scaling over an n grid")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--n-min", type=int, required=True)
    p.add_argument("--n-max", type=int, required=True)
    p.add_argument("--n-count", type=int, default=7)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=10**6)
    p.add_argument("--bounds", action="store_true", help="emit the protocol bound sandwich instead")
    p.add_argument("--N", type=int, default=None, help="fixed window size for --bounds")
    p.add_argument("--t", type=float, default=None, help="window schedule exponent for --bounds")
    _add_common(p, plot=True)

    p = sub.add_parser("cost", help="program cost versus achieved error")
    p.add_argument("--strategy", choices=("est", "pbt", "cptp"), required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--n-min", type=int, default=50)
    p.add_argument("--n-max", type=int, default=400)
    p.add_argument("--n-count", type=int, default=7)
    p.add_argument("--t", type=float, default=None, help="window exponent (default: 0.5 est, 1.0 pbt/cptp)")
    _add_common(p, plot=True)

    p = sub.add_parser("oracle", help="Monte-Carlo cross-check of the fidelity")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--samples", type=int, default=10**5)
    p.add_argument("--tol", type=float, default=1e-12)
    p.add_argument("--max-iter", type=int, default=10**6)
    _add_common(p, seed=True)

    p = sub.add_parser("hnks", help="Hamiltonian-not-in-Kraus-span check for the rotation families")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--theta-points", type=int, default=20)
    _add_common(p)

    p = sub.add_parser("queries", help="classical versus quantum query complexity")
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--eps", type=float, nargs="+", default=[1e-1, 1e-2, 1e-3, 1e-4])
    _add_common(p, plot=True)

    return ap


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(subcommand=args.subcommand)
    for name in (
        "d",
        "D",
        "n",
        "N",
        "t",
        "strategy",
        "eps",
        "samples",
        "seed",
        "theta_points",
        "fmt",
        "out",
        "plot",
        "plot_out",
        "bounds",
        "dump_matrix",
        "tol",
        "max_iter",
    ):
        if hasattr(args, name):
            setattr(cfg, name, getattr(args, name))
    if hasattr(args, "n_min"):
        cfg.n_values = _n_grid(args.n_min, args.n_max, args.n_count)
    if cfg.plot_out:
        cfg.plot = True
    if cfg.subcommand == "queries":
        for e in cfg.eps:
            if not 0.0 < e < 1.0:
                raise ValueError(f"eps values must be in (0, 1), got {e}")
    return cfg


_COMMANDS = {
    "fidelity": cmd_fidelity,
    "scan": cmd_scan,
    "cost": cmd_cost,
    "oracle": cmd_oracle,
    "hnks": cmd_hnks,
    "queries": cmd_queries,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = _config_from_args(args)
        code = _COMMANDS[cfg.subcommand](cfg)
    except (ValueError, OSError) as exc:
        print(f"isosar: error: {exc}", file=sys.stderr)
        return EXIT_INVALID
    except (estimation.PowerIterationError, ConsistencyError) as exc:
        print(f"isosar: consistency failure: {exc}", file=sys.stderr)
        return EXIT_INCONSISTENT
    return code


if __name__ == "__main__":
    sys.exit(main())
