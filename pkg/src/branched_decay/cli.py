"""Command-line runner for the enumeration, lifting and verification suites.

Exit codes: 0 all checks pass, 2 violations found, 3 numeric
non-convergence, 4 configuration error.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from fractions import Fraction
from functools import partial
from itertools import combinations
from pathlib import Path
from typing import Callable, Optional, Sequence

from . import bounds, experiments, suites
from .extension import TruncatedPath, extend
from .hopf import coproduct_forest
from .lift import (IdentityPath, NonConvergenceError, PathData, lift_polynomial, lift_young,
                   weierstrass_path)
from .report import CheckReport, reports_to_json
from .trees import NotationError, enumerate_trees, parse_forest

EXIT_OK, EXIT_VIOLATION, EXIT_NONCONVERGENCE, EXIT_CONFIG = 0, 2, 3, 4
COMMANDS = ("enumerate", "coproduct", "lift", "extend", "verify-decay", "counterexample",
            "lemmas", "all")
PATH_SOURCES = ("identity", "poly", "weierstrass", "csv")
WORKERS_ENV = "BRANCHED_DECAY_WORKERS"


class ConfigError(ValueError):
    pass


@dataclass
class RunConfig:
    command: str
    gamma: float = 1.0
    beta: float = 2.0
    N: int = 1
    M: int = 4
    tol: float = 1e-8
    path: str = "identity"
    poly: Optional[str] = None
    csv_file: Optional[str] = None
    levels: int = 12
    grid: str = "dyadic:2"
    output: Optional[str] = None
    seed: int = 0
    extra: dict = field(default_factory=dict)

    def validate(self) -> None:
        if self.command not in COMMANDS:
            raise ConfigError(f"unknown command {self.command!r}")
        if not 0 < self.gamma <= 1:
            raise ConfigError("gamma must lie in (0, 1]")
        if self.M < self.N:
            raise ConfigError("M must be at least N")
        if self.N < 1:
            raise ConfigError("N must be positive")
        if self.tol <= 0:
            raise ConfigError("tol must be positive")
        if self.beta <= 0:
            raise ConfigError("beta must be positive")
        if self.path not in PATH_SOURCES:
            raise ConfigError(f"path source must be one of {PATH_SOURCES}")
        if self.path == "poly" and not self.poly:
            raise ConfigError("--path poly needs --poly")
        if self.path == "csv" and not self.csv_file:
            raise ConfigError("--path csv needs --csv")
        parse_grid(self.grid)


# ----------------------------------------------------------------- parsing


def parse_grid(spec: str) -> list:
    """``dyadic:k`` gives i/2^k for i = 0..2^k; otherwise a comma list of times."""
    try:
        if spec.startswith("dyadic:"):
            k = int(spec.split(":", 1)[1])
            if not 0 <= k <= 12:
                raise ConfigError("dyadic grid level must lie in 0..12")
            return [Fraction(i, 2 ** k) for i in range(2 ** k + 1)]
        times = [Fraction(x.strip()) for x in spec.split(",") if x.strip()]
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad grid spec {spec!r}: {exc}") from None
    if len(times) < 2 or any(b <= a for a, b in zip(times, times[1:])):
        raise ConfigError("grid times must be increasing with at least two points")
    if times[0] < 0 or times[-1] > 1:
        raise ConfigError("grid times must lie in [0, 1]")
    return times


def parse_poly(spec: str) -> tuple:
    """``"0,1;0,0,1"`` is the path (t, t²): components split by ';'."""
    try:
        comps = tuple(tuple(Fraction(c.strip()) for c in comp.split(","))
                      for comp in spec.split(";"))
    except (ValueError, ZeroDivisionError) as exc:
        raise ConfigError(f"bad polynomial {spec!r}: {exc}") from None
    if not comps or any(not c for c in comps):
        raise ConfigError("empty polynomial component")
    return comps


def load_path(cfg: RunConfig) -> PathData:
    if cfg.path == "poly":
        return PathData.polynomial(parse_poly(cfg.poly), holder_gamma=1.0, name=cfg.poly)
    if cfg.path == "weierstrass":
        if not 0.5 < cfg.gamma < 1:
            raise ConfigError("the Weierstrass preset needs 1/2 < gamma < 1")
        return weierstrass_path(cfg.gamma, levels=cfg.levels)
    if cfg.path == "csv":
        try:
            return PathData.from_csv(cfg.csv_file, cfg.gamma)
        except OSError as exc:
            raise ConfigError(f"cannot read {cfg.csv_file}: {exc}") from None
    raise ConfigError(f"no path data for source {cfg.path!r}")


def rough_path(cfg: RunConfig, M: int):
    """Exact lift for identity/polynomial sources, Young lift for samples."""
    if cfg.path == "identity":
        return IdentityPath()
    path = load_path(cfg)
    if path.is_polynomial and not cfg.extra.get("numeric"):
        return lift_polynomial(path, M)
    if path.is_polynomial:
        path = path.sampled(2 ** cfg.levels)
    return lift_young(path, M, tol=cfg.tol)


def grid_times(cfg: RunConfig, rp) -> list:
    times = parse_grid(cfg.grid)
    if hasattr(rp, "index"):
        return [float(t) for t in times]
    return times


# ---------------------------------------------------------------- commands


def _emit(cfg: RunConfig, text: str, filename: Optional[str] = None) -> None:
    if cfg.output is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    target = Path(cfg.output)
    if filename is not None:
        target.mkdir(parents=True, exist_ok=True)
        target = target / filename
    else:
        target.parent.mkdir(parents=True, exist_ok=True)
    target.write_text(text if text.endswith("\n") else text + "\n")


def _header(cfg: RunConfig) -> dict:
    conf = asdict(cfg)
    conf.pop("output")
    return {"config": conf, "timestamp": time.strftime("%Y-%m-%dT%H:%M:%S%z")}


def _finish_reports(cfg: RunConfig, reports: list[CheckReport]) -> int:
    lines = []
    for r in reports:
        lines.append(r.summary())
        lines += [f"    {n}" for n in r.notes]
    summary = "\n".join(lines)
    print(summary)
    if cfg.output is not None:
        out = Path(cfg.output)
        out.mkdir(parents=True, exist_ok=True)
        for r in reports:
            (out / f"{r.lemma}.json").write_text(reports_to_json([r], **_header(cfg)) + "\n")
        (out / "summary.txt").write_text(summary + "\n")
    return EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATION


def cmd_enumerate(cfg: RunConfig) -> int:
    n = cfg.extra["n"]
    alphabet = cfg.extra.get("alphabet")
    trees = enumerate_trees(n, alphabet)
    if cfg.output is None:
        print("\n".join(t.notation() for t in trees))
    else:
        _emit(cfg, json.dumps({"schema": 1, "n": n, "alphabet": alphabet, "count": len(trees),
                               "trees": [t.notation() for t in trees]}, indent=2))
    return EXIT_OK


def cmd_coproduct(cfg: RunConfig) -> int:
    try:
        f = parse_forest(cfg.extra["forest"])
    except NotationError as exc:
        raise ConfigError(str(exc)) from None
    terms = coproduct_forest(f)
    if cfg.output is None:
        for term in terms:
            print(f"{term.multiplicity} * {term.pruned.notation()} (x) {term.trunk.notation()}")
    else:
        _emit(cfg, json.dumps({"schema": 1, "forest": f.notation(), "terms": [
            {"pruned": t.pruned.notation(), "trunk": t.trunk.notation(),
             "multiplicity": t.multiplicity} for t in terms]}, indent=2))
    return EXIT_OK


def _value_str(v) -> str:
    return str(v) if isinstance(v, Fraction) else repr(float(v))


def cmd_lift(cfg: RunConfig) -> int:
    rp = rough_path(cfg, cfg.M)
    times = grid_times(cfg, rp)
    rows = []
    for s, t in combinations(times, 2):
        X = rp.character(s, t)
        for tr in sorted(X.tree_values):
            rows.append({"forest": tr.notation(), "s": str(s), "t": str(t),
                         "value": _value_str(X.tree_values[tr])})
    payload = {"schema": 1, "M": cfg.M, "path": cfg.path, "rows": rows}
    if hasattr(rp, "deltas"):
        payload["deltas"] = [[lvl, d] for lvl, d in rp.deltas]
        payload["converged_level"] = rp.converged_level
    _emit(cfg, json.dumps(payload, indent=2, sort_keys=True))
    return EXIT_OK


def cmd_extend(cfg: RunConfig) -> int:
    s, t = cfg.extra["s"], cfg.extra["t"]
    if cfg.path == "identity":
        X = TruncatedPath.identity(cfg.N)
    else:
        X = TruncatedPath(rough_path(cfg, cfg.N), cfg.N, cfg.gamma)
    if not cfg.extra.get("exact"):
        s, t = float(s), float(t)
    res = extend(X, cfg.M, s, t, tol=cfg.tol, max_level=cfg.extra.get("max_level", 14))
    _emit(cfg, res.to_json())
    return EXIT_OK


def cmd_verify_decay(cfg: RunConfig) -> int:
    rp = rough_path(cfg, cfg.M)
    times = grid_times(cfg, rp)
    report = bounds.verify_decay(rp, cfg.gamma, cfg.M, times, label=f"decay-{cfg.path}")
    return _finish_reports(cfg, [report])


def cmd_counterexample(cfg: RunConfig) -> int:
    x = cfg.extra
    if not 0 <= cfg.gamma < 1:
        raise ConfigError("the counterexample needs gamma < 1")
    reports, table = experiments.counterexample_report(x["n_max"], cfg.gamma, cfg.beta,
                                                       x["a"], x["b"])
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["n", "exact_sum", "lower_bound"])
    for n, v, lo in table:
        w.writerow([n, repr(v), repr(lo)])
    if cfg.output is None:
        sys.stdout.write(buf.getvalue())
        sys.stdout.flush()
        print("\n".join(r.summary() for r in reports), file=sys.stderr)
        return EXIT_OK if all(r.passed for r in reports) else EXIT_VIOLATION
    _emit(cfg, buf.getvalue(), "counterexample.csv")
    return _finish_reports(cfg, reports)


def lemma_jobs(cfg: RunConfig) -> list[Callable[[], list[CheckReport]]]:
    max_tree = cfg.extra.get("max_tree", 7)
    gammas = tuple(sorted({0.3, 0.5, 0.9, cfg.gamma} if cfg.gamma < 1 else {0.3, 0.5, 0.9}))
    return [
        partial(suites.algebra_suites, max_tree, cfg.seed),
        partial(_single, bounds.concavity_suite, min(max_tree + 1, 8), gammas),
        partial(_single, bounds.counting_bound_suite, max_tree),
        partial(bounds.appendix_suite),
        partial(_single, bounds.kernel_quadrature_report),
        partial(experiments.main_lemma_reports),
    ]


def analytic_jobs(cfg: RunConfig) -> list[Callable[[], list[CheckReport]]]:
    return [
        partial(_single, experiments.identity_extension_report),
        partial(experiments.lift_oracle_reports),
        partial(experiments.decay_reports),
        partial(_single, experiments.geometric_comparison_report),
        partial(_first, experiments.counterexample_report),
    ]


def _single(fn, *args) -> list[CheckReport]:
    return [fn(*args)]


def _first(fn, *args) -> list[CheckReport]:
    return fn(*args)[0]


def _call(job) -> list[CheckReport]:
    return job()


def run_jobs(jobs: Sequence[Callable[[], list[CheckReport]]]) -> list[CheckReport]:
    """Run suites, in parallel when the worker variable asks for it; order is kept."""
    workers = int(os.environ.get(WORKERS_ENV, "1") or 1)
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_call, jobs))
    else:
        results = [job() for job in jobs]
    return [r for batch in results for r in batch]


def cmd_lemmas(cfg: RunConfig) -> int:
    return _finish_reports(cfg, run_jobs(lemma_jobs(cfg)))


def cmd_all(cfg: RunConfig) -> int:
    return _finish_reports(cfg, run_jobs(lemma_jobs(cfg) + analytic_jobs(cfg)))


HANDLERS = {
    "enumerate": cmd_enumerate,
    "coproduct": cmd_coproduct,
    "lift": cmd_lift,
    "extend": cmd_extend,
    "verify-decay": cmd_verify_decay,
    "counterexample": cmd_counterexample,
    "lemmas": cmd_lemmas,
    "all": cmd_all,
}


def run(cfg: RunConfig) -> int:
    """Validate and execute a configuration, mapping failures to exit codes."""
    try:
        cfg.validate()
        return HANDLERS[cfg.command](cfg)
    except NonConvergenceError as exc:
        print(f"non-convergence: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGENCE
    except (ConfigError, ValueError, OSError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


# ------------------------------------------------------------------ parser


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_CONFIG, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="branched-decay", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, path=False):
        p.add_argument("--output", "-o", help="output file or directory")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--gamma", type=float, default=1.0)
        if path:
            p.add_argument("--path", choices=PATH_SOURCES, default="identity")
            p.add_argument("--poly", help="coefficients, e.g. '0,1;0,0,1' for (t, t^2)")
            p.add_argument("--csv", dest="csv_file", help="CSV with header t,x1,...")
            p.add_argument("--levels", type=int, default=12,
                           help="log2 of the sample count for numeric lifts")
            p.add_argument("--numeric", action="store_true",
                           help="Young-lift samples of a polynomial path")
            p.add_argument("--grid", default="dyadic:2",
                           help="'dyadic:k' or comma-separated times")
            p.add_argument("--tol", type=float, default=1e-8)

    p = sub.add_parser("enumerate", help="list rooted trees with n vertices")
    common(p)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--alphabet", type=int)

    p = sub.add_parser("coproduct", help="coproduct of a forest in textual notation")
    common(p)
    p.add_argument("forest")

    p = sub.add_parser("lift", help="lift a path to trees up to M vertices")
    common(p, path=True)
    p.add_argument("--M", type=int, default=4)

    p = sub.add_parser("extend", help="extend a degree-N truncation to degree M")
    common(p, path=True)
    p.add_argument("--N", type=int, default=1)
    p.add_argument("--M", type=int, default=4)
    p.add_argument("--s", default="0")
    p.add_argument("--t", default="1")
    p.add_argument("--max-level", type=int, default=14)
    p.add_argument("--exact", action="store_true", help="rational arithmetic")

    p = sub.add_parser("verify-decay", help="check the factorial decay bound")
    common(p, path=True)
    p.add_argument("--M", type=int, default=6)

    p = sub.add_parser("counterexample", help="divergent cut sum on bushy trees")
    common(p)
    p.add_argument("--beta", type=float, default=2.0)
    p.add_argument("--a", type=float, default=0.5)
    p.add_argument("--b", type=float, default=1.0)
    p.add_argument("--n-max", type=int, default=200)
    p.set_defaults(gamma=0.5)

    for name in ("lemmas", "all"):
        p = sub.add_parser(name, help="run every exact and inequality suite"
                           + (" plus the analytic experiments" if name == "all" else ""))
        common(p)
        p.add_argument("--max-tree", type=int, default=7)
    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    d = vars(args).copy()
    known = {k: d.pop(k) for k in list(d) if k in RunConfig.__dataclass_fields__}
    extra = {k: v for k, v in d.items() if v is not None}
    for key in ("s", "t"):
        if key in extra:
            try:
                extra[key] = Fraction(extra[key])
            except (ValueError, ZeroDivisionError):
                raise ConfigError(f"bad time --{key} {extra[key]!r}") from None
    if "a" in extra and (extra["a"] <= 0 or extra["b"] <= 0):
        raise ConfigError("a and b must be positive")
    if extra.get("n_max", 2) < 2 or extra.get("n", 1) < 1:
        raise ConfigError("sizes must be positive (n-max at least 2)")
    return RunConfig(extra=extra, **known)


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return run(cfg)


if __name__ == "__main__":
    sys.exit(main())
