"""Command-line interface.

Exit codes: 0 success, 1 reproduction mismatch, 2 input or config error,
3 degenerate data (e.g. no positive labels).
"""
from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from .corrstats import fisher_ci, pearson, r_from_rates, spearman
from .dataio import (
    canonical_json,
    make_document,
    parse_labeled_csv,
    parse_paired_csv,
    write_ranking_csv,
    write_report,
    write_sidecar,
)
from .errors import DegenerateDataError, LuckmeterError, ZeroVarianceError
from .qmodel import QModelParams, simulate
from .reproduce import all_passed, format_json, format_table, reproduction_rows
from .sieve import binary_spearman, analyze
from .svg import render_svg

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_INPUT = 2
EXIT_DEGENERATE = 3

SEED_ENV = "LUCKMETER_SEED"
DEFAULT_NOISE_SIGMA = 0.5
DEFAULT_PRIZES = 25

# config key -> (QModelParams field or None for experiment-level keys)
CONFIG_KEYS = {
    "muQ": "mu_q", "mu_q": "mu_q",
    "sigmaQ": "sigma_q", "sigma_q": "sigma_q",
    "muP": "mu_p", "mu_p": "mu_p",
    "sigmaP": "sigma_p", "sigma_p": "sigma_p",
    "papers_per_author": "papers_per_author",
    "population_size": "population_size",
    "productivity_sigma": "productivity_sigma",
    "nPrizes": None, "n_prizes": None,
    "noise_sigma": None,
}


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _now() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def _read(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _write(out_dir: Path, name: str, data: bytes) -> Path:
    out_dir.mkdir(parents=True, exist_ok=True)
    path = out_dir / name
    path.write_bytes(data)
    return path


def _print_report_summary(rep) -> None:
    print(f"n_pos={rep.n_pos} n_neg={rep.n_neg} auc={rep.auc:.4f}")
    print(f"best:    R={rep.best.R} r={rep.best.r:.4f}")
    print(f"natural: R={rep.natural.R} r={rep.natural.r:.4f}")
    if rep.full_recall is not None:
        print(f"full recall: R={rep.full_recall.R} r={rep.full_recall.r:.4f}")
    print(f"ceiling: {rep.ceiling.r:.4f}")


def cmd_analyze(args: argparse.Namespace) -> int:
    raw = _read(args.input)
    rk = parse_labeled_csv(raw)
    rep = analyze(rk)
    doc = make_document(rep, write_ranking_csv(rk), command="analyze",
                        extra={"binary_spearman": binary_spearman(rk).r, "tie_count": rk.tie_count},
                        timestamp=_now())
    out = Path(args.out_dir)
    _write(out, f"report.{args.format}", write_report(doc, args.format))
    _write(out, "report.meta.json", write_sidecar(doc))
    if args.svg:
        for curve in rep.curves:
            _write(out, f"{curve.kind}.svg", render_svg(curve))
    _print_report_summary(rep)
    return EXIT_OK


def cmd_eq1(args: argparse.Namespace) -> int:
    est = r_from_rates(args.tpr, args.fpr, args.npos, args.nneg)
    print(f"{est.r + 0.0:.4f}")
    return EXIT_OK


def cmd_ci(args: argparse.Namespace) -> int:
    lo, hi = fisher_ci(args.r, args.n, args.level)
    print(f"r={args.r:.4f} n={args.n} level={args.level:g} lower={lo:.4f} upper={hi:.4f}")
    return EXIT_OK


def _cmd_paired(args: argparse.Namespace, fn) -> int:
    data = parse_paired_csv(_read(args.input))
    est = fn(data.x, data.y)
    line = f"{est.r + 0.0:.4f}"
    if args.level is not None:
        lo, hi = fisher_ci(est.r, est.n, args.level)
        line += f" [{lo:.4f}, {hi:.4f}] at {args.level:g}"
    print(line)
    return EXIT_OK


def load_config(path: str | None) -> tuple[dict, int, float]:
    fields: dict = {}
    n_prizes, noise = DEFAULT_PRIZES, DEFAULT_NOISE_SIGMA
    if path is None:
        return fields, n_prizes, noise
    try:
        cfg = json.loads(_read(path).decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CliError(f"bad config {path}: {exc}") from None
    if not isinstance(cfg, dict):
        raise CliError("config must be a JSON object")
    for key, value in cfg.items():
        if key not in CONFIG_KEYS:
            raise CliError(f"unknown config key {key!r}")
        if isinstance(value, bool) or not isinstance(value, (int, float)):
            raise CliError(f"config key {key!r} must be a number")
        target = CONFIG_KEYS[key]
        if target is not None:
            fields[target] = value
        elif key in ("nPrizes", "n_prizes"):
            if value != int(value):
                raise CliError("nPrizes must be an integer")
            n_prizes = int(value)
        else:
            noise = float(value)
    for k in ("papers_per_author", "population_size"):
        if k in fields:
            if fields[k] != int(fields[k]):
                raise CliError(f"{k} must be an integer")
            fields[k] = int(fields[k])
    return fields, n_prizes, noise


def resolve_seed(seed: int | None) -> int:
    if seed is not None:
        return seed
    env = os.environ.get(SEED_ENV)
    if env:
        try:
            return int(env)
        except ValueError:
            raise CliError(f"{SEED_ENV} must be an integer, got {env!r}") from None
    return 0


def cmd_simulate(args: argparse.Namespace) -> int:
    seed = resolve_seed(args.seed)
    fields, n_prizes, noise = load_config(args.config)
    params = QModelParams(seed=seed, **fields)
    exp = simulate(params, n_prizes, noise)
    settings = {
        "muQ": params.mu_q, "sigmaQ": params.sigma_q, "muP": params.mu_p, "sigmaP": params.sigma_p,
        "papers_per_author": params.papers_per_author, "population_size": params.population_size,
        "productivity_sigma": params.productivity_sigma, "nPrizes": n_prizes, "noise_sigma": noise,
        "seed": seed,
    }
    doc = make_document(exp.report, canonical_json(settings), seed=seed, command="simulate",
                        provenance="simulated",
                        extra={"params": settings,
                               "binary_spearman": binary_spearman(exp.ranking).r},
                        timestamp=_now())
    out = Path(args.out_dir)
    _write(out, f"report.{args.format}", write_report(doc, args.format))
    _write(out, "ranking.csv", write_ranking_csv(exp.ranking))
    _write(out, "report.meta.json", write_sidecar(doc))
    _print_report_summary(exp.report)
    return EXIT_OK


def cmd_reproduce(args: argparse.Namespace) -> int:
    rows = reproduction_rows()
    if args.format == "json":
        sys.stdout.write(format_json(rows).decode("utf-8"))
    else:
        sys.stdout.write(format_table(rows))
    return EXIT_OK if all_passed(rows) else EXIT_MISMATCH


def _u64(text: str) -> int:
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="luckmeter", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    a = sub.add_parser("analyze", help="sieve analysis of an id,score,label CSV")
    a.add_argument("--input", required=True)
    a.add_argument("--out-dir", default=".")
    a.add_argument("--format", choices=("json", "csv"), default="json")
    a.add_argument("--svg", action="store_true", help="also write roc/precision/correlation SVGs")
    a.set_defaults(func=cmd_analyze)

    e = sub.add_parser("eq1", help="sieve/label correlation from TPR, FPR and class sizes")
    e.add_argument("--tpr", type=float, required=True)
    e.add_argument("--fpr", type=float, required=True)
    e.add_argument("--npos", type=int, required=True)
    e.add_argument("--nneg", type=int, required=True)
    e.set_defaults(func=cmd_eq1)

    c = sub.add_parser("ci", help="Fisher r-to-z confidence interval")
    c.add_argument("--r", type=float, required=True)
    c.add_argument("--n", type=int, required=True)
    c.add_argument("--level", type=float, default=0.95)
    c.set_defaults(func=cmd_ci)

    for name, fn in (("spearman", spearman), ("pearson", pearson)):
        s = sub.add_parser(name, help=f"{name} correlation of an id,x,y CSV")
        s.add_argument("--input", required=True)
        s.add_argument("--level", type=float, default=None, help="add a Fisher interval")
        s.set_defaults(func=lambda args, fn=fn: _cmd_paired(args, fn))

    m = sub.add_parser("simulate", help="Q-model Monte Carlo sieve experiment")
    m.add_argument("--seed", type=_u64, default=None, help=f"default: ${SEED_ENV} or 0")
    m.add_argument("--config", default=None, help="JSON object with model parameters")
    m.add_argument("--out-dir", default=".")
    m.add_argument("--format", choices=("json", "csv"), default="json")
    m.set_defaults(func=cmd_simulate)

    r = sub.add_parser("reproduce", help="recompute the published figures")
    r.add_argument("--format", choices=("table", "json"), default="table")
    r.set_defaults(func=cmd_reproduce)
    return p


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code
    except (DegenerateDataError, ZeroVarianceError) as exc:
        print(f"error: degenerate data: {exc}", file=sys.stderr)
        return EXIT_DEGENERATE
    except LuckmeterError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
