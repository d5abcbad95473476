"""Command-line interface: ``ordergrowth <command> [options]``.

Commands: ``gamma``, ``distance``, ``mu``, ``sandwich``, ``convergence``.
Exit codes: 0 ok, 1 a check found counterexamples, 2 usage or parse error,
3 search budget exceeded, 4 order oracle undecided.
"""
from __future__ import annotations

import argparse
import csv
import dataclasses
import io
import json
import logging
import math
import os
import sys
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path
from typing import List, Optional, Sequence


from . import abelian, core, qm, rootdata, sl2tilde
from .errors import BudgetExceeded, OracleError

OUTPUT_DIR_ENV = "ORDERGROWTH_OUTPUT_DIR"
DEFAULT_SEED = 20240601
COMMANDS = ("gamma", "distance", "mu", "sandwich", "convergence")


class UsageError(Exception):
    pass


@dataclass
class RunConfig:
    model: str = "int"
    g: Optional[str] = None
    h: Optional[str] = None
    n_max: int = 64
    seed: int = DEFAULT_SEED
    tolerance: float = core.DEFAULT_TOLERANCE
    format: str = "csv"
    output: Optional[str] = None
    c1: Optional[float] = None
    c2: float = 0.0
    trials: int = 500
    family: Optional[str] = None
    rank: Optional[int] = None
    p: Optional[int] = None
    q: Optional[int] = None
    x: Optional[str] = None
    element: Optional[str] = None
    iterations: Optional[int] = None

    def __post_init__(self):
        if self.format not in ("csv", "json"):
            raise UsageError(f"format must be csv or json, not {self.format!r}")
        if self.n_max < 1:
            raise UsageError("n must be >= 1")
        if self.tolerance < 0:
            raise UsageError("tolerance must be nonnegative")

    @classmethod
    def from_mapping(cls, data: dict) -> "RunConfig":
        known = {f.name for f in dataclasses.fields(cls)}
        unknown = sorted(set(data) - known)
        if unknown:
            raise UsageError(f"unknown config keys: {', '.join(unknown)}")
        return cls(**data)


# ---------------------------------------------------------------- models

@dataclass
class ModelSpec:
    model: core.GroupModel
    parse: callable
    sampler: Optional[callable] = None
    f: Optional[qm.Quasimorphism] = None


def load_model(spec: str, tolerance: float) -> ModelSpec:
    if spec == "int":
        model = core.integer_model()
        return ModelSpec(model, _parse_int, lambda rng: int(rng.integers(-50, 51)), model.sandwich.f)
    if spec == "sl2":
        model = sl2tilde.dynamical_model(tol=tolerance)
        return ModelSpec(model, sl2tilde.parse_element, sl2tilde.random_element, model.sandwich.f)
    if spec.startswith("cone:"):
        path = spec[len("cone:"):]
        try:
            order = abelian.load_cone(path, tolerance=Fraction(repr(tolerance)))
        except OSError as exc:
            raise UsageError(f"cannot read cone file {path!r}: {exc.strerror}") from None
        model = abelian.cone_model(order)

        def parse(text):
            v = abelian.parse_vector(text)
            if len(v) != order.dim:
                raise UsageError(f"element {text!r} has {len(v)} coordinates, cone has {order.dim}")
            return v
        return ModelSpec(model, parse)
    raise UsageError(f"unknown model {spec!r} (expected int, sl2 or cone:<file>)")


def _parse_int(text):
    try:
        return int(text)
    except ValueError:
        raise UsageError(f"not an integer: {text!r}") from None


def _elements(cfg: RunConfig, spec: ModelSpec):
    if cfg.g is None or cfg.h is None:
        raise UsageError("--g and --h are required")
    return spec.parse(cfg.g), spec.parse(cfg.h)


# ---------------------------------------------------------------- commands

def cmd_gamma(cfg: RunConfig):
    spec = load_model(cfg.model, cfg.tolerance)
    g, h = _elements(cfg, spec)
    est = core.relative_growth(spec.model, g, h, cfg.n_max)
    rows = [(n, gn, gn / n, lo, hi) for n, gn, lo, hi in est.rows]
    return ["n", "gamma_n", "quotient", "lower", "upper"], rows


def cmd_distance(cfg: RunConfig):
    spec = load_model(cfg.model, cfg.tolerance)
    g, h = _elements(cfg, spec)
    est = core.order_distance(spec.model, g, h, cfg.n_max)
    return (["distance", "lower", "upper", "certified", "n_used"],
            [(est.value, est.lower, est.upper, str(est.certified).lower(), est.n_used)])


def cmd_mu(cfg: RunConfig):
    if cfg.element is not None:
        g = sl2tilde.parse_element(cfg.element)
        value, err = sl2tilde.mu(g, cfg.iterations)
        return ["element", "mu", "error"], [(cfg.element, value, err)]
    if cfg.family is None:
        raise UsageError("mu needs --family (with --rank or --p/--q) or --element")
    datum = rootdata.build(cfg.family, n=cfg.rank, p=cfg.p, q=cfg.q)
    x = rootdata.parse_cartan(datum, cfg.x or "J")
    value = rootdata.mu_on_cartan(datum, x)
    weyl = rootdata.weyl_invariance_check(datum)
    invariants = rootdata.check_invariants(datum) + weyl.violations
    return (["family", "x", "mu", "invariants", "fixed_dimension", "j_in_cone"],
            [(datum.label, cfg.x or "J", str(value), "ok" if not invariants else "; ".join(invariants),
              weyl.fixed_dimension, str(rootdata.j_in_minimal_cone(datum)).lower())])


def cmd_sandwich(cfg: RunConfig):
    spec = load_model(cfg.model, cfg.tolerance)
    if spec.f is None or spec.sampler is None:
        raise UsageError(f"model {cfg.model!r} has no registered sandwiching quasimorphism")
    c1 = spec.model.sandwich.c1 if cfg.c1 is None else cfg.c1
    rep = qm.sandwich_check(spec.model, spec.f, c1, cfg.c2, spec.sampler, cfg.trials, seed=cfg.seed)
    row = (rep.checked, len(rep.lower_violations), len(rep.upper_violations),
           len(rep.no_upper_bound_violations), rep.summary())
    cols = ["checked", "lower_violations", "upper_violations", "sign_violations", "result"]
    return cols, [row], (0 if rep.ok else 1)


def cmd_convergence(cfg: RunConfig):
    spec = load_model(cfg.model, cfg.tolerance)
    sandwich = spec.model.sandwich
    if sandwich is None:
        raise UsageError(f"model {cfg.model!r} has no registered sandwiching quasimorphism")
    g, h = _elements(cfg, spec)
    c1 = sandwich.c1 if cfg.c1 is None else cfg.c1
    rows = []
    for n in core.doubling_schedule(cfg.n_max):
        lo, hi = qm.gamma_bounds(sandwich.f, c1, g, h, n)
        gn = core.gamma_n(spec.model, g, h, n, bracket=(math.floor(n * lo), math.ceil(n * hi)))
        rows.append((n, gn / n, lo, hi))
    return ["n", "quotient", "predicted_lower", "predicted_upper"], rows


HANDLERS = dict(gamma=cmd_gamma, distance=cmd_distance, mu=cmd_mu,
                sandwich=cmd_sandwich, convergence=cmd_convergence)


# ---------------------------------------------------------------- emission

def _fmt(v):
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, float):
        return f"{v:.9g}"
    return str(v)


def _json_value(v):
    if isinstance(v, float):
        return float(f"{v:.9g}") if math.isfinite(v) else str(v)
    if isinstance(v, (int, str, bool)):
        return v
    return str(v)


def render(columns: Sequence[str], rows, fmt: str) -> str:
    if fmt == "json":
        records = [{c: _json_value(v) for c, v in zip(columns, row)} for row in rows]
        return json.dumps({"columns": list(columns), "rows": records}, indent=2) + "\n"
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(columns)
    for row in rows:
        w.writerow([_fmt(v) for v in row])
    return buf.getvalue()


def resolve_output(path: Optional[str]) -> Optional[Path]:
    if path is None:
        return None
    p = Path(path)
    base = os.environ.get(OUTPUT_DIR_ENV)
    if base and not p.is_absolute():
        p = Path(base) / p
    return p


# ---------------------------------------------------------------- entry point

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="ordergrowth",
                                     description="Relative growth and quasimorphisms of ordered groups.")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", help="JSON file with RunConfig fields; flags override it")
        p.add_argument("--model", help="int, sl2 or cone:<file>")
        p.add_argument("--g")
        p.add_argument("--h")
        p.add_argument("--n", dest="n_max", type=int)
        p.add_argument("--seed", type=int)
        p.add_argument("--tolerance", type=float)
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--output", help=f"output file; relative paths resolve against ${OUTPUT_DIR_ENV}")
        p.add_argument("--c1", type=float)
        p.add_argument("--c2", type=float)
        p.add_argument("--trials", type=int)
        p.add_argument("--family")
        p.add_argument("--rank", type=int)
        p.add_argument("--p", type=int)
        p.add_argument("--q", type=int)
        p.add_argument("--x")
        p.add_argument("--element")
        p.add_argument("--iterations", type=int)
    return parser


def make_config(args: argparse.Namespace) -> RunConfig:
    data = {}
    if args.config:
        try:
            data = json.loads(Path(args.config).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise UsageError(f"cannot load config {args.config!r}: {exc}") from None
        if not isinstance(data, dict):
            raise UsageError("config file must hold a JSON object")
    for key, value in vars(args).items():
        if key in ("command", "config") or value is None:
            continue
        data[key] = value
    return RunConfig.from_mapping(data)


def main(argv: Optional[List[str]] = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(levelname)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    status = 0
    try:
        cfg = make_config(args)
        result = HANDLERS[args.command](cfg)
        if len(result) == 3:
            columns, rows, status = result
        else:
            columns, rows = result
        text = render(columns, rows, cfg.format)
        out = resolve_output(cfg.output)
        if out is None:
            sys.stdout.write(text)
        else:
            out.parent.mkdir(parents=True, exist_ok=True)
            out.write_text(text)
    except BudgetExceeded as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except OverflowError as exc:
        print(f"error: budget exceeded: {exc}", file=sys.stderr)
        return 3
    except OracleError as exc:
        print(f"error: order oracle undecided: {exc}", file=sys.stderr)
        return 4
    except (UsageError, ValueError, TypeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    return status


if __name__ == "__main__":
    sys.exit(main())
