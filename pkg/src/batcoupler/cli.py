"""Command-line front end.

Subcommands::

    batcoupler analyze --w 7.9 --s 1.7 --h 4.3 --eps-r 3.9
    batcoupler design  --runs 5 --seed 7 --out results/
    batcoupler bench   --function sphere --dim 5 --out results/

``design`` and ``bench`` run ``--runs`` optimizations with seeds ``seed``,
``seed + 1``, ... and write one convergence file per run plus an aggregate
``<kind>_summary.json``. Exit codes: 0 success, 2 invalid input or
unwritable output, 3 at least one run exhausted its iteration budget.
"""

from __future__ import annotations

import argparse
import csv
import dataclasses
import json
import logging
import math
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Sequence

import numpy as np

from batcoupler import bench as benchmarks
from batcoupler.bat import (
    MAX_SEED,
    BatParams,
    RunResult,
    SearchSpace,
    Termination,
    run,
    summarize,
)
from batcoupler.errors import InvalidInputError
from batcoupler.objective import DEFAULT_BOUNDS, CouplerObjective, DesignSpec, geometry_of
from batcoupler.rfmodel import DEFAULT_Z0_MODEL, Z0_MODELS, CouplerGeometry, analyze

log = logging.getLogger("batcoupler")

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BUDGET = 3

# error margins reported per run
MARGINS = (1e-2, 1e-6)

ANALYSIS_COLUMNS = ("W", "S", "H", "whse", "whso", "Z_oe", "Z_oo", "C")


def fmt(value: float) -> str:
    """Shortest round-trip decimal; fixed so output files are byte-stable."""
    return repr(float(value))


def parse_bounds(text: str) -> list[tuple[float, float]]:
    pairs = []
    for chunk in text.split(","):
        try:
            lo, hi = chunk.split(":")
            pairs.append((float(lo), float(hi)))
        except ValueError:
            raise InvalidInputError(f"bad bounds entry {chunk!r}; expected LO:HI") from None
    return pairs


@dataclass
class RunConfig:
    pop_size: int = 20
    fmin: float = 0.0
    fmax: float = 100.0
    alpha: float = 0.9
    gamma: float = 0.9
    r0: float = 0.5
    a0: float = 1.0
    replace_count: int = 2
    max_iter: int = 1000
    tol: float = 1e-6
    target_coupling: float = 0.2
    eps_r: float = 3.9
    z_min: float = 20.0
    z_max: float = 75.0
    penalty_weight: float = 10.0
    z0_model: str = DEFAULT_Z0_MODEL
    bounds: list | None = None
    seed: int = 0
    runs: int = 1
    out: str = "results"
    format: str = "csv"

    def __post_init__(self):
        if isinstance(self.bounds, str):
            self.bounds = parse_bounds(self.bounds)
        if self.runs < 1:
            raise InvalidInputError(f"runs must be >= 1, got {self.runs}")
        if not 0 <= self.seed <= MAX_SEED - (self.runs - 1):
            raise InvalidInputError(f"seed must be a 64-bit unsigned integer, got {self.seed}")
        if self.format not in ("csv", "json"):
            raise InvalidInputError(f"format must be csv or json, got {self.format!r}")

    def bat_params(self) -> BatParams:
        return BatParams(
            pop_size=self.pop_size, f_min=self.fmin, f_max=self.fmax, alpha=self.alpha,
            gamma=self.gamma, r0=self.r0, a0=self.a0, replace_count=self.replace_count,
            max_iter=self.max_iter, tol=self.tol,
        )

    def design_spec(self) -> DesignSpec:
        pairs = self.bounds or DEFAULT_BOUNDS
        if len(pairs) != 3:
            raise InvalidInputError(f"design bounds need 3 LO:HI pairs (W, S, H), got {len(pairs)}")
        lo, hi = zip(*pairs)
        return DesignSpec(
            target_coupling=self.target_coupling, eps_r=self.eps_r, z_min=self.z_min,
            z_max=self.z_max, penalty_weight=self.penalty_weight,
            bounds=SearchSpace(np.array(lo), np.array(hi)), z0_model=self.z0_model,
        )

    def seeds(self) -> list[int]:
        return [self.seed + i for i in range(self.runs)]


CONFIG_FIELDS = {f.name for f in dataclasses.fields(RunConfig)}


def load_config(path: str | None, overrides: dict) -> RunConfig:
    """Merge defaults, then the JSON config file, then explicit flags."""
    values: dict = {}
    if path:
        try:
            raw = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise InvalidInputError(f"cannot read config {path}: {exc}") from None
        if not isinstance(raw, dict):
            raise InvalidInputError(f"config {path} must hold a JSON object")
        for key, value in raw.items():
            name = key.replace("-", "_")
            if name not in CONFIG_FIELDS:
                raise InvalidInputError(f"unknown config field {key!r}")
            values[name] = value
    values.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return RunConfig(**values)
    except TypeError as exc:
        raise InvalidInputError(str(exc)) from None


def analysis_row(geometry: CouplerGeometry, model: str = DEFAULT_Z0_MODEL) -> list[float]:
    a = analyze(geometry, model)
    return [geometry.w, geometry.s, geometry.h_sub, a.whse, a.whso, a.zoe, a.zoo, a.coupling]


def _g6(values) -> str:
    return " ".join(f"{v:>10.6g}" for v in values)


def cmd_analyze(args) -> int:
    geometry = CouplerGeometry(args.w, args.s, args.h, args.eps_r)
    row = analysis_row(geometry, args.model)
    print(" ".join(f"{c:>10}" for c in ANALYSIS_COLUMNS))
    print(_g6(row))
    return EXIT_OK


def _design_record(position, spec: DesignSpec) -> list[float]:
    try:
        a = analyze(geometry_of(position, spec), spec.z0_model)
        return [a.zoe, a.zoo, a.coupling]
    except (ValueError, OverflowError):
        return [math.nan] * 3


def _write_history(path: Path, header: list[str], rows: list[list[float]], out_format: str) -> None:
    if out_format == "csv":
        with path.open("w", newline="") as fh:
            writer = csv.writer(fh, lineterminator="\n")
            writer.writerow(header)
            for row in rows:
                writer.writerow([str(row[0])] + [fmt(v) for v in row[1:]])
    else:
        records = [dict(zip(header, row)) for row in rows]
        path.write_text(json.dumps(records, indent=1) + "\n")


def _run_summary(result: RunResult) -> dict:
    return {
        "seed": result.seed,
        "terminated": result.terminated.value,
        "iterations_used": result.iterations_used,
        "best_position": [float(v) for v in result.best_position],
        "best_fitness": result.best_fitness,
        "iterations_to": {fmt(m): result.iterations_to(m) for m in MARGINS},
    }


def _prepare_out(out: str) -> Path:
    path = Path(out)
    try:
        path.mkdir(parents=True, exist_ok=True)
        probe = path / ".write_probe"
        probe.write_text("")
        probe.unlink()
    except OSError as exc:
        raise InvalidInputError(f"output path {out} is not writable: {exc}") from None
    return path


def _finish(kind: str, out_dir: Path, config: RunConfig, runs: list[dict], results) -> int:
    payload = {
        "kind": kind,
        # the output directory is left out so relocated runs stay byte-identical
        "config": {k: v for k, v in dataclasses.asdict(config).items() if k != "out"},
        "runs": runs,
        "summary": summarize(results),
    }
    (out_dir / f"{kind}_summary.json").write_text(json.dumps(payload, indent=2) + "\n")
    failed = [r.seed for r in results if r.terminated is Termination.MAX_ITERATIONS]
    if failed:
        print(f"budget exhausted for seeds {failed}; best-found results written", file=sys.stderr)
        return EXIT_BUDGET
    return EXIT_OK


def _margin_cols(result: RunResult) -> str:
    cols = []
    for m in MARGINS:
        it = result.iterations_to(m)
        cols.append(f"{'-' if it is None else it:>9}")
    return " ".join(cols)


def cmd_design(config: RunConfig) -> int:
    params = config.bat_params()
    spec = config.design_spec()
    objective = CouplerObjective(spec)
    out_dir = _prepare_out(config.out)

    header = ["iteration", "best_fitness", "w", "s", "h", "zoe", "zoo", "coupling"]
    print(f"{'seed':>6} " + " ".join(f"{c:>10}" for c in ANALYSIS_COLUMNS)
          + f" {'it<=1e-2':>9} {'it<=1e-6':>9} status")
    runs, results = [], []
    for seed in config.seeds():
        result = run(objective, params, spec.bounds, seed)
        results.append(result)
        rows = [
            [rec.iteration, rec.best_fitness, *rec.best_position, *_design_record(rec.best_position, spec)]
            for rec in result.history
        ]
        _write_history(out_dir / f"design_seed{seed}.{config.format}", header, rows, config.format)

        summary = _run_summary(result)
        try:
            geometry = geometry_of(result.best_position, spec)
            summary["analysis"] = analyze(geometry, spec.z0_model).as_dict()
            row = _g6(analysis_row(geometry, spec.z0_model))
        except (ValueError, OverflowError) as exc:
            summary["analysis"] = None
            row = f"analysis failed: {exc}"
        runs.append(summary)
        print(f"{seed:>6} {row} {_margin_cols(result)} {result.terminated.value}")
    return _finish("design", out_dir, config, runs, results)


def cmd_bench(config: RunConfig, function: str, dims: int) -> int:
    params = config.bat_params()
    fn = benchmarks.get(function, dims)
    space = fn.default_bounds
    if config.bounds:
        pairs = config.bounds * dims if len(config.bounds) == 1 else config.bounds
        if len(pairs) != dims:
            raise InvalidInputError(f"bench bounds need 1 or {dims} LO:HI pairs, got {len(pairs)}")
        lo, hi = zip(*pairs)
        space = SearchSpace(np.array(lo), np.array(hi))
    out_dir = _prepare_out(config.out)

    header = ["iteration", "best_fitness"] + [f"x{i + 1}" for i in range(dims)]
    print(f"{'seed':>6} {'best_fitness':>14} {'iters':>6} {'it<=1e-2':>9} {'it<=1e-6':>9} status")
    runs, results = [], []
    for seed in config.seeds():
        result = run(fn, params, space, seed)
        results.append(result)
        rows = [[rec.iteration, rec.best_fitness, *rec.best_position] for rec in result.history]
        _write_history(
            out_dir / f"bench_{function}_seed{seed}.{config.format}", header, rows, config.format
        )
        summary = _run_summary(result)
        summary["function"] = function
        summary["dims"] = dims
        runs.append(summary)
        print(f"{seed:>6} {result.best_fitness:>14.6g} {result.iterations_used:>6} "
              f"{_margin_cols(result)} {result.terminated.value}")
    return _finish(f"bench_{function}", out_dir, config, runs, results)


def _add_run_flags(p: argparse.ArgumentParser, design: bool) -> None:
    g = p.add_argument_group("optimizer")
    g.add_argument("--pop-size", type=int)
    g.add_argument("--fmin", type=float)
    g.add_argument("--fmax", type=float)
    g.add_argument("--alpha", type=float)
    g.add_argument("--gamma", type=float)
    g.add_argument("--r0", type=float)
    g.add_argument("--a0", type=float)
    g.add_argument("--replace-count", type=int)
    g.add_argument("--max-iter", type=int)
    g.add_argument("--tol", type=float)
    g.add_argument("--seed", type=int)
    g.add_argument("--runs", type=int)
    g.add_argument("--out", help="output directory (default: results)")
    g.add_argument("--format", choices=("csv", "json"), help="convergence file format")
    g.add_argument("--config", help="JSON file with the same field names; flags override it")
    if design:
        g.add_argument("--bounds", help="W_LO:W_HI,S_LO:S_HI,H_LO:H_HI")
        d = p.add_argument_group("design")
        d.add_argument("--target-coupling", type=float)
        d.add_argument("--eps-r", type=float)
        d.add_argument("--z-min", type=float)
        d.add_argument("--z-max", type=float)
        d.add_argument("--penalty-weight", type=float)
        d.add_argument("--z0-model", choices=Z0_MODELS)
    else:
        g.add_argument("--bounds", help="LO:HI for every dimension, or one pair per dimension")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="batcoupler", description="Bat-algorithm microstrip coupler design."
    )
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("analyze", help="analyze one coupler geometry")
    p.add_argument("--w", type=float, required=True, help="strip width")
    p.add_argument("--s", type=float, required=True, help="strip spacing")
    p.add_argument("--h", type=float, required=True, help="substrate height")
    p.add_argument("--eps-r", type=float, default=3.9)
    p.add_argument("--model", choices=Z0_MODELS, default=DEFAULT_Z0_MODEL)

    p = sub.add_parser("design", help="optimize coupler geometry for a target coupling")
    _add_run_flags(p, design=True)

    p = sub.add_parser("bench", help="run the optimizer on a test function")
    p.add_argument("--function", required=True)
    p.add_argument("--dim", type=int, default=2)
    _add_run_flags(p, design=False)
    return parser


_NON_CONFIG = {"command", "verbose", "config", "function", "dim"}


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.ERROR,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        if args.command == "analyze":
            return cmd_analyze(args)
        overrides = {k: v for k, v in vars(args).items() if k not in _NON_CONFIG}
        config = load_config(args.config, overrides)
        if args.command == "design":
            return cmd_design(config)
        return cmd_bench(config, args.function, args.dim)
    except InvalidInputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
