"""Command-line driver: ``sweep``, ``fit``, ``verify <suite>`` and ``exponent``.

Exit codes: 0 when every check passes, 1 on a numerical or acceptance
failure, 2 on a usage or configuration error.
"""
from __future__ import annotations

import argparse
import copy
import json
import os
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from pathlib import Path

from .errors import ConfigError, DomainError, OscillormError
from .opnorm import DEFAULT_LADDER
from .report import THRESHOLDS, read_csv, summarize, write_csv
from .suites import SUITES, run_cell
from .theory import LebesguePoint, PhaseFamily, theoretical_exponent

__all__ = ["SweepConfig", "DEFAULT_CONFIG", "load_config", "run_sweep", "run_verify", "main"]

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2

DEFAULT_CONFIG = {
    "families": [[j, k, n] for n in (1, 2, 3) for j in (1, 2) for k in (1, 2)],
    "points": [[0, 1], [0, 0.5], [0.25, 0.25], [0.5, 0.5], [0.75, 0.5], [1, 1]],
    "ladder": list(DEFAULT_LADDER),
    "seeds": [0],
    "output": "sweep.csv",
    "threshold": THRESHOLDS["slope"],
    "workers": None,
    "resolution": {
        "points_per_period": 8,
        "eta": 0.1,
        "restarts": 8,
        "steps": 200,
        "tol": 1e-7,
    },
}


@dataclass(frozen=True)
class SweepConfig:
    families: tuple
    points: tuple
    ladder: tuple
    seeds: tuple
    output: Path
    threshold: float
    workers: int | None
    resolution: dict

    @classmethod
    def from_dict(cls, d: dict) -> "SweepConfig":
        unknown = set(d) - set(DEFAULT_CONFIG)
        if unknown:
            raise ConfigError(f"unknown config keys: {sorted(unknown)}")
        unknown = set(d["resolution"]) - set(DEFAULT_CONFIG["resolution"])
        if unknown:
            raise ConfigError(f"unknown resolution keys: {sorted(unknown)}")
        try:
            families = tuple(PhaseFamily(*map(int, f)) for f in d["families"])
            points = tuple(LebesguePoint(float(a), float(b)) for a, b in d["points"])
            ladder = tuple(float(N) for N in d["ladder"])
            seeds = tuple(int(s) for s in d["seeds"])
        except (TypeError, ValueError) as exc:
            raise ConfigError(f"malformed config: {exc}") from None
        if not families or not points or not ladder or not seeds:
            raise ConfigError("families, points, ladder and seeds must be non-empty")
        if any(N <= 0 for N in ladder) or any(b <= a for a, b in zip(ladder, ladder[1:])):
            raise ConfigError("ladder must be positive and strictly increasing")
        workers = d["workers"]
        if workers is not None and (not isinstance(workers, int) or workers < 1):
            raise ConfigError("workers must be a positive integer or null")
        threshold = d["threshold"]
        if not isinstance(threshold, (int, float)) or not threshold > 0:
            raise ConfigError("threshold must be a positive number")
        return cls(families, points, ladder, seeds, Path(d["output"]), float(threshold), workers,
                   dict(d["resolution"]))


def _parse_value(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError:
        return text


def apply_overrides(config: dict, overrides) -> dict:
    """Apply ``--key=value`` and ``--section.key=value`` flags to a config dict."""
    config = copy.deepcopy(config)
    for flag in overrides:
        if not flag.startswith("--") or "=" not in flag:
            raise ConfigError(f"expected --key=value, got {flag!r}")
        key, _, value = flag[2:].partition("=")
        *path, leaf = key.replace("-", "_").split(".")
        node = config
        for part in path:
            if not isinstance(node.get(part), dict):
                raise ConfigError(f"unknown config section {part!r}")
            node = node[part]
        if leaf not in node:
            raise ConfigError(f"unknown config key {key!r}")
        node[leaf] = _parse_value(value)
    return config


def load_config(path=None, overrides=()) -> SweepConfig:
    config = copy.deepcopy(DEFAULT_CONFIG)
    if path is not None:
        try:
            loaded = json.loads(Path(path).read_text())
        except (OSError, json.JSONDecodeError) as exc:
            raise ConfigError(f"cannot read config {path}: {exc}") from None
        if not isinstance(loaded, dict):
            raise ConfigError("config file must hold a JSON object")
        resolution = dict(config["resolution"], **loaded.pop("resolution", {}))
        config.update(loaded)
        config["resolution"] = resolution
    return SweepConfig.from_dict(apply_overrides(config, overrides))


def worker_count(requested=None, cells: int = 1) -> int:
    """Pool size: CPU count capped by ``OSCILLORM_THREADS``, the config and the work."""
    n = os.cpu_count() or 1
    env = os.environ.get("OSCILLORM_THREADS")
    if env:
        try:
            cap = int(env)
        except ValueError:
            raise ConfigError(f"OSCILLORM_THREADS={env!r} is not an integer") from None
        if cap < 1:
            raise ConfigError("OSCILLORM_THREADS must be >= 1")
        n = min(n, cap)
    if requested is not None:
        n = min(n, requested)
    return max(1, min(n, cells))


def _cell(args):
    fam, N, seed, points, res = args
    return run_cell(fam, N, points, seed=seed, **res)


def _write(records, csv_path: Path, summary: dict):
    csv_path.parent.mkdir(parents=True, exist_ok=True)
    with open(csv_path, "w", newline="") as fh:
        write_csv(records, fh)
    summary_path = csv_path.with_suffix(".json")
    summary_path.write_text(json.dumps(summary, indent=2) + "\n")
    return summary_path


def run_sweep(config: SweepConfig):
    """Run every ``(family, N, seed)`` cell; returns ``(records, summary)``."""
    points = [(p.a, p.b) for p in config.points]
    tasks = [((f.j, f.k, f.n), N, seed, points, config.resolution)
             for f in config.families for seed in config.seeds for N in config.ladder]
    workers = worker_count(config.workers, len(tasks))
    if workers == 1:
        chunks = [_cell(t) for t in tasks]
    else:
        # map keeps submission order, so the row order does not depend on scheduling
        with ProcessPoolExecutor(max_workers=workers) as pool:
            chunks = list(pool.map(_cell, tasks))
    records = [r for chunk in chunks for r in chunk]
    return records, summarize(records, config.threshold)


def run_verify(suite: str):
    if suite not in SUITES:
        raise ConfigError(f"unknown suite {suite!r}; expected one of {sorted(SUITES)}")
    records = SUITES[suite]()
    return records, summarize(records)


def _report(summary, csv_path, summary_path):
    status = "PASS" if summary["passed"] else "FAIL"
    print(f"{status} rows={summary['rows']} failed_rows={summary['failed_rows']} "
          f"csv={csv_path} summary={summary_path}")
    for cell in summary.get("cells", []):
        if not cell["passed"]:
            print(f"  fail {cell['family']} a={cell['a']} b={cell['b']} C={cell['C']:.4f} "
                  f"lower={cell.get('slope_lower', float('nan')):.4f} "
                  f"upper={cell.get('slope_upper', float('nan')):.4f}")
    for check in summary.get("checks", []):
        if not check["passed"]:
            print(f"  fail {check['name']} value={check['value']:.4g} limit={check['limit']:.4g}")
    return EXIT_OK if summary["passed"] else EXIT_FAIL


def _cmd_sweep(args, extra):
    config = load_config(args.config, extra)
    if args.output is not None:
        config = SweepConfig(**{**config.__dict__, "output": Path(args.output)})
    records, summary = run_sweep(config)
    return _report(summary, config.output, _write(records, config.output, summary))


def _cmd_verify(args, extra):
    if extra:
        raise ConfigError(f"unexpected arguments {extra}")
    out = Path(args.output or f"verify_{args.suite}.csv")
    records, summary = run_verify(args.suite)
    return _report(summary, out, _write(records, out, summary))


def _cmd_fit(args, extra):
    if extra:
        raise ConfigError(f"unexpected arguments {extra}")
    try:
        with open(args.csv, newline="") as fh:
            records = read_csv(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read {args.csv}: {exc}") from None
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"malformed rows in {args.csv}: {exc}") from None
    summary = summarize(records, args.threshold)
    text = json.dumps(summary, indent=2) + "\n"
    if args.summary:
        Path(args.summary).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK if summary["passed"] else EXIT_FAIL


def _cmd_exponent(args, extra):
    if extra:
        raise ConfigError(f"unexpected arguments {extra}")
    value = theoretical_exponent(PhaseFamily(args.j, args.k, args.n), LebesguePoint(args.a, args.b))
    print(repr(value))
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="oscillorm", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("sweep", help="norm ladders per (family, point); extra flags are --key=value overrides")
    p.add_argument("--config", help="JSON config file")
    p.add_argument("--output", help="CSV path (the summary goes next to it as .json)")
    p.set_defaults(func=_cmd_sweep)

    p = sub.add_parser("fit", help="recompute the summary of a sweep or verify CSV")
    p.add_argument("csv")
    p.add_argument("--threshold", type=float, default=THRESHOLDS["slope"])
    p.add_argument("--summary", help="write the JSON summary here instead of stdout")
    p.set_defaults(func=_cmd_fit)

    p = sub.add_parser("verify", help="run a named check battery")
    p.add_argument("suite", choices=sorted(SUITES))
    p.add_argument("--output", help="CSV path (default verify_<suite>.csv)")
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("exponent", help="print the closed-form decay exponent")
    p.add_argument("j", type=int)
    p.add_argument("k", type=int)
    p.add_argument("n", type=int)
    p.add_argument("a", type=float)
    p.add_argument("b", type=float)
    p.set_defaults(func=_cmd_exponent)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args, extra = parser.parse_known_args(argv)
    try:
        return args.func(args, extra)
    except (ConfigError, DomainError) as exc:
        print(f"oscillorm: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OscillormError as exc:
        print(f"oscillorm: numerical failure: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
