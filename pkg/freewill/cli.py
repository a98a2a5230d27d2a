"""Command-line entry point: ``freewill {run,reproduce,sweep,verify}``.

Exit codes: 0 ok, 1 run failure, 2 configuration or usage error, 3 I/O error,
4 verification failure. Every failure prints exactly one line on stderr,
``freewill: error[<kind>]: <message>``.
"""
from __future__ import annotations

import argparse
import logging
import sys
from pathlib import Path

import pandas as pd
from pydantic import ValidationError

from freewill import __version__
from freewill.config import ExperimentConfig, get_dotted, load_config, resolve_key, sweepable_keys
from freewill.errors import ConfigError, FreeWillError, ManifestInconsistent, ReportIOError
from freewill.experiment.runner import run_many
from freewill.experiment.summary import final_mean_reward, mean_reward
from freewill.presets import FIGURES, figure_config
from freewill.report.figures import write_report
from freewill.report.manifest import verify_manifest
from freewill.settings import Settings, get_settings

logger = logging.getLogger("freewill.cli")

EXIT_OK, EXIT_RUN, EXIT_CONFIG, EXIT_IO, EXIT_VERIFY = 0, 1, 2, 3, 4


class VerifyFailed(FreeWillError):
    def __init__(self, problems: list[str]):
        super().__init__(f"{len(problems)} file(s) failed: " + "; ".join(problems))
        self.problems = problems


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise ConfigError("arguments", message)


def parse_seeds(spec: str) -> list[int]:
    """Parse ``0..9,12`` style seed lists (ranges inclusive)."""
    seeds: list[int] = []
    try:
        for part in spec.split(","):
            part = part.strip()
            if ".." in part:
                lo, hi = (int(x) for x in part.split("..", 1))
                if hi < lo:
                    raise ValueError(part)
                seeds.extend(range(lo, hi + 1))
            else:
                seeds.append(int(part))
    except ValueError:
        raise ConfigError("seeds", f"cannot parse seed list {spec!r}") from None
    return seeds


def _settings() -> Settings:
    try:
        return get_settings()
    except ValidationError as exc:
        err = exc.errors()[0]
        key = "FREEWILL_" + "_".join(str(p) for p in err.get("loc", ())).upper()
        raise ConfigError(key, err.get("msg", str(exc))) from None


def _apply_seeds(config: ExperimentConfig, seed_spec: str | None, seed_base: int) -> ExperimentConfig:
    seeds = parse_seeds(seed_spec) if seed_spec else config.seeds
    if seed_spec or seed_base:
        config = config.with_seeds([s + seed_base for s in seeds])
    return config


def _jobs(args, settings: Settings) -> int | None:
    jobs = args.jobs if args.jobs is not None else settings.jobs
    if jobs is not None and jobs < 1:
        raise ConfigError("jobs", f"--jobs must be at least 1, got {jobs}")
    return jobs


def _execute(config: ExperimentConfig, out: Path, jobs: int | None, seed_base: int, extra: dict) -> Path:
    result = run_many(config, jobs=jobs)
    return write_report(result, out, seed_base=seed_base, extra=extra)


def cmd_run(args, settings: Settings) -> int:
    config = load_config(args.config).with_overrides(args.override)
    config = _apply_seeds(config, args.seeds, settings.seed_base)
    manifest = _execute(config, Path(args.out), _jobs(args, settings), settings.seed_base,
                        {"command": "run", "config_path": str(args.config), "overrides": list(args.override)})
    print(f"wrote {manifest}")
    return EXIT_OK


def cmd_reproduce(args, settings: Settings) -> int:
    config = _apply_seeds(figure_config(args.figure), args.seeds, settings.seed_base)
    manifest = _execute(config, Path(args.out), _jobs(args, settings), settings.seed_base,
                        {"command": "reproduce", "figure": args.figure})
    print(f"wrote {manifest}")
    return EXIT_OK


def _sweep_key(param: str) -> str:
    key = ".".join(resolve_key(param))
    short = key.removeprefix("agents.")
    if short not in sweepable_keys():
        raise ConfigError(param, f"not a sweepable numeric agent parameter; choose from {', '.join(sweepable_keys())}")
    return short


def cmd_sweep(args, settings: Settings) -> int:
    if not args.values:
        raise ConfigError("values", "sweep needs at least one value")
    if len(set(args.values)) != len(args.values):
        raise ConfigError("values", "sweep values must be distinct")
    key = _sweep_key(args.param)
    base = load_config(args.config).with_overrides(args.override)
    base = _apply_seeds(base, args.seeds, settings.seed_base)
    # validate every value before running anything
    configs = [(raw, base.with_overrides([f"{key}={raw}"])) for raw in args.values]
    jobs = _jobs(args, settings)

    out = Path(args.out)
    rows = []
    for raw, config in configs:
        value_dir = out / f"{key}_{raw}"
        logger.info("sweep %s=%s -> %s", key, raw, value_dir)
        result = run_many(config, jobs=jobs)
        write_report(result, value_dir, seed_base=settings.seed_base,
                     extra={"command": "sweep", "param": key, "value": raw})
        row = {"param": key, "value": get_dotted(config.to_json_dict(), key), "output_dir": value_dir.name}
        for agent in ("freewill", "baseline"):
            row[f"final_mean_reward_{agent}"] = final_mean_reward(result, agent)
        change = config.phase_schedule().change_steps
        if change and change[0] < config.total_steps:
            for agent in ("freewill", "baseline"):
                row[f"post_change_mean_reward_{agent}"] = mean_reward(result, agent, change[0], config.total_steps)
        rows.append(row)

    summary = out / "sweep_summary.csv"
    try:
        pd.DataFrame(rows).to_csv(summary, index=False, float_format="%.9g", lineterminator="\n")
    except OSError as exc:
        raise ReportIOError(summary, exc.strerror or str(exc)) from None
    print(f"wrote {summary}")
    return EXIT_OK


def cmd_verify(args, settings: Settings) -> int:
    problems = verify_manifest(args.out)
    if problems:
        raise VerifyFailed(problems)
    print(f"ok: {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    common = _Parser(add_help=False)
    common.add_argument("-v", "--verbose", action="store_true", help="Debug logging on stderr")

    runner = _Parser(add_help=False)
    runner.add_argument("--out", required=True, help="Output directory")
    runner.add_argument("--seeds", default=None, help="Seed list, e.g. 0..9 or 0,2,5")
    runner.add_argument("--jobs", type=int, default=None, help="Maximum parallel runs, at least 1 (default: all processors)")

    overrides = _Parser(add_help=False)
    overrides.add_argument("--config", required=True, help="JSON run configuration")
    overrides.add_argument("--override", action="append", default=[], metavar="KEY=VALUE",
                           help="Override one configuration key (repeatable)")

    parser = _Parser(prog="freewill", description="Free-Will bandit experiments")
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("run", parents=[common, overrides, runner], help="Run a configured experiment")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("reproduce", parents=[common, runner], help="Run a built-in figure preset")
    p.add_argument("figure", choices=sorted(FIGURES))
    p.set_defaults(func=cmd_reproduce)

    p = sub.add_parser("sweep", parents=[common, overrides, runner], help="Sweep one numeric parameter")
    p.add_argument("--param", required=True, help="Dotted parameter key, e.g. freewill.alpha")
    p.add_argument("--values", nargs="*", default=[], help="Values to try")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("verify", parents=[common], help="Re-hash an output directory")
    p.add_argument("--out", required=True, help="Output directory holding manifest.json")
    p.set_defaults(func=cmd_verify)
    return parser


def _fail(kind: str, message: str, code: int) -> int:
    print(f"freewill: error[{kind}]: {' '.join(str(message).split())}", file=sys.stderr)
    return code


def main(argv: list[str] | None = None) -> int:
    try:
        args = build_parser().parse_args(argv)
        settings = _settings()
    except ConfigError as exc:
        return _fail("config", str(exc), EXIT_CONFIG)

    level = logging.DEBUG if args.verbose else getattr(logging, settings.log_level.upper(), logging.INFO)
    logging.basicConfig(level=level, stream=sys.stderr, format="%(levelname)s %(name)s: %(message)s")

    try:
        return args.func(args, settings)
    except ConfigError as exc:
        return _fail("config", str(exc), EXIT_CONFIG)
    except VerifyFailed as exc:
        return _fail("verify", str(exc), EXIT_VERIFY)
    except ManifestInconsistent as exc:
        code = EXIT_VERIFY if args.command == "verify" else EXIT_IO
        return _fail("manifest", str(exc), code)
    except ReportIOError as exc:
        return _fail("io", str(exc), EXIT_IO)
    except FreeWillError as exc:
        return _fail("run", str(exc), EXIT_RUN)


if __name__ == "__main__":
    sys.exit(main())
