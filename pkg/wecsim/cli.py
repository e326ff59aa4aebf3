"""Command-line entry point: run, sweep, plotdata and example."""

from __future__ import annotations

import argparse
import asyncio
import json
import logging
import sys
from collections.abc import Sequence
from dataclasses import replace
from pathlib import Path

from .exceptions import (
    ConfigurationError,
    NumericalError,
    OperatingPointError,
    ScenarioValidationError,
    TraceError,
)
from .log import RunContextFilter, configure_from_env, logger
from .scenario import Scenario, load_scenario, save_scenario, step_wind_scenario
from .simcore import run_scenario
from .summary import write_mppt_log
from .svg import write_line_chart
from .sweep import run_sweep, write_sweep_summary
from .trace import TimeSeries
from .version import __version__

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_NUMERICAL = 3

LOG_FORMAT = "%(asctime)s %(levelname)s [%(run)s t=%(sim_time).3f] %(name)s: %(message)s"


def _setup_logging() -> None:
    handler = logging.StreamHandler(sys.stderr)
    handler.addFilter(RunContextFilter())
    handler.setFormatter(logging.Formatter(LOG_FORMAT))
    logging.basicConfig(level=logging.WARNING, handlers=[handler])
    configure_from_env()


def _fail(message: str) -> int:
    print(f"error: {message}", file=sys.stderr)
    return EXIT_INVALID


def _split_list(raw: str) -> list[str]:
    return [item.strip() for item in raw.split(",") if item.strip()]


def _load(path: str) -> Scenario:
    """Load a scenario; FileNotFoundError and ConfigurationError propagate."""
    if not Path(path).is_file():
        raise FileNotFoundError(path)
    return load_scenario(path)


def cmd_run(args: argparse.Namespace) -> int:
    scenario = _load(args.scenario)
    if args.decimate is not None:
        scenario = replace(scenario, outputs=replace(scenario.outputs, decimate=args.decimate))
    result = run_scenario(scenario, label=Path(args.scenario).stem)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    trace = result.trace
    if scenario.outputs.channels:
        trace = trace.select(scenario.outputs.channels)
    trace.to_csv(out / "trace.csv")
    (out / "summary.json").write_text(
        json.dumps(result.summary.to_dict(), indent=2) + "\n", encoding="utf-8"
    )
    write_mppt_log(result.mppt_log, out / "mppt_log.csv")
    print(f"wrote {len(trace)} rows to {out / 'trace.csv'}")
    return EXIT_OK


def cmd_sweep(args: argparse.Namespace) -> int:
    scenario = _load(args.scenario)
    try:
        values = [float(v) for v in _split_list(args.values)]
    except ValueError as e:
        raise ConfigurationError(f"Bad --values list '{args.values}': {e}") from e
    points = asyncio.run(
        run_sweep(
            scenario,
            args.param,
            values,
            workers=args.workers,
            static=args.static,
            executor_kind=args.executor,
        )
    )
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    write_sweep_summary(points, out / "sweep_summary.csv")
    print(f"wrote {len(points)} rows to {out / 'sweep_summary.csv'}")
    return EXIT_OK


def cmd_plotdata(args: argparse.Namespace) -> int:
    if not Path(args.trace).is_file():
        raise FileNotFoundError(args.trace)
    channels = _split_list(args.channels)
    if not channels:
        raise ConfigurationError("--channels must name at least one channel")
    trace = TimeSeries.from_csv(args.trace)
    selected = trace.select(channels)

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for name in channels:
        selected.select([name]).to_csv(out / f"{name}.csv")
        write_line_chart(out / f"{name}.svg", selected.t, selected[name], name, name)
    print(f"wrote {len(channels)} channel(s) to {out}")
    return EXIT_OK


def cmd_example(args: argparse.Namespace) -> int:
    save_scenario(step_wind_scenario(), args.out)
    print(f"wrote {args.out}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="wecsim",
        description="Simulate a grid-connected PMSG wind turbine with step-and-search MPPT.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_run = sub.add_parser("run", help="run one scenario")
    p_run.add_argument("scenario", help="scenario JSON file")
    p_run.add_argument("--out", default="out", help="output directory (default: out)")
    p_run.add_argument("--decimate", type=int, help="record every N-th plant step")
    p_run.set_defaults(func=cmd_run)

    p_sweep = sub.add_parser("sweep", help="run one scenario per parameter value")
    p_sweep.add_argument("scenario", help="scenario JSON file")
    p_sweep.add_argument("--param", required=True, help="dotted parameter path, or wind.speed")
    p_sweep.add_argument("--values", required=True, help="comma-separated values")
    p_sweep.add_argument("--out", default="out", help="output directory (default: out)")
    p_sweep.add_argument("--workers", type=int, default=1, help="concurrent runs (default: 1)")
    p_sweep.add_argument(
        "--static", action="store_true", help="use the quasi-static plant instead of full runs"
    )
    p_sweep.add_argument("--executor", choices=("process", "thread"), default="process")
    p_sweep.set_defaults(func=cmd_sweep)

    p_plot = sub.add_parser("plotdata", help="export trace channels as CSV and SVG")
    p_plot.add_argument("trace", help="trace CSV written by 'run'")
    p_plot.add_argument("--channels", required=True, help="comma-separated channel names")
    p_plot.add_argument("--out", required=True, help="output directory")
    p_plot.set_defaults(func=cmd_plotdata)

    p_example = sub.add_parser("example", help="write the canonical step-wind scenario")
    p_example.add_argument("--out", default="scenario.json", help="destination JSON file")
    p_example.set_defaults(func=cmd_example)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    """
    Parse ``argv`` and dispatch to a subcommand.

    Returns:
        0 on success, 2 on invalid input, 3 when a run aborts numerically
    """
    _setup_logging()
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except FileNotFoundError as e:
        return _fail(f"no such file: {e.filename or e}")
    except ScenarioValidationError as e:
        lines = "\n".join(f"  - {v}" for v in e.violations)
        return _fail(f"invalid scenario:\n{lines}")
    except TraceError as e:
        available = f"\navailable channels: {', '.join(e.available)}" if e.available else ""
        return _fail(f"{e}{available}")
    except (ConfigurationError, OperatingPointError) as e:
        return _fail(str(e))
    except NumericalError as e:
        print(f"error: run aborted: {e}", file=sys.stderr)
        return EXIT_NUMERICAL
    except ValueError as e:
        logger.debug("invalid input", exc_info=True)
        return _fail(str(e))


if __name__ == "__main__":
    sys.exit(main())
