"""Command-line front end: ``leafgrow --intervals N [options]``.

Exit codes: 0 success; 2 unknown flag or malformed command line; 3 missing
required argument; 4 out-of-range value; 5 runtime error; 6 I/O error.
"""

from __future__ import annotations

import argparse
import logging
import os
import sys
from dataclasses import dataclass, replace
from pathlib import Path

from leafgrow import __version__
from leafgrow.analysis import ensemble
from leafgrow.errors import ConfigError, LeafgrowError
from leafgrow.export import (
    RunManifest,
    export_dot,
    export_frames,
    export_metrics_csv,
    export_trajectory_json,
    file_entry,
)
from leafgrow.growth import GrowthConfig, OscillatingQ, Policy, run
from leafgrow.tree import attachment_weights

log = logging.getLogger("leafgrow")

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_MISSING = 3
EXIT_RANGE = 4
EXIT_RUNTIME = 5
EXIT_IO = 6

FORMATS = ("json", "dot", "csv", "frames")
OUT_ENV = "LEAFGROW_OUT"


class UsageError(Exception):
    def __init__(self, message: str, code: int) -> None:
        super().__init__(message)
        self.code = code


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):
        if message.startswith("unrecognized arguments"):
            raise UsageError(message, EXIT_USAGE)
        if message.startswith("the following arguments are required"):
            raise UsageError(message, EXIT_MISSING)
        if message.startswith("argument ") and ("invalid" in message or "out of range" in message):
            raise UsageError(message, EXIT_RANGE)
        raise UsageError(message, EXIT_USAGE)


@dataclass(frozen=True)
class CliOptions:
    config: GrowthConfig
    policies: tuple[Policy, ...]
    runs: int
    out: Path | None
    formats: tuple[str, ...]
    workers: int


def _bounded(kind, lo=None, hi=None, name="value"):
    def convert(text: str):
        try:
            x = kind(text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"invalid {name} {text!r}") from None
        if (lo is not None and x < lo) or (hi is not None and x > hi):
            span = f"[{lo if lo is not None else '-inf'}, {hi if hi is not None else 'inf'}]"
            raise argparse.ArgumentTypeError(f"{name} {text} out of range {span}")
        return x

    return convert


def _bayes_list(text: str) -> tuple[int, ...]:
    cases = []
    for part in text.split(","):
        if part.strip() not in ("0", "1", "2"):
            raise argparse.ArgumentTypeError(
                f"invalid bayes case {part!r}; valid values are 0, 1, 2 (comma-separated)"
            )
        cases.append(int(part))
    return tuple(dict.fromkeys(cases))


def _format_list(text: str) -> tuple[str, ...]:
    parts = tuple(p.strip() for p in text.split(",") if p.strip())
    bad = [p for p in parts if p not in FORMATS]
    if bad or not parts:
        raise argparse.ArgumentTypeError(
            f"invalid format {','.join(bad) or text!r}; valid values are {', '.join(FORMATS)}"
        )
    return tuple(dict.fromkeys(parts))


def _oscillation(text: str) -> OscillatingQ:
    try:
        q_min, q_max, period = (float(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"invalid q oscillation {text!r}; expected min,max,period") from None
    try:
        return OscillatingQ(q_min, q_max, period)
    except ConfigError as exc:
        raise argparse.ArgumentTypeError(f"q oscillation out of range: {exc}") from None


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="leafgrow", description="Grow random rooted trees by probabilistic leaf attachment.")
    p.add_argument("--intervals", type=_bounded(int, 1, name="interval count"),
                   help="number of time intervals N (t = 0..N-1)")
    p.add_argument("--poisson-mean", type=_bounded(float, 0.0, name="poisson mean"), default=2.0,
                   help="mean new vertices per interval (default 2)")
    p.add_argument("--mode", choices=("bayes", "branch"), default="bayes")
    p.add_argument("--bayes", type=_bayes_list, default=(0,),
                   help="Bayes case 0 (prior), 1 (global), 2 (local); comma-separate for several")
    p.add_argument("--branch-weights", choices=("unit", "indeg", "cumindeg"), default="indeg")
    p.add_argument("--sharpen", choices=("power", "exp"), default="power")
    p.add_argument("--alpha", type=_bounded(float, 0.0, name="alpha"), default=1.0)
    p.add_argument("--q", type=_bounded(float, 0.0, 1.0, name="q"), default=0.0,
                   help="prior weight in the prior/posterior mixture")
    p.add_argument("--q-oscillate", type=_oscillation, default=None, metavar="MIN,MAX,PERIOD")
    p.add_argument("--seed", type=_bounded(int, 0, 2**64 - 1, name="seed"), default=0)
    p.add_argument("--runs", type=_bounded(int, 1, name="run count"), default=1)
    p.add_argument("--workers", type=_bounded(int, 1, name="worker count"), default=1)
    p.add_argument("--out", type=Path, default=None,
                   help=f"output directory (falls back to ${OUT_ENV}; stdout if neither)")
    p.add_argument("--format", type=_format_list, default=("json",),
                   help=f"comma-separated subset of {','.join(FORMATS)}")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    return p


def parse_cli(args: list[str]) -> CliOptions:
    ns = build_parser().parse_args(args)
    # Checked here rather than by argparse so unknown flags are reported first.
    if ns.intervals is None:
        raise UsageError("the following arguments are required: --intervals", EXIT_MISSING)
    if ns.mode == "branch":
        policies = (Policy("branch", weighting=ns.branch_weights, sharpen=ns.sharpen, alpha=ns.alpha),)
    else:
        policies = tuple(Policy("bayes", bayes=b) for b in ns.bayes)
    config = GrowthConfig(
        intervals=ns.intervals,
        poisson_mean=ns.poisson_mean,
        policy=policies[0],
        q=ns.q,
        q_oscillate=ns.q_oscillate,
        seed=ns.seed,
    )
    out = ns.out
    if out is None and os.environ.get(OUT_ENV):
        out = Path(os.environ[OUT_ENV])
    if out is None and ("frames" in ns.format or len(ns.format) > 1 or len(policies) > 1):
        raise UsageError("--out (or $LEAFGROW_OUT) is required for frames, several formats or policies",
                         EXIT_MISSING)
    return CliOptions(config, policies, ns.runs, out, ns.format, ns.workers)


def execute(opts: CliOptions) -> list[Path]:
    """Run and write every requested output; returns the files written."""
    if opts.out is None:
        fmt = opts.formats[0]
        traj = run(opts.config)
        if fmt == "json":
            sys.stdout.write(export_trajectory_json(traj))
        elif fmt == "dot":
            sys.stdout.write(export_dot(traj.tree, attachment_weights(traj.tree)))
        else:
            sys.stdout.write(export_metrics_csv(ensemble(opts.config, opts.runs, opts.policies, opts.workers)))
        return []

    root = opts.out
    root.mkdir(parents=True, exist_ok=True)
    entries = []
    written = []
    for policy in opts.policies:
        cfg = replace(opts.config, policy=policy)
        base = root if len(opts.policies) == 1 else root / policy.name
        base.mkdir(parents=True, exist_ok=True)
        if not {"json", "dot", "frames"} & set(opts.formats):
            continue
        traj = run(cfg)
        if "json" in opts.formats:
            path = base / "trajectory.json"
            path.write_text(export_trajectory_json(traj), encoding="utf-8")
            written.append(path)
            entries.append(file_entry(path, root, "trajectory"))
        if "dot" in opts.formats:
            path = base / "tree.dot"
            path.write_text(export_dot(traj.tree, attachment_weights(traj.tree)), encoding="utf-8")
            written.append(path)
            entries.append(file_entry(path, root, "dot"))
        if "frames" in opts.formats:
            frames_dir = base / "frames"
            manifest = export_frames(traj, frames_dir)
            for entry in manifest.files:
                path = frames_dir / entry["path"]
                written.append(path)
                entries.append(file_entry(path, root, entry["kind"]))
        log.info("%s: %d vertices, %d leaves", policy.name, len(traj.tree), len(traj.tree.leaves()))
    if "csv" in opts.formats:
        summary = ensemble(opts.config, opts.runs, opts.policies, opts.workers)
        path = root / "metrics.csv"
        path.write_text(export_metrics_csv(summary), encoding="utf-8")
        written.append(path)
        entries.append(file_entry(path, root, "metrics"))
    config = opts.config.to_dict()
    config["policies"] = [p.to_dict() for p in opts.policies]
    config["runs"] = opts.runs
    manifest = RunManifest(config, __version__, tuple(entries))
    (root / "manifest.json").write_text(manifest.to_json(), encoding="utf-8")
    return written


def main(argv: list[str] | None = None) -> int:
    logging.basicConfig(level=logging.WARNING, format="%(name)s: %(message)s")
    try:
        opts = parse_cli(sys.argv[1:] if argv is None else argv)
    except UsageError as exc:
        print(f"leafgrow: error: {exc}", file=sys.stderr)
        return exc.code
    except ConfigError as exc:
        print(f"leafgrow: error: {exc}", file=sys.stderr)
        return EXIT_RANGE
    try:
        execute(opts)
    except OSError as exc:
        where = f" ({exc.filename})" if getattr(exc, "filename", None) else ""
        print(f"leafgrow: I/O error{where}: {exc.strerror or exc}", file=sys.stderr)
        return EXIT_IO
    except (LeafgrowError, ValueError) as exc:
        print(f"leafgrow: runtime error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
