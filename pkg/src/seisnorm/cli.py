"""``seisnorm`` command line.

Every subcommand accepts ``--input``, ``--output`` and ``--threads``.  Grids
travel between commands as SGRD files.  Exit status is 0 on success, 1 on a
processing error and 2 on a usage error; error messages name the failing
stage or file.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .diffuse import DiffusionParams, diffuse_denoise
from .grid import GridError, Section
from .gridio import import_segy_minimal, read_grid, write_grid
from .migrate import MigrationParams, migrate_constant_v, semigroup_panels
from .pipeline import ConfigError, PipelineConfig, PipelineError, run_pipeline
from .report import emit_csv, emit_curve_svg, sweep_csv
from .sweep import SweepSpec, velocity_sweep
from .synth import three_diffractor_demo
from .topo import score
from .tvl1 import DespikePreset, SpikeEditParams, despike_section

log = logging.getLogger("seisnorm")


class CliError(Exception):
    pass


def _need(args, name: str):
    value = getattr(args, name)
    if value is None:
        raise CliError(f"{args.command}: --{name} is required")
    return value


def _read(args) -> Section:
    path = _need(args, "input")
    try:
        return read_grid(path)
    except FileNotFoundError:
        raise CliError(f"{path}: no such file") from None


def _window(text):
    if text is None:
        return None
    parts = text.split(",")
    if len(parts) != 4:
        raise argparse.ArgumentTypeError("window is row0,row1,col0,col1")
    try:
        return tuple(int(p) for p in parts)
    except ValueError:
        raise argparse.ArgumentTypeError("window bounds must be integers") from None


def _mig_kwargs(args) -> dict:
    return dict(pad_t=args.pad_t, pad_x=args.pad_x, interp=args.interp)


def cmd_synth(args) -> None:
    _, section = three_diffractor_demo()
    if args.spike:
        r, c, factor = args.spike
        samples = np.array(section.samples)
        samples[int(r), int(c)] += factor * float(np.max(np.abs(samples)))
        section = section.with_samples(samples)
    write_grid(section, _need(args, "output"))


def cmd_despike(args) -> None:
    preset = DespikePreset(SpikeEditParams(args.window, args.k_mad), args.tv_fraction)
    write_grid(despike_section(_read(args), preset), _need(args, "output"))


def cmd_migrate(args) -> None:
    params = MigrationParams(args.velocity, **_mig_kwargs(args))
    write_grid(migrate_constant_v(_read(args), params), _need(args, "output"))


def cmd_panels(args) -> None:
    out = Path(_need(args, "output"))
    out.mkdir(parents=True, exist_ok=True)
    seq = semigroup_panels(_read(args), args.base_velocity, args.count, **_mig_kwargs(args))
    for k, panel in enumerate(seq.panels):
        write_grid(panel, out / f"panel_{k:02d}.sgrd")


def cmd_betti(args) -> None:
    section = _read(args)
    if args.window:
        r0, r1, c0, c1 = args.window
        section = section.window((r0, r1), (c0, c1))
    _, pair = score(section, args.tau)
    label = args.label if args.label is not None else Path(args.input).stem
    _emit_text(args, f"{label},{pair.b0},{pair.b1}\n")


def cmd_sweep(args) -> None:
    spec = SweepSpec(args.v_min, args.v_max, args.v_step, args.tau, args.window)
    result = velocity_sweep(_read(args), spec, threads=args.threads, **_mig_kwargs(args))
    if args.output:
        emit_csv(result, args.output)
    else:
        sys.stdout.write(sweep_csv(result))
    if args.svg:
        emit_curve_svg(result, args.svg)
    log.info("v* = %g m/s", result.argmin_v)


def cmd_diffuse(args) -> None:
    params = DiffusionParams(args.patch, args.epsilon, args.t, args.r, args.max_points)
    write_grid(diffuse_denoise(_read(args), params), _need(args, "output"))


def cmd_pipeline(args) -> None:
    config = PipelineConfig.load(args.config) if args.config else PipelineConfig()
    _, report = run_pipeline(config, _read(args), _need(args, "output"), threads=args.threads)
    log.info("v* = %s", report.v_star)


def cmd_import_segy(args) -> None:
    path = _need(args, "input")
    if not Path(path).exists():
        raise CliError(f"{path}: no such file")
    write_grid(import_segy_minimal(path), _need(args, "output"))


def cmd_export_csv(args) -> None:
    """Grid samples as CSV: one row per time sample, one column per trace."""
    section = _read(args)
    rows = [",".join(f"{v:.9g}" for v in row) for row in np.asarray(section.samples, dtype=np.float32)]
    _emit_text(args, "\n".join(rows) + "\n")


def _emit_text(args, text: str) -> None:
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8", newline="\n")
    else:
        sys.stdout.write(text)


def _add_migration_flags(p) -> None:
    p.add_argument("--pad-t", type=float, default=2.0, help="time padding factor (default 2)")
    p.add_argument("--pad-x", type=float, default=2.0, help="trace padding factor (default 2)")
    p.add_argument("--interp", choices=("sinc", "linear"), default="sinc")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--input", "-i", help="input file")
    common.add_argument("--output", "-o", help="output file or directory")
    common.add_argument("--threads", type=int, default=1, help="worker threads (results do not depend on it)")
    common.add_argument("--verbose", "-v", action="store_true")

    parser = argparse.ArgumentParser(prog="seisnorm", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True, metavar="COMMAND")

    def add(name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_, description=help_)
        p.set_defaults(func=fn)
        return p

    p = add("synth", cmd_synth, "write the three-diffractor demo section")
    p.add_argument("--spike", nargs=3, type=float, metavar=("ROW", "COL", "FACTOR"),
                   help="add FACTOR x peak amplitude at (ROW, COL)")

    p = add("despike", cmd_despike, "MAD spike editing followed by a TV pass on every trace")
    p.add_argument("--window", type=int, default=25, help="odd MAD window length")
    p.add_argument("--k-mad", type=float, default=6.0, help="threshold in robust sigmas")
    p.add_argument("--tv-fraction", type=float, default=0.01,
                   help="TV weight as a fraction of peak amplitude")

    p = add("migrate", cmd_migrate, "constant-velocity f-k migration")
    p.add_argument("--velocity", type=float, required=True, help="migration velocity (m/s)")
    _add_migration_flags(p)

    p = add("panels", cmd_panels, "semigroup panel sequence written as panel_KK.sgrd")
    p.add_argument("--base-velocity", type=float, required=True)
    p.add_argument("--count", type=int, default=10, help="number of panels including the input")
    _add_migration_flags(p)

    p = add("betti", cmd_betti, "Betti numbers of a thresholded grid as 'label,b0,b1'")
    p.add_argument("--tau", type=float, default=0.1, help="threshold fraction of peak |amplitude|")
    p.add_argument("--window", type=_window, help="row0,row1,col0,col1 (half-open)")
    p.add_argument("--label", help="row label (default: input file stem)")

    p = add("sweep", cmd_sweep, "B1 over a migration-velocity scan (CSV, optional SVG)")
    p.add_argument("--v-min", type=float, default=500.0)
    p.add_argument("--v-max", type=float, default=3000.0)
    p.add_argument("--v-step", type=float, default=100.0)
    p.add_argument("--tau", type=float, default=0.1)
    p.add_argument("--window", type=_window, help="row0,row1,col0,col1 scoring window")
    p.add_argument("--svg", help="also write the B1 curve as SVG")
    _add_migration_flags(p)

    p = add("diffuse", cmd_diffuse, "diffusion-semigroup patch denoising")
    p.add_argument("--patch", type=int, default=5)
    p.add_argument("--epsilon", type=float, default=1.0)
    p.add_argument("--t", type=int, default=2, help="diffusion steps")
    p.add_argument("--r", type=int, default=None, help="spectral rank (default: all)")
    p.add_argument("--max-points", type=int, default=4096, help="nodes per tile")

    p = add("pipeline", cmd_pipeline, "despike -> sweep -> diffuse -> migrate into an output directory")
    p.add_argument("--config", help="JSON stage configuration")

    add("import-segy", cmd_import_segy, "convert a SEG-Y rev1 file (formats 1, 5) to SGRD")
    add("export-csv", cmd_export_csv, "write grid samples as CSV")
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="seisnorm: %(message)s",
    )
    if args.threads < 1:
        parser.error("--threads must be >= 1")
    try:
        args.func(args)
    except PipelineError as exc:
        print(f"seisnorm pipeline: {exc}", file=sys.stderr)
        return 1
    except (CliError, ConfigError, GridError, OSError, json.JSONDecodeError, TypeError) as exc:
        print(f"seisnorm {args.command}: {exc}", file=sys.stderr)
        return 1
    return 0


if __name__ == "__main__":
    sys.exit(main())
