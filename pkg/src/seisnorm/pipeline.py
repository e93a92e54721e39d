"""Staged processing: L1 despike -> L0 velocity sweep -> L2 diffusion -> migration.

The stage order is fixed; each stage can be switched off.  The sweep's
B1-minimising velocity feeds the final migration when the sweep runs,
otherwise the migration uses its configured velocity.
"""

from __future__ import annotations

import dataclasses
import json
from dataclasses import dataclass, field
from pathlib import Path

from .diffuse import DiffusionParams, diffuse_denoise
from .grid import Section
from .gridio import write_grid
from .migrate import MigrationParams, migrate_constant_v
from .report import emit_csv, emit_curve_svg
from .sweep import SweepSpec, velocity_sweep
from .tvl1 import DespikePreset, SpikeEditParams, despike_section

STAGES = ("despike", "sweep", "diffuse", "migrate")


class ConfigError(ValueError):
    pass


class PipelineError(RuntimeError):
    def __init__(self, stage: str, cause: Exception):
        super().__init__(f"stage '{stage}' failed: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class DespikeStage:
    enabled: bool = True
    window: int = 25
    k_mad: float = 6.0
    tv_fraction: float | None = 0.01


@dataclass(frozen=True)
class SweepStage:
    enabled: bool = True
    v_min: float = 500.0
    v_max: float = 3000.0
    v_step: float = 100.0
    tau: float = 0.1
    window: list[int] | None = None


@dataclass(frozen=True)
class DiffuseStage:
    enabled: bool = False
    patch: int = 5
    epsilon: float = 1.0
    t: int = 2
    r: int | None = None
    max_points: int = 4096
    knn: int = 32


@dataclass(frozen=True)
class MigrateStage:
    enabled: bool = True
    v: float = 1500.0  # used only when the sweep is disabled
    pad_t: float = 2.0
    pad_x: float = 2.0
    interp: str = "sinc"


@dataclass(frozen=True)
class PipelineConfig:
    despike: DespikeStage = field(default_factory=DespikeStage)
    sweep: SweepStage = field(default_factory=SweepStage)
    diffuse: DiffuseStage = field(default_factory=DiffuseStage)
    migrate: MigrateStage = field(default_factory=MigrateStage)

    @classmethod
    def from_dict(cls, raw: dict) -> PipelineConfig:
        if not isinstance(raw, dict):
            raise ConfigError("pipeline config must be a JSON object")
        unknown = set(raw) - set(STAGES)
        if unknown:
            raise ConfigError(f"unknown config section(s): {sorted(unknown)}")
        stages = {}
        for f in dataclasses.fields(cls):
            body = raw.get(f.name, {})
            if not isinstance(body, dict):
                raise ConfigError(f"section '{f.name}' must be an object")
            stage_cls = f.default_factory
            allowed = {sf.name for sf in dataclasses.fields(stage_cls)}
            bad = set(body) - allowed
            if bad:
                raise ConfigError(f"unknown key(s) in '{f.name}': {sorted(bad)}")
            stages[f.name] = stage_cls(**body)
        return cls(**stages)

    @classmethod
    def load(cls, path) -> PipelineConfig:
        try:
            raw = json.loads(Path(path).read_text(encoding="utf-8"))
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: {exc}") from exc
        return cls.from_dict(raw)

    def to_dict(self) -> dict:
        return dataclasses.asdict(self)


@dataclass
class PipelineReport:
    stages: list[dict] = field(default_factory=list)
    v_star: float | None = None
    outputs: dict[str, str] = field(default_factory=dict)

    def to_json(self) -> str:
        return json.dumps(dataclasses.asdict(self), indent=2, sort_keys=True) + "\n"


def run_pipeline(
    config: PipelineConfig,
    section: Section,
    out_dir=None,
    threads: int = 1,
) -> tuple[Section, PipelineReport]:
    """Run the enabled stages in order; returns the final section and a report.

    With ``out_dir`` every stage writes its product there (grids as SGRD, the
    sweep as CSV and SVG) along with ``report.json``.  A failing stage raises
    :class:`PipelineError`; files already written are kept.
    """
    out = Path(out_dir) if out_dir is not None else None
    if out is not None:
        out.mkdir(parents=True, exist_ok=True)
    report = PipelineReport()
    current = section

    def record(name, params, **files):
        written = {}
        for key, (writer, obj) in files.items():
            if out is not None:
                path = out / key
                writer(obj, path)
                written[key] = str(path)
        report.outputs.update(written)
        report.stages.append({"stage": name, "params": params, "outputs": sorted(written)})

    def run(name, fn):
        try:
            return fn()
        except Exception as exc:  # noqa: BLE001 - re-raised with the stage name
            if out is not None:
                (out / "report.json").write_text(report.to_json(), encoding="utf-8")
            raise PipelineError(name, exc) from exc

    c = config
    if c.despike.enabled:
        preset = DespikePreset(SpikeEditParams(c.despike.window, c.despike.k_mad), c.despike.tv_fraction)
        current = run("despike", lambda: despike_section(current, preset))
        record("despike", dataclasses.asdict(c.despike), **{"01_despiked.sgrd": (write_grid, current)})

    if c.sweep.enabled:
        spec = SweepSpec(
            c.sweep.v_min, c.sweep.v_max, c.sweep.v_step, c.sweep.tau,
            tuple(c.sweep.window) if c.sweep.window else None,
        )
        mig = dict(pad_t=c.migrate.pad_t, pad_x=c.migrate.pad_x, interp=c.migrate.interp)
        result = run("sweep", lambda: velocity_sweep(current, spec, threads=threads, **mig))
        report.v_star = result.argmin_v
        record(
            "sweep", dataclasses.asdict(c.sweep),
            **{"02_sweep.csv": (emit_csv, result), "02_sweep.svg": (emit_curve_svg, result)},
        )

    if c.diffuse.enabled:
        d = c.diffuse
        params = DiffusionParams(d.patch, d.epsilon, d.t, d.r, d.max_points, d.knn)
        current = run("diffuse", lambda: diffuse_denoise(current, params))
        record("diffuse", dataclasses.asdict(d), **{"03_diffused.sgrd": (write_grid, current)})

    if c.migrate.enabled:
        v = report.v_star if report.v_star is not None else c.migrate.v
        mp = run("migrate", lambda: MigrationParams(v, c.migrate.pad_t, c.migrate.pad_x, c.migrate.interp))
        current = run("migrate", lambda: migrate_constant_v(current, mp))
        params = dataclasses.asdict(c.migrate) | {"v_used": v}
        record("migrate", params, **{"04_migrated.sgrd": (write_grid, current)})

    if out is not None:
        report.outputs["report.json"] = str(out / "report.json")
        (out / "report.json").write_text(report.to_json(), encoding="utf-8")
    return current, report
