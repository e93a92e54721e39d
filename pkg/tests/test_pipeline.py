import json

import numpy as np
import pytest

from seisnorm.gridio import read_grid
from seisnorm.migrate import migrate_constant_v
from seisnorm.pipeline import ConfigError, PipelineConfig, PipelineError, run_pipeline
from seisnorm.sweep import SweepSpec, velocity_sweep


def spiked(section, row=165, col=60, factor=10.0):
    a = np.array(section.samples)
    a[row, col] += factor * np.abs(a).max()
    return section.with_samples(a)


def only_migrate(v=1400.0):
    return PipelineConfig.from_dict({
        "despike": {"enabled": False}, "sweep": {"enabled": False},
        "diffuse": {"enabled": False}, "migrate": {"v": v},
    })


def test_config_defaults_and_rejection():
    c = PipelineConfig.from_dict({})
    assert c.despike.enabled and c.sweep.enabled and not c.diffuse.enabled and c.migrate.enabled
    with pytest.raises(ConfigError, match="unknown config section"):
        PipelineConfig.from_dict({"stack": {}})
    with pytest.raises(ConfigError, match="unknown key"):
        PipelineConfig.from_dict({"sweep": {"vmin": 10}})
    with pytest.raises(ConfigError):
        PipelineConfig.from_dict({"sweep": 3})
    with pytest.raises(ConfigError):
        PipelineConfig.from_dict([])


def test_config_round_trip(tmp_path):
    c = PipelineConfig.from_dict({"sweep": {"tau": 0.2, "window": [0, 100, 0, 50]}})
    p = tmp_path / "c.json"
    p.write_text(json.dumps(c.to_dict()))
    assert PipelineConfig.load(p) == c


def test_migrate_only_equals_direct(demo_section):
    out, report = run_pipeline(only_migrate(), demo_section)
    assert np.array_equal(out.samples, migrate_constant_v(demo_section, 1400.0).samples)
    assert report.v_star is None and [s["stage"] for s in report.stages] == ["migrate"]


def test_demo_pipeline(tmp_path, demo_section):
    out, report = run_pipeline(PipelineConfig(), demo_section, tmp_path)
    assert abs(report.v_star - 1500.0) <= 100.0
    assert [s["stage"] for s in report.stages] == ["despike", "sweep", "migrate"]
    names = {p.name for p in tmp_path.iterdir()}
    assert names == {"01_despiked.sgrd", "02_sweep.csv", "02_sweep.svg", "04_migrated.sgrd", "report.json"}
    saved = json.loads((tmp_path / "report.json").read_text())
    assert saved["v_star"] == report.v_star
    assert saved["stages"][-1]["params"]["v_used"] == report.v_star
    assert np.allclose(read_grid(tmp_path / "04_migrated.sgrd").samples, out.samples, atol=1e-6)


def test_pipeline_deterministic(tmp_path, demo_section):
    small = demo_section.window((0, 256), (0, 256))
    cfg = PipelineConfig.from_dict({"sweep": {"v_min": 1300, "v_max": 1700}})
    run_pipeline(cfg, small, tmp_path / "a", threads=1)
    run_pipeline(cfg, small, tmp_path / "b", threads=4)
    for f in (tmp_path / "a").iterdir():
        if f.name != "report.json":
            assert f.read_bytes() == (tmp_path / "b" / f.name).read_bytes(), f.name
    ra = json.loads((tmp_path / "a" / "report.json").read_text())
    rb = json.loads((tmp_path / "b" / "report.json").read_text())
    assert ra["stages"] == rb["stages"] and ra["v_star"] == rb["v_star"]


def test_despike_guards_velocity(demo_section):
    # regression: with the spike left in, the curve changes and v* moves to 500 m/s
    bad = spiked(demo_section)
    cfg = PipelineConfig.from_dict({"migrate": {"enabled": False}})
    _, with_despike = run_pipeline(cfg, bad)
    assert with_despike.v_star == 1500.0
    raw = velocity_sweep(bad, SweepSpec())
    clean = velocity_sweep(demo_section, SweepSpec())
    assert raw.argmin_v == 500.0
    assert [e.b1 for e in raw.entries] != [e.b1 for e in clean.entries]


def test_stage_error_named_and_outputs_kept(tmp_path, demo_section):
    cfg = PipelineConfig.from_dict({"sweep": {"v_min": 1500, "v_max": 1500, "window": [0, 9999, 0, 10]}})
    with pytest.raises(PipelineError, match="stage 'sweep'") as info:
        run_pipeline(cfg, demo_section, tmp_path)
    assert info.value.stage == "sweep"
    assert (tmp_path / "01_despiked.sgrd").exists()
    assert json.loads((tmp_path / "report.json").read_text())["stages"][0]["stage"] == "despike"


def test_diffuse_stage_runs(demo_section):
    small = demo_section.window((100, 164), (60, 124))
    cfg = PipelineConfig.from_dict({
        "despike": {"enabled": False}, "sweep": {"enabled": False},
        "diffuse": {"enabled": True, "max_points": 1024}, "migrate": {"enabled": False},
    })
    out, report = run_pipeline(cfg, small)
    assert report.stages[0]["stage"] == "diffuse"
    assert not np.array_equal(out.samples, small.samples)
