"""Mixed-norm seismic imaging: TV despiking, semigroup f-k migration,
Betti-number velocity selection and diffusion-semigroup denoising."""

__version__ = "0.1.0"

from .grid import GridError, Section, Trace, validate
from .synth import DiffractorModel, Diffractor, three_diffractor_demo
from .tvl1 import DespikePreset, despike_section, tv1d
from .migrate import MigrationParams, cascade_check, migrate_constant_v, semigroup_panels
from .topo import betti, betti_oracle, binarize, score
from .sweep import SweepSpec, velocity_sweep
from .diffuse import DiffusionParams, build_operator, diffuse_denoise
from .gridio import import_segy_minimal, read_grid, write_grid
from .pipeline import PipelineConfig, run_pipeline

__all__ = [
    "GridError", "Section", "Trace", "validate",
    "Diffractor", "DiffractorModel", "three_diffractor_demo",
    "DespikePreset", "despike_section", "tv1d",
    "MigrationParams", "cascade_check", "migrate_constant_v", "semigroup_panels",
    "betti", "betti_oracle", "binarize", "score",
    "SweepSpec", "velocity_sweep",
    "DiffusionParams", "build_operator", "diffuse_denoise",
    "import_segy_minimal", "read_grid", "write_grid",
    "PipelineConfig", "run_pipeline",
]
