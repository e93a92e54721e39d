"""Velocity selection by minimising B1 over a migration-velocity scan."""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .grid import GridError, Section, as_velocity, max_abs, require_valid
from .migrate import MigrationParams, migrate_constant_v
from .topo import BettiPair, TopologyError, binarize, score


@dataclass(frozen=True)
class SweepSpec:
    v_min: float = 500.0
    v_max: float = 3000.0
    v_step: float = 100.0
    tau: float = 0.1
    window: tuple[int, int, int, int] | None = None  # row0, row1, col0, col1 (half-open)

    def __post_init__(self):
        if not (self.v_step > 0 and 0 < self.v_min <= self.v_max):
            raise GridError(
                f"bad velocity grid {self.v_min}:{self.v_max}:{self.v_step}"
            )
        if not 0 < self.tau < 1:
            raise TopologyError(f"tau must lie in (0, 1), got {self.tau}")

    def velocities(self) -> list[float]:
        n = int(np.floor((self.v_max - self.v_min) / self.v_step + 1e-9)) + 1
        return [self.v_min + i * self.v_step for i in range(n)]


@dataclass(frozen=True)
class SweepEntry:
    v: float
    b0: int
    b1: int
    active_pixels: int
    empty: bool = False  # scored window was all zero


@dataclass(frozen=True)
class SweepResult:
    entries: tuple[SweepEntry, ...]
    argmin_v: float
    tau: float

    @property
    def velocities(self) -> list[float]:
        return [e.v for e in self.entries]

    def entry(self, v: float) -> SweepEntry:
        for e in self.entries:
            if abs(e.v - v) < 1e-9:
                return e
        raise KeyError(v)


def _crop(section: Section, window) -> Section:
    if window is None:
        return section
    r0, r1, c0, c1 = window
    return section.window((r0, r1), (c0, c1))


def score_image(section: Section, v: float, tau: float, window=None) -> SweepEntry:
    """Entry for a single (already migrated) image."""
    img = _crop(section, window)
    if max_abs(img) == 0.0:
        return SweepEntry(v, 0, 0, 0, empty=True)
    bits, pair = score(img, tau)
    return SweepEntry(v, pair.b0, pair.b1, bits.active)


def argmin_velocity(entries) -> float:
    """Velocity of least B1; ties go to the lowest velocity.  Empty windows
    only count when every entry is empty."""
    pool = [e for e in entries if not e.empty] or list(entries)
    return min(pool, key=lambda e: (e.b1, e.v)).v


def velocity_sweep(
    section: Section,
    spec: SweepSpec = SweepSpec(),
    threads: int = 1,
    **mig_kwargs,
) -> SweepResult:
    """Migrate at every velocity of ``spec``, binarize, and count Betti numbers.

    Velocities are independent; with ``threads > 1`` they are evaluated in a
    thread pool and reassembled in grid order, so the result does not depend
    on the thread count.
    """
    require_valid(section)
    if spec.window is not None:
        _crop(section, spec.window)  # validate bounds up front

    def one(v: float) -> SweepEntry:
        migrated = migrate_constant_v(section, MigrationParams(v, **mig_kwargs))
        return score_image(migrated, v, spec.tau, spec.window)

    vs = spec.velocities()
    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            entries = list(pool.map(one, vs))
    else:
        entries = [one(v) for v in vs]
    return SweepResult(tuple(entries), argmin_velocity(entries), spec.tau)


@dataclass(frozen=True)
class ThresholdEntry:
    tau: float
    betti: BettiPair
    active_pixels: int


def threshold_sweep(section: Section, v: float, taus, window=None, **mig_kwargs) -> list[ThresholdEntry]:
    """Migrate once at ``v`` and score the image at each threshold."""
    taus = [float(t) for t in taus]
    for t in taus:
        if not 0 < t < 1:
            raise TopologyError(f"tau must lie in (0, 1), got {t}")
    migrated = _crop(
        migrate_constant_v(section, MigrationParams(as_velocity(v), **mig_kwargs)), window
    )
    out = []
    for t in taus:
        img, pair = score(migrated, t)
        out.append(ThresholdEntry(t, pair, img.active))
    return out


def binarized(section: Section, v: float, tau: float, **mig_kwargs):
    """Binary image scored by the sweep at ``v`` (for plotting and debugging)."""
    return binarize(migrate_constant_v(section, MigrationParams(v, **mig_kwargs)), tau)
