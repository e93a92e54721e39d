"""Regularly sampled 2D seismic grids and per-trace views.

A :class:`Section` stores amplitudes as a float64 array of shape ``(nt, nx)``:
rows are time samples, columns are traces.  Every other module in the
package consumes and produces sections.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np


class GridError(ValueError):
    """Raised when a section or trace violates its invariants."""


@dataclass(frozen=True)
class Issue:
    code: str
    message: str
    index: tuple[int, ...] | None = None


def _frozen_array(values, ndim: int) -> np.ndarray:
    arr = np.array(values, dtype=np.float64, copy=True)
    if arr.ndim != ndim:
        raise GridError(f"expected a {ndim}-D array, got shape {arr.shape}")
    arr.setflags(write=False)
    return arr


@dataclass(frozen=True)
class Section:
    """Zero-offset section sampled at ``t0 + k*dt`` and ``j*dx``."""

    samples: np.ndarray = field(repr=False)
    dt: float
    dx: float
    t0: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "samples", _frozen_array(self.samples, 2))

    @property
    def nt(self) -> int:
        return self.samples.shape[0]

    @property
    def nx(self) -> int:
        return self.samples.shape[1]

    @property
    def times(self) -> np.ndarray:
        return self.t0 + self.dt * np.arange(self.nt)

    @property
    def offsets(self) -> np.ndarray:
        return self.dx * np.arange(self.nx)

    def trace(self, j: int) -> Trace:
        return Trace(self.samples[:, j], self.dt)

    def with_samples(self, samples) -> Section:
        """Same sampling metadata, new amplitudes (shape must match)."""
        samples = np.asarray(samples, dtype=np.float64)
        if samples.shape != self.samples.shape:
            raise GridError(
                f"shape {samples.shape} does not match section {self.samples.shape}"
            )
        return replace(self, samples=samples)

    def scaled(self, c: float) -> Section:
        return self.with_samples(c * self.samples)

    def window(self, rows: tuple[int, int], cols: tuple[int, int]) -> Section:
        """Sub-rectangle ``[r0, r1) x [c0, c1)`` with a shifted time origin."""
        r0, r1 = rows
        c0, c1 = cols
        if not (0 <= r0 < r1 <= self.nt and 0 <= c0 < c1 <= self.nx):
            raise GridError(
                f"window rows={rows} cols={cols} outside {self.nt}x{self.nx} grid"
            )
        return Section(
            self.samples[r0:r1, c0:c1], self.dt, self.dx, self.t0 + r0 * self.dt
        )


@dataclass(frozen=True)
class Trace:
    samples: np.ndarray = field(repr=False)
    dt: float

    def __post_init__(self):
        object.__setattr__(self, "samples", _frozen_array(self.samples, 1))

    @property
    def nt(self) -> int:
        return self.samples.shape[0]


@dataclass(frozen=True)
class Velocity:
    v: float

    def __post_init__(self):
        if not (np.isfinite(self.v) and self.v > 0):
            raise GridError(f"velocity must be finite and > 0, got {self.v}")

    def __float__(self) -> float:
        return float(self.v)


def as_velocity(v) -> float:
    """Accept a :class:`Velocity` or a plain number; return m/s as float."""
    return float(v) if isinstance(v, Velocity) else float(Velocity(float(v)))


def _sampling_issues(dt, dx=None, t0=None) -> list[Issue]:
    issues = []
    if not (np.isfinite(dt) and dt > 0):
        issues.append(Issue("dt", f"dt must be finite and > 0, got {dt}"))
    if dx is not None and not (np.isfinite(dx) and dx > 0):
        issues.append(Issue("dx", f"dx must be finite and > 0, got {dx}"))
    if t0 is not None and not (np.isfinite(t0) and t0 >= 0):
        issues.append(Issue("t0", f"t0 must be finite and >= 0, got {t0}"))
    return issues


def _finiteness_issues(samples: np.ndarray) -> list[Issue]:
    bad = np.argwhere(~np.isfinite(samples))
    return [
        Issue("nonfinite", f"non-finite sample {samples[tuple(i)]} at {tuple(i)}",
              tuple(int(k) for k in i))
        for i in bad
    ]


def validate(section: Section) -> list[Issue]:
    """Every invariant violation of ``section``; empty iff it is valid."""
    issues = _sampling_issues(section.dt, section.dx, section.t0)
    nt, nx = section.samples.shape
    if nt < 1 or nx < 1:
        issues.append(Issue("size", f"need nt >= 1 and nx >= 1, got {nt}x{nx}"))
    return issues + _finiteness_issues(section.samples)


def validate_trace(trace: Trace) -> list[Issue]:
    issues = _sampling_issues(trace.dt)
    if trace.nt < 1:
        issues.append(Issue("size", "trace has no samples"))
    return issues + _finiteness_issues(trace.samples)


def require_valid(obj: Section | Trace) -> None:
    issues = validate(obj) if isinstance(obj, Section) else validate_trace(obj)
    if issues:
        shown = "; ".join(i.message for i in issues[:5])
        more = f" (+{len(issues) - 5} more)" if len(issues) > 5 else ""
        raise GridError(f"invalid {type(obj).__name__.lower()}: {shown}{more}")


def max_abs(section: Section) -> float:
    return float(np.max(np.abs(section.samples)))


def rms(section: Section) -> float:
    return float(np.sqrt(np.mean(section.samples**2)))
