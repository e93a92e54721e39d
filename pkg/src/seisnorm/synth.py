"""Zero-offset point-diffractor synthetics.

Each diffractor at ``(x_d, z_d)`` in a constant-velocity medium produces a
hyperbolic event at two-way time ``(2/v) * sqrt(z_d**2 + (x - x_d)**2)``.
The wavelet is a Ricker evaluated analytically at the (fractional) arrival
time, so events are not snapped to the sample grid.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .grid import GridError, Section, Trace


@dataclass(frozen=True)
class Diffractor:
    x: float  # lateral position, m
    z: float  # depth, m
    amp: float = 1.0


@dataclass(frozen=True)
class DiffractorModel:
    diffractors: tuple[Diffractor, ...]
    v_true: float = 1500.0
    wavelet_peak_freq: float = 20.0
    spreading: bool = False  # scale events by t_apex / t

    def __post_init__(self):
        object.__setattr__(self, "diffractors", tuple(self.diffractors))

    def check(self, nt: int, nx: int, dt: float, dx: float) -> None:
        if not self.v_true > 0:
            raise GridError(f"v_true must be > 0, got {self.v_true}")
        nyquist = 1.0 / (2.0 * dt)
        if not 0 < self.wavelet_peak_freq < nyquist:
            raise GridError(
                f"peak frequency {self.wavelet_peak_freq} Hz outside (0, {nyquist}) Hz"
            )
        xmax = (nx - 1) * dx
        for d in self.diffractors:
            if not d.z > 0:
                raise GridError(f"diffractor depth must be > 0, got {d.z}")
            if not 0 <= d.x <= xmax:
                raise GridError(f"diffractor x={d.x} outside [0, {xmax}] m")


def ricker_at(t, peak_freq: float) -> np.ndarray:
    a = (np.pi * peak_freq * np.asarray(t, dtype=np.float64)) ** 2
    return (1.0 - 2.0 * a) * np.exp(-a)


def ricker(peak_freq: float, dt: float, half_len: int) -> Trace:
    """Ricker wavelet sampled at ``k*dt`` for ``k = -half_len .. half_len``.

    The returned trace has ``2*half_len + 1`` samples with the peak (exactly
    1.0) in the middle.
    """
    if not 0 < peak_freq < 1.0 / (2.0 * dt):
        raise GridError(f"peak frequency {peak_freq} Hz at or above Nyquist for dt={dt}")
    if half_len < 0:
        raise GridError("half_len must be >= 0")
    t = dt * np.arange(-half_len, half_len + 1)
    return Trace(ricker_at(t, peak_freq), dt)


def arrival_time(d: Diffractor, x, v: float):
    return 2.0 / v * np.sqrt(d.z**2 + (np.asarray(x, dtype=np.float64) - d.x) ** 2)


def diffraction_response(
    model: DiffractorModel, nt: int, nx: int, dt: float, dx: float, t0: float = 0.0
) -> Section:
    """Sum of the hyperbolic responses of every diffractor in ``model``.

    Arrivals later than the trace end are simply absent (the wavelet is
    evaluated on the grid only, so late events are clipped silently).
    """
    model.check(nt, nx, dt, dx)
    t = t0 + dt * np.arange(nt)[:, None]
    x = dx * np.arange(nx)[None, :]
    out = np.zeros((nt, nx))
    for d in model.diffractors:
        tx = arrival_time(d, x, model.v_true)
        w = ricker_at(t - tx, model.wavelet_peak_freq)
        if model.spreading:
            w = w * (2.0 * d.z / model.v_true) / tx
        out += d.amp * w
    return Section(out, dt, dx, t0)


# Desk-scale reconstruction of the three-diffractor dataset.  Positions are
# chosen so that the three hyperbolas cross one another inside the grid.
DEMO_NT = 512
DEMO_NX = 256
DEMO_DT = 0.004
DEMO_DX = 10.0
DEMO_V = 1500.0
DEMO_PEAK_FREQ = 20.0
DEMO_DIFFRACTORS = (
    Diffractor(900.0, 400.0, 1.0),
    Diffractor(1280.0, 650.0, 1.0),
    Diffractor(1650.0, 500.0, 1.0),
)


def three_diffractor_demo() -> tuple[DiffractorModel, Section]:
    model = DiffractorModel(DEMO_DIFFRACTORS, DEMO_V, DEMO_PEAK_FREQ)
    return model, diffraction_response(model, DEMO_NT, DEMO_NX, DEMO_DT, DEMO_DX)


def apex_indices(model: DiffractorModel, dt: float, dx: float, t0: float = 0.0):
    """(row, col) of each diffractor apex on the sampling grid."""
    return [
        (int(round((2.0 * d.z / model.v_true - t0) / dt)), int(round(d.x / dx)))
        for d in model.diffractors
    ]
