"""Constant-velocity zero-offset time migration in the f-k domain (Stolt).

For exploding-reflector velocity ``ve = v/2`` the migrated spectrum at
vertical frequency ``w_tau`` is read from the data spectrum at

    w = sqrt(w_tau**2 + (ve * kx)**2)

and scaled by the Jacobian ``w_tau / w``.  Applying the map at ``v1`` and
then at ``v2`` reads the data at ``sqrt(w_tau**2 + (v1**2 + v2**2) kx**2 / 4)``,
i.e. one migration at ``sqrt(v1**2 + v2**2)``; the Jacobians telescope.  So
migration operators form a one-parameter semigroup indexed by ``v**2``, and
``A = g(v0**2)`` applied ``k`` times equals one migration at ``v0 * sqrt(k)``.
This cascade is used as the semigroup migration; :func:`cascade_check`
measures how closely the discrete operators honour it.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import i0

from .grid import GridError, Section, as_velocity, require_valid

SINC_TAPS = 8
_KAISER_BETA = 6.0


class MigrationError(GridError):
    pass


@dataclass(frozen=True)
class MigrationParams:
    v: float
    pad_t: float = 2.0
    pad_x: float = 2.0
    interp: str = "sinc"  # "sinc" (8-point windowed) or "linear"

    def __post_init__(self):
        object.__setattr__(self, "v", as_velocity(self.v))
        if self.pad_t < 1 or self.pad_x < 1:
            raise MigrationError(f"padding factors must be >= 1, got {self.pad_t}, {self.pad_x}")
        if self.interp not in ("sinc", "linear"):
            raise MigrationError(f"unknown interpolation {self.interp!r}")


@dataclass(frozen=True)
class PanelSequence:
    base_v: float
    panels: tuple[Section, ...]

    @property
    def count(self) -> int:
        return len(self.panels)

    def velocity(self, k: int) -> float:
        return effective_velocity(self.base_v, k)


def _kaiser(u: np.ndarray) -> np.ndarray:
    arg = np.sqrt(np.clip(1.0 - u**2, 0.0, None))
    return np.where(np.abs(u) <= 1.0, i0(_KAISER_BETA * arg) / i0(_KAISER_BETA), 0.0)


_HALF = SINC_TAPS // 2
_OFFSETS = np.arange(-_HALF + 1, _HALF + 1)  # -3 .. 4
_TABLE_BINS = 4096


def _weight_table() -> np.ndarray:
    frac = np.linspace(0.0, 1.0, _TABLE_BINS + 1)
    d = frac[:, None] - _OFFSETS
    w = np.sinc(d) * _kaiser(d / _HALF)
    return w / w.sum(axis=1, keepdims=True)


_WEIGHTS = _weight_table()


def _sinc_weights(frac: np.ndarray) -> np.ndarray:
    """Kaiser-windowed sinc weights at offsets ``_OFFSETS`` for each fractional
    position, read from a table with linear interpolation between bins."""
    pos = frac * _TABLE_BINS
    i = np.minimum(pos.astype(np.int64), _TABLE_BINS - 1)
    a = (pos - i)[..., None]
    return _WEIGHTS[i] * (1.0 - a) + _WEIGHTS[i + 1] * a


def _interp_columns(spec: np.ndarray, pos: np.ndarray, method: str) -> np.ndarray:
    """Evaluate each column of ``spec`` (indexed by frequency sample) at
    fractional sample positions ``pos`` (same shape as ``spec``).

    Columns are in ``np.fft`` wavenumber order.  Negative frequencies come
    from Hermitian symmetry of the real section, ``S(-w, kx) = conj(S(w, -kx))``;
    positions past the last sample read zeros.
    """
    nf, ncol = spec.shape
    guard = SINC_TAPS
    ext = np.zeros((nf + 2 * guard, ncol), dtype=complex)
    ext[guard : guard + nf] = spec
    mirror = (-np.arange(ncol)) % ncol  # column of -kx
    ext[guard - np.arange(1, guard + 1)] = np.conj(spec[1 : guard + 1][:, mirror])
    base = np.floor(pos).astype(np.int64)
    frac = pos - base
    cols = np.arange(ncol)[None, :]
    out = np.zeros_like(spec)
    if method == "linear":
        idx = np.clip(base + guard, 0, nf + 2 * guard - 2)
        return ext[idx, cols] * (1.0 - frac) + ext[idx + 1, cols] * frac
    w = _sinc_weights(frac)
    for m, off in enumerate(_OFFSETS):
        idx = np.clip(base + off + guard, 0, nf + 2 * guard - 1)
        out += ext[idx, cols] * w[..., m]
    return out


def _padded_size(n: int, factor: float) -> int:
    return int(math.ceil(n * factor))


def migrate_constant_v(section: Section, params: MigrationParams | float) -> Section:
    """Stolt time migration of ``section`` at constant velocity.

    The output has the input's grid; padding is cropped.  The operator is
    linear in the amplitudes and deterministic.
    """
    if not isinstance(params, MigrationParams):
        params = MigrationParams(params)
    require_valid(section)
    nt, nx, dt, dx = section.nt, section.nx, section.dt, section.dx
    ntp = _padded_size(nt, params.pad_t)
    nxp = _padded_size(nx, params.pad_x)
    nf = ntp // 2 + 1
    if nf < SINC_TAPS or nxp < 2:
        raise MigrationError(
            f"section {nt}x{nx} too small: padded size {ntp}x{nxp} gives {nf} "
            f"frequencies, need at least {SINC_TAPS} and 2 padded traces"
        )

    buf = np.zeros((ntp, nxp))
    buf[:nt, :nx] = section.samples
    spec = np.fft.fft(np.fft.rfft(buf, axis=0), axis=1)

    w = 2.0 * np.pi * np.fft.rfftfreq(ntp, dt)
    kx = 2.0 * np.pi * np.fft.fftfreq(nxp, dx)
    dw = w[1]
    # Shift the time origin to the middle of the data so the spectrum
    # varies slowly along w; undone after interpolation.
    centre = 0.5 * (nt - 1) * dt
    spec *= np.exp(1j * w * centre)[:, None]

    ve = 0.5 * params.v
    w_src = np.sqrt(w[:, None] ** 2 + (ve * kx[None, :]) ** 2)
    mapped = _interp_columns(spec, w_src / dw, params.interp)
    with np.errstate(invalid="ignore", divide="ignore"):
        jac = np.where(w_src > 0, w[:, None] / w_src, 1.0)
    mapped *= jac * np.exp(-1j * w_src * (centre + section.t0))
    mapped *= np.exp(1j * w * section.t0)[:, None]
    mapped[w_src > w[-1]] = 0.0

    out = np.fft.irfft(np.fft.ifft(mapped, axis=1), n=ntp, axis=0)
    return section.with_samples(out[:nt, :nx])


def effective_velocity(base_v: float, k: int) -> float:
    """Velocity of a single migration equal to ``k`` cascaded ones at ``base_v``."""
    return as_velocity(base_v) * math.sqrt(k)


def semigroup_panels(
    section: Section, base_v: float, n_panels: int, **mig_kwargs
) -> PanelSequence:
    """Panels ``A^0 u .. A^(n-1) u`` with ``A`` the migration at ``base_v``.

    Panel ``k`` is computed as a single migration at ``base_v * sqrt(k)``.
    """
    base_v = as_velocity(base_v)
    if n_panels < 1:
        raise MigrationError(f"n_panels must be >= 1, got {n_panels}")
    require_valid(section)
    panels = [section]
    for k in range(1, n_panels):
        panels.append(
            migrate_constant_v(
                section, MigrationParams(effective_velocity(base_v, k), **mig_kwargs)
            )
        )
    return PanelSequence(base_v, tuple(panels))


def cascade_check(section: Section, v1: float, v2: float, **mig_kwargs) -> float:
    """Relative L2 gap between migrating at ``v1`` then ``v2`` and migrating
    once at ``sqrt(v1**2 + v2**2)``."""
    v1, v2 = as_velocity(v1), as_velocity(v2)
    if v1 < 1.0 or v2 < 1.0:
        raise MigrationError("cascade velocities below 1 m/s are not meaningful")
    twice = migrate_constant_v(
        migrate_constant_v(section, MigrationParams(v1, **mig_kwargs)),
        MigrationParams(v2, **mig_kwargs),
    )
    once = migrate_constant_v(section, MigrationParams(math.hypot(v1, v2), **mig_kwargs))
    ref = np.linalg.norm(once.samples)
    if ref == 0.0:
        raise MigrationError("reference migration has zero energy")
    return float(np.linalg.norm(twice.samples - once.samples) / ref)
