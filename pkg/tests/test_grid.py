import numpy as np
import pytest
from hypothesis import given, strategies as st

from seisnorm.grid import (
    GridError, Section, Trace, Velocity, as_velocity, max_abs, require_valid, rms, validate,
)


def test_section_shape_and_axes():
    s = Section(np.zeros((4, 3)), dt=0.002, dx=12.5, t0=0.1)
    assert (s.nt, s.nx) == (4, 3)
    assert np.allclose(s.times, [0.1, 0.102, 0.104, 0.106])
    assert np.allclose(s.offsets, [0, 12.5, 25])
    assert validate(s) == []


def test_samples_are_read_only_copies():
    a = np.ones((2, 2))
    s = Section(a, 0.004, 10.0)
    a[0, 0] = 5.0
    assert s.samples[0, 0] == 1.0
    with pytest.raises(ValueError):
        s.samples[0, 0] = 2.0


def test_validate_reports_each_nonfinite_sample():
    a = np.zeros((3, 3))
    a[1, 2] = np.nan
    a[2, 0] = np.inf
    issues = validate(Section(a, 0.004, 10.0))
    assert [i.index for i in issues] == [(1, 2), (2, 0)]
    with pytest.raises(GridError, match="non-finite"):
        require_valid(Section(a, 0.004, 10.0))


@pytest.mark.parametrize("dt,dx,t0,code", [(0.0, 1.0, 0.0, "dt"), (0.004, -1.0, 0.0, "dx"),
                                           (0.004, 1.0, -0.1, "t0"), (np.nan, 1.0, 0.0, "dt")])
def test_validate_sampling(dt, dx, t0, code):
    issues = validate(Section(np.zeros((2, 2)), dt, dx, t0))
    assert [i.code for i in issues] == [code]


def test_window_shifts_time_origin():
    s = Section(np.arange(20.0).reshape(5, 4), 0.01, 1.0)
    w = s.window((2, 4), (1, 3))
    assert w.samples.tolist() == [[9.0, 10.0], [13.0, 14.0]]
    assert w.t0 == pytest.approx(0.02)
    with pytest.raises(GridError):
        s.window((0, 6), (0, 1))
    with pytest.raises(GridError):
        s.window((2, 2), (0, 1))


def test_with_samples_checks_shape():
    s = Section(np.zeros((3, 2)), 0.004, 10.0)
    with pytest.raises(GridError):
        s.with_samples(np.zeros((2, 3)))


def test_trace_view():
    s = Section(np.arange(6.0).reshape(3, 2), 0.004, 10.0)
    t = s.trace(1)
    assert isinstance(t, Trace) and t.samples.tolist() == [1.0, 3.0, 5.0]


@pytest.mark.parametrize("v", [0.0, -3.0, np.inf, np.nan])
def test_velocity_rejects(v):
    with pytest.raises(GridError):
        Velocity(v)


def test_as_velocity():
    assert as_velocity(Velocity(1500)) == 1500.0
    assert as_velocity(2000) == 2000.0


@given(st.floats(-1e3, 1e3, allow_nan=False), st.integers(1, 6), st.integers(1, 6))
def test_scaling_laws(c, nt, nx):
    a = np.linspace(-1.0, 1.0, nt * nx).reshape(nt, nx)
    s = Section(a, 0.004, 10.0)
    assert max_abs(s.scaled(c)) == pytest.approx(abs(c) * max_abs(s))
    assert rms(s.scaled(c)) == pytest.approx(abs(c) * rms(s))
