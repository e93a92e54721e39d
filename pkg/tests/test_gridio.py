import logging
import struct

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from oracles import float_to_ibm, ibm_to_float
from segy_fixture import segy_bytes
from seisnorm.grid import GridError, Section
from seisnorm.gridio import (
    BadMagicError, GridFileError, NonFiniteError, TruncatedError, UnsupportedFormatError,
    VersionError, decode_grid, encode_grid, ibm_to_ieee, import_segy_minimal, read_grid,
    write_grid,
)


def sample_section(rng, nt=7, nx=3):
    return Section(rng.normal(size=(nt, nx)), 0.002, 12.5, 0.1)


def test_header_layout(rng):
    data = encode_grid(sample_section(rng))
    assert data[:4] == b"SGRD"
    assert struct.unpack_from("<HIIddd", data, 4) == (1, 7, 3, 0.002, 12.5, 0.1)
    assert len(data) == 38 + 7 * 3 * 4


def test_trace_major_order():
    s = Section(np.array([[1.0, 2.0], [3.0, 4.0]]), 0.004, 10.0)
    assert np.frombuffer(encode_grid(s)[38:], "<f4").tolist() == [1.0, 3.0, 2.0, 4.0]


def test_round_trip_file(tmp_path, rng):
    s = sample_section(rng)
    write_grid(s, tmp_path / "a.sgrd")
    back = read_grid(tmp_path / "a.sgrd")
    assert np.array_equal(back.samples, s.samples.astype(np.float32).astype(np.float64))
    assert (back.dt, back.dx, back.t0) == (s.dt, s.dx, s.t0)
    # second trip is bit-exact
    assert encode_grid(back) == encode_grid(s)


@given(arrays(np.float32, st.tuples(st.integers(1, 9), st.integers(1, 9)),
              elements=st.floats(width=32, allow_nan=False, allow_infinity=False)))
def test_round_trip_exact_at_f32(a):
    s = Section(a.astype(np.float64), 0.004, 10.0)
    assert np.array_equal(decode_grid(encode_grid(s)).samples, a.astype(np.float64))


def test_errors(rng):
    good = encode_grid(sample_section(rng))
    with pytest.raises(BadMagicError):
        decode_grid(b"XGRD" + good[4:])
    with pytest.raises(VersionError):
        decode_grid(good[:4] + struct.pack("<H", 2) + good[6:])
    with pytest.raises(TruncatedError):
        decode_grid(good[:-4])
    with pytest.raises(TruncatedError):
        decode_grid(good[:20])
    with pytest.raises(GridFileError):
        decode_grid(good + b"\0")
    bad = bytearray(good)
    bad[38:42] = np.array([np.nan], "<f4").tobytes()
    with pytest.raises(NonFiniteError):
        decode_grid(bytes(bad))


def test_error_names_file(tmp_path):
    p = tmp_path / "broken.sgrd"
    p.write_bytes(b"XGRD" + bytes(40))
    with pytest.raises(BadMagicError, match="broken.sgrd"):
        read_grid(p)


def test_refuses_to_write_overflow():
    with pytest.raises(NonFiniteError):
        encode_grid(Section(np.array([[1e300]]), 0.004, 10.0))
    with pytest.raises(GridError):
        encode_grid(Section(np.array([[np.nan]]), 0.004, 10.0))


def test_ibm_known_word():
    assert ibm_to_ieee(np.array([0x42640000], dtype=np.uint32))[0] == 100.0
    assert ibm_to_float(0x42640000) == 100.0
    assert ibm_to_float(0xC2640000) == -100.0
    assert ibm_to_float(0x41100000) == 1.0


@given(st.integers(0, 2**32 - 1))
def test_ibm_vectorised_matches_definition(word):
    assert ibm_to_ieee(np.array([word], dtype=np.uint32))[0] == ibm_to_float(word)


@given(st.floats(-1e20, 1e20).filter(lambda x: x == 0 or abs(x) > 1e-20))
def test_ibm_encoder_round_trip(x):
    back = ibm_to_float(float_to_ibm(x))
    assert abs(back - x) <= abs(x) * 2.0**-20


@pytest.mark.parametrize("fmt", [1, 5])
def test_segy_round_trip(tmp_path, rng, fmt):
    s = Section(rng.normal(size=(50, 6)), 0.002, 12.5)
    path = tmp_path / f"f{fmt}.sgy"
    path.write_bytes(segy_bytes(s.samples, s.dt, dx=12.5, fmt=fmt))
    got = import_segy_minimal(path)
    assert got.dt == pytest.approx(0.002) and got.dx == pytest.approx(12.5)
    tol = 0.0 if fmt == 5 else 2.0**-20 * np.abs(s.samples).max()
    ref = s.samples.astype(np.float32).astype(np.float64) if fmt == 5 else s.samples
    assert np.max(np.abs(got.samples - ref)) <= tol


def test_segy_extended_headers(tmp_path, rng):
    a = rng.normal(size=(10, 2))
    path = tmp_path / "ext.sgy"
    path.write_bytes(segy_bytes(a, 0.004, dx=10.0, n_ext=2))
    assert np.allclose(import_segy_minimal(path).samples, a, atol=1e-6)


def test_segy_missing_coordinates_warns(tmp_path, caplog):
    path = tmp_path / "nocoord.sgy"
    path.write_bytes(segy_bytes(np.ones((5, 3)), 0.004))
    with caplog.at_level(logging.WARNING):
        assert import_segy_minimal(path).dx == 1.0
    assert "dx = 1.0" in caplog.text


def test_segy_errors(tmp_path):
    p = tmp_path / "x.sgy"
    p.write_bytes(segy_bytes(np.ones((5, 2)), 0.004, fmt=3))
    with pytest.raises(UnsupportedFormatError, match="code 3"):
        import_segy_minimal(p)
    p.write_bytes(segy_bytes(np.ones((5, 2)), 0.004, ns_override=[5, 4]))
    with pytest.raises(GridFileError, match="varying"):
        import_segy_minimal(p)
    p.write_bytes(segy_bytes(np.ones((5, 2)), 0.004)[:-3])
    with pytest.raises(TruncatedError):
        import_segy_minimal(p)
    p.write_bytes(b"short")
    with pytest.raises(TruncatedError):
        import_segy_minimal(p)
