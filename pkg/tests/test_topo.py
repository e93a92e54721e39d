import itertools

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from oracles import gf2_dense_rank
from seisnorm.grid import Section
from seisnorm.topo import (
    BettiPair, BinaryImage, TopologyError, betti, betti_oracle, binarize, cubical_counts, score,
)


def image(rows):
    return BinaryImage(np.array(rows, dtype=bool))


def test_all_3x3_images():
    for bits in itertools.product([0, 1], repeat=9):
        img = image(np.reshape(bits, (3, 3)))
        pair = betti(img)
        assert pair == betti_oracle(img), bits
        assert pair.b0 - pair.b1 == cubical_counts(img).euler


def test_random_8x8(rng):
    for _ in range(500):
        img = BinaryImage(rng.random((8, 8)) < rng.uniform(0.2, 0.8))
        assert betti(img) == betti_oracle(img)


@given(arrays(bool, st.tuples(st.integers(1, 12), st.integers(1, 12))))
def test_betti_matches_oracle(bits):
    img = BinaryImage(bits)
    assert betti(img) == betti_oracle(img)


def test_ring():
    ring = np.ones((3, 3), dtype=bool)
    ring[1, 1] = False
    img = BinaryImage(ring)
    c = cubical_counts(img)
    assert (c.v, c.e, c.f) == (16, 24, 8)
    assert betti(img) == BettiPair(1, 1)


def test_isolated_pixel_and_empty():
    assert betti(image([[0, 0, 0], [0, 1, 0], [0, 0, 0]])) == BettiPair(1, 0)
    assert betti(image([[0, 0], [0, 0]])) == BettiPair(0, 0)


def test_diagonal_pixels_connect():
    # 8-connectivity: corner-sharing pixels form one component
    assert betti(image([[1, 0], [0, 1]])) == BettiPair(1, 0)
    # the diamond encloses its centre only through corners: one loop
    assert betti(image([[0, 1, 0], [1, 0, 1], [0, 1, 0]])) == BettiPair(1, 1)


def test_boundary_ranks_independently():
    # B0/B1 for the ring from dense GF(2) elimination of explicit boundary matrices
    ring = np.ones((3, 3), dtype=bool)
    ring[1, 1] = False
    verts, edges, faces = {}, {}, []
    for i, j in zip(*np.nonzero(ring)):
        corners = [(i, j), (i, j + 1), (i + 1, j + 1), (i + 1, j)]
        face = []
        for a, b in zip(corners, corners[1:] + corners[:1]):
            for p in (a, b):
                verts.setdefault(p, len(verts))
            face.append(edges.setdefault(tuple(sorted((a, b))), len(edges)))
        faces.append(face)
    d1 = np.zeros((len(verts), len(edges)), dtype=int)
    for (a, b), k in edges.items():
        d1[verts[a], k] = d1[verts[b], k] = 1
    d2 = np.zeros((len(edges), len(faces)), dtype=int)
    for f, face in enumerate(faces):
        d2[face, f] = 1
    r1, r2 = gf2_dense_rank(d1), gf2_dense_rank(d2)
    assert (len(verts) - r1, len(edges) - r1 - r2) == (1, 1)
    assert betti_oracle(BinaryImage(ring)) == BettiPair(1, 1)


def test_binarize():
    s = Section(np.array([[1.0, -0.5], [0.05, 0.0]]), 0.004, 10.0)
    img = binarize(s, 0.1)
    assert img.bits.tolist() == [[True, True], [False, False]]
    assert img.threshold_used == pytest.approx(0.1)
    with pytest.raises(TopologyError):
        binarize(s, 1.0)
    with pytest.raises(TopologyError):
        binarize(s.scaled(0.0), 0.1)


def test_oracle_size_cap():
    with pytest.raises(TopologyError):
        betti_oracle(BinaryImage(np.zeros((65, 65), dtype=bool)))


def test_score_asserts_euler(demo_section):
    img, pair = score(demo_section, 0.1)
    assert pair.b0 - pair.b1 == cubical_counts(img).euler
    assert img.active > 0
