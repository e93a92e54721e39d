"""Betti numbers of binarized sections.

Each active pixel is a closed unit square; the image is the union of those
squares (a cubical complex).  Two pixels touching only at a corner share a
vertex and are therefore connected, so components use 8-adjacency.  B1 follows
from the Euler characteristic ``V - E + F = B0 - B1`` (B2 is zero for planar
subcomplexes).

:func:`betti_oracle` recomputes both numbers from GF(2) boundary-matrix ranks
and shares no code with :func:`betti`.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy import ndimage

from .grid import GridError, Section, max_abs, require_valid

ORACLE_MAX_PIXELS = 4096
_EIGHT = np.ones((3, 3), dtype=bool)


class TopologyError(GridError):
    pass


@dataclass(frozen=True)
class BinaryImage:
    bits: np.ndarray = field(repr=False)
    threshold_used: float = 0.0

    def __post_init__(self):
        bits = np.array(self.bits, dtype=bool)
        if bits.ndim != 2:
            raise TopologyError(f"binary image must be 2-D, got shape {bits.shape}")
        bits.setflags(write=False)
        object.__setattr__(self, "bits", bits)

    @property
    def rows(self) -> int:
        return self.bits.shape[0]

    @property
    def cols(self) -> int:
        return self.bits.shape[1]

    @property
    def active(self) -> int:
        return int(self.bits.sum())


@dataclass(frozen=True)
class CubicalCounts:
    v: int
    e: int
    f: int

    @property
    def euler(self) -> int:
        return self.v - self.e + self.f


@dataclass(frozen=True)
class BettiPair:
    b0: int
    b1: int


def binarize(section: Section, tau: float) -> BinaryImage:
    """Active where ``|amplitude| >= tau * max_abs(section)``."""
    if not 0.0 < tau < 1.0:
        raise TopologyError(f"tau must lie in (0, 1), got {tau}")
    require_valid(section)
    peak = max_abs(section)
    if peak == 0.0:
        raise TopologyError("cannot binarize an all-zero section: threshold undefined")
    cut = tau * peak
    return BinaryImage(np.abs(section.samples) >= cut, cut)


def cubical_counts(img: BinaryImage) -> CubicalCounts:
    b = img.bits
    p = np.pad(b, 1)
    # Vertex (i, j) is the corner shared by pixels (i-1..i, j-1..j).
    verts = p[:-1, :-1] | p[:-1, 1:] | p[1:, :-1] | p[1:, 1:]
    # Horizontal edge between vertices (i, j)-(i, j+1) borders pixels (i-1, j), (i, j).
    h_edges = p[:-1, 1:-1] | p[1:, 1:-1]
    v_edges = p[1:-1, :-1] | p[1:-1, 1:]
    return CubicalCounts(
        int(verts.sum()), int(h_edges.sum() + v_edges.sum()), int(b.sum())
    )


def betti(img: BinaryImage) -> BettiPair:
    _, b0 = ndimage.label(img.bits, structure=_EIGHT)
    b1 = b0 - cubical_counts(img).euler
    if b1 < 0:
        raise AssertionError(f"negative B1 ({b1}); Euler identity broken")
    return BettiPair(int(b0), int(b1))


def _gf2_rank(rows: list[int]) -> int:
    """Rank over GF(2) of a matrix given as integer bitmasks (one per row)."""
    pivots: dict[int, int] = {}
    rank = 0
    for r in rows:
        while r:
            top = r.bit_length() - 1
            if top in pivots:
                r ^= pivots[top]
            else:
                pivots[top] = r
                rank += 1
                break
    return rank


def betti_oracle(img: BinaryImage) -> BettiPair:
    """B0, B1 from boundary-matrix ranks over GF(2); desk-scale only."""
    if img.rows * img.cols > ORACLE_MAX_PIXELS:
        raise TopologyError(
            f"oracle limited to {ORACLE_MAX_PIXELS} pixels, got {img.rows}x{img.cols}"
        )
    vert_id: dict[tuple, int] = {}
    edge_id: dict[tuple, int] = {}

    def vid(p):
        return vert_id.setdefault(p, len(vert_id))

    def eid(a, b):
        key = (min(a, b), max(a, b))
        if key not in edge_id:
            edge_id[key] = len(edge_id)
            vid(a), vid(b)
        return edge_id[key]

    faces = []
    for i, j in zip(*np.nonzero(img.bits)):
        i, j = int(i), int(j)
        c = [(i, j), (i, j + 1), (i + 1, j + 1), (i + 1, j)]
        mask = 0
        for a, b in zip(c, c[1:] + c[:1]):
            mask |= 1 << eid(a, b)
        faces.append(mask)

    d1 = [(1 << vert_id[a]) | (1 << vert_id[b]) for a, b in edge_id]
    r1 = _gf2_rank(d1)
    r2 = _gf2_rank(faces)
    return BettiPair(len(vert_id) - r1, len(edge_id) - r1 - r2)


def score(section: Section, tau: float) -> tuple[BinaryImage, BettiPair]:
    """Binarize then count, checking the Euler identity in line."""
    img = binarize(section, tau)
    pair = betti(img)
    assert pair.b0 - pair.b1 == cubical_counts(img).euler
    return img, pair
