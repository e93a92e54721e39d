"""L2 diffusion-semigroup denoising on a patch graph.

Pixels are graph nodes described by the ``patch x patch`` neighbourhood
around them.  Affinities ``W_ij = exp(-|p_i - p_j|^2 / eps)`` are normalised
row-wise into a Markov matrix ``M``; its powers ``M^t`` form the diffusion
semigroup.  Eigenpairs come from the symmetric conjugate
``S = D^-1/2 W D^-1/2``: if ``S phi = lam phi`` then ``psi = D^-1/2 phi`` is a
right eigenvector of ``M`` and the ``psi`` are orthonormal under the
degree-weighted inner product.

Denoising keeps the top ``r`` eigen-components of the amplitude field, each
damped by ``lam**t``.  With every component kept this is exactly ``M^t f``,
which is evaluated by sparse mat-vecs instead of an eigendecomposition.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
import scipy.linalg as sla
from scipy import sparse
from scipy.sparse.linalg import eigsh

from .grid import GridError, Section, require_valid

DENSE_MAX_NODES = 512
DENSE_EIG_MAX_NODES = 4096
SEMIGROUP_CHECK_MAX_NODES = 512


class DiffusionError(GridError):
    pass


@dataclass(frozen=True)
class DiffusionParams:
    patch: int = 5
    epsilon: float = 1.0  # bandwidth as a fraction of the median squared distance
    t: int = 2
    r: int | None = None  # None keeps every eigen-component
    max_points: int = 4096
    knn: int = 32

    def __post_init__(self):
        if self.patch < 3 or self.patch % 2 == 0:
            raise DiffusionError(f"patch must be odd and >= 3, got {self.patch}")
        if not self.epsilon > 0:
            raise DiffusionError(f"epsilon must be > 0, got {self.epsilon}")
        if self.t < 0 or int(self.t) != self.t:
            raise DiffusionError(f"t must be a non-negative integer, got {self.t}")
        if self.r is not None and self.r < 1:
            raise DiffusionError(f"r must be >= 1, got {self.r}")
        if self.max_points < 1 or self.knn < 1:
            raise DiffusionError("max_points and knn must be >= 1")


@dataclass(frozen=True)
class DiffusionOperator:
    """Row-stochastic patch-affinity operator over a set of grid nodes."""

    nodes: np.ndarray = field(repr=False)  # (n, 2) row/col of each node
    markov: sparse.csr_matrix = field(repr=False)
    degrees: np.ndarray = field(repr=False)
    symmetric: sparse.csr_matrix = field(repr=False)
    r: int | None = None
    bandwidth: float = 0.0

    @property
    def n_nodes(self) -> int:
        return self.markov.shape[0]

    @property
    def rank(self) -> int:
        return self.n_nodes if self.r is None else min(self.r, self.n_nodes)

    @cached_property
    def _eigen(self) -> tuple[np.ndarray, np.ndarray]:
        n, k = self.n_nodes, self.rank
        if n <= DENSE_EIG_MAX_NODES:
            vals, vecs = sla.eigh(self.symmetric.toarray(), subset_by_index=[n - k, n - 1])
        else:
            vals, vecs = eigsh(self.symmetric, k=k, which="LA")
        order = np.argsort(vals, kind="stable")[::-1]
        vals, vecs = vals[order], vecs[:, order]
        psi = vecs / np.sqrt(self.degrees)[:, None]
        # Sign convention: the largest-magnitude entry of each vector is positive.
        flip = np.sign(psi[np.abs(psi).argmax(axis=0), np.arange(k)])
        flip[flip == 0] = 1.0
        return vals, psi * flip

    @property
    def eigenvalues(self) -> np.ndarray:
        return self._eigen[0]

    @property
    def eigenfunctions(self) -> np.ndarray:
        """Right eigenvectors of ``markov``, orthonormal under the degree weights."""
        return self._eigen[1]

    def power(self, f: np.ndarray, t: int) -> np.ndarray:
        for _ in range(t):
            f = self.markov @ f
        return f

    def project(self, f: np.ndarray, t: int) -> np.ndarray:
        """Top-``r`` spectral reconstruction of node values ``f`` damped by ``lam**t``."""
        f = np.asarray(f, dtype=np.float64)
        if self.r is None or self.r >= self.n_nodes:
            return self.power(f, t)
        psi = self.eigenfunctions
        coef = psi.T @ (self.degrees * f)
        return psi @ (self.eigenvalues**t * coef)


def extract_patches(samples: np.ndarray, patch: int) -> np.ndarray:
    """``(nt, nx, patch*patch)`` array of reflect-padded neighbourhoods."""
    h = patch // 2
    padded = np.pad(samples, h, mode="reflect" if min(samples.shape) > h else "edge")
    win = np.lib.stride_tricks.sliding_window_view(padded, (patch, patch))
    return win.reshape(samples.shape[0], samples.shape[1], patch * patch)


def _sq_dists(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    d = (a * a).sum(1)[:, None] + (b * b).sum(1)[None, :] - 2.0 * a @ b.T
    return np.maximum(d, 0.0)


def node_grid(nt: int, nx: int, max_points: int) -> np.ndarray:
    """Deterministic stride subsample of an ``nt x nx`` grid to <= max_points."""
    stride = max(1, int(np.ceil(np.sqrt(nt * nx / max_points))))
    while len(range(0, nt, stride)) * len(range(0, nx, stride)) > max_points:
        stride += 1
    rr, cc = np.meshgrid(np.arange(0, nt, stride), np.arange(0, nx, stride), indexing="ij")
    return np.column_stack([rr.ravel(), cc.ravel()])


def operator_from_features(
    features: np.ndarray, params: DiffusionParams, nodes: np.ndarray | None = None
) -> DiffusionOperator:
    """Markov operator on the rows of ``features`` (one patch vector per node).

    Up to ``DENSE_MAX_NODES`` nodes the kernel is dense; above that each row
    keeps its ``knn`` nearest neighbours and the result is symmetrised.
    """
    x = np.asarray(features, dtype=np.float64)
    n = x.shape[0]
    if n < 2:
        raise DiffusionError("need at least two nodes")
    d2 = _sq_dists(x, x)
    np.fill_diagonal(d2, 0.0)  # the expanded form leaves round-off on the diagonal
    if n <= DENSE_MAX_NODES:
        nonzero = d2[d2 > 0]
        if nonzero.size == 0:
            raise DiffusionError("all patches identical; kernel bandwidth is zero")
        eps = params.epsilon * float(np.median(nonzero))
        w = sparse.csr_matrix(np.exp(-d2 / eps))
    else:
        k = min(params.knn + 1, n)
        idx = np.argpartition(d2, k - 1, axis=1)[:, :k]
        nd = np.take_along_axis(d2, idx, axis=1)
        nonzero = nd[nd > 0]
        if nonzero.size == 0:
            raise DiffusionError("all patches identical; kernel bandwidth is zero")
        eps = params.epsilon * float(np.median(nonzero))
        w = sparse.csr_matrix(
            (np.exp(-nd / eps).ravel(), (np.repeat(np.arange(n), k), idx.ravel())),
            shape=(n, n),
        )
        w = w.maximum(w.T).tocsr()
    deg = np.asarray(w.sum(axis=1)).ravel()
    inv_sqrt = sparse.diags(1.0 / np.sqrt(deg))
    if nodes is None:
        nodes = np.column_stack([np.arange(n), np.zeros(n, dtype=int)])
    return DiffusionOperator(
        nodes=np.asarray(nodes),
        markov=(sparse.diags(1.0 / deg) @ w).tocsr(),
        degrees=deg,
        symmetric=(inv_sqrt @ w @ inv_sqrt).tocsr(),
        r=params.r,
        bandwidth=eps,
    )


def build_operator(section: Section, params: DiffusionParams = DiffusionParams()) -> DiffusionOperator:
    require_valid(section)
    if min(section.nt, section.nx) < params.patch // 2 + 1:
        raise DiffusionError(
            f"section {section.nt}x{section.nx} too small for patch {params.patch}"
        )
    patches = extract_patches(section.samples, params.patch)
    nodes = node_grid(section.nt, section.nx, params.max_points)
    return operator_from_features(patches[nodes[:, 0], nodes[:, 1]], params, nodes)


def _tiles(nt: int, nx: int, max_points: int):
    side_t = min(nt, max(1, int(np.sqrt(max_points))))
    side_x = min(nx, max(1, max_points // side_t))
    for r0 in range(0, nt, side_t):
        for c0 in range(0, nx, side_x):
            yield slice(r0, min(nt, r0 + side_t)), slice(c0, min(nx, c0 + side_x))


def diffuse_denoise(section: Section, params: DiffusionParams = DiffusionParams()) -> Section:
    """Diffusion-semigroup denoising of ``section``.

    The grid is cut into tiles of at most ``max_points`` pixels; every pixel
    of a tile is a node of that tile's operator, and patches are taken from
    the whole section so tiles see across their borders.  A tile whose
    patches are all identical is a fixed point and passes through unchanged.
    """
    require_valid(section)
    if min(section.nt, section.nx) < params.patch // 2 + 1:
        raise DiffusionError(
            f"section {section.nt}x{section.nx} too small for patch {params.patch}"
        )
    patches = extract_patches(section.samples, params.patch)
    out = np.array(section.samples)
    for rs, cs in _tiles(section.nt, section.nx, params.max_points):
        feats = patches[rs, cs].reshape(-1, patches.shape[-1])
        vals = section.samples[rs, cs]
        if vals.size < 2 or np.all(feats == feats[0]):
            continue
        op = operator_from_features(feats, params)
        out[rs, cs] = op.project(vals.ravel(), params.t).reshape(vals.shape)
    return section.with_samples(out)


def semigroup_check(op: DiffusionOperator, s: int, t: int) -> float:
    """Max-norm of ``M^s M^t - M^(s+t)`` computed with dense matrices."""
    if s < 0 or t < 0:
        raise DiffusionError("step counts must be >= 0")
    if op.n_nodes > SEMIGROUP_CHECK_MAX_NODES:
        raise DiffusionError(
            f"dense semigroup check limited to {SEMIGROUP_CHECK_MAX_NODES} nodes, "
            f"operator has {op.n_nodes}"
        )
    m = op.markov.toarray()
    mp = np.linalg.matrix_power
    return float(np.max(np.abs(mp(m, s) @ mp(m, t) - mp(m, s + t))))
