"""Transition matrices for the lazy walk on a complete d-ary tree.

Four builders:

* :func:`walk_matrix` — the full n-by-n one-step matrix of the lazy simple
  random walk on the tree (symmetric, doubly stochastic up to the uniform
  weighting).
* :func:`level_chain` — the (h+1)-state projection of that walk onto
  distance-from-root, a birth-death chain.
* :func:`leaky_level_chain` — the depth-(k+1) level chain with the mass at
  the top removed, governing the antisymmetric part of the spectrum.
* :func:`single_card_matrix` — the one-step matrix of a single labelled card
  under the interchange (random adjacent-on-the-tree transposition) process.

Birth-death chains are reduced to symmetric tridiagonal form by the usual
similarity transform with the square roots of the stationary weights, which
leaves the spectrum unchanged.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .tree import TreeGeometry


@dataclass(frozen=True)
class ChainMatrix:
    """A small dense transition matrix with its stationary weights.

    ``entries`` has rows summing to 1 (or less, when ``substochastic``);
    ``stationary_weights`` are unnormalised reversing weights: w_i P_ij =
    w_j P_ji holds entrywise.
    """

    entries: np.ndarray
    stationary_weights: np.ndarray
    substochastic: bool = False

    def __post_init__(self) -> None:
        p = self.entries
        if p.ndim != 2 or p.shape[0] != p.shape[1]:
            raise ValueError(f"transition matrix must be square, got {p.shape}")
        if np.any(p < 0):
            raise ValueError("transition matrix has a negative entry")
        rowsum = p.sum(axis=1)
        if self.substochastic:
            if np.any(rowsum > 1 + 1e-12):
                raise ValueError("substochastic matrix has a row sum above 1")
        elif not np.allclose(rowsum, 1.0, rtol=0, atol=1e-12):
            raise ValueError("stochastic matrix has a row sum away from 1")

    @property
    def size(self) -> int:
        return self.entries.shape[0]

    def detailed_balance_defect(self) -> float:
        """max_ij |w_i P_ij - w_j P_ji|, scaled by the largest flow."""
        w = self.stationary_weights
        flow = w[:, None] * self.entries
        scale = max(1.0, float(np.max(np.abs(flow))))
        return float(np.max(np.abs(flow - flow.T))) / scale

    def symmetrized(self) -> "SymmetricTridiagonal":
        """Similarity transform D^{1/2} P D^{-1/2} for a tridiagonal chain.

        Requires the chain to be tridiagonal (birth-death); the result has
        the same eigenvalues with an orthogonal eigenbasis.
        """
        p = self.entries
        m = self.size
        for i in range(m):
            for j in range(m):
                if abs(i - j) > 1 and p[i, j] != 0.0:
                    raise ValueError(
                        "symmetrized() needs a tridiagonal chain; entry "
                        f"({i}, {j}) = {p[i, j]} is nonzero")
        diag = np.diag(p).copy()
        off = np.array([math.sqrt(p[i, i + 1] * p[i + 1, i])
                        for i in range(m - 1)])
        return SymmetricTridiagonal(diagonal=diag, offdiagonal=off)


@dataclass(frozen=True)
class SymmetricTridiagonal:
    """Symmetric tridiagonal matrix stored as its two bands."""

    diagonal: np.ndarray
    offdiagonal: np.ndarray

    def __post_init__(self) -> None:
        if self.offdiagonal.shape[0] != self.diagonal.shape[0] - 1:
            raise ValueError(
                f"offdiagonal length {self.offdiagonal.shape[0]} does not fit "
                f"diagonal length {self.diagonal.shape[0]}")

    @property
    def size(self) -> int:
        return self.diagonal.shape[0]

    def to_dense(self) -> np.ndarray:
        m = self.size
        a = np.zeros((m, m))
        a[np.arange(m), np.arange(m)] = self.diagonal
        idx = np.arange(m - 1)
        a[idx, idx + 1] = self.offdiagonal
        a[idx + 1, idx] = self.offdiagonal
        return a


def walk_matrix(g: TreeGeometry) -> ChainMatrix:
    """One-step matrix of the lazy simple random walk on the tree.

    Every row moves to each neighbour with probability 1/(d+1) and holds
    the remaining mass: the root holds 1/(d+1), a leaf holds d/(d+1),
    inner nodes hold nothing.  The matrix is symmetric, so the uniform
    measure (all-ones weights) is stationary.
    """
    d, n = g.d, g.n
    if n > tol.ORACLE_MAX_N:
        raise ValueError(
            f"dense walk matrix for n={n} refused (limit {tol.ORACLE_MAX_N}); "
            "use walk_matvec for large trees")
    step = 1.0 / (d + 1)
    q = np.zeros((n, n))
    for i in range(n):
        hold = (d + 1 - g.degree(i)) * step
        q[i, i] = hold
        if i > 0:
            q[i, (i - 1) // d] = step
        for c in g.children(i):
            q[i, c] = step
    return ChainMatrix(entries=q, stationary_weights=np.ones(n))


def walk_matvec(g: TreeGeometry, vec: np.ndarray) -> np.ndarray:
    """Apply the lazy walk matrix to a vector in O(n) without forming it."""
    d, n = g.d, g.n
    if vec.shape != (n,):
        raise ValueError(f"vector of shape {vec.shape} does not fit n={n}")
    step = 1.0 / (d + 1)
    first_leaf = g.level_offsets[g.h]
    # children of i are d*i+1 .. d*i+d; accumulate one child offset at a time
    child_sum = np.zeros(n)
    idx = np.arange(0, first_leaf, dtype=np.int64)
    for j in range(1, d + 1):
        child_sum[idx] += vec[d * idx + j]
    parent_val = np.zeros(n)
    parent_val[1:] = vec[(np.arange(1, n, dtype=np.int64) - 1) // d]
    degree = np.full(n, d + 1, dtype=np.int64)
    degree[0] = d
    degree[first_leaf:] = 1
    hold = (d + 1 - degree) * step
    out = hold * vec + step * (child_sum + parent_val)
    return out


def level_chain(d: int, h: int) -> ChainMatrix:
    """Projection of the lazy walk onto distance-from-root.

    States 0..h; from level 0 the walk holds with probability 1/(d+1) and
    descends with probability d/(d+1); interior levels ascend with 1/(d+1)
    and descend with d/(d+1); level h holds with d/(d+1) and ascends with
    1/(d+1).  Stationary weights are the level sizes 1, d, ..., d**h.
    """
    _check_dh(d, h)
    m = h + 1
    up = 1.0 / (d + 1)
    down = d / (d + 1)
    p = np.zeros((m, m))
    p[0, 0] = up
    p[0, 1] = down
    for l in range(1, h):
        p[l, l - 1] = up
        p[l, l + 1] = down
    p[h, h - 1] = up
    p[h, h] = down
    weights = np.array([float(d) ** l for l in range(m)])
    return ChainMatrix(entries=p, stationary_weights=weights)


def leaky_level_chain(d: int, k: int) -> ChainMatrix:
    """Level chain on k+1 states with the upward mass at state 0 deleted.

    Identical to ``level_chain(d, k)`` except that the (0, 0) hold
    probability is removed, so row 0 sums to d/(d+1): the chain "leaks" out
    of the top.  For k = 0 the single state holds with d/(d+1) (the bottom
    rule wins).  Its eigenvalues are the antisymmetric part of the walk
    spectrum.
    """
    _check_dh(d, k + 1)  # k >= 0, d >= 2
    m = k + 1
    up = 1.0 / (d + 1)
    down = d / (d + 1)
    p = np.zeros((m, m))
    if k == 0:
        p[0, 0] = down
    else:
        p[0, 1] = down
        for l in range(1, k):
            p[l, l - 1] = up
            p[l, l + 1] = down
        p[k, k - 1] = up
        p[k, k] = down
    weights = np.array([float(d) ** l for l in range(m)])
    return ChainMatrix(entries=p, stationary_weights=weights, substochastic=True)


def single_card_matrix(g: TreeGeometry) -> ChainMatrix:
    """One-step matrix of a single labelled card under edge transpositions.

    Each of the n-1 tree edges is picked with probability 1/(n-1) and its
    endpoints swap with probability 1/2, so a card at v crosses each
    incident edge with probability 1/(2(n-1)).  Equals the affine map
    ((2n-d-3) I + (d+1) Q) / (2(n-1)) of the lazy-walk matrix Q, and is
    again symmetric with uniform stationary weights.
    """
    d, n = g.d, g.n
    if n > tol.ORACLE_MAX_N:
        raise ValueError(
            f"dense single-card matrix for n={n} refused "
            f"(limit {tol.ORACLE_MAX_N})")
    cross = 1.0 / (2 * (n - 1))
    p = np.zeros((n, n))
    for i in range(n):
        p[i, i] = 1.0 - g.degree(i) * cross
        if i > 0:
            p[i, (i - 1) // d] = cross
        for c in g.children(i):
            p[i, c] = cross
    return ChainMatrix(entries=p, stationary_weights=np.ones(n))


def _check_dh(d: int, h: int) -> None:
    if not isinstance(d, int) or isinstance(d, bool) or d < 2:
        raise ValueError(f"branching factor must be an integer >= 2, got {d!r}")
    if not isinstance(h, int) or isinstance(h, bool) or h < 1:
        raise ValueError(f"height must be an integer >= 1, got {h!r}")
