"""Complete d-ary tree indexing.

Nodes are numbered in breadth-first (level) order: the root is 0 and the
children of node i are d*i + 1, ..., d*i + d.  Under this numbering every
level of every subtree occupies a contiguous index range, which the
eigenvector constructors exploit.  Everything here is exact integer
arithmetic; no floating point.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass

import numpy as np

# Refuse trees whose node count would not fit in a signed 64-bit index space.
_MAX_NODES = 2**62


@dataclass(frozen=True)
class TreeGeometry:
    """Shape of a complete d-ary tree of height h.

    ``level_offsets[l]`` is the index of the first node on level ``l``; the
    nodes of level ``l`` are ``range(level_offsets[l], level_offsets[l+1])``
    (with ``n`` acting as the final fence).
    """

    d: int
    h: int
    n: int
    level_offsets: tuple[int, ...]

    def level(self, i: int) -> int:
        """Distance from the root of node ``i``."""
        if not 0 <= i < self.n:
            raise ValueError(f"node {i} out of range for n={self.n}")
        return bisect_right(self.level_offsets, i) - 1

    def parent(self, i: int) -> int:
        if not 1 <= i < self.n:
            raise ValueError(f"node {i} has no parent (n={self.n})")
        return (i - 1) // self.d

    def children(self, i: int) -> range:
        """Children of node ``i`` (empty range for a leaf)."""
        if not 0 <= i < self.n:
            raise ValueError(f"node {i} out of range for n={self.n}")
        if self.is_leaf(i):
            return range(0)
        return range(self.d * i + 1, self.d * i + self.d + 1)

    def is_leaf(self, i: int) -> bool:
        return i >= self.level_offsets[self.h]

    def degree(self, i: int) -> int:
        """Graph degree of node ``i`` (root: d, leaf: 1, inner: d + 1)."""
        if i == 0:
            return self.d
        if self.is_leaf(i):
            return 1
        return self.d + 1

    def level_slice(self, l: int) -> tuple[int, int]:
        """Half-open index range of level ``l``."""
        if not 0 <= l <= self.h:
            raise ValueError(f"level {l} out of range for h={self.h}")
        lo = self.level_offsets[l]
        hi = self.level_offsets[l + 1] if l < self.h else self.n
        return lo, hi


@dataclass(frozen=True)
class EdgeList:
    """All parent-child edges, ordered by child index (edge i <-> child i+1)."""

    edges: tuple[tuple[int, int], ...]

    def __len__(self) -> int:
        return len(self.edges)

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        """(parents, children) as int64 arrays, in edge order."""
        parents = np.fromiter((u for u, _ in self.edges), dtype=np.int64,
                              count=len(self.edges))
        children = np.fromiter((v for _, v in self.edges), dtype=np.int64,
                               count=len(self.edges))
        return parents, children


def build_tree(d: int, h: int) -> TreeGeometry:
    """Geometry of the complete d-ary tree with d >= 2 and height h >= 1."""
    if not isinstance(d, int) or isinstance(d, bool) or d < 2:
        raise ValueError(f"branching factor must be an integer >= 2, got {d!r}")
    if not isinstance(h, int) or isinstance(h, bool) or h < 1:
        raise ValueError(f"height must be an integer >= 1, got {h!r}")

    offsets = []
    n = 0
    width = 1
    for _ in range(h + 1):
        offsets.append(n)
        n += width
        if n > _MAX_NODES:
            raise ValueError(
                f"tree with d={d}, h={h} exceeds the supported size "
                f"({_MAX_NODES} nodes)")
        width *= d
    return TreeGeometry(d=d, h=h, n=n, level_offsets=tuple(offsets))


def node_count(d: int, h: int) -> int:
    """Number of nodes, (d**(h+1) - 1) // (d - 1), with the same validation."""
    return build_tree(d, h).n


def subtree_level_slice(g: TreeGeometry, v: int, depth_below: int) -> tuple[int, int]:
    """Half-open index range of the descendants of ``v`` at a given depth.

    ``depth_below = 0`` yields ``(v, v + 1)``; each extra unit of depth moves
    to the next level of the subtree rooted at ``v``.  The range is
    contiguous because of the breadth-first numbering.
    """
    if not 0 <= v < g.n:
        raise ValueError(f"node {v} out of range for n={g.n}")
    if not 0 <= depth_below <= g.h - g.level(v):
        raise ValueError(
            f"depth_below={depth_below} out of range for node {v} at level "
            f"{g.level(v)} (h={g.h})")
    lo = hi = v
    for _ in range(depth_below):
        lo = g.d * lo + 1
        hi = g.d * hi + g.d
    return lo, hi + 1


def edge_list(g: TreeGeometry) -> EdgeList:
    """Parent-child edges ordered by child index."""
    return EdgeList(edges=tuple((( (c - 1) // g.d ), c) for c in range(1, g.n)))
