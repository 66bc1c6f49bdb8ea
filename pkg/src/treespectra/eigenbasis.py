"""Explicit eigenvectors of the lazy walk on a complete d-ary tree.

Every eigenvector is a lift of a one-dimensional *level profile*
y_0, y_1, ... that satisfies the three-term recurrence

    y_{i+1} = ((d+1) lam y_i - y_{i-1}) / d

with a family-dependent start and a leaf-end closure:

* symmetric profiles (length h+1, lifted to level-constant vectors) start
  y_0 = 1, y_1 = ((d+1) lam - 1)/d;
* antisymmetric profiles (length k+1, lifted to a +/- pair of sibling
  subtrees) start y_0 = 1, y_1 = (d+1) lam / d.

Each profile also has a closed form A x^i + B / (d^i x^i) in the spectral
parameter x; the constructors generate values by the recurrence (the
normative route), then verify the terminal equation and the closed form.
Lifted vectors are exact eigenvectors of the walk matrix, and together
they form a (non-orthogonal) basis of R^n.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .chains import walk_matvec
from .spectrum import SpectrumTable, full_spectrum, x_from_lambda
from .tree import TreeGeometry, subtree_level_slice

_PROFILE_KINDS = ("symmetric", "antisymmetric")
_RECORD_FAMILIES = ("all_ones", "symmetric", "antisymmetric")
# Closed-form coefficients blow up as d x^2 -> 1 (a parameter regime no
# valid eigenvalue reaches); skip the cross-check inside this moat.
_COEFF_POLE_WIDTH = 1e-6


@dataclass(frozen=True)
class LevelProfile:
    """Values of one eigenvector along the levels of its carrying chain.

    ``values[i]`` is the (real) entry on level i; ``coefficients`` are the
    (A, B) of the closed form A x^i + B/(d^i x^i), or None when x sits too
    close to the pole d x^2 = 1 for the closed form to be evaluable.
    """

    d: int
    lam: float
    kind: str
    values: np.ndarray
    x: complex
    coefficients: tuple[complex, complex] | None
    terminal_residual: float
    closed_form_gap: float | None

    def __post_init__(self) -> None:
        if self.kind not in _PROFILE_KINDS:
            raise ValueError(f"unknown profile kind {self.kind!r}")


def profile_coefficients(d: int, x: complex,
                         kind: str) -> tuple[complex, complex] | None:
    """Closed-form coefficients (A, B) with y_i = A x^i + B/(d^i x^i)."""
    pole = d * x * x - 1.0
    if abs(pole) < _COEFF_POLE_WIDTH:
        return None
    if kind == "symmetric":
        return (d * x * x - x) / pole, (x - 1.0) / pole
    if kind == "antisymmetric":
        return d * x * x / pole, -1.0 / pole
    raise ValueError(f"unknown profile kind {kind!r}")


def _recurrence(d: int, lam: float, y0: float, y1: float,
                length: int) -> np.ndarray:
    values = np.empty(length)
    values[0] = y0
    if length > 1:
        values[1] = y1
    for i in range(1, length - 1):
        values[i + 1] = ((d + 1) * lam * values[i] - values[i - 1]) / d
    return values


def _closed_form_gap(d: int, x: complex,
                     coeffs: tuple[complex, complex] | None,
                     values: np.ndarray) -> float | None:
    if coeffs is None:
        return None
    a, b = coeffs
    gap = 0.0
    xi = complex(1.0)       # x^i
    dxi = complex(1.0)      # (d x)^i
    for i in range(values.shape[0]):
        yi = a * xi + b / dxi
        gap = max(gap, abs(yi - values[i]))
        xi *= x
        dxi *= d * x
    return gap


def _finish_profile(d: int, lam: float, kind: str, values: np.ndarray,
                    x: complex, terminal_residual: float) -> LevelProfile:
    scale = max(1.0, float(np.max(np.abs(values))))
    if terminal_residual > tol.EIGEN_RESIDUAL * scale:
        raise AssertionError(
            f"{kind} profile for lam={lam!r} (d={d}) violates its terminal "
            f"equation: residual {terminal_residual:.3e}")
    coeffs = profile_coefficients(d, x, kind)
    gap = _closed_form_gap(d, x, coeffs, values)
    if gap is not None and gap > tol.CLOSED_FORM_AGREEMENT * scale:
        raise AssertionError(
            f"{kind} profile for lam={lam!r} (d={d}) disagrees with its "
            f"closed form by {gap:.3e}")
    return LevelProfile(d=d, lam=lam, kind=kind, values=values, x=x,
                        coefficients=coeffs, terminal_residual=terminal_residual,
                        closed_form_gap=gap)


def symmetric_profile(d: int, h: int, lam: float,
                      x: complex | None = None) -> LevelProfile:
    """Level profile of a level-constant eigenvector (length h+1).

    The start encodes the root equation (with its 1/(d+1) holding mass);
    the leaf equation (1/(d+1)) y_{h-1} + (d/(d+1)) y_h = lam y_h is
    verified, not imposed, so only true eigenvalues get through.
    """
    if x is None:
        x = x_from_lambda(d, lam)[0]
    values = _recurrence(d, lam, 1.0, ((d + 1) * lam - 1.0) / d, h + 1)
    residual = abs(values[h - 1] / (d + 1) + values[h] * d / (d + 1)
                   - lam * values[h])
    return _finish_profile(d, lam, "symmetric", values, x, residual)


def antisymmetric_profile(d: int, k: int, lam: float,
                          x: complex | None = None) -> LevelProfile:
    """Level profile of a sibling-subtree eigenvector (length k+1).

    The start encodes the leaky top equation (no holding mass at level 0).
    For k = 0 the profile is the single value 1 and the terminal equation
    degenerates to |d/(d+1) - lam|.
    """
    if x is None:
        x = x_from_lambda(d, lam)[0]
    if k == 0:
        values = np.array([1.0])
        residual = abs(d / (d + 1) - lam)
    else:
        values = _recurrence(d, lam, 1.0, (d + 1) * lam / d, k + 1)
        residual = abs(values[k - 1] / (d + 1) + values[k] * d / (d + 1)
                       - lam * values[k])
    return _finish_profile(d, lam, "antisymmetric", values, x, residual)


# ---------------------------------------------------------------------------
# lifting profiles to eigenvectors on the tree
# ---------------------------------------------------------------------------

def lift_level_constant(g: TreeGeometry, profile: LevelProfile) -> np.ndarray:
    """n-vector taking value ``profile.values[l]`` on every level-l node."""
    if profile.values.shape[0] != g.h + 1:
        raise ValueError(
            f"profile of length {profile.values.shape[0]} does not span "
            f"h+1 = {g.h + 1} levels")
    out = np.empty(g.n)
    for l in range(g.h + 1):
        lo, hi = g.level_slice(l)
        out[lo:hi] = profile.values[l]
    return out


def lift_sibling_pair(g: TreeGeometry, profile: LevelProfile, anchor: int,
                      child: int) -> np.ndarray:
    """n-vector carrying the profile on two sibling subtrees below ``anchor``.

    ``child`` is 1-based: the subtree under the child-th child of the
    anchor gets +values, the one under child+1 gets -values, everything
    else (including the anchor) is 0.  The anchor must sit at level
    h - 1 - k so the subtrees have exactly k+1 levels.
    """
    k = profile.values.shape[0] - 1
    if g.level(anchor) != g.h - 1 - k:
        raise ValueError(
            f"anchor {anchor} at level {g.level(anchor)} cannot carry a "
            f"depth-{k} profile (need level {g.h - 1 - k})")
    if not 1 <= child <= g.d - 1:
        raise ValueError(f"child pair index must be in 1..{g.d - 1}, "
                         f"got {child}")
    out = np.zeros(g.n)
    plus = g.d * anchor + child
    minus = plus + 1
    for i in range(k + 1):
        lo, hi = subtree_level_slice(g, plus, i)
        out[lo:hi] = profile.values[i]
        lo, hi = subtree_level_slice(g, minus, i)
        out[lo:hi] = -profile.values[i]
    return out


@dataclass(frozen=True)
class EigenvectorRecord:
    """One basis vector: its eigenvalue, provenance, and dense values."""

    lam: float
    family: str
    index: int
    anchor: int | None
    child: int | None
    profile: LevelProfile
    values: np.ndarray

    def __post_init__(self) -> None:
        if self.family not in _RECORD_FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")


@dataclass(frozen=True)
class EigenBasis:
    """All n eigenvectors of one tree, in a deterministic order.

    Order: the all-ones vector, the h level-constant vectors by ascending
    profile index, then the sibling-pair vectors by (depth k, ascending
    eigenvalue, anchor node, child pair).
    """

    g: TreeGeometry
    table: SpectrumTable
    records: tuple[EigenvectorRecord, ...]

    def matrix(self) -> np.ndarray:
        """n x n array whose columns are the basis vectors."""
        return np.column_stack([r.values for r in self.records])

    def rank(self, pivot_tol: float = tol.RANK_PIVOT) -> int:
        """Numerical rank via full-pivot elimination.

        Columns are normalised to unit max-abs first, so the pivot
        threshold means the same thing for every vector.
        """
        m = self.matrix()
        peaks = np.max(np.abs(m), axis=0)
        return full_pivot_rank(m / peaks[None, :], pivot_tol)


def build_full_basis(g: TreeGeometry) -> EigenBasis:
    """Construct all n eigenvectors (dense; refused for very large trees)."""
    if g.n > tol.ORACLE_MAX_N:
        raise ValueError(
            f"dense basis for n={g.n} refused (limit {tol.ORACLE_MAX_N}); "
            "use the lift functions for single vectors")
    table = full_spectrum(g.d, g.h)
    records: list[EigenvectorRecord] = []

    trivial = next(l for l in table.lines if l.family == "trivial")
    prof = symmetric_profile(g.d, g.h, trivial.lam, trivial.x)
    records.append(EigenvectorRecord(
        lam=trivial.lam, family="all_ones", index=0, anchor=None, child=None,
        profile=prof, values=lift_level_constant(g, prof)))

    symmetric = sorted((l for l in table.lines if l.family == "symmetric"),
                       key=lambda l: l.index)
    for line in symmetric:
        prof = symmetric_profile(g.d, g.h, line.lam, line.x)
        records.append(EigenvectorRecord(
            lam=line.lam, family="symmetric", index=line.index, anchor=None,
            child=None, profile=prof, values=lift_level_constant(g, prof)))

    for k in range(g.h):
        block = sorted((l for l in table.lines
                        if l.family == "antisymmetric" and l.index == k),
                       key=lambda l: l.lam)
        lo, hi = g.level_slice(g.h - 1 - k)
        for line in block:
            prof = antisymmetric_profile(g.d, k, line.lam, line.x)
            for anchor in range(lo, hi):
                for child in range(1, g.d):
                    records.append(EigenvectorRecord(
                        lam=line.lam, family="antisymmetric", index=k,
                        anchor=anchor, child=child, profile=prof,
                        values=lift_sibling_pair(g, prof, anchor, child)))

    if len(records) != g.n:
        raise AssertionError(
            f"basis has {len(records)} vectors for n={g.n} (d={g.d}, h={g.h})")
    return EigenBasis(g=g, table=table, records=tuple(records))


# ---------------------------------------------------------------------------
# structural checks
# ---------------------------------------------------------------------------

def walk_residual(g: TreeGeometry, vec: np.ndarray, lam: float) -> float:
    """max |Q v - lam v| relative to max |v|, without forming Q."""
    peak = float(np.max(np.abs(vec)))
    if peak == 0.0:
        raise ValueError("cannot measure the residual of the zero vector")
    r = walk_matvec(g, vec) - lam * vec
    return float(np.max(np.abs(r))) / peak


def verify_eigenpair(g: TreeGeometry, record: EigenvectorRecord) -> float:
    """Relative residual of a stored eigenpair against the walk matrix."""
    if record.values.shape != (g.n,):
        raise ValueError(
            f"vector of shape {record.values.shape} does not fit n={g.n}")
    return walk_residual(g, record.values, record.lam)


def level_constancy_defect(g: TreeGeometry, vec: np.ndarray) -> float:
    """Largest within-level spread, scaled by max(1, max |v|)."""
    worst = 0.0
    for l in range(g.h + 1):
        lo, hi = g.level_slice(l)
        worst = max(worst, float(np.max(vec[lo:hi]) - np.min(vec[lo:hi])))
    return worst / max(1.0, float(np.max(np.abs(vec))))


def level_sum_defect(g: TreeGeometry, vec: np.ndarray) -> float:
    """Largest |sum over a level|, scaled by max(1, max |v|)."""
    worst = 0.0
    for l in range(g.h + 1):
        lo, hi = g.level_slice(l)
        worst = max(worst, abs(float(np.sum(vec[lo:hi]))))
    return worst / max(1.0, float(np.max(np.abs(vec))))


def is_completely_symmetric(g: TreeGeometry, vec: np.ndarray,
                            tolerance: float = tol.LEVEL_CONSTANT) -> bool:
    """True when the vector is constant on every level of the tree."""
    return level_constancy_defect(g, vec) <= tolerance


def is_energy_preserving(g: TreeGeometry, vec: np.ndarray,
                         tolerance: float = tol.LEVEL_SUM) -> bool:
    """True when the vector sums to zero on every level of the tree."""
    return level_sum_defect(g, vec) <= tolerance


def full_pivot_rank(m: np.ndarray, pivot_tol: float = tol.RANK_PIVOT) -> int:
    """Rank by Gaussian elimination with full pivoting."""
    a = np.array(m, dtype=float)
    nr, nc = a.shape
    scale = max(1.0, float(np.max(np.abs(a))))
    rank = 0
    for step in range(min(nr, nc)):
        sub = np.abs(a[step:, step:])
        i, j = np.unravel_index(int(np.argmax(sub)), sub.shape)
        if sub[i, j] <= pivot_tol * scale:
            break
        i += step
        j += step
        if i != step:
            a[[step, i], :] = a[[i, step], :]
        if j != step:
            a[:, [step, j]] = a[:, [j, step]]
        rank += 1
        if step + 1 < nr:
            factor = a[step + 1:, step] / a[step, step]
            a[step + 1:, step:] -= factor[:, None] * a[step, step:]
    return rank
