"""Brute-force dense eigensolver used to validate the analytic spectrum.

This is a deliberately self-contained cyclic Jacobi diagonaliser — it does
not call any library eigensolver, so agreement with the analytic formulas
is evidence for both.  It is O(n^3) per sweep and refuses matrices past a
size cap; the analytic route stays the scalable one.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .kernels import jacobi_sweep
from .spectrum import SpectrumTable

_MAX_SWEEPS = 50
# Sweeps that rotate only entries above a shrinking magnitude threshold;
# afterwards every entry is rotated except those already negligible against
# both diagonal neighbours, which are zeroed directly (rotating those just
# recycles roundoff and stalls the tail of convergence).
_EARLY_SWEEPS = 4


@dataclass(frozen=True)
class DenseEigenDecomposition:
    """Eigenvalues (ascending) and matching orthonormal eigenvector columns."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray
    sweeps: int
    offdiag_norm: float
    residual: float


def dense_eigensolve_symmetric(m: np.ndarray,
                               max_sweeps: int = _MAX_SWEEPS
                               ) -> DenseEigenDecomposition:
    """Diagonalise a symmetric matrix by cyclic Jacobi rotations.

    Sweeps the strict upper triangle in row-major order until the
    off-diagonal Frobenius mass falls below 1e-14 of the input Frobenius
    norm (or a sweep applies no rotations).  Early sweeps rotate only
    entries above a shrinking magnitude threshold; later sweeps rotate
    everything except entries already negligible against both diagonal
    neighbours, which are zeroed in place — without that rule, clustered
    eigenvalues keep full-angle rotations firing on eps-size entries
    forever and the off-diagonal mass plateaus above the target.  The
    returned decomposition is checked against the original matrix:
    max |M V - V diag(w)| must not exceed the per-size residual budget.
    """
    a = np.array(m, dtype=float, order="C")
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"need a square matrix, got shape {a.shape}")
    n = a.shape[0]
    if n > tol.ORACLE_MAX_N:
        raise ValueError(f"dense oracle refused n={n} "
                         f"(limit {tol.ORACLE_MAX_N})")
    scale = max(1.0, float(np.max(np.abs(a))))
    asym = float(np.max(np.abs(a - a.T)))
    if asym > tol.ORACLE_SYMMETRY * scale:
        raise ValueError(f"matrix is not symmetric: max |A - A^T| = {asym:g}")
    original = a.copy()
    a = (a + a.T) * 0.5  # exact when already symmetric

    frob = float(np.sqrt(np.sum(a * a)))
    v = np.eye(n)
    sweeps = 0
    off = frob
    for sweep_index in range(1, max_sweeps + 1):
        if sweep_index <= _EARLY_SWEEPS:
            off_abs = float(np.sum(np.abs(a)) - np.sum(np.abs(np.diag(a))))
            thresh = 0.2 * off_abs / (n * n)
        else:
            thresh = 0.0
        rotations = jacobi_sweep(a, v, thresh, sweep_index > _EARLY_SWEEPS)
        sweeps = sweep_index
        hollow = a.copy()
        np.fill_diagonal(hollow, 0.0)
        off = float(np.sqrt(np.sum(hollow * hollow)))
        if off <= tol.ORACLE_OFFDIAG * max(frob, np.finfo(float).tiny):
            break
        if rotations == 0:
            break
    else:
        raise RuntimeError(
            f"Jacobi did not converge in {max_sweeps} sweeps "
            f"(off-diagonal norm {off:g}, target "
            f"{tol.ORACLE_OFFDIAG * frob:g})")

    w = np.diag(a).copy()
    order = np.argsort(w, kind="stable")
    w = w[order]
    vec = v[:, order]

    residual = float(np.max(np.abs(original @ vec - vec * w[None, :])))
    if residual > tol.ORACLE_RESIDUAL_PER_N * n:
        raise RuntimeError(
            f"eigen-residual {residual:g} exceeds budget "
            f"{tol.ORACLE_RESIDUAL_PER_N * n:g} for n={n}")
    return DenseEigenDecomposition(eigenvalues=w, eigenvectors=vec,
                                   sweeps=sweeps, offdiag_norm=off,
                                   residual=residual)


@dataclass(frozen=True)
class SpectrumComparison:
    """Analytic spectrum vs. oracle eigenvalues, value- and count-wise.

    ``clusters`` rows are (analytic value, analytic multiplicity, oracle
    count in the cluster's window); ``ok`` requires every eigenvalue to
    match within tolerance and every cluster count to agree.
    """

    max_abs_diff: float
    clusters: tuple[tuple[float, int, int], ...]
    ok: bool


def spectrum_compare(table: SpectrumTable, oracle_values: np.ndarray,
                     match_tol: float = tol.ORACLE_MATCH
                     ) -> SpectrumComparison:
    """Match the expanded analytic spectrum against oracle eigenvalues.

    A count mismatch is a hard error (the analytic multiplicity identity
    guarantees exactly n values).  Cluster windows are the midpoints
    between adjacent merged analytic values, so the per-cluster oracle
    counts always sum to n.
    """
    ov = np.sort(np.asarray(oracle_values, dtype=float))
    if ov.shape != (table.n,):
        raise ValueError(
            f"oracle produced {ov.shape[0] if ov.ndim == 1 else ov.shape} "
            f"eigenvalues for n={table.n}")
    analytic = np.sort(table.expanded())
    max_abs_diff = float(np.max(np.abs(analytic - ov)))

    merged = table.merged()
    values = [val for val, _ in merged]
    cuts = [-np.inf] + [0.5 * (values[i] + values[i + 1])
                        for i in range(len(values) - 1)] + [np.inf]
    rows = []
    all_counts_match = True
    for i, (val, mult) in enumerate(merged):
        count = int(np.sum((ov > cuts[i]) & (ov <= cuts[i + 1])))
        rows.append((val, mult, count))
        if count != mult:
            all_counts_match = False

    ok = max_abs_diff <= match_tol and all_counts_match
    return SpectrumComparison(max_abs_diff=max_abs_diff,
                              clusters=tuple(rows), ok=ok)
