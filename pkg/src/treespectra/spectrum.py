"""Exact spectrum of the lazy random walk on a complete d-ary tree.

The n walk eigenvalues split into two analytic families:

* a *symmetric* family of h+1 simple eigenvalues — the spectrum of the
  (h+1)-level birth-death projection — consisting of the trivial
  eigenvalue 1 together with (2 sqrt(d)/(d+1)) cos(pi j/(h+1)) for
  j = 1..h;
* an *antisymmetric* family: for each depth parameter k in 0..h-1, the
  k+1 eigenvalues of the leaky level chain on k+1 states, each occurring
  with multiplicity (d-1) d^(h-k-1).

Every eigenvalue is parametrised as lam = (d/(d+1)) (x + 1/(x d)) by a
spectral parameter x; the paired root x' satisfies x x' = 1/d and the
pair is real iff (d+1)^2 lam^2 >= 4 d.  Family membership pins x further:
symmetric parameters satisfy d^(h+1) x^(2h+2) = 1, antisymmetric ones
d^(k+2) x^(2k+4) - d^(k+2) x^(2k+3) + d x - 1 = 0.

The normative eigenvalue algorithm is Sturm-count bisection on the
symmetrized tridiagonal chains (all-real, provably convergent), finished
with a short guarded Newton polish; the polynomial equations above serve
as residual cross-checks only.  Nothing here calls a library eigensolver,
so the dense Jacobi oracle remains an independent route.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace

import numpy as np

from . import tolerances as tol
from .chains import SymmetricTridiagonal, leaky_level_chain, level_chain
from .tree import build_tree

_FAMILIES = ("trivial", "symmetric", "antisymmetric")
_EXPAND_LIMIT = 1_000_000


# ---------------------------------------------------------------------------
# the lam <-> x change of variables
# ---------------------------------------------------------------------------

def lambda_from_x(d: int, x: complex) -> complex:
    """Eigenvalue for spectral parameter x: (d/(d+1)) (x + 1/(x d))."""
    if x == 0:
        raise ValueError("spectral parameter x must be nonzero")
    return (d / (d + 1)) * (x + 1.0 / (x * d))


def x_from_lambda(d: int, lam: float) -> tuple[complex, complex]:
    """Both roots of d x^2 - (d+1) lam x + 1 = 0, as a canonical pair.

    The roots multiply to 1/d.  When (d+1)^2 lam^2 >= 4 d both are real
    with the sign of lam, returned larger first (the larger computed
    cancellation-free, the other recovered from the product); otherwise
    they form a conjugate pair, positive imaginary part first.
    """
    b = (d + 1) * lam
    disc = b * b - 4.0 * d
    if disc >= 0.0:
        s = math.sqrt(disc)
        big = (b + s) / (2.0 * d) if b >= 0.0 else (b - s) / (2.0 * d)
        other = 1.0 / (d * big)
        lo, hi = sorted((big, other))
        return complex(hi), complex(lo)
    s = math.sqrt(-disc)
    return complex(b / (2.0 * d), s / (2.0 * d)), \
        complex(b / (2.0 * d), -s / (2.0 * d))


def quadratic_residual(d: int, lam: float, x: complex) -> float:
    """Scaled residual of d x^2 - (d+1) lam x + 1 at x."""
    terms = (d * x * x, -(d + 1) * lam * x, 1.0)
    den = max(abs(t) for t in terms)
    return abs(sum(terms)) / max(den, 1.0)


def verify_x_equation(d: int, h_or_k: int, family: str, x: complex) -> float:
    """Residual of the family's defining polynomial at x, scaled.

    * ``symmetric`` (h_or_k = h): d^(h+1) x^(2h+2) - 1;
    * ``antisymmetric`` (h_or_k = k):
      d^(k+2) x^(2k+4) - d^(k+2) x^(2k+3) + d x - 1;
    * ``trivial``: the quadratic d x^2 - (d+1) x + 1 (lam = 1).

    The residual is |p(x)| divided by the largest monomial magnitude.
    """
    if family == "trivial":
        return quadratic_residual(d, 1.0, x)
    if family == "symmetric":
        m = h_or_k + 1
        terms: tuple[complex, ...] = (float(d) ** m * x ** (2 * m), -1.0)
    elif family == "antisymmetric":
        dk = float(d) ** (h_or_k + 2)
        terms = (dk * x ** (2 * h_or_k + 4), -dk * x ** (2 * h_or_k + 3),
                 d * x, -1.0)
    else:
        raise ValueError(f"unknown family {family!r}")
    return abs(sum(terms)) / max(abs(t) for t in terms)


# ---------------------------------------------------------------------------
# symmetric tridiagonal eigenvalues: Sturm bisection + guarded Newton polish
# ---------------------------------------------------------------------------

def _negcount(diag: np.ndarray, off2: np.ndarray, x: float,
              pivmin: float) -> int:
    """Number of eigenvalues strictly below x (LDL^T pivot sign count)."""
    count = 0
    q = diag[0] - x
    if abs(q) < pivmin:
        q = -pivmin
    if q < 0.0:
        count += 1
    for i in range(1, diag.shape[0]):
        q = (diag[i] - x) - off2[i - 1] / q
        if abs(q) < pivmin:
            q = -pivmin
        if q < 0.0:
            count += 1
    return count


def _charpoly(diag: np.ndarray, off2: np.ndarray,
              lam: float) -> tuple[float, float]:
    """Characteristic polynomial det(T - lam I) and its lam-derivative."""
    pm1, p = 1.0, diag[0] - lam
    dm1, dp = 0.0, -1.0
    for i in range(1, diag.shape[0]):
        a = diag[i] - lam
        pm1, p = p, a * p - off2[i - 1] * pm1
        dm1, dp = dp, -pm1 + a * dp - off2[i - 1] * dm1
    return p, dp


def _polish(diag: np.ndarray, off2: np.ndarray, lo: float, hi: float) -> float:
    """A few Newton steps from the bracket midpoint, confined near it."""
    slack = 10.0 * max(hi - lo, tol.BISECTION_WIDTH)
    guard_lo, guard_hi = lo - slack, hi + slack
    x = 0.5 * (lo + hi)
    for _ in range(tol.POLISH_STEPS):
        p, dp = _charpoly(diag, off2, x)
        if dp == 0.0 or not math.isfinite(p) or not math.isfinite(dp):
            break
        xn = x - p / dp
        if not guard_lo <= xn <= guard_hi or xn == x:
            break
        x = xn
    return x


def tridiagonal_eigenvalues(tri: SymmetricTridiagonal) -> np.ndarray:
    """All eigenvalues of a symmetric tridiagonal matrix, ascending.

    Bisection on the Sturm sign count down to an absolute bracket width
    of 1e-13 (the chains here have spectra inside [-1, 1]), then Newton
    polish on the characteristic-polynomial recurrence.
    """
    diag = np.asarray(tri.diagonal, dtype=float)
    off = np.asarray(tri.offdiagonal, dtype=float)
    m = diag.shape[0]
    if m == 1:
        return diag.copy()
    off2 = off * off
    pivmin = 1e-290 * max(1.0, float(off2.max()))

    radius = np.zeros(m)
    radius[:-1] += np.abs(off)
    radius[1:] += np.abs(off)
    glo = float(np.min(diag - radius))
    ghi = float(np.max(diag + radius))
    pad = max(1e-12, 1e-14 * (ghi - glo))
    glo -= pad
    ghi += pad

    out = np.empty(m)
    for j in range(m):
        lo, hi = glo, ghi
        while hi - lo > tol.BISECTION_WIDTH:
            mid = 0.5 * (lo + hi)
            if not lo < mid < hi:
                break
            if _negcount(diag, off2, mid, pivmin) >= j + 1:
                hi = mid
            else:
                lo = mid
        out[j] = _polish(diag, off2, lo, hi)
    return out


# ---------------------------------------------------------------------------
# the structured spectrum
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SpectralLine:
    """One analytic eigenvalue with its parameters and multiplicity.

    ``index`` is the symmetric family position j (1..h), the antisymmetric
    depth k (0..h-1), or 0 for the trivial eigenvalue.  ``x_pair`` is the
    canonical root pair of :func:`x_from_lambda`.
    """

    lam: float
    family: str
    index: int
    x_pair: tuple[complex, complex]
    multiplicity: int

    def __post_init__(self) -> None:
        if self.family not in _FAMILIES:
            raise ValueError(f"unknown family {self.family!r}")
        if self.multiplicity < 1:
            raise ValueError(f"multiplicity must be positive, got "
                             f"{self.multiplicity}")

    @property
    def x(self) -> complex:
        """Principal spectral parameter (largest real part, then +imag)."""
        return self.x_pair[0]

    @property
    def real_x(self) -> bool:
        return self.x_pair[0].imag == 0.0


def _validated_line(d: int, h_or_k: int, lam: float, family: str, index: int,
                    x_pair: tuple[complex, complex],
                    multiplicity: int) -> SpectralLine:
    """Build a line and enforce its parameter identities.

    Checks: x1 * x2 = 1/d (relative 1e-12), lam recovered from either root
    with imaginary dust <= 1e-10, and the family polynomial residual.
    """
    x1, x2 = x_pair
    if abs(d * x1 * x2 - 1.0) > tol.LAMBDA_PAIR_RELATIVE:
        raise AssertionError(
            f"root pair of {family} line lam={lam!r} has product "
            f"{x1 * x2!r} != 1/{d}")
    for root in x_pair:
        back = lambda_from_x(d, root)
        if abs(back.imag) > 1e-10 or abs(back.real - lam) > 1e-10:
            raise AssertionError(
                f"root {root!r} of {family} line does not reproduce "
                f"lam={lam!r} (got {back!r})")
        res = verify_x_equation(d, h_or_k, family, root)
        if res > tol.X_EQUATION_RESIDUAL:
            raise AssertionError(
                f"{family} parameter {root!r} violates its polynomial: "
                f"residual {res:.3e}")
    return SpectralLine(lam=lam, family=family, index=index, x_pair=x_pair,
                        multiplicity=multiplicity)


def symmetric_eigenvalues(d: int, h: int) -> tuple[SpectralLine, ...]:
    """The h+1 simple eigenvalues carried by level-constant eigenvectors.

    lam_j = (2 sqrt(d)/(d+1)) cos(pi j/(h+1)) with x = e^(i pi j/(h+1)) /
    sqrt(d) for j = 1..h, preceded by the trivial eigenvalue 1 (x pair
    (1, 1/d)).  All have multiplicity 1.
    """
    if h < 1:
        raise ValueError(f"height must be >= 1, got {h}")
    sqd = math.sqrt(d)
    lines = [_validated_line(d, 0, 1.0, "trivial", 0,
                             (complex(1.0), complex(1.0 / d)), 1)]
    for j in range(1, h + 1):
        theta = math.pi * j / (h + 1)
        lam = 2.0 * sqd / (d + 1) * math.cos(theta)
        x = cmath.exp(1j * theta) / sqd
        lines.append(_validated_line(d, h, lam, "symmetric", j,
                                     (x, x.conjugate()), 1))
    return tuple(lines)


def antisymmetric_eigenvalues(d: int, k: int) -> tuple[SpectralLine, ...]:
    """The k+1 eigenvalues of the depth-k leaky level chain, ascending.

    Returned with multiplicity 1; embedding into a height-h tree scales
    the multiplicity to (d-1) d^(h-k-1) (done by :func:`full_spectrum`).
    """
    if k < 0:
        raise ValueError(f"depth parameter must be >= 0, got {k}")
    block = tridiagonal_eigenvalues(leaky_level_chain(d, k).symmetrized())
    return tuple(
        _validated_line(d, k, float(lam), "antisymmetric", k,
                        x_from_lambda(d, float(lam)), 1)
        for lam in block)


@dataclass(frozen=True)
class SpectrumTable:
    """Full analytic spectrum of the lazy walk, sorted by descending lam."""

    d: int
    h: int
    n: int
    lines: tuple[SpectralLine, ...]

    def total_multiplicity(self) -> int:
        return sum(line.multiplicity for line in self.lines)

    def expanded(self) -> np.ndarray:
        """All n eigenvalues with repetition, descending."""
        if self.n > _EXPAND_LIMIT:
            raise ValueError(
                f"refusing to expand {self.n} eigenvalues "
                f"(limit {_EXPAND_LIMIT}); work with the lines directly")
        return np.repeat([line.lam for line in self.lines],
                         [line.multiplicity for line in self.lines])

    def merged(self, width: float = tol.MERGE_WIDTH) -> list[tuple[float, int]]:
        """Cluster lines closer than ``width``; (mean value, total mult).

        Display/comparison helper only — bookkeeping keeps coincidental
        collisions as separate lines.
        """
        order = sorted(self.lines, key=lambda s: s.lam)
        clusters: list[tuple[float, int]] = []
        acc_val = order[0].lam * order[0].multiplicity
        acc_mult = order[0].multiplicity
        last = order[0].lam
        for line in order[1:]:
            if line.lam - last <= width:
                acc_val += line.lam * line.multiplicity
                acc_mult += line.multiplicity
            else:
                clusters.append((acc_val / acc_mult, acc_mult))
                acc_val = line.lam * line.multiplicity
                acc_mult = line.multiplicity
            last = line.lam
        clusters.append((acc_val / acc_mult, acc_mult))
        return clusters

    def lambda2_line(self) -> SpectralLine:
        """The largest eigenvalue below the trivial one."""
        best = None
        for line in self.lines:
            if line.family == "trivial":
                continue
            if best is None or line.lam > best.lam:
                best = line
        assert best is not None
        return best

    def min_eigenvalue(self) -> float:
        return min(line.lam for line in self.lines)


def full_spectrum(d: int, h: int) -> SpectrumTable:
    """Assemble the spectrum from the two analytic families.

    Antisymmetric lines get multiplicity (d-1) d^(h-k-1); the integer
    identity (h+1) + sum_k (k+1)(d-1) d^(h-k-1) = n is then enforced
    exactly.
    """
    g = build_tree(d, h)
    lines: list[SpectralLine] = list(symmetric_eigenvalues(d, h))
    for k in range(h):
        mult = (d - 1) * d ** (h - k - 1)
        lines.extend(replace(line, multiplicity=mult)
                     for line in antisymmetric_eigenvalues(d, k))

    total = sum(line.multiplicity for line in lines)
    if total != g.n:
        raise AssertionError(
            f"multiplicity count {total} != n = {g.n} for d={d}, h={h}")

    rank = {name: i for i, name in enumerate(_FAMILIES)}
    lines.sort(key=lambda s: (-s.lam, rank[s.family], s.index))
    return SpectrumTable(d=d, h=h, n=g.n, lines=tuple(lines))


def level_chain_eigenvalues(d: int, h: int) -> np.ndarray:
    """Spectrum of the level projection, ascending (independent route)."""
    return tridiagonal_eigenvalues(level_chain(d, h).symmetrized())


@dataclass(frozen=True)
class SpectralGap:
    """Second eigenvalue, gap, and the gap's large-h approximation."""

    d: int
    h: int
    n: int
    lambda2: float
    gap: float
    asymptotic: float
    deviation: float
    family: str
    index: int


def spectral_gap(d: int, h: int) -> SpectralGap:
    """lambda2 = top of the deepest leaky chain, with floor/identity checks.

    Asserts that the full table's largest non-trivial eigenvalue is the
    deepest leaky-chain top, and that no eigenvalue lies below
    -2 sqrt(d)/(d+1).  ``asymptotic`` is (d-1)^2/((d+1) d^(h+1)) and
    ``deviation`` is |lambda2 - (1 - asymptotic)|.
    """
    table = full_spectrum(d, h)
    line = table.lambda2_line()
    deepest = tridiagonal_eigenvalues(
        leaky_level_chain(d, h - 1).symmetrized())
    top = float(deepest[-1])
    if not math.isclose(line.lam, top, rel_tol=0,
                        abs_tol=10 * tol.BISECTION_WIDTH):
        raise AssertionError(
            f"lambda2 {line.lam!r} does not match deepest leaky-chain top "
            f"{top!r} for d={d}, h={h}")
    floor = -2.0 * math.sqrt(d) / (d + 1)
    lowest = table.min_eigenvalue()
    if lowest < floor - 1e-12:
        raise AssertionError(
            f"eigenvalue {lowest!r} below the floor {floor!r} "
            f"for d={d}, h={h}")
    asym = (d - 1) ** 2 / ((d + 1) * float(d) ** (h + 1))
    return SpectralGap(d=d, h=h, n=table.n, lambda2=line.lam,
                       gap=1.0 - line.lam, asymptotic=asym,
                       deviation=abs(line.lam - (1.0 - asym)),
                       family=line.family, index=line.index)


@dataclass(frozen=True)
class RootBracket:
    """Asymptotic pen for the largest spectral parameter at depth k.

    lower = 1 - a/d^(k+1) with a = d - 1 + 2 (d-1)^2 (k+1)/d^(k+1);
    upper = 1 - (d-1)/d^(k+1).  Both endpoints approach 1 so fast that
    they can collide in floating point (around k = 29 for d = 2); the
    deficits 1 - lower and 1 - upper stay distinct much longer, so
    membership tests work on those.
    """

    k: int
    lower: float
    upper: float
    lower_deficit: float
    upper_deficit: float

    def __post_init__(self) -> None:
        if not self.upper_deficit < self.lower_deficit:
            raise AssertionError(
                f"degenerate bracket at k={self.k}: deficits "
                f"[{self.upper_deficit}, {self.lower_deficit}]")

    def contains(self, x: float) -> bool:
        """Strict membership, judged on the deficit from 1."""
        return self.upper_deficit < 1.0 - x < self.lower_deficit


@dataclass(frozen=True)
class LargestXResult:
    """Largest real spectral parameter of the k-state leaky chain.

    ``x`` is None when the top eigenvalue's root pair is complex (small
    k).  ``bracket_satisfied`` reports whether x lies strictly inside the
    asymptotic pen — expected to switch on at a moderate k and stay on.
    """

    d: int
    k: int
    lam: float
    x: float | None
    bracket: RootBracket
    bracket_satisfied: bool


def largest_x(d: int, k: int) -> LargestXResult:
    """Top eigenvalue of the k-state leaky chain and its larger real root.

    Note the index shift: this k counts chain states, so it refers to the
    depth-(k-1) chain of :func:`antisymmetric_eigenvalues`; for k = h it
    produces lambda2 of the height-h tree.
    """
    if not isinstance(k, int) or isinstance(k, bool) or k < 1:
        raise ValueError(f"need an integer k >= 1, got {k!r}")
    block = tridiagonal_eigenvalues(leaky_level_chain(d, k - 1).symmetrized())
    lam = float(block[-1])
    pair = x_from_lambda(d, lam)
    x = pair[0].real if pair[0].imag == 0.0 else None
    scale = float(d) ** (k + 1)
    a = (d - 1) + 2.0 * (d - 1) ** 2 * (k + 1) / scale
    lower_deficit = a / scale
    upper_deficit = (d - 1) / scale
    bracket = RootBracket(k=k, lower=1.0 - lower_deficit,
                          upper=1.0 - upper_deficit,
                          lower_deficit=lower_deficit,
                          upper_deficit=upper_deficit)
    ok = x is not None and bracket.contains(x)
    return LargestXResult(d=d, k=k, lam=lam, x=x, bracket=bracket,
                          bracket_satisfied=ok)
