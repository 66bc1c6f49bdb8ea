"""Wilson-style lower bound on the mixing time of the interchange process.

The interchange process on the tree picks a uniform edge each step and
swaps the two cards on it with probability 1/2.  For any eigenvector f of
the single-card walk, the statistic F(m) = sum_v f(v) f(m(v)) (m(v) = card
at node v) contracts *exactly* by a factor lambda' per step in
expectation, where lambda' is the single-card eigenvalue matching the walk
eigenvalue of f.  Choosing f for the second walk eigenvalue lambda2 and
bounding the per-step noise by R yields a time

    t0 = [log F(id) + (1/2) log(gamma epsilon / (4 R))] / (-log lambda')

below which the process is provably far from uniform (total variation at
least 1 - epsilon), provided the numerator is positive; otherwise the
bound is vacuous.  Two R's are carried side by side: a closed-form
worst-case bound and the same bound with the witness's actual sup-norm and
edge energies plugged in.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import tolerances as tol
from .eigenbasis import antisymmetric_profile, lift_sibling_pair, walk_residual
from .spectrum import spectral_gap, x_from_lambda
from .tree import TreeGeometry, build_tree, subtree_level_slice


@dataclass(frozen=True)
class WilsonWitness:
    """Second-eigenvalue eigenvector used as the distinguishing statistic.

    Supported on the first two subtrees below the root (+ on the first,
    - on the second).  In the real-parameter regime ((d+1)^2 lambda2^2 >=
    4d) the values follow the closed form d x^(l+2) - 1/(d^(l-1) x^(l-2))
    in the level l; otherwise they come from the profile recurrence.  Both
    routes are cross-checked against each other when available.
    """

    g: TreeGeometry
    f: np.ndarray
    lam: float
    x: complex
    real_x_regime: bool


def lambda_prime_from_lambda(d: int, n: int, lam: float) -> float:
    """Single-card eigenvalue for walk eigenvalue lam.

    The single-card matrix is the affine map ((2n-d-3) I + (d+1) Q) /
    (2(n-1)) of the walk matrix Q, so eigenvalues map accordingly.
    """
    return (n - d / 2.0 - 1.5 + lam * (d + 1) / 2.0) / (n - 1)


def gamma_from_lambda(d: int, n: int, lam: float) -> float:
    """1 - lambda', computed as a product to avoid cancellation."""
    return (d + 1) * (1.0 - lam) / (2.0 * (n - 1))


def wilson_witness(g: TreeGeometry) -> WilsonWitness:
    """Eigenvector of the walk for lambda2, lifted below the root."""
    sg = spectral_gap(g.d, g.h)
    lam = sg.lambda2
    d, h = g.d, g.h
    pair = x_from_lambda(d, lam)
    x = pair[0]
    real_regime = x.imag == 0.0

    profile = antisymmetric_profile(d, h - 1, lam, x)
    lifted = lift_sibling_pair(g, profile, anchor=0, child=1)

    if real_regime:
        xr = x.real
        f = np.zeros(g.n)
        for l in range(1, h + 1):
            val = d * xr ** (l + 2) - 1.0 / (d ** (l - 1) * xr ** (l - 2))
            lo, hi = subtree_level_slice(g, 1, l - 1)
            f[lo:hi] = val
            lo, hi = subtree_level_slice(g, 2, l - 1)
            f[lo:hi] = -val
        # the closed form is x (d x^2 - 1) times the recurrence lift
        scalar = xr * (d * xr * xr - 1.0)
        gap = float(np.max(np.abs(f - scalar * lifted)))
        scale = max(1.0, float(np.max(np.abs(f))))
        if gap > tol.CLOSED_FORM_AGREEMENT * scale:
            raise AssertionError(
                f"witness closed form disagrees with the recurrence lift "
                f"by {gap:.3e} (d={d}, h={h})")
        peak = float(np.max(np.abs(f)))
        if peak > d:
            raise AssertionError(
                f"real-regime witness exceeds its sup-norm bound d: "
                f"max |f| = {peak!r} (d={d}, h={h})")
    else:
        f = lifted

    res = walk_residual(g, f, lam)
    if res > tol.EIGEN_RESIDUAL:
        raise AssertionError(
            f"witness is not an eigenvector: residual {res:.3e} "
            f"(d={d}, h={h})")
    return WilsonWitness(g=g, f=f, lam=lam, x=x, real_x_regime=real_regime)


def F_statistic(f: np.ndarray, mapping: np.ndarray) -> float:
    """F(m) = sum_v f(v) f(m(v)), accumulated with exact partial sums."""
    return math.fsum(float(f[v]) * float(f[mapping[v]])
                     for v in range(f.shape[0]))


def F_identity(f: np.ndarray) -> float:
    """F at the identity arrangement: sum of f(v)^2."""
    return math.fsum(float(val) * float(val) for val in f)


def contraction_factor(d: int, h: int, lambda2: float) -> float:
    """Per-step contraction of E[F] for the height-h interchange process."""
    n = (d ** (h + 1) - 1) // (d - 1)
    return lambda_prime_from_lambda(d, n, lambda2)


def expected_statistic_after_step(g: TreeGeometry, f: np.ndarray,
                                  mapping: np.ndarray) -> float:
    """E[F after one interchange step | current arrangement], exactly.

    Averages the swap increments over all n-1 edges and the coin: each
    edge (u, v) contributes (f(u)-f(v)) (f(m(v))-f(m(u))) / (2(n-1)).
    """
    d, n = g.d, g.n
    base = F_statistic(f, mapping)
    inc = math.fsum(
        (float(f[c]) - float(f[(c - 1) // d]))
        * (float(f[mapping[(c - 1) // d]]) - float(f[mapping[c]]))
        for c in range(1, n))
    return base + inc / (2.0 * (n - 1))


def expected_square_increment(g: TreeGeometry, f: np.ndarray,
                              mapping: np.ndarray) -> float:
    """E[(F after one step - F now)^2 | current arrangement], exactly.

    The step changes F only when the chosen edge (u, v) actually swaps,
    which happens with probability 1/(2(n-1)) per edge, so the second
    moment is sum_edges ((f(u)-f(v)) (f(m(v))-f(m(u))))^2 / (2(n-1)).
    """
    d, n = g.d, g.n
    total = math.fsum(
        ((float(f[c]) - float(f[(c - 1) // d]))
         * (float(f[mapping[(c - 1) // d]]) - float(f[mapping[c]]))) ** 2
        for c in range(1, n))
    return total / (2.0 * (n - 1))


def variance_bound(g: TreeGeometry, f: np.ndarray) -> tuple[float, float]:
    """(closed-form R, witness-evaluated R) for the one-step noise.

    The per-step increment is bounded by |f(u)-f(v)| * 2 max|f| on the
    chosen edge, so E[increment^2] <= (2 max|f|)^2 sum_edges (f(u)-f(v))^2
    / (2(n-1)).  The closed form replaces both factors by worst-case
    bounds, giving 64 d^4 / (n-1).
    """
    d, n = g.d, g.n
    r_paper = 64.0 * d ** 4 / (n - 1)
    children = np.arange(1, n, dtype=np.int64)
    diffs = f[children] - f[(children - 1) // d]
    edge_energy = float(np.sum(diffs * diffs))
    fmax = float(np.max(np.abs(f)))
    r_computed = (2.0 * fmax) ** 2 * edge_energy / (2.0 * (n - 1))
    return r_paper, r_computed


@dataclass(frozen=True)
class WilsonReport:
    """Everything the lower bound produces, for one (d, h, epsilon)."""

    d: int
    h: int
    n: int
    epsilon: float
    lambda2: float
    lambda_prime: float
    gamma: float
    F_id: float
    R_paper: float
    R_computed: float
    t0_paper_R: float
    t0_computed_R: float
    vacuous: bool

    def as_dict(self) -> dict:
        return {
            "d": self.d,
            "h": self.h,
            "n": self.n,
            "epsilon": self.epsilon,
            "lambda2": self.lambda2,
            "lambda_prime": self.lambda_prime,
            "gamma": self.gamma,
            "F_id": self.F_id,
            "R_paper": self.R_paper,
            "R_computed": self.R_computed,
            "t0_paper_R": self.t0_paper_R,
            "t0_computed_R": self.t0_computed_R,
            "vacuous": self.vacuous,
        }


def wilson_lower_bound(d: int, h: int, epsilon: float) -> WilsonReport:
    """Assemble the full lower-bound report for one tree and one epsilon.

    ``vacuous`` records whether the closed-form-R numerator is
    nonpositive, i.e. whether the bound with the worst-case R says nothing.
    The t0 denominator uses -log1p(-gamma) so no precision is lost when
    gamma is tiny.
    """
    if not 0.0 < epsilon < 1.0:
        raise ValueError(f"epsilon must be in (0, 1), got {epsilon!r}")
    g = build_tree(d, h)
    witness = wilson_witness(g)
    lam = witness.lam
    n = g.n
    lam_prime = lambda_prime_from_lambda(d, n, lam)
    gamma = gamma_from_lambda(d, n, lam)
    if not 0.0 < gamma < 2.0 - math.sqrt(2.0):
        raise AssertionError(
            f"contraction rate gamma = {gamma!r} outside (0, 2 - sqrt 2) "
            f"for d={d}, h={h}")
    f_id = F_identity(witness.f)
    r_paper, r_computed = variance_bound(g, witness.f)

    log_rate = -math.log1p(-gamma)

    def t0(r: float) -> float:
        return (math.log(f_id) + 0.5 * math.log(gamma * epsilon / (4.0 * r))) \
            / log_rate

    t0_paper = t0(r_paper)
    t0_computed = t0(r_computed)
    vacuous = (math.log(f_id)
               + 0.5 * math.log(gamma * epsilon / (4.0 * r_paper))) <= 0.0
    return WilsonReport(d=d, h=h, n=n, epsilon=epsilon, lambda2=lam,
                        lambda_prime=lam_prime, gamma=gamma, F_id=f_id,
                        R_paper=r_paper, R_computed=r_computed,
                        t0_paper_R=t0_paper, t0_computed_R=t0_computed,
                        vacuous=vacuous)


@dataclass(frozen=True)
class InterchangeGap:
    """Spectral gap of the single-card chain vs. its large-h approximation."""

    d: int
    h: int
    n: int
    gap_exact: float
    gap_asymptotic: float
    ratio: float


def interchange_gap(d: int, h: int) -> InterchangeGap:
    """gamma = (d+1)(1-lambda2)/(2(n-1)) against (d-1)^2/(2(n-1)d^(h+1)).

    The ratio tends to 1 as h grows (the asymptotic form replaces
    1 - lambda2 by its leading term).
    """
    sg = spectral_gap(d, h)
    n = sg.n
    exact = gamma_from_lambda(d, n, sg.lambda2)
    asym = (d - 1) ** 2 / (2.0 * (n - 1) * float(d) ** (h + 1))
    return InterchangeGap(d=d, h=h, n=n, gap_exact=exact,
                          gap_asymptotic=asym, ratio=exact / asym)
