"""Seeded Monte Carlo simulator for the interchange process on the tree.

One step picks a uniform edge and swaps its two cards on a fair coin.
Trajectories track the distinguishing statistic F(m) = sum_v f(v) f(m(v))
for the second-eigenvalue witness f, which contracts in expectation by the
single-card eigenvalue lambda' each step.

Randomness is counter-based (Philox) and fully determined by (seed, trial
index, purpose): each trial's key is splitmix64(seed ^ index ^ salt), with
salt 0 for trajectories and a distinct salt for uniform-permutation
sampling, so trials are independent streams and any one can be reproduced
in isolation.  Within a trial the draw order is fixed: all edge choices,
then all coins.

Observers (requested by name in the config):

* ``F_trace`` — per-step mean and variance of F across trials, plus the
  full (trials, steps+1) trace matrix (refused when it would be huge);
* ``final_state`` — the (trials, n) matrix of final arrangements;
* ``card_position:<v>`` — the final node holding card v, per trial.

Final F values are always collected; observers only add to that.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np

from .kernels import interchange_run
from .mixing import (
    F_identity,
    F_statistic,
    expected_statistic_after_step,
    wilson_witness,
)
from .tree import TreeGeometry, build_tree

_MASK64 = (1 << 64) - 1
_UNIFORM_SALT = 0xD1B54A32D192ED03
_TV_MIN_TRIALS = 1000
# cap on stored doubles/ints per observer matrix (~128 MiB of float64)
_OBSERVER_CELL_LIMIT = 1 << 24


class DegenerateStatisticError(ValueError):
    """The statistic vanished, so a contraction ratio is undefined."""


def splitmix64(z: int) -> int:
    """One splitmix64 output for seed derivation (standard finalizer)."""
    z = (z + 0x9E3779B97F4A7C15) & _MASK64
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _MASK64
    return z ^ (z >> 31)


def trial_generator(seed: int, index: int, salt: int = 0) -> np.random.Generator:
    """Philox generator for one (trial, purpose) pair."""
    key = splitmix64((seed ^ index ^ salt) & _MASK64)
    return np.random.Generator(np.random.Philox(key=key))


def fisher_yates(n: int, rng: np.random.Generator) -> np.ndarray:
    """Uniform permutation of 0..n-1 by explicit backward Fisher-Yates."""
    m = np.arange(n, dtype=np.int64)
    for i in range(n - 1, 0, -1):
        j = int(rng.integers(0, i + 1))
        m[i], m[j] = m[j], m[i]
    return m


@dataclass(frozen=True)
class Permutation:
    """A validated arrangement: mapping[v] is the card at node v."""

    mapping: np.ndarray

    def __post_init__(self) -> None:
        m = np.asarray(self.mapping, dtype=np.int64)
        n = m.shape[0]
        if m.ndim != 1 or n == 0:
            raise ValueError("mapping must be a nonempty 1-d integer array")
        seen = np.zeros(n, dtype=bool)
        if m.min() < 0 or m.max() >= n:
            raise ValueError("mapping values out of range")
        seen[m] = True
        if not seen.all():
            raise ValueError("mapping is not a bijection")
        object.__setattr__(self, "mapping", m)

    @property
    def n(self) -> int:
        return self.mapping.shape[0]


def _parse_observer(name: str, n: int) -> int | None:
    """Return the card index of a ``card_position:<v>`` observer, else None."""
    if name in ("F_trace", "final_state"):
        return None
    if name.startswith("card_position:"):
        tail = name.split(":", 1)[1]
        try:
            v = int(tail)
        except ValueError:
            raise ValueError(f"bad card index in observer {name!r}") from None
        if not 0 <= v < n:
            raise ValueError(f"observer {name!r} indexes a card outside "
                             f"0..{n - 1}")
        return v
    raise ValueError(
        f"unknown observer {name!r}; available: F_trace, final_state, "
        f"card_position:<v>")


@dataclass(frozen=True)
class SimulationConfig:
    d: int
    h: int
    steps: int
    trials: int
    seed: int
    observers: frozenset[str] = field(
        default_factory=lambda: frozenset({"F_trace"}))

    def __post_init__(self) -> None:
        if self.steps < 0:
            raise ValueError(f"steps must be >= 0, got {self.steps}")
        if self.trials < 1:
            raise ValueError(f"trials must be >= 1, got {self.trials}")
        n = (self.d ** (self.h + 1) - 1) // (self.d - 1)
        for name in self.observers:
            _parse_observer(name, n)


@dataclass(frozen=True)
class TrajectoryStats:
    """Aggregated output of :func:`run_trajectories`.

    Per-step arrays have length steps+1 (index 0 is the start).  Fields
    beyond ``final_F_samples`` are None unless their observer was on.
    """

    config: SimulationConfig
    F_id: float
    final_F_samples: np.ndarray
    F_mean_per_step: np.ndarray | None
    F_var_per_step: np.ndarray | None
    traces: np.ndarray | None
    final_states: np.ndarray | None
    card_positions: dict[int, np.ndarray] | None


def _edge_arrays(g: TreeGeometry) -> tuple[np.ndarray, np.ndarray]:
    ev = np.arange(1, g.n, dtype=np.int64)
    eu = (ev - 1) // g.d
    return eu, ev


def apply_step(mapping: np.ndarray, eu: np.ndarray, ev: np.ndarray,
               edge: int, coin: int) -> None:
    """One interchange step in place (swap iff the coin is 1)."""
    if coin:
        u, w = eu[edge], ev[edge]
        mapping[u], mapping[w] = mapping[w], mapping[u]


def step(g: TreeGeometry, mapping: np.ndarray,
         rng: np.random.Generator) -> np.ndarray:
    """One interchange step as a pure function (draws edge, then coin)."""
    edge = int(rng.integers(0, g.n - 1))
    coin = int(rng.integers(0, 2))
    out = np.array(mapping, dtype=np.int64)
    eu, ev = _edge_arrays(g)
    apply_step(out, eu, ev, edge, coin)
    return out


def _guard_cells(what: str, cells: int) -> None:
    if cells > _OBSERVER_CELL_LIMIT:
        raise ValueError(
            f"{what} would store {cells} cells "
            f"(limit {_OBSERVER_CELL_LIMIT}); drop the observer or shrink "
            f"the run")


def run_trajectories(config: SimulationConfig,
                     f: np.ndarray | None = None) -> TrajectoryStats:
    """Run ``trials`` seeded trajectories from the identity arrangement.

    ``f`` defaults to the second-eigenvalue witness of the tree; any
    statistic vector of length n may be substituted.
    """
    g = build_tree(config.d, config.h)
    if f is None:
        f = wilson_witness(g).f
    elif f.shape != (g.n,):
        raise ValueError(f"statistic of shape {f.shape} does not fit n={g.n}")
    f0 = F_identity(f)
    eu, ev = _edge_arrays(g)
    steps, trials = config.steps, config.trials

    record = "F_trace" in config.observers
    keep_finals = "final_state" in config.observers
    cards = sorted(v for v in (_parse_observer(name, g.n)
                               for name in config.observers)
                   if v is not None)
    if record:
        _guard_cells("F_trace", trials * (steps + 1))
    if keep_finals:
        _guard_cells("final_state", trials * g.n)

    finals = np.empty(trials)
    s1 = np.zeros(steps + 1) if record else None
    s2 = np.zeros(steps + 1) if record else None
    all_traces = np.empty((trials, steps + 1)) if record else None
    final_states = (np.empty((trials, g.n), dtype=np.int64)
                    if keep_finals else None)
    positions = {v: np.empty(trials, dtype=np.int64) for v in cards}
    trace = np.empty(steps + 1 if record else 1)

    for t in range(trials):
        rng = trial_generator(config.seed, t, salt=0)
        edge_choice = rng.integers(0, g.n - 1, size=steps, dtype=np.int64)
        coins = rng.integers(0, 2, size=steps, dtype=np.int8)
        mapping = np.arange(g.n, dtype=np.int64)
        finals[t] = interchange_run(mapping, eu, ev, edge_choice, coins,
                                    f, f0, trace, record)
        if record:
            s1 += trace
            s2 += trace * trace
            all_traces[t] = trace
        if keep_finals:
            final_states[t] = mapping
        if cards:
            where = np.argsort(mapping)  # node holding each card
            for v in cards:
                positions[v][t] = where[v]

    if record:
        mean = s1 / trials
        if trials > 1:
            var = np.maximum(s2 - trials * mean * mean, 0.0) / (trials - 1)
        else:
            var = np.zeros(steps + 1)
    else:
        mean = var = None
    return TrajectoryStats(config=config, F_id=f0, final_F_samples=finals,
                           F_mean_per_step=mean, F_var_per_step=var,
                           traces=all_traces, final_states=final_states,
                           card_positions=positions if cards else None)


def exact_contraction_check(g: TreeGeometry, f: np.ndarray,
                            mapping: np.ndarray) -> float:
    """Ratio E[F after one step | mapping] / F(mapping), exactly enumerated.

    When f is an eigenvector of the single-card chain this equals its
    single-card eigenvalue lambda' regardless of the arrangement.  Raises
    :class:`DegenerateStatisticError` when F vanishes at ``mapping`` (the
    ratio is then undefined; resample and try again).
    """
    F = F_statistic(f, mapping)
    if F == 0.0:
        raise DegenerateStatisticError(
            "statistic is exactly zero at this arrangement")
    return expected_statistic_after_step(g, f, mapping) / F


@dataclass(frozen=True)
class TVEstimate:
    """Monte Carlo lower bound on total variation distance at one time."""

    lower_bound: float
    threshold: float
    stderr: float
    p_process: float
    p_uniform: float
    process_mean: float
    uniform_mean: float


def estimate_tv_lower_bound(config: SimulationConfig,
                            f: np.ndarray | None = None,
                            t: int | None = None) -> TVEstimate:
    """Distinguish time-t trajectories from uniform via the statistic F.

    ``t`` defaults to ``config.steps``.  Both samples have size
    ``trials``; the threshold is the midpoint of the two sample means, the
    bound is |P(F > c) - P(F_uniform > c)|, and ``stderr`` is the binomial
    error of the difference.  Requires at least 1000 trials — below that
    the estimate is too noisy to report.  Observers are stripped from the
    internal run, so long times and many trials stay cheap.
    """
    if config.trials < _TV_MIN_TRIALS:
        raise ValueError(
            f"need at least {_TV_MIN_TRIALS} trials for a TV estimate, "
            f"got {config.trials}")
    run_config = replace(config, observers=frozenset(),
                         steps=config.steps if t is None else t)
    g = build_tree(config.d, config.h)
    if f is None:
        f = wilson_witness(g).f
    stats = run_trajectories(run_config, f)

    uniform = np.empty(config.trials)
    for i in range(config.trials):
        rng = trial_generator(config.seed, i, salt=_UNIFORM_SALT)
        perm = fisher_yates(g.n, rng)
        uniform[i] = F_statistic(f, perm)

    proc = stats.final_F_samples
    c = 0.5 * (float(np.mean(proc)) + float(np.mean(uniform)))
    p1 = float(np.mean(proc > c))
    p2 = float(np.mean(uniform > c))
    m = config.trials
    stderr = math.sqrt(p1 * (1.0 - p1) / m + p2 * (1.0 - p2) / m)
    return TVEstimate(lower_bound=abs(p1 - p2), threshold=c, stderr=stderr,
                      p_process=p1, p_uniform=p2,
                      process_mean=float(np.mean(proc)),
                      uniform_mean=float(np.mean(uniform)))
