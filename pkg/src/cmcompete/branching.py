"""Galton-Watson simulation for the doubly-exponential-growth regime.

The process has one root whose offspring count follows either the degree law
(``root_law="degree"``) or the forward-degree law (``root_law="size_biased"``);
all later individuals reproduce with the forward-degree law, whose infinite
mean makes generation sizes grow doubly exponentially.  The scalar

    (tau - 2)**k * log Z_k

converges almost surely; the simulators below estimate that limit and related
max-versus-sum statistics under two stopping rules:

* population stop: first generation whose size reaches a threshold, and
* max-offspring stop: first generation containing an individual with at
  least Q offspring.

Generation sizes are tracked as float64 because overshoots past the stopping
threshold can exceed 2**53; the values remain exact integers whenever small
enough to matter.  For a population stop the offspring of the final generation
are never drawn (the overshoot can be astronomically large), so max-offspring
statistics are recorded only for generations before the stop in that mode.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._rng import as_rng, spawn_rng
from .powerlaw import DegreeLaw, SizeBiasedLaw, sample_degree, sample_size_biased

POP_CAP_DEFAULT = 10_000_000


@dataclass
class GwTrajectory:
    gen_sizes: np.ndarray        # float64, Z_0 = 1
    max_offspring: np.ndarray    # float64, max offspring among generation-k individuals
    stopped_at: int              # generation index meeting the stop criterion; -1 if censored
    stop_reason: str             # "population", "max_offspring", or "censored"
    censored: bool
    final_offspring: np.ndarray | None  # offspring counts of the stopping generation, if drawn


def _root_count(root_law: str, law: DegreeLaw, sb: SizeBiasedLaw, rng) -> float:
    if root_law == "degree":
        return float(sample_degree(law, rng))
    if root_law == "size_biased":
        return float(sample_size_biased(sb, rng))
    raise ValueError(f"root_law must be 'degree' or 'size_biased', got {root_law!r}")


def simulate_until(tau: float, root_law: str = "degree", stop_population=None,
                   stop_max_offspring=None, pop_cap: int = POP_CAP_DEFAULT,
                   seed_or_rng=None) -> GwTrajectory:
    """Run one trajectory until the chosen stopping rule fires.

    Exactly one of ``stop_population`` / ``stop_max_offspring`` must be given.
    A trajectory is censored (not silently truncated) when materializing the
    next generation would push the number of drawn individuals past pop_cap.
    """
    if (stop_population is None) == (stop_max_offspring is None):
        raise ValueError("give exactly one of stop_population / stop_max_offspring")
    rng = as_rng(seed_or_rng)
    law = DegreeLaw(tau)
    sb = SizeBiasedLaw.from_degree_law(law)

    sizes = [1.0]
    maxima: list[float] = []
    drawn = 0
    k = 0
    while True:
        z_k = sizes[k]
        if stop_population is not None and z_k >= stop_population:
            # population stop: offspring of this generation are never drawn
            return GwTrajectory(np.asarray(sizes), np.asarray(maxima), k,
                                "population", False, None)
        if drawn + z_k > pop_cap:
            return GwTrajectory(np.asarray(sizes), np.asarray(maxima), -1,
                                "censored", True, None)
        if k == 0:
            offspring = np.array([_root_count(root_law, law, sb, rng)])
        else:
            offspring = sample_size_biased(sb, rng, size=int(z_k))
        drawn += int(z_k)
        m_k = float(offspring.max())
        maxima.append(m_k)
        sizes.append(float(offspring.sum()))
        if stop_max_offspring is not None and m_k >= stop_max_offspring:
            return GwTrajectory(np.asarray(sizes), np.asarray(maxima), k,
                                "max_offspring", False, offspring)
        k += 1


@dataclass
class YEstimate:
    value: float
    generation: int
    threshold: float


def y_estimate(traj: GwTrajectory, tau: float) -> YEstimate:
    """(tau-2)**k * log Z_k at the stopping generation k."""
    if traj.censored:
        raise ValueError("cannot form a growth-rate estimate from a censored trajectory")
    k = traj.stopped_at
    value = (tau - 2.0) ** k * np.log(traj.gen_sizes[k])
    threshold = traj.gen_sizes[k]
    return YEstimate(value=float(value), generation=k, threshold=float(threshold))


def nested_y_estimates(tau: float, root_law: str, thresholds, pop_cap: int = POP_CAP_DEFAULT,
                       seed_or_rng=None) -> list[YEstimate] | None:
    """Estimates at several population thresholds along one coupled trajectory.

    Returns None if the trajectory is censored before the largest threshold.
    """
    thresholds = sorted(float(t) for t in thresholds)
    rng = as_rng(seed_or_rng)
    law = DegreeLaw(tau)
    sb = SizeBiasedLaw.from_degree_law(law)
    s = tau - 2.0
    out: list[YEstimate] = []
    z = 1.0
    k = 0
    drawn = 0
    next_idx = 0
    while next_idx < len(thresholds):
        while next_idx < len(thresholds) and z >= thresholds[next_idx]:
            out.append(YEstimate(value=float(s**k * np.log(z)), generation=k,
                                 threshold=thresholds[next_idx]))
            next_idx += 1
        if next_idx >= len(thresholds):
            break
        if drawn + z > pop_cap:
            return None
        if k == 0:
            offspring = np.array([_root_count(root_law, law, sb, rng)])
        else:
            offspring = sample_size_biased(sb, rng, size=int(z))
        drawn += int(z)
        z = float(offspring.sum())
        k += 1
    return out


@dataclass
class YSample:
    values: np.ndarray          # sorted growth-rate estimates of the uncensored trials
    censored_fraction: float

    def quantile(self, p) -> float:
        return float(np.quantile(self.values, p))

    def tail_fraction(self, x: float) -> float:
        return float(np.mean(self.values > x))


def sample_y_distribution(tau: float, root_law: str, threshold: float, trials: int,
                          seed: int, pop_cap: int = POP_CAP_DEFAULT) -> YSample:
    """Empirical distribution of the growth-rate estimate over independent trials."""
    if trials < 1:
        raise ValueError("need at least one trial")
    values = []
    censored = 0
    for i in range(trials):
        traj = simulate_until(tau, root_law=root_law, stop_population=threshold,
                              pop_cap=pop_cap, seed_or_rng=spawn_rng(seed, i))
        if traj.censored:
            censored += 1
        else:
            values.append(y_estimate(traj, tau).value)
    return YSample(values=np.sort(np.asarray(values)), censored_fraction=censored / trials)


def max_sum_ratio(traj: GwTrajectory, tau: float) -> float:
    """(tau-2)**(k+1) log M_k / ((tau-2)**k log Z_k) at the stopping generation k.

    Depends only on the size and the maximal offspring count of the stopping
    generation (so it is invariant under relabeling individuals within it);
    NaN when the stopping generation is the root alone (log Z_0 = 0).
    """
    if traj.censored:
        raise ValueError("censored trajectory has no stopping generation")
    k = traj.stopped_at
    if k >= len(traj.max_offspring):
        raise ValueError("stopping generation has no recorded offspring maximum "
                         "(population-stopped trajectory)")
    s = tau - 2.0
    z_k = traj.gen_sizes[k]
    if z_k < 2:
        return float("nan")
    return float(s ** (k + 1) * np.log(traj.max_offspring[k]) / (s**k * np.log(z_k)))


def max_sum_diagnostic(tau: float, trials: int, seed: int, stop_max_offspring: float = 1e6,
                       pop_cap: int = POP_CAP_DEFAULT) -> dict:
    """Ratio of the rescaled log-max to the rescaled log-sum at the stopping generation.

    The two rescalings estimate the same limit, so over trials stopped at the
    first generation holding an individual with at least `stop_max_offspring`
    offspring the ratio concentrates near 1.
    """
    ratios = []
    censored = 0
    for i in range(trials):
        traj = simulate_until(tau, root_law="degree", stop_max_offspring=stop_max_offspring,
                              pop_cap=pop_cap, seed_or_rng=spawn_rng(seed, i))
        if traj.censored:
            censored += 1
            continue
        r = max_sum_ratio(traj, tau)
        if not np.isnan(r):
            ratios.append(r)
    arr = np.asarray(ratios)
    return {
        "mean": float(arr.mean()),
        "std": float(arr.std()),
        "count": len(arr),
        "censored_fraction": censored / trials,
    }
