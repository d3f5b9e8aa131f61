"""Random coloring scheme on a stopped branching-process tree.

The tree grows until the first generation containing an individual with at
least ``stop_degree`` offspring (the individual's offspring count plays the
role of its degree; the children of that last generation are never
materialized).  The last generation is then colored by degree band:

* starting rule 1: red on [Q, Q**gamma), a coin above Q**gamma, neutral below Q;
* starting rule 2: the same except the [Q, Q**gamma) band is blue with a small
  error probability (default Q**(1-gamma)) instead of deterministically red.

Colors then flow toward the root: a parent with colored children takes their
common color, or flips the tie coin when both colors are present among its
children.  The quantity of interest is the probability that the root ends up
blue, which stays bounded away from 0 and 1 as Q grows for gamma strictly
inside (1, 1/(tau-2)).
"""
from __future__ import annotations

from dataclasses import dataclass, replace

import numpy as np

from ._rng import as_rng, spawn_rng
from .competition import BLUE, RED, UNCOLORED
from .powerlaw import DegreeLaw, SizeBiasedLaw, sample_degree, sample_size_biased

NEUTRAL = UNCOLORED
POP_CAP_DEFAULT = 10_000_000


@dataclass(frozen=True)
class ColoringParams:
    tau: float
    stop_degree: float                 # Q: offspring threshold that stops growth
    gamma: float                       # mixed band starts at Q**gamma
    rule: int = 1
    blue_error_prob: float | None = None  # rule 2 only; default Q**(1-gamma)
    root_law: str = "degree"
    tie_blue_prob: float = 0.5

    def __post_init__(self):
        if not 1.0 < self.gamma < 1.0 / (self.tau - 2.0):
            raise ValueError(f"gamma must lie in (1, 1/(tau-2)), got {self.gamma}")
        if self.rule not in (1, 2):
            raise ValueError("rule must be 1 or 2")
        if self.stop_degree < 2:
            raise ValueError("stop_degree must be at least 2")

    @property
    def effective_error_prob(self) -> float:
        if self.blue_error_prob is not None:
            return self.blue_error_prob
        return float(self.stop_degree) ** (1.0 - self.gamma)


@dataclass
class StoppedTree:
    parent: np.ndarray        # int64 per individual; -1 at the root
    generation: np.ndarray    # int32 per individual
    offspring: np.ndarray     # float64 per individual (its "degree" for coloring)
    kappa: int                # stopping generation; -1 if censored
    v_star: int               # lowest-index maximal-offspring individual in generation kappa
    censored: bool

    def generation_members(self, g: int) -> np.ndarray:
        return np.flatnonzero(self.generation == g).astype(np.int64)


def grow_stopped_tree(params: ColoringParams, pop_cap: int = POP_CAP_DEFAULT,
                      seed_or_rng=None) -> StoppedTree:
    """Grow with full parent bookkeeping until an offspring count reaches the threshold."""
    rng = as_rng(seed_or_rng)
    law = DegreeLaw(params.tau)
    sb = SizeBiasedLaw.from_degree_law(law)
    q = float(params.stop_degree)

    parents = [np.array([-1], dtype=np.int64)]
    counts: list[np.ndarray] = []
    gen_start = [0]  # flat index where each generation begins
    total = 1
    gen = 0
    current = np.array([0], dtype=np.int64)  # flat indices of the current generation
    while True:
        if gen == 0:
            if params.root_law == "degree":
                offspring = np.array([float(sample_degree(law, rng))])
            else:
                offspring = np.array([float(sample_size_biased(sb, rng))])
        else:
            offspring = sample_size_biased(sb, rng, size=len(current))
        counts.append(offspring)
        if offspring.max() >= q:
            kappa = gen
            break
        n_children = int(offspring.sum())
        if total + n_children > pop_cap:
            return StoppedTree(
                parent=np.concatenate(parents),
                generation=_generations(gen_start, total),
                offspring=np.concatenate(counts),
                kappa=-1, v_star=-1, censored=True,
            )
        parents.append(np.repeat(current, offspring.astype(np.int64)))
        gen_start.append(total)
        current = np.arange(total, total + n_children, dtype=np.int64)
        total += n_children
        gen += 1

    parent = np.concatenate(parents)
    generation = _generations(gen_start, total)
    offspring_flat = np.concatenate(counts)
    last = gen_start[kappa]
    v_star = last + int(np.argmax(counts[kappa]))
    return StoppedTree(parent=parent, generation=generation, offspring=offspring_flat,
                       kappa=kappa, v_star=v_star, censored=False)


def _generations(gen_start: list, total: int) -> np.ndarray:
    generation = np.empty(total, dtype=np.int32)
    bounds = gen_start + [total]
    for g in range(len(gen_start)):
        generation[bounds[g] : bounds[g + 1]] = g
    return generation


def starting_rule(tree: StoppedTree, params: ColoringParams, seed_or_rng=None) -> np.ndarray:
    """Colors of the generation-kappa individuals under the configured rule."""
    if tree.censored:
        raise ValueError("cannot color a censored tree")
    rng = as_rng(seed_or_rng)
    members = tree.generation_members(tree.kappa)
    degrees = tree.offspring[members]
    u = rng.random(len(members))
    return _colors_from_uniforms(degrees, params, u)


def _colors_from_uniforms(degrees: np.ndarray, params: ColoringParams, u: np.ndarray) -> np.ndarray:
    """Coloring kernel on shared uniforms; exposes the rule-1/rule-2 coupling.

    With the same u, switching rule 2 -> rule 1 can only turn blue leaves red
    (the low band's blue indicator u < p_e becomes u < 0).
    """
    q = float(params.stop_degree)
    q_gamma = q**params.gamma
    colors = np.full(len(degrees), NEUTRAL, dtype=np.int8)
    low_band = (degrees >= q) & (degrees < q_gamma)
    mixed = degrees >= q_gamma
    colors[mixed] = np.where(u[mixed] < params.tie_blue_prob, BLUE, RED)
    if params.rule == 1:
        colors[low_band] = RED
    else:
        colors[low_band] = np.where(u[low_band] < params.effective_error_prob, BLUE, RED)
    return colors


@dataclass
class RootColorOutcome:
    root_color: int
    kappa: int
    max_offspring_at_stop: float
    blue_leaf_count: int
    red_leaf_count: int
    censored: bool


def flow_to_root(tree: StoppedTree, leaf_colors: np.ndarray, tie_blue_prob: float = 0.5,
                 seed_or_rng=None) -> RootColorOutcome:
    """Propagate leaf colors generation by generation down to the root.

    One uniform is drawn per tree vertex up front and indexed by vertex, so
    two flows over the same tree with the same seed use identical coins at
    identical vertices regardless of which vertices actually tie.
    """
    rng = as_rng(seed_or_rng)
    n = len(tree.parent)
    coin_blue = rng.random(n) < tie_blue_prob
    colors = np.full(n, NEUTRAL, dtype=np.int8)
    members = tree.generation_members(tree.kappa)
    colors[members] = leaf_colors
    child_colors = colors[members]
    children = members
    for g in range(tree.kappa - 1, -1, -1):
        parents_of_children = tree.parent[children]
        gen_members = tree.generation_members(g)
        has_red = np.zeros(n, dtype=bool)
        has_blue = np.zeros(n, dtype=bool)
        has_red[parents_of_children[child_colors == RED]] = True
        has_blue[parents_of_children[child_colors == BLUE]] = True
        red_m = has_red[gen_members]
        blue_m = has_blue[gen_members]
        new = np.full(len(gen_members), NEUTRAL, dtype=np.int8)
        new[red_m & ~blue_m] = RED
        new[blue_m & ~red_m] = BLUE
        both = red_m & blue_m
        if np.any(both):
            new[both] = np.where(coin_blue[gen_members[both]], BLUE, RED)
        colors[gen_members] = new
        children = gen_members
        child_colors = new
    leaf = colors[members]
    return RootColorOutcome(
        root_color=int(colors[0]),
        kappa=tree.kappa,
        max_offspring_at_stop=float(tree.offspring[tree.v_star]),
        blue_leaf_count=int(np.count_nonzero(leaf == BLUE)),
        red_leaf_count=int(np.count_nonzero(leaf == RED)),
        censored=False,
    )


def color_once(params: ColoringParams, pop_cap: int = POP_CAP_DEFAULT,
               seed_or_rng=None) -> RootColorOutcome:
    """Grow, color the last generation, and flow to the root; one trial."""
    rng = as_rng(seed_or_rng)
    tree = grow_stopped_tree(params, pop_cap=pop_cap, seed_or_rng=rng)
    if tree.censored:
        return RootColorOutcome(NEUTRAL, -1, np.nan, 0, 0, True)
    leaf_colors = starting_rule(tree, params, seed_or_rng=rng)
    return flow_to_root(tree, leaf_colors, params.tie_blue_prob, seed_or_rng=rng)


def wilson_halfwidth(successes: int, n: int, z: float = 1.96) -> float:
    if n == 0:
        return 1.0
    phat = successes / n
    denom = 1.0 + z**2 / n
    return float(z * np.sqrt(phat * (1.0 - phat) / n + z**2 / (4.0 * n**2)) / denom)


def estimate_root_probs(params: ColoringParams, trials: int, pop_cap: int = POP_CAP_DEFAULT,
                        seed: int = 0) -> dict:
    """Monte-Carlo root-color frequencies with a Wilson 95% interval."""
    if trials < 1:
        raise ValueError("need at least one trial")
    blue = red = censored = 0
    for i in range(trials):
        out = color_once(params, pop_cap=pop_cap, seed_or_rng=spawn_rng(seed, i))
        if out.censored:
            censored += 1
        elif out.root_color == BLUE:
            blue += 1
        else:
            red += 1
    kept = blue + red
    p_blue = blue / kept if kept else np.nan
    return {
        "p_blue": p_blue,
        "p_red": red / kept if kept else np.nan,
        "ci_halfwidth": wilson_halfwidth(blue, kept),
        "censored_fraction": censored / trials,
        "trials": trials,
    }


def gamma_sweep(tau: float, rule: int, q_grid, gamma_grid, trials: int, seed: int,
                pop_cap: int = POP_CAP_DEFAULT) -> list[dict]:
    """Root-blue probability over a (gamma, Q) grid; one row per cell."""
    if not len(q_grid) or not len(gamma_grid):
        raise ValueError("grids must be nonempty")
    rows = []
    cell = 0
    for q in q_grid:
        for gamma in gamma_grid:
            params = ColoringParams(tau=tau, stop_degree=q, gamma=gamma, rule=rule)
            cell_seed = int(np.random.SeedSequence(seed, spawn_key=(cell,)).generate_state(1)[0])
            est = estimate_root_probs(params, trials, pop_cap=pop_cap, seed=cell_seed)
            rows.append({"gamma": gamma, "Q": q, "rule": rule, "trials": trials, **{
                k: est[k] for k in ("p_blue", "p_red", "ci_halfwidth", "censored_fraction")}})
            cell += 1
    return rows
