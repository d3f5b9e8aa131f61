"""Two-color equal-speed competition on configuration-model graphs with
power-law degrees, plus the branching-process tools and closed-form
predictors that describe its outcome."""

from ._rng import as_rng, spawn_rng
from .branching import (GwTrajectory, YEstimate, YSample, max_sum_diagnostic,
                        max_sum_ratio, nested_y_estimates,
                        sample_y_distribution, simulate_until, y_estimate)
from .coloring import (ColoringParams, RootColorOutcome, StoppedTree,
                       color_once, estimate_root_probs, flow_to_root,
                       gamma_sweep, grow_stopped_tree, starting_rule)
from .competition import (BLUE, RED, UNCOLORED, CompetitionResult,
                          GrowthTrace, OutcomeRecord, classify_outcome,
                          extract_growth, run_competition, source_distance)
from .graph import (DegreeSequence, Multigraph, bfs_layers, dump_graph,
                    half_edges_above, load_graph, sample_degree_sequence,
                    uniform_matching)
from .powerlaw import (DegreeLaw, SizeBiasedLaw, mean_degree, pmf,
                       sample_degree, sample_size_biased, size_biased_pmf,
                       size_biased_tail, tail_prob)
from .theory import (BOUNDARY, COEXIST_EQUAL_T, COEXIST_OFFSET_T, NO_COEXIST,
                     TheoryInput, TheoryPrediction, classify_case,
                     climb_layer, climb_layer_log, coexistence_gamma,
                     critical_time, distance_closed, distance_minimized,
                     i_star, avalanche_layer_log, nu_log_bounds,
                     oscillation_exponents, peak_exponents, predict,
                     times_and_fractions)

__all__ = [name for name in dir() if not name.startswith("_")]
__version__ = "0.1.0"
