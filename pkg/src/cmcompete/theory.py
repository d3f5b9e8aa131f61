"""Closed-form predictors for the competition outcome and typical distances.

Everything here is a pure function of (n, tau, y_red, y_blue), where the y's
are the doubly-exponential growth rates of the two source neighborhoods.  The
key derived quantities, writing s = tau - 2 and x_j = (loglog n -
log((tau-1) y_j)) / |log s|:

* climb time and fractional part:  t_j = floor(x_j - 1),  b_j = frac(x_j),
  so t_j + b_j + 1 = x_j exactly;
* peak-crossing exponents:  alpha_j = 1 - s**b_j / (tau - 1)  and delta_j
  solving s**delta_j = alpha_j (tau - 1);
* regime: with q = min(y)/max(y), coexistence iff q > s (both colors keep a
  linear share); otherwise the slower color's mass and maximal degree are
  n to random oscillating exponents, with four parity cases E</E>/O</O>
  depending on whether t_blue - (t_red + 1) is even/odd and on the comparison
  tau - 1 <> s**b_red + s**b_blue;
* two equivalent distance predictors (a closed form and a split-minimization
  search), which must agree on every input.

All evaluators derive (t, b) internally from (n, tau, y) and refuse free
(t, b) pairs: the identities tested here hold only on consistent inputs.
Inputs are relabeled internally so that "blue" is the color with the smaller
growth rate, matching the loser convention used throughout.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

# Regime labels.
NO_COEXIST = "no_coexist"
COEXIST_EQUAL_T = "coexist_equal_t"       # both colors top out at the same step
COEXIST_OFFSET_T = "coexist_offset_t"     # loser tops out one step later
BOUNDARY = "boundary"                     # q within 1e-12 of tau - 2: not classified

BOUNDARY_EPS = 1e-12
DEFAULT_LOG_CORRECTION_C = 8.0


@dataclass(frozen=True)
class TheoryInput:
    n: float
    tau: float
    y_red: float
    y_blue: float
    rho: float | None = None

    def __post_init__(self):
        if self.n < 16:
            raise ValueError("n must be at least 16 (enters only through loglog n)")
        if not 2.0 < self.tau < 3.0:
            raise ValueError("tau must lie in (2, 3)")
        if self.y_red <= 0 or self.y_blue <= 0:
            raise ValueError("growth rates must be positive")


def _log_s(tau: float) -> float:
    return abs(math.log(tau - 2.0))


def _x_value(n: float, tau: float, y: float) -> float:
    """(loglog n - log((tau-1) y)) / |log(tau-2)|, the real-valued climb time + 1."""
    x = (math.log(math.log(n)) - math.log((tau - 1.0) * y)) / _log_s(tau)
    if x < 1.0:
        raise ValueError(f"growth rate {y} too large for n={n}: negative climb time")
    return x


def times_and_fractions(inp: TheoryInput):
    """(t_red, b_red, t_blue, b_blue): integer climb times and fractional parts."""
    xr = _x_value(inp.n, inp.tau, inp.y_red)
    xb = _x_value(inp.n, inp.tau, inp.y_blue)
    return int(math.floor(xr - 1.0)), xr - math.floor(xr), int(math.floor(xb - 1.0)), xb - math.floor(xb)


def _ordered(inp: TheoryInput) -> TheoryInput:
    """Relabel so that blue is the slower-growing (losing) color."""
    if inp.y_blue <= inp.y_red:
        return inp
    return TheoryInput(inp.n, inp.tau, inp.y_blue, inp.y_red, inp.rho)


def classify_case(inp: TheoryInput):
    """(case, regime) with case one of 'E<', 'E>', 'O<', 'O>' (None outside no_coexist)."""
    o = _ordered(inp)
    tau = o.tau
    q = o.y_blue / o.y_red
    if abs(q - (tau - 2.0)) < BOUNDARY_EPS:
        return None, BOUNDARY
    t_r, b_r, t_b, b_b = times_and_fractions(o)
    if q > tau - 2.0:
        return None, COEXIST_EQUAL_T if t_b == t_r else COEXIST_OFFSET_T
    parity_even = (t_b - (t_r + 1)) % 2 == 0
    s = tau - 2.0
    above = tau - 1.0 > s**b_r + s**b_b
    case = ("E" if parity_even else "O") + (">" if above else "<")
    return case, NO_COEXIST


@dataclass
class PeakExponents:
    alpha_red: float
    alpha_blue: float
    delta_red: float
    delta_blue: float
    gamma: float | None  # mixed-band width exponent; defined in coexistence only


def peak_exponents(inp: TheoryInput) -> PeakExponents:
    o = _ordered(inp)
    tau = o.tau
    s = tau - 2.0
    t_r, b_r, t_b, b_b = times_and_fractions(o)
    alpha_r = 1.0 - s**b_r / (tau - 1.0)
    alpha_b = 1.0 - s**b_b / (tau - 1.0)
    delta_r = math.log(alpha_r * (tau - 1.0)) / math.log(s)
    delta_b = math.log(alpha_b * (tau - 1.0)) / math.log(s)
    _, regime = classify_case(o)
    gamma = None
    if regime in (COEXIST_EQUAL_T, COEXIST_OFFSET_T):
        gamma = alpha_b * s ** ((1 if t_b == t_r else 0) - 1) / alpha_r
    return PeakExponents(alpha_r, alpha_b, delta_r, delta_b, gamma)


def coexistence_gamma(inp: TheoryInput) -> float:
    """Mixed-band exponent; raises outside the coexistence regimes."""
    pe = peak_exponents(inp)
    if pe.gamma is None:
        raise ValueError("gamma is defined only in the coexistence regimes")
    return pe.gamma


def critical_time(inp: TheoryInput):
    """(t_c, 2*frac(t_c)): when the leader's downward sweep meets the loser's climb."""
    o = _ordered(inp)
    _, regime = classify_case(o)
    if regime != NO_COEXIST:
        raise ValueError("the meeting time is defined only in the no-coexistence regime")
    t_r, b_r, t_b, b_b = times_and_fractions(o)
    delta_r = peak_exponents(o).delta_red
    t_c = (t_b - t_r + 1) / 2.0 + (b_b - delta_r) / 2.0
    frac2 = 2.0 * (t_c - math.floor(t_c))
    return t_c, frac2


def oscillation_exponents(inp: TheoryInput):
    """(mass, degree, half-edge, paths) oscillating prefactors of the loser's exponents.

    mass = half_edge + paths is an exact algebraic identity; mass scaled by
    sqrt(q)/(tau-1) is the loser's total-mass exponent, degree likewise its
    maximal-degree exponent.
    """
    o = _ordered(inp)
    case, regime = classify_case(o)
    if regime != NO_COEXIST:
        raise ValueError("oscillating exponents are defined only in the no-coexistence regime")
    tau = o.tau
    s = tau - 2.0
    _, b_r, _, b_b = times_and_fractions(o)
    is_o = case[0] == "O"
    o_less = case == "O<"
    o_greater = case == "O>"
    e_less = case == "E<"
    e_greater = case == "E>"
    amp = tau - 1.0 - s**b_r

    mass = s ** ((b_r - b_b - 1 - is_o) / 2.0) * (s ** (b_b + o_less) + amp * s**o_greater)
    if e_less or o_greater:
        degree = s ** ((b_r + b_b - 1 - o_greater) / 2.0)
        half_edge = degree
    else:
        degree = s ** ((b_r - b_b - 1 - o_less) / 2.0) * amp
        half_edge = degree * (3.0 - tau) + s ** ((b_r + b_b - e_greater) / 2.0)
    paths = amp * s ** ((b_r - b_b + e_greater - e_less) / 2.0)
    return mass, degree, half_edge, paths


def distance_closed(inp: TheoryInput) -> int:
    """floor(x_blue) + floor(x_red) - 1 + [s**b_red + s**b_blue < tau-1]."""
    tau = inp.tau
    s = tau - 2.0
    xr = _x_value(inp.n, tau, inp.y_red)
    xb = _x_value(inp.n, tau, inp.y_blue)
    b_r, b_b = xr - math.floor(xr), xb - math.floor(xb)
    extra = 1 if s**b_r + s**b_b < tau - 1.0 else 0
    return int(math.floor(xr) + math.floor(xb)) - 1 + extra


def distance_minimized(inp: TheoryInput) -> int:
    """Smallest k whose best split keeps both growth volumes below log n.

    Searches min over k1 in [0, k-1] of s**-(k1+1) y_red + s**-(k-k1) y_blue
    and returns the first k where that minimum reaches log n.  Agrees with
    ``distance_closed`` on every consistent input; the search starts at k = 1
    because adjacent sources (distance 1) are reachable for large rates.
    """
    tau = inp.tau
    s = tau - 2.0
    log_n = math.log(inp.n)
    # the real-valued climb times bound the answer; tiny rates make the
    # distance far larger than any fixed multiple of loglog n
    k_max = int(_x_value(inp.n, tau, inp.y_red) + _x_value(inp.n, tau, inp.y_blue)) + 4
    for k in range(1, k_max + 1):
        k1 = np.arange(k, dtype=float)
        best = np.min(s ** -(k1 + 1.0) * inp.y_red + s ** -(k - k1) * inp.y_blue)
        if best >= log_n:
            return k
    raise RuntimeError("split-minimization search exceeded its bound; inconsistent input")


def climb_layer_log(i: int, rho_eff: float, tau: float, n: float,
                    c: float = DEFAULT_LOG_CORRECTION_C) -> float:
    """log u_i for the upward layer recursion u_{i+1} = (u_i / (C log n))**(1/s).

    Closed form: u_i = n**(rho s**-(i+1)) * (C log n)**(-e_i) with
    e_i = ((1/s)**(i+1) - 1) / (3 - tau).
    """
    if i < 0 or c <= 0:
        raise ValueError("need i >= 0 and C > 0")
    s = tau - 2.0
    e_i = ((1.0 / s) ** (i + 1) - 1.0) / (3.0 - tau)
    return rho_eff * s ** -(i + 1.0) * math.log(n) - e_i * math.log(c * math.log(n))


def climb_layer(i: int, rho_eff: float, tau: float, n: float,
                c: float = DEFAULT_LOG_CORRECTION_C) -> float:
    """u_i itself; inf when it exceeds float range (use climb_layer_log then)."""
    log_u = climb_layer_log(i, rho_eff, tau, n, c)
    try:
        return math.exp(log_u)
    except OverflowError:
        return math.inf


def i_star(rho_eff: float, tau: float):
    """(i*, b): number of upward layers to the top, and the leftover fraction.

    i* = floor(x) - 1 with x = -log((tau-1) rho_eff) / |log s| and b = frac(x).
    Requires (tau-1) rho_eff <= tau-2 so that at least one layer fits (i* >= 0).
    """
    if not 0.0 < rho_eff * (tau - 1.0) <= tau - 2.0:
        raise ValueError("need 0 < rho_eff (tau-1) <= tau-2 for a nonnegative layer count")
    x = -math.log((tau - 1.0) * rho_eff) / _log_s(tau)
    b = x - math.floor(x)
    return int(math.floor(x)) - 1, b


def avalanche_layer_log(ell: int, alpha: float, b: float, tau: float, n: float,
                        c: float = DEFAULT_LOG_CORRECTION_C) -> float:
    """log of the downward layer threshold after ell steps of u -> C log n * u**s.

    Closed form: alpha s**(ell-1) log n
                 + [b s**(ell-1) + (1 - s**(ell-1)) / (3 - tau)] log(C log n).
    """
    if ell < 1:
        raise ValueError("the downward recursion starts at ell = 1")
    s = tau - 2.0
    w = s ** (ell - 1.0)
    return alpha * w * math.log(n) + (b * w + (1.0 - w) / (3.0 - tau)) * math.log(c * math.log(n))


def nu_log_bounds(j: int, inp: TheoryInput, c1_star: float, big_c1_star: float,
                  c: float = DEFAULT_LOG_CORRECTION_C):
    """(log lower, log upper) bracketing the truncated forward-degree mean nu_j.

    nu_j is the expected forward degree truncated at the leader's downward
    threshold j-1 steps after the loser's last jump; the bracket is
    c1* u**(3-tau) <= nu_j <= C1* u**(3-tau) with u that threshold.
    """
    if j < 1:
        raise ValueError("nu_j is indexed from j = 1")
    o = _ordered(inp)
    t_c, _ = critical_time(o)
    pe = peak_exponents(o)
    _, b_r, _, _ = times_and_fractions(o)
    ell = int(math.floor(t_c)) + j  # == t_b + j - 1 - t_red with t_b the last-jump time
    log_u = avalanche_layer_log(ell, pe.alpha_red, b_r, o.tau, o.n, c)
    core = (3.0 - o.tau) * log_u
    return math.log(c1_star) + core, math.log(big_c1_star) + core


@dataclass
class TheoryPrediction:
    """Every derived quantity for one (n, tau, y_red, y_blue) after loser relabeling."""

    n: float
    tau: float
    y_red: float               # faster-growing rate (winner)
    y_blue: float              # slower-growing rate (loser)
    q: float
    t_red: int
    t_blue: int
    b_red: float
    b_blue: float
    alpha_red: float
    alpha_blue: float
    delta_red: float
    delta_blue: float
    case: str | None
    regime: str
    t_c: float | None
    frac_2tc: float | None
    mass_factor: float | None          # oscillating prefactors; no-coexistence only
    degree_factor: float | None
    half_edge_factor: float | None
    paths_factor: float | None
    gamma: float | None                # coexistence only
    distance: int
    blue_mass_exponent: float | None   # sqrt(q) * mass_factor / (tau - 1)
    max_degree_exponent: float

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def predict(inp: TheoryInput) -> TheoryPrediction:
    o = _ordered(inp)
    tau = o.tau
    s = tau - 2.0
    q = o.y_blue / o.y_red
    t_r, b_r, t_b, b_b = times_and_fractions(o)
    case, regime = classify_case(o)
    pe = peak_exponents(o)
    t_c = frac2 = None
    mass = degree = half_edge = paths = blue_mass_expo = None
    if regime == NO_COEXIST:
        t_c, frac2 = critical_time(o)
        mass, degree, half_edge, paths = oscillation_exponents(o)
        blue_mass_expo = math.sqrt(q) * mass / (tau - 1.0)
        max_degree_expo = math.sqrt(q) * degree / (tau - 1.0)
    elif regime == COEXIST_EQUAL_T:
        max_degree_expo = 1.0 / (tau - 1.0)
    elif regime == COEXIST_OFFSET_T:
        if tau - 1.0 < s**b_r + s**b_b:
            max_degree_expo = s**b_b / (tau - 1.0)
        else:
            max_degree_expo = (tau - 1.0 - s**b_r) / (tau - 1.0)
    else:  # boundary: report the coexistence-side cap
        max_degree_expo = float("nan")
    return TheoryPrediction(
        n=o.n, tau=tau, y_red=o.y_red, y_blue=o.y_blue, q=q,
        t_red=t_r, t_blue=t_b, b_red=b_r, b_blue=b_b,
        alpha_red=pe.alpha_red, alpha_blue=pe.alpha_blue,
        delta_red=pe.delta_red, delta_blue=pe.delta_blue,
        case=case, regime=regime, t_c=t_c, frac_2tc=frac2,
        mass_factor=mass, degree_factor=degree,
        half_edge_factor=half_edge, paths_factor=paths,
        gamma=pe.gamma, distance=distance_closed(o),
        blue_mass_exponent=blue_mass_expo, max_degree_exponent=max_degree_expo,
    )
