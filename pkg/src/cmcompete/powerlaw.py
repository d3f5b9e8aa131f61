"""Power-law degree distribution with minimum degree 2, plus its size-biased companion.

The degree law is fixed as

    D = floor(2 * U ** (-1 / (tau - 1))),   U uniform on (0, 1],  tau in (2, 3),

which has P(D >= 2) = 1 and the exact tail

    P(D > x) = (2 / (floor(x) + 1)) ** (tau - 1)   for x >= 2,

so the usual power-law sandwich holds with explicit constants:

    1 / x**(tau-1)  <=  P(D > x)  <=  2**(tau-1) / x**(tau-1).

The size-biased companion is the law of (degree - 1) of the vertex found at a
uniformly chosen half-edge: f*_j = (j + 1) P(D = j + 1) / E[D].  Its tail decays
like x**(2 - tau) and in particular has infinite mean.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.special import zeta

# Degrees are clipped here when converting astronomically rare draws to int64.
MAX_INT_DEGREE = 2**62
# Head-summation cutoff for E[D]; with the Euler-Maclaurin tail correction the
# truncation remainder is ~K**(-tau-2) < 1e-20, far below the 1e-12 target.
_MEAN_CUTOFF = 100_000
# Size of the tabulated size-biased CDF; draws landing beyond the table are
# inverted by bisection on the exact tail.
_SB_TABLE_SIZE = 1 << 20


@dataclass(frozen=True)
class DegreeLaw:
    """The concrete degree distribution; immutable and safe to share."""

    tau: float
    x_min: int = 2

    def __post_init__(self):
        if not 2.0 < float(self.tau) < 3.0:
            raise ValueError(f"tau must lie in the open interval (2, 3), got {self.tau}")
        if self.x_min != 2:
            raise ValueError("this law is defined with minimum degree fixed at 2")


def tail_prob(law: DegreeLaw, x):
    """P(D > x).  Equals 1 for x < 2 and (2/(floor(x)+1))**(tau-1) otherwise."""
    xa = np.asarray(x, dtype=float)
    expo = law.tau - 1.0
    t = (2.0 / (np.floor(np.maximum(xa, 2.0)) + 1.0)) ** expo
    out = np.where(xa < 2.0, 1.0, t)
    return float(out) if out.ndim == 0 else out


def pmf(law: DegreeLaw, k):
    """P(D = k) as a tail difference; zero below the minimum degree."""
    ka = np.asarray(k, dtype=float)
    out = np.where(ka < 2.0, 0.0, tail_prob(law, ka - 1.0) - tail_prob(law, ka))
    return float(out) if out.ndim == 0 else out


def sample_degree(law: DegreeLaw, rng: np.random.Generator, size=None):
    """Inversion sampler, exactly consistent with ``pmf``.

    The raw value floor(2 * U**(-1/(tau-1))) is corrected by at most one unit
    so that the sampled k always satisfies tail(k) < U <= tail(k-1), making the
    sampler immune to floating-point rounding at the pmf boundaries.
    """
    u = 1.0 - rng.random(size)  # uniform on (0, 1]
    expo = law.tau - 1.0
    raw = np.floor(2.0 * u ** (-1.0 / expo))
    k = np.maximum(raw, 2.0)
    k = np.where(u <= (2.0 / (k + 1.0)) ** expo, k + 1.0, k)
    k = np.where(u > (2.0 / k) ** expo, k - 1.0, k)
    k = np.minimum(k, float(MAX_INT_DEGREE))
    if size is None:
        return int(k)
    return k.astype(np.int64)


@lru_cache(maxsize=None)
def _mean_degree_cached(tau: float) -> float:
    # E[D] = sum_{k>=1} P(D >= k) = 2 + 2**(tau-1) * sum_{k>=3} k**(1-tau).
    s = tau - 1.0
    ks = np.arange(3, _MEAN_CUTOFF + 1, dtype=float)
    head = float(np.sum(ks**-s))
    a = float(_MEAN_CUTOFF + 1)
    # Euler-Maclaurin correction of the truncated sum; remainder < a**(-s-3).
    tail_sum = a ** (1.0 - s) / (s - 1.0) + 0.5 * a**-s + s * a ** (-s - 1.0) / 12.0
    return 2.0 + 2.0**s * (head + tail_sum)


def mean_degree(law: DegreeLaw) -> float:
    """E[D], computed once per tau by summation with an analytic remainder bound."""
    return _mean_degree_cached(float(law.tau))


@dataclass(frozen=True)
class SizeBiasedLaw:
    """Law of the forward degree D* = (size-biased D) - 1; support {1, 2, ...}."""

    base: DegreeLaw
    mean_degree: float

    @classmethod
    def from_degree_law(cls, law: DegreeLaw) -> "SizeBiasedLaw":
        return cls(base=law, mean_degree=mean_degree(law))

    @property
    def tau(self) -> float:
        return self.base.tau


def size_biased_pmf(sb: SizeBiasedLaw, j):
    """f*_j = (j+1) P(D = j+1) / E[D]; zero for j < 1."""
    ja = np.asarray(j, dtype=float)
    out = np.where(ja < 1.0, 0.0, (ja + 1.0) * pmf(sb.base, ja + 1.0) / sb.mean_degree)
    return float(out) if out.ndim == 0 else out


def _size_biased_partial_mass(tau: float, mean: float, k):
    """sum_{j=2}^{k} j * P(D = j), exact via the Hurwitz zeta function.

    Abel summation gives sum_{j=2}^k j p_j = 2 + sum_{i=2}^{k-1} tail(i) - k*tail(k),
    and the inner sum is 2**(tau-1) * (zeta(tau-1, 3) - zeta(tau-1, k+1)).
    """
    s = tau - 1.0
    ka = np.asarray(k, dtype=float)
    inner = 2.0**s * (zeta(s, 3.0) - zeta(s, ka + 1.0))
    return 2.0 + inner - ka * (2.0 / (ka + 1.0)) ** s


def size_biased_tail(sb: SizeBiasedLaw, j):
    """P(D* > j), exact.  D* = D' - 1 where D' is the size-biased degree."""
    ja = np.floor(np.asarray(j, dtype=float))
    k = ja + 1.0  # tail of D' strictly above k
    s = sb.tau - 1.0
    mass_above = 2.0**s * zeta(s, k + 1.0) + k * (2.0 / (k + 1.0)) ** s
    out = np.where(ja < 1.0, 1.0, mass_above / sb.mean_degree)
    return float(out) if out.ndim == 0 else out


@lru_cache(maxsize=None)
def _sb_cdf_table(tau: float):
    law = DegreeLaw(tau)
    sb = SizeBiasedLaw.from_degree_law(law)
    ks = np.arange(2, _SB_TABLE_SIZE + 2, dtype=float)
    s = tau - 1.0
    tail_dprime = (2.0**s * zeta(s, ks + 1.0) + ks * (2.0 / (ks + 1.0)) ** s) / sb.mean_degree
    return 1.0 - tail_dprime  # cdf[i] = P(D' <= i + 2)


def _sb_tail_dprime(tau: float, mean: float, k):
    s = tau - 1.0
    return (2.0**s * zeta(s, k + 1.0) + k * (2.0 / (k + 1.0)) ** s) / mean


def sample_size_biased(sb: SizeBiasedLaw, rng: np.random.Generator, size=None):
    """Draw D* values, returned as float64 (integer-valued; exact below 2**53).

    Inversion uses a tabulated CDF for D' <= ~1e6 and bisection on the exact
    zeta-form tail beyond it, so the far tail (which has infinite mean) is
    sampled without truncation.
    """
    scalar = size is None
    u = rng.random(1 if scalar else size)
    cdf = _sb_cdf_table(float(sb.tau))
    idx = np.searchsorted(cdf, u, side="left")
    out = idx + 2.0
    beyond = idx >= len(cdf)
    if np.any(beyond):
        out[beyond] = _sb_invert_tail(sb, u[beyond])
    out = out - 1.0  # D* = D' - 1
    return float(out[0]) if scalar else out


def _sb_invert_tail(sb: SizeBiasedLaw, u: np.ndarray) -> np.ndarray:
    """Smallest k with P(D' <= k) >= u, for u beyond the tabulated range."""
    tau, mean = sb.tau, sb.mean_degree
    v = 1.0 - u  # want smallest k with tail(k) <= v
    lo = np.full(u.shape, float(_SB_TABLE_SIZE + 1))
    hi = lo * 2.0
    for _ in range(200):
        need = _sb_tail_dprime(tau, mean, hi) > v
        if not np.any(need):
            break
        hi[need] *= 2.0
    for _ in range(80):
        mid = np.floor(0.5 * (lo + hi))
        go_low = _sb_tail_dprime(tau, mean, mid) <= v
        hi[go_low] = mid[go_low]
        lo[~go_low] = mid[~go_low]
        if np.all(hi - lo <= 1.0):
            break
    return hi


def size_biased_constant_bounds(sb: SizeBiasedLaw, x_max: float = 1e12, points: int = 2000):
    """Empirical (c1*, C1*) with c1*/x**(tau-2) <= P(D* > x) <= C1*/x**(tau-2) on [1, x_max]."""
    xs = np.unique(np.floor(np.logspace(0.0, np.log10(x_max), points)))
    ratios = size_biased_tail(sb, xs) * xs ** (sb.tau - 2.0)
    return float(ratios.min()), float(ratios.max())
