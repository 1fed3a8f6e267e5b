"""Extreme-value machinery for maxima of i.i.d. fading powers.

Covers the von Mises check for the Gumbel domain of attraction, the
normalizing constants ``(a_M, b_M)`` of the sample maximum, and their
push-through to the spectral-efficiency scale ``C(x) = log2(1 + x)``.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence

import numpy as np
from scipy import special, stats

from .errors import BracketError, DomainError, NumericalOverflowError

LOG2E = 1.0 / math.log(2.0)
FD_REL_STEP = 1e-6
TYPE1_TOL = 1e-3
TYPE1_WINDOW = 5
BISECT_REL_WIDTH = 1e-12
TINY_DENSITY = 1e-290

# 1 - F levels used by default_tail_grid
DEFAULT_TAIL_LEVELS = (1e-2, 1e-4, 1e-8, 1e-16, 1e-32, 1e-64, 1e-128, 1e-256)


@dataclass(frozen=True)
class ParentDistribution:
    """CDF/pdf bundle of a nonnegative fading-power law.

    ``sf`` (the survival function ``1 - F``) is optional but should be given
    whenever it can be evaluated without cancellation, since every tail
    computation here goes through it.
    """

    cdf: Callable[[float], float]
    pdf: Callable[[float], float]
    pdf_derivative: Optional[Callable[[float], float]] = None
    upper_endpoint: float = math.inf
    sf: Optional[Callable[[float], float]] = None
    name: str = field(default="custom", compare=False)

    def survival(self, x: float) -> float:
        if self.sf is not None:
            return float(self.sf(x))
        return 1.0 - float(self.cdf(x))

    def density_slope(self, x: float) -> float:
        if self.pdf_derivative is not None:
            return float(self.pdf_derivative(x))
        h = FD_REL_STEP * max(abs(x), 1.0)
        return (float(self.pdf(x + h)) - float(self.pdf(x - h))) / (2.0 * h)


@dataclass(frozen=True)
class NormalizingConstants:
    a: float
    b: float
    sample_size: int


@dataclass(frozen=True)
class GumbelAffine:
    """Scale ``c`` and location ``d`` (bps/Hz) of the limiting max spectral efficiency."""

    c: float
    d: float
    sample_size: int
    snr: float


@dataclass(frozen=True)
class Type1Check:
    grid: tuple
    values: tuple
    converged: bool


# --------------------------------------------------------------------------
# built-in parent laws


def exponential_power(mean: float = 1.0) -> ParentDistribution:
    """Power of a Rayleigh-faded gain: exponential with the given mean."""
    if mean <= 0:
        raise ValueError("mean must be positive")
    lam = 1.0 / mean

    def cdf(x):
        return -math.expm1(-lam * x) if x > 0 else 0.0

    def sf(x):
        return math.exp(-lam * x) if x > 0 else 1.0

    def pdf(x):
        return lam * math.exp(-lam * x) if x >= 0 else 0.0

    def dpdf(x):
        return -lam * lam * math.exp(-lam * x) if x >= 0 else 0.0

    return ParentDistribution(cdf, pdf, dpdf, math.inf, sf, name=f"exponential(mean={mean:g})")


def rician_power(k_factor: float) -> ParentDistribution:
    """Unit-mean power of a Rician gain with LOS-to-scatter ratio ``k_factor``.

    ``2 (k + 1) X`` is noncentral chi-square with 2 degrees of freedom and
    noncentrality ``2k``.
    """
    k = float(k_factor)
    if k < 0:
        raise ValueError("k_factor must be nonnegative")
    scale = 2.0 * (k + 1.0)
    nc = 2.0 * k

    def cdf(x):
        return float(stats.ncx2.cdf(scale * x, 2, nc)) if x > 0 else 0.0

    def sf(x):
        return float(stats.ncx2.sf(scale * x, 2, nc)) if x > 0 else 1.0

    def pdf(x):
        if x < 0:
            return 0.0
        z = 2.0 * math.sqrt(k * (k + 1.0) * x)
        # I0(z) = i0e(z) * exp(z)
        return (k + 1.0) * math.exp(-k - (k + 1.0) * x + z) * special.i0e(z)

    def dpdf(x):
        if x <= 0:
            return 0.0 if x < 0 else -(k + 1.0) ** 2 * math.exp(-k) * (1.0 - k)
        z = 2.0 * math.sqrt(k * (k + 1.0) * x)
        slope = math.sqrt(k * (k + 1.0) / x) * special.i1e(z) / special.i0e(z)
        return pdf(x) * (slope - (k + 1.0))

    return ParentDistribution(cdf, pdf, dpdf, math.inf, sf, name=f"rician(k={k:g})")


def lognormal_sigma(sigma_db: float) -> float:
    """Natural-log spread corresponding to a dB spread."""
    return float(sigma_db) * math.log(10.0) / 10.0


def lognormal_power(sigma_db: float) -> ParentDistribution:
    """Unit-mean lognormal power with shadowing spread ``sigma_db`` (dB)."""
    if sigma_db <= 0:
        raise ValueError("sigma_db must be positive")
    s = lognormal_sigma(sigma_db)
    mu = -0.5 * s * s

    def t(x):
        return (math.log(x) - mu) / s

    def cdf(x):
        return float(special.ndtr(t(x))) if x > 0 else 0.0

    def sf(x):
        return float(special.ndtr(-t(x))) if x > 0 else 1.0

    def pdf(x):
        if x <= 0:
            return 0.0
        u = t(x)
        return math.exp(-0.5 * u * u) / (x * s * math.sqrt(2.0 * math.pi))

    def dpdf(x):
        if x <= 0:
            return 0.0
        return -pdf(x) / x * (1.0 + t(x) / s)

    return ParentDistribution(cdf, pdf, dpdf, math.inf, sf, name=f"lognormal(sigma_db={sigma_db:g})")


def pareto_tail(alpha: float = 2.0) -> ParentDistribution:
    """``F(x) = 1 - x^-alpha`` on ``x >= 1``; a Frechet-domain test law."""

    def cdf(x):
        return 1.0 - x ** -alpha if x > 1 else 0.0

    def sf(x):
        return x ** -alpha if x > 1 else 1.0

    def pdf(x):
        return alpha * x ** (-alpha - 1.0) if x >= 1 else 0.0

    def dpdf(x):
        return -alpha * (alpha + 1.0) * x ** (-alpha - 2.0) if x >= 1 else 0.0

    return ParentDistribution(cdf, pdf, dpdf, math.inf, sf, name=f"pareto(alpha={alpha:g})")


# --------------------------------------------------------------------------
# operations


def reciprocal_hazard(dist: ParentDistribution, x: float) -> float:
    """``(1 - F(x)) / f(x)``."""
    if x >= dist.upper_endpoint:
        raise DomainError(f"x={x} is at or beyond the upper endpoint")
    tail = dist.survival(x)
    dens = float(dist.pdf(x))
    if tail <= 0.0:
        raise DomainError(f"1 - F({x}) = 0; x is outside the usable support")
    if dens <= 0.0:
        raise DomainError(f"f({x}) = 0; x is outside the usable support")
    return tail / dens


def von_mises_ratio(dist: ParentDistribution, x: float) -> float:
    """``f'(x) (1 - F(x)) / f(x)^2``; tends to -1 for Gumbel-domain laws."""
    return dist.density_slope(x) * reciprocal_hazard(dist, x) / float(dist.pdf(x))


def check_type1(dist: ParentDistribution, grid: Sequence[float] | None = None) -> Type1Check:
    """Evaluate the von Mises ratio along a grid climbing toward the upper endpoint.

    Converged means the last value is within 1e-3 of -1 and the distance to
    -1 does not grow over the final five grid points.
    """
    if grid is None:
        grid = default_tail_grid(dist)
    grid = [float(x) for x in grid]
    if len(grid) == 0:
        raise ValueError("empty grid")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly increasing")
    if grid[-1] >= dist.upper_endpoint:
        raise DomainError(f"grid point {grid[-1]} is at or beyond the upper endpoint")

    values = []
    for i, x in enumerate(grid):
        if dist.survival(x) <= 0.0:
            last = grid[i - 1] if i > 0 else None
            raise NumericalOverflowError(
                f"1 - F underflowed to 0 at x={x}; last usable point {last}", last_usable=last
            )
        values.append(von_mises_ratio(dist, x))

    dev = [abs(v + 1.0) for v in values[-TYPE1_WINDOW:]]
    monotone = all(b <= a + 1e-12 for a, b in zip(dev, dev[1:]))
    converged = bool(dev[-1] <= TYPE1_TOL and monotone)
    return Type1Check(tuple(grid), tuple(values), converged)


def upper_quantile(dist: ParentDistribution, tail: float) -> float:
    """Solve ``1 - F(x) = tail`` by bracketed bisection.

    The bracket grows by doubling from ``x = 1``; bisection stops when the
    bracket's relative width drops to 1e-12.
    """
    if not 0.0 < tail < 1.0:
        raise ValueError("tail probability must lie in (0, 1)")
    x2 = dist.upper_endpoint

    def excess(x):
        return dist.survival(x) - tail

    lo, hi = 0.0, 1.0
    if hi >= x2:
        raise BracketError("upper endpoint below 1; bounded support is not handled")
    while excess(hi) > 0.0:
        lo, hi = hi, 2.0 * hi
        if hi >= x2 or hi > 1e300:
            raise BracketError(
                f"no finite bracket for 1 - F(x) = {tail:g} below the upper endpoint"
            )

    for _ in range(4000):
        if hi - lo <= BISECT_REL_WIDTH * hi:
            break
        mid = 0.5 * (lo + hi)
        if excess(mid) > 0.0:
            lo = mid
        else:
            hi = mid
    return 0.5 * (lo + hi)


def default_tail_grid(dist: ParentDistribution, levels: Sequence[float] = DEFAULT_TAIL_LEVELS) -> list:
    """Upper quantiles at the given tail levels, for ``check_type1``.

    Climbing stops once the density or its slope underflows.
    """
    pts = []
    for p in levels:
        x = upper_quantile(dist, p)
        if abs(float(dist.pdf(x))) < TINY_DENSITY or abs(dist.density_slope(x)) < TINY_DENSITY:
            break
        if pts and x <= pts[-1]:
            continue
        pts.append(x)
    return pts


def normalizing_constants(dist: ParentDistribution, M: int) -> NormalizingConstants:
    """Gumbel normalizing constants: ``b`` is the ``1 - 1/M`` quantile, ``a = eta(b)``."""
    M = int(M)
    if M < 2:
        raise ValueError("sample size M must be at least 2")
    b = upper_quantile(dist, 1.0 / M)
    a = reciprocal_hazard(dist, b)
    return NormalizingConstants(a=a, b=b, sample_size=M)


def spectral_efficiency_constants(nc: NormalizingConstants, snr: float) -> GumbelAffine:
    """Map power-scale constants to the scale of ``max_m log2(1 + snr * xi_m)``."""
    if not snr > 0:
        raise ValueError("snr must be positive")
    if not nc.a > 0:
        raise ValueError("normalizing scale a must be positive")
    c = LOG2E * snr * nc.a / (1.0 + snr * nc.b)
    d = math.log2(1.0 + snr * nc.b)
    return GumbelAffine(c=c, d=d, sample_size=nc.sample_size, snr=snr)


def gumbel_cdf(x):
    """Standard Gumbel CDF ``exp(-exp(-x))``."""
    out = np.exp(-np.exp(-np.asarray(x, dtype=float)))
    return float(out) if out.ndim == 0 else out
