"""Seeded Monte Carlo estimators and exact finite-K quadrature oracles.

Trials are split into fixed chunks of ``CHUNK_SIZE``. Chunk ``i`` draws from
its own stream

    PCG64(SeedSequence(entropy=seed, spawn_key=(i,)))

and per-trial results are concatenated in chunk order, so an estimate depends
only on ``(seed, trials)`` and never on the number of worker threads.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy import integrate

from . import evt
from .channel import RAYLEIGH, BroadcastScenario, FadingLaw, RelayScenario, spectral_efficiency
from .errors import QuadratureError
from .schedulers import orthogonal_terms, route_terms, simultaneous_terms

CHUNK_SIZE = 4096
MIN_TRIALS = 1000
Z95 = 1.96
QUAD_RTOL = 1e-8
SUPPORT_TAIL = 1e-12


@dataclass(frozen=True)
class Estimate:
    mean: float
    halfwidth95: float
    trials: int
    seed: int

    @property
    def interval(self):
        return self.mean - self.halfwidth95, self.mean + self.halfwidth95


def chunk_stream(seed: int, index: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(entropy=int(seed), spawn_key=(int(index),))))


def run_chunks(trial_fn: Callable[[np.random.Generator, int], np.ndarray], trials: int, seed: int, threads: int = 1) -> np.ndarray:
    """Evaluate ``trial_fn(stream, n)`` chunk by chunk; results in chunk order."""
    sizes = [CHUNK_SIZE] * (trials // CHUNK_SIZE)
    if trials % CHUNK_SIZE:
        sizes.append(trials % CHUNK_SIZE)

    def work(i):
        return np.asarray(trial_fn(chunk_stream(seed, i), sizes[i]), dtype=float)

    if threads <= 1:
        parts = [work(i) for i in range(len(sizes))]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(work, range(len(sizes))))
    return np.concatenate(parts)


def summarize(values: np.ndarray, seed: int) -> Estimate:
    n = values.size
    if n < 2:
        raise ValueError("need at least two trials")
    half = Z95 * float(np.std(values, ddof=1)) / math.sqrt(n)
    return Estimate(float(np.mean(values)), half, n, int(seed))


def _check_trials(trials):
    if trials < MIN_TRIALS:
        raise ValueError(f"trials must be at least {MIN_TRIALS}")


def estimate_pk(
    sc: RelayScenario,
    law_h: FadingLaw = RAYLEIGH,
    law_g: FadingLaw = RAYLEIGH,
    trials: int = 100_000,
    seed: int = 0,
    threads: int = 1,
) -> Estimate:
    """Fraction of realizations where the best direct link strictly beats the two-hop route."""
    _check_trials(trials)

    def trial(rng, n):
        h = law_h.sample(rng, (n, sc.K))
        g = law_g.sample(rng, (n, sc.K))
        direct, _, two_hop = route_terms(h, g, sc)
        return direct > two_hop

    return summarize(run_chunks(trial, trials, seed, threads), seed)


def _broadcast_draws(rng, n, sc, law_h, law_g):
    # fixed draw order, so both protocols see the same realizations for a seed
    hN = law_h.sample(rng, (n, sc.V))
    gN = law_g.sample(rng, (n, sc.V))
    hF = law_h.sample(rng, (n, sc.U))
    gF = law_g.sample(rng, (n, sc.U))
    return hN, gN, hF, gF


def estimate_avg_rate(
    protocol: str,
    sc,
    law_h: FadingLaw = RAYLEIGH,
    law_g: FadingLaw = RAYLEIGH,
    trials: int = 100_000,
    seed: int = 0,
    threads: int = 1,
) -> Estimate:
    """Sample mean rate of ``route``, ``orthogonal`` or ``simultaneous`` scheduling."""
    _check_trials(trials)
    if protocol == "route":
        if not isinstance(sc, RelayScenario):
            raise TypeError("route protocol needs a RelayScenario")

        def trial(rng, n):
            h = law_h.sample(rng, (n, sc.K))
            g = law_g.sample(rng, (n, sc.K))
            direct, _, two_hop = route_terms(h, g, sc)
            return np.maximum(direct, two_hop)

    elif protocol in ("orthogonal", "simultaneous"):
        if not isinstance(sc, BroadcastScenario):
            raise TypeError(f"{protocol} protocol needs a BroadcastScenario")

        def trial(rng, n):
            hN, gN, hF, gF = _broadcast_draws(rng, n, sc, law_h, law_g)
            if protocol == "orthogonal":
                near, backhaul, far = orthogonal_terms(hN, gF, sc)
            else:
                near, backhaul, far = simultaneous_terms(hN, gN, hF, gF, sc)
            return near + np.minimum(backhaul, far)

    else:
        raise ValueError(f"unknown protocol '{protocol}'")
    return summarize(run_chunks(trial, trials, seed, threads), seed)


# --------------------------------------------------------------------------
# quadrature oracles


def _dist(law) -> evt.ParentDistribution:
    return law.distribution() if isinstance(law, FadingLaw) else law


def _max_sf(dist, x, K):
    tail = dist.survival(x)
    if tail >= 1.0:
        return 1.0
    return -math.expm1(K * math.log1p(-tail))


def _max_density(dist, x, K):
    tail = dist.survival(x)
    if tail >= 1.0 or K == 1:
        return float(dist.pdf(x))
    return K * math.exp((K - 1) * math.log1p(-tail)) * float(dist.pdf(x))


def _max_support(dist, K):
    # points where the CDF of the max crosses 1e-12 and 1 - 1e-12
    lo_tail = -math.expm1(math.log(SUPPORT_TAIL) / K)
    hi_tail = -math.expm1(math.log1p(-SUPPORT_TAIL) / K)
    return evt.upper_quantile(dist, lo_tail), evt.upper_quantile(dist, hi_tail)


def _quad(fn, a, b):
    val, err = integrate.quad(fn, a, b, epsabs=1e-15, epsrel=QUAD_RTOL, limit=500)
    if err > QUAD_RTOL * abs(val) + 1e-13:
        raise QuadratureError(f"quadrature on [{a:g}, {b:g}] did not converge (error {err:g})")
    return val


def _piecewise_quad(fn, knots):
    return sum(_quad(fn, a, b) for a, b in zip(knots, knots[1:]) if b > a)


def oracle_expected_max_se(law, snr: float, K: int) -> float:
    """``E[max_k log2(1 + snr xi_k)]`` by adaptive quadrature against the max density."""
    if not snr > 0:
        raise ValueError("snr must be positive")
    if K < 1:
        raise ValueError("K must be >= 1")
    dist = _dist(law)
    x_lo, x_hi = _max_support(dist, K)

    def integrand(x):
        return math.log2(1.0 + snr * x) * _max_density(dist, x, K)

    body = _piecewise_quad(integrand, [0.0, x_lo, x_hi])
    tail = _quad(integrand, x_hi, math.inf)
    return body + tail


def oracle_pk_exact(sc: RelayScenario, law_h=RAYLEIGH, law_g=RAYLEIGH) -> float:
    """Exact finite-K probability that the direct link strictly wins.

    Conditions on the best relay-user power ``x``: the direct link wins when
    its best power exceeds ``(2^{min(C(SNR_B), C(snr_r x)) / 2} - 1) / snr_b``.
    Past ``x_B = SNR_B / snr_r`` the threshold no longer depends on ``x``.
    """
    dh, dg = _dist(law_h), _dist(law_g)
    K = sc.K
    cap = spectral_efficiency(sc.snr_B)
    x_B = sc.snr_B / sc.snr_r

    def threshold_power(se):
        return math.expm1(se * math.log(2.0)) / sc.snr_b

    def integrand(x):
        se = 0.5 * math.log2(1.0 + sc.snr_r * x)
        return _max_sf(dh, threshold_power(se), K) * _max_density(dg, x, K)

    x_lo, x_hi = _max_support(dg, K)
    knots = sorted({0.0, x_B} | {x for x in (x_lo, x_hi) if x < x_B})
    below = _piecewise_quad(integrand, knots)
    beyond = _max_sf(dh, threshold_power(0.5 * cap), K) * _max_sf(dg, x_B, K)
    return below + beyond
