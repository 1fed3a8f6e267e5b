"""Fading laws, scenario parameters and SNR/SINR compositions."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from scipy import integrate

from . import evt
from .errors import DomainError, UnsupportedLawError

BETA_SUM_TOL = 1e-12
SINR_QUAD_RTOL = 1e-9


@dataclass(frozen=True)
class RelayScenario:
    """Single relay, K users, dynamic direct/two-hop routing."""

    snr_b: float
    snr_r: float
    snr_B: float
    K: int

    def __post_init__(self):
        for name in ("snr_b", "snr_r", "snr_B"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if int(self.K) != self.K or self.K < 1:
            raise ValueError("K must be an integer >= 1")


@dataclass(frozen=True)
class BroadcastScenario:
    """Downlink with U relay-served far users and V directly served near users."""

    snr_F_b: float
    snr_F_r: float
    snr_N_b: float
    snr_N_r: float
    snr_B: float
    beta_B: float
    beta_F: float
    beta_N: float
    U: int
    V: int

    def __post_init__(self):
        for name in ("snr_F_b", "snr_F_r", "snr_N_b", "snr_N_r", "snr_B"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        for name in ("beta_B", "beta_F", "beta_N"):
            if not getattr(self, name) > 0:
                raise ValueError(f"{name} must be positive")
        if abs(self.beta_B + self.beta_F + self.beta_N - 1.0) > BETA_SUM_TOL:
            raise ValueError("time-sharing coefficients must sum to 1")
        for name in ("U", "V"):
            v = getattr(self, name)
            if int(v) != v or v < 1:
                raise ValueError(f"{name} must be an integer >= 1")


@dataclass(frozen=True)
class FadingLaw:
    """Unit-mean fading-power law.

    kind is ``rayleigh``, ``rician`` (param = K-factor, linear) or
    ``lognormal`` (param = shadowing spread in dB).
    """

    kind: str = "rayleigh"
    param: Optional[float] = None

    def __post_init__(self):
        if self.kind not in ("rayleigh", "rician", "lognormal"):
            raise UnsupportedLawError(f"unknown fading law '{self.kind}'")
        if self.kind != "rayleigh" and self.param is None:
            raise ValueError(f"{self.kind} law needs a parameter")

    @classmethod
    def parse(cls, tag: str) -> "FadingLaw":
        """Parse ``rayleigh``, ``rician:3`` or ``lognormal:1``."""
        kind, _, arg = tag.strip().lower().partition(":")
        if kind == "rayleigh":
            if arg:
                raise ValueError("rayleigh takes no parameter")
            return cls("rayleigh")
        if kind not in ("rician", "lognormal"):
            raise UnsupportedLawError(f"unknown fading law '{tag}'")
        if not arg:
            raise ValueError(f"{kind} law needs a parameter, e.g. '{kind}:3'")
        return cls(kind, float(arg))

    @property
    def tag(self) -> str:
        return self.kind if self.param is None else f"{self.kind}:{self.param:g}"

    def distribution(self) -> evt.ParentDistribution:
        if self.kind == "rayleigh":
            return evt.exponential_power(1.0)
        if self.kind == "rician":
            return evt.rician_power(self.param)
        return evt.lognormal_power(self.param)

    def sample(self, rng: np.random.Generator, size) -> np.ndarray:
        if self.kind == "rayleigh":
            return rng.standard_exponential(size)
        if self.kind == "rician":
            k = self.param
            los = math.sqrt(k / (k + 1.0))
            spread = math.sqrt(0.5 / (k + 1.0))
            re = los + spread * rng.standard_normal(size)
            im = spread * rng.standard_normal(size)
            return re * re + im * im
        s = evt.lognormal_sigma(self.param)
        return np.exp(-0.5 * s * s + s * rng.standard_normal(size))


RAYLEIGH = FadingLaw("rayleigh")


def sample_powers(law: FadingLaw, n: int, stream: np.random.Generator) -> np.ndarray:
    """``n`` i.i.d. fading powers drawn from ``stream``."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return law.sample(stream, n)


def spectral_efficiency(x):
    """``log2(1 + x)`` in bps/Hz."""
    arr = np.asarray(x, dtype=float)
    if np.any(arr < 0):
        raise DomainError("spectral efficiency needs a nonnegative SNR")
    out = np.log2(1.0 + arr)
    return float(out) if out.ndim == 0 else out


def sinr_far(g_pow, h_pow, sc: BroadcastScenario):
    """Far user: relay signal over base-station interference plus noise."""
    return sc.snr_F_r * np.asarray(g_pow, dtype=float) / (sc.snr_F_b * np.asarray(h_pow, dtype=float) + 1.0)


def sinr_near(h_pow, g_pow, sc: BroadcastScenario):
    """Near user: base-station signal over relay interference plus noise."""
    return sc.snr_N_b * np.asarray(h_pow, dtype=float) / (sc.snr_N_r * np.asarray(g_pow, dtype=float) + 1.0)


def _rayleigh_sinr_law(s: float, i: float) -> evt.ParentDistribution:
    # X = s G / (i H + 1), G, H ~ Exp(1):  1 - F(x) = e^{-x/s} / (1 + x i / s)
    k = i / s

    def sf(x):
        if x <= 0:
            return 1.0
        return math.exp(-x / s) / (1.0 + k * x)

    def cdf(x):
        if x <= 0:
            return 0.0
        u = 1.0 + k * x
        # 1 - e^{-x/s}/u = (u - 1 + 1 - e^{-x/s}) / u
        return (k * x - math.expm1(-x / s)) / u

    def pdf(x):
        if x < 0:
            return 0.0
        u = 1.0 + k * x
        e = math.exp(-x / s)
        return e / (s * u) + e * k / (u * u)

    def dpdf(x):
        if x < 0:
            return 0.0
        u = 1.0 + k * x
        e = math.exp(-x / s)
        return -e / (s * s * u) - 2.0 * e * k / (s * u * u) - 2.0 * e * k * k / u ** 3

    return evt.ParentDistribution(cdf, pdf, dpdf, math.inf, sf, name=f"sinr(s={s:g}, i={i:g})")


def _quadrature_sinr_law(s: float, i: float, signal: FadingLaw, interferer: FadingLaw) -> evt.ParentDistribution:
    # condition on the interferer power H: P(X > x) = E_H[sf_G(x (i H + 1) / s)]
    g = signal.distribution()
    h = interferer.distribution()

    def expect(fn):
        val, _ = integrate.quad(
            lambda y: fn(y) * h.pdf(y), 0.0, math.inf, epsabs=0.0, epsrel=SINR_QUAD_RTOL, limit=400
        )
        return val

    def sf(x):
        if x <= 0:
            return 1.0
        return expect(lambda y: g.survival(x * (i * y + 1.0) / s))

    def cdf(x):
        if x <= 0:
            return 0.0
        return expect(lambda y: g.cdf(x * (i * y + 1.0) / s))

    def pdf(x):
        if x < 0:
            return 0.0
        return expect(lambda y: (i * y + 1.0) / s * g.pdf(x * (i * y + 1.0) / s))

    return evt.ParentDistribution(cdf, pdf, None, math.inf, sf, name=f"sinr-quad(s={s:g}, i={i:g})")


def sinr_parent_distribution(
    signal_snr: float,
    interferer_snr: float,
    signal_law: FadingLaw = RAYLEIGH,
    interferer_law: FadingLaw = RAYLEIGH,
    allow_quadrature: bool = False,
) -> evt.ParentDistribution:
    """Law of ``signal_snr * G / (interferer_snr * H + 1)``.

    Rayleigh on both links has the closed form
    ``F(x) = 1 - exp(-x/s) / (1 + x i / s)``. Other laws are only available
    with ``allow_quadrature=True`` (1-D quadrature over the interferer power,
    much slower).
    """
    if not (signal_snr > 0 and interferer_snr > 0):
        raise ValueError("SNRs must be positive")
    if signal_law.kind == "rayleigh" and interferer_law.kind == "rayleigh":
        return _rayleigh_sinr_law(float(signal_snr), float(interferer_snr))
    if not allow_quadrature:
        raise UnsupportedLawError(
            f"no closed-form SINR law for {signal_law.tag} over {interferer_law.tag}; "
            "pass allow_quadrature=True"
        )
    return _quadrature_sinr_law(float(signal_snr), float(interferer_snr), signal_law, interferer_law)
