"""Large-K predictions from the Gumbel limit of the scheduled maxima.

Three quantities are predicted:

* the probability that the best direct link beats the best two-hop route
  under max-route scheduling (``direct_link_probability``),
* the average rate of orthogonal time sharing (``orthogonal_average_rate``),
* the average rate with spectrum reuse (``simultaneous_average_rate``).

Large exponentials are evaluated through their logarithms: the ``z``
quantities are double exponentials of the normalizing constants and
overflow quickly at large K or backhaul SNR.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy import integrate, special

from . import evt
from .channel import (
    RAYLEIGH,
    BroadcastScenario,
    FadingLaw,
    RelayScenario,
    sinr_parent_distribution,
    spectral_efficiency,
)
from .errors import DomainError, QuadratureError, Type1ViolationError

EULER_GAMMA = 0.57721566490153286061
LOG_OVERFLOW = 700.0
_EPS = 2.0 ** -53


# --------------------------------------------------------------------------
# special functions


def q_function(x):
    """Standard normal upper tail probability."""
    out = 0.5 * special.erfc(np.asarray(x, dtype=float) / math.sqrt(2.0))
    return float(out) if out.ndim == 0 else out


def _e1_series_part(x: float) -> float:
    # sum_{n>=1} (-1)^{n+1} x^n / (n n!), so that E1(x) = -gamma - ln x + this
    total = 0.0
    term = 1.0
    n = 1
    while True:
        term *= x / n
        piece = term / n
        total += piece if n % 2 else -piece
        if piece <= _EPS * abs(total) or n > 200:
            return total
        n += 1


def _e1_continued_fraction(x: float) -> float:
    # modified Lentz evaluation of E1(x) e^{x}
    tiny = 1e-300
    b = x + 1.0
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, 1000):
        an = -float(i * i)
        b += 2.0
        d = 1.0 / (an * d + b)
        c = b + an / c
        delta = c * d
        h *= delta
        if abs(delta - 1.0) <= _EPS:
            break
    return h


def exp_integral(x: float) -> float:
    """``E1(x) = integral_x^inf e^{-y}/y dy`` for ``x > 0``.

    Power series up to ``x = 1``, continued fraction beyond.
    """
    x = float(x)
    if not x > 0:
        raise DomainError("exponential integral needs x > 0")
    if x <= 1.0:
        return -EULER_GAMMA - math.log(x) + _e1_series_part(x)
    return _e1_continued_fraction(x) * math.exp(-x)


# --------------------------------------------------------------------------
# helpers


def _exp_or_inf(log_value: float) -> float:
    if log_value > LOG_OVERFLOW:
        return math.inf
    return math.exp(log_value)


def _require_type1(law: FadingLaw | evt.ParentDistribution, label: str) -> evt.ParentDistribution:
    dist = law.distribution() if isinstance(law, FadingLaw) else law
    report = evt.check_type1(dist)
    if not report.converged:
        raise Type1ViolationError(
            f"{label} ({dist.name}) is not certified Gumbel-domain: "
            f"tail ratio reached {report.values[-1]:.6g} instead of -1"
        )
    return dist


def _affine(dist: evt.ParentDistribution, M: int, snr: float) -> evt.GumbelAffine:
    return evt.spectral_efficiency_constants(evt.normalizing_constants(dist, M), snr)


def capped_gumbel_mean(weight: float, c: float, d: float, cap: float) -> float:
    """``E[min(cap, weight * (c * Theta + d))]`` for standard Gumbel ``Theta``.

    Equals ``cap - weight * c * E1(z)`` with
    ``z = exp((weight * d - cap) / (weight * c))``.
    """
    if weight <= 0:
        return 0.0
    log_z = (weight * d - cap) / (weight * c)
    if log_z > LOG_OVERFLOW:
        return cap
    z = math.exp(log_z)
    if z <= 1.0:
        # cap - w c (-gamma - log z + S(z)) with the log z term cancelled exactly
        return weight * (c * EULER_GAMMA + d) - weight * c * _e1_series_part(z)
    return cap - weight * c * exp_integral(z)


def _log_erfcx(log_u: float) -> float:
    if log_u < 20.0:
        return math.log(special.erfcx(math.exp(log_u)))
    return -log_u - 0.5 * math.log(math.pi)


def joint_probability(log_z1: float, log_z2: float, log_z3: float, exponent: float = 2.0, method: str = "integral") -> float:
    """Probability that the direct link wins while the relay hop sits under the backhaul cap.

    Evaluates ``integral_{z3}^inf exp(-z1 y^exponent - y) dy
    + exp(-z2) (1 - exp(-z3))`` from the logarithms of the ``z``'s.

    ``method="closed_form"`` uses the Gaussian-tail closed form, which holds
    only for ``exponent == 2``.
    """
    z2 = _exp_or_inf(log_z2)
    z3 = _exp_or_inf(log_z3)
    second = math.exp(-z2) * -math.expm1(-z3)
    if method == "closed_form":
        first = _gaussian_tail_term(log_z1, log_z3)
    elif method == "integral":
        first = _tail_integral(log_z1, log_z3, exponent)
    else:
        raise ValueError(f"unknown method '{method}'")
    return first + second


def _gaussian_tail_term(log_z1: float, log_z3: float) -> float:
    # sqrt(pi/z1) e^{1/(4 z1)} Q(a),  a = z3 sqrt(2 z1) + 1/sqrt(2 z1)
    # = 0.5 sqrt(pi/z1) erfcx(a/sqrt2) exp(-z3 - z1 z3^2)
    if log_z3 > LOG_OVERFLOW:
        return 0.0
    z3 = math.exp(log_z3)
    log_half_ln2 = 0.5 * math.log(2.0)
    log_a = np.logaddexp(log_z3 + log_half_ln2 + 0.5 * log_z1, -log_half_ln2 - 0.5 * log_z1)
    log_u = float(log_a) - log_half_ln2
    z1z3sq = _exp_or_inf(log_z1 + 2.0 * log_z3) if z3 > 0 else 0.0
    log_term = (
        math.log(0.5) + 0.5 * math.log(math.pi) - 0.5 * log_z1 + _log_erfcx(log_u) - z3 - z1z3sq
    )
    return math.exp(log_term) if log_term > -745.0 else 0.0


def _tail_integral(log_z1: float, log_z3: float, exponent: float) -> float:
    # e^{-z3} * integral_0^inf exp(-z1 (z3 + t)^p - t) dt
    if log_z3 > LOG_OVERFLOW:
        return 0.0
    z3 = math.exp(log_z3)

    def integrand(t):
        y = z3 + t
        if y <= 0.0:
            return math.exp(-t)
        return math.exp(-_exp_or_inf(log_z1 + exponent * math.log(y)) - t)

    upper = 60.0
    knots = []
    # where z1 y^p = 1 the inner factor switches off
    y_star_log = -log_z1 / exponent
    if y_star_log < math.log(upper + z3 + 1.0):
        t_star = math.exp(y_star_log) - z3
        if 0.0 < t_star < upper:
            knots.append(t_star)
    val, err = integrate.quad(integrand, 0.0, upper, points=knots or None, epsabs=1e-14, epsrel=1e-11, limit=400)
    if not err <= 1e-9:
        raise QuadratureError(f"joint probability integral error estimate {err:g}")
    return math.exp(-z3) * val


# --------------------------------------------------------------------------
# predictions


@dataclass(frozen=True)
class DirectLinkBreakdown:
    """Pieces of the direct-link-wins probability.

    ``p_A``: relay hop below the backhaul capacity; ``p_C_given_Ac``: direct
    link beats half the backhaul capacity; ``p_C``: direct link wins.
    """

    z1: float
    z2: float
    z3: float
    p_A: float
    p_C_given_Ac: float
    p_C_and_A: float
    p_C: float
    direct: evt.GumbelAffine
    relay: evt.GumbelAffine
    exponent: float
    method: str


def direct_link_probability(
    sc: RelayScenario,
    law_h: FadingLaw = RAYLEIGH,
    law_g: FadingLaw = RAYLEIGH,
    method: str = "integral",
    verify_type1: bool = True,
) -> DirectLinkBreakdown:
    """Gumbel-limit probability that the best direct link beats the best two-hop route.

    ``method="integral"`` evaluates the Gumbel model exactly (one 1-D
    quadrature). ``method="closed_form"`` uses the Gaussian-tail closed form,
    which treats the two Gumbel scales as if ``c_h == c_g``.
    """
    if sc.K < 2:
        raise ValueError("K must be at least 2")
    if verify_type1:
        dist_h = _require_type1(law_h, "law_h")
        dist_g = _require_type1(law_g, "law_g")
    else:
        dist_h, dist_g = law_h.distribution(), law_g.distribution()
    h = _affine(dist_h, sc.K, sc.snr_b)
    g = _affine(dist_g, sc.K, sc.snr_r)
    cap = spectral_efficiency(sc.snr_B)

    log_z1 = (g.d - 2.0 * h.d) / g.c
    log_z2 = (g.d - cap) / g.c
    log_z3 = (h.d - 0.5 * cap) / h.c
    exponent = 2.0 if method == "closed_form" else 2.0 * h.c / g.c

    z2 = _exp_or_inf(log_z2)
    z3 = _exp_or_inf(log_z3)
    p_A = math.exp(-z2)
    p_C_given_Ac = -math.expm1(-z3)
    p_C_and_A = joint_probability(log_z1, log_z2, log_z3, exponent, method)
    p_C = p_C_and_A + p_C_given_Ac * (1.0 - p_A)
    return DirectLinkBreakdown(
        z1=_exp_or_inf(log_z1),
        z2=z2,
        z3=z3,
        p_A=p_A,
        p_C_given_Ac=p_C_given_Ac,
        p_C_and_A=p_C_and_A,
        p_C=p_C,
        direct=h,
        relay=g,
        exponent=exponent,
        method=method,
    )


def orthogonal_average_rate(
    sc: BroadcastScenario,
    law_h: FadingLaw = RAYLEIGH,
    law_g: FadingLaw = RAYLEIGH,
    verify_type1: bool = True,
) -> float:
    """Gumbel-limit mean rate of orthogonal backhaul / far / near time sharing."""
    if sc.U < 2 or sc.V < 2:
        raise ValueError("U and V must be at least 2")
    if verify_type1:
        dist_h = _require_type1(law_h, "law_h")
        dist_g = _require_type1(law_g, "law_g")
    else:
        dist_h, dist_g = law_h.distribution(), law_g.distribution()
    near = _affine(dist_h, sc.V, sc.snr_N_b)
    far = _affine(dist_g, sc.U, sc.snr_F_r)
    cap = sc.beta_B * spectral_efficiency(sc.snr_B)
    return sc.beta_N * (near.c * EULER_GAMMA + near.d) + capped_gumbel_mean(sc.beta_F, far.c, far.d, cap)


def sinr_constants(sc: BroadcastScenario, law_h: FadingLaw = RAYLEIGH, law_g: FadingLaw = RAYLEIGH,
                   verify_type1: bool = True, allow_quadrature: bool = False):
    """Spectral-efficiency Gumbel constants of the far and near max-SINR.

    The SINR already carries the power scaling, so the push-through uses
    ``snr = 1``.
    """
    far_law = sinr_parent_distribution(sc.snr_F_r, sc.snr_F_b, law_g, law_h, allow_quadrature)
    near_law = sinr_parent_distribution(sc.snr_N_b, sc.snr_N_r, law_h, law_g, allow_quadrature)
    if verify_type1:
        _require_type1(far_law, "far-user SINR law")
        _require_type1(near_law, "near-user SINR law")
    return _affine(far_law, sc.U, 1.0), _affine(near_law, sc.V, 1.0)


def simultaneous_average_rate(
    sc: BroadcastScenario,
    law_h: FadingLaw = RAYLEIGH,
    law_g: FadingLaw = RAYLEIGH,
    verify_type1: bool = True,
    allow_quadrature: bool = False,
) -> float:
    """Gumbel-limit mean rate when relay and base station reuse the band."""
    if sc.U < 2 or sc.V < 2:
        raise ValueError("U and V must be at least 2")
    far, near = sinr_constants(sc, law_h, law_g, verify_type1, allow_quadrature)
    share = sc.beta_F + sc.beta_N
    cap = sc.beta_B * spectral_efficiency(sc.snr_B)
    return share * (near.c * EULER_GAMMA + near.d) + capped_gumbel_mean(share, far.c, far.d, cap)
