"""End-to-end spectral efficiency of one fading realization per protocol.

The ``*_terms`` helpers work on batches: the last axis indexes users, any
leading axes index realizations. The ``*_rate`` functions evaluate a single
realization and report which users/path won.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Tuple, Union

import numpy as np

from .channel import BroadcastScenario, RelayScenario, sinr_far, sinr_near, spectral_efficiency

Path = Union[str, Tuple[int, int]]


@dataclass(frozen=True)
class RealizationOutcome:
    rate: float
    chosen_path: Path
    backhaul_limited: bool


def _as_users(x, n=None, name="powers"):
    arr = np.asarray(x, dtype=float)
    if arr.ndim == 0:
        arr = arr.reshape(1)
    if n is not None and arr.shape[-1] != n:
        raise ValueError(f"{name}: expected {n} users, got {arr.shape[-1]}")
    return arr


def _same_users(a, b, names):
    if a.shape[-1] != b.shape[-1]:
        raise ValueError(f"length mismatch between {names[0]} ({a.shape[-1]}) and {names[1]} ({b.shape[-1]})")


def route_terms(h_pows, g_pows, sc: RelayScenario):
    """Direct-branch and two-hop-branch spectral efficiencies.

    Returns ``(direct, relay_hop, two_hop)`` where ``relay_hop`` is the best
    relay-user link and ``two_hop = min(C(SNR_B), relay_hop) / 2``.
    """
    h = _as_users(h_pows)
    g = _as_users(g_pows)
    _same_users(h, g, ("h_pows", "g_pows"))
    direct = spectral_efficiency(sc.snr_b * h.max(axis=-1))
    relay_hop = spectral_efficiency(sc.snr_r * g.max(axis=-1))
    two_hop = 0.5 * np.minimum(spectral_efficiency(sc.snr_B), relay_hop)
    return direct, relay_hop, two_hop


def max_route_rate(h_pows, g_pows, sc: RelayScenario) -> RealizationOutcome:
    """Best of the direct route and the backhaul-capped, half-duplex two-hop route."""
    h = _as_users(h_pows)
    g = _as_users(g_pows)
    if h.ndim != 1:
        raise ValueError("expected one realization")
    direct, relay_hop, two_hop = route_terms(h, g, sc)
    direct, relay_hop, two_hop = float(direct), float(relay_hop), float(two_hop)
    path = "direct" if direct >= two_hop else "two-hop"
    limited = bool(spectral_efficiency(sc.snr_B) <= relay_hop)
    return RealizationOutcome(max(direct, two_hop), path, limited)


def orthogonal_terms(hN_pows, gF_pows, sc: BroadcastScenario):
    """``(near, backhaul, far)`` terms; the rate is ``near + min(backhaul, far)``."""
    hN = _as_users(hN_pows, sc.V, "hN_pows")
    gF = _as_users(gF_pows, sc.U, "gF_pows")
    near = sc.beta_N * spectral_efficiency(sc.snr_N_b * hN.max(axis=-1))
    far = sc.beta_F * spectral_efficiency(sc.snr_F_r * gF.max(axis=-1))
    backhaul = sc.beta_B * spectral_efficiency(sc.snr_B)
    return near, backhaul, far


def orthogonal_rate(hN_pows, gF_pows, sc: BroadcastScenario) -> RealizationOutcome:
    hN = _as_users(hN_pows, sc.V, "hN_pows")
    gF = _as_users(gF_pows, sc.U, "gF_pows")
    if hN.ndim != 1:
        raise ValueError("expected one realization")
    near, backhaul, far = (float(t) for t in orthogonal_terms(hN, gF, sc))
    path = (int(np.argmax(gF)), int(np.argmax(hN)))
    return RealizationOutcome(near + min(backhaul, far), path, bool(backhaul <= far))


def simultaneous_terms(hN_pows, gN_pows, hF_pows, gF_pows, sc: BroadcastScenario):
    """``(near, backhaul, far)`` terms under spectrum reuse."""
    hN = _as_users(hN_pows, sc.V, "hN_pows")
    gN = _as_users(gN_pows, sc.V, "gN_pows")
    hF = _as_users(hF_pows, sc.U, "hF_pows")
    gF = _as_users(gF_pows, sc.U, "gF_pows")
    share = sc.beta_F + sc.beta_N
    near = share * spectral_efficiency(sinr_near(hN, gN, sc).max(axis=-1))
    far = share * spectral_efficiency(sinr_far(gF, hF, sc).max(axis=-1))
    backhaul = sc.beta_B * spectral_efficiency(sc.snr_B)
    return near, backhaul, far


def simultaneous_rate(hN_pows, gN_pows, hF_pows, gF_pows, sc: BroadcastScenario) -> RealizationOutcome:
    hN = _as_users(hN_pows, sc.V, "hN_pows")
    gN = _as_users(gN_pows, sc.V, "gN_pows")
    hF = _as_users(hF_pows, sc.U, "hF_pows")
    gF = _as_users(gF_pows, sc.U, "gF_pows")
    if hN.ndim != 1:
        raise ValueError("expected one realization")
    near, backhaul, far = (float(t) for t in simultaneous_terms(hN, gN, hF, gF, sc))
    path = (int(np.argmax(sinr_far(gF, hF, sc))), int(np.argmax(sinr_near(hN, gN, sc))))
    return RealizationOutcome(near + min(backhaul, far), path, bool(backhaul <= far))
