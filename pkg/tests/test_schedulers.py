import math

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra.numpy import arrays

from relaysched.channel import BroadcastScenario, RelayScenario, spectral_efficiency
from relaysched.schedulers import (
    max_route_rate,
    orthogonal_rate,
    orthogonal_terms,
    route_terms,
    simultaneous_rate,
    simultaneous_terms,
)

RELAY = RelayScenario(1.0, 10.0, 100.0, 1)
BCAST3 = BroadcastScenario(1.0, 100.0, 100.0, 1.0, 1000.0, 0.25, 0.25, 0.5, 3, 3)
pows = st.floats(0.0, 50.0, allow_nan=False)


def user_pairs(max_users=8):
    return st.integers(1, max_users).flatmap(
        lambda n: st.tuples(arrays(float, n, elements=pows), arrays(float, n, elements=pows))
    )


def test_max_route_all_zero():
    out = max_route_rate([0.0], [0.0], RELAY)
    assert out.rate == 0.0
    assert out.chosen_path == "direct"


def test_max_route_hand_value():
    out = max_route_rate([1.0], [1.0], RELAY)
    # max(1, min(log2 101, log2 11) / 2), 30-digit value
    assert out.rate == pytest.approx(1.72971580931864862810, rel=1e-14)
    assert out.chosen_path == "two-hop"
    assert not out.backhaul_limited


def test_max_route_strong_direct_link():
    h = [2.0 ** 9 - 1.0, 0.3]
    out = max_route_rate(h, [1e6, 1e6], RelayScenario(1.0, 10.0, 100.0, 2))
    assert out.rate == pytest.approx(9.0)
    assert out.chosen_path == "direct"
    assert out.backhaul_limited


def test_max_route_length_mismatch():
    with pytest.raises(ValueError):
        max_route_rate([1.0, 2.0], [1.0], RELAY)


@given(user_pairs())
def test_max_route_bounds(hg):
    h, g = hg
    out = max_route_rate(h, g, RELAY)
    direct = spectral_efficiency(RELAY.snr_b * h.max())
    assert direct <= out.rate <= max(direct, 0.5 * spectral_efficiency(RELAY.snr_B)) + 1e-15


@given(user_pairs(), pows, pows)
def test_max_route_monotone_in_users(hg, h_new, g_new):
    h, g = hg
    before = max_route_rate(h, g, RELAY).rate
    after = max_route_rate(np.append(h, h_new), np.append(g, g_new), RELAY).rate
    assert after >= before


@given(arrays(float, 6, elements=st.floats(0.01, 50.0), unique=True), st.floats(1e-3, 1e3))
def test_direct_argmax_scale_invariant(h, scale):
    assert np.argmax(spectral_efficiency(h)) == np.argmax(spectral_efficiency(scale * h))


def test_route_terms_batch_matches_single():
    rng = np.random.default_rng(0)
    h, g = rng.standard_exponential((2, 50, 4))
    sc = RelayScenario(1.0, 10.0, 100.0, 4)
    direct, _, two_hop = route_terms(h, g, sc)
    single = [max_route_rate(h[i], g[i], sc).rate for i in range(50)]
    assert np.allclose(np.maximum(direct, two_hop), single, rtol=0, atol=1e-15)


def test_orthogonal_hand_value(fig4_scenario):
    out = orthogonal_rate([1.0], [1.0], fig4_scenario(1))
    assert out.rate == pytest.approx(4.99365861206384605288, rel=1e-14)
    assert not out.backhaul_limited
    assert orthogonal_rate([0.0], [0.0], fig4_scenario(1)).rate == 0.0


def test_orthogonal_backhaul_cap(fig4_scenario):
    sc = fig4_scenario(2)
    out = orthogonal_rate([1.0, 2.0], [1e12, 3.0], sc)
    assert out.backhaul_limited
    assert out.rate == pytest.approx(0.5 * math.log2(201) + 0.25 * math.log2(1001))
    assert out.chosen_path == (0, 1)


def test_simultaneous_hand_value(fig4_scenario):
    out = simultaneous_rate([1.0], [1.0], [1.0], [1.0], fig4_scenario(1))
    # 0.75 log2 51 + min(0.25 log2 1001, 0.75 log2 51), 30-digit value
    assert out.rate == pytest.approx(6.74612557118762007329, rel=1e-14)
    assert out.backhaul_limited


def test_scheduler_length_checks(fig4_scenario):
    with pytest.raises(ValueError):
        orthogonal_rate([1.0, 2.0], [1.0], fig4_scenario(1))
    with pytest.raises(ValueError):
        simultaneous_rate([1.0], [1.0], [1.0, 2.0], [1.0], fig4_scenario(1))


def broadcast_draws(n_users):
    return st.tuples(*[arrays(float, n_users, elements=pows) for _ in range(4)])


@given(broadcast_draws(3))
def test_simultaneous_decomposition_and_cap(draws):
    hN, gN, hF, gF = draws
    sc = BCAST3
    near, backhaul, far = (float(t) for t in simultaneous_terms(hN, gN, hF, gF, sc))
    assert min(near, backhaul, far) >= 0.0
    rate = simultaneous_rate(hN, gN, hF, gF, sc).rate
    assert rate == pytest.approx(near + min(backhaul, far), abs=1e-14)
    assert rate - near <= sc.beta_B * spectral_efficiency(sc.snr_B) + 1e-14


@given(broadcast_draws(3))
def test_silent_interferers_reduce_to_longer_slots(draws):
    hN, _, _, gF = draws
    sc = BCAST3
    zeros = np.zeros(3)
    sim = simultaneous_rate(hN, zeros, zeros, gF, sc).rate
    share = sc.beta_F + sc.beta_N
    expected = share * spectral_efficiency(sc.snr_N_b * hN.max()) + min(
        sc.beta_B * spectral_efficiency(sc.snr_B), share * spectral_efficiency(sc.snr_F_r * gF.max())
    )
    assert sim == pytest.approx(expected, abs=1e-13)
    assert sim >= orthogonal_rate(hN, gF, sc).rate - 1e-13


@given(broadcast_draws(3))
def test_orthogonal_decomposition(draws):
    hN, _, _, gF = draws
    sc = BCAST3
    near, backhaul, far = (float(t) for t in orthogonal_terms(hN, gF, sc))
    assert min(near, backhaul, far) >= 0.0
    assert orthogonal_rate(hN, gF, sc).rate == pytest.approx(near + min(backhaul, far), abs=1e-14)
