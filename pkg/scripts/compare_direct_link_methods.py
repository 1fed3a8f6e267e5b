"""Direct-link probability: exact finite-K value vs both Gumbel evaluations.

The Gaussian-tail closed form treats the direct and relay Gumbel scales as
equal; the integral evaluation does not. This prints both next to the exact
quadrature value so the size of that simplification is visible.
"""
import argparse

from relaysched import RelayScenario, direct_link_probability, oracle_pk_exact


def main():
    p = argparse.ArgumentParser(description=__doc__)
    p.add_argument("--snr-b", type=float, default=1.0)
    p.add_argument("--snr-r", type=float, default=10.0)
    p.add_argument("--snr-B", type=float, default=100.0)
    p.add_argument("--K", type=int, nargs="+", default=[8, 32, 64, 128, 256, 512, 2048])
    args = p.parse_args()
    print(f"{'K':>6} {'exact':>10} {'integral':>10} {'closed':>10} {'c_h/c_g':>8}")
    for K in args.K:
        sc = RelayScenario(args.snr_b, args.snr_r, args.snr_B, K)
        integral = direct_link_probability(sc)
        closed = direct_link_probability(sc, method="closed_form")
        ratio = integral.direct.c / integral.relay.c
        print(f"{K:>6} {oracle_pk_exact(sc):10.6f} {integral.p_C:10.6f} {closed.p_C:10.6f} {ratio:8.4f}")


if __name__ == "__main__":
    main()
