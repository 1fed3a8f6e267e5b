"""Command-line entry point: ``relaysched {fig2,fig4,constants,validate}``."""
from __future__ import annotations

import argparse
import csv
import io
import sys

from . import analytic, evt, montecarlo
from .channel import FadingLaw, sinr_parent_distribution
from .config import ExperimentConfig, load_config
from .errors import (
    BracketError,
    ConfigError,
    DomainError,
    NumericalOverflowError,
    QuadratureError,
    Type1ViolationError,
    UnsupportedLawError,
)

EXIT_OK = 0
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

FIG2_HEADER = ["K", "p_empirical", "ci95", "p_exact_quadrature", "p_analytic_theorem1",
               "z1", "z2", "z3", "c_h", "d_h", "c_g", "d_g"]
FIG4_HEADER = ["UV", "ort_empirical", "ort_ci95", "ort_analytic",
               "sim_empirical", "sim_ci95", "sim_analytic"]


def fmt(v) -> str:
    if isinstance(v, (int, str)):
        return str(v)
    return f"{v:.12g}"


def fig2_rows(cfg: ExperimentConfig, threads: int = 1):
    law_h, law_g = cfg.fading
    for K in cfg.sweep:
        sc = cfg.relay_scenario(K)
        est = montecarlo.estimate_pk(sc, law_h, law_g, cfg.trials, cfg.seed, threads)
        exact = montecarlo.oracle_pk_exact(sc, law_h, law_g)
        th = analytic.direct_link_probability(sc, law_h, law_g, verify_type1=cfg.verify_type1)
        yield [K, est.mean, est.halfwidth95, exact, th.p_C, th.z1, th.z2, th.z3,
               th.direct.c, th.direct.d, th.relay.c, th.relay.d]


def fig4_rows(cfg: ExperimentConfig, threads: int = 1):
    law_h, law_g = cfg.fading
    quad = not (law_h.kind == law_g.kind == "rayleigh")
    for UV in cfg.sweep:
        sc = cfg.broadcast_scenario(UV)
        ort = montecarlo.estimate_avg_rate("orthogonal", sc, law_h, law_g, cfg.trials, cfg.seed, threads)
        sim = montecarlo.estimate_avg_rate("simultaneous", sc, law_h, law_g, cfg.trials, cfg.seed, threads)
        ort_a = analytic.orthogonal_average_rate(sc, law_h, law_g, verify_type1=cfg.verify_type1)
        sim_a = analytic.simultaneous_average_rate(sc, law_h, law_g, verify_type1=cfg.verify_type1,
                                                   allow_quadrature=quad)
        yield [UV, ort.mean, ort.halfwidth95, ort_a, sim.mean, sim.halfwidth95, sim_a]


def render_csv(header, rows) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt(v) for v in row])
    return buf.getvalue()


def _emit(text: str, out):
    if out:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _load(args, experiment) -> ExperimentConfig:
    cfg = load_config(args.config, experiment) if args.config else ExperimentConfig.default(experiment)
    cfg = cfg.with_overrides(seed=args.seed, trials=args.trials, out=args.out)
    if cfg.trials < montecarlo.MIN_TRIALS:
        raise ConfigError(f"trials must be at least {montecarlo.MIN_TRIALS}", field="trials")
    return cfg


def cmd_fig2(args) -> int:
    cfg = _load(args, "fig2")
    _emit(render_csv(FIG2_HEADER, fig2_rows(cfg, args.threads)), cfg.out)
    return EXIT_OK


def cmd_fig4(args) -> int:
    cfg = _load(args, "fig4")
    _emit(render_csv(FIG4_HEADER, fig4_rows(cfg, args.threads)), cfg.out)
    return EXIT_OK


def parent_law(tag: str) -> evt.ParentDistribution:
    """Fading-law tag, or ``pareto[:alpha]`` for the heavy-tailed test law."""
    kind, _, arg = tag.strip().lower().partition(":")
    if kind == "pareto":
        return evt.pareto_tail(float(arg) if arg else 2.0)
    return FadingLaw.parse(tag).distribution()


def constants_report(tag: str, snr: float, M: int) -> str:
    dist = parent_law(tag)
    nc = evt.normalizing_constants(dist, M)
    ga = evt.spectral_efficiency_constants(nc, snr)
    check = evt.check_type1(dist)
    rows = [["law", dist.name], ["snr", fmt(snr)], ["M", str(M)],
            ["a", fmt(nc.a)], ["b", fmt(nc.b)], ["c", fmt(ga.c)], ["d", fmt(ga.d)]]
    rows += [[f"type1_ratio@{fmt(x)}", fmt(v)] for x, v in zip(check.grid, check.values)]
    rows.append(["type1_converged", "true" if check.converged else "false"])
    return render_csv(["quantity", "value"], rows)


def cmd_constants(args) -> int:
    _emit(constants_report(args.law, args.snr, args.M), args.out)
    return EXIT_OK


def cmd_validate(args) -> int:
    if not args.config:
        raise ConfigError("validate needs --config")
    cfg = load_config(args.config)
    law_h, law_g = cfg.fading
    checks = [("law_h", law_h.distribution()), ("law_g", law_g.distribution())]
    if cfg.experiment == "fig4" and law_h.kind == law_g.kind == "rayleigh":
        sc = cfg.scenario
        checks.append(("far_sinr", sinr_parent_distribution(sc["snr_F_r"], sc["snr_F_b"])))
        checks.append(("near_sinr", sinr_parent_distribution(sc["snr_N_b"], sc["snr_N_r"])))
    ok = True
    for label, dist in checks:
        rep = evt.check_type1(dist)
        ok &= rep.converged
        print(f"{label}: {dist.name} tail ratio {rep.values[-1]:.9g} "
              f"{'converged' if rep.converged else 'NOT converged'}")
    print(f"config ok: experiment={cfg.experiment}, sweep={list(cfg.sweep)}, trials={cfg.trials}, seed={cfg.seed}")
    return EXIT_OK if ok else EXIT_NUMERIC


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", metavar="PATH")
    common.add_argument("--seed", type=int)
    common.add_argument("--trials", type=int)
    common.add_argument("--out", metavar="PATH")
    common.add_argument("--threads", type=int, default=1, help="worker threads; never changes results")

    p = argparse.ArgumentParser(prog="relaysched", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("fig2", parents=[common], help="direct-link probability vs number of users").set_defaults(fn=cmd_fig2)
    sub.add_parser("fig4", parents=[common], help="average rate vs far/near users").set_defaults(fn=cmd_fig4)
    sub.add_parser("validate", parents=[common], help="parse a config and run tail checks").set_defaults(fn=cmd_validate)
    c = sub.add_parser("constants", parents=[common], help="normalizing constants of one law")
    c.add_argument("--law", default="rayleigh")
    c.add_argument("--snr", type=float, default=1.0)
    c.add_argument("--M", type=int, default=100)
    c.set_defaults(fn=cmd_constants)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ConfigError, UnsupportedLawError) as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (BracketError, DomainError, QuadratureError, NumericalOverflowError, Type1ViolationError) as exc:
        print(f"numerical error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except ValueError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
