"""Experiment configuration files.

Flat ``key = value`` text; ``#`` starts a comment. SNRs may be written in
linear units or in dB with a ``dB`` suffix (stored linear). Booleans are
``true``/``false``. Example::

    experiment = fig2
    snr_b = 0 dB
    snr_r = 10
    snr_B = 20dB
    sweep = 2, 4, 8, 16
    trials = 100000
    seed = 7
"""
from __future__ import annotations

import re
from dataclasses import dataclass, replace
from typing import Dict, Optional, Tuple

from .channel import BroadcastScenario, FadingLaw, RelayScenario
from .errors import ConfigError

RELAY_SNRS = ("snr_b", "snr_r", "snr_B")
BROADCAST_SNRS = ("snr_F_b", "snr_F_r", "snr_N_b", "snr_N_r", "snr_B")
BETAS = ("beta_B", "beta_F", "beta_N")

DEFAULTS = {
    "fig2": {
        "scenario": {"snr_b": 1.0, "snr_r": 10.0, "snr_B": 100.0},
        "sweep": (2, 4, 8, 16, 32, 64, 128, 256, 512),
    },
    "fig4": {
        "scenario": {
            "snr_F_b": 1.0,
            "snr_F_r": 100.0,
            "snr_N_b": 100.0,
            "snr_N_r": 1.0,
            "snr_B": 1000.0,
            "beta_B": 0.25,
            "beta_F": 0.25,
            "beta_N": 0.5,
        },
        "sweep": (4, 8, 16, 32, 64, 128, 256),
    },
}

_DB = re.compile(r"^\s*([-+0-9.eE]+)\s*[dD][bB]\s*$")


@dataclass(frozen=True)
class ExperimentConfig:
    experiment: str
    scenario: Dict[str, float]
    law_h: str = "rayleigh"
    law_g: str = "rayleigh"
    sweep: Tuple[int, ...] = ()
    trials: int = 100_000
    seed: int = 0
    out: Optional[str] = None
    verify_type1: bool = True

    @classmethod
    def default(cls, experiment: str) -> "ExperimentConfig":
        if experiment not in DEFAULTS:
            raise ConfigError(f"unknown experiment '{experiment}'", field="experiment")
        d = DEFAULTS[experiment]
        return cls(experiment, dict(d["scenario"]), sweep=tuple(d["sweep"]))

    @property
    def fading(self) -> Tuple[FadingLaw, FadingLaw]:
        return FadingLaw.parse(self.law_h), FadingLaw.parse(self.law_g)

    def relay_scenario(self, K: int) -> RelayScenario:
        return RelayScenario(K=K, **self.scenario)

    def broadcast_scenario(self, UV: int) -> BroadcastScenario:
        return BroadcastScenario(U=UV, V=UV, **self.scenario)

    def with_overrides(self, **kw) -> "ExperimentConfig":
        kw = {k: v for k, v in kw.items() if v is not None}
        return replace(self, **kw) if kw else self

    def to_text(self) -> str:
        lines = [f"experiment = {self.experiment}"]
        lines += [f"{k} = {v!r}" for k, v in self.scenario.items()]
        lines += [
            f"law_h = {self.law_h}",
            f"law_g = {self.law_g}",
            "sweep = " + ", ".join(str(v) for v in self.sweep),
            f"trials = {self.trials}",
            f"seed = {self.seed}",
            f"verify_type1 = {'true' if self.verify_type1 else 'false'}",
        ]
        if self.out is not None:
            lines.append(f"out = {self.out}")
        return "\n".join(lines) + "\n"


def parse_snr(text: str) -> float:
    m = _DB.match(text)
    if m:
        return 10.0 ** (float(m.group(1)) / 10.0)
    return float(text)


def _parse_bool(text: str) -> bool:
    t = text.strip().lower()
    if t == "true":
        return True
    if t == "false":
        return False
    raise ValueError("expected true or false")


def _parse_sweep(text: str) -> Tuple[int, ...]:
    vals = []
    for piece in text.split(","):
        piece = piece.strip()
        v = int(piece)
        if str(v) != piece.lstrip("+"):
            raise ValueError(f"'{piece}' is not an integer")
        vals.append(v)
    return tuple(vals)


def parse_config(text: str, experiment: Optional[str] = None) -> ExperimentConfig:
    """Parse config text; ``experiment`` (if given) must agree with the file."""
    entries: Dict[str, Tuple[str, int]] = {}
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError("expected 'key = value'", line=lineno)
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError("missing key", line=lineno)
        if key in entries:
            raise ConfigError("duplicate key", field=key, line=lineno)
        entries[key] = (value, lineno)

    file_exp = entries.pop("experiment", (None, None))
    exp = file_exp[0] or experiment
    if exp is None:
        exp = "fig4" if any(k in entries for k in BETAS + BROADCAST_SNRS[:4]) else "fig2"
    if experiment is not None and exp != experiment:
        raise ConfigError(f"config is for '{exp}', not '{experiment}'", field="experiment", line=file_exp[1])
    if exp not in DEFAULTS:
        raise ConfigError(f"unknown experiment '{exp}'", field="experiment", line=file_exp[1])

    cfg = ExperimentConfig.default(exp)
    scenario = dict(cfg.scenario)
    updates = {}
    for key, (value, lineno) in entries.items():
        try:
            if key in scenario:
                scenario[key] = parse_snr(value) if key.startswith("snr") else float(value)
            elif key in ("law_h", "law_g"):
                updates[key] = FadingLaw.parse(value).tag
            elif key == "sweep":
                updates[key] = _parse_sweep(value)
            elif key in ("trials", "seed"):
                updates[key] = int(value)
            elif key == "out":
                updates[key] = value
            elif key == "verify_type1":
                updates[key] = _parse_bool(value)
            else:
                raise ConfigError(f"unknown key for {exp}", field=key, line=lineno)
        except ConfigError:
            raise
        except ValueError as exc:
            raise ConfigError(f"bad value '{value}': {exc}", field=key, line=lineno) from None
    cfg = replace(cfg, scenario=scenario, **updates)
    validate_config(cfg, {k: ln for k, (_, ln) in entries.items()})
    return cfg


def validate_config(cfg: ExperimentConfig, lines: Optional[Dict[str, int]] = None) -> None:
    lines = lines or {}

    def fail(msg, key):
        raise ConfigError(msg, field=key, line=lines.get(key))

    for key, v in cfg.scenario.items():
        if not v > 0:
            fail("must be positive", key)
    if cfg.experiment == "fig4":
        total = sum(cfg.scenario[b] for b in BETAS)
        if abs(total - 1.0) > 1e-12:
            fail(f"beta_B + beta_F + beta_N = {total!r}, must be 1", "beta_N" if "beta_N" in lines else "beta_B")
    sweep = cfg.sweep
    if not sweep:
        fail("sweep is empty", "sweep")
    if sweep[0] < 2:
        fail("sweep values must be at least 2", "sweep")
    if any(b <= a for a, b in zip(sweep, sweep[1:])):
        fail("sweep values must be strictly increasing", "sweep")
    if cfg.trials < 1000:
        fail("trials must be at least 1000", "trials")
    if not 0 <= cfg.seed < 2 ** 64:
        fail("seed must be a 64-bit unsigned integer", "seed")


def load_config(path: str, experiment: Optional[str] = None) -> ExperimentConfig:
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise ConfigError(f"cannot read config: {exc}") from None
    return parse_config(text, experiment)
