"""Honeypots as decoys: how likely an attacker picks one, and how much they slow it down."""

from __future__ import annotations

import math
from dataclasses import dataclass

from .econ import DomainError, ValidationError

ATTACKER_KINDS = ("random", "focused")


@dataclass(frozen=True)
class DecoyConfig:
    production_hosts: int
    honeypots: int = 0
    honeypot_attractiveness: float = 1.0
    production_attractiveness: float = 1.0
    # 0 = fully deceived by attractiveness, 1 = sees through every decoy.
    sophistication: float = 0.0


def _is_count(x) -> bool:
    return isinstance(x, int) and not isinstance(x, bool)


def validate_decoy(d: DecoyConfig) -> DecoyConfig:
    problems = []
    if not _is_count(d.production_hosts) or d.production_hosts < 1:
        problems.append(("production_hosts", "must be an integer >= 1"))
    if not _is_count(d.honeypots) or d.honeypots < 0:
        problems.append(("honeypots", "must be an integer >= 0"))
    for name in ("honeypot_attractiveness", "production_attractiveness"):
        v = getattr(d, name)
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v) or v < 0:
            problems.append((name, "must be a finite number >= 0"))
    s = d.sophistication
    if isinstance(s, bool) or not isinstance(s, (int, float)) or not 0 <= s <= 1:
        problems.append(("sophistication", "must lie in [0, 1]"))
    if problems:
        raise ValidationError(problems)
    return d


def decoy_hit_probability(d: DecoyConfig, attacker: str = "random") -> float:
    """Probability that the attacker's chosen target is a honeypot.

    A random attacker picks uniformly among all hosts. A focused attacker
    picks in proportion to perceived attractiveness, where sophistication
    discounts every honeypot's appeal by ``(1 - s)``.
    """
    validate_decoy(d)
    N, H = d.production_hosts, d.honeypots
    if H == 0:
        return 0.0
    if attacker == "random":
        return H / (N + H)
    if attacker == "focused":
        lure = H * d.honeypot_attractiveness * (1.0 - d.sophistication)
        total = lure + N * d.production_attractiveness
        return lure / total if total > 0 else 0.0
    raise DomainError(f"attacker must be one of {ATTACKER_KINDS}, got {attacker!r}")


def target_selection_delay(d: DecoyConfig, base_delay: float) -> float:
    """Ticks spent choosing a target: ``base_delay * (1 + H/(N+H))``."""
    validate_decoy(d)
    if base_delay < 0:
        raise DomainError(f"base_delay must be >= 0, got {base_delay}")
    N, H = d.production_hosts, d.honeypots
    return base_delay * (1.0 + H / (N + H))
