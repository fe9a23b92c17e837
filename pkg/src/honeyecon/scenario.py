"""Strict JSON scenario files.

A scenario file is one JSON object::

    {
      "scenario":   {"startup_cost": ..., "maintenance_per_tick": ...,
                     "info_value_per_tick": ..., "attack_likelihood_factor": ...,
                     "horizon_ticks": ...},
      "simulation": {...SimConfig fields...},     # optional
      "decoy":      {...DecoyConfig fields...}    # optional
    }

Unknown keys anywhere are rejected: a misspelt economic parameter would
otherwise fall back to a default and produce plausible-looking nonsense.
"""

from __future__ import annotations

import json
from dataclasses import asdict, dataclass, fields
from pathlib import Path
from typing import Any, Dict, Optional

from .decoy import DecoyConfig, validate_decoy
from .econ import ScenarioParams, ValidationError, validate_params
from .sim import SimConfig, config_fields, validate_config

TOP_LEVEL_KEYS = ("scenario", "simulation", "decoy")
SCENARIO_KEYS = tuple(f.name for f in fields(ScenarioParams))
DECOY_KEYS = tuple(f.name for f in fields(DecoyConfig))


class ScenarioIOError(OSError):
    """The scenario file could not be read."""


@dataclass(frozen=True)
class ScenarioFile:
    scenario: ScenarioParams
    simulation: Optional[SimConfig] = None
    decoy: Optional[DecoyConfig] = None


def _section(doc: Dict[str, Any], name: str, allowed, required=()) -> Dict[str, Any]:
    block = doc[name]
    if not isinstance(block, dict):
        raise ValidationError([(name, "must be a JSON object")])
    unknown = [k for k in block if k not in allowed]
    if unknown:
        raise ValidationError([(f"{name}.{k}", "unknown key") for k in unknown])
    missing = [k for k in required if k not in block]
    if missing:
        raise ValidationError([(f"{name}.{k}", "required key missing") for k in missing])
    return block


def parse_scenario(doc: Any) -> ScenarioFile:
    """Build and validate a :class:`ScenarioFile` from decoded JSON."""
    if not isinstance(doc, dict):
        raise ValidationError([("<document>", "top level must be a JSON object")])
    unknown = [k for k in doc if k not in TOP_LEVEL_KEYS]
    if unknown:
        raise ValidationError([(k, "unknown key") for k in unknown])
    if "scenario" not in doc:
        raise ValidationError([("scenario", "required section missing")])

    block = _section(doc, "scenario", SCENARIO_KEYS, required=SCENARIO_KEYS[:4])
    params = validate_params(ScenarioParams(**block))

    sim = None
    if "simulation" in doc:
        sim_block = _section(doc, "simulation", config_fields())
        try:
            sim = validate_config(SimConfig(scenario=params, **sim_block))
        except ValidationError as exc:
            raise ValidationError([(f"simulation.{k}", m) for k, m in exc.problems]) from None

    decoy = None
    if "decoy" in doc:
        decoy_block = _section(doc, "decoy", DECOY_KEYS, required=("production_hosts",))
        try:
            decoy = validate_decoy(DecoyConfig(**decoy_block))
        except ValidationError as exc:
            raise ValidationError([(f"decoy.{k}", m) for k, m in exc.problems]) from None
    return ScenarioFile(params, sim, decoy)


def load_scenario(path) -> ScenarioFile:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ScenarioIOError(f"cannot read scenario file {path}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ValidationError([("<document>", f"malformed JSON: {exc}")]) from None
    return parse_scenario(doc)


def scenario_to_dict(sf: ScenarioFile) -> Dict[str, Any]:
    out: Dict[str, Any] = {"scenario": asdict(sf.scenario)}
    if sf.simulation is not None:
        sim = {name: getattr(sf.simulation, name) for name in config_fields()}
        out["simulation"] = sim
    if sf.decoy is not None:
        out["decoy"] = asdict(sf.decoy)
    return out


def dump_scenario(sf: ScenarioFile, path) -> None:
    Path(path).write_text(json.dumps(scenario_to_dict(sf), indent=2) + "\n", encoding="utf-8")
