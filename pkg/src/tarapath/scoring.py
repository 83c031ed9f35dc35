"""Feasibility, impact, and risk scoring for compiled threat rules.

Exploitability follows the CVSS v3.0 exploitability metric over attack
vector, attack complexity, privileges required, and user interaction;
the score buckets into a feasibility level, and a risk matrix maps
(impact, feasibility) to a 1..5 risk value. Weights, bands, matrix, and
the property-to-threat-type map are all configurable; the defaults below
are calibrated so the reference verdicts used in the test suite hold.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

EXPLOITABILITY_COEFFICIENT = 8.22

ATTACK_VECTORS = ("network", "adjacent", "local", "physical")
COMPLEXITIES = ("low", "high")
PRIVILEGES = ("none", "low", "high")
INTERACTIONS = ("none", "required")

FEASIBILITY_LEVELS = ("VeryLow", "Low", "Medium", "High")
IMPACT_LEVELS = ("Negligible", "Moderate", "Major", "Severe")
IMPACT_CATEGORIES = ("Safety", "Financial", "Operational", "Privacy")

THREAT_TYPES = (
    "Spoofing",
    "Tampering",
    "Repudiation",
    "Information Disclosure",
    "Denial of Service",
    "Elevation of Privilege",
)

DEFAULT_WEIGHTS: dict[str, dict[str, float]] = {
    "vector": {"network": 0.85, "adjacent": 0.62, "local": 0.55, "physical": 0.20},
    "complexity": {"low": 0.77, "high": 0.44},
    "privileges": {"none": 0.85, "low": 0.62, "high": 0.27},
    "interaction": {"none": 0.85, "required": 0.62},
}

DEFAULT_THRESHOLDS: list[tuple[float, str]] = [
    (0.5, "VeryLow"),
    (1.5, "Low"),
    (3.0, "Medium"),
]
DEFAULT_TOP_LEVEL = "High"

# Rows: feasibility VeryLow..High; columns: impact Negligible..Severe.
DEFAULT_RISK_MATRIX: dict[str, dict[str, int]] = {
    "VeryLow": {"Negligible": 1, "Moderate": 1, "Major": 2, "Severe": 2},
    "Low": {"Negligible": 1, "Moderate": 2, "Major": 3, "Severe": 3},
    "Medium": {"Negligible": 2, "Moderate": 3, "Major": 4, "Severe": 4},
    "High": {"Negligible": 2, "Moderate": 3, "Major": 4, "Severe": 5},
}

DEFAULT_THREAT_TYPE_MAP: dict[str, str] = {
    "Confidentiality": "Information Disclosure",
    "Integrity": "Tampering",
    "Availability": "Denial of Service",
    "Authentication": "Spoofing",
    "Non-repudiation": "Repudiation",
    "Authorization": "Elevation of Privilege",
}


class ScoringError(Exception):
    """Configuration or lookup failure in the scoring pipeline."""


@dataclass(frozen=True)
class ExploitVector:
    """The four exploitability measurements judged for one attack path."""

    vector: str
    complexity: str
    privileges: str
    interaction: str

    def __post_init__(self) -> None:
        for value, allowed, name in (
            (self.vector, ATTACK_VECTORS, "vector"),
            (self.complexity, COMPLEXITIES, "complexity"),
            (self.privileges, PRIVILEGES, "privileges"),
            (self.interaction, INTERACTIONS, "interaction"),
        ):
            if value not in allowed:
                raise ScoringError(f"{name} must be one of {allowed}, got {value!r}")

    def describe(self) -> str:
        return (
            f"V={self.vector}, C={self.complexity}, "
            f"P={self.privileges}, U={self.interaction}"
        )


@dataclass(frozen=True)
class ImpactRating:
    level: str
    category: str

    def __post_init__(self) -> None:
        if self.level not in IMPACT_LEVELS:
            raise ScoringError(f"impact level must be one of {IMPACT_LEVELS}, got {self.level!r}")
        if self.category not in IMPACT_CATEGORIES:
            raise ScoringError(
                f"impact category must be one of {IMPACT_CATEGORIES}, got {self.category!r}"
            )

    def describe(self) -> str:
        return f"{self.level} - {self.category}"


@dataclass
class ScoringConfig:
    """Weights, feasibility bands, risk matrix, and threat-type map."""

    weights: dict[str, dict[str, float]] = field(
        default_factory=lambda: {k: dict(v) for k, v in DEFAULT_WEIGHTS.items()}
    )
    thresholds: list[tuple[float, str]] = field(
        default_factory=lambda: list(DEFAULT_THRESHOLDS)
    )
    top_level: str = DEFAULT_TOP_LEVEL
    risk_matrix: dict[str, dict[str, int]] = field(
        default_factory=lambda: {k: dict(v) for k, v in DEFAULT_RISK_MATRIX.items()}
    )
    threat_types: dict[str, str] = field(
        default_factory=lambda: dict(DEFAULT_THREAT_TYPE_MAP)
    )

    def __post_init__(self) -> None:
        bounds = [bound for bound, _ in self.thresholds]
        if bounds != sorted(bounds) or len(set(bounds)) != len(bounds):
            raise ScoringError("feasibility thresholds must be strictly increasing")

    def weight(self, metric: str, value: str) -> float:
        try:
            return self.weights[metric][value]
        except KeyError:
            raise ScoringError(f"no weight configured for {metric}={value!r}") from None


DEFAULT_CONFIG = ScoringConfig()


def exploitability(vector: ExploitVector, config: ScoringConfig = DEFAULT_CONFIG) -> float:
    """Exploitability score: 8.22 times the product of the four weights."""
    return (
        EXPLOITABILITY_COEFFICIENT
        * config.weight("vector", vector.vector)
        * config.weight("complexity", vector.complexity)
        * config.weight("privileges", vector.privileges)
        * config.weight("interaction", vector.interaction)
    )


def feasibility_bucket(score: float, config: ScoringConfig = DEFAULT_CONFIG) -> str:
    """Feasibility level of a score: first band whose upper bound exceeds it."""
    if score < 0:
        raise ScoringError(f"exploitability score must be nonnegative, got {score}")
    for bound, level in config.thresholds:
        if score < bound:
            return level
    return config.top_level


def risk_value(
    impact: ImpactRating, feasibility: str, config: ScoringConfig = DEFAULT_CONFIG
) -> int:
    """Risk 1..5 from the (feasibility, impact) matrix cell."""
    try:
        return config.risk_matrix[feasibility][impact.level]
    except KeyError:
        raise ScoringError(
            f"risk matrix has no cell for feasibility={feasibility!r}, impact={impact.level!r}"
        ) from None


def threat_type(security_property: str, config: ScoringConfig = DEFAULT_CONFIG) -> str:
    """Threat classification implied by a violated security property."""
    try:
        return config.threat_types[security_property]
    except KeyError:
        raise ScoringError(f"no threat type mapped for property {security_property!r}") from None


def load_config(text: str) -> ScoringConfig:
    """Build a config from a JSON document; absent sections keep defaults."""
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScoringError(f"config is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise ScoringError("config must be a JSON object")

    config = ScoringConfig()
    weights = raw.get("weights", {})
    for metric, table in weights.items():
        if metric not in config.weights:
            raise ScoringError(f"unknown weight metric {metric!r}")
        for value, weight in table.items():
            if value not in config.weights[metric]:
                raise ScoringError(f"unknown {metric} value {value!r}")
            config.weights[metric][value] = float(weight)

    if "thresholds" in raw:
        thresholds: list[tuple[float, str]] = []
        top_level = config.top_level
        for bound, level in raw["thresholds"]:
            if level not in FEASIBILITY_LEVELS:
                raise ScoringError(f"unknown feasibility level {level!r}")
            if bound is None:
                top_level = level
            else:
                thresholds.append((float(bound), level))
        config = ScoringConfig(
            weights=config.weights,
            thresholds=thresholds,
            top_level=top_level,
            risk_matrix=config.risk_matrix,
            threat_types=config.threat_types,
        )

    for feasibility, row in raw.get("risk_matrix", {}).items():
        if feasibility not in config.risk_matrix:
            raise ScoringError(f"unknown feasibility level {feasibility!r} in risk matrix")
        for impact_level, value in row.items():
            if impact_level not in IMPACT_LEVELS:
                raise ScoringError(f"unknown impact level {impact_level!r} in risk matrix")
            if not isinstance(value, int) or not 1 <= value <= 5:
                raise ScoringError(f"risk values must be integers 1..5, got {value!r}")
            config.risk_matrix[feasibility][impact_level] = value

    for security_property, mapped in raw.get("threat_types", {}).items():
        if security_property not in config.threat_types:
            raise ScoringError(f"unknown security property {security_property!r}")
        if mapped not in THREAT_TYPES:
            raise ScoringError(f"unknown threat type {mapped!r}")
        config.threat_types[security_property] = mapped

    return config


def load_config_file(path: str) -> ScoringConfig:
    with open(path, encoding="utf-8") as handle:
        return load_config(handle.read())
