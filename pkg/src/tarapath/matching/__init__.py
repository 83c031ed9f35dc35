"""Pattern matching against models; path enumeration runs on a compiled
kernel when built, with a pure-Python fallback selected at import."""

from tarapath.matching.engine import (
    KERNEL_NAME,
    Finding,
    MatchError,
    Witness,
    connector_matches,
    element_matches,
    eval_filter,
    evaluate_rules,
    match_connector,
    match_element,
    match_flow,
    match_pattern,
)

__all__ = [
    "KERNEL_NAME",
    "Finding",
    "MatchError",
    "Witness",
    "connector_matches",
    "element_matches",
    "eval_filter",
    "evaluate_rules",
    "match_connector",
    "match_element",
    "match_flow",
    "match_pattern",
]
