"""Pattern evaluation against a model.

ELEMENT and CONNECTOR patterns scan the component lists directly; FLOW
patterns enumerate simple directed paths between matching endpoints with
the path kernel, then evaluate the clause expression on each path. The
compiled kernel is used when available; set ``TARAPATH_PURE_PYTHON=1`` to
force the pure-Python fallback.
"""

from __future__ import annotations

import logging
import os
from dataclasses import dataclass

from tarapath.dsl import ast
from tarapath.model import Boundary, Connector, Element, Model, is_unset, normalize_value

if os.environ.get("TARAPATH_PURE_PYTHON") == "1":
    from tarapath.matching import pathkernel_py as pathkernel
else:
    try:
        from tarapath.matching import pathkernel_cy as pathkernel  # type: ignore
    except ImportError:
        from tarapath.matching import pathkernel_py as pathkernel

KERNEL_NAME: str = pathkernel.KERNEL_NAME

logger = logging.getLogger(__name__)


class MatchError(Exception):
    """Pattern cannot be evaluated against the model."""


@dataclass(frozen=True)
class Witness:
    """Components proving one pattern match.

    For FLOW matches ``path`` alternates element and connector ids from the
    source element to the target element; for single-component matches it
    is ``None``.
    """

    matched: tuple[str, ...]
    path: tuple[str, ...] | None = None


@dataclass(frozen=True)
class Finding:
    """One rule violation: the rule that fired and its witness."""

    rule_id: str
    witness: Witness
    rule: object = None  # carries the full work products when available


# -- Filters -----------------------------------------------------------------


def eval_filter(expr, properties: dict[str, str]) -> bool:
    """Evaluate a filter over a property map.

    Unassigned properties (missing or ``unset``) take the pessimistic
    security reading: equality and membership fail, their negations hold.
    So a weakness filter like ``"Authorization" != "yes"`` fires for a
    component whose authorization was never documented.
    """
    if isinstance(expr, ast.And):
        return all(eval_filter(child, properties) for child in expr.children)
    if isinstance(expr, ast.Or):
        return any(eval_filter(child, properties) for child in expr.children)
    if isinstance(expr, ast.Compare):
        value = properties.get(expr.prop)
        if is_unset(value):
            return expr.op == ast.CompareOp.NEQ
        equal = normalize_value(value) == normalize_value(expr.value)
        return equal if expr.op == ast.CompareOp.EQ else not equal
    if isinstance(expr, ast.SetMember):
        value = properties.get(expr.prop)
        if is_unset(value):
            return expr.negated
        member = normalize_value(value) in {normalize_value(v) for v in expr.values}
        return member != expr.negated
    raise MatchError(f"not a filter expression: {expr!r}")


# -- Single-component matching -------------------------------------------------


def element_matches(pattern: ast.ElementPattern, element: Element, model: Model) -> bool:
    if pattern.type is not None:
        category = model.catalog.category_of(element.type)
        if pattern.type != element.type and pattern.type != category:
            return False
    return pattern.filter is None or eval_filter(pattern.filter, element.properties)


def connector_matches(pattern: ast.ConnectorPattern, connector: Connector, model: Model) -> bool:
    if pattern.clauses is None:
        return True
    return _eval_connector_clause(pattern.clauses, connector, model)


def _eval_connector_clause(expr, connector: Connector, model: Model) -> bool:
    if isinstance(expr, ast.And):
        return all(_eval_connector_clause(c, connector, model) for c in expr.children)
    if isinstance(expr, ast.Or):
        return any(_eval_connector_clause(c, connector, model) for c in expr.children)
    if isinstance(expr, ast.Source):
        return element_matches(expr.element, model.element_by_id(connector.source), model)
    if isinstance(expr, ast.Target):
        return element_matches(expr.element, model.element_by_id(connector.target), model)
    return eval_filter(expr, connector.properties)


def boundary_matches(pattern: ast.BoundaryPattern, boundary: Boundary) -> bool:
    return pattern.type is None or pattern.type == boundary.type


def match_element(pattern: ast.ElementPattern, model: Model) -> list[Witness]:
    """One witness per matching element, in model declaration order."""
    return [
        Witness(matched=(element.id,))
        for element in model.elements
        if element_matches(pattern, element, model)
    ]


def match_connector(pattern: ast.ConnectorPattern, model: Model) -> list[Witness]:
    """One witness per matching connector, in model declaration order."""
    return [
        Witness(matched=(connector.id,))
        for connector in model.connectors
        if connector_matches(pattern, connector, model)
    ]


# -- Flow matching --------------------------------------------------------------


def match_flow(pattern: ast.FlowPattern, model: Model) -> list[Witness]:
    """One witness per simple directed path satisfying the flow clauses.

    Paths run from an element matching SOURCE to an element matching
    TARGET along connector direction, never repeating an element.
    INCLUDES looks at strictly interior elements (all path connectors for
    connector patterns); CROSSES asks whether some path connector crosses
    a matching boundary.
    """
    source_pattern = ast.flow_source(pattern)
    target_pattern = ast.flow_target(pattern)

    sources = [
        i for i, e in enumerate(model.elements) if element_matches(source_pattern, e, model)
    ]
    targets = [
        i for i, e in enumerate(model.elements) if element_matches(target_pattern, e, model)
    ]
    if not sources or not targets:
        return []

    index_of = {element.id: i for i, element in enumerate(model.elements)}
    edge_src = [index_of[c.source] for c in model.connectors]
    edge_dst = [index_of[c.target] for c in model.connectors]

    paths = pathkernel.find_simple_paths(
        len(model.elements), edge_src, edge_dst, sources, targets
    )
    logger.debug("flow kernel (%s) enumerated %d candidate paths", KERNEL_NAME, len(paths))

    evaluator = _FlowEvaluator(model)
    witnesses: list[Witness] = []
    for node_idxs, edge_idxs in paths:
        if evaluator.eval(pattern.clauses, node_idxs, edge_idxs):
            witnesses.append(_path_witness(model, node_idxs, edge_idxs))
    return witnesses


class _FlowEvaluator:
    """Evaluates flow clause expressions over candidate paths.

    Component-versus-pattern checks are memoized per pattern, so repeated
    clauses across many paths stay cheap.
    """

    def __init__(self, model: Model):
        self.model = model
        self._element_masks: dict[ast.ElementPattern, list[bool]] = {}
        self._connector_masks: dict[ast.ConnectorPattern, list[bool]] = {}
        self._crossing_masks: dict[ast.BoundaryPattern, list[bool]] = {}
        self._enclosures: dict[str, set[str]] | None = None

    def eval(self, expr, nodes: tuple[int, ...], edges: tuple[int, ...]) -> bool:
        if isinstance(expr, ast.And):
            return all(self.eval(child, nodes, edges) for child in expr.children)
        if isinstance(expr, ast.Or):
            return any(self.eval(child, nodes, edges) for child in expr.children)
        if isinstance(expr, ast.Source):
            return self._element_mask(expr.element)[nodes[0]]
        if isinstance(expr, ast.Target):
            return self._element_mask(expr.element)[nodes[-1]]
        if isinstance(expr, ast.Includes):
            if isinstance(expr.inner, ast.ElementPattern):
                mask = self._element_mask(expr.inner)
                hit = any(mask[i] for i in nodes[1:-1])
            else:
                mask = self._connector_mask(expr.inner)
                hit = any(mask[i] for i in edges)
            return hit != expr.negated
        if isinstance(expr, ast.Crosses):
            mask = self._crossing_mask(expr.boundary)
            hit = any(mask[i] for i in edges)
            return hit != expr.negated
        raise MatchError(f"not a flow clause: {expr!r}")

    def _element_mask(self, pattern: ast.ElementPattern) -> list[bool]:
        mask = self._element_masks.get(pattern)
        if mask is None:
            mask = [element_matches(pattern, e, self.model) for e in self.model.elements]
            self._element_masks[pattern] = mask
        return mask

    def _connector_mask(self, pattern: ast.ConnectorPattern) -> list[bool]:
        mask = self._connector_masks.get(pattern)
        if mask is None:
            mask = [connector_matches(pattern, c, self.model) for c in self.model.connectors]
            self._connector_masks[pattern] = mask
        return mask

    def _crossing_mask(self, pattern: ast.BoundaryPattern) -> list[bool]:
        mask = self._crossing_masks.get(pattern)
        if mask is not None:
            return mask
        enclosures = self._enclosure_sets()
        boundary_ids = [
            b.id for b in self.model.boundaries if boundary_matches(pattern, b)
        ]
        mask = [
            any(
                (connector.source in enclosures[b]) != (connector.target in enclosures[b])
                for b in boundary_ids
            )
            for connector in self.model.connectors
        ]
        self._crossing_masks[pattern] = mask
        return mask

    def _enclosure_sets(self) -> dict[str, set[str]]:
        """Element ids enclosed by each boundary, nested boundaries included."""
        if self._enclosures is not None:
            return self._enclosures
        children: dict[str, list[Boundary]] = {}
        for boundary in self.model.boundaries:
            if boundary.parent is not None:
                children.setdefault(boundary.parent, []).append(boundary)
        enclosures: dict[str, set[str]] = {}

        def collect(boundary: Boundary) -> set[str]:
            if boundary.id in enclosures:
                return enclosures[boundary.id]
            members = set(boundary.members)
            for child in children.get(boundary.id, []):
                members |= collect(child)
            enclosures[boundary.id] = members
            return members

        for boundary in self.model.boundaries:
            collect(boundary)
        self._enclosures = enclosures
        return enclosures


def _path_witness(model: Model, nodes: tuple[int, ...], edges: tuple[int, ...]) -> Witness:
    ids: list[str] = [model.elements[nodes[0]].id]
    for node_idx, edge_idx in zip(nodes[1:], edges):
        ids.append(model.connectors[edge_idx].id)
        ids.append(model.elements[node_idx].id)
    return Witness(matched=tuple(ids), path=tuple(ids))


# -- Rule evaluation -------------------------------------------------------------


def match_pattern(pattern: ast.PatternAst, model: Model) -> list[Witness]:
    if isinstance(pattern, ast.ElementPattern):
        return match_element(pattern, model)
    if isinstance(pattern, ast.ConnectorPattern):
        return match_connector(pattern, model)
    if isinstance(pattern, ast.FlowPattern):
        return match_flow(pattern, model)
    raise MatchError(f"not a matchable pattern: {pattern!r}")


def evaluate_rules(rules: list, model: Model) -> list[Finding]:
    """Concatenated findings of each rule, in rule order.

    ``rules`` may be any objects with ``id`` and ``pattern`` attributes
    (compiled threat rules, parsed rule file entries, ...). An empty
    result means the model is secure with respect to the rule set.
    """
    findings: list[Finding] = []
    for rule in rules:
        for witness in match_pattern(rule.pattern, model):
            findings.append(Finding(rule_id=rule.id, witness=witness, rule=rule))
    return findings
