"""Brute-force oracles, kept independent of the engine's path machinery.

Path enumeration here walks the raw connector list recursively and clause
scoping is re-derived from scratch; only the single-component predicates
(element/connector/filter matching) are shared with the engine, since
those have their own direct tests.
"""

from __future__ import annotations

from tarapath.dsl import ast
from tarapath.matching import connector_matches, element_matches
from tarapath.model import Model


def oracle_flow_witness_paths(pattern: ast.FlowPattern, model: Model) -> set[tuple[str, ...]]:
    """All witness paths of a flow pattern, as alternating id tuples."""
    source_pattern = ast.flow_source(pattern)
    target_pattern = ast.flow_target(pattern)
    by_id = {e.id: e for e in model.elements}

    witnesses: set[tuple[str, ...]] = set()

    def extend(node_id: str, node_ids: list[str], conn_ids: list[str]) -> None:
        if conn_ids and element_matches(target_pattern, by_id[node_id], model):
            if _oracle_clauses(pattern.clauses, node_ids, conn_ids, model):
                path: list[str] = [node_ids[0]]
                for conn, node in zip(conn_ids, node_ids[1:]):
                    path.extend((conn, node))
                witnesses.add(tuple(path))
        for connector in model.connectors:
            if connector.source == node_id and connector.target not in node_ids:
                extend(
                    connector.target,
                    node_ids + [connector.target],
                    conn_ids + [connector.id],
                )

    for element in model.elements:
        if element_matches(source_pattern, element, model):
            extend(element.id, [element.id], [])
    return witnesses


def _oracle_clauses(expr, node_ids: list[str], conn_ids: list[str], model: Model) -> bool:
    if isinstance(expr, ast.And):
        return all(_oracle_clauses(c, node_ids, conn_ids, model) for c in expr.children)
    if isinstance(expr, ast.Or):
        return any(_oracle_clauses(c, node_ids, conn_ids, model) for c in expr.children)
    by_id = {e.id: e for e in model.elements}
    if isinstance(expr, ast.Source):
        return element_matches(expr.element, by_id[node_ids[0]], model)
    if isinstance(expr, ast.Target):
        return element_matches(expr.element, by_id[node_ids[-1]], model)
    if isinstance(expr, ast.Includes):
        if isinstance(expr.inner, ast.ElementPattern):
            hit = any(
                element_matches(expr.inner, by_id[node_id], model)
                for node_id in node_ids[1:-1]
            )
        else:
            connectors = {c.id: c for c in model.connectors}
            hit = any(
                connector_matches(expr.inner, connectors[conn_id], model)
                for conn_id in conn_ids
            )
        return hit != expr.negated
    if isinstance(expr, ast.Crosses):
        connectors = {c.id: c for c in model.connectors}
        hit = any(
            _oracle_crosses(model, connectors[conn_id], expr.boundary)
            for conn_id in conn_ids
        )
        return hit != expr.negated
    raise AssertionError(f"unexpected clause {expr!r}")


def _oracle_crosses(model: Model, connector, boundary_pattern: ast.BoundaryPattern) -> bool:
    for boundary in model.boundaries:
        if boundary_pattern.type is not None and boundary.type != boundary_pattern.type:
            continue
        inside = _oracle_enclosed(model, boundary.id)
        if (connector.source in inside) != (connector.target in inside):
            return True
    return False


def _oracle_enclosed(model: Model, boundary_id: str) -> set[str]:
    """Element ids inside a boundary, including nested boundaries."""
    inside: set[str] = set()
    frontier = {boundary_id}
    while frontier:
        current = frontier.pop()
        for boundary in model.boundaries:
            if boundary.id == current:
                inside.update(boundary.members)
            if boundary.parent == current:
                frontier.add(boundary.id)
    return inside


def engine_witness_paths(pattern: ast.FlowPattern, model: Model) -> set[tuple[str, ...]]:
    from tarapath.matching import match_flow

    return {w.path for w in match_flow(pattern, model)}
