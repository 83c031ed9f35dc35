"""Seeded random generators for property tests.

Deterministic (plain ``random.Random``) so failures reproduce exactly and
the large acceptance populations run in predictable time.
"""

from __future__ import annotations

import random

from tarapath.dsl import ast
from tarapath.model import Connector, Element, Model, TypeCatalog, TypeInfo
from tarapath.trees import And, AntiPattern, AssetRoot, Leaf, Or, Sand

TYPE_POOL = ["Alpha", "Beta", "Gamma Unit", "Delta", "Relay"]
PROP_POOL = ["Shield", "Mode", "Watch Dog", "Grade"]
VALUE_POOL = ["yes", "no", "high", "low", "unset", "a b", "Mixed Case"]


def random_model(rng: random.Random, max_elements: int = 8) -> Model:
    """Small random model: typed elements, random directed edges, no containment."""
    n = rng.randint(2, max_elements)
    catalog = TypeCatalog(
        categories={},
        types={name: TypeInfo() for name in TYPE_POOL},
    )
    elements = []
    for i in range(n):
        properties = {
            prop: rng.choice(VALUE_POOL)
            for prop in PROP_POOL
            if rng.random() < 0.7
        }
        elements.append(
            Element(id=f"e{i}", name=f"e{i}", type=rng.choice(TYPE_POOL), properties=properties)
        )
    connectors = []
    edge_count = rng.randint(0, min(2 * n, 12))
    for k in range(edge_count):
        src, dst = rng.sample(range(n), 2)
        connectors.append(
            Connector(
                id=f"c{k}",
                type="Link",
                medium=rng.choice(("wired", "wireless")),
                source=f"e{src}",
                target=f"e{dst}",
                properties={
                    prop: rng.choice(VALUE_POOL)
                    for prop in PROP_POOL
                    if rng.random() < 0.3
                },
            )
        )
    catalog.types["Link"] = TypeInfo()
    return Model(elements=elements, connectors=connectors, catalog=catalog)


def random_filter(rng: random.Random, depth: int = 2):
    if depth == 0 or rng.random() < 0.55:
        prop = rng.choice(PROP_POOL)
        if rng.random() < 0.5:
            op = rng.choice((ast.CompareOp.EQ, ast.CompareOp.NEQ))
            return ast.Compare(prop, op, rng.choice(VALUE_POOL))
        values = tuple(
            rng.choice(VALUE_POOL) for _ in range(rng.randint(1, 3))
        )
        return ast.SetMember(prop, rng.random() < 0.5, values)
    gate = ast.And if rng.random() < 0.5 else ast.Or
    children = tuple(random_filter(rng, depth - 1) for _ in range(rng.randint(2, 3)))
    return gate(children)


def random_element_pattern(rng: random.Random) -> ast.ElementPattern:
    type_name = rng.choice(TYPE_POOL + [None, None])
    filter_expr = random_filter(rng) if rng.random() < 0.7 else None
    return ast.ElementPattern(type=type_name, filter=filter_expr)


def random_flow_pattern(rng: random.Random) -> ast.FlowPattern:
    """Valid flow: one SOURCE/TARGET plus extra clauses, possibly OR-grouped."""
    clauses: list = [
        ast.Source(random_element_pattern(rng)),
        ast.Target(random_element_pattern(rng)),
    ]
    for _ in range(rng.randint(0, 3)):
        clauses.append(_random_constraint(rng))
    if rng.random() < 0.4:
        grouped = tuple(_random_constraint(rng) for _ in range(2))
        clauses.append(ast.Or(grouped))
    rng.shuffle(clauses)
    return ast.FlowPattern(ast.And(tuple(clauses)))


def _random_constraint(rng: random.Random):
    roll = rng.random()
    if roll < 0.5:
        return ast.Includes(rng.random() < 0.4, random_element_pattern(rng))
    if roll < 0.8:
        clauses = None
        if rng.random() < 0.8:
            parts: list = []
            if rng.random() < 0.5:
                parts.append(ast.Source(random_element_pattern(rng)))
            if rng.random() < 0.5:
                parts.append(ast.Target(random_element_pattern(rng)))
            if not parts or rng.random() < 0.5:
                parts.append(random_filter(rng, depth=1))
            clauses = parts[0] if len(parts) == 1 else ast.And(tuple(parts))
        return ast.Includes(rng.random() < 0.4, ast.ConnectorPattern(clauses))
    return ast.Crosses(rng.random() < 0.4, ast.BoundaryPattern(rng.choice(["Zone", None])))


def random_pattern(rng: random.Random) -> ast.PatternAst:
    roll = rng.random()
    if roll < 0.4:
        return random_element_pattern(rng)
    if roll < 0.6:
        clauses = None
        if rng.random() < 0.85:
            parts = [ast.Source(random_element_pattern(rng)), random_filter(rng, 1)]
            clauses = ast.And(tuple(parts)) if len(parts) > 1 else parts[0]
        return ast.ConnectorPattern(clauses)
    return random_flow_pattern(rng)


def random_tree(rng: random.Random, max_depth: int = 6) -> AssetRoot:
    """Random gate tree with distinct leaves."""
    counter = [0]

    def leaf() -> Leaf:
        counter[0] += 1
        return Leaf(
            AntiPattern(id=f"w{counter[0]:03d}", pattern=ast.ElementPattern(), targets=("Integrity",))
        )

    def node(depth: int):
        if depth == 0 or rng.random() < 0.35:
            return leaf()
        gate = rng.choice((Sand, And, Or))
        children = tuple(node(depth - 1) for _ in range(rng.randint(2, 3)))
        return gate(children)

    return AssetRoot("asset-under-test", node(rng.randint(1, max_depth)))
