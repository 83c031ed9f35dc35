"""AST node types for the anti-pattern language.

All nodes are frozen dataclasses, so structural equality and hashing come
for free; the parser and the canonical printer agree on this structure
(parse(render(ast)) == ast).
"""

from __future__ import annotations

from dataclasses import dataclass, field


class CompareOp:
    EQ = "=="
    NEQ = "!="


@dataclass(frozen=True)
class Compare:
    """Single property comparison, e.g. ``"Authorization" != "yes"``."""

    prop: str
    op: str
    value: str


@dataclass(frozen=True)
class SetMember:
    """Membership test, e.g. ``"Updates" NOT IN ["remote", "yes"]``."""

    prop: str
    negated: bool
    values: tuple[str, ...]


@dataclass(frozen=True)
class And:
    """Conjunction of filter terms or flow/connector clauses."""

    children: tuple

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise ValueError("And requires at least two children")


@dataclass(frozen=True)
class Or:
    """Disjunction of filter terms or flow/connector clauses."""

    children: tuple

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise ValueError("Or requires at least two children")


@dataclass(frozen=True)
class ElementPattern:
    """``ELEMENT`` with optional type name and property filter.

    Without a type name the pattern is a wildcard over all elements; the
    type name also matches elements whose catalog category carries it.
    """

    type: str | None = None
    filter: object | None = None


@dataclass(frozen=True)
class ConnectorPattern:
    """``CONNECTOR`` with endpoint and property clauses."""

    clauses: object | None = None


@dataclass(frozen=True)
class BoundaryPattern:
    """``BOUNDARY`` with optional type name (wildcard when absent)."""

    type: str | None = None


@dataclass(frozen=True)
class Source:
    """Flow/connector clause: the path (or connector) source element."""

    element: ElementPattern = field(default_factory=ElementPattern)


@dataclass(frozen=True)
class Target:
    """Flow/connector clause: the path (or connector) target element."""

    element: ElementPattern = field(default_factory=ElementPattern)


@dataclass(frozen=True)
class Includes:
    """Flow clause: an interior element (or any path connector) matches.

    ``negated`` turns it into ``INCLUDES NO``: nothing in scope matches.
    """

    negated: bool
    inner: ElementPattern | ConnectorPattern


@dataclass(frozen=True)
class Crosses:
    """Flow clause: some path connector crosses a matching boundary."""

    negated: bool
    boundary: BoundaryPattern = field(default_factory=BoundaryPattern)


@dataclass(frozen=True)
class FlowPattern:
    """``FLOW`` over a clause expression with one SOURCE and one TARGET."""

    clauses: object


#: Any pattern the top-level grammar can produce.
PatternAst = ElementPattern | ConnectorPattern | FlowPattern


def conjunctive_clauses(expr: object) -> list:
    """Clauses reachable from ``expr`` through And nodes only.

    This is the 'top-level conjunctive context' of a flow body: SOURCE and
    TARGET must each occur exactly once in it and nowhere else.
    """
    if isinstance(expr, And):
        found: list = []
        for child in expr.children:
            found.extend(conjunctive_clauses(child))
        return found
    return [expr]


def flow_source(pattern: FlowPattern) -> ElementPattern:
    for clause in conjunctive_clauses(pattern.clauses):
        if isinstance(clause, Source):
            return clause.element
    raise ValueError("flow has no SOURCE clause")


def flow_target(pattern: FlowPattern) -> ElementPattern:
    for clause in conjunctive_clauses(pattern.clauses):
        if isinstance(clause, Target):
            return clause.element
    raise ValueError("flow has no TARGET clause")
