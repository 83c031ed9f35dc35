"""Anti-pattern trees and their series-parallel path semantics.

A tree connects an asset (root) to anti-patterns (leaves) through OR, AND,
and SAND gates; SAND is sequential conjunction. Entry points and other
assets appear as reference leaves until :func:`merge_trees` substitutes
their trees. :func:`sp_semantics` unfolds a merged tree into the set of
series-parallel graphs, one per attack path; :func:`count_paths` computes
the size algebraically without enumerating.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from tarapath.dsl import ast, parse, render

SEQUENTIAL = "sequential"
PARALLEL = "parallel"

COMBINE_ANY = "any"  # one requirement suffices (OR group)
COMBINE_ALL = "all"  # every requirement is needed (AND group)


class TreeError(Exception):
    """Base class for tree construction and interpretation failures."""


class UnresolvedReferenceError(TreeError):
    """Path interpretation reached a reference leaf with no bound subtree."""


class CyclicSubstitutionError(TreeError):
    """Tree bindings refer to each other in a loop."""


@dataclass(frozen=True)
class Requirement:
    """Prerequisite interface or asset enabling an anti-pattern."""

    ref: str
    mode: str = SEQUENTIAL


@dataclass(frozen=True)
class AntiPattern:
    """One catalogued weakness: a pattern plus the properties it violates."""

    id: str
    pattern: ast.PatternAst
    targets: tuple[str, ...] = ()
    requires: tuple[Requirement, ...] = ()
    combine: str = COMBINE_ANY

    def requirement_mode(self) -> str:
        modes = {req.mode for req in self.requires}
        if len(modes) > 1:
            raise TreeError(f"anti-pattern {self.id!r} mixes requirement modes {sorted(modes)}")
        return modes.pop() if modes else SEQUENTIAL


# -- Tree nodes --------------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    """A single anti-pattern step."""

    anti_pattern: AntiPattern


@dataclass(frozen=True)
class Ref:
    """Unresolved reference to an entry point's or another asset's tree."""

    ref: str


@dataclass(frozen=True)
class Sand:
    """Sequential conjunction: children in order."""

    children: tuple

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise TreeError("SAND gate needs at least two children")


@dataclass(frozen=True)
class And:
    """Conjunction without ordering."""

    children: tuple

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise TreeError("AND gate needs at least two children")


@dataclass(frozen=True)
class Or:
    """Disjunction: any child suffices."""

    children: tuple

    def __post_init__(self) -> None:
        if len(self.children) < 2:
            raise TreeError("OR gate needs at least two children")


@dataclass(frozen=True)
class AssetRoot:
    """Tree root naming the asset (or entry interface) the tree protects."""

    asset: str
    child: object


Node = Leaf | Ref | Sand | And | Or | AssetRoot


# -- Series-parallel graphs ---------------------------------------------------


@dataclass(frozen=True)
class Step:
    step_id: str


@dataclass(frozen=True)
class Seq:
    """Sequential composition; order is the attack order."""

    parts: tuple


@dataclass(frozen=True)
class Par:
    """Parallel composition; the last part sits at the asset side."""

    parts: tuple


class SpGraph:
    """One attack path as a series-parallel composition of step ids.

    Equality and hashing use a canonical form in which parallel branches
    are sorted, so graphs that differ only in parallel order compare equal.
    """

    __slots__ = ("structure", "steps", "_canon")

    def __init__(self, structure: Step | Seq | Par):
        self.structure = structure
        self.steps = tuple(_collect_steps(structure))
        if len(set(self.steps)) != len(self.steps):
            raise TreeError(f"attack path repeats a step: {self.steps}")
        self._canon = canonical_structure(structure)

    def canonical(self) -> tuple:
        return self._canon

    def sink_step(self) -> str:
        """Id of the asset-adjacent step (last in every composition)."""
        node = self.structure
        while not isinstance(node, Step):
            node = node.parts[-1]
        return node.step_id

    def __eq__(self, other: object) -> bool:
        return isinstance(other, SpGraph) and self._canon == other._canon

    def __hash__(self) -> int:
        return hash(self._canon)

    def __repr__(self) -> str:
        return f"SpGraph({self.render()})"

    def render(self) -> str:
        return _render_structure(self.structure, top=True)


def _collect_steps(node) -> list[str]:
    if isinstance(node, Step):
        return [node.step_id]
    found: list[str] = []
    for part in node.parts:
        found.extend(_collect_steps(part))
    return found


def canonical_structure(node) -> tuple:
    if isinstance(node, Step):
        return ("step", node.step_id)
    if isinstance(node, Seq):
        return ("seq", tuple(canonical_structure(p) for p in node.parts))
    return ("par", tuple(sorted(canonical_structure(p) for p in node.parts)))


def _render_structure(node, top: bool = False) -> str:
    if isinstance(node, Step):
        return node.step_id
    symbol = " . " if isinstance(node, Seq) else " || "
    parts = node.parts
    if isinstance(node, Par):
        parts = tuple(sorted(parts, key=canonical_structure))
    inner = symbol.join(_render_structure(p) for p in parts)
    return inner if top else f"({inner})"


def _seq(parts: tuple) -> Step | Seq:
    flat: list = []
    for part in parts:
        flat.extend(part.parts if isinstance(part, Seq) else [part])
    return flat[0] if len(flat) == 1 else Seq(tuple(flat))


def _par(parts: tuple) -> Step | Par:
    flat: list = []
    for part in parts:
        flat.extend(part.parts if isinstance(part, Par) else [part])
    return flat[0] if len(flat) == 1 else Par(tuple(flat))


# -- Construction -------------------------------------------------------------


def build_tree(asset: str, entries: list[AntiPattern]) -> AssetRoot:
    """Assemble an asset's tree from its catalogued anti-patterns.

    Each anti-pattern becomes a branch: a bare leaf when it has no
    requirements, otherwise its requirement group wired in by SAND
    (sequential mode) or AND (parallel mode). Multiple requirements group
    under OR unless the anti-pattern asks for all of them.
    """
    if not entries:
        raise TreeError(f"asset {asset!r} has no anti-patterns")
    branches = [_entry_branch(entry) for entry in entries]
    body = branches[0] if len(branches) == 1 else Or(tuple(branches))
    return AssetRoot(asset, body)


def _entry_branch(entry: AntiPattern) -> Node:
    leaf = Leaf(entry)
    if not entry.requires:
        return leaf
    refs: tuple = tuple(Ref(req.ref) for req in entry.requires)
    if len(refs) == 1:
        group = refs[0]
    elif entry.combine == COMBINE_ALL:
        group = And(refs)
    else:
        group = Or(refs)
    if entry.requirement_mode() == PARALLEL:
        return And((group, leaf))
    return Sand((group, leaf))


def merge_trees(tree: AssetRoot, env: dict[str, AssetRoot]) -> AssetRoot:
    """Substitute bound reference leaves by their trees, to fixpoint.

    The bound tree's root wrapper is stripped; only its body is inlined.
    Bindings may reference each other as long as they stay acyclic.
    """
    _check_acyclic(env)
    return AssetRoot(tree.asset, _substitute(tree.child, env))


def _check_acyclic(env: dict[str, AssetRoot]) -> None:
    WHITE, GRAY, BLACK = 0, 1, 2
    state = {name: WHITE for name in env}

    def visit(name: str, trail: tuple[str, ...]) -> None:
        state[name] = GRAY
        for ref in _references(env[name].child):
            if ref not in env:
                continue
            if state[ref] == GRAY:
                cycle = " -> ".join(trail + (name, ref))
                raise CyclicSubstitutionError(f"tree bindings form a loop: {cycle}")
            if state[ref] == WHITE:
                visit(ref, trail + (name,))
        state[name] = BLACK

    for name in env:
        if state[name] == WHITE:
            visit(name, ())


def _references(node) -> set[str]:
    if isinstance(node, Ref):
        return {node.ref}
    if isinstance(node, Leaf):
        return set()
    if isinstance(node, AssetRoot):
        return _references(node.child)
    found: set[str] = set()
    for child in node.children:
        found |= _references(child)
    return found


def _substitute(node, env: dict[str, AssetRoot]):
    if isinstance(node, Ref):
        bound = env.get(node.ref)
        if bound is None:
            return node
        return _substitute(bound.child, env)
    if isinstance(node, Leaf):
        return node
    if isinstance(node, AssetRoot):
        return AssetRoot(node.asset, _substitute(node.child, env))
    children = tuple(_substitute(child, env) for child in node.children)
    return type(node)(children)


def reduce_tree(tree: Node) -> Node:
    """Group OR branches that share one requirement subtree.

    ``Or(Sand(r, x1), ..., Sand(r, xk))`` becomes ``Sand(r, Or(x1..xk))``
    whenever the ``r`` are structurally identical; path semantics are
    unchanged. Applied bottom-up through the whole tree.
    """
    if isinstance(tree, (Leaf, Ref)):
        return tree
    if isinstance(tree, AssetRoot):
        return AssetRoot(tree.asset, reduce_tree(tree.child))
    children = tuple(reduce_tree(child) for child in tree.children)
    if not isinstance(tree, Or):
        return type(tree)(children)

    groups: dict[Node, list[Node]] = {}
    order: list[Node] = []
    for child in children:
        if isinstance(child, Sand) and len(child.children) == 2:
            requirement = child.children[0]
            if requirement not in groups:
                groups[requirement] = []
                order.append(requirement)
            groups[requirement].append(child.children[1])

    rewritten: list[Node] = []
    emitted: set[Node] = set()
    for child in children:
        if isinstance(child, Sand) and len(child.children) == 2:
            requirement = child.children[0]
            if requirement in emitted:
                continue
            emitted.add(requirement)
            tails = groups[requirement]
            if len(tails) == 1:
                rewritten.append(child)
            else:
                rewritten.append(Sand((requirement, Or(tuple(tails)))))
        else:
            rewritten.append(child)
    return rewritten[0] if len(rewritten) == 1 else Or(tuple(rewritten))


# -- Interpretation -----------------------------------------------------------


def sp_semantics(tree: Node) -> list[SpGraph]:
    """All attack paths of a merged tree, as deduplicated SP graphs.

    OR gates multiply alternatives, SAND composes sequentially, AND in
    parallel. Order is deterministic: first derivation wins.
    """
    graphs = [SpGraph(structure) for structure in _structures(tree)]
    unique: dict[tuple, SpGraph] = {}
    for graph in graphs:
        unique.setdefault(graph.canonical(), graph)
    return list(unique.values())


def _structures(node) -> list:
    if isinstance(node, Leaf):
        return [Step(node.anti_pattern.id)]
    if isinstance(node, Ref):
        raise UnresolvedReferenceError(
            f"reference {node.ref!r} has no bound tree; merge before interpreting"
        )
    if isinstance(node, AssetRoot):
        return _structures(node.child)
    if isinstance(node, Or):
        merged: list = []
        for child in node.children:
            merged.extend(_structures(child))
        return merged
    combiner = _seq if isinstance(node, Sand) else _par
    combos: list[tuple] = [()]
    for child in node.children:
        child_structures = _structures(child)
        combos = [prefix + (s,) for prefix in combos for s in child_structures]
    return [combiner(parts) for parts in combos]


def count_paths(tree: Node) -> int:
    """Number of attack paths, computed algebraically.

    Equals ``len(sp_semantics(tree))`` when all leaves are distinct; with
    shared subtrees the enumerated set can be smaller after dedup.
    """
    if isinstance(tree, Leaf):
        return 1
    if isinstance(tree, Ref):
        raise UnresolvedReferenceError(
            f"reference {tree.ref!r} has no bound tree; merge before counting"
        )
    if isinstance(tree, AssetRoot):
        return count_paths(tree.child)
    if isinstance(tree, Or):
        return sum(count_paths(child) for child in tree.children)
    product = 1
    for child in tree.children:
        product *= count_paths(child)
    return product


# -- Serialization ------------------------------------------------------------


def tree_to_document(node: Node) -> dict:
    if isinstance(node, Leaf):
        entry = node.anti_pattern
        record: dict = {
            "kind": "anti-pattern",
            "id": entry.id,
            "pattern": render(entry.pattern),
            "targets": list(entry.targets),
        }
        if entry.requires:
            record["requires"] = [{"ref": r.ref, "mode": r.mode} for r in entry.requires]
            record["combine"] = entry.combine
        return record
    if isinstance(node, Ref):
        return {"kind": "ref", "ref": node.ref}
    if isinstance(node, AssetRoot):
        return {"kind": "root", "asset": node.asset, "child": tree_to_document(node.child)}
    kind = {Sand: "sand", And: "and", Or: "or"}[type(node)]
    return {"kind": kind, "children": [tree_to_document(child) for child in node.children]}


def tree_from_document(record: dict) -> Node:
    if not isinstance(record, dict) or "kind" not in record:
        raise TreeError("tree node must be an object with a 'kind' field")
    kind = record["kind"]
    if kind == "anti-pattern":
        requires = tuple(
            Requirement(ref=req["ref"], mode=req.get("mode", SEQUENTIAL))
            for req in record.get("requires", [])
        )
        return Leaf(
            AntiPattern(
                id=record["id"],
                pattern=parse(record["pattern"]),
                targets=tuple(record.get("targets", [])),
                requires=requires,
                combine=record.get("combine", COMBINE_ANY),
            )
        )
    if kind == "ref":
        return Ref(record["ref"])
    if kind == "root":
        return AssetRoot(record["asset"], tree_from_document(record["child"]))
    gates = {"sand": Sand, "and": And, "or": Or}
    if kind in gates:
        children = tuple(tree_from_document(child) for child in record.get("children", []))
        return gates[kind](children)
    raise TreeError(f"unknown tree node kind {kind!r}")


def save_tree(node: Node) -> str:
    return json.dumps(tree_to_document(node), indent=2) + "\n"


def load_tree(text: str) -> Node:
    try:
        record = json.loads(text)
    except json.JSONDecodeError as exc:
        raise TreeError(f"tree file is not valid JSON: {exc}") from exc
    return tree_from_document(record)


def load_tree_file(path: str) -> Node:
    with open(path, encoding="utf-8") as handle:
        return load_tree(handle.read())
