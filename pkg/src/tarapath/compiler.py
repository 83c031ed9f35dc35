"""Compilation of attack paths into executable threat rules.

Each series-parallel graph linearizes to an ordered step list, the steps'
element patterns fold into one FLOW pattern (SOURCE, TARGET, INCLUDES),
and authored metadata supplies the human work products: titles, damage
and threat scenarios, step descriptions, impact, and the exploit vector
judged for the path. Scores and the risk value are computed, never
authored. The compiler itself invents no prose.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from tarapath.dsl import ast, render
from tarapath.dsl.rulefile import RuleEntry, parse_rule_file, render_rule_file
from tarapath.scoring import (
    ExploitVector,
    ImpactRating,
    ScoringConfig,
    DEFAULT_CONFIG,
    exploitability,
    feasibility_bucket,
    risk_value,
    threat_type,
)
from tarapath.trees import (
    AntiPattern,
    AssetRoot,
    Leaf,
    Node,
    Par,
    Seq,
    SpGraph,
    Step,
    canonical_structure,
    sp_semantics,
)

PATH_KEY_SEPARATOR = "+"


class CompileError(Exception):
    """Rule compilation failed."""


class UnsupportedStepError(CompileError):
    """A step's pattern is not an element pattern (v1 compiles only those)."""


class MissingMetadataError(CompileError):
    """Rule metadata lacks an entry required for the work products."""


@dataclass(frozen=True)
class ThreatRule:
    """A compiled rule with its full set of TARA work products."""

    id: str
    title: str
    asset: str
    asset_name: str
    damage_scenario: str
    attack_path: tuple[str, ...]
    threat_scenario: str
    threat_type: str
    exploit_vector: ExploitVector
    feasibility: str
    feasibility_score: float
    impact: ImpactRating
    risk: int
    pattern: ast.PatternAst
    steps: tuple[str, ...]


@dataclass
class AssetMeta:
    name: str
    damage_scenario: str
    impact: ImpactRating
    title: str | None = None
    threat_scenario: str | None = None


@dataclass
class PathMeta:
    title: str | None = None
    threat_scenario: str | None = None
    exploit_vector: ExploitVector | None = None


@dataclass
class RuleMeta:
    """Authored work-product metadata keyed by step, asset, and path."""

    steps: dict[str, str] = field(default_factory=dict)
    assets: dict[str, AssetMeta] = field(default_factory=dict)
    paths: dict[str, PathMeta] = field(default_factory=dict)
    default_vector: ExploitVector | None = None

    def step_description(self, step_id: str) -> str:
        description = self.steps.get(step_id)
        if description is None:
            raise MissingMetadataError(f"no step description for anti-pattern {step_id!r}")
        return description

    def asset_meta(self, asset: str) -> AssetMeta:
        meta = self.assets.get(asset)
        if meta is None:
            raise MissingMetadataError(f"no asset metadata for {asset!r}")
        return meta

    def path_meta(self, path_key: str) -> PathMeta:
        return self.paths.get(path_key, PathMeta())

    def vector_for(self, path_key: str) -> ExploitVector:
        vector = self.path_meta(path_key).exploit_vector or self.default_vector
        if vector is None:
            raise MissingMetadataError(f"no exploit vector for path {path_key!r}")
        return vector


# -- Linearization ------------------------------------------------------------


def linearize(graph: SpGraph) -> list[str]:
    """Step ids in rule order.

    Sequential composition keeps its order. Parallel branches are matched
    in sorted canonical order, except that the branch holding the
    asset-adjacent step always comes last, so the path ends at the asset.
    """
    return _linear(graph.structure)


def _linear(node) -> list[str]:
    if isinstance(node, Step):
        return [node.step_id]
    if isinstance(node, Seq):
        ordered: list[str] = []
        for part in node.parts:
            ordered.extend(_linear(part))
        return ordered
    assert isinstance(node, Par)
    branches = list(node.parts)
    final = branches[-1]  # asset-adjacent by construction
    rest = sorted(branches[:-1], key=canonical_structure)
    ordered = []
    for part in rest:
        ordered.extend(_linear(part))
    ordered.extend(_linear(final))
    return ordered


def path_key(graph: SpGraph) -> str:
    return PATH_KEY_SEPARATOR.join(linearize(graph))


# -- Pattern folding ------------------------------------------------------------


def _element_pattern_of(step: AntiPattern) -> ast.ElementPattern:
    if not isinstance(step.pattern, ast.ElementPattern):
        raise UnsupportedStepError(
            f"anti-pattern {step.id!r} is not an element pattern; "
            "only element steps compile in this version"
        )
    return step.pattern


def _merge_run(patterns: list[ast.ElementPattern]) -> ast.ElementPattern:
    """Fold consecutive steps on the same element type into one pattern."""
    filters = [p.filter for p in patterns if p.filter is not None]
    if len(filters) > 1:
        merged = ast.And(tuple(filters))
    elif filters:
        merged = filters[0]
    else:
        merged = None
    return ast.ElementPattern(type=patterns[0].type, filter=merged)


def fold_pattern(steps: list[AntiPattern]) -> ast.PatternAst:
    """Build the rule pattern for an ordered step list.

    Consecutive steps against the same element type merge into a single
    pattern (their filters conjoined). One remaining pattern compiles to a
    bare element pattern; several become a FLOW with the first as SOURCE,
    the last as TARGET, and the interior as INCLUDES clauses.
    """
    if not steps:
        raise CompileError("cannot compile an empty step list")
    runs: list[list[ast.ElementPattern]] = []
    for step in steps:
        pattern = _element_pattern_of(step)
        if runs and runs[-1][0].type == pattern.type:
            runs[-1].append(pattern)
        else:
            runs.append([pattern])
    merged = [_merge_run(run) for run in runs]
    if len(merged) == 1:
        return merged[0]
    clauses: list = [ast.Source(merged[0]), ast.Target(merged[-1])]
    clauses.extend(ast.Includes(False, interior) for interior in merged[1:-1])
    return ast.FlowPattern(ast.And(tuple(clauses)))


# -- Rule compilation ------------------------------------------------------------


def compile_rule(
    graph: SpGraph,
    asset: str,
    catalog: dict[str, AntiPattern],
    meta: RuleMeta,
    config: ScoringConfig = DEFAULT_CONFIG,
    rule_id: str | None = None,
) -> ThreatRule:
    """Compile one attack path into a threat rule with work products.

    The threat type comes from the first security property violated by the
    asset-adjacent (final) step. Feasibility is the bucketed
    exploitability of the authored vector; risk is the matrix cell for
    (impact, feasibility).
    """
    step_ids = linearize(graph)
    missing = [step_id for step_id in step_ids if step_id not in catalog]
    if missing:
        raise CompileError(f"steps not in catalog: {', '.join(missing)}")
    steps = [catalog[step_id] for step_id in step_ids]

    key = PATH_KEY_SEPARATOR.join(step_ids)
    asset_meta = meta.asset_meta(asset)
    path_meta = meta.path_meta(key)

    final_step = steps[-1]
    if not final_step.targets:
        raise MissingMetadataError(
            f"anti-pattern {final_step.id!r} lists no violated security properties"
        )

    vector = meta.vector_for(key)
    score = exploitability(vector, config)
    feasibility = feasibility_bucket(score, config)

    title = path_meta.title or asset_meta.title
    if title is None:
        raise MissingMetadataError(f"no title for path {key!r} or asset {asset!r}")
    threat_scenario = path_meta.threat_scenario or asset_meta.threat_scenario
    if threat_scenario is None:
        raise MissingMetadataError(f"no threat scenario for path {key!r} or asset {asset!r}")

    return ThreatRule(
        id=rule_id or key,
        title=title.replace("{asset}", asset_meta.name),
        asset=asset,
        asset_name=asset_meta.name,
        damage_scenario=asset_meta.damage_scenario,
        attack_path=tuple(meta.step_description(step_id) for step_id in step_ids),
        threat_scenario=threat_scenario.replace("{asset}", asset_meta.name),
        threat_type=threat_type(final_step.targets[0], config),
        exploit_vector=vector,
        feasibility=feasibility,
        feasibility_score=score,
        impact=asset_meta.impact,
        risk=risk_value(asset_meta.impact, feasibility, config),
        pattern=fold_pattern(steps),
        steps=tuple(step_ids),
    )


def tree_catalog(tree: Node) -> dict[str, AntiPattern]:
    """Anti-pattern definitions reachable in a tree, keyed by id."""
    catalog: dict[str, AntiPattern] = {}

    def walk(node: Node) -> None:
        if isinstance(node, Leaf):
            catalog[node.anti_pattern.id] = node.anti_pattern
        elif isinstance(node, AssetRoot):
            walk(node.child)
        elif hasattr(node, "children"):
            for child in node.children:
                walk(child)

    walk(tree)
    return catalog


def compile_pack(
    trees: list[AssetRoot],
    meta: RuleMeta,
    config: ScoringConfig = DEFAULT_CONFIG,
) -> list[ThreatRule]:
    """One rule per attack path per tree; ids are tree id plus path index.

    Paths are ordered by their canonical form so ids are stable across
    runs and implementations.
    """
    rules: list[ThreatRule] = []
    for tree in trees:
        catalog = tree_catalog(tree)
        graphs = sorted(sp_semantics(tree), key=lambda g: g.canonical())
        width = max(3, len(str(len(graphs))))
        for index, graph in enumerate(graphs, start=1):
            rules.append(
                compile_rule(
                    graph,
                    tree.asset,
                    catalog,
                    meta,
                    config,
                    rule_id=f"{tree.asset}-{index:0{width}d}",
                )
            )
    return rules


# -- Metadata loading ------------------------------------------------------------


def _vector_from(record: dict) -> ExploitVector:
    try:
        return ExploitVector(
            vector=record["vector"],
            complexity=record["complexity"],
            privileges=record["privileges"],
            interaction=record["interaction"],
        )
    except KeyError as exc:
        raise MissingMetadataError(f"exploit vector is missing field {exc}") from exc


def load_meta(text: str) -> RuleMeta:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise MissingMetadataError(f"metadata is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict):
        raise MissingMetadataError("metadata must be a JSON object")

    meta = RuleMeta()
    steps = raw.get("steps", {})
    if not isinstance(steps, dict):
        raise MissingMetadataError("metadata 'steps' must map ids to descriptions")
    meta.steps = {str(k): str(v) for k, v in steps.items()}

    for asset_id, record in raw.get("assets", {}).items():
        impact = record.get("impact", {})
        meta.assets[asset_id] = AssetMeta(
            name=record.get("name", asset_id),
            damage_scenario=record.get("damage_scenario", ""),
            impact=ImpactRating(
                level=impact.get("level", "Moderate"),
                category=impact.get("category", "Operational"),
            ),
            title=record.get("title"),
            threat_scenario=record.get("threat_scenario"),
        )

    for key, record in raw.get("paths", {}).items():
        vector = record.get("exploit_vector")
        meta.paths[key] = PathMeta(
            title=record.get("title"),
            threat_scenario=record.get("threat_scenario"),
            exploit_vector=_vector_from(vector) if vector else None,
        )

    defaults = raw.get("defaults", {})
    if "exploit_vector" in defaults:
        meta.default_vector = _vector_from(defaults["exploit_vector"])
    return meta


def load_meta_file(path: str) -> RuleMeta:
    with open(path, encoding="utf-8") as handle:
        return load_meta(handle.read())


# -- Rule pack serialization -------------------------------------------------------


def rules_to_text(rules: list[ThreatRule]) -> str:
    """Serialize compiled rules to the rule file format."""
    entries = []
    for rule in rules:
        metadata = [
            ("title", rule.title),
            ("asset", rule.asset),
            ("asset-name", rule.asset_name),
            ("damage-scenario", rule.damage_scenario),
            ("threat-scenario", rule.threat_scenario),
            ("threat-type", rule.threat_type),
            ("exploit-vector", ", ".join(
                (rule.exploit_vector.vector, rule.exploit_vector.complexity,
                 rule.exploit_vector.privileges, rule.exploit_vector.interaction)
            )),
            ("feasibility", rule.feasibility),
            ("feasibility-score", f"{rule.feasibility_score:.3f}"),
            ("impact", rule.impact.describe()),
            ("risk", str(rule.risk)),
            ("steps", ", ".join(rule.steps)),
        ]
        metadata.extend(("attack-step", description) for description in rule.attack_path)
        entries.append(RuleEntry(id=rule.id, metadata=metadata, pattern=rule.pattern))
    return render_rule_file(entries)


def rules_from_text(text: str) -> list[ThreatRule]:
    """Parse a rule pack written by :func:`rules_to_text`."""
    rules: list[ThreatRule] = []
    for entry in parse_rule_file(text):
        rules.append(_rule_from_entry(entry))
    return rules


def _require_meta(entry: RuleEntry, key: str) -> str:
    value = entry.get(key)
    if value is None:
        raise MissingMetadataError(f"rule {entry.id!r} lacks metadata {key!r}")
    return value


def _rule_from_entry(entry: RuleEntry) -> ThreatRule:
    vector_parts = [part.strip() for part in _require_meta(entry, "exploit-vector").split(",")]
    if len(vector_parts) != 4:
        raise MissingMetadataError(f"rule {entry.id!r} has a malformed exploit vector")
    impact_text = _require_meta(entry, "impact")
    level, _, category = impact_text.partition(" - ")
    steps = tuple(
        step.strip() for step in _require_meta(entry, "steps").split(",") if step.strip()
    )
    return ThreatRule(
        id=entry.id,
        title=_require_meta(entry, "title"),
        asset=_require_meta(entry, "asset"),
        asset_name=_require_meta(entry, "asset-name"),
        damage_scenario=_require_meta(entry, "damage-scenario"),
        attack_path=tuple(entry.get_all("attack-step")),
        threat_scenario=_require_meta(entry, "threat-scenario"),
        threat_type=_require_meta(entry, "threat-type"),
        exploit_vector=ExploitVector(*vector_parts),
        feasibility=_require_meta(entry, "feasibility"),
        feasibility_score=float(_require_meta(entry, "feasibility-score")),
        impact=ImpactRating(level=level, category=category),
        risk=int(_require_meta(entry, "risk")),
        pattern=entry.pattern,
        steps=steps,
    )
