"""Data-flow model of a vehicle architecture.

A model is a directed graph of typed elements joined by connectors, with
boundaries enclosing element groups and assets marking valuable components.
Models are loaded from JSON documents, structurally validated, and treated
as immutable afterwards; all analysis code shares them read-only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

SECURITY_PROPERTIES = (
    "Confidentiality",
    "Integrity",
    "Availability",
    "Authentication",
    "Non-repudiation",
    "Authorization",
)

BOUNDARY_KINDS = ("physical", "logical")
CONNECTOR_MEDIA = ("wired", "wireless")

#: Property value meaning "never assigned"; injected for inherited properties.
UNSET = "unset"


class ModelError(Exception):
    """Base class for model loading failures."""


class ModelSyntaxError(ModelError):
    """Document is not well-formed (JSON or schema shape)."""


class ModelReferenceError(ModelError):
    """An identifier refers to a component or type that does not exist."""


class ModelCycleError(ModelError):
    """Element or boundary containment contains a loop."""


class ModelDataError(ModelError):
    """A field value violates the model invariants."""


class UnknownComponentError(ModelError):
    """Lookup by id failed."""


@dataclass(frozen=True)
class Violation:
    """One invariant breach found by :func:`validate_model`."""

    component_id: str
    rule: str
    message: str

    def __str__(self) -> str:
        return f"{self.component_id}: [{self.rule}] {self.message}"


@dataclass
class TypeCatalog:
    """Known component types and the property sets their categories imply."""

    categories: dict[str, list[str]] = field(default_factory=dict)
    types: dict[str, TypeInfo] = field(default_factory=dict)

    def category_of(self, type_name: str) -> str | None:
        info = self.types.get(type_name)
        return info.category if info else None

    def inherited_properties(self, type_name: str) -> list[str]:
        category = self.category_of(type_name)
        if category is None:
            return []
        return self.categories.get(category, [])


@dataclass
class TypeInfo:
    category: str | None = None
    symbol: str = ""
    defaults: dict[str, str] = field(default_factory=dict)


@dataclass
class Element:
    """A component implementing a functionality; node of the data-flow graph."""

    id: str
    name: str
    type: str
    category: str | None = None
    properties: dict[str, str] = field(default_factory=dict)
    children: list[str] = field(default_factory=list)
    parent: str | None = None


@dataclass
class Connector:
    """A directed data flow between two elements."""

    id: str
    type: str
    medium: str
    source: str
    target: str
    properties: dict[str, str] = field(default_factory=dict)


@dataclass
class Boundary:
    """Physical or logical enclosure of a group of elements."""

    id: str
    type: str
    kind: str
    members: list[str] = field(default_factory=list)
    parent: str | None = None


@dataclass
class Asset:
    """A valuable component, held by an element or a connector."""

    id: str
    name: str
    holder: str
    security_properties: list[str] = field(default_factory=list)


@dataclass
class Model:
    """A complete data-flow model: elements, connectors, boundaries, assets."""

    elements: list[Element] = field(default_factory=list)
    connectors: list[Connector] = field(default_factory=list)
    boundaries: list[Boundary] = field(default_factory=list)
    assets: list[Asset] = field(default_factory=list)
    catalog: TypeCatalog = field(default_factory=TypeCatalog)

    def element_by_id(self, element_id: str) -> Element:
        for elem in self.elements:
            if elem.id == element_id:
                return elem
        raise UnknownComponentError(f"unknown element id: {element_id!r}")

    def connector_by_id(self, connector_id: str) -> Connector:
        for conn in self.connectors:
            if conn.id == connector_id:
                return conn
        raise UnknownComponentError(f"unknown connector id: {connector_id!r}")

    def boundary_by_id(self, boundary_id: str) -> Boundary:
        for boundary in self.boundaries:
            if boundary.id == boundary_id:
                return boundary
        raise UnknownComponentError(f"unknown boundary id: {boundary_id!r}")


def normalize_value(value: str) -> str:
    """Canonical form used for property comparisons: trimmed, case-folded."""
    return value.strip().casefold()


def is_unset(value: str | None) -> bool:
    return value is None or normalize_value(value) == UNSET


# ---------------------------------------------------------------------------
# Loading


def _require(condition: bool, message: str) -> None:
    if not condition:
        raise ModelSyntaxError(message)


def _string_field(record: dict, key: str, where: str, default: str | None = None) -> str:
    value = record.get(key, default)
    _require(isinstance(value, str), f"{where}: field {key!r} must be a string")
    return value


def _load_catalog(raw: dict) -> TypeCatalog:
    catalog = TypeCatalog()
    categories = raw.get("categories", {})
    _require(isinstance(categories, dict), "catalog: categories must be an object")
    for name, props in categories.items():
        _require(
            isinstance(props, list) and all(isinstance(p, str) for p in props),
            f"catalog: category {name!r} must list property names",
        )
        catalog.categories[name] = list(props)
    types = raw.get("types", {})
    _require(isinstance(types, dict), "catalog: types must be an object")
    for name, info in types.items():
        _require(isinstance(info, dict), f"catalog: type {name!r} must be an object")
        category = info.get("category")
        _require(
            category is None or isinstance(category, str),
            f"catalog: type {name!r} category must be a string",
        )
        defaults = info.get("defaults", {})
        _require(
            isinstance(defaults, dict)
            and all(isinstance(k, str) and isinstance(v, str) for k, v in defaults.items()),
            f"catalog: type {name!r} defaults must map property names to strings",
        )
        catalog.types[name] = TypeInfo(
            category=category,
            symbol=str(info.get("symbol", "")),
            defaults=dict(defaults),
        )
        if category is not None and category not in catalog.categories:
            raise ModelReferenceError(f"catalog: type {name!r} names unknown category {category!r}")
    return catalog


def _merge_properties(catalog: TypeCatalog, type_name: str, declared: dict) -> dict[str, str]:
    properties: dict[str, str] = {}
    for prop in catalog.inherited_properties(type_name):
        properties[prop] = UNSET
    info = catalog.types.get(type_name)
    if info:
        properties.update(info.defaults)
    for key, value in declared.items():
        _require(
            isinstance(key, str) and isinstance(value, str),
            f"properties of {type_name!r} components must map strings to strings",
        )
        properties[key] = value
    return properties


def load_model(document: str) -> Model:
    """Parse a JSON model document and return a validated :class:`Model`.

    Raises a :class:`ModelError` subclass on any defect; a successfully
    loaded model always passes :func:`validate_model`.
    """
    model = build_model(document)
    _raise_on_violations(validate_model(model))
    return model


def build_model(document: str) -> Model:
    """Parse a document into a :class:`Model` without semantic validation.

    Category-inherited properties missing from a component are injected
    with the ``unset`` value so matching has deterministic
    missing-property semantics. Only syntax and shape errors raise here;
    run :func:`validate_model` for the semantic invariants.
    """
    try:
        raw = json.loads(document)
    except json.JSONDecodeError as exc:
        raise ModelSyntaxError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc
    _require(isinstance(raw, dict), "top level must be a JSON object")

    catalog = _load_catalog(raw.get("catalog", {}))
    model = Model(catalog=catalog)

    for record in _component_list(raw, "elements"):
        elem_id = _string_field(record, "id", "element")
        element = Element(
            id=elem_id,
            name=_string_field(record, "name", f"element {elem_id!r}", default=elem_id),
            type=_string_field(record, "type", f"element {elem_id!r}"),
            category=record.get("category"),
            children=_id_list(record.get("children", []), f"element {elem_id!r} children"),
        )
        _require(
            element.category is None or isinstance(element.category, str),
            f"element {elem_id!r}: category must be a string",
        )
        element.properties = _merge_properties(catalog, element.type, record.get("properties", {}))
        model.elements.append(element)

    for record in _component_list(raw, "connectors"):
        conn_id = _string_field(record, "id", "connector")
        connector = Connector(
            id=conn_id,
            type=_string_field(record, "type", f"connector {conn_id!r}"),
            medium=_string_field(record, "medium", f"connector {conn_id!r}", default="wired"),
            source=_string_field(record, "source", f"connector {conn_id!r}"),
            target=_string_field(record, "target", f"connector {conn_id!r}"),
        )
        connector.properties = _merge_properties(
            catalog, connector.type, record.get("properties", {})
        )
        model.connectors.append(connector)

    for record in _component_list(raw, "boundaries"):
        boundary_id = _string_field(record, "id", "boundary")
        parent = record.get("parent")
        _require(
            parent is None or isinstance(parent, str),
            f"boundary {boundary_id!r}: parent must be a string",
        )
        model.boundaries.append(
            Boundary(
                id=boundary_id,
                type=_string_field(record, "type", f"boundary {boundary_id!r}"),
                kind=_string_field(record, "kind", f"boundary {boundary_id!r}", default="logical"),
                members=_id_list(record.get("members", []), f"boundary {boundary_id!r} members"),
                parent=parent,
            )
        )

    for record in _component_list(raw, "assets"):
        asset_id = _string_field(record, "id", "asset")
        props = record.get("security_properties", [])
        _require(
            isinstance(props, list) and all(isinstance(p, str) for p in props),
            f"asset {asset_id!r}: security_properties must be a list of strings",
        )
        model.assets.append(
            Asset(
                id=asset_id,
                name=_string_field(record, "name", f"asset {asset_id!r}", default=asset_id),
                holder=_string_field(record, "holder", f"asset {asset_id!r}"),
                security_properties=list(props),
            )
        )

    _link_parents(model)
    return model


def load_model_file(path: str) -> Model:
    with open(path, encoding="utf-8") as handle:
        return load_model(handle.read())


def _component_list(raw: dict, key: str) -> list[dict]:
    records = raw.get(key, [])
    _require(isinstance(records, list), f"{key} must be a list")
    for record in records:
        _require(isinstance(record, dict), f"{key} entries must be objects")
    return records


def _id_list(value: object, where: str) -> list[str]:
    _require(
        isinstance(value, list) and all(isinstance(v, str) for v in value),
        f"{where} must be a list of ids",
    )
    return list(value)


def _link_parents(model: Model) -> None:
    by_id = {e.id: e for e in model.elements}
    for element in model.elements:
        for child_id in element.children:
            child = by_id.get(child_id)
            if child is None:
                continue  # reported by validate_model
            if child.parent is not None and child.parent != element.id:
                raise ModelDataError(
                    f"element {child_id!r} is a child of both {child.parent!r} and {element.id!r}"
                )
            child.parent = element.id


def _raise_on_violations(violations: list[Violation]) -> None:
    if not violations:
        return
    first = violations[0]
    summary = "; ".join(str(v) for v in violations)
    if first.rule in ("containment-cycle", "boundary-cycle"):
        raise ModelCycleError(summary)
    if first.rule in ("dangling-reference", "unknown-type", "unknown-category"):
        raise ModelReferenceError(summary)
    raise ModelDataError(summary)


# ---------------------------------------------------------------------------
# Saving


def save_model(model: Model) -> str:
    """Serialize a model back to its JSON document form (loader inverse)."""
    document = {
        "catalog": {
            "categories": dict(model.catalog.categories),
            "types": {
                name: {
                    "category": info.category,
                    "symbol": info.symbol,
                    "defaults": dict(info.defaults),
                }
                for name, info in model.catalog.types.items()
            },
        },
        "elements": [
            {
                "id": e.id,
                "name": e.name,
                "type": e.type,
                "category": e.category,
                "properties": dict(e.properties),
                "children": list(e.children),
            }
            for e in model.elements
        ],
        "connectors": [
            {
                "id": c.id,
                "type": c.type,
                "medium": c.medium,
                "source": c.source,
                "target": c.target,
                "properties": dict(c.properties),
            }
            for c in model.connectors
        ],
        "boundaries": [
            {
                "id": b.id,
                "type": b.type,
                "kind": b.kind,
                "members": list(b.members),
                "parent": b.parent,
            }
            for b in model.boundaries
        ],
        "assets": [
            {
                "id": a.id,
                "name": a.name,
                "holder": a.holder,
                "security_properties": list(a.security_properties),
            }
            for a in model.assets
        ],
    }
    return json.dumps(document, indent=2, sort_keys=True) + "\n"


# ---------------------------------------------------------------------------
# Validation


def validate_model(model: Model) -> list[Violation]:
    """Check every structural invariant; returns one violation per breach.

    An empty list means the model is internally consistent. Violations are
    data, not errors: callers decide whether to reject or report.
    """
    violations: list[Violation] = []
    element_ids = {e.id for e in model.elements}
    connector_ids = {c.id for c in model.connectors}

    seen: set[str] = set()
    components = (
        [(e.id, "element") for e in model.elements]
        + [(c.id, "connector") for c in model.connectors]
        + [(b.id, "boundary") for b in model.boundaries]
        + [(a.id, "asset") for a in model.assets]
    )
    for component_id, kind in components:
        if not component_id:
            violations.append(Violation(component_id, "empty-id", f"{kind} id is empty"))
        elif component_id in seen:
            violations.append(
                Violation(component_id, "duplicate-id", f"id reused by a {kind}")
            )
        seen.add(component_id)

    for element in model.elements:
        violations.extend(_validate_typed(model.catalog, element.id, element.type,
                                          element.category, element.properties))
        for child_id in element.children:
            if child_id not in element_ids:
                violations.append(
                    Violation(element.id, "dangling-reference",
                              f"child {child_id!r} is not a declared element")
                )
    violations.extend(
        _cycle_violations(
            {e.id: e.children for e in model.elements}, "containment-cycle", "element"
        )
    )

    for connector in model.connectors:
        if connector.medium not in CONNECTOR_MEDIA:
            violations.append(
                Violation(connector.id, "invalid-medium",
                          f"medium must be one of {CONNECTOR_MEDIA}, got {connector.medium!r}")
            )
        for endpoint, value in (("source", connector.source), ("target", connector.target)):
            if value not in element_ids:
                violations.append(
                    Violation(connector.id, "dangling-reference",
                              f"{endpoint} {value!r} is not a declared element")
                )
        if connector.source == connector.target:
            violations.append(
                Violation(connector.id, "self-loop", "source and target must differ")
            )

    boundary_children: dict[str, list[str]] = {b.id: [] for b in model.boundaries}
    for boundary in model.boundaries:
        if boundary.kind not in BOUNDARY_KINDS:
            violations.append(
                Violation(boundary.id, "invalid-kind",
                          f"kind must be one of {BOUNDARY_KINDS}, got {boundary.kind!r}")
            )
        for member in boundary.members:
            if member not in element_ids:
                violations.append(
                    Violation(boundary.id, "dangling-reference",
                              f"member {member!r} is not a declared element")
                )
        if boundary.parent is not None:
            if boundary.parent in boundary_children:
                boundary_children[boundary.parent].append(boundary.id)
            else:
                violations.append(
                    Violation(boundary.id, "dangling-reference",
                              f"parent {boundary.parent!r} is not a declared boundary")
                )
    violations.extend(_cycle_violations(boundary_children, "boundary-cycle", "boundary"))

    for asset in model.assets:
        if asset.holder not in element_ids and asset.holder not in connector_ids:
            violations.append(
                Violation(asset.id, "dangling-reference",
                          f"holder {asset.holder!r} is neither an element nor a connector")
            )
        for prop in asset.security_properties:
            if prop not in SECURITY_PROPERTIES:
                violations.append(
                    Violation(asset.id, "invalid-security-property",
                              f"{prop!r} is not a recognized security property")
                )

    return violations


def _validate_typed(
    catalog: TypeCatalog,
    component_id: str,
    type_name: str,
    category: str | None,
    properties: dict[str, str],
) -> list[Violation]:
    violations: list[Violation] = []
    if catalog.types and type_name not in catalog.types:
        violations.append(
            Violation(component_id, "unknown-type", f"type {type_name!r} is not in the catalog")
        )
        return violations
    declared = catalog.category_of(type_name)
    if category is not None and category != declared:
        violations.append(
            Violation(component_id, "category-mismatch",
                      f"type {type_name!r} belongs to category {declared!r}, not {category!r}")
        )
    for prop in catalog.inherited_properties(type_name):
        if prop not in properties:
            violations.append(
                Violation(component_id, "missing-category-property",
                          f"category property {prop!r} is absent")
            )
    return violations


def _cycle_violations(
    children: dict[str, list[str]], rule: str, kind: str
) -> list[Violation]:
    WHITE, GRAY, BLACK = 0, 1, 2
    color = {node: WHITE for node in children}
    violations: list[Violation] = []

    def visit(node: str) -> None:
        color[node] = GRAY
        for child in children.get(node, []):
            if child not in color:
                continue
            if color[child] == GRAY:
                violations.append(
                    Violation(child, rule, f"{kind} containment loops back through {node!r}")
                )
            elif color[child] == WHITE:
                visit(child)
        color[node] = BLACK

    for node in children:
        if color[node] == WHITE:
            visit(node)
    return violations


# ---------------------------------------------------------------------------
# Boundary queries


def encloses(model: Model, boundary_id: str, element_id: str) -> bool:
    """True iff the element sits inside the boundary, directly or nested."""
    model.element_by_id(element_id)  # raises on unknown id
    root = model.boundary_by_id(boundary_id)
    stack = [root]
    children: dict[str, list[Boundary]] = {}
    for boundary in model.boundaries:
        if boundary.parent is not None:
            children.setdefault(boundary.parent, []).append(boundary)
    while stack:
        boundary = stack.pop()
        if element_id in boundary.members:
            return True
        stack.extend(children.get(boundary.id, []))
    return False


def crosses(model: Model, connector_id: str, boundary_id: str) -> bool:
    """True iff exactly one endpoint of the connector is inside the boundary."""
    connector = model.connector_by_id(connector_id)
    return encloses(model, boundary_id, connector.source) != encloses(
        model, boundary_id, connector.target
    )
