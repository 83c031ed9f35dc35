"""Anti-pattern catalog files.

A catalog lists every identified weakness: its id, the owning entry point
or asset, the pattern source text, the security properties it violates,
and the prerequisites (other interfaces or assets) with their wiring mode.
Catalogs are the machine-readable form of an analysis team's anti-pattern
tables and are the input to tree building.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from tarapath.dsl import PatternError, parse
from tarapath.trees import (
    COMBINE_ANY,
    COMBINE_ALL,
    PARALLEL,
    SEQUENTIAL,
    AntiPattern,
    AssetRoot,
    Requirement,
    build_tree,
)

_MODES = (SEQUENTIAL, PARALLEL)
_COMBINES = (COMBINE_ANY, COMBINE_ALL)


class CatalogError(Exception):
    """Catalog file is malformed."""


@dataclass
class Catalog:
    """Parsed catalog: anti-patterns grouped by owning asset or interface."""

    entries: list[AntiPattern] = field(default_factory=list)
    owner_of: dict[str, str] = field(default_factory=dict)

    def owners(self) -> list[str]:
        seen: list[str] = []
        for entry in self.entries:
            owner = self.owner_of[entry.id]
            if owner not in seen:
                seen.append(owner)
        return seen

    def entries_for(self, owner: str) -> list[AntiPattern]:
        return [e for e in self.entries if self.owner_of[e.id] == owner]

    def by_id(self) -> dict[str, AntiPattern]:
        return {entry.id: entry for entry in self.entries}

    def tree_for(self, owner: str) -> AssetRoot:
        entries = self.entries_for(owner)
        if not entries:
            raise CatalogError(f"catalog has no anti-patterns owned by {owner!r}")
        return build_tree(owner, entries)


def load_catalog(text: str) -> Catalog:
    try:
        raw = json.loads(text)
    except json.JSONDecodeError as exc:
        raise CatalogError(f"catalog is not valid JSON: {exc}") from exc
    if not isinstance(raw, dict) or not isinstance(raw.get("entries"), list):
        raise CatalogError("catalog must be an object with an 'entries' list")

    catalog = Catalog()
    for record in raw["entries"]:
        if not isinstance(record, dict):
            raise CatalogError("catalog entries must be objects")
        entry_id = record.get("id")
        owner = record.get("owner")
        if not isinstance(entry_id, str) or not entry_id:
            raise CatalogError("every catalog entry needs a nonempty 'id'")
        if not isinstance(owner, str) or not owner:
            raise CatalogError(f"entry {entry_id!r} needs a nonempty 'owner'")
        if entry_id in catalog.owner_of:
            raise CatalogError(f"duplicate anti-pattern id {entry_id!r}")

        try:
            pattern = parse(record.get("pattern", ""))
        except PatternError as exc:
            raise CatalogError(f"entry {entry_id!r}: pattern does not parse: {exc}") from exc

        requires: list[Requirement] = []
        for req in record.get("requires", []):
            ref = req.get("ref")
            mode = req.get("mode", SEQUENTIAL)
            if not isinstance(ref, str) or not ref:
                raise CatalogError(f"entry {entry_id!r}: requirement needs a 'ref'")
            if mode not in _MODES:
                raise CatalogError(
                    f"entry {entry_id!r}: requirement mode must be one of {_MODES}, got {mode!r}"
                )
            requires.append(Requirement(ref=ref, mode=mode))

        combine = record.get("combine", COMBINE_ANY)
        if combine not in _COMBINES:
            raise CatalogError(
                f"entry {entry_id!r}: combine must be one of {_COMBINES}, got {combine!r}"
            )

        catalog.entries.append(
            AntiPattern(
                id=entry_id,
                pattern=pattern,
                targets=tuple(record.get("targets", [])),
                requires=tuple(requires),
                combine=combine,
            )
        )
        catalog.owner_of[entry_id] = owner
    return catalog


def load_catalog_file(path: str) -> Catalog:
    with open(path, encoding="utf-8") as handle:
        return load_catalog(handle.read())
