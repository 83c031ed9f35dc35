"""Reading and writing rule files.

A rule file holds one or more named rules. Each entry starts with a
``RULE "<id>"`` header, followed by ``key: value`` metadata lines (keys are
lowercase identifiers; a key may repeat) and exactly one pattern. ``//``
comments and blank lines are ignored between entries and metadata lines.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from tarapath.dsl import ast
from tarapath.dsl.lexer import PatternError
from tarapath.dsl.parser import parse
from tarapath.dsl.printer import render

_HEADER_RE = re.compile(r'^RULE\s+"((?:[^"\\]|\\.)*)"\s*$')
_METADATA_RE = re.compile(r"^([a-z][a-z0-9-]*):\s?(.*)$")


class RuleFileError(Exception):
    """Rule file is malformed (bad header, metadata, or pattern)."""


@dataclass
class RuleEntry:
    """One named rule: metadata lines plus a parsed pattern."""

    id: str
    metadata: list[tuple[str, str]] = field(default_factory=list)
    pattern: ast.PatternAst | None = None

    def get(self, key: str) -> str | None:
        for existing, value in self.metadata:
            if existing == key:
                return value
        return None

    def get_all(self, key: str) -> list[str]:
        return [value for existing, value in self.metadata if existing == key]


def parse_rule_file(text: str) -> list[RuleEntry]:
    lines = text.splitlines()
    entries: list[RuleEntry] = []
    i = 0
    n = len(lines)

    while i < n:
        line = lines[i].strip()
        if not line or line.startswith("//"):
            i += 1
            continue
        header = _HEADER_RE.match(lines[i].strip())
        if not header:
            raise RuleFileError(f"line {i + 1}: expected a RULE header, found {line!r}")
        entry = RuleEntry(id=header.group(1).replace('\\"', '"'))
        i += 1

        while i < n:
            line = lines[i].strip()
            if not line or line.startswith("//"):
                i += 1
                continue
            meta = _METADATA_RE.match(line)
            if not meta:
                break
            entry.metadata.append((meta.group(1), meta.group(2)))
            i += 1

        pattern_lines: list[str] = []
        while i < n and not _HEADER_RE.match(lines[i].strip()):
            pattern_lines.append(lines[i])
            i += 1
        pattern_text = "\n".join(pattern_lines).strip()
        if not pattern_text:
            raise RuleFileError(f"rule {entry.id!r} has no pattern")
        try:
            entry.pattern = parse(pattern_text)
        except PatternError as exc:
            raise RuleFileError(f"rule {entry.id!r}: {exc}") from exc
        entries.append(entry)

    return entries


def parse_rule_file_path(path: str) -> list[RuleEntry]:
    with open(path, encoding="utf-8") as handle:
        return parse_rule_file(handle.read())


def render_rule_file(entries: list[RuleEntry]) -> str:
    chunks: list[str] = []
    for entry in entries:
        if entry.pattern is None:
            raise RuleFileError(f"rule {entry.id!r} has no pattern")
        escaped = entry.id.replace('"', '\\"')
        lines = [f'RULE "{escaped}"']
        lines.extend(f"{key}: {value}" for key, value in entry.metadata)
        lines.append(render(entry.pattern))
        chunks.append("\n".join(lines))
    return "\n\n".join(chunks) + "\n"
