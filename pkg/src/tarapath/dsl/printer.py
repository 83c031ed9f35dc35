"""Canonical text form for pattern ASTs.

``parse(render(a)) == a`` for every valid AST. Rendering normalizes the
lenient spellings the parser accepts: ``=`` prints as ``==``, parenthesis
groups print as braces, and flow clauses are always joined explicitly.
"""

from __future__ import annotations

from tarapath.dsl import ast


def render(pattern: ast.PatternAst) -> str:
    """Render a top-level pattern to canonical source text."""
    if isinstance(pattern, ast.ElementPattern):
        return _element(pattern)
    if isinstance(pattern, ast.ConnectorPattern):
        return _connector(pattern)
    if isinstance(pattern, ast.FlowPattern):
        return "FLOW " + _block(_clause_expr(pattern.clauses, wrap=False))
    raise TypeError(f"not a renderable pattern: {pattern!r}")


def _element(pattern: ast.ElementPattern) -> str:
    text = "ELEMENT"
    if pattern.type is not None:
        text += f": {_quote(pattern.type)}"
    if pattern.filter is not None:
        text += " " + _block(_filter_expr(pattern.filter, wrap=False))
    return text


def _connector(pattern: ast.ConnectorPattern) -> str:
    text = "CONNECTOR"
    if pattern.clauses is not None:
        text += " " + _block(_clause_expr(pattern.clauses, wrap=False))
    return text


def _boundary(pattern: ast.BoundaryPattern) -> str:
    text = "BOUNDARY"
    if pattern.type is not None:
        text += f": {_quote(pattern.type)}"
    return text


def _clause_expr(expr, wrap: bool) -> str:
    """Render a flow/connector clause expression; composites get braces."""
    if isinstance(expr, ast.And):
        body = _join([_clause_expr(c, wrap=True) for c in expr.children], "&")
        return _block(body) if wrap else body
    if isinstance(expr, ast.Or):
        body = _join([_clause_expr(c, wrap=True) for c in expr.children], "|")
        return _block(body) if wrap else body
    if isinstance(expr, ast.Source):
        return "SOURCE " + _element(expr.element)
    if isinstance(expr, ast.Target):
        return "TARGET " + _element(expr.element)
    if isinstance(expr, ast.Includes):
        inner = (
            _element(expr.inner)
            if isinstance(expr.inner, ast.ElementPattern)
            else _connector(expr.inner)
        )
        return ("INCLUDES NO " if expr.negated else "INCLUDES ") + inner
    if isinstance(expr, ast.Crosses):
        keyword = "CROSSES NO " if expr.negated else "CROSSES "
        return keyword + _boundary(expr.boundary)
    return _filter_expr(expr, wrap=True)


def _filter_expr(expr, wrap: bool) -> str:
    if isinstance(expr, ast.And):
        body = _join([_filter_expr(c, wrap=True) for c in expr.children], "&")
        return _block(body) if wrap else body
    if isinstance(expr, ast.Or):
        body = _join([_filter_expr(c, wrap=True) for c in expr.children], "|")
        return _block(body) if wrap else body
    if isinstance(expr, ast.Compare):
        op = "!=" if expr.op == ast.CompareOp.NEQ else "=="
        return f"{_quote(expr.prop)} {op} {_quote(expr.value)}"
    if isinstance(expr, ast.SetMember):
        keyword = "NOT IN" if expr.negated else "IN"
        values = ", ".join(_quote(v) for v in expr.values)
        return f"{_quote(expr.prop)} {keyword} [{values}]"
    raise TypeError(f"not a renderable filter expression: {expr!r}")


def _join(parts: list[str], op: str) -> str:
    return f" {op}\n".join(parts)


def _block(body: str) -> str:
    indented = "\n".join("  " + line for line in body.splitlines())
    return "{\n" + indented + "\n}"


def _quote(value: str) -> str:
    escaped = value.replace("\\", "\\\\").replace('"', '\\"')
    escaped = escaped.replace("\n", "\\n").replace("\t", "\\t")
    return f'"{escaped}"'
