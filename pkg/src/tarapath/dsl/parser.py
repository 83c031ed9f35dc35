"""Recursive-descent parser for the anti-pattern language.

Grammar (authoritative; ``&`` binds tighter than ``|``, braces group):

    pattern    := elemPat | connPat | flowPat
    elemPat    := "ELEMENT" [":" STRING] ["{" filter "}"]
    connPat    := "CONNECTOR" ["{" connBody "}"]
    connBody   := connClause (("&" | "|") connClause)*
    connClause := "SOURCE" elemPat | "TARGET" elemPat | compare
    flowPat    := "FLOW" "{" flowBody "}"
    flowBody   := flowClause ([("&" | "|")] flowClause)*
    flowClause := "SOURCE" elemPat | "TARGET" elemPat
                | "INCLUDES" ["NO"] (elemPat | connPat)
                | "CROSSES" ["NO"] "BOUNDARY" [":" STRING]
                | "{" flowBody "}"
    filter     := term (("&" | "|") term)*
    term       := compare | "{" filter "}" | "(" filter ")"
    compare    := STRING ("==" | "=" | "!=") STRING
                | STRING ["NOT"] "IN" "[" STRING ("," STRING)* "]"

Two lenient readings keep the published rule corpus parsing as printed:
parentheses group filter terms exactly like braces, and a missing
connective between flow clauses means ``&``. The canonical printer never
emits either form.
"""

from __future__ import annotations

from tarapath.dsl import ast
from tarapath.dsl.lexer import PatternError, Token, tokenize

_FLOW_CLAUSE_STARTERS = {"SOURCE", "TARGET", "INCLUDES", "CROSSES"}


class ParseError(PatternError):
    """Token stream does not match the grammar."""

    def __init__(self, message: str, token: Token):
        super().__init__(f"line {token.line}, column {token.column}: {message}")
        self.line = token.line
        self.column = token.column


class StructuralError(PatternError):
    """Pattern is grammatical but violates a well-formedness rule."""


def parse(text: str) -> ast.PatternAst:
    """Parse one pattern; raises LexError, ParseError, or StructuralError."""
    parser = _Parser(tokenize(text))
    pattern = parser.parse_pattern()
    parser.expect_eof()
    if isinstance(pattern, ast.FlowPattern):
        _check_flow_structure(pattern)
    return pattern


class _Parser:
    def __init__(self, tokens: list[Token]):
        self.tokens = tokens
        self.pos = 0

    # -- token plumbing ----------------------------------------------------

    def peek(self) -> Token:
        return self.tokens[self.pos]

    def next(self) -> Token:
        token = self.tokens[self.pos]
        if token.kind != "eof":
            self.pos += 1
        return token

    def at_keyword(self, *words: str) -> bool:
        token = self.peek()
        return token.kind == "keyword" and token.value in words

    def accept(self, kind: str) -> Token | None:
        if self.peek().kind == kind:
            return self.next()
        return None

    def accept_keyword(self, word: str) -> bool:
        if self.at_keyword(word):
            self.next()
            return True
        return False

    def expect(self, kind: str, what: str) -> Token:
        token = self.peek()
        if token.kind != kind:
            raise ParseError(f"expected {what}, found {_describe(token)}", token)
        return self.next()

    def expect_keyword(self, word: str) -> Token:
        token = self.peek()
        if not self.at_keyword(word):
            raise ParseError(f"expected {word}, found {_describe(token)}", token)
        return self.next()

    def expect_eof(self) -> None:
        token = self.peek()
        if token.kind != "eof":
            raise ParseError(f"trailing input: {_describe(token)}", token)

    # -- pattern grammar ---------------------------------------------------

    def parse_pattern(self) -> ast.PatternAst:
        token = self.peek()
        if self.at_keyword("ELEMENT"):
            return self.parse_element_pattern()
        if self.at_keyword("CONNECTOR"):
            return self.parse_connector_pattern()
        if self.at_keyword("FLOW"):
            return self.parse_flow_pattern()
        raise ParseError(
            f"expected ELEMENT, CONNECTOR, or FLOW, found {_describe(token)}", token
        )

    def parse_element_pattern(self) -> ast.ElementPattern:
        self.expect_keyword("ELEMENT")
        type_name = None
        if self.accept(":"):
            type_name = self.expect("string", "a type name string").value
        filter_expr = None
        if self.accept("{"):
            filter_expr = self.parse_filter()
            self.expect("}", "'}'")
        return ast.ElementPattern(type=type_name, filter=filter_expr)

    def parse_connector_pattern(self) -> ast.ConnectorPattern:
        self.expect_keyword("CONNECTOR")
        clauses = None
        if self.accept("{"):
            clauses = self.parse_clause_list(self.parse_connector_clause, implicit_and=False)
            self.expect("}", "'}'")
        return ast.ConnectorPattern(clauses=clauses)

    def parse_connector_clause(self):
        if self.accept_keyword("SOURCE"):
            return ast.Source(self.parse_element_pattern())
        if self.accept_keyword("TARGET"):
            return ast.Target(self.parse_element_pattern())
        return self.parse_compare()

    def parse_flow_pattern(self) -> ast.FlowPattern:
        self.expect_keyword("FLOW")
        self.expect("{", "'{'")
        body = self.parse_clause_list(self.parse_flow_clause, implicit_and=True)
        self.expect("}", "'}'")
        return ast.FlowPattern(clauses=body)

    def parse_flow_clause(self):
        if self.accept_keyword("SOURCE"):
            return ast.Source(self.parse_element_pattern())
        if self.accept_keyword("TARGET"):
            return ast.Target(self.parse_element_pattern())
        if self.accept_keyword("INCLUDES"):
            negated = self.accept_keyword("NO")
            if self.at_keyword("ELEMENT"):
                return ast.Includes(negated, self.parse_element_pattern())
            if self.at_keyword("CONNECTOR"):
                return ast.Includes(negated, self.parse_connector_pattern())
            token = self.peek()
            raise ParseError(
                f"INCLUDES needs ELEMENT or CONNECTOR, found {_describe(token)}", token
            )
        if self.accept_keyword("CROSSES"):
            negated = self.accept_keyword("NO")
            self.expect_keyword("BOUNDARY")
            type_name = None
            if self.accept(":"):
                type_name = self.expect("string", "a boundary type string").value
            return ast.Crosses(negated, ast.BoundaryPattern(type=type_name))
        if self.accept("{"):
            inner = self.parse_clause_list(self.parse_flow_clause, implicit_and=True)
            self.expect("}", "'}'")
            return inner
        token = self.peek()
        raise ParseError(f"expected a flow clause, found {_describe(token)}", token)

    def _starts_flow_clause(self) -> bool:
        token = self.peek()
        if token.kind == "{":
            return True
        return token.kind == "keyword" and token.value in _FLOW_CLAUSE_STARTERS

    def parse_clause_list(self, parse_item, implicit_and: bool):
        """Parse ``item (op item)*`` into n-ary And/Or by precedence.

        With ``implicit_and`` a missing operator before the next clause
        counts as ``&`` — the published rule corpus relies on this.
        """
        items = [parse_item()]
        operators: list[str] = []
        while True:
            if self.peek().kind in ("&", "|"):
                operators.append(self.next().kind)
            elif implicit_and and self._starts_flow_clause():
                operators.append("&")
            else:
                break
            items.append(parse_item())
        return _group(items, operators)

    def parse_filter(self):
        items = [self.parse_filter_term()]
        operators: list[str] = []
        while self.peek().kind in ("&", "|"):
            operators.append(self.next().kind)
            items.append(self.parse_filter_term())
        return _group(items, operators)

    def parse_filter_term(self):
        for opener, closer in (("{", "}"), ("(", ")")):
            if self.accept(opener):
                inner = self.parse_filter()
                self.expect(closer, f"'{closer}'")
                return inner
        return self.parse_compare()

    def parse_compare(self):
        prop = self.expect("string", "a property name string").value
        token = self.peek()
        if token.kind == "op":
            self.next()
            value = self.expect("string", "a value string").value
            op = ast.CompareOp.NEQ if token.value == "!=" else ast.CompareOp.EQ
            return ast.Compare(prop, op, value)
        negated = False
        if self.accept_keyword("NOT"):
            negated = True
        if self.accept_keyword("IN"):
            self.expect("[", "'['")
            values = [self.expect("string", "a value string").value]
            while self.accept(","):
                values.append(self.expect("string", "a value string").value)
            self.expect("]", "']'")
            return ast.SetMember(prop, negated, tuple(values))
        raise ParseError(
            f"expected a comparison operator or IN, found {_describe(token)}", token
        )


def _group(items: list, operators: list[str]):
    """Build n-ary And/Or from an alternating item/operator sequence."""
    disjuncts: list = []
    run: list = [items[0]]
    for op, item in zip(operators, items[1:]):
        if op == "&":
            run.append(item)
        else:
            disjuncts.append(run)
            run = [item]
    disjuncts.append(run)

    def conjoin(parts: list):
        return parts[0] if len(parts) == 1 else ast.And(tuple(parts))

    if len(disjuncts) == 1:
        return conjoin(disjuncts[0])
    return ast.Or(tuple(conjoin(parts) for parts in disjuncts))


def _check_flow_structure(pattern: ast.FlowPattern) -> None:
    """One SOURCE and one TARGET, both in purely conjunctive position."""
    conjunctive = ast.conjunctive_clauses(pattern.clauses)
    sources = sum(isinstance(c, ast.Source) for c in conjunctive)
    targets = sum(isinstance(c, ast.Target) for c in conjunctive)
    if sources != 1:
        raise StructuralError(f"FLOW must have exactly one SOURCE clause, found {sources}")
    if targets != 1:
        raise StructuralError(f"FLOW must have exactly one TARGET clause, found {targets}")
    for clause in conjunctive:
        if isinstance(clause, ast.Or) and _contains_endpoint(clause):
            raise StructuralError("SOURCE and TARGET may not appear inside OR branches")


def _contains_endpoint(expr) -> bool:
    if isinstance(expr, (ast.Source, ast.Target)):
        return True
    if isinstance(expr, (ast.And, ast.Or)):
        return any(_contains_endpoint(child) for child in expr.children)
    return False


def _describe(token: Token) -> str:
    if token.kind == "eof":
        return "end of input"
    if token.kind == "string":
        return f'string "{token.value}"'
    return repr(token.value)
