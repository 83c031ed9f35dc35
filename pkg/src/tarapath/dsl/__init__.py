"""Anti-pattern language: lexer, parser, AST, and canonical printer."""

from tarapath.dsl import ast
from tarapath.dsl.lexer import LexError, PatternError, Token, tokenize
from tarapath.dsl.parser import ParseError, StructuralError, parse
from tarapath.dsl.printer import render
from tarapath.dsl.rulefile import (
    RuleEntry,
    RuleFileError,
    parse_rule_file,
    parse_rule_file_path,
    render_rule_file,
)

__all__ = [
    "ast",
    "tokenize",
    "Token",
    "LexError",
    "parse",
    "render",
    "PatternError",
    "ParseError",
    "StructuralError",
    "RuleEntry",
    "RuleFileError",
    "parse_rule_file",
    "parse_rule_file_path",
    "render_rule_file",
]
