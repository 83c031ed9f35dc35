"""Tokenizer for the anti-pattern language.

Whitespace and ``//`` line comments are insignificant. Strings are
double-quoted with backslash escapes. Every token records the line and
column where it starts, so parse errors can point at the input.
"""

from __future__ import annotations

from dataclasses import dataclass

KEYWORDS = {
    "ELEMENT",
    "CONNECTOR",
    "FLOW",
    "BOUNDARY",
    "SOURCE",
    "TARGET",
    "INCLUDES",
    "CROSSES",
    "NO",
    "NOT",
    "IN",
}

PUNCT = {"{", "}", "(", ")", "[", "]", ":", ",", "&", "|"}

_ESCAPES = {"n": "\n", "t": "\t"}


class PatternError(Exception):
    """Base class for anti-pattern language errors."""


class LexError(PatternError):
    """Input contains a character sequence that is not a token."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


@dataclass(frozen=True)
class Token:
    kind: str  # "keyword" | "string" | "op" | punctuation literal | "eof"
    value: str
    line: int
    column: int


class _Scanner:
    def __init__(self, text: str):
        self.text = text
        self.i = 0
        self.line = 1
        self.column = 1

    def peek(self, offset: int = 0) -> str:
        index = self.i + offset
        return self.text[index] if index < len(self.text) else ""

    def advance(self) -> str:
        ch = self.text[self.i]
        self.i += 1
        if ch == "\n":
            self.line += 1
            self.column = 1
        else:
            self.column += 1
        return ch

    def done(self) -> bool:
        return self.i >= len(self.text)


def tokenize(text: str) -> list[Token]:
    scanner = _Scanner(text)
    tokens: list[Token] = []

    while not scanner.done():
        ch = scanner.peek()
        if ch in " \t\r\n":
            scanner.advance()
            continue
        if ch == "/" and scanner.peek(1) == "/":
            while not scanner.done() and scanner.peek() != "\n":
                scanner.advance()
            continue

        line, column = scanner.line, scanner.column
        if ch == '"':
            tokens.append(Token("string", _scan_string(scanner), line, column))
        elif ch == "=" and scanner.peek(1) == "=":
            scanner.advance()
            scanner.advance()
            tokens.append(Token("op", "==", line, column))
        elif ch == "!" and scanner.peek(1) == "=":
            scanner.advance()
            scanner.advance()
            tokens.append(Token("op", "!=", line, column))
        elif ch == "=":
            scanner.advance()
            tokens.append(Token("op", "=", line, column))
        elif ch in PUNCT:
            scanner.advance()
            tokens.append(Token(ch, ch, line, column))
        elif ch.isalpha():
            word = _scan_word(scanner)
            if word not in KEYWORDS:
                raise LexError(f"unknown word {word!r}", line, column)
            tokens.append(Token("keyword", word, line, column))
        else:
            raise LexError(f"unexpected character {ch!r}", line, column)

    tokens.append(Token("eof", "", scanner.line, scanner.column))
    return tokens


def _scan_string(scanner: _Scanner) -> str:
    line, column = scanner.line, scanner.column
    scanner.advance()  # opening quote
    chars: list[str] = []
    while not scanner.done():
        ch = scanner.peek()
        if ch == '"':
            scanner.advance()
            return "".join(chars)
        if ch == "\n":
            break
        if ch == "\\":
            scanner.advance()
            if scanner.done():
                break
            escaped = scanner.advance()
            chars.append(_ESCAPES.get(escaped, escaped))
            continue
        chars.append(scanner.advance())
    raise LexError("unterminated string", line, column)


def _scan_word(scanner: _Scanner) -> str:
    chars: list[str] = []
    while not scanner.done() and (scanner.peek().isalnum() or scanner.peek() == "_"):
        chars.append(scanner.advance())
    return "".join(chars)
