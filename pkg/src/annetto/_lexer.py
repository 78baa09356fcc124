"""Regex-driven tokenizer shared by the Turtle and query parsers."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable

from .errors import SyntaxErrorWithPosition


@dataclass(frozen=True, slots=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(
    text: str,
    rules: list[tuple[str, str]],
    error: Callable[[str, int, int, str], SyntaxErrorWithPosition],
) -> list[Token]:
    """Split ``text`` into tokens using ordered ``(kind, regex)`` rules.

    Kinds ``WS`` and ``COMMENT`` are dropped. An ``EOF`` token is appended.
    """
    master = re.compile("|".join(f"(?P<{kind}>{pattern})" for kind, pattern in rules))
    tokens: list[Token] = []
    pos = 0
    line, line_start = 1, 0
    while pos < len(text):
        m = master.match(text, pos)
        column = pos - line_start + 1
        if m is None or m.end() == pos:
            snippet = text[pos:pos + 10].split("\n")[0] or text[pos]
            raise error("unexpected character", line, column, snippet)
        kind = m.lastgroup
        assert kind is not None
        value = m.group()
        if kind not in ("WS", "COMMENT"):
            tokens.append(Token(kind, value, line, column))
        newlines = value.count("\n")
        if newlines:
            line += newlines
            line_start = pos + value.rindex("\n") + 1
        pos = m.end()
    tokens.append(Token("EOF", "", line, pos - line_start + 1))
    return tokens


_ESCAPES = {"t": "\t", "b": "\b", "n": "\n", "r": "\r", "f": "\f", '"': '"', "'": "'", "\\": "\\"}


def unescape(body: str) -> str:
    """Decode Turtle/SPARQL string escapes; raises ValueError on a bad one."""
    out: list[str] = []
    i = 0
    while i < len(body):
        ch = body[i]
        if ch != "\\":
            out.append(ch)
            i += 1
            continue
        nxt = body[i + 1:i + 2]
        if nxt in _ESCAPES:
            out.append(_ESCAPES[nxt])
            i += 2
        elif nxt in ("u", "U"):
            width = 4 if nxt == "u" else 8
            digits = body[i + 2:i + 2 + width]
            if len(digits) != width or not re.fullmatch(r"[0-9A-Fa-f]+", digits):
                raise ValueError(f"bad \\{nxt} escape")
            out.append(chr(int(digits, 16)))
            i += 2 + width
        else:
            raise ValueError(f"bad escape \\{nxt}")
    return "".join(out)


def escape(text: str) -> str:
    out: list[str] = []
    for ch in text:
        if ch == "\\":
            out.append("\\\\")
        elif ch == '"':
            out.append('\\"')
        elif ch == "\n":
            out.append("\\n")
        elif ch == "\r":
            out.append("\\r")
        elif ch == "\t":
            out.append("\\t")
        elif ord(ch) < 0x20 or ord(ch) == 0x7F:
            out.append(f"\\u{ord(ch):04X}")
        else:
            out.append(ch)
    return "".join(out)
