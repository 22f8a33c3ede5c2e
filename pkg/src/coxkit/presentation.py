"""Finite presentations and group words.

A word is a tuple of nonzero integers: ``k`` stands for generator ``k - 1``
and ``-k`` for its inverse.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field

__all__ = [
    "Presentation",
    "WordSyntaxError",
    "parse_word",
    "render_word",
    "invert",
    "reduce_word",
    "power",
    "commutator",
    "parse_presentation",
    "format_presentation",
]


class WordSyntaxError(ValueError):
    def __init__(self, message, pos=None):
        self.pos = pos
        super().__init__(message if pos is None else f"{message} at column {pos + 1}")


def invert(w):
    return tuple(-x for x in reversed(w))


def reduce_word(w):
    """Free reduction."""
    out: list = []
    for x in w:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def power(w, k: int):
    w = tuple(w)
    return w * k if k >= 0 else invert(w) * (-k)


def commutator(a, b):
    """[a, b] = a^-1 b^-1 a b."""
    return invert(a) + invert(b) + tuple(a) + tuple(b)


_NAME = re.compile(r"[A-Za-z][0-9_]*")
_INT = re.compile(r"-?\d+")


class _WordParser:
    """word := factor* ; factor := atom ('^' int)? ;
    atom := name | '1' | '(' word ')' | '[' word ',' word ']'"""

    def __init__(self, text, lookup, pos=0, stop=""):
        self.text, self.lookup, self.pos, self.stop = text, lookup, pos, stop

    def skip(self):
        while self.pos < len(self.text) and self.text[self.pos] in " \t":
            self.pos += 1

    def peek(self):
        self.skip()
        return self.text[self.pos] if self.pos < len(self.text) else ""

    def expect(self, ch):
        if self.peek() != ch:
            raise WordSyntaxError(f"expected {ch!r}", self.pos)
        self.pos += 1

    def word(self, stops):
        out: list = []
        while True:
            ch = self.peek()
            if not ch or ch in stops:
                return tuple(out)
            out.extend(self.factor(stops))

    def factor(self, stops):
        ch = self.peek()
        start = self.pos
        if ch == "(":
            self.pos += 1
            atom = self.word(")")
            self.expect(")")
        elif ch == "[":
            self.pos += 1
            a = self.word(",")
            self.expect(",")
            b = self.word("]")
            self.expect("]")
            atom = commutator(a, b)
        elif ch == "1":
            self.pos += 1
            atom = ()
        else:
            m = _NAME.match(self.text, self.pos)
            if not m:
                raise WordSyntaxError(f"unexpected {ch!r}", start)
            self.pos = m.end()
            atom = self.lookup(m.group(), start)
        if self.peek() == "^":
            self.pos += 1
            self.skip()
            m = _INT.match(self.text, self.pos)
            if not m:
                raise WordSyntaxError("expected integer exponent", self.pos)
            self.pos = m.end()
            atom = power(atom, int(m.group()))
        return atom


def parse_word(text: str, names, pos: int = 0, stops: str = ""):
    """Parse a word over generator ``names`` (list of strings or dict name->index).

    Returns the word; when ``stops`` is given, parsing ends at the first
    character from it and ``(word, end_position)`` is returned instead.
    """
    index = names if isinstance(names, dict) else {nm: i for i, nm in enumerate(names)}

    def lookup(nm, at):
        if nm not in index:
            raise WordSyntaxError(f"unknown generator {nm!r}", at)
        return (index[nm] + 1,)

    p = _WordParser(text, lookup, pos)
    w = p.word(stops)
    if stops:
        return w, p.pos
    if p.peek():
        raise WordSyntaxError(f"unexpected {p.peek()!r}", p.pos)
    return w


def render_word(w, names) -> str:
    """Space-separated letters, runs collapsed to exponents; '1' if empty."""
    if not w:
        return "1"
    parts = []
    i = 0
    while i < len(w):
        j = i
        while j < len(w) and w[j] == w[i]:
            j += 1
        run = j - i
        nm = names[abs(w[i]) - 1]
        exp = run if w[i] > 0 else -run
        parts.append(nm if exp == 1 else f"{nm}^{exp}")
        i = j
    return " ".join(parts)


@dataclass(frozen=True)
class Presentation:
    ngens: int
    relators: tuple = ()
    names: tuple = field(default=None)

    def __post_init__(self):
        rels = tuple(tuple(int(x) for x in r) for r in self.relators)
        for r in rels:
            for x in r:
                if x == 0 or abs(x) > self.ngens:
                    raise ValueError(f"relator letter {x} out of range")
        object.__setattr__(self, "relators", rels)
        if self.names is None:
            object.__setattr__(self, "names", tuple(default_names(self.ngens)))
        elif len(self.names) != self.ngens:
            raise ValueError("one name per generator required")
        else:
            object.__setattr__(self, "names", tuple(self.names))

    def __str__(self):
        return format_presentation(self)


def default_names(n):
    if n <= 26:
        return [chr(ord("a") + i) for i in range(n)]
    return [f"x{i + 1}" for i in range(n)]


def parse_presentation(text: str) -> Presentation:
    """Line format: ``gens a b`` then any number of ``rel <word>`` lines.

    A relator line may also hold ``lhs = rhs``, stored as lhs rhs^-1.
    """
    names = None
    rels = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, _, rest = line.partition(" ")
        try:
            if head == "gens":
                if names is not None:
                    raise WordSyntaxError("repeated 'gens' line")
                names = rest.split()
                for nm in names:
                    if not _NAME.fullmatch(nm):
                        raise WordSyntaxError(f"bad generator name {nm!r}")
            elif head == "rel":
                if names is None:
                    raise WordSyntaxError("'rel' before 'gens'")
                if "=" in rest:
                    lhs, rhs = rest.split("=", 1)
                    rels.append(parse_word(lhs, names) + invert(parse_word(rhs, names)))
                else:
                    rels.append(parse_word(rest, names))
            else:
                raise WordSyntaxError(f"unknown directive {head!r}")
        except WordSyntaxError as exc:
            raise WordSyntaxError(f"line {lineno}: {exc}") from None
    if names is None:
        names = []
    return Presentation(len(names), tuple(rels), tuple(names))


def format_presentation(p: Presentation) -> str:
    lines = ["gens " + " ".join(p.names)] if p.ngens else ["gens"]
    lines += ["rel " + render_word(r, p.names) for r in p.relators]
    return "\n".join(lines) + "\n"
