"""First-order formulas in the language of groups.

Terms are group words: tuples of ``(name, sign)`` letters with sign +1 or -1,
the empty tuple being the identity. Names follow ``[A-Za-z][0-9_]*`` and are
either variables or constants of a model.

Text grammar (one formula per file, whitespace insignificant, ``#`` comments)::

    formula := conj ('|' conj)*
    conj    := unary ('&' unary)*
    unary   := '~' unary | quant | 'true' | 'false' | atom
             | '(' formula ')' | '(&' unary ')' | '(|' unary ')'
    quant   := ('forall' | 'exists') name+ '.' formula
    atom    := word '=' word | word '!=' word

Words are juxtaposed letters with optional ``^k`` exponents, ``1`` for the
identity, ``(...)`` grouping and ``[a, b]`` = a^-1 b^-1 a b. The renderer
writes every compound node with its own parentheses and every letter
separately (``x^-1``), so ``parse_formula(render(f)) == f`` structurally.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass
from itertools import product

import numpy as np

from .permgrp import PermGroup, Permutation
from .presentation import Presentation, WordSyntaxError, _WordParser, reduce_word

__all__ = [
    "Formula", "Eq", "Neq", "Not", "And", "Or", "Forall", "Exists", "TRUE", "FALSE",
    "FormulaSyntaxError", "BudgetExceeded", "FiniteGroupModel",
    "parse_formula", "render", "free_vars", "prefix", "tag", "substitute",
    "emit_chi", "emit_finite_g", "emit_gamma", "evaluate", "satisfying",
    "word_term", "term_word", "DEFAULT_BUDGET", "budget_from_env",
]

DEFAULT_BUDGET = 10**7


class FormulaSyntaxError(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


def budget_from_env() -> int:
    raw = os.environ.get("COXKIT_BUDGET")
    return int(raw) if raw else DEFAULT_BUDGET


# ---------------------------------------------------------------------------
# syntax tree


class Formula:
    __slots__ = ()

    @property
    def free_vars(self) -> frozenset:
        return free_vars(self)

    @property
    def tag(self) -> str:
        return tag(self)

    def __str__(self):
        return render(self)


@dataclass(frozen=True)
class Eq(Formula):
    lhs: tuple
    rhs: tuple = ()


@dataclass(frozen=True)
class Neq(Formula):
    lhs: tuple
    rhs: tuple = ()


@dataclass(frozen=True)
class Not(Formula):
    body: Formula


@dataclass(frozen=True)
class And(Formula):
    parts: tuple = ()


@dataclass(frozen=True)
class Or(Formula):
    parts: tuple = ()


@dataclass(frozen=True)
class Forall(Formula):
    vars: tuple
    body: Formula


@dataclass(frozen=True)
class Exists(Formula):
    vars: tuple
    body: Formula


TRUE = And(())
FALSE = Or(())

_ATOMS = (Eq, Neq)
_QUANTS = (Forall, Exists)


def word_term(word, names):
    """Presentation word (signed 1-based ints) to a term over ``names``."""
    return tuple((names[abs(x) - 1], 1 if x > 0 else -1) for x in word)


def term_word(term, names):
    index = {nm: i for i, nm in enumerate(names)}
    return tuple((index[nm] + 1) * e for nm, e in term)


def _inv(term):
    return tuple((nm, -e) for nm, e in reversed(term))


def _var(nm):
    return ((nm, 1),)


# ---------------------------------------------------------------------------
# rendering and parsing


def _render_term(t) -> str:
    if not t:
        return "1"
    return " ".join(nm if e > 0 else f"{nm}^-1" for nm, e in t)


def render(f: Formula) -> str:
    if isinstance(f, Eq):
        return f"{_render_term(f.lhs)} = {_render_term(f.rhs)}"
    if isinstance(f, Neq):
        return f"{_render_term(f.lhs)} != {_render_term(f.rhs)}"
    if isinstance(f, Not):
        return "~" + _operand(f.body)
    if isinstance(f, (And, Or)):
        op = "&" if isinstance(f, And) else "|"
        if not f.parts:
            return "true" if isinstance(f, And) else "false"
        if len(f.parts) == 1:
            return f"({op} {_operand(f.parts[0])})"
        return "(" + f" {op} ".join(_operand(p) for p in f.parts) + ")"
    if isinstance(f, _QUANTS):
        kw = "forall" if isinstance(f, Forall) else "exists"
        return f"{kw} {' '.join(f.vars)} . {render(f.body)}"
    raise TypeError(f"not a formula: {f!r}")


def _operand(f):
    s = render(f)
    return f"({s})" if isinstance(f, _QUANTS) else s


_KEYWORD = re.compile(r"(forall|exists|true|false)(?![A-Za-z0-9_])")
_NAME = re.compile(r"[A-Za-z][0-9_]*")


class _Parser:
    def __init__(self, text):
        self.text = text
        self.pos = 0
        self.names: list = []
        self.index: dict = {}

    def peek(self, n=1):
        while self.pos < len(self.text) and self.text[self.pos].isspace():
            self.pos += 1
        return self.text[self.pos:self.pos + n]

    def fail(self, msg):
        raise FormulaSyntaxError(f"{msg} at column {self.pos + 1}")

    def expect(self, tok):
        if self.peek(len(tok)) != tok:
            self.fail(f"expected {tok!r}")
        self.pos += len(tok)

    def formula(self):
        parts = [self.conj()]
        while self.peek() == "|":
            self.pos += 1
            parts.append(self.conj())
        return parts[0] if len(parts) == 1 else Or(tuple(parts))

    def conj(self):
        parts = [self.unary()]
        while self.peek() == "&":
            self.pos += 1
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(tuple(parts))

    def unary(self):
        ch = self.peek()
        if ch == "~":
            self.pos += 1
            return Not(self.unary())
        m = _KEYWORD.match(self.text, self.pos)
        if m:
            self.pos = m.end()
            kw = m.group(1)
            if kw == "true":
                return TRUE
            if kw == "false":
                return FALSE
            return self.quant(Forall if kw == "forall" else Exists)
        if ch == "(":
            start = self.pos
            self.pos += 1
            op = self.peek()
            if op in ("&", "|"):
                self.pos += 1
                inner = self.unary()
                self.expect(")")
                return And((inner,)) if op == "&" else Or((inner,))
            try:
                inner = self.formula()
                self.expect(")")
                if self.peek() in ("", "&", "|", ")"):
                    return inner
            except (FormulaSyntaxError, WordSyntaxError):
                pass
            self.pos = start  # a parenthesised word, e.g. (x y)^2 = 1
        return self.atom()

    def quant(self, cls):
        vs = []
        while self.peek() != ".":
            m = _NAME.match(self.text, self.pos)
            if not m or _KEYWORD.match(self.text, self.pos):
                self.fail("expected variable name or '.'")
            vs.append(m.group())
            self.pos = m.end()
        self.pos += 1
        if not vs:
            self.fail("quantifier without variables")
        return cls(tuple(vs), self.formula())

    def lookup(self, nm, at):
        if nm not in self.index:
            self.index[nm] = len(self.names)
            self.names.append(nm)
        return (self.index[nm] + 1,)

    def word(self, stops):
        ch = self.peek()
        if not ch or ch in stops:
            self.fail("expected a word ('1' for the identity)")
        if _KEYWORD.match(self.text, self.pos):
            self.fail("keyword where a word was expected")
        wp = _WordParser(self.text, self.lookup, self.pos)
        w = wp.word(stops)
        self.pos = wp.pos
        return word_term(w, self.names)

    def atom(self):
        lhs = self.word("=!&|)")
        if self.peek(2) == "!=":
            self.pos += 2
            cls = Neq
        elif self.peek() == "=":
            self.pos += 1
            cls = Eq
        else:
            self.fail("expected '=' or '!='")
        rhs = self.word("&|)=!")
        return cls(lhs, rhs)


def parse_formula(text: str) -> Formula:
    """Parse formula text; '#' starts a comment running to the end of the line."""
    text = "\n".join(line.split("#", 1)[0] for line in text.splitlines())
    p = _Parser(text)
    try:
        f = p.formula()
    except WordSyntaxError as exc:
        raise FormulaSyntaxError(str(exc)) from None
    if p.peek():
        p.fail(f"unexpected {p.peek()!r}")
    return f


# ---------------------------------------------------------------------------
# variables, substitution, prefix shape


def _term_names(t):
    return {nm for nm, _ in t}


def free_vars(f: Formula) -> frozenset:
    if isinstance(f, _ATOMS):
        return frozenset(_term_names(f.lhs) | _term_names(f.rhs))
    if isinstance(f, Not):
        return free_vars(f.body)
    if isinstance(f, (And, Or)):
        return frozenset().union(*(free_vars(p) for p in f.parts))
    if isinstance(f, _QUANTS):
        return free_vars(f.body) - set(f.vars)
    raise TypeError(f"not a formula: {f!r}")


def _all_names(f):
    if isinstance(f, _ATOMS):
        return _term_names(f.lhs) | _term_names(f.rhs)
    if isinstance(f, Not):
        return _all_names(f.body)
    if isinstance(f, (And, Or)):
        return set().union(*(_all_names(p) for p in f.parts))
    return set(f.vars) | _all_names(f.body)


def _sub_term(t, mapping):
    out = []
    for nm, e in t:
        if nm in mapping:
            out.extend(mapping[nm] if e > 0 else _inv(mapping[nm]))
        else:
            out.append((nm, e))
    return tuple(out)


def _fresh(avoid, stem="y"):
    i = 1
    while f"{stem}{i}" in avoid:
        i += 1
    return f"{stem}{i}"


def substitute(f: Formula, mapping: dict) -> Formula:
    """Replace free variables by terms, renaming bound variables that would
    capture a name occurring in the substituted terms."""
    mapping = {k: tuple(v) for k, v in mapping.items()}
    incoming = set().union(*(_term_names(t) for t in mapping.values())) if mapping else set()
    return _subst(f, mapping, incoming)


def _subst(f, mapping, incoming):
    if not mapping:
        return f
    if isinstance(f, Eq):
        return Eq(_sub_term(f.lhs, mapping), _sub_term(f.rhs, mapping))
    if isinstance(f, Neq):
        return Neq(_sub_term(f.lhs, mapping), _sub_term(f.rhs, mapping))
    if isinstance(f, Not):
        return Not(_subst(f.body, mapping, incoming))
    if isinstance(f, (And, Or)):
        return type(f)(tuple(_subst(p, mapping, incoming) for p in f.parts))
    inner = {k: v for k, v in mapping.items() if k not in f.vars}
    avoid = incoming | _all_names(f.body) | set(mapping)
    new_vars = []
    rename = {}
    for v in f.vars:
        if v in incoming:
            nv = _fresh(avoid | set(new_vars))
            rename[v] = _var(nv)
            new_vars.append(nv)
        else:
            new_vars.append(v)
    body = _subst(f.body, rename, set()) if rename else f.body
    return type(f)(tuple(new_vars), _subst(body, inner, incoming))


def _merge(prefixes):
    """Shortest alternating A/E prefix containing every given one as a
    subsequence of blocks; ties go to the prefix starting with A."""
    ps = [p for p in prefixes if p]
    if not ps:
        return ""
    need = {q: max(len(p) + (p[0] != q) for p in ps) for q in "AE"}
    start = "A" if need["A"] <= need["E"] else "E"
    other = "E" if start == "A" else "A"
    return "".join(start if i % 2 == 0 else other for i in range(need[start]))


def prefix(f: Formula) -> str:
    """Quantifier block pattern (e.g. 'AE') of a prenex form of f, obtained by
    pulling quantifiers outward with variables renamed apart."""
    if isinstance(f, _ATOMS):
        return ""
    if isinstance(f, Not):
        return prefix(f.body).translate(str.maketrans("AE", "EA"))
    if isinstance(f, (And, Or)):
        return _merge([prefix(p) for p in f.parts])
    q = "A" if isinstance(f, Forall) else "E"
    rest = prefix(f.body)
    return rest if rest.startswith(q) else q + rest


_TAGS = {"": "quantifier-free", "A": "universal", "E": "existential",
         "AE": "AE", "EA": "EA", "EAE": "EAE"}


def tag(f: Formula) -> str:
    return _TAGS.get(prefix(f), "other")


# ---------------------------------------------------------------------------
# emitters


def _x_names(n):
    return [f"x{i + 1}" for i in range(n)]


def emit_chi(m: int, var: str = "x", bound: str = "y") -> Formula:
    """forall y . [x, y^m] = 1"""
    if m < 1:
        raise ValueError("m must be positive")
    x, y = _var(var), _var(bound)
    ym = y * m
    return Forall((bound,), Eq(_inv(x) + _inv(ym) + x + ym, ()))


def _check_subgroups(subgroups):
    if not subgroups:
        raise ValueError("at least one subgroup is required")
    for i, S in enumerate(subgroups):
        if not S:
            raise ValueError(f"subgroup {i + 1} lists no elements")


def _non_conjugacy_block(terms, g="g"):
    """And over ordered same-order pairs (i, i') of Or_j And_j' g w_ij g^-1 != w_i'j'."""
    gv = _var(g)
    pairs = []
    for i, Fi in enumerate(terms):
        for i2, Fj in enumerate(terms):
            if i == i2 or len(Fi) != len(Fj):
                continue
            pairs.append(Or(tuple(
                And(tuple(Neq(gv + w + _inv(gv), w2) for w2 in Fj)) for w in Fi)))
    return And(tuple(pairs))


def emit_finite_g(P: Presentation, subgroups, var_names=None) -> Formula:
    """Universal formula in x1..xn: relators hold, each listed subgroup element
    other than the identity word maps to a nontrivial element, and for all g no
    two listed subgroups of equal order become conjugate by g."""
    _check_subgroups(subgroups)
    xs = list(var_names) if var_names else _x_names(P.ngens)
    if len(xs) != P.ngens:
        raise ValueError("one variable per generator required")
    rels = And(tuple(Eq(word_term(r, xs), ()) for r in P.relators))
    terms = [[word_term(w, xs) for w in S] for S in subgroups]
    nontrivial = And(tuple(Neq(word_term(w, xs), ())
                           for S in subgroups for w in S if reduce_word(tuple(w))))
    return And((rels, nontrivial, Forall(("g",), _non_conjugacy_block(terms))))


def emit_gamma(P: Presentation, w, theta: Formula, subgroups, hom_words, z_names=None) -> Formula:
    """exists x1..xn forall g: z = w(x), relators, theta(h_i(x)) and the
    pairwise non-conjugacy block; z1..zk free."""
    _check_subgroups(subgroups)
    w = [tuple(t) for t in w]
    zs = list(z_names) if z_names is not None else [f"z{i + 1}" for i in range(len(w))]
    if len(zs) != len(w):
        raise ValueError(f"arity mismatch: {len(zs)} variables for {len(w)} words")
    fv = sorted(free_vars(theta))
    if len(fv) != 1:
        raise ValueError("theta must have exactly one free variable")
    xs = _x_names(P.ngens)
    reserved = set(xs) | set(zs) | {"g"}
    if reserved & (_all_names(theta) - set(fv)):
        raise ValueError("theta uses a reserved name as a constant")
    zeq = And(tuple(Eq(_var(z), word_term(t, xs)) for z, t in zip(zs, w)))
    rels = And(tuple(Eq(word_term(r, xs), ()) for r in P.relators))
    inH = And(tuple(substitute(theta, {fv[0]: word_term(h, xs)}) for h in hom_words))
    terms = [[word_term(t, xs) for t in S] for S in subgroups]
    body = And((zeq, rels, inH, _non_conjugacy_block(terms)))
    return Exists(tuple(xs), Forall(("g",), body))


# ---------------------------------------------------------------------------
# finite models


@dataclass
class FiniteGroupModel:
    group: PermGroup
    constants: dict  # name -> Permutation

    def __post_init__(self):
        self.table = self.group.table.tolist()
        self.inv = [row.index(0) for row in self.table]
        self.size = len(self.table)
        self._const = {}
        for nm, g in self.constants.items():
            if g not in self.group:
                raise ValueError(f"constant {nm} is not an element of the group")
            self._const[nm] = self.group.index(g)

    def value(self, x) -> int:
        if isinstance(x, Permutation):
            return self.group.index(x)
        x = int(x)
        if not 0 <= x < self.size:
            raise IndexError(f"element index {x} out of range")
        return x


class _Eval:
    def __init__(self, M: FiniteGroupModel, budget: int):
        self.M, self.budget, self.visits = M, budget, 0

    def term(self, t, env):
        T, inv, const = self.M.table, self.M.inv, self.M._const
        acc = 0
        for nm, e in t:
            a = env[nm] if nm in env else const.get(nm)
            if a is None:
                raise KeyError(f"unbound name {nm!r}")
            acc = T[acc][a if e > 0 else inv[a]]
        return acc

    def run(self, f, env):
        if isinstance(f, Eq):
            return self.term(f.lhs, env) == self.term(f.rhs, env)
        if isinstance(f, Neq):
            return self.term(f.lhs, env) != self.term(f.rhs, env)
        if isinstance(f, Not):
            return not self.run(f.body, env)
        if isinstance(f, And):
            return all(self.run(p, env) for p in f.parts)
        if isinstance(f, Or):
            return any(self.run(p, env) for p in f.parts)
        want = isinstance(f, Exists)
        for values in product(range(self.M.size), repeat=len(f.vars)):
            self.visits += 1
            if self.visits > self.budget:
                raise BudgetExceeded(f"more than {self.budget} quantifier visits")
            inner = dict(env)
            inner.update(zip(f.vars, values))
            if self.run(f.body, inner) == want:
                return want
        return not want


def evaluate(f: Formula, M: FiniteGroupModel, assignment=None, budget=None) -> bool:
    """Tarskian truth of f in M; assignment maps free variables to elements
    (Permutations or element indices)."""
    env = {nm: M.value(v) for nm, v in (assignment or {}).items()}
    missing = free_vars(f) - set(env) - set(M._const)
    if missing:
        raise KeyError(f"unassigned free variables: {sorted(missing)}")
    return _Eval(M, budget_from_env() if budget is None else budget).run(f, env)


def satisfying(f: Formula, M: FiniteGroupModel, var: str, budget=None) -> np.ndarray:
    """Element indices at which the one-variable formula f holds."""
    return np.array([i for i in range(M.size) if evaluate(f, M, {var: i}, budget)], dtype=np.intp)
