"""Reflection representation of a Coxeter group over Z[2cos(pi/L)].

Generator s acts on the basis by e_s -> -e_s and e_t -> e_t + c_st e_s with
c_st = 2cos(pi/m_st) (taken to be 2 when m_st is infinite). Since the
representation is faithful, two words are equal in the group exactly when
their matrices agree.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from .diagram import INF, CoxeterMatrix
from .exact import ExactMatrix, RealCyclotomic, minimal_polynomial, two_cos_pi_over

__all__ = ["ReflectionRep", "build_rep", "words_equal", "element_order", "Finite",
           "ExceedsBound", "RepresentationError"]


class RepresentationError(RuntimeError):
    pass


@dataclass(frozen=True)
class Finite:
    k: int

    def __str__(self):
        return f"Finite({self.k})"


@dataclass(frozen=True)
class ExceedsBound:
    bound: int

    def __str__(self):
        return f"ExceedsBound({self.bound})"


@dataclass(frozen=True)
class ReflectionRep:
    matrix: CoxeterMatrix
    L: int
    gens: tuple  # ExactMatrix per generator

    @property
    def n(self):
        return self.matrix.n

    def identity(self) -> ExactMatrix:
        return ExactMatrix.identity(self.n, self.L)

    def evaluate(self, word) -> ExactMatrix:
        """Matrix of the word (0-based generator indices, left to right)."""
        out = self.identity()
        for s in word:
            if not 0 <= s < self.n:
                raise IndexError(f"generator {s} out of range")
            out = out @ self.gens[s]
        return out


def _conductor(cm: CoxeterMatrix) -> int:
    labels = [lab for _, _, lab in cm.edges() if lab != INF]
    return reduce(math.lcm, labels, 1)


def _check_pair_order(M: ExactMatrix, m) -> bool:
    ident = ExactMatrix.identity(M.shape[0], M.L)
    P = ident
    for k in range(1, m + 1):
        P = P @ M
        if P == ident:
            return k == m
    return False


def build_rep(cm: CoxeterMatrix, check: bool = True) -> ReflectionRep:
    L = _conductor(cm)
    n = cm.n
    d = len(minimal_polynomial(L)) - 1
    gens = []
    for s in range(n):
        stack = np.zeros((d, n, n), dtype=object)
        stack[...] = 0
        for i in range(n):
            stack[0, i, i] = 1
        # column t holds the image of e_t; only row s differs from the identity
        for t in range(n):
            if t == s:
                stack[0, s, s] = -1
            else:
                c = two_cos_pi_over(cm[s, t], L)
                for k in range(d):
                    stack[k, s, t] = c.coeffs[k]
        gens.append(ExactMatrix(L, stack))
    rep = ReflectionRep(cm, L, tuple(gens))
    if check:
        ident = rep.identity()
        for s, g in enumerate(gens):
            if g @ g != ident:
                raise RepresentationError(f"generator {s + 1} does not square to 1")
        for s in range(n):
            for t in range(s + 1, n):
                m = cm[s, t]
                if m != INF and not _check_pair_order(gens[s] @ gens[t], m):
                    raise RepresentationError(f"s{s + 1} s{t + 1} does not have order {m}")
    return rep


def words_equal(rep: ReflectionRep, w1, w2) -> bool:
    return rep.evaluate(w1) == rep.evaluate(w2)


def element_order(rep: ReflectionRep, w, bound: int):
    if bound < 1:
        raise ValueError("bound must be positive")
    M = rep.evaluate(w)
    ident = rep.identity()
    P = M
    for k in range(1, bound + 1):
        if P == ident:
            return Finite(k)
        P = P @ M
    return ExceedsBound(bound)


def entry(rep: ReflectionRep, word, i, j) -> RealCyclotomic:
    return rep.evaluate(word)[i, j]
