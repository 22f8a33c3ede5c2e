"""Finite-quotient fingerprints: hom and epi counts from a finitely presented
group into every catalogued group up to an order bound.

Equal fingerprints only say the two groups have the same homomorphism counts
into groups of order at most the bound; nothing beyond it is claimed.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .catalog import MAX_ORDER, load_catalog
from .crysto import CrystGroup
from .permgrp import derive_presentation, hom_count
from .presentation import Presentation

__all__ = [
    "Fingerprint", "Equal", "FirstDifference", "BoundMismatch",
    "fingerprint", "compare", "presentation_of_cryst",
    "format_fingerprint", "parse_fingerprint",
]


class BoundMismatch(ValueError):
    pass


@dataclass(frozen=True)
class Fingerprint:
    bound: int
    entries: tuple  # (order, catalog id, homs, epis), sorted by catalog order

    def counts(self, gid: str):
        for order, i, h, e in self.entries:
            if i == gid:
                return h, e
        raise KeyError(gid)


@dataclass(frozen=True)
class Equal:
    bound: int

    def __str__(self):
        return f"Equal up to order {self.bound}"


@dataclass(frozen=True)
class FirstDifference:
    order: int
    id: str
    counts1: tuple
    counts2: tuple

    def __str__(self):
        return (f"FirstDifference at {self.id} (order {self.order}): "
                f"hom/epi {self.counts1[0]}/{self.counts1[1]} vs {self.counts2[0]}/{self.counts2[1]}")


def fingerprint(P: Presentation, bound: int) -> Fingerprint:
    if not 1 <= bound <= MAX_ORDER:
        raise ValueError(f"bound must lie in 1..{MAX_ORDER}")
    rows = []
    for entry in load_catalog():
        if entry.order > bound:
            break
        h, e = hom_count(P, entry.table)
        rows.append((entry.order, entry.id, h, e))
    return Fingerprint(bound, tuple(rows))


def compare(f1: Fingerprint, f2: Fingerprint):
    """Equal, or the first entry (in catalog order) where the counts differ."""
    if f1.bound != f2.bound:
        raise BoundMismatch(f"bounds differ: {f1.bound} vs {f2.bound}")
    for a, b in zip(f1.entries, f2.entries):
        if a[:2] != b[:2]:
            raise ValueError("fingerprints list different catalog entries")
        if a[2:] != b[2:]:
            return FirstDifference(a[0], a[1], a[2:], b[2:])
    return Equal(f1.bound)


def format_fingerprint(fp: Fingerprint) -> str:
    lines = [f"bound {fp.bound}", "# order id hom epi"]
    lines += [f"{o} {i} {h} {e}" for o, i, h, e in fp.entries]
    return "\n".join(lines) + "\n"


def parse_fingerprint(text: str) -> Fingerprint:
    bound = None
    rows = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "bound":
            if bound is not None or len(parts) != 2:
                raise ValueError(f"line {lineno}: bad bound header")
            bound = int(parts[1])
            continue
        if bound is None or len(parts) != 4:
            raise ValueError(f"line {lineno}: expected 'order id hom epi' after the bound header")
        rows.append((int(parts[0]), parts[1], int(parts[2]), int(parts[3])))
    if bound is None:
        raise ValueError("missing bound header")
    return Fingerprint(bound, tuple(rows))


def presentation_of_cryst(G: CrystGroup) -> Presentation:
    """Presentation of Z^n x| G0 on translations t1..tn and point generators
    k1..km: translations commute, k t_i k^-1 = t^(rho(k) e_i), and the point
    group relators, each corrected by the translation it evaluates to."""
    n = G.rank
    m = len(G.G0.gens)
    names = tuple(f"t{i + 1}" for i in range(n)) + tuple(f"k{s + 1}" for s in range(m))

    def tword(v):
        out = []
        for i, c in enumerate(v):
            c = int(c)
            out += [(i + 1) if c > 0 else -(i + 1)] * abs(c)
        return tuple(out)

    rels = []
    for i in range(n):
        for j in range(i + 1, n):
            rels.append((-(i + 1), -(j + 1), i + 1, j + 1))
    for s, mat in enumerate(G.rho_gens):
        k = n + s + 1
        for i in range(n):
            img = tword(mat[:, i])
            rels.append((k, i + 1, -k) + tuple(-x for x in reversed(img)))
    P0 = derive_presentation(G.G0)
    for r in P0.relators:
        val = G.identity()
        for x in r:
            e = G.point(G.G0.gens[abs(x) - 1])
            val = G.mul(val, e if x > 0 else G.inverse(e))
        corr = tword(-np.array(val.v, dtype=np.int64))
        rels.append(tuple(n + x if x > 0 else x - n for x in r) + corr)
    return Presentation(n + m, tuple(rels), names)
