"""Catalog of all groups of order at most 31, up to isomorphism.

The data file holds, per group, generators of its left regular
representation. It is produced by ``scripts/build_catalog.py``.
"""
from __future__ import annotations

import json
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from importlib import resources
from itertools import product
from math import gcd, lcm

import numpy as np

from .permgrp import PermGroup, Permutation, _element_orders, tables_isomorphic

__all__ = ["CENSUS", "CatalogEntry", "load_catalog", "catalog_entry", "group_name", "MAX_ORDER"]

MAX_ORDER = 31

# number of isomorphism classes of groups of each order
CENSUS = {
    1: 1, 2: 1, 3: 1, 4: 2, 5: 1, 6: 2, 7: 1, 8: 5, 9: 2, 10: 2, 11: 1, 12: 5, 13: 1,
    14: 2, 15: 1, 16: 14, 17: 1, 18: 5, 19: 1, 20: 5, 21: 2, 22: 2, 23: 1, 24: 15,
    25: 2, 26: 2, 27: 5, 28: 4, 29: 1, 30: 4, 31: 1,
}


@dataclass(frozen=True)
class CatalogEntry:
    id: str
    order: int
    name: str
    gens: tuple = field(repr=False)

    @property
    def group(self) -> PermGroup:
        return _group(self.id)

    @property
    def table(self) -> np.ndarray:
        return self.group.table

    def sort_key(self):
        n, k = self.id.split(".")
        return int(n), int(k)


@lru_cache(maxsize=1)
def load_catalog():
    """All catalog entries ordered by (order, index)."""
    raw = json.loads(resources.files("coxkit.data").joinpath("small_groups.json").read_text())
    out = []
    for e in raw["groups"]:
        gens = tuple(Permutation(tuple(g)) for g in e["gens"])
        out.append(CatalogEntry(e["id"], e["order"], e["name"], gens))
    out.sort(key=CatalogEntry.sort_key)
    return tuple(out)


@lru_cache(maxsize=None)
def _index():
    return {e.id: e for e in load_catalog()}


def catalog_entry(key: str) -> CatalogEntry:
    """Look up by id ('4.1') or by name ('C4', 'S3')."""
    idx = _index()
    if key in idx:
        return idx[key]
    for e in load_catalog():
        if e.name == key:
            return e
    raise KeyError(f"no catalog group {key!r}")


@lru_cache(maxsize=None)
def _group(gid: str) -> PermGroup:
    e = _index()[gid]
    return PermGroup(e.gens, e.order, name=e.name)


# ---------------------------------------------------------------------------
# naming (used when the data file is built)


def _cyclic_product_orders(factors):
    cnt = Counter()
    for xs in product(*(range(d) for d in factors)):
        cnt[lcm(1, *(d // gcd(d, x) for d, x in zip(factors, xs)))] += 1
    return cnt


def _invariant_factor_lists(n):
    """Lists d1 | d2 | ... with product n (d1 > 1)."""
    out = []

    def rec(rest, prev, acc):
        if rest == 1:
            out.append(acc)
            return
        for d in range(2, rest + 1):
            if rest % d == 0 and (prev is None or d % prev == 0):
                rec(rest // d, d, acc + [d])

    rec(n, None, [])
    return out


def _perm_table(gens, degree):
    return PermGroup(gens, degree).table


@lru_cache(maxsize=1)
def _reference_tables():
    P = Permutation.parse
    refs = {
        "A4": _perm_table([P("(1 2 3)", 4), P("(2 3 4)", 4)], 4),
        "S4": _perm_table([P("(1 2)", 4), P("(1 2 3 4)", 4)], 4),
    }
    # SL(2,3) acting on the eight nonzero vectors of F_3^2
    vecs = [(a, b) for a in range(3) for b in range(3) if (a, b) != (0, 0)]

    def act(M):
        img = []
        for a, b in vecs:
            v = ((M[0][0] * a + M[0][1] * b) % 3, (M[1][0] * a + M[1][1] * b) % 3)
            img.append(vecs.index(v))
        return Permutation(tuple(img))

    refs["SL(2,3)"] = _perm_table([act([[1, 1], [0, 1]]), act([[1, 0], [1, 1]])], 8)
    return refs


def group_name(T) -> str:
    """Readable name when one of the standard families applies, else ''."""
    A = np.asarray(T)
    n = len(A)
    if n == 1:
        return "1"
    orders = _element_orders(A)
    if (A == A.T).all():
        stats = Counter(orders.tolist())
        for fl in _invariant_factor_lists(n):
            if _cyclic_product_orders(fl) == stats:
                return " x ".join(f"C{d}" for d in fl)
    inv = [int(np.nonzero(A[a] == 0)[0][0]) for a in range(n)]
    if n % 2 == 0:
        m = n // 2
        for r in np.nonzero(orders == m)[0]:
            r = int(r)
            cyc, x = {0}, r
            while x != 0:
                cyc.add(x)
                x = int(A[x][r])
            rinv = inv[r]
            outside = [x for x in range(n) if x not in cyc]
            if all(orders[x] == 2 and A[A[x][r]][inv[x]] == rinv for x in outside):
                return "S3" if n == 6 else f"D{n}"
            break
    if n % 4 == 0 and n >= 8:
        m = n // 4
        for r in np.nonzero(orders == 2 * m)[0]:
            r = int(r)
            rm = 0
            for _ in range(m):
                rm = int(A[rm][r])
            cyc, x = {0}, r
            while x != 0:
                cyc.add(x)
                x = int(A[x][r])
            outside = [x for x in range(n) if x not in cyc]
            if outside and all(A[x][x] == rm and A[A[x][r]][inv[x]] == inv[r] for x in outside):
                if m & (m - 1) == 0:
                    return f"Q{n}"
                return f"Dic{m}"
            break
    for name, ref in _reference_tables().items():
        if len(ref) == n and tables_isomorphic(A, ref):
            return name
    return ""
