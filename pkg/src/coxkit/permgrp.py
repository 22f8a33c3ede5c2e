"""Permutation groups by explicit closure.

Elements of a materialized group are rows of a numpy ``uint8``/``uint16``
array; lookups go through a sorted byte-key index. There is no stabilizer
chain, so the practical ceiling is around a million elements.

Composition follows function notation: ``(p * q)(i) = p(q(i))``.
"""
from __future__ import annotations

import re
from collections import Counter
from dataclasses import dataclass
from functools import cached_property
from itertools import product

import numpy as np

from .presentation import Presentation, default_names, reduce_word
from .todd_coxeter import CosetLimitExceeded, coset_table, order_upper_bound

__all__ = [
    "Permutation",
    "PermGroup",
    "BoundExceeded",
    "NotInGroup",
    "closure",
    "center",
    "centralizer_element",
    "are_conjugate_subgroups",
    "cycle_type",
    "hom_count",
    "homomorphisms",
    "is_isomorphic_small",
    "direct_product",
    "derive_presentation",
    "cayley_table",
    "eval_word",
    "subgroups",
    "subgroup_classes",
    "subgroup_class_words",
    "group_of_presentation",
]

DEFAULT_BOUND = 2_000_000


class BoundExceeded(RuntimeError):
    def __init__(self, message, partial=None):
        self.partial = partial
        super().__init__(message)


class NotInGroup(ValueError):
    pass


_CYCLE = re.compile(r"\(([^()]*)\)")


@dataclass(frozen=True)
class Permutation:
    """Bijection of {1..d}; stored 0-based as the tuple of images."""

    images: tuple

    def __post_init__(self):
        imgs = tuple(int(x) for x in self.images)
        if sorted(imgs) != list(range(len(imgs))):
            raise ValueError("not a permutation")
        object.__setattr__(self, "images", imgs)

    @classmethod
    def identity(cls, degree: int) -> "Permutation":
        return cls(tuple(range(degree)))

    @classmethod
    def from_cycles(cls, cycles, degree: int) -> "Permutation":
        """``cycles`` are sequences of 1-based points."""
        img = list(range(degree))
        seen = set()
        for cyc in cycles:
            for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
                if not 1 <= a <= degree:
                    raise ValueError(f"point {a} outside 1..{degree}")
                if a in seen:
                    raise ValueError(f"point {a} repeated")
                seen.add(a)
                img[a - 1] = b - 1
        return cls(tuple(img))

    @classmethod
    def parse(cls, text: str, degree: int | None = None) -> "Permutation":
        """Cycle notation such as ``(1 3)(2 4)(5 6)``; ``()`` is the identity."""
        text = text.strip()
        cycles = []
        pos = 0
        for m in _CYCLE.finditer(text):
            if text[pos:m.start()].strip():
                raise ValueError(f"unexpected text {text[pos:m.start()]!r}")
            pos = m.end()
            body = m.group(1).replace(",", " ").split()
            if body:
                cycles.append([int(x) for x in body])
        if text[pos:].strip() or (not text.startswith("(") and text):
            raise ValueError(f"bad cycle notation {text!r}")
        top = max((max(c) for c in cycles), default=0)
        if degree is None:
            degree = top
        return cls.from_cycles(cycles, degree)

    @property
    def degree(self) -> int:
        return len(self.images)

    def __call__(self, point: int) -> int:
        """Image of a 1-based point."""
        return self.images[point - 1] + 1

    def __mul__(self, other: "Permutation") -> "Permutation":
        return Permutation(tuple(self.images[j] for j in other.images))

    def inverse(self) -> "Permutation":
        inv = [0] * len(self.images)
        for i, j in enumerate(self.images):
            inv[j] = i
        return Permutation(tuple(inv))

    def __pow__(self, k: int) -> "Permutation":
        base = self if k >= 0 else self.inverse()
        out = Permutation.identity(self.degree)
        for _ in range(abs(k)):
            out = out * base
        return out

    def conj(self, g: "Permutation") -> "Permutation":
        """g self g^-1."""
        return g * self * g.inverse()

    def is_identity(self) -> bool:
        return all(i == j for i, j in enumerate(self.images))

    def extend(self, degree: int) -> "Permutation":
        return Permutation(self.images + tuple(range(self.degree, degree)))

    def shift(self, offset: int, degree: int) -> "Permutation":
        """Same permutation moved to points offset+1 .. offset+d of a larger set."""
        img = list(range(degree))
        for i, j in enumerate(self.images):
            img[i + offset] = j + offset
        return Permutation(tuple(img))

    def cycles(self):
        seen, out = set(), []
        for i in range(self.degree):
            if i in seen or self.images[i] == i:
                continue
            cyc, j = [], i
            while j not in seen:
                seen.add(j)
                cyc.append(j + 1)
                j = self.images[j]
            out.append(tuple(cyc))
        return out

    def order(self) -> int:
        from math import lcm
        return lcm(1, *(len(c) for c in self.cycles()))

    def __str__(self):
        cyc = self.cycles()
        return "".join("(" + " ".join(map(str, c)) + ")" for c in cyc) or "()"

    __repr__ = __str__


def cycle_type(g: Permutation):
    """Cycle lengths in decreasing order, fixed points included."""
    lens = [len(c) for c in g.cycles()]
    lens += [1] * (g.degree - sum(lens))
    return sorted(lens, reverse=True)


# ---------------------------------------------------------------------------


def _dtype(degree):
    return np.uint8 if degree <= 256 else np.uint16


def _keys(rows: np.ndarray) -> np.ndarray:
    rows = np.ascontiguousarray(rows)
    return rows.view(np.dtype((np.void, rows.dtype.itemsize * rows.shape[1]))).ravel()


class PermGroup:
    """Group generated by permutations of a common degree.

    The element set is computed on first use (bounded by ``bound``); element
    0 is the identity and every element has a recorded parent and generator,
    giving a spanning tree of the Cayley graph.
    """

    def __init__(self, gens, degree: int | None = None, bound: int = DEFAULT_BOUND, name: str = ""):
        gens = list(gens)
        if degree is None:
            if not gens:
                raise ValueError("degree needed for an empty generating set")
            degree = gens[0].degree
        for g in gens:
            if g.degree != degree:
                raise ValueError("generators must share one degree")
        self.degree = degree
        self.gens = tuple(gens)
        self.bound = bound
        self.name = name
        self._elements = None

    # -- materialization ---------------------------------------------------

    def _materialize(self):
        d = self.degree
        dt = _dtype(max(d, 1))
        gens = [np.array(g.images, dtype=np.intp) for g in self.gens]
        ident = np.arange(d, dtype=dt)[None, :]
        elems = [ident]
        parents = [np.array([-1])]
        letters = [np.array([-1])]
        seen = _keys(ident)
        frontier, fstart = ident, 0
        total = 1
        while len(frontier):
            new_rows, new_par, new_let = [], [], []
            for s, g in enumerate(gens):
                kids = frontier[:, g]
                new_rows.append(kids)
                new_par.append(np.arange(fstart, fstart + len(frontier)))
                new_let.append(np.full(len(frontier), s))
            if not new_rows:
                break
            cand = np.concatenate(new_rows)
            par = np.concatenate(new_par)
            let = np.concatenate(new_let)
            keys = _keys(cand)
            uk, first = np.unique(keys, return_index=True)
            pos = np.searchsorted(seen, uk)
            pos[pos == len(seen)] = 0
            fresh = seen[pos] != uk
            take = first[fresh]
            take.sort()
            if total + len(take) > self.bound:
                raise BoundExceeded(f"group order exceeds {self.bound}", partial=total + len(take))
            frontier = cand[take]
            fstart = total
            total += len(take)
            elems.append(frontier)
            parents.append(par[take])
            letters.append(let[take])
            seen = np.sort(np.concatenate([seen, keys[take]]))
        self._elements = np.concatenate(elems)
        self._elements.setflags(write=False)
        self._parent = np.concatenate(parents)
        self._letter = np.concatenate(letters)
        keys = _keys(self._elements)
        self._order_idx = np.argsort(keys, kind="stable")
        self._sorted_keys = keys[self._order_idx]

    @classmethod
    def from_elements(cls, rows, degree: int, name: str = "") -> "PermGroup":
        """Subgroup given by its full element array (must be closed)."""
        rows = np.asarray(rows, dtype=_dtype(max(degree, 1))).reshape(-1, degree)
        gens = _greedy_generators(rows, degree)
        return cls(gens, degree, name=name)

    @property
    def elements_array(self) -> np.ndarray:
        if self._elements is None:
            self._materialize()
        return self._elements

    def order(self) -> int:
        return len(self.elements_array)

    def __len__(self):
        return self.order()

    def elements(self):
        return [Permutation(tuple(int(x) for x in r)) for r in self.elements_array]

    def element(self, i: int) -> Permutation:
        return Permutation(tuple(int(x) for x in self.elements_array[i]))

    def identity(self) -> Permutation:
        return Permutation.identity(self.degree)

    def index_rows(self, rows: np.ndarray) -> np.ndarray:
        """Element indices for an array of rows; -1 where not in the group."""
        self.elements_array
        if len(rows) == 0:
            return np.zeros(0, dtype=np.intp)
        keys = _keys(np.asarray(rows, dtype=self._elements.dtype))
        pos = np.searchsorted(self._sorted_keys, keys)
        pos[pos == len(self._sorted_keys)] = 0
        hit = self._sorted_keys[pos] == keys
        return np.where(hit, self._order_idx[pos], -1)

    def index(self, g: Permutation) -> int:
        if g.degree != self.degree:
            return -1
        return int(self.index_rows(np.array([g.images]))[0])

    def __contains__(self, g: Permutation) -> bool:
        return self.index(g) >= 0

    def word_of(self, g) -> list:
        """Generator indices s1, s2, ... with g = gens[s1] * gens[s2] * ..."""
        i = g if isinstance(g, (int, np.integer)) else self.index(g)
        if i < 0:
            raise NotInGroup(f"{g} is not in the group")
        self.elements_array
        out = []
        while i:
            out.append(int(self._letter[i]))
            i = int(self._parent[i])
        return out[::-1]

    def is_abelian(self) -> bool:
        return all(a * b == b * a for a in self.gens for b in self.gens)

    def subgroup(self, gens, name: str = "") -> "PermGroup":
        return PermGroup(gens, self.degree, self.bound, name)

    def __repr__(self):
        label = self.name or "PermGroup"
        return f"<{label} degree={self.degree} gens={len(self.gens)}>"

    @cached_property
    def table(self) -> np.ndarray:
        return cayley_table(self)


def _greedy_generators(rows, degree):
    """Small generating set for a closed element array."""
    n = len(rows)
    gens: list = []
    sub_order = 1
    while sub_order < n:
        keys = _keys(rows)
        if len(gens):
            sub = PermGroup(gens, degree).elements_array
            have = np.sort(_keys(sub))
            pos = np.searchsorted(have, keys)
            pos[pos == len(have)] = 0
            outside = np.nonzero(have[pos] != keys)[0]
        else:
            outside = np.nonzero(np.any(rows != np.arange(degree), axis=1))[0]
        g = Permutation(tuple(int(x) for x in rows[outside[0]]))
        gens.append(g)
        sub_order = PermGroup(gens, degree).order()
    return gens


def closure(gens, bound: int = DEFAULT_BOUND, degree: int | None = None) -> PermGroup:
    G = PermGroup(gens, degree, bound)
    G.elements_array
    return G


def cayley_table(G: PermGroup) -> np.ndarray:
    """T[i, j] = index of elements[i] * elements[j]."""
    E = G.elements_array
    n = len(E)
    T = np.empty((n, n), dtype=np.int32)
    idx = E.astype(np.intp)
    for j in range(n):
        T[:, j] = G.index_rows(E[:, idx[j]])
    return T


def center(G: PermGroup) -> PermGroup:
    E = G.elements_array
    mask = np.ones(len(E), dtype=bool)
    for g in G.gens:
        gi = np.array(g.images, dtype=np.intp)
        mask &= np.all(E[:, gi] == np.asarray(g.images, dtype=E.dtype)[E.astype(np.intp)], axis=1)
    return PermGroup.from_elements(E[mask], G.degree, name="center")


def centralizer_element(G: PermGroup, g: Permutation) -> PermGroup:
    if g not in G:
        raise NotInGroup(f"{g} is not in the group")
    E = G.elements_array
    gi = np.array(g.images, dtype=np.intp)
    mask = np.all(E[:, gi] == np.asarray(g.images, dtype=E.dtype)[E.astype(np.intp)], axis=1)
    return PermGroup.from_elements(E[mask], G.degree, name="centralizer")


def _conjugate_all(E: np.ndarray, h: Permutation) -> np.ndarray:
    """Rows g h g^-1 for every row g of E."""
    n, d = E.shape
    out = np.empty_like(E)
    rows = np.repeat(np.arange(n), d)
    out[rows, E.astype(np.intp).ravel()] = E[:, np.array(h.images, dtype=np.intp)].ravel()
    return out


def _cycle_type_multiset(H: PermGroup):
    return Counter(tuple(cycle_type(p)) for p in H.elements())


def are_conjugate_subgroups(G: PermGroup, H1: PermGroup, H2: PermGroup) -> bool:
    """Whether g H1 g^-1 = H2 for some g in G (element sweep after pruning)."""
    if H1.order() != H2.order():
        return False
    if _cycle_type_multiset(H1) != _cycle_type_multiset(H2):
        return False
    E = G.elements_array
    ok = np.ones(len(E), dtype=bool)
    for h in H1.gens:
        ok &= H2.index_rows(_conjugate_all(E, h)) >= 0
        if not ok.any():
            return False
    return bool(ok.any())


def direct_product(*groups: PermGroup):
    """Product on disjoint point blocks; returns (group, offsets)."""
    degree = sum(G.degree for G in groups)
    gens, offsets, off = [], [], 0
    for G in groups:
        offsets.append(off)
        gens += [g.shift(off, degree) for g in G.gens]
        off += G.degree
    return PermGroup(gens, degree, name=" x ".join(G.name or "?" for G in groups)), offsets


def subgroups(G: PermGroup, limit: int = 5000):
    """Every subgroup of a small group, as sorted tuples of element indices.

    Joins cyclic subgroups until nothing new appears; fine up to a few
    hundred elements.
    """
    if G.order() > limit:
        raise BoundExceeded(f"subgroup lattice limited to order {limit}", partial=G.order())
    T = G.table
    n = len(T)
    cyclic = {frozenset(_generated_set(T, [a])) for a in range(n)}
    found = set(cyclic)
    frontier = list(cyclic)
    while frontier:
        nxt = []
        for H in frontier:
            for C in cyclic:
                if C <= H:
                    continue
                J = frozenset(_generated_set(T, list(H | C)))
                if J not in found:
                    found.add(J)
                    nxt.append(J)
        frontier = nxt
    return sorted((tuple(sorted(H)) for H in found), key=lambda h: (len(h), h))


def subgroup_classes(G: PermGroup, limit: int = 5000):
    """One representative per conjugacy class of subgroups (the lexicographically
    smallest member), ordered by size."""
    T = G.table
    inv = np.argmax(T == 0, axis=1)
    reps = []
    seen = set()
    for H in subgroups(G, limit):
        if H in seen:
            continue
        idx = np.array(H, dtype=np.intp)
        for g in range(len(T)):
            seen.add(tuple(sorted(T[T[g, idx], inv[g]].tolist())))
        reps.append(H)
    return reps


# ---------------------------------------------------------------------------
# homomorphisms from finite presentations


def eval_word(word, images):
    """Product of images along a word (images are Permutations)."""
    out = None
    for x in word:
        g = images[abs(x) - 1]
        if x < 0:
            g = g.inverse()
        out = g if out is None else out * g
    return out


def _element_orders(T: np.ndarray) -> np.ndarray:
    n = len(T)
    orders = np.zeros(n, dtype=np.int64)
    cur = np.arange(n)
    for k in range(1, n + 1):
        hit = (cur == 0) & (orders == 0)
        orders[hit] = k
        if orders.all():
            break
        cur = T[cur, np.arange(n)]
    return orders


def _generated_set(T, images, limit=None):
    """Subgroup generated by element indices (BFS on the table); stops once
    ``limit`` elements are reached."""
    seen = {0}
    frontier = [0]
    gens = list(set(images))
    while frontier:
        nxt = []
        for a in frontier:
            row = T[a]
            for g in gens:
                b = row[g]
                if b not in seen:
                    seen.add(b)
                    nxt.append(b)
        if limit is not None and len(seen) >= limit:
            break
        frontier = nxt
    return seen


class _HomSearch:
    """Backtracking over generator images in a group given by its table."""

    def __init__(self, pres: Presentation, T: np.ndarray):
        self.pres = pres
        self.T = T.tolist()
        self.n = len(T)
        self.inv = [row.index(0) for row in self.T]
        k = pres.ngens
        occ = Counter(abs(x) for r in pres.relators for x in r)
        self.order = sorted(range(1, k + 1), key=lambda g: (-occ[g], g))
        rank = {g: i for i, g in enumerate(self.order)}
        orders = _element_orders(T)
        # candidate filter from pure powers
        self.cands = []
        for g in self.order:
            exps = [len(r) for r in pres.relators if r and all(abs(x) == g for x in r)
                    and len(set(r)) == 1]
            allowed = [a for a in range(self.n) if all(e % int(orders[a]) == 0 for e in exps)]
            self.cands.append(allowed)
        # relators checked (or solved) at the depth of their last-assigned letter
        self.checks = [[] for _ in range(k)]
        self.solve = [None] * k
        for r in pres.relators:
            if not r:
                continue
            depth = max(rank[abs(x)] for x in r)
            g = self.order[depth]
            pos = [i for i, x in enumerate(r) if abs(x) == g]
            if len(pos) == 1 and self.solve[depth] is None:
                i = pos[0]
                # r = u x^e v  =>  x^e = u^-1 v^-1
                self.solve[depth] = (r[:i], r[i], r[i + 1:])
            else:
                self.checks[depth].append(r)

    def _eval(self, word, img):
        T, inv = self.T, self.inv
        acc = 0
        for x in word:
            a = img[abs(x)]
            acc = T[acc][a if x > 0 else inv[a]]
        return acc

    def run(self, want_epi=True, collect=False):
        k = self.pres.ngens
        img = {}
        homs = epis = 0
        found = []
        T, inv = self.T, self.inv

        def rec(depth):
            nonlocal homs, epis
            if depth == k:
                homs += 1
                if want_epi and len(_generated_set(T, list(img.values()), self.n)) == self.n:
                    epis += 1
                if collect:
                    found.append(tuple(img[g] for g in range(1, k + 1)))
                return
            g = self.order[depth]
            if self.solve[depth] is not None:
                u, x, v = self.solve[depth]
                val = T[inv[self._eval(u, img)]][inv[self._eval(v, img)]]
                if x < 0:
                    val = inv[val]
                cands = [val] if val in self._allowed(depth) else []
            else:
                cands = self.cands[depth]
            for a in cands:
                img[g] = a
                if all(self._eval(r, img) == 0 for r in self.checks[depth]):
                    rec(depth + 1)
            img.pop(g, None)

        if k == 0:
            homs = 1
            epis = 1 if self.n == 1 else 0
            found = [()] if collect else []
        else:
            rec(0)
        return homs, epis, found

    def _allowed(self, depth):
        cache = self.__dict__.setdefault("_allowed_sets", {})
        if depth not in cache:
            cache[depth] = set(self.cands[depth])
        return cache[depth]


def _target_table(Q):
    if isinstance(Q, PermGroup):
        return Q.table
    return np.asarray(Q)


def hom_count(P: Presentation, Q) -> tuple:
    """(homs, epis) from the presented group to Q (PermGroup or Cayley table)."""
    homs, epis, _ = _HomSearch(P, _target_table(Q)).run()
    return homs, epis


def homomorphisms(P: Presentation, Q):
    """All generator-image tuples (element indices of Q) defining homomorphisms."""
    return _HomSearch(P, _target_table(Q)).run(want_epi=False, collect=True)[2]


# ---------------------------------------------------------------------------
# isomorphism of small groups


def _table_invariants(T):
    orders = _element_orders(np.asarray(T))
    n = len(T)
    Tn = np.asarray(T)
    commuting = int((Tn == Tn.T).sum())
    centre = int(np.all(Tn == Tn.T, axis=1).sum())
    return n, tuple(sorted(Counter(orders.tolist()).items())), centre, commuting


def _small_gens_table(T):
    n = len(T)
    orders = _element_orders(np.asarray(T))
    gens: list = []
    sub = {0}
    while len(sub) < n:
        outside = [a for a in range(n) if a not in sub]
        gens.append(max(outside, key=lambda a: (int(orders[a]), -a)))
        sub = _generated_set(T, gens)
    return gens


def _extend_map(T1, T2, gens, imgs):
    """Extend generator images to a homomorphism on the group of T1, or None."""
    phi = {0: 0}
    frontier = [0]
    while frontier:
        nxt = []
        for a in frontier:
            for g, h in zip(gens, imgs):
                b = T1[a][g]
                c = T2[phi[a]][h]
                if b in phi:
                    if phi[b] != c:
                        return None
                else:
                    phi[b] = c
                    nxt.append(b)
        frontier = nxt
    return phi


def tables_isomorphic(T1, T2) -> bool:
    T1 = np.asarray(T1).tolist()
    T2 = np.asarray(T2).tolist()
    if _table_invariants(T1) != _table_invariants(T2):
        return False
    gens = _small_gens_table(T1)
    o1 = _element_orders(np.asarray(T1))
    o2 = _element_orders(np.asarray(T2))
    pools = [[b for b in range(len(T2)) if o2[b] == o1[g]] for g in gens]
    for imgs in product(*pools):
        phi = _extend_map(T1, T2, gens, imgs)
        if phi is not None and len(set(phi.values())) == len(T1):
            return True
    return False


def is_isomorphic_small(G1: PermGroup, G2: PermGroup, bound: int = 5000) -> bool:
    if G1.order() != G2.order():
        return False
    if G1.order() > bound:
        raise BoundExceeded(f"isomorphism test limited to order {bound}", partial=G1.order())
    return tables_isomorphic(G1.table, G2.table)


# ---------------------------------------------------------------------------
# presentations of permutation groups


def derive_presentation(G: PermGroup, max_cosets: int = 2_000_000) -> Presentation:
    """A presentation on G.gens, verified to define a group of order |G|.

    First tries generator orders plus orders of pairwise products, checked by
    coset enumeration; falls back to spanning-tree (Schreier) relators for
    small groups.
    """
    k = len(G.gens)
    names = tuple(default_names(k))
    if k == 0:
        return Presentation(0, (), ())
    rels = []
    for i, g in enumerate(G.gens):
        rels.append((i + 1,) * g.order())
    for i in range(k):
        for j in range(i + 1, k):
            o = (G.gens[i] * G.gens[j]).order()
            rels.append((i + 1, j + 1) * o)
    P = Presentation(k, tuple(rels), names)
    # these relators often present an infinite group, so give up early
    budget = min(max_cosets, max(10_000, 64 * G.order()))
    try:
        if order_upper_bound(P, budget) == G.order():
            return P
    except CosetLimitExceeded:
        pass
    return _spanning_tree_presentation(G, names)


def _spanning_tree_presentation(G: PermGroup, names) -> Presentation:
    if G.order() > 20000:
        raise BoundExceeded("spanning-tree presentation limited to order 20000", partial=G.order())
    E = G.elements_array
    words = [tuple(s + 1 for s in G.word_of(i)) for i in range(len(E))]
    rels = set()
    for s, g in enumerate(G.gens):
        kids = G.index_rows(E[:, np.array(g.images, dtype=np.intp)])
        for i, j in enumerate(kids):
            r = words[i] + (s + 1,) + tuple(-x for x in reversed(words[j]))
            r = reduce_word(r)
            if r:
                rels.add(r)
    return Presentation(len(G.gens), tuple(sorted(rels, key=lambda r: (len(r), r))), names)


def group_of_presentation(P: Presentation, max_cosets: int = 2_000_000) -> PermGroup:
    """The presented group acting on the cosets of the trivial subgroup.

    Generator i acts by c -> c g_i^-1 so that products compose on the left
    like every other PermGroup. Raises CosetLimitExceeded for large or
    infinite groups.
    """
    table = coset_table(P, (), max_cosets)
    n = len(table)
    gens = [Permutation(tuple(row[2 * s + 1] for row in table)) for s in range(P.ngens)]
    if not gens:
        return PermGroup([], max(n, 1))
    return PermGroup(gens, n)


def subgroup_class_words(G: PermGroup, limit: int = 5000):
    """Conjugacy class representatives of subgroups, each as the list of its
    elements written as positive words (signed 1-based letters) in G.gens."""
    return [[tuple(s + 1 for s in G.word_of(int(i))) for i in H] for H in subgroup_classes(G, limit)]

