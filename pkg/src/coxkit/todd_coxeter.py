"""Coset enumeration (HLT strategy with coincidence processing)."""
from __future__ import annotations

from .presentation import Presentation

__all__ = ["CosetLimitExceeded", "coset_table", "subgroup_index", "order_upper_bound"]


class CosetLimitExceeded(RuntimeError):
    pass


def _col(x):
    return 2 * (abs(x) - 1) + (x < 0)


def coset_table(pres: Presentation, subgroup=(), max_cosets: int = 2_000_000):
    """Return the compacted coset table of <subgroup> in the presented group.

    Rows are cosets (row 0 is the subgroup itself), columns are letters in
    the order g1, g1^-1, g2, g2^-1, ...
    """
    ncols = 2 * pres.ngens
    inv_col = [c ^ 1 for c in range(ncols)]
    table = [[None] * ncols]
    parent = [0]
    rels = [[_col(x) for x in r] for r in pres.relators]
    subs = [[_col(x) for x in w] for w in subgroup]

    def rep(c):
        root = c
        while parent[root] != root:
            root = parent[root]
        while parent[c] != root:
            parent[c], c = root, parent[c]
        return root

    def define(c, x):
        if len(table) >= max_cosets:
            raise CosetLimitExceeded(f"more than {max_cosets} cosets")
        d = len(table)
        table.append([None] * ncols)
        parent.append(d)
        table[c][x] = d
        table[d][inv_col[x]] = c

    def coincidence(a, b):
        queue = []

        def merge(k, l):
            k, l = rep(k), rep(l)
            if k != l:
                if k > l:
                    k, l = l, k
                parent[l] = k
                queue.append(l)

        merge(a, b)
        i = 0
        while i < len(queue):
            e = queue[i]
            i += 1
            row = table[e]
            for x in range(ncols):
                f = row[x]
                if f is None:
                    continue
                ix = inv_col[x]
                if table[f][ix] == e:
                    table[f][ix] = None
                e1, f1 = rep(e), rep(f)
                if table[e1][x] is not None:
                    merge(f1, table[e1][x])
                elif table[f1][ix] is not None:
                    merge(e1, table[f1][ix])
                else:
                    table[e1][x] = f1
                    table[f1][ix] = e1

    def scan_and_fill(c, w):
        if not w:
            return
        f, b = c, c
        i, j = 0, len(w) - 1
        while True:
            while i <= j and table[f][w[i]] is not None:
                f = table[f][w[i]]
                i += 1
            if i > j:
                if f != b:
                    coincidence(f, b)
                return
            while j >= i and table[b][inv_col[w[j]]] is not None:
                b = table[b][inv_col[w[j]]]
                j -= 1
            if j < i:
                coincidence(f, b)
                return
            if i == j:
                table[f][w[i]] = b
                table[b][inv_col[w[i]]] = f
                return
            define(f, w[i])

    for w in subs:
        scan_and_fill(0, w)
    c = 0
    while c < len(table):
        for r in rels:
            if parent[c] != c:
                break
            scan_and_fill(c, r)
        if parent[c] == c:
            for x in range(ncols):
                if parent[c] != c:
                    break
                if table[c][x] is None:
                    define(c, x)
        c += 1

    live = [k for k in range(len(table)) if parent[k] == k]
    renum = {k: i for i, k in enumerate(live)}
    return [[renum[rep(table[k][x])] for x in range(ncols)] for k in live]


def subgroup_index(pres: Presentation, subgroup=(), max_cosets: int = 2_000_000) -> int:
    return len(coset_table(pres, subgroup, max_cosets))


def order_upper_bound(pres: Presentation, max_cosets: int = 2_000_000) -> int:
    """Upper bound for the order of the presented group.

    Uses |G| = [G : <g1..g(n-1)>] * |<g1..g(n-1)>|, bounding the subgroup by
    the group presented on g1..g(n-1) with the relators that only mention
    those generators. The bound is exact when those relators already present
    each subgroup in the chain (for example for Coxeter presentations).
    """
    total = 1
    while pres.ngens:
        n = pres.ngens
        sub = [(k,) for k in range(1, n)]
        total *= subgroup_index(pres, sub, max_cosets)
        rels = tuple(r for r in pres.relators if all(abs(x) < n for x in r))
        pres = Presentation(n - 1, rels, pres.names[: n - 1])
    return total
