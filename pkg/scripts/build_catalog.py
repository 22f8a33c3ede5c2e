"""Regenerate src/coxkit/data/small_groups.json.

Every group of order <= 31 is solvable, so it has a normal subgroup N of
prime index p with G = <N, t>. Such a G is determined by an automorphism a
of N (conjugation by t) and an element z = t^p of N with a(z) = z and
a^p = conjugation by z. Running over all (N, a, z) and discarding
isomorphic duplicates yields every isomorphism class.

Usage: python scripts/build_catalog.py [--max-order 31] [--out PATH]
"""
from __future__ import annotations

import argparse
import itertools
import json
import time
from collections import Counter
from pathlib import Path

import numpy as np

from coxkit.catalog import CENSUS, group_name
from coxkit.permgrp import _element_orders, _extend_map, _generated_set, tables_isomorphic


def inverse_list(T):
    return [row.index(0) for row in T]


def small_gens(T):
    n = len(T)
    orders = _element_orders(np.asarray(T)).tolist()
    gens, H = [], {0}
    while len(H) < n:
        best = max((a for a in range(n) if a not in H),
                   key=lambda a: (len(_generated_set(T, gens + [a])), orders[a], -a))
        gens.append(best)
        H = _generated_set(T, gens)
    return gens


def automorphisms(T):
    n = len(T)
    gens = small_gens(T)
    orders = _element_orders(np.asarray(T)).tolist()
    pools = [[b for b in range(n) if orders[b] == orders[g]] for g in gens]
    out = []
    for imgs in itertools.product(*pools):
        phi = _extend_map(T, T, gens, imgs)
        if phi is not None and len(set(phi.values())) == n:
            out.append([phi[x] for x in range(n)])
    return out


def cyclic_extensions(T, p):
    n = len(T)
    inv = inverse_list(T)
    out = []
    for a in automorphisms(T):
        ap = list(range(n))
        for _ in range(p):
            ap = [a[x] for x in ap]
        for z in range(n):
            if a[z] == z and all(ap[x] == T[T[z][x]][inv[z]] for x in range(n)):
                out.append((a, z))
    return out


def build_extension(T, a, z, p):
    """Table of N<t> with elements x t^i stored at index i*n + x."""
    n = len(T)
    apow = [list(range(n))]
    for _ in range(1, p):
        apow.append([a[x] for x in apow[-1]])
    N = n * p
    G = [[0] * N for _ in range(N)]
    for i in range(p):
        for x in range(n):
            row = G[i * n + x]
            for j in range(p):
                for y in range(n):
                    prod = T[x][apow[i][y]]
                    k = i + j
                    if k >= p:
                        prod = T[prod][z]
                        k -= p
                    row[j * n + y] = k * n + prod
    return G


def invariant(T):
    A = np.asarray(T)
    orders = tuple(sorted(Counter(_element_orders(A).tolist()).items()))
    comm = A == A.T
    return orders, int(comm.all(axis=1).sum()), int(comm.sum())


def primes_dividing(n):
    return [p for p in range(2, n + 1) if n % p == 0 and all(p % q for q in range(2, p))]


def sort_key(T):
    A = np.asarray(T)
    abelian = bool((A == A.T).all())
    orders = _element_orders(A)
    return (not abelian, -int(orders.max()))


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-order", type=int, default=31)
    ap.add_argument("--out", type=Path,
                    default=Path(__file__).resolve().parents[1] / "src/coxkit/data/small_groups.json")
    args = ap.parse_args(argv)

    cat = {1: [[[0]]]}
    t0 = time.time()
    for n in range(2, args.max_order + 1):
        found, invs = [], []
        for p in primes_dividing(n):
            for N in cat[n // p]:
                for a, z in cyclic_extensions(N, p):
                    G = build_extension(N, a, z, p)
                    iv = invariant(G)
                    if any(iv == jv and tables_isomorphic(G, H) for H, jv in zip(found, invs)):
                        continue
                    found.append(G)
                    invs.append(iv)
        found.sort(key=sort_key)
        if n in CENSUS and len(found) != CENSUS[n]:
            raise SystemExit(f"order {n}: found {len(found)} groups, census says {CENSUS[n]}")
        cat[n] = found
        print(f"order {n:2d}: {len(found):2d} groups  ({time.time() - t0:.1f}s)", flush=True)

    entries = []
    for n in sorted(cat):
        for k, T in enumerate(cat[n], start=1):
            gens = small_gens(T)
            # left regular action: a sends x to a*x
            perms = [[T[g][x] for x in range(n)] for g in gens]
            entries.append({"id": f"{n}.{k}", "order": n, "name": group_name(T), "gens": perms})
    args.out.parent.mkdir(parents=True, exist_ok=True)
    args.out.write_text(json.dumps({"max_order": args.max_order, "groups": entries}, indent=0) + "\n")
    print(f"wrote {len(entries)} groups to {args.out}")


if __name__ == "__main__":
    main()
