from collections import Counter
from itertools import combinations

import numpy as np
import pytest

from coxkit.catalog import CENSUS, MAX_ORDER, catalog_entry, group_name, load_catalog
from coxkit.permgrp import PermGroup, Permutation, tables_isomorphic

CATALOG = load_catalog()


def partitions(n, largest=None):
    largest = n if largest is None else largest
    if n == 0:
        return 1
    return sum(partitions(n - k, k) for k in range(1, min(n, largest) + 1))


def abelian_count(n):
    """Number of abelian groups of order n: product of p(e) over prime powers p^e."""
    out, p = 1, 2
    while n > 1:
        e = 0
        while n % p == 0:
            n //= p
            e += 1
        out *= partitions(e)
        p += 1
    return out


def test_census():
    counts = Counter(e.order for e in CATALOG)
    assert dict(counts) == CENSUS
    assert len(CATALOG) == 93 and max(counts) == MAX_ORDER


def test_ids_are_sequential_and_sorted():
    assert [e.id for e in CATALOG] == sorted((e.id for e in CATALOG), key=lambda s: tuple(map(int, s.split("."))))
    for n in CENSUS:
        assert [e.id for e in CATALOG if e.order == n] == [f"{n}.{k}" for k in range(1, CENSUS[n] + 1)]


@pytest.mark.parametrize("entry", CATALOG, ids=lambda e: e.id)
def test_entry_is_a_group_of_the_stated_order(entry):
    T = entry.table
    n = entry.order
    assert T.shape == (n, n)
    assert all(sorted(row) == list(range(n)) for row in T.tolist())
    assert all(sorted(col) == list(range(n)) for col in T.T.tolist())
    assert (T[0] == np.arange(n)).all()
    # associativity
    a, b, c = np.meshgrid(np.arange(n), np.arange(n), np.arange(n), indexing="ij")
    assert (T[T[a, b], c] == T[a, T[b, c]]).all()


def test_abelian_counts_match_partition_formula():
    for n in CENSUS:
        abelian = sum(1 for e in CATALOG if e.order == n and (e.table == e.table.T).all())
        assert abelian == abelian_count(n), n


@pytest.mark.parametrize("n", [k for k, v in CENSUS.items() if v > 1])
def test_groups_of_each_order_pairwise_non_isomorphic(n):
    group = [e for e in CATALOG if e.order == n]
    for e1, e2 in combinations(group, 2):
        assert not tables_isomorphic(e1.table, e2.table), (e1.id, e2.id)


def test_known_ids():
    assert catalog_entry("2.1").name == "C2"
    assert catalog_entry("4.1").name == "C4"
    assert catalog_entry("4.2").name == "C2 x C2"
    assert catalog_entry("6.2").name == "S3"
    assert catalog_entry("S3").id == "6.2"
    with pytest.raises(KeyError):
        catalog_entry("nope")


def test_group_name_of_fresh_tables():
    P = Permutation.parse
    assert group_name(PermGroup([P("(1 2 3 4 5 6)")], 6).table) == "C6"
    assert group_name(PermGroup([P("(1 2)", 3), P("(1 2 3)", 3)], 3).table) == "S3"
    assert group_name(PermGroup([P("(1 2 3 4)"), P("(1 3)", 4)], 4).table) == "D8"
    assert group_name(PermGroup([P("(1 2)", 4), P("(3 4)", 4)], 4).table) == "C2 x C2"

