"""Shared fixtures and brute-force reference implementations.

The helpers here recompute ranks, circuits and closures straight from the
definitions, in plain Python, so the tests never trust the library's
vectorized code to check itself.
"""
import itertools
import random

import numpy as np
import pytest

from matroid_guts import (
    Matroid,
    MatroidSpec,
    are_independent_clones,
    build_matroid,
    enumerate_extensions,
)
from matroid_guts import catalog

SMALL_CATALOG = ["vamos", "vamos-plus", "k4", "prism", "two-triangles"]


@pytest.fixture(scope="session")
def vamos():
    return build_matroid(catalog.vamos())


@pytest.fixture(scope="session")
def vamos_plus():
    return build_matroid(catalog.vamos_plus())


@pytest.fixture(scope="session")
def k4():
    return build_matroid(catalog.k4())


@pytest.fixture(scope="session")
def prism():
    return build_matroid(catalog.prism())


@pytest.fixture(scope="session")
def two_triangles():
    return build_matroid(catalog.two_triangles())


def catalog_matroid(name):
    return build_matroid(catalog.get(name))


def bits(mask):
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def greedy_rank(n, independent):
    """Rank table by greedily growing an independent set inside each subset."""
    table = []
    for mask in range(1 << n):
        got = 0
        for i in bits(mask):
            if independent(got | 1 << i):
                got |= 1 << i
        table.append(bin(got).count("1"))
    return table


def rank_from_circuit_list(n, circuit_masks):
    return greedy_rank(n, lambda s: not any(c & s == c for c in circuit_masks))


def naive_circuits(table, n):
    """Minimal dependent sets, straight from the rank table."""
    dep = [m for m in range(1 << n) if table[m] < bin(m).count("1")]
    return sorted((d for d in dep if all(table[d & ~(1 << i)] == bin(d).count("1") - 1
                                          for i in bits(d))),
                  key=lambda s: (bin(s).count("1"), s))


def naive_closure(table, n, x):
    return x | sum(1 << e for e in range(n) if table[x | 1 << e] == table[x])


def axiom_violations(table, n):
    """Count R1-R3 failures over all subsets and all pairs (numpy over Y)."""
    t = np.asarray(table, dtype=np.int64)
    idx = np.arange(1 << n)
    pc = np.array([bin(i).count("1") for i in range(1 << n)])
    bad = int(t[0] != 0) + int(((t < 0) | (t > pc)).sum())
    for x in range(1 << n):
        union, meet = idx | x, idx & x
        sub = (idx & x) == x  # supersets Y of X
        bad += int((t[idx[sub]] < t[x]).sum())
        bad += int((t[union] + t[meet] > t[x] + t).sum())
    return bad


def gf2_matroid(columns, labels=None):
    """Binary matroid of the given column vectors (ints), rank by elimination."""
    n = len(columns)
    labels = labels or [f"e{i}" for i in range(n)]
    table = np.zeros(1 << n, dtype=np.int16)
    for mask in range(1, 1 << n):
        basis = []
        for i in bits(mask):
            v = columns[i]
            for b in basis:
                v = min(v, v ^ b)
            if v:
                basis.append(v)
        table[mask] = len(basis)
    return Matroid(labels, table)


PAIRS = [("a1", "a1p"), ("a2", "a2p"), ("b1", "b1p"), ("b2", "b2p")]
CROSS = [(0, 2), (0, 3), (1, 2), (1, 3)]  # the four A-pair/B-pair unions


def vamos_like(cross_subset, extra=()):
    """Rank-4 sparse paving matroid on the Vámos ground set.

    A = a-pairs and B = b-pairs are always circuit-hyperplanes; the cross
    unions P_i u P_j listed in ``cross_subset`` are added as well.
    """
    hyper = [PAIRS[0] + PAIRS[1], PAIRS[2] + PAIRS[3]]
    hyper += [PAIRS[i] + PAIRS[j] for i, j in cross_subset]
    hyper += list(extra)
    elements = [e for p in PAIRS for e in p]
    return build_matroid(MatroidSpec("sparse_paving", elements, hyper, rank=4))


def all_vamos_like():
    for k in range(5):
        for combo in itertools.combinations(CROSS, k):
            yield combo, vamos_like(combo)


def random_sparse_paving(rng: random.Random, n, r, tries=12):
    chosen = []
    candidates = list(itertools.combinations(range(n), r))
    rng.shuffle(candidates)
    for c in candidates[:tries * 4]:
        if all(len(set(c) & set(s)) <= r - 2 for s in chosen):
            chosen.append(c)
        if len(chosen) >= tries:
            break
    elements = [f"e{i}" for i in range(n)]
    return build_matroid(MatroidSpec("sparse_paving", elements,
                                     [[elements[i] for i in s] for s in chosen], rank=r))


def two_clone_extensions(m, a, b):
    """Matroids adding two independent clones in cl(A) and cl(B), by exhaustive search."""
    found = []
    for m1 in enumerate_extensions(m, required=[m.closure(a), m.closure(b)], label="x"):
        for m2 in enumerate_extensions(m1, required=[m1.closure(a), m1.closure(b)], label="y"):
            if are_independent_clones(m2, "x", "y"):
                found.append(m2)
    return found


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
