"""Built-in matroids.

Element labels:

* ``vamos`` / ``vamos-plus``: a1 a1p a2 a2p b1 b1p b2 b2p (``p`` marks a prime).
  ``vamos-plus`` adds the hyperplane {a2,a2p,b2,b2p}.
* ``k4``: edges of K4 on vertices 1..4, labelled by their endpoints (12, 13, ...).
* ``prism``: edges of the triangular prism with triangles 123 and 456 and rungs
  14, 25, 36.
* ``two-triangles``: direct sum of two 3-circuits a1 a2 a3 and b1 b2 b3.
* ``uniform(r,n)``: U_{r,n} on elements 1..n (also accepted as ``uniform-r-n``).
"""
from __future__ import annotations

import itertools
import re

import numpy as np

from .errors import InvalidSpec, TooLarge
from .matroid import MAX_ELEMENTS, Matroid, MatroidSpec

VAMOS_ELEMENTS = ("a1", "a1p", "a2", "a2p", "b1", "b1p", "b2", "b2p")
VAMOS_HYPERPLANES = (
    ("a1", "a1p", "a2", "a2p"),
    ("a1", "a1p", "b1", "b1p"),
    ("a1", "a1p", "b2", "b2p"),
    ("a2", "a2p", "b1", "b1p"),
    ("b1", "b1p", "b2", "b2p"),
)

K4_EDGES = ((1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4))
PRISM_EDGES = ((1, 2), (1, 3), (2, 3), (1, 4), (2, 5), (3, 6), (4, 5), (4, 6), (5, 6))


def edge_label(u, v) -> str:
    return f"{u}{v}"


def graphic_matroid(edges, labels=None, name: str = "") -> Matroid:
    """Cycle matroid of a multigraph given as a list of (u, v) pairs.

    Ranks come from a union-find forest count on each edge subset, independent
    of any circuit or basis listing.
    """
    edges = list(edges)
    m = len(edges)
    if m > MAX_ELEMENTS:
        raise TooLarge(f"{m} edges exceeds the limit of {MAX_ELEMENTS}")
    if labels is None:
        labels = [edge_label(u, v) for u, v in edges]
    table = np.zeros(1 << m, dtype=np.int16)
    for mask in range(1, 1 << m):
        parent = {}

        def find(x):
            while parent.get(x, x) != x:
                x = parent[x]
            return x

        r = 0
        for i in range(m):
            if mask >> i & 1:
                u, v = find(edges[i][0]), find(edges[i][1])
                if u != v:
                    parent[u] = v
                    r += 1
        table[mask] = r
    return Matroid(labels, table, name=name)


def vamos() -> MatroidSpec:
    return MatroidSpec("sparse_paving", VAMOS_ELEMENTS, VAMOS_HYPERPLANES, rank=4, name="vamos")


def vamos_plus() -> MatroidSpec:
    sets = VAMOS_HYPERPLANES + (("a2", "a2p", "b2", "b2p"),)
    return MatroidSpec("sparse_paving", VAMOS_ELEMENTS, sets, rank=4, name="vamos-plus")


def k4() -> MatroidSpec:
    return graphic_matroid(K4_EDGES).to_spec(name="k4")


def prism() -> MatroidSpec:
    return graphic_matroid(PRISM_EDGES).to_spec(name="prism")


def two_triangles() -> MatroidSpec:
    elements = ("a1", "a2", "a3", "b1", "b2", "b3")
    return MatroidSpec("circuits", elements, [elements[:3], elements[3:]], name="two-triangles")


def uniform(r: int, n: int) -> MatroidSpec:
    if not 0 <= r <= n:
        raise InvalidSpec(f"uniform({r},{n}) needs 0 <= r <= n")
    elements = tuple(str(i) for i in range(1, n + 1))
    bases = list(itertools.combinations(elements, r))
    return MatroidSpec("bases", elements, bases, name=f"uniform({r},{n})")


CATALOG = {
    "vamos": vamos,
    "vamos-plus": vamos_plus,
    "k4": k4,
    "prism": prism,
    "two-triangles": two_triangles,
}

_UNIFORM = re.compile(r"^(?:uniform\((\d+),\s*(\d+)\)|uniform-(\d+)-(\d+))$")


def names() -> list:
    return list(CATALOG) + ["uniform(r,n)"]


def get(name: str) -> MatroidSpec:
    if name in CATALOG:
        return CATALOG[name]()
    hit = _UNIFORM.match(name)
    if hit:
        r, n = (int(g) for g in hit.groups() if g is not None)
        return uniform(r, n)
    raise KeyError(f"no catalog entry {name!r}; known: {', '.join(names())}")
