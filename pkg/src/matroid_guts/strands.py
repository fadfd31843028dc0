"""Strands of an exact 3-separation and the bipartite strand graph."""
from __future__ import annotations

from dataclasses import dataclass, field

import networkx as nx
import numpy as np

from .connectivity import is_exact_3_separation, local_conn
from .errors import NotAdjacent, NotAStrand, NotExact3Separation
from .matroid import Matroid, popcounts


def require_exact_3_separation(m: Matroid, A, B=None) -> tuple:
    """Resolve (A, B) to masks, B defaulting to the complement of A."""
    a = m.mask(A)
    b = m.ground & ~a if B is None else m.mask(B)
    if not is_exact_3_separation(m, a, b):
        raise NotExact3Separation(
            f"({m.labels_of(a)}, {m.labels_of(b)}) is not an exact 3-separation")
    return a, b


@dataclass(frozen=True)
class Strand:
    side: str  # "A" or "B"
    members: int


def strands(m: Matroid, A, B=None, side: str = "A") -> list:
    """Minimal subsets of one side whose local connectivity with the other side is one.

    Ordered by size, then mask.
    """
    if side not in ("A", "B"):
        raise ValueError("side must be 'A' or 'B'")
    a, b = require_exact_3_separation(m, A, B)
    own, other = (a, b) if side == "A" else (b, a)
    return [Strand(side, s) for s in _minimal_connected_subsets(m, own, other)]


def _minimal_connected_subsets(m: Matroid, own: int, other: int) -> list:
    idx = np.arange(1 << m.n, dtype=np.int64)
    sub = idx[(idx & ~own) == 0]
    connected = np.zeros(1 << m.n, dtype=bool)
    # adding one element raises this local connectivity by at most one,
    # so minimal sets with value >= 1 have value exactly 1
    connected[sub] = (m.table[sub] + m.rank(other) - m.table[sub | other]) >= 1
    minimal = connected[sub].copy()
    for e in range(m.n):
        bit = 1 << e
        if own & bit:
            minimal &= ((sub & bit) == 0) | ~connected[sub ^ bit]
    found = sub[minimal]
    order = np.lexsort((found, popcounts(m.n)[found]))
    return [int(s) for s in found[order]]


@dataclass(frozen=True)
class Bunch:
    a_indices: tuple
    b_indices: tuple
    complete: bool


@dataclass
class StrandGraph:
    A: int
    B: int
    a_strands: list
    b_strands: list
    edges: list
    component_id: dict = field(default_factory=dict)

    def a_index(self, members: int):
        return next((i for i, s in enumerate(self.a_strands) if s.members == members), None)

    def b_index(self, members: int):
        return next((j for j, s in enumerate(self.b_strands) if s.members == members), None)

    def has_edge(self, i: int, j: int) -> bool:
        return (i, j) in set(self.edges)


def strand_graph(m: Matroid, A, B=None) -> StrandGraph:
    a, b = require_exact_3_separation(m, A, B)
    a_str = strands(m, a, b, "A")
    b_str = strands(m, a, b, "B")
    edges = [(i, j) for i, s in enumerate(a_str) for j, t in enumerate(b_str)
             if local_conn(m, s.members, t.members) == 1]
    g = nx.Graph()
    g.add_nodes_from(("A", i) for i in range(len(a_str)))
    g.add_nodes_from(("B", j) for j in range(len(b_str)))
    g.add_edges_from((("A", i), ("B", j)) for i, j in edges)
    order = list(g.nodes)
    comps = sorted(nx.connected_components(g), key=lambda c: min(order.index(v) for v in c))
    component_id = {v: k for k, comp in enumerate(comps) for v in comp}
    return StrandGraph(a, b, a_str, b_str, edges, component_id)


def _bunch_of(graph: StrandGraph, cid: int) -> Bunch:
    members = [v for v, k in graph.component_id.items() if k == cid]
    ai = tuple(sorted(i for s, i in members if s == "A"))
    bi = tuple(sorted(j for s, j in members if s == "B"))
    edges = set(graph.edges)
    complete = all((i, j) in edges for i in ai for j in bi)
    return Bunch(ai, bi, complete)


def bunches(graph: StrandGraph) -> list:
    """Components of the strand graph that have at least one edge."""
    with_edges = sorted({graph.component_id[("A", i)] for i, _ in graph.edges})
    return [_bunch_of(graph, cid) for cid in with_edges]


def is_complete(bunch: Bunch) -> bool:
    return bunch.complete


def special_strands(graph: StrandGraph, A0, B0) -> Bunch:
    """The bunch containing the adjacent strands A0 and B0 (given as masks)."""
    i, j = graph.a_index(int(A0)), graph.b_index(int(B0))
    if i is None:
        raise NotAStrand(f"{A0:#x} is not an A-strand")
    if j is None:
        raise NotAStrand(f"{B0:#x} is not a B-strand")
    if not graph.has_edge(i, j):
        raise NotAdjacent("the two strands have local connectivity 0")
    return _bunch_of(graph, graph.component_id[("A", i)])


def special_strand_masks(graph: StrandGraph, bunch: Bunch) -> list:
    return ([graph.a_strands[i].members for i in bunch.a_indices]
            + [graph.b_strands[j].members for j in bunch.b_indices])
