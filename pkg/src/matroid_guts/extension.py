"""Single-element extensions, the guts-line frame, and pinned guts points.

Every extension here appends its new element as the highest-index element,
so masks over the original ground set keep their meaning in the result.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Iterator

import networkx as nx
import numpy as np

from .connectivity import is_exact_3_separation, local_conn
from .errors import (
    AxiomFailure,
    CloneCheckFailure,
    NotAFlat,
    NotAModularCut,
    NotExtendable,
    PlanInvalid,
    PreconditionFailure,
    StepBlocked,
    SubmodularityFailure,
    TooLarge,
)
from .matroid import (
    Matroid,
    are_independent_clones,
    find_axiom_violation,
    fresh_label,
    iter_bits,
    matroids_equal,
)
from .strands import (
    require_exact_3_separation,
    special_strand_masks,
    special_strands,
    strand_graph,
    strands,
)

log = logging.getLogger(__name__)

DEFAULT_MAX_FLATS = 128


@dataclass(frozen=True)
class ModularCut:
    flats: frozenset

    def __contains__(self, flat) -> bool:
        return flat in self.flats

    def __len__(self) -> int:
        return len(self.flats)

    def __iter__(self):
        return iter(sorted(self.flats))

    def minimal_members(self) -> list:
        return sorted(f for f in self.flats
                      if not any(g != f and g & f == g for g in self.flats))


class _FlatLattice:
    """Flats of a matroid with the containment and modular-pair data a cut search needs."""

    def __init__(self, m: Matroid):
        self.flats = m.flats()
        self.pos = {f: k for k, f in enumerate(self.flats)}
        self.ranks = [m.rank(f) for f in self.flats]
        k = len(self.flats)
        self.up = [0] * k
        self.modular = [0] * k
        self.meet = {}
        for i, f in enumerate(self.flats):
            for j, g in enumerate(self.flats):
                if f & g == f:
                    self.up[i] |= 1 << j
                if m.rank(f) + m.rank(g) == m.rank(f | g) + m.rank(f & g):
                    self.modular[i] |= 1 << j
                    self.meet[i, j] = self.pos[f & g]

    def bits(self, flats: Iterable[int]) -> int:
        out = 0
        for f in flats:
            out |= 1 << self.pos[f]
        return out

    def members(self, bits: int) -> frozenset:
        return frozenset(self.flats[i] for i in iter_bits(bits))

    def close(self, cut: int, seeds: Iterable[int]) -> int:
        """Smallest modular cut containing the (closed) ``cut`` and the seed flat indices."""
        queue = list(seeds)
        while queue:
            i = queue.pop()
            if cut >> i & 1:
                continue
            cut |= 1 << i
            queue.extend(iter_bits(self.up[i] & ~cut))
            queue.extend(self.meet[i, j] for j in iter_bits(self.modular[i] & cut))
        return cut

    def is_cut(self, bits: int) -> bool:
        for i in iter_bits(bits):
            if self.up[i] & ~bits:
                return False
            for j in iter_bits(self.modular[i] & bits):
                if not bits >> self.meet[i, j] & 1:
                    return False
        return True


def _lattice(m: Matroid) -> _FlatLattice:
    return m._cached("flat_lattice", lambda: _FlatLattice(m))


def _check_flats(m: Matroid, flats) -> list:
    out = []
    for f in flats:
        f = m.mask(f)
        if not m.is_flat(f):
            raise NotAFlat(f"{m.labels_of(f)} is not a flat")
        out.append(f)
    return out


def is_modular_cut(m: Matroid, flats) -> bool:
    lat = _lattice(m)
    return lat.is_cut(lat.bits(_check_flats(m, flats)))


def generated_modular_cut(m: Matroid, generators) -> ModularCut:
    """Least family of flats containing the generators, closed upward and under modular meets."""
    lat = _lattice(m)
    gens = _check_flats(m, generators)
    return ModularCut(lat.members(lat.close(0, [lat.pos[f] for f in gens])))


def guts_modular_cut(m: Matroid, A, B=None) -> ModularCut:
    """Flats F for which A - F is a separator of M/F."""
    a, b = require_exact_3_separation(m, A, B)
    total = m.rank()
    # r_{M/F}(A-F) + r_{M/F}(B-F) = r(M/F), written in ranks of M
    cut = frozenset(f for f in m.flats() if m.rank(a | f) + m.rank(b | f) == total + m.rank(f))
    if not is_modular_cut(m, cut):
        raise NotAModularCut("separator family failed the modular cut axioms")
    return ModularCut(cut)


def extend_by_modular_cut(m: Matroid, cut, label: str = "e") -> Matroid:
    """Single-element extension: the new element raises the rank of X unless cl(X) is in the cut."""
    flats = cut.flats if isinstance(cut, ModularCut) else _check_flats(m, cut)
    if not is_modular_cut(m, flats):
        raise NotAModularCut("family is not a modular cut")
    in_cut = np.zeros(1 << m.n, dtype=bool)
    if flats:
        in_cut[list(flats)] = True
    raised = ~in_cut[m.closure_table()]
    table = np.concatenate([m.table, m.table + raised])
    bad = find_axiom_violation(table, m.n + 1)
    if bad is not None:
        raise AxiomFailure(f"extension violates {bad[0]}", witness=bad[1:])
    return Matroid(m.labels + (fresh_label(m.labels, label),), table, verify=False)


@dataclass
class GutsFrame:
    """M with two independent clones x, y freely added to the guts line of (A, B)."""

    m2: Matroid
    x: str
    y: str
    L: int
    m1: Matroid
    A: int
    B: int


def free_guts_extension(m: Matroid, A, B=None, labels=("x", "y"), reserved=()) -> GutsFrame:
    a, b = require_exact_3_separation(m, A, B)
    taken = set(m.labels) | set(reserved)
    x = fresh_label(taken, labels[0])
    y = fresh_label(taken | {x}, labels[1])
    m1 = extend_by_modular_cut(m, guts_modular_cut(m, a, b), x)
    xbit = 1 << m.n
    # (A, B + x) is an exact 3-separation of the first extension
    m2 = extend_by_modular_cut(m1, guts_modular_cut(m1, a, b | xbit), y)
    ybit = 1 << (m.n + 1)
    L = m2.closure(xbit | ybit)
    if not are_independent_clones(m2, x, y):
        raise CloneCheckFailure(f"{x} and {y} are not independent clones")
    guts = m2.closure(a) & m2.closure(b)
    if (xbit | ybit) & ~guts:
        raise CloneCheckFailure("added clones are not in cl(A) and cl(B)")
    return GutsFrame(m2, x, y, L, m1, a, b)


@dataclass(frozen=True)
class Verdict:
    extendable: bool
    A1: int | None = None
    B1: int | None = None
    values: tuple | None = None

    @property
    def blocked(self) -> bool:
        return not self.extendable


def _pinned_strands(m: Matroid, A, B, A0, B0):
    try:
        a, b = require_exact_3_separation(m, A, B)
    except PreconditionFailure as exc:
        raise PreconditionFailure(f"(A, B) must be an exact 3-separation: {exc}") from exc
    a0, b0 = m.mask(A0), m.mask(B0)
    a_str = [s.members for s in strands(m, a, b, "A")]
    b_str = [s.members for s in strands(m, a, b, "B")]
    if a0 not in a_str:
        raise PreconditionFailure(f"A0 = {m.labels_of(a0)} is not an A-strand")
    if b0 not in b_str:
        raise PreconditionFailure(f"B0 = {m.labels_of(b0)} is not a B-strand")
    if local_conn(m, a0, b0) != 1:
        raise PreconditionFailure("A0 and B0 must have local connectivity 1")
    return a, b, a0, b0, a_str, b_str


def check_guts_extendability(m: Matroid, A, B, A0, B0) -> Verdict:
    """Decide whether a point p with A0+p and B0+p circuits can be added.

    Blocked exactly when some other pair of strands (A1, B1) has exactly two
    of the connectivities (A0,B1), (A1,B0), (A1,B1) equal to one.
    """
    a, b, a0, b0, a_str, b_str = _pinned_strands(m, A, B, A0, B0)
    for a1 in a_str:
        if a1 == a0:
            continue
        for b1 in b_str:
            if b1 == b0:
                continue
            values = (local_conn(m, a0, b1), local_conn(m, a1, b0), local_conn(m, a1, b1))
            if values.count(1) == 2:
                return Verdict(False, a1, b1, values)
    return Verdict(True)


@dataclass
class ExtensionResult:
    mp: Matroid
    p: str
    frame: GutsFrame
    m_prime: Matroid
    verdict: Verdict
    special: list = field(default_factory=list)


def guts_point_extension(m: Matroid, A, B, A0, B0, label: str = "p",
                         force: bool = False) -> ExtensionResult:
    """Extend M by p so that A0+p and B0+p are circuits.

    Built inside the guts-line frame M'': p is spanned by X exactly when X
    contains a special strand or cl''(X) contains the line L, after which
    the clones are deleted. ``force`` skips the extendability gate so the
    resulting rank-axiom failure can be inspected.
    """
    verdict = check_guts_extendability(m, A, B, A0, B0)
    if verdict.blocked and not force:
        raise NotExtendable("a pair of strands blocks the extension", verdict)
    a, b = require_exact_3_separation(m, A, B)
    a0, b0 = m.mask(A0), m.mask(B0)
    graph = strand_graph(m, a, b)
    special = special_strand_masks(graph, special_strands(graph, a0, b0))
    p = fresh_label(m.labels, label)
    frame = free_guts_extension(m, a, b, reserved={p})
    m2 = frame.m2
    idx = np.arange(1 << m2.n, dtype=np.int64)
    spanned = (m2.closure_table() & frame.L) == frame.L
    for s in special:
        spanned |= (idx & s) == s
    table = np.concatenate([m2.table, m2.table + ~spanned])
    n3 = m2.n + 1
    bad = find_axiom_violation(table, n3)
    labels = m2.labels + (p,)
    if bad is not None:
        reason, x, y = bad
        names = ([labels[i] for i in iter_bits(x)], [labels[i] for i in iter_bits(y)])
        if reason == "submodularity":
            exc = SubmodularityFailure(
                f"r(X) + r(Y) < r(X u Y) + r(X n Y) for X={names[0]}, Y={names[1]}",
                witness=names)
            exc.ranks = {"X": int(table[x]), "Y": int(table[y]),
                         "union": int(table[x | y]), "intersection": int(table[x & y])}
            raise exc
        raise AxiomFailure(f"candidate rank function violates {reason}", witness=names)
    m_prime = Matroid(labels, table, verify=False)
    pbit = 1 << m2.n
    for pinned in (a0, b0):
        if not m_prime.is_circuit(pinned | pbit):
            raise AxiomFailure(f"{m.labels_of(pinned)} + {p} is not a circuit")
    mp = m_prime.delete((1 << m.n) | (1 << (m.n + 1)))
    if not matroids_equal(mp.delete(p), m):
        raise AxiomFailure("deleting p does not recover the input matroid")
    return ExtensionResult(mp, p, frame, m_prime, verdict, special)


# -- exhaustive oracles -------------------------------------------------------

def enumerate_modular_cuts(m: Matroid, required=(), excluded=(),
                           max_flats: int = DEFAULT_MAX_FLATS) -> Iterator[ModularCut]:
    """All modular cuts containing ``required`` flats and avoiding ``excluded`` ones.

    Depth-first over flats from the top of the lattice down; each branch either
    excludes the next undecided flat or adds it and closes the family.
    """
    lat = _lattice(m)
    if len(lat.flats) > max_flats:
        raise TooLarge(f"{len(lat.flats)} flats exceeds the search guard of {max_flats}")
    req = lat.bits(_check_flats(m, required))
    exc = lat.bits(_check_flats(m, excluded))
    start = lat.close(0, iter_bits(req))
    if start & exc:
        return
    order = sorted(range(len(lat.flats)), key=lambda i: (-lat.ranks[i], lat.flats[i]))

    def walk(pos, cut, out):
        while pos < len(order) and cut >> order[pos] & 1:
            pos += 1
        if pos == len(order):
            yield ModularCut(lat.members(cut))
            return
        i = order[pos]
        yield from walk(pos + 1, cut, out | (1 << i))
        if not out >> i & 1:
            grown = lat.close(cut, [i])
            if not grown & out:
                yield from walk(pos + 1, grown, out)

    yield from walk(0, start, exc)


def enumerate_extensions(m: Matroid, required=(), excluded=(), label: str = "e",
                         max_flats: int = DEFAULT_MAX_FLATS) -> Iterator[Matroid]:
    for cut in enumerate_modular_cuts(m, required, excluded, max_flats):
        yield extend_by_modular_cut(m, cut, label)


def enumerate_guts_extensions_oracle(m: Matroid, A, B, A0, B0, label: str = "p",
                                     max_flats: int = DEFAULT_MAX_FLATS) -> list:
    """Every extension by p in which A0+p and B0+p are circuits, by brute force."""
    a = m.mask(A)
    b = m.ground & ~a if B is None else m.mask(B)
    a0, b0 = m.mask(A0), m.mask(B0)
    if a0 & ~a or b0 & ~b:
        raise PreconditionFailure("A0 and B0 must lie inside A and B")
    if not (m.is_independent(a0) and m.is_independent(b0)):
        return []
    required = [m.closure(a0), m.closure(b0)]
    excluded = sorted({m.closure(s & ~(1 << e)) for s in (a0, b0) for e in iter_bits(s)})
    if set(required) & set(excluded):
        return []
    found = []
    pbit = 1 << m.n
    for ext in enumerate_extensions(m, required, excluded, label, max_flats):
        if ext.is_circuit(a0 | pbit) and ext.is_circuit(b0 | pbit):
            found.append(ext)
    return found


def is_fixed_oracle(m: Matroid, z, max_flats: int = DEFAULT_MAX_FLATS) -> bool:
    """True iff no single-element extension makes z and the new element independent clones."""
    zi = m.index(z)
    if m.rank(1 << zi) == 0:
        return True
    # {z, z'} independent forces cl({z}) out of the cut
    for ext in enumerate_extensions(m, excluded=[m.closure(1 << zi)], max_flats=max_flats):
        if are_independent_clones(ext, zi, m.n):
            return False
    return True


# -- multiple extensions --------------------------------------------------------

@dataclass(frozen=True)
class ExtensionRequest:
    edge: tuple  # part names; the Y side of the split holds edge[0]
    y_strand: int
    z_strand: int
    label: str


@dataclass
class TreeExtensionPlan:
    parts: dict  # part name -> mask
    tree_edges: list
    requests: list


def edge_split(plan: TreeExtensionPlan, edge) -> tuple:
    """(Y, Z) masks obtained by cutting ``edge``; Y is the side of edge[0]."""
    tree = nx.Graph()
    tree.add_nodes_from(plan.parts)
    tree.add_edges_from(tuple(e) for e in plan.tree_edges)
    u, v = edge
    if not tree.has_edge(u, v):
        raise PlanInvalid(f"{u}-{v} is not a tree edge")
    tree.remove_edge(u, v)
    side = nx.node_connected_component(tree, u)
    y = 0
    z = 0
    for name, mask in plan.parts.items():
        if name in side:
            y |= mask
        else:
            z |= mask
    return y, z


def validate_plan(m: Matroid, plan: TreeExtensionPlan) -> list:
    """Check the plan against M and return the (Y, Z) split for each request."""
    union = 0
    for name, mask in plan.parts.items():
        if mask == 0:
            raise PlanInvalid(f"part {name!r} is empty")
        if union & mask:
            raise PlanInvalid(f"part {name!r} overlaps an earlier part")
        union |= mask
    if union != m.ground:
        raise PlanInvalid("parts do not cover the ground set")
    tree = nx.Graph()
    tree.add_nodes_from(plan.parts)
    for edge in plan.tree_edges:
        if len(edge) != 2 or any(v not in plan.parts for v in edge):
            raise PlanInvalid(f"tree edge {edge} names an unknown part")
        tree.add_edge(*edge)
    if not nx.is_tree(tree) or tree.number_of_edges() != len(plan.tree_edges):
        raise PlanInvalid("tree_edges do not form a tree on the parts")
    for edge in plan.tree_edges:
        y, z = edge_split(plan, edge)
        if not is_exact_3_separation(m, y, z):
            raise PlanInvalid(f"edge {edge} does not induce an exact 3-separation")
    splits = []
    seen_labels = set()
    for k, req in enumerate(plan.requests):
        y, z = edge_split(plan, req.edge)
        if req.y_strand & ~y or req.z_strand & ~z:
            raise PlanInvalid(f"request {k}: strands must lie on their sides of {req.edge}")
        if req.label in seen_labels:
            raise PlanInvalid(f"request {k}: label {req.label!r} used twice")
        seen_labels.add(req.label)
        if local_conn(m, req.y_strand, req.z_strand) != 1:
            raise PlanInvalid(f"request {k}: strands do not have local connectivity 1")
        splits.append((y, z))
    return splits


def tree_multi_extension(m: Matroid, plan: TreeExtensionPlan) -> Matroid:
    """Add one guts point per request, in plan order, re-deriving strands each step."""
    splits = validate_plan(m, plan)
    for k, (req, (y, z)) in enumerate(zip(plan.requests, splits)):
        try:
            verdict = check_guts_extendability(m, y, z, req.y_strand, req.z_strand)
        except PreconditionFailure as exc:
            raise PlanInvalid(f"request {k}: {exc}") from exc
        if verdict.blocked:
            raise StepBlocked(f"request {k} is blocked in the input matroid", k, verdict)
    current = m
    added = []
    for k, (req, (y, z)) in enumerate(zip(plan.requests, splits)):
        cl_y, cl_z = current.closure(y), current.closure(z)
        for q in added:
            bit = 1 << q
            if cl_y & bit:
                y |= bit
            elif cl_z & bit:
                z |= bit
            else:
                raise StepBlocked(f"request {k}: earlier point {current.labels[q]} is off both sides", k)
        try:
            result = guts_point_extension(current, y, z, req.y_strand, req.z_strand, req.label)
        except NotExtendable as exc:
            raise StepBlocked(f"request {k} is blocked after earlier steps", k, exc.verdict) from exc
        except PreconditionFailure as exc:
            raise StepBlocked(f"request {k}: {exc}", k) from exc
        log.debug("request %d added %s", k, result.p)
        current = result.mp
        added.append(current.n - 1)
    for req, q in zip(plan.requests, added):
        for s in (req.y_strand, req.z_strand):
            if not current.is_circuit(s | (1 << q)):
                raise StepBlocked(f"{current.labels_of(s)} + {current.labels[q]} is not a circuit")
    return current
