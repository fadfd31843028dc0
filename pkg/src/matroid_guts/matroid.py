"""Finite matroids stored as dense rank tables indexed by bitmask."""
from __future__ import annotations

import threading
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .errors import (
    GroundMismatch,
    InvalidSpec,
    NotAMatroid,
    OverlappingSets,
    TooLarge,
)

MAX_ELEMENTS = 20

KINDS = ("circuits", "bases", "sparse_paving")


def popcounts(n: int) -> np.ndarray:
    return np.bitwise_count(np.arange(1 << n, dtype=np.uint32)).astype(np.int16)


def iter_bits(mask: int):
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


def spread(compact: np.ndarray, positions: Sequence[int]) -> np.ndarray:
    """Map masks over ``range(len(positions))`` to masks with bit j moved to positions[j]."""
    out = np.zeros_like(compact)
    for j, pos in enumerate(positions):
        out |= ((compact >> j) & 1) << pos
    return out


def _zeta(values: np.ndarray, n: int, op, upward: bool) -> np.ndarray:
    """Fold ``op`` over subsets (upward=True) or supersets (upward=False), in place."""
    if n == 0:
        return values
    view = values.reshape((2,) * n)
    for bit in range(n):
        ax = n - 1 - bit
        lo = [slice(None)] * n
        hi = [slice(None)] * n
        lo[ax] = 0
        hi[ax] = 1
        lo, hi = tuple(lo), tuple(hi)
        if upward:
            view[hi] = op(view[hi], view[lo])
        else:
            view[lo] = op(view[lo], view[hi])
    return values


def rank_from_independent(indep: np.ndarray, n: int) -> np.ndarray:
    """Largest independent subset size of every set, given the independence indicator."""
    table = np.where(indep, popcounts(n), 0).astype(np.int16)
    return _zeta(table, n, np.maximum, upward=True)


def find_axiom_violation(table: np.ndarray, n: int):
    """Return ``None`` if ``table`` is a matroid rank function, else ``(reason, X, Y)``.

    Uses r(empty) = 0, unit increase, and the local submodularity criterion
    r(X+a) + r(X+b) >= r(X+a+b) + r(X); together these are equivalent to R1-R3.
    For a submodularity failure the witness pair is (X+a, X+b).
    """
    table = np.asarray(table, dtype=np.int16)
    if table.shape != (1 << n,):
        raise ValueError(f"rank table must have {1 << n} entries, got {table.shape}")
    if table[0] != 0:
        return ("normalization", 0, 0)
    if n == 0:
        return None
    idx = np.arange(1 << n, dtype=np.int64)
    view = table.reshape((2,) * n)
    diffs = []
    for a in range(n):
        ax = n - 1 - a
        d = np.take(view, 1, axis=ax) - np.take(view, 0, axis=ax)
        if ((d < 0) | (d > 1)).any():
            bit = 1 << a
            base = idx[(idx & bit) == 0]
            step = table[base | bit] - table[base]
            x = int(base[np.flatnonzero((step < 0) | (step > 1))[0]])
            return ("unit increase", x, x | bit)
        diffs.append(d)
    for a in range(n):
        d = diffs[a]
        for b in range(a + 1, n):
            # axis of bit b inside d, which has lost bit a's axis
            bx = n - 1 - b
            if (np.take(d, 1, axis=bx) > np.take(d, 0, axis=bx)).any():
                ab, bb = 1 << a, 1 << b
                base = idx[(idx & (ab | bb)) == 0]
                slack = (table[base | ab] + table[base | bb]
                         - table[base | ab | bb] - table[base])
                x = int(base[np.flatnonzero(slack < 0)[0]])
                return ("submodularity", x | ab, x | bb)
    return None


def fresh_label(existing: Iterable[str], base: str) -> str:
    taken = set(existing)
    if base not in taken:
        return base
    k = 1
    while f"{base}{k}" in taken:
        k += 1
    return f"{base}{k}"


@dataclass(frozen=True)
class MatroidSpec:
    kind: str
    elements: tuple
    sets: tuple
    rank: int | None = None
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "elements", tuple(self.elements))
        object.__setattr__(self, "sets", tuple(tuple(s) for s in self.sets))


class Matroid:
    """An immutable matroid on at most 20 labelled elements.

    Subsets are plain ints: bit i stands for ``labels[i]``. The full rank
    table is materialised on construction; closures, flats and circuits are
    derived from it on first use.
    """

    def __init__(self, labels: Iterable[str], table, *, verify: bool = True, name: str = ""):
        labels = tuple(labels)
        n = len(labels)
        if n > MAX_ELEMENTS:
            raise TooLarge(f"{n} elements exceeds the limit of {MAX_ELEMENTS}")
        if len(set(labels)) != n or not all(isinstance(s, str) and s for s in labels):
            raise InvalidSpec("element labels must be distinct nonempty strings")
        table = np.array(table, dtype=np.int16)
        if table.shape != (1 << n,):
            raise InvalidSpec(f"rank table must have {1 << n} entries")
        if verify:
            bad = find_axiom_violation(table, n)
            if bad is not None:
                reason, x, y = bad
                raise NotAMatroid(
                    f"rank table violates {reason}",
                    witness=(self._names(labels, x), self._names(labels, y)),
                )
        table.setflags(write=False)
        self.labels = labels
        self.n = n
        self.table = table
        self.name = name
        self._index = {s: i for i, s in enumerate(labels)}
        self._lock = threading.RLock()
        self._cache: dict = {}

    @staticmethod
    def _names(labels, mask):
        return [labels[i] for i in iter_bits(mask)]

    def __repr__(self):
        tag = f" {self.name!r}" if self.name else ""
        return f"<Matroid{tag} n={self.n} rank={self.rank()}>"

    def _cached(self, key, compute):
        try:
            return self._cache[key]
        except KeyError:
            pass
        with self._lock:
            if key not in self._cache:
                self._cache[key] = compute()
            return self._cache[key]

    # -- subsets and labels -------------------------------------------------

    @property
    def ground(self) -> int:
        return (1 << self.n) - 1

    def index(self, element) -> int:
        if isinstance(element, (int, np.integer)) and not isinstance(element, bool):
            if not 0 <= element < self.n:
                raise KeyError(element)
            return int(element)
        return self._index[element]

    def mask(self, subset) -> int:
        """Bitmask of ``subset``: an int (passed through), a label, or an iterable of labels."""
        if isinstance(subset, (int, np.integer)) and not isinstance(subset, bool):
            subset = int(subset)
            if subset < 0 or subset >> self.n:
                raise ValueError(f"mask {subset:#x} has bits outside the ground set")
            return subset
        if isinstance(subset, str):
            return 1 << self._index[subset]
        m = 0
        for e in subset:
            m |= 1 << self._index[e]
        return m

    def labels_of(self, mask: int) -> list:
        return self._names(self.labels, mask)

    # -- rank queries --------------------------------------------------------

    def rank(self, subset=None) -> int:
        if subset is None:
            return int(self.table[self.ground])
        return int(self.table[self.mask(subset)])

    def is_independent(self, subset) -> bool:
        m = self.mask(subset)
        return int(self.table[m]) == m.bit_count()

    def closure_table(self) -> np.ndarray:
        def compute():
            idx = np.arange(1 << self.n, dtype=np.int64)
            cl = idx.copy()
            for e in range(self.n):
                bit = 1 << e
                cl |= np.where(self.table[idx | bit] == self.table, bit, 0)
            cl.setflags(write=False)
            return cl
        return self._cached("closure", compute)

    def closure(self, subset) -> int:
        return int(self.closure_table()[self.mask(subset)])

    def is_flat(self, subset) -> bool:
        m = self.mask(subset)
        return self.closure(m) == m

    def flats(self) -> list:
        """All flats, ordered by rank and then by mask."""
        def compute():
            idx = np.arange(1 << self.n, dtype=np.int64)
            found = idx[self.closure_table() == idx]
            order = np.lexsort((found, self.table[found]))
            return tuple(int(f) for f in found[order])
        return list(self._cached("flats", compute))

    def circuits(self) -> list:
        """All circuits, ordered by size and then by mask."""
        def compute():
            idx = np.arange(1 << self.n, dtype=np.int64)
            pc = popcounts(self.n)
            indep = self.table == pc
            ok = ~indep
            for e in range(self.n):
                bit = 1 << e
                ok &= ((idx & bit) == 0) | indep[idx ^ bit]
            found = idx[ok]
            order = np.lexsort((found, pc[found]))
            return tuple(int(c) for c in found[order])
        return list(self._cached("circuits", compute))

    def is_circuit(self, subset) -> bool:
        m = self.mask(subset)
        if m == 0 or int(self.table[m]) != m.bit_count() - 1:
            return False
        return all(self.is_independent(m & ~(1 << e)) for e in iter_bits(m))

    def is_separator(self, subset) -> bool:
        s = self.mask(subset)
        return self.rank(s) + self.rank(self.ground & ~s) == self.rank()

    # -- minors ------------------------------------------------------------

    def minor(self, delete=0, contract=0) -> "Matroid":
        d, c = self.mask(delete), self.mask(contract)
        if d & c:
            raise OverlappingSets(f"delete and contract share {self.labels_of(d & c)}")
        kept = [i for i in range(self.n) if not (d | c) >> i & 1]
        compact = np.arange(1 << len(kept), dtype=np.int64)
        orig = spread(compact, kept) | c
        table = self.table[orig] - self.table[c]
        return Matroid([self.labels[i] for i in kept], table, verify=False)

    def delete(self, subset) -> "Matroid":
        return self.minor(delete=subset)

    def contract(self, subset) -> "Matroid":
        return self.minor(contract=subset)

    def restrict(self, subset) -> "Matroid":
        return self.minor(delete=self.ground & ~self.mask(subset))

    def to_spec(self, name: str = "") -> MatroidSpec:
        """Circuits-kind description; the circuit list determines the matroid."""
        sets = [tuple(self.labels_of(c)) for c in self.circuits()]
        return MatroidSpec("circuits", self.labels, sets, name=name or self.name)

    def relabel_order(self, labels: Sequence[str]) -> "Matroid":
        """The same matroid with its elements listed in the order ``labels``."""
        if sorted(labels) != sorted(self.labels):
            raise GroundMismatch("relabelling must permute the existing labels")
        positions = [self._index[s] for s in labels]
        compact = np.arange(1 << self.n, dtype=np.int64)
        return Matroid(labels, self.table[spread(compact, positions)], verify=False, name=self.name)


def matroids_equal(m1: Matroid, m2: Matroid) -> bool:
    if set(m1.labels) != set(m2.labels):
        raise GroundMismatch(
            f"ground sets differ: {sorted(set(m1.labels) ^ set(m2.labels))}")
    aligned = m2.relabel_order(m1.labels)
    return bool(np.array_equal(m1.table, aligned.table))


def are_clones(m: Matroid, e, f) -> bool:
    i, j = m.index(e), m.index(f)
    if i == j:
        raise ValueError("clone test needs two distinct elements")
    view = m.table.reshape((2,) * m.n)
    return bool(np.array_equal(view, view.swapaxes(m.n - 1 - i, m.n - 1 - j)))


def are_independent_clones(m: Matroid, e, f) -> bool:
    i, j = m.index(e), m.index(f)
    return m.rank((1 << i) | (1 << j)) == 2 and are_clones(m, i, j)


def validate_spec(spec: MatroidSpec):
    if spec.kind not in KINDS:
        raise InvalidSpec(f"unknown kind {spec.kind!r}; expected one of {KINDS}")
    elements = spec.elements
    if len(elements) > MAX_ELEMENTS:
        raise TooLarge(f"{len(elements)} elements exceeds the limit of {MAX_ELEMENTS}")
    if not elements:
        raise InvalidSpec("ground set is empty")
    if not all(isinstance(e, str) and e for e in elements):
        raise InvalidSpec("element labels must be nonempty strings")
    if len(set(elements)) != len(elements):
        dup = sorted({e for e in elements if elements.count(e) > 1})
        raise InvalidSpec(f"duplicate element labels {dup}")
    known = set(elements)
    for s in spec.sets:
        unknown = [e for e in s if e not in known]
        if unknown:
            raise InvalidSpec(f"set {list(s)} uses unknown elements {unknown}")
        if len(set(s)) != len(s):
            raise InvalidSpec(f"set {list(s)} repeats an element")
    sets = [frozenset(s) for s in spec.sets]
    if spec.kind == "circuits":
        if any(not s for s in sets):
            raise InvalidSpec("a circuit cannot be empty")
        for i, s in enumerate(sets):
            for j, t in enumerate(sets):
                if i != j and s <= t:
                    raise InvalidSpec(
                        f"circuits must form an antichain: {sorted(s)} is contained in {sorted(t)}")
    elif spec.kind == "bases":
        if not sets:
            raise InvalidSpec("a matroid needs at least one basis")
        if len({len(s) for s in sets}) != 1:
            raise InvalidSpec("bases must all have the same size")
    else:
        r = spec.rank
        if r is None:
            raise InvalidSpec("sparse_paving specs require a rank")
        if not 0 <= r <= len(elements):
            raise InvalidSpec(f"rank {r} out of range for {len(elements)} elements")
        for s in sets:
            if len(s) != r:
                raise InvalidSpec(f"set {sorted(s)} does not have size {r}")
        for i in range(len(sets)):
            for j in range(i + 1, len(sets)):
                if len(sets[i] & sets[j]) > r - 2:
                    raise InvalidSpec(
                        f"sets {sorted(sets[i])} and {sorted(sets[j])} meet in more than {r - 2} elements")


def build_matroid(spec: MatroidSpec) -> Matroid:
    validate_spec(spec)
    n = len(spec.elements)
    index = {e: i for i, e in enumerate(spec.elements)}
    masks = [sum(1 << index[e] for e in s) for s in spec.sets]
    size = 1 << n
    if spec.kind == "bases":
        indep = np.zeros(size, dtype=bool)
        indep[masks] = True
        _zeta(indep, n, np.logical_or, upward=False)
        table = rank_from_independent(indep, n)
    elif spec.kind == "circuits":
        dep = np.zeros(size, dtype=bool)
        if masks:
            dep[masks] = True
        _zeta(dep, n, np.logical_or, upward=True)
        table = rank_from_independent(~dep, n)
    else:
        table = np.minimum(popcounts(n), spec.rank)
        if masks:
            table[masks] = spec.rank - 1
    return Matroid(spec.elements, table, name=spec.name)
