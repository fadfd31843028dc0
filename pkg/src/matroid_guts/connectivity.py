"""Connectivity, local connectivity, modular pairs and exact 3-separations."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TooLarge
from .matroid import Matroid, popcounts


@dataclass(frozen=True)
class Separation:
    A: int
    B: int
    order: int
    exact: bool = True

    def sides(self, m: Matroid):
        return m.labels_of(self.A), m.labels_of(self.B)


def connectivity(m: Matroid, A) -> int:
    a = m.mask(A)
    return m.rank(a) + m.rank(m.ground & ~a) - m.rank()


def local_conn(m: Matroid, A, B) -> int:
    """r(A) + r(B) - r(A u B); the sets need not be disjoint."""
    a, b = m.mask(A), m.mask(B)
    return m.rank(a) + m.rank(b) - m.rank(a | b)


def is_modular_pair(m: Matroid, U, V) -> bool:
    u, v = m.mask(U), m.mask(V)
    return m.rank(u) + m.rank(v) == m.rank(u | v) + m.rank(u & v)


def is_exact_k_separation(m: Matroid, A, k: int) -> bool:
    if k < 1:
        raise ValueError("k must be at least 1")
    a = m.mask(A)
    size = a.bit_count()
    return size >= k and m.n - size >= k and connectivity(m, a) == k - 1


def is_exact_3_separation(m: Matroid, A, B=None) -> bool:
    a = m.mask(A)
    b = m.ground & ~a if B is None else m.mask(B)
    return a & b == 0 and a | b == m.ground and is_exact_k_separation(m, a, 3)


def enumerate_exact_k_separations(m: Matroid, k: int = 3, max_elements: int = 16) -> list:
    """Every exact k-separation once, with A the side holding the first element."""
    if k < 1:
        raise ValueError("k must be at least 1")
    if m.n > max_elements:
        raise TooLarge(f"separation scan is limited to {max_elements} elements")
    if m.n < 2 * k:
        return []
    idx = np.arange(1 << m.n, dtype=np.int64)
    comp = m.ground & ~idx
    pc = popcounts(m.n)
    lam = m.table + m.table[comp] - m.rank()
    hit = (lam == k - 1) & (pc >= k) & (m.n - pc >= k) & ((idx & 1) == 1)
    return [Separation(int(a), int(m.ground & ~a), k) for a in idx[hit]]


def enumerate_exact_3_separations(m: Matroid, max_elements: int = 16) -> list:
    return enumerate_exact_k_separations(m, 3, max_elements)
