"""Rank of 0/1 (or integer) matrices over prime fields."""

from __future__ import annotations

from collections import Counter
from typing import Iterable, Union

import numpy as np

from .design import IncidenceStructure
from .errors import NotPrime

MatrixLike = Union[IncidenceStructure, np.ndarray]


def is_prime(p: int) -> bool:
    if p < 2:
        return False
    if p < 4:
        return True
    if p % 2 == 0:
        return False
    f = 3
    while f * f <= p:
        if p % f == 0:
            return False
        f += 2
    return True


def _check_prime(p: int) -> None:
    if not isinstance(p, (int, np.integer)) or not is_prime(int(p)) or p > 2**31:
        raise NotPrime(f"{p} is not a prime below 2**31")


def _as_matrix(m: MatrixLike) -> np.ndarray:
    return m.matrix if isinstance(m, IncidenceStructure) else np.asarray(m)


def gf2_rank(rows: list[int]) -> int:
    """Rank over GF(2) of rows packed into Python ints (XOR elimination)."""
    pivots: dict[int, int] = {}
    for row in rows:
        while row:
            top = row.bit_length() - 1
            if top in pivots:
                row ^= pivots[top]
            else:
                pivots[top] = row
                break
    return len(pivots)


def _pack_rows(a: np.ndarray) -> list[int]:
    packed = np.packbits(a.astype(np.uint8) & 1, axis=1)
    return [int.from_bytes(r.tobytes(), "big") for r in packed]


def _rank_mod_p(a: np.ndarray, p: int) -> int:
    m = np.mod(a.astype(np.int64), p)
    rows, cols = m.shape
    rank = 0
    for col in range(cols):
        if rank == rows:
            break
        nz = np.flatnonzero(m[rank:, col])
        if nz.size == 0:
            continue
        piv = rank + int(nz[0])
        if piv != rank:
            m[[rank, piv]] = m[[piv, rank]]
        inv = pow(int(m[rank, col]), p - 2, p)
        m[rank] = (m[rank] * inv) % p
        below = m[rank + 1 :, col].copy()
        hit = np.flatnonzero(below)
        if hit.size:
            sub = m[rank + 1 + hit]
            # entries < p < 2**31 keep the products inside int64
            m[rank + 1 + hit] = (sub - np.outer(below[hit], m[rank]) % p) % p
        rank += 1
    return rank


def p_rank(m: MatrixLike, p: int) -> int:
    """Rank of the incidence matrix over GF(p)."""
    _check_prime(p)
    a = _as_matrix(m)
    if a.size == 0:
        return 0
    if p == 2:
        return gf2_rank(_pack_rows(a))
    return _rank_mod_p(a, int(p))


def rank_distribution(designs: Iterable[MatrixLike], p: int) -> dict[int, int]:
    """Histogram rank -> number of designs, keys ascending."""
    _check_prime(p)
    hist = Counter(p_rank(d, p) for d in designs)
    return dict(sorted(hist.items()))
