"""Hadamard and Bush-type matrices and their Menon designs.

A Bush-type Hadamard matrix of order 4n^2 is tiled into 2n x 2n blocks; the
diagonal blocks are all-ones and every other block has zero row and column
sums.  Replacing +1 by 0 and -1 by 1 gives a symmetric
(4n^2, 2n^2 - n, n^2 - n) design whose diagonal block-rows are switching
sets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .design import IncidenceStructure
from .errors import (
    NotBushStructured,
    NotHadamard,
    NotRegular,
    OrderMismatch,
    WrongParameters,
    WrongRowSum,
)
from .switching import SwitchingSet, analyze_block_set


@dataclass(frozen=True, eq=False)
class SignMatrix:
    """Square matrix with entries +1/-1."""

    entries: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.entries, dtype=np.int8, copy=True)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise ValueError("sign matrix must be square")
        if not np.isin(a, (-1, 1)).all():
            raise ValueError("sign matrix entries must be +1 or -1")
        a.setflags(write=False)
        object.__setattr__(self, "entries", a)

    @property
    def m(self) -> int:
        return self.entries.shape[0]

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, SignMatrix):
            return NotImplemented
        return bool(np.array_equal(self.entries, other.entries))

    def __hash__(self) -> int:
        return hash(self.entries.tobytes())

    def __repr__(self) -> str:
        return f"SignMatrix(m={self.m})"


def _arr(h) -> np.ndarray:
    if isinstance(h, SignMatrix):
        return h.entries.astype(np.int64)
    return np.asarray(h, dtype=np.int64)


def is_hadamard(h) -> bool:
    a = _arr(h)
    if a.ndim != 2 or a.shape[0] != a.shape[1] or not np.isin(a, (-1, 1)).all():
        return False
    m = a.shape[0]
    return bool(np.array_equal(a @ a.T, m * np.eye(m, dtype=np.int64)))


def is_regular(h) -> bool:
    """Constant row and column sums (necessarily equal for a square matrix)."""
    a = _arr(h)
    rs, cs = a.sum(axis=1), a.sum(axis=0)
    regular = bool((rs == rs[0]).all() and (cs == cs[0]).all())
    if regular and a.shape[0] >= 4 and is_hadamard(a):
        u = math.isqrt(a.shape[0] // 4)
        assert 4 * u * u == a.shape[0] and abs(int(rs[0])) == 2 * u, "regular Hadamard sum"
    return regular


def _order_n(a: np.ndarray, n: int) -> int:
    if a.ndim != 2 or a.shape != (4 * n * n, 4 * n * n):
        raise OrderMismatch(f"order {a.shape[0]} is not 4n^2 for n={n}")
    return 2 * n


def _grid(a: np.ndarray, s: int) -> np.ndarray:
    """View as a (g, g, s, s) grid of s x s blocks."""
    g = a.shape[0] // s
    return a.reshape(g, s, g, s).transpose(0, 2, 1, 3)


def is_bush_type(h, n: int) -> bool:
    """Hadamard, all-ones diagonal blocks, zero-sum off-diagonal blocks."""
    a = _arr(h)
    s = _order_n(a, n)
    if not is_hadamard(a):
        return False
    grid = _grid(a, s)
    g = grid.shape[0]
    for i in range(g):
        for j in range(g):
            blk = grid[i, j]
            if i == j:
                if not (blk == 1).all():
                    return False
            elif blk.sum(axis=0).any() or blk.sum(axis=1).any():
                return False
    return True


def is_block_negacyclic(h, n: int) -> bool:
    """Each block-row is the previous one shifted right, the wrapped block negated."""
    a = _arr(h)
    s = _order_n(a, n)
    grid = _grid(a, s)
    g = grid.shape[0]
    for i in range(1, g):
        if not np.array_equal(grid[i, 0], -grid[i - 1, g - 1]):
            return False
        for j in range(1, g):
            if not np.array_equal(grid[i, j], grid[i - 1, j - 1]):
                return False
    return True


def block_negacyclic_matrix(first_row_blocks) -> SignMatrix:
    """Assemble the block-negacyclic matrix with the given first block-row."""
    blocks = [np.asarray(b, dtype=np.int64) for b in first_row_blocks]
    g, s = len(blocks), blocks[0].shape[0]
    a = np.zeros((g * s, g * s), dtype=np.int64)
    for i in range(g):
        for j in range(g):
            blk = blocks[j - i] if j >= i else -blocks[j - i + g]
            a[i * s : (i + 1) * s, j * s : (j + 1) * s] = blk
    return SignMatrix(a)


def normalize_row_sum(h) -> SignMatrix:
    """Negate a regular matrix globally if its row sum is negative."""
    a = _arr(h)
    if not is_regular(a):
        raise NotRegular("row or column sums are not constant")
    return SignMatrix(-a if a[0].sum() < 0 else a)


def hadamard_to_menon(h) -> IncidenceStructure:
    """Menon design of a regular Hadamard matrix with row sum +2n: -1 -> 1, +1 -> 0.

    Block ``i`` is row ``i``; its points are the columns holding -1.
    """
    a = _arr(h)
    if not is_hadamard(a):
        raise NotHadamard("not a Hadamard matrix")
    if not is_regular(a):
        raise NotRegular("row or column sums are not constant")
    n = math.isqrt(a.shape[0] // 4)
    total = int(a[0].sum())
    if total != 2 * n:
        raise WrongRowSum(total, 2 * n)
    return IncidenceStructure((a == -1).astype(np.uint8))


def menon_to_hadamard(inc: IncidenceStructure, n: int) -> SignMatrix:
    m = 4 * n * n
    k = 2 * n * n - n
    if (inc.v, inc.b) != (m, m):
        raise WrongParameters(f"need a {m} x {m} incidence matrix, got {inc.b} x {inc.v}")
    if (inc.block_sizes != k).any():
        raise WrongParameters(f"every block must have {k} points")
    a = 1 - 2 * inc.matrix.astype(np.int64)
    if not is_hadamard(a):
        raise WrongParameters(f"not a symmetric ({m},{k},{n * n - n}) design")
    return SignMatrix(a)


def diagonal_switching_sets(inc: IncidenceStructure, n: int) -> list[SwitchingSet]:
    """The 2n switching sets given by the diagonal block-rows of a Bush-type Menon design.

    Set ``g`` is blocks ``2n*g .. 2n*g + 2n - 1``; its ``p1`` is the points of
    the same group and ``p2`` is empty.
    """
    s = 2 * n
    m = s * s
    if n < 1 or (inc.v, inc.b) != (m, m):
        raise NotBushStructured(f"need a {m} x {m} incidence matrix")
    grid = _grid(inc.matrix.astype(np.int64), s)
    out = []
    for g in range(s):
        for j in range(s):
            blk = grid[g, j]
            if g == j:
                if blk.any():
                    raise NotBushStructured(f"diagonal block {g} is not empty")
            elif (blk.sum(axis=0) != n).any() or (blk.sum(axis=1) != n).any():
                raise NotBushStructured(f"block ({g},{j}) is not half-filled in every row and column")
        sw = analyze_block_set(inc, range(g * s, (g + 1) * s))
        assert sw.p1 == tuple(range(g * s, (g + 1) * s)) and not sw.p2
        out.append(sw)
    return out


# -- text fixtures -----------------------------------------------------------


def parse_sign_matrix(text: str) -> SignMatrix:
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if not lines or not lines[0].isdigit():
        raise ValueError("expected the order m on the first line")
    m = int(lines[0])
    body = lines[1 : 1 + m]
    if len(body) != m or len(lines) != m + 1:
        raise ValueError(f"expected exactly {m} rows")
    for row in body:
        if len(row) != m or set(row) - {"+", "-"}:
            raise ValueError(f"bad row {row!r} (need {m} characters +/-)")
    return SignMatrix([[1 if ch == "+" else -1 for ch in row] for row in body])


def format_sign_matrix(h) -> str:
    a = _arr(h)
    rows = ["".join("+" if x > 0 else "-" for x in row) for row in a]
    return f"{a.shape[0]}\n" + "\n".join(rows) + "\n"
