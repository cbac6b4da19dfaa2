"""Incidence structures, 2-design validation, duals and derived designs.

Everything is block-by-point: row ``i`` of the 0/1 matrix is block ``i``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from .errors import DegenerateK, IndexOutOfRange, NotBalanced, NotSymmetric, NotUniform


@dataclass(frozen=True)
class DesignParams:
    v: int
    b: int
    r: int
    k: int
    lam: int

    @property
    def symmetric(self) -> bool:
        return self.v == self.b

    def __str__(self) -> str:
        return f"2-({self.v},{self.k},{self.lam}), r={self.r}, b={self.b}"


@dataclass(frozen=True, eq=False)
class IncidenceStructure:
    """Immutable block-by-point 0/1 incidence matrix.

    Repeated blocks are allowed; operations that need a simple design say so.
    """

    matrix: np.ndarray

    def __post_init__(self) -> None:
        a = np.array(self.matrix, dtype=np.uint8, copy=True)
        if a.ndim != 2:
            raise ValueError("incidence matrix must be 2-dimensional")
        if a.size and a.max() > 1:
            raise ValueError("incidence matrix must be 0/1")
        a.setflags(write=False)
        object.__setattr__(self, "matrix", a)

    @classmethod
    def from_blocks(cls, blocks: Iterable[Iterable[int]], v: int) -> "IncidenceStructure":
        blocks = [list(B) for B in blocks]
        a = np.zeros((len(blocks), v), dtype=np.uint8)
        for i, B in enumerate(blocks):
            if len(set(B)) != len(B):
                raise ValueError(f"block {i} repeats a point")
            for p in B:
                if not 0 <= p < v:
                    raise IndexOutOfRange(f"point {p} outside 0..{v - 1}")
                a[i, p] = 1
        return cls(a)

    @property
    def b(self) -> int:
        return self.matrix.shape[0]

    @property
    def v(self) -> int:
        return self.matrix.shape[1]

    @property
    def rows(self) -> tuple[frozenset[int], ...]:
        return tuple(frozenset(np.flatnonzero(row).tolist()) for row in self.matrix)

    @property
    def block_sizes(self) -> np.ndarray:
        return self.matrix.sum(axis=1, dtype=np.int64)

    @property
    def replication(self) -> np.ndarray:
        return self.matrix.sum(axis=0, dtype=np.int64)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, IncidenceStructure):
            return NotImplemented
        return self.matrix.shape == other.matrix.shape and bool(
            np.array_equal(self.matrix, other.matrix)
        )

    def __hash__(self) -> int:
        return hash((self.matrix.shape, self.matrix.tobytes()))

    def __repr__(self) -> str:
        return f"IncidenceStructure(v={self.v}, b={self.b})"


def validate_2design(inc: IncidenceStructure) -> DesignParams:
    """Check the 2-design axioms and return the parameters.

    Raises :class:`NotBalanced` (with the first offending pair),
    :class:`NotUniform` or :class:`DegenerateK`, checked in that order.
    """
    v, b = inc.v, inc.b
    if b < 1:
        raise ValueError("a design needs at least one block")
    if v < 3:
        raise DegenerateK(f"v={v} leaves no block size with 1 < k < v-1")
    a = inc.matrix.astype(np.int64)
    pairs = a.T @ a
    iu = np.triu_indices(v, 1)
    counts = pairs[iu]
    lam = int(counts[0])
    bad = np.flatnonzero(counts != lam)
    if bad.size:
        i, j = int(iu[0][bad[0]]), int(iu[1][bad[0]])
        raise NotBalanced(
            f"points {i},{j} lie on {int(pairs[i, j])} common blocks, points 0,1 on {lam}",
            pair=(i, j),
        )
    sizes = inc.block_sizes
    k = int(sizes[0])
    if (sizes != k).any():
        i = int(np.flatnonzero(sizes != k)[0])
        raise NotUniform(f"block {i} has {int(sizes[i])} points, block 0 has {k}")
    reps = inc.replication
    r = int(reps[0])
    if (reps != r).any():
        p = int(np.flatnonzero(reps != r)[0])
        raise NotBalanced(f"point {p} lies on {int(reps[p])} blocks, point 0 on {r}")
    if not 1 < k < v - 1:
        raise DegenerateK(f"block size k={k} violates 1 < k < v-1 (v={v})")
    assert r * (k - 1) == lam * (v - 1) and b * k == v * r
    return DesignParams(v=v, b=b, r=r, k=k, lam=lam)


def dual(inc: IncidenceStructure) -> IncidenceStructure:
    return IncidenceStructure(inc.matrix.T)


def derived_design(inc: IncidenceStructure, block_index: int) -> IncidenceStructure:
    """Derived structure at a block of a symmetric design.

    Points are the points of the chosen block (in increasing order), blocks
    are its intersections with every other block.  For a symmetric
    2-(v,k,lam) design the result is a 2-(k,lam,lam-1) design; validate it
    separately.
    """
    if inc.v != inc.b:
        raise NotSymmetric(f"derived designs need v = b, got v={inc.v}, b={inc.b}")
    if not 0 <= block_index < inc.b:
        raise IndexOutOfRange(f"block {block_index} outside 0..{inc.b - 1}")
    cols = np.flatnonzero(inc.matrix[block_index])
    others = np.delete(np.arange(inc.b), block_index)
    return IncidenceStructure(inc.matrix[np.ix_(others, cols)])


@dataclass(frozen=True)
class IntersectionProfile:
    """Multiset of pairwise block-intersection sizes: size -> number of pairs."""

    counts: dict[int, int]

    @property
    def support(self) -> tuple[int, ...]:
        return tuple(sorted(self.counts))

    @property
    def pairs(self) -> int:
        return sum(self.counts.values())

    @property
    def is_quasi_symmetric(self) -> bool:
        return len(self.counts) == 2


def intersection_profile(inc: IncidenceStructure) -> IntersectionProfile:
    a = inc.matrix.astype(np.int64)
    meet = a @ a.T
    iu = np.triu_indices(inc.b, 1)
    sizes, mult = np.unique(meet[iu], return_counts=True)
    return IntersectionProfile({int(s): int(m) for s, m in zip(sizes, mult)})


# -- text fixtures -----------------------------------------------------------


def _content_lines(text: str) -> list[str]:
    out = []
    for raw in text.splitlines():
        line = raw.split("#", 1)[0].strip()
        if line:
            out.append(line)
    return out


def parse_incidences(text: str) -> list[tuple[IncidenceStructure, list[tuple[int, ...]]]]:
    """Parse one or more incidence records, each optionally followed by
    ``S: i1 i2 ...`` switching-set lines (0-based block indices)."""
    lines = _content_lines(text)
    records: list[tuple[IncidenceStructure, list[tuple[int, ...]]]] = []
    pos = 0
    while pos < len(lines):
        head = lines[pos].split()
        if len(head) != 2 or not all(t.isdigit() for t in head):
            raise ValueError(f"expected 'v b' header, got {lines[pos]!r}")
        v, b = int(head[0]), int(head[1])
        body = lines[pos + 1 : pos + 1 + b]
        if len(body) != b:
            raise ValueError(f"expected {b} block rows, found {len(body)}")
        for row in body:
            if len(row) != v or set(row) - {"0", "1"}:
                raise ValueError(f"bad block row {row!r} (need {v} characters 0/1)")
        a = np.array([[ch == "1" for ch in row] for row in body], dtype=np.uint8).reshape(b, v)
        pos += 1 + b
        sets = []
        while pos < len(lines) and lines[pos].startswith("S:"):
            sets.append(tuple(int(t) for t in lines[pos][2:].split()))
            pos += 1
        records.append((IncidenceStructure(a), sets))
    return records


def parse_incidence(text: str) -> IncidenceStructure:
    records = parse_incidences(text)
    if len(records) != 1:
        raise ValueError(f"expected one incidence record, found {len(records)}")
    return records[0][0]


def format_incidence(inc: IncidenceStructure, sets: Sequence[Sequence[int]] = ()) -> str:
    lines = [f"{inc.v} {inc.b}"]
    lines += ["".join("1" if x else "0" for x in row) for row in inc.matrix]
    lines += ["S: " + " ".join(str(i) for i in s) for s in sets]
    return "\n".join(lines) + "\n"

