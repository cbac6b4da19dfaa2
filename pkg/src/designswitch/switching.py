"""Switching sets of 2-designs: recognition, application, search and closure.

A block set ``B1`` is a switching set when the points split into ``p1``
(on no block of ``B1``), ``p2`` (on every block of ``B1``) and the rest, each
of which lies on exactly half of ``B1``.  Switching complements the
incidences between ``B1`` and that balanced rest; the result is again a
2-design with the same parameters.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterator, Sequence, Union

import numpy as np

from .design import IncidenceStructure, validate_2design
from .errors import (
    BudgetExceeded,
    DegenerateK,
    IndexOutOfRange,
    NotSwitchingSet,
    NotSymmetric,
    OddSize,
    OverlappingSets,
    StaleSwitchingSet,
)

DEFAULT_BUDGET = 5_000_000


@dataclass(frozen=True)
class SwitchingSet:
    blocks: tuple[int, ...]
    p1: tuple[int, ...]
    p2: tuple[int, ...]
    balanced: tuple[int, ...]

    @property
    def size(self) -> int:
        return len(self.blocks)


def analyze_block_set(inc: IncidenceStructure, blocks: Sequence[int]) -> SwitchingSet:
    """Point partition induced by ``blocks``, or an error if it is not a switching set."""
    idx = sorted(int(i) for i in blocks)
    if not idx:
        raise ValueError("empty block set")
    if len(set(idx)) != len(idx):
        raise ValueError("block set repeats an index")
    if idx[0] < 0 or idx[-1] >= inc.b:
        raise IndexOutOfRange(f"block indices must lie in 0..{inc.b - 1}")
    s = len(idx)
    if s % 2:
        raise OddSize(f"switching sets have even size, got {s}")
    deg = inc.matrix[idx].sum(axis=0, dtype=np.int64)
    bad = np.flatnonzero((deg != 0) & (deg != s) & (deg != s // 2))
    if bad.size:
        p = int(bad[0])
        raise NotSwitchingSet(p, int(deg[p]), s)
    return SwitchingSet(
        blocks=tuple(idx),
        p1=tuple(np.flatnonzero(deg == 0).tolist()),
        p2=tuple(np.flatnonzero(deg == s).tolist()),
        balanced=tuple(np.flatnonzero(deg == s // 2).tolist()),
    )


def _verify(inc: IncidenceStructure, sw: SwitchingSet) -> None:
    s = sw.size
    ok = (
        s % 2 == 0
        and s > 0
        and sw.blocks[-1] < inc.b
        and len(sw.p1) + len(sw.p2) + len(sw.balanced) == inc.v
    )
    if ok:
        deg = inc.matrix[list(sw.blocks)].sum(axis=0, dtype=np.int64)
        ok = (
            (deg[list(sw.p1)] == 0).all()
            and (deg[list(sw.p2)] == s).all()
            and (deg[list(sw.balanced)] == s // 2).all()
        )
    if not ok:
        raise StaleSwitchingSet(f"partition for blocks {sw.blocks} does not match this design")


def _flip_mask(shape: tuple[int, int], sw: SwitchingSet) -> np.ndarray:
    mask = np.zeros(shape, dtype=np.uint8)
    mask[np.ix_(list(sw.blocks), list(sw.balanced))] = 1
    return mask


def apply_switching(inc: IncidenceStructure, sw: SwitchingSet) -> IncidenceStructure:
    """Complement the incidences between ``sw.blocks`` and the balanced points.

    The stored partition is re-checked against ``inc`` first; it stays valid
    after switching, so applying the same set twice restores ``inc``.
    """
    _verify(inc, sw)
    return IncidenceStructure(inc.matrix ^ _flip_mask(inc.matrix.shape, sw))


@dataclass(frozen=True)
class Grouped:
    """Enumeration strategy: only unions of these block groups."""

    groups: tuple[tuple[int, ...], ...]

    def __init__(self, groups: Sequence[Sequence[int]]):
        object.__setattr__(self, "groups", tuple(tuple(int(i) for i in g) for g in groups))


Strategy = Union[str, Grouped]


def enumerate_switching_sets(
    inc: IncidenceStructure,
    max_size: int,
    strategy: Strategy = "exhaustive",
    budget: int = DEFAULT_BUDGET,
) -> Iterator[SwitchingSet]:
    """Yield switching sets of at most ``max_size`` blocks.

    ``"exhaustive"`` walks block subsets in lexicographic order of their
    sorted index tuples; a branch is cut once no even target size can still
    put every point on 0, half or all of the chosen blocks.  ``budget``
    bounds the number of search nodes; exceeding it raises
    :class:`BudgetExceeded`.
    """
    if max_size < 2:
        return
    if max_size % 2:
        raise ValueError(f"max_size must be even, got {max_size}")
    if isinstance(strategy, Grouped):
        yield from _enumerate_grouped(inc, max_size, strategy, budget)
    elif strategy == "exhaustive":
        yield from _enumerate_exhaustive(inc, max_size, budget)
    else:
        raise ValueError(f"unknown strategy {strategy!r}")


def _enumerate_exhaustive(inc: IncidenceStructure, max_size: int, budget: int):
    a = inc.matrix.astype(np.int16)
    b, v = a.shape
    # suffix[i, p]: blocks with index >= i through p
    suffix = np.zeros((b + 1, v), dtype=np.int16)
    suffix[:b] = np.cumsum(a[::-1], axis=0)[::-1]
    sizes = list(range(2, max_size + 1, 2))
    nodes = 0

    def alive(deg: np.ndarray, chosen: int, nxt: np.ndarray) -> np.ndarray:
        # deg: (c, v) degrees of c candidate children; nxt: (c,) next free index
        left = (b - nxt)[:, None]
        av = suffix[nxt]
        nav = left - av
        ok_any = np.zeros(len(deg), dtype=bool)
        for s in sizes:
            rem = s - chosen
            if rem < 0:
                continue
            lo = deg + np.maximum(0, rem - nav)
            hi = deg + np.minimum(rem, av)
            h = s // 2
            fit = ((lo <= 0) & (hi >= 0)) | ((lo <= h) & (hi >= h)) | ((lo <= s) & (hi >= s))
            ok_any |= fit.all(axis=1) & (left[:, 0] >= rem)
        return ok_any

    def walk(chosen: list[int], deg: np.ndarray) -> Iterator[SwitchingSet]:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"exhaustive switching-set search exceeded {budget} nodes")
        j = len(chosen)
        if j >= 2 and j % 2 == 0:
            h = j // 2
            if ((deg == 0) | (deg == h) | (deg == j)).all():
                yield analyze_block_set(inc, chosen)
        if j == max_size:
            return
        start = chosen[-1] + 1 if chosen else 0
        if start >= b:
            return
        cand = np.arange(start, b)
        child_deg = deg[None, :] + a[start:]
        keep = alive(child_deg, j + 1, cand + 1)
        for i in cand[keep].tolist():
            yield from walk(chosen + [i], child_deg[i - start])

    yield from walk([], np.zeros(v, dtype=np.int16))


def _enumerate_grouped(inc: IncidenceStructure, max_size: int, strategy: Grouped, budget: int):
    groups = strategy.groups
    seen: set[int] = set()
    for g in groups:
        if seen & set(g):
            raise OverlappingSets("block groups must be disjoint")
        seen |= set(g)
    nodes = 0

    def walk(start: int, blocks: list[int]) -> Iterator[SwitchingSet]:
        nonlocal nodes
        for gi in range(start, len(groups)):
            nodes += 1
            if nodes > budget:
                raise BudgetExceeded(f"grouped switching-set search exceeded {budget} nodes")
            union = blocks + list(groups[gi])
            if len(union) > max_size:
                continue
            if len(union) % 2 == 0:
                try:
                    yield analyze_block_set(inc, union)
                except NotSwitchingSet:
                    pass
            yield from walk(gi + 1, union)

    yield from walk(0, [])


def switching_closure(
    inc: IncidenceStructure, sets: Sequence[SwitchingSet]
) -> list[IncidenceStructure]:
    """All 2**t designs reachable by switching any subset of ``t`` disjoint sets.

    Entry ``i`` of the result switches ``sets[j]`` for every bit ``j`` set in
    ``i``; entry 0 is ``inc`` itself.  Duplicates are kept.
    """
    used: set[int] = set()
    for sw in sets:
        if used & set(sw.blocks):
            raise OverlappingSets(f"block set {sw.blocks} overlaps an earlier set")
        used |= set(sw.blocks)
        _verify(inc, sw)
    masks = [_flip_mask(inc.matrix.shape, sw) for sw in sets]
    out = []
    for bits in range(1 << len(sets)):
        m = inc.matrix.copy()
        for j, mask in enumerate(masks):
            if bits >> j & 1:
                m ^= mask
        out.append(IncidenceStructure(m))
    return out


def trade_subdesign(inc: IncidenceStructure, sw: SwitchingSet) -> IncidenceStructure:
    """Structure with point set ``sw.blocks`` and one block per balanced point.

    For a symmetric design this is a 2-design inside the dual.  Degenerate
    block sizes only produce a warning; the raw structure is returned.
    """
    if inc.v != inc.b:
        raise NotSymmetric(f"trade subdesign needs a symmetric design, got v={inc.v}, b={inc.b}")
    _verify(inc, sw)
    sub = IncidenceStructure(inc.matrix[np.ix_(list(sw.blocks), list(sw.balanced))].T)
    try:
        validate_2design(sub)
    except DegenerateK as exc:
        warnings.warn(f"trade subdesign is degenerate: {exc}", stacklevel=2)
    return sub
