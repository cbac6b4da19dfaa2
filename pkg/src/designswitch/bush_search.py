"""Backtracking search for Bush-type Hadamard matrices of order 4n^2.

Two modes:

``free``
    Off-diagonal 2n x 2n blocks are placed in row-major order from the list
    of all zero-row/column-sum sign blocks.  After each placement every row
    of the current block-row must still be able to become orthogonal to all
    finished rows and to its siblings: a partial dot product ``d`` with
    ``w`` unfilled columns left needs ``|d| <= w`` and ``d = w (mod 2)``.

``block_negacyclic``
    The matrix is fixed by its first block-row (J, B_1, ..., B_{2n-1}).
    Candidate rows of that block-row are filtered by their orthogonality to
    their own negacyclic shifts, then 2n mutually compatible rows are picked
    by backtracking.  The first row of B_1 is normalized to the first
    balanced vector and the other rows are taken in increasing candidate
    order, so each solution appears once up to a common permutation of the
    rows and of the columns inside every block-column.
"""

from __future__ import annotations

import itertools
import math
from typing import Iterator, Optional

import numpy as np

from .errors import BudgetExceeded
from .hadamard import SignMatrix, block_negacyclic_matrix, is_bush_type, is_hadamard

DEFAULT_BUDGET = 2_000_000
# rows of the first block-row are enumerated explicitly; n = 3 needs 20**5
ROW_SPACE_LIMIT = 10**7
MAX_N = {"free": 3, "block_negacyclic": 5}


def balanced_vectors(s: int) -> np.ndarray:
    """All +-1 vectors of even length ``s`` with zero sum, in lexicographic
    order with +1 before -1."""
    return np.array(
        [v for v in itertools.product((1, -1), repeat=s) if sum(v) == 0], dtype=np.int8
    ).reshape(-1, s)


def balanced_blocks(s: int) -> np.ndarray:
    """All s x s sign matrices with zero row and column sums, shape (K, s, s)."""
    vecs = balanced_vectors(s)
    states = np.zeros((1, 0, s), dtype=np.int8)
    for depth in range(s):
        left = s - depth - 1
        cur = states.shape[0]
        grown = np.concatenate(
            [
                np.repeat(states, len(vecs), axis=0),
                np.tile(vecs, (cur, 1))[:, None, :],
            ],
            axis=1,
        )
        colsum = grown.sum(axis=1, dtype=np.int16)
        keep = (np.abs(colsum) <= left).all(axis=1)
        states = grown[keep]
    return states


def search_bush_type(
    n: int,
    symmetry: str = "free",
    limit: Optional[int] = None,
    budget: int = DEFAULT_BUDGET,
    reduced: bool = False,
) -> Iterator[SignMatrix]:
    """Yield Bush-type Hadamard matrices of order 4n^2 in a deterministic order.

    Stops after ``limit`` matrices (``None`` = exhaust the search).  Raises
    :class:`BudgetExceeded` once more than ``budget`` search nodes are used.

    In ``free`` mode every Bush-type matrix is produced unless ``reduced`` is
    set; then only matrices in a normal form under Bush-preserving row and
    column permutations are searched (every class still has one).  Even so,
    free n = 3 does not finish in practical time; use ``block_negacyclic``
    there, which is always reduced.
    """
    if symmetry not in MAX_N:
        raise ValueError(f"symmetry must be one of {sorted(MAX_N)}")
    if not 1 <= n <= MAX_N[symmetry]:
        raise ValueError(f"{symmetry} search supports 1 <= n <= {MAX_N[symmetry]}")
    if limit is not None and limit <= 0:
        return
    gen = _free(n, budget, reduced) if symmetry == "free" else _negacyclic(n, budget)
    for count, h in enumerate(gen, 1):
        assert is_bush_type(h, n)
        yield h
        if limit is not None and count >= limit:
            return


# -- free mode ---------------------------------------------------------------


def _desc(keys: np.ndarray) -> np.ndarray:
    """True where the rows of ``keys`` (K, s) are non-increasing."""
    return (keys[:, :-1] >= keys[:, 1:]).all(axis=1)


def _normal_masks(cands: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Candidates whose rows (resp. columns) are lexicographically
    non-increasing, reading +1 as larger than -1."""
    s = cands.shape[1]
    weights = 1 << np.arange(s - 1, -1, -1)
    pos = (cands > 0).astype(np.int64)
    row_keys = pos @ weights
    col_keys = pos.transpose(0, 2, 1) @ weights
    return _desc(row_keys), _desc(col_keys)


def _free(n: int, budget: int, reduced: bool) -> Iterator[SignMatrix]:
    s = 2 * n
    g = s
    m = s * s
    cands = balanced_blocks(s).astype(np.int32)
    iu = np.triu_indices(s, 1)
    gram = np.einsum("kac,kbc->kab", cands, cands)[:, iu[0], iu[1]]
    allowed = {}
    if reduced:
        # Row permutations inside a block-row and column permutations inside
        # a block-column keep the Bush structure; they act on disjoint index
        # sets, so one normal form per position can be imposed in turn.
        rows_ok, cols_ok = _normal_masks(cands)
        both = rows_ok & cols_ok
        allowed[(0, 1)] = both
        allowed[(1, 0)] = both
        for j in range(2, g):
            allowed[(0, j)] = cols_ok
            allowed[(j, 0)] = rows_ok
    h = np.zeros((m, m), dtype=np.int32)
    for i in range(g):
        h[i * s : (i + 1) * s, i * s : (i + 1) * s] = 1
    order = [(i, j) for i in range(g) for j in range(g) if i != j]
    nodes = 0

    def place(pos: int) -> Iterator[SignMatrix]:
        nonlocal nodes
        if pos == len(order):
            if is_hadamard(h):
                yield SignMatrix(h)
            return
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"free Bush-type search exceeded {budget} nodes")
        bi, bj = order[pos]
        rows = slice(bi * s, (bi + 1) * s)
        cols = slice(bj * s, (bj + 1) * s)
        # columns of this block-row still open after this placement
        filled_after = {bi} | {j for (i, j) in order[: pos + 1] if i == bi}
        open_cols = (g - len(filled_after)) * s
        done_cols = np.zeros(m, dtype=bool)
        for j in filled_after - {bj}:
            done_cols[j * s : (j + 1) * s] = True
        cur = h[rows][:, done_cols]
        ok = allowed.get((bi, bj), np.ones(len(cands), dtype=bool)).copy()
        partial_in = (cur @ cur.T)[iu]
        ok &= _feasible(partial_in[None] + gram, open_cols)
        if bi > 0:
            prev = h[: bi * s]
            partial = cur @ prev[:, done_cols].T  # (s, U)
            idx = np.flatnonzero(ok)
            dots = partial[None] + cands[idx] @ prev[:, cols].T  # (K', s, U)
            ok[idx] = _feasible(dots, open_cols)
        for idx in np.flatnonzero(ok).tolist():
            h[rows, cols] = cands[idx]
            yield from place(pos + 1)
        h[rows, cols] = 0

    yield from place(0)


def _feasible(dots: np.ndarray, width: int) -> np.ndarray:
    flat = dots.reshape(len(dots), -1)
    return ((np.abs(flat) <= width) & ((flat - width) % 2 == 0)).all(axis=1)


# -- block negacyclic mode ---------------------------------------------------


def _unshifts(x: np.ndarray, s: int) -> np.ndarray:
    """Rows sigma^{-k}(x) for k = 0..s-1 where sigma moves segments right
    and negates the wrapped one; x·sigma^k(y) = sigma^{-k}(x)·y."""
    segs = x.reshape(s, s)
    out = [segs]
    cur = segs
    for _ in range(1, s):
        cur = np.concatenate([cur[1:], -cur[:1]], axis=0)
        out.append(cur)
    return np.stack([o.reshape(-1) for o in out]).astype(np.float64)


def _negacyclic_rows(n: int, budget: int) -> np.ndarray:
    s = 2 * n
    vecs = balanced_vectors(s)
    space = count_space(n)
    if space > ROW_SPACE_LIMIT:
        raise BudgetExceeded(
            f"block-negacyclic row space for n={n} has {space} candidates "
            f"(limit {ROW_SPACE_LIMIT})"
        )
    kept = []
    ones = np.ones(s, dtype=np.int8)
    for head in range(len(vecs)):
        combos = list(itertools.product(range(len(vecs)), repeat=s - 2))
        tails = np.array(combos, dtype=np.int64).reshape(len(combos), s - 2)
        segs = [np.broadcast_to(ones, (len(tails), s)), np.broadcast_to(vecs[head], (len(tails), s))]
        segs += [vecs[tails[:, t]] for t in range(s - 2)]
        rows = np.concatenate(segs, axis=1)
        ok = np.ones(len(rows), dtype=bool)
        shifted = rows.reshape(len(rows), s, s)
        for k in range(1, n):
            # rows that are orthogonal to their own k-th shift; k and s-k agree
            shifted_k = np.roll(shifted, k, axis=1).copy()
            shifted_k[:, :k] *= -1
            ok &= (rows.astype(np.int32) * shifted_k.reshape(len(rows), -1)).sum(axis=1) == 0
        kept.append(rows[ok])
    return np.concatenate(kept)


def _negacyclic(n: int, budget: int) -> Iterator[SignMatrix]:
    s = 2 * n
    rows = _negacyclic_rows(n, budget)
    rows_f = rows.astype(np.float64)
    first = balanced_vectors(s)[0]
    starts = np.flatnonzero((rows[:, s : 2 * s] == first).all(axis=1))
    every = np.arange(len(rows))
    nodes = 0

    def compatible(i: int, pool: np.ndarray) -> np.ndarray:
        nonlocal nodes
        nodes += 1
        if nodes > budget:
            raise BudgetExceeded(f"block-negacyclic search exceeded {budget} nodes")
        dots = rows_f[pool] @ _unshifts(rows[i], s).T
        return pool[(dots == 0).all(axis=1)]

    def extend(chosen: list[int], pool: np.ndarray, colsum: np.ndarray) -> Iterator[list[int]]:
        if len(chosen) == s:
            if not colsum.any():
                yield chosen
            return
        left = s - len(chosen) - 1
        for j, c in enumerate(pool.tolist()):
            nxt = colsum + rows[c, s:]
            if (np.abs(nxt) > left).any():
                continue
            rest = compatible(c, pool[j + 1 :])
            if len(rest) < left:
                continue
            yield from extend(chosen + [c], rest, nxt)

    for i0 in starts.tolist():
        pool = compatible(i0, every)
        pool = pool[pool != i0]
        if len(pool) < s - 1:
            continue
        for chosen in extend([i0], pool, rows[i0, s:].astype(np.int32)):
            segs = rows[chosen].reshape(s, s, s).transpose(1, 0, 2)
            yield block_negacyclic_matrix(list(segs))


def count_space(n: int) -> int:
    """Number of first-block-row candidates before filtering."""
    return math.comb(2 * n, n) ** (2 * n - 1)
