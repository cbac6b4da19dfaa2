"""Block-by-point orbit matrices and switching at the orbit level.

Entry ``c[i, j]`` counts the points of point orbit ``j`` on one block of block
orbit ``i``.  A union ``S`` of block orbits is a switching set of the
underlying design exactly when each point orbit is wholly missed, wholly
covered, or meets ``S`` in half of its blocks; switching then replaces
``c[i, j]`` by ``w[j] - c[i, j]`` on the balanced orbits.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Iterable, Optional, Sequence

import numpy as np

from .design import DesignParams
from .errors import IndexOutOfRange, OddSize, OrbitSplitsClasses, WrongParameters

BUILTIN = ("M1", "M2", "M3", "M3p")


@dataclass(frozen=True, eq=False)
class OrbitMatrix:
    block_lengths: tuple[int, ...]
    point_lengths: tuple[int, ...]
    entries: np.ndarray
    params: Optional[DesignParams] = None

    def __post_init__(self) -> None:
        beta = tuple(int(x) for x in self.block_lengths)
        omega = tuple(int(x) for x in self.point_lengths)
        c = np.array(self.entries, dtype=np.int64, copy=True)
        if c.ndim != 2 or c.shape != (len(beta), len(omega)):
            raise ValueError(f"entries must be {len(beta)} x {len(omega)}")
        if min(beta + omega, default=1) < 1:
            raise ValueError("orbit lengths must be positive")
        c.setflags(write=False)
        object.__setattr__(self, "block_lengths", beta)
        object.__setattr__(self, "point_lengths", omega)
        object.__setattr__(self, "entries", c)

    @property
    def shape(self) -> tuple[int, int]:
        return self.entries.shape

    def design_params(self) -> DesignParams:
        """The given parameters, or those implied by the orbit lengths and row 0."""
        if self.params is not None:
            return self.params
        v, b = sum(self.point_lengths), sum(self.block_lengths)
        if not self.entries.size:
            raise WrongParameters("empty orbit matrix")
        k = int(self.entries[0].sum())
        r, lam = Fraction(b * k, v), Fraction(b * k * (k - 1), v * (v - 1))
        if r.denominator != 1 or lam.denominator != 1:
            raise WrongParameters(f"no 2-design with v={v}, b={b}, k={k}")
        return DesignParams(v=v, b=b, r=int(r), k=k, lam=int(lam))

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, OrbitMatrix):
            return NotImplemented
        return (
            self.block_lengths == other.block_lengths
            and self.point_lengths == other.point_lengths
            and bool(np.array_equal(self.entries, other.entries))
        )

    def __hash__(self) -> int:
        return hash((self.block_lengths, self.point_lengths, self.entries.tobytes()))


# -- validation --------------------------------------------------------------


@dataclass(frozen=True)
class Failure:
    identity: str
    indices: tuple[int, ...]
    expected: object
    actual: object

    def __str__(self) -> str:
        at = ",".join(map(str, self.indices))
        return f"{self.identity} [{at}]: expected {self.expected}, got {self.actual}"


@dataclass(frozen=True)
class OrbitReport:
    params: Optional[DesignParams]
    failures: tuple[Failure, ...] = field(default_factory=tuple)

    @property
    def ok(self) -> bool:
        return not self.failures

    def failed(self, identity: str) -> list[Failure]:
        return [f for f in self.failures if f.identity == identity]


def validate_orbit_matrix(om: OrbitMatrix) -> OrbitReport:
    """Check bounds, orbit totals and the row, column and orthogonality identities.

    The orthogonality identity is only checked for symmetric parameters.
    """
    try:
        p = om.design_params()
    except WrongParameters as exc:
        return OrbitReport(None, (Failure("params", (), "2-design parameters", str(exc)),))
    beta, omega, c = om.block_lengths, om.point_lengths, om.entries
    out: list[Failure] = []
    if sum(omega) != p.v:
        out.append(Failure("points", (), p.v, sum(omega)))
    if sum(beta) != p.b:
        out.append(Failure("blocks", (), p.b, sum(beta)))
    for i, j in zip(*np.nonzero((c < 0) | (c > np.array(omega)))):
        out.append(Failure("bounds", (int(i), int(j)), f"0..{omega[j]}", int(c[i, j])))
    for i, s in enumerate(c.sum(axis=1).tolist()):
        if s != p.k:
            out.append(Failure("row", (i,), p.k, s))
    colsum = (np.array(beta)[:, None] * c).sum(axis=0).tolist()
    for j, s in enumerate(colsum):
        if s != omega[j] * p.r:
            out.append(Failure("column", (j,), omega[j] * p.r, s))
    if p.symmetric:
        rows = c.tolist()
        for i, i2 in itertools.combinations_with_replacement(range(len(beta)), 2):
            got = sum(
                Fraction(beta[i] * x * y, w) for x, y, w in zip(rows[i], rows[i2], omega)
            )
            want = p.lam * beta[i] + (p.k - p.lam if i == i2 else 0)
            if got != want:
                out.append(Failure("orthogonality", (i, i2), want, got))
    return OrbitReport(p, tuple(out))


# -- switching ---------------------------------------------------------------


@dataclass(frozen=True)
class OrbitClasses:
    p1: tuple[int, ...]
    p2: tuple[int, ...]
    balanced: tuple[int, ...]


def classify_point_orbits(om: OrbitMatrix, rows: Iterable[int]) -> OrbitClasses:
    """Sort point orbits by how often one of their points lies on the blocks of ``rows``."""
    s = _rows(om, rows)
    size = sum(om.block_lengths[i] for i in s)
    if size % 2:
        raise OddSize(f"the chosen block orbits hold {size} blocks")
    p1, p2, bal = [], [], []
    for j, w in enumerate(om.point_lengths):
        deg = sum(Fraction(om.block_lengths[i] * int(om.entries[i, j]), w) for i in s)
        if deg == 0:
            p1.append(j)
        elif deg == size:
            p2.append(j)
        elif 2 * deg == size:
            bal.append(j)
        else:
            raise OrbitSplitsClasses(j)
    return OrbitClasses(tuple(p1), tuple(p2), tuple(bal))


def _rows(om: OrbitMatrix, rows: Iterable[int]) -> list[int]:
    s = sorted({int(i) for i in rows})
    if s and (s[0] < 0 or s[-1] >= len(om.block_lengths)):
        raise IndexOutOfRange(f"block orbit indices must lie in 0..{len(om.block_lengths) - 1}")
    return s


def orbit_switching(om: OrbitMatrix, rows: Iterable[int]) -> OrbitMatrix:
    """Switch the union of the block orbits ``rows``."""
    s = _rows(om, rows)
    cls = classify_point_orbits(om, s)
    c = om.entries.copy()
    if s and cls.balanced:
        idx = np.ix_(s, list(cls.balanced))
        c[idx] = np.array(om.point_lengths)[list(cls.balanced)] - c[idx]
    return OrbitMatrix(om.block_lengths, om.point_lengths, c, om.params)


def orbit_switching_candidates(om: OrbitMatrix, max_rows: int) -> list[tuple[int, ...]]:
    """Non-empty block-orbit subsets with at most ``max_rows`` blocks that can be switched."""
    out = []
    t = len(om.block_lengths)

    def walk(start: int, chosen: list[int], size: int) -> None:
        for i in range(start, t):
            grown = size + om.block_lengths[i]
            if grown > max_rows:
                continue
            chosen.append(i)
            if grown % 2 == 0:
                try:
                    classify_point_orbits(om, chosen)
                    out.append(tuple(chosen))
                except OrbitSplitsClasses:
                    pass
            walk(i + 1, chosen, grown)
            chosen.pop()

    walk(0, [], 0)
    return sorted(out)


# -- equivalence -------------------------------------------------------------


def orbit_matrices_equivalent(
    om1: OrbitMatrix, om2: OrbitMatrix
) -> Optional[tuple[tuple[int, ...], tuple[int, ...]]]:
    """Row and column permutations with ``om1[row[i], col[j]] == om2[i, j]``.

    Permutations only move orbits of equal length.  The column permutation
    returned is the lexicographically first one that works; rows are then
    matched greedily, smallest free index first.  ``None`` if there is none.
    """
    b1, b2 = om1.block_lengths, om2.block_lengths
    w1, w2 = om1.point_lengths, om2.point_lengths
    if sorted(b1) != sorted(b2) or sorted(w1) != sorted(w2):
        return None
    c1, c2 = om1.entries.tolist(), om2.entries.tolist()
    t = len(w2)
    col: list[int] = []
    used = [False] * t

    def prefix_profile(rows, beta, cols) -> Counter:
        return Counter((beta[i], tuple(rows[i][j] for j in cols)) for i in range(len(beta)))

    def dfs(j: int) -> Optional[tuple[int, ...]]:
        if j == t:
            return tuple(col)
        for cand in range(t):
            if used[cand] or w1[cand] != w2[j]:
                continue
            col.append(cand)
            if prefix_profile(c1, b1, col) == prefix_profile(c2, b2, range(j + 1)):
                used[cand] = True
                found = dfs(j + 1)
                if found is not None:
                    return found
                used[cand] = False
            col.pop()
        return None

    cols = dfs(0)
    if cols is None:
        return None
    free = list(range(len(b1)))
    row = []
    for i in range(len(b2)):
        want = (b2[i], tuple(c2[i]))
        hit = next(r for r in free if (b1[r], tuple(c1[r][j] for j in cols)) == want)
        free.remove(hit)
        row.append(hit)
    return tuple(row), cols


# -- text fixtures -----------------------------------------------------------


def parse_orbit_matrix(text: str, params: Optional[DesignParams] = None) -> OrbitMatrix:
    """Read ``t``, the point orbit lengths, then ``t`` lines ``beta : c_1 ... c_t``."""
    lines = [ln.split("#", 1)[0].strip() for ln in text.splitlines()]
    lines = [ln for ln in lines if ln]
    if len(lines) < 2:
        raise ValueError("orbit matrix needs a count line and a point-orbit line")
    t = int(lines[0])
    omega = [int(x) for x in lines[1].split()]
    if len(omega) != t or len(lines) != t + 2:
        raise ValueError(f"expected {t} point orbit lengths and {t} rows")
    beta, rows = [], []
    for ln in lines[2:]:
        head, sep, tail = ln.partition(":")
        if not sep:
            raise ValueError(f"row {ln!r} lacks 'beta :'")
        beta.append(int(head))
        rows.append([int(x) for x in tail.split()])
    return OrbitMatrix(tuple(beta), tuple(omega), np.array(rows, dtype=np.int64), params)


def format_orbit_matrix(om: OrbitMatrix) -> str:
    width = max(len(str(x)) for x in om.entries.ravel().tolist() + list(om.point_lengths))
    bw = max(len(str(x)) for x in om.block_lengths)

    def cells(xs: Sequence[int]) -> str:
        return " ".join(str(x).rjust(width) for x in xs)

    out = [str(len(om.point_lengths)), " " * (bw + 3) + cells(om.point_lengths)]
    for beta, row in zip(om.block_lengths, om.entries.tolist()):
        out.append(f"{str(beta).rjust(bw)} : {cells(row)}")
    return "\n".join(out) + "\n"


def load_builtin(name: str) -> OrbitMatrix:
    """One of the shipped (64, 28, 12) orbit matrices: M1, M2, M3 or M3p."""
    if name not in BUILTIN:
        raise KeyError(f"unknown orbit matrix {name!r}; choose from {', '.join(BUILTIN)}")
    text = resources.files("designswitch.data").joinpath(f"{name}.om").read_text()
    return parse_orbit_matrix(text, DesignParams(v=64, b=64, r=28, k=28, lam=12))
