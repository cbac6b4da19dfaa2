"""Certificates, isomorphism, automorphism group orders and self-duality.

Designs are canonized through their point/block incidence graph (points and
blocks colored apart, so a point is never mapped to a block).  Hadamard
matrices use the 4m-vertex signed graph: vertices r_i^+, r_i^-, c_j^+, c_j^-
with r_i^s ~ c_j^t iff s * t * H[i, j] = 1; its color-preserving
isomorphisms are exactly row/column permutations and negations.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .canon import CanonResult, ColoredGraph, canonical_form
from .design import IncidenceStructure, dual
from .errors import NotHadamard, NotSymmetric


@dataclass(frozen=True, eq=False)
class Certificate:
    """Canonical byte string of an isomorphism (or equivalence) class."""

    kind: str
    key: bytes
    group_order: int

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.kind.encode() + b"\0" + self.key).hexdigest()

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Certificate):
            return NotImplemented
        return self.kind == other.kind and self.key == other.key

    def __hash__(self) -> int:
        return hash((self.kind, self.key))

    def to_dict(self) -> dict:
        return {"digest": self.digest, "group_order": self.group_order}


# -- designs -----------------------------------------------------------------


def design_graph(inc: IncidenceStructure) -> ColoredGraph:
    v, b = inc.v, inc.b
    adj = np.zeros((v + b, v + b), dtype=np.uint8)
    adj[v:, :v] = inc.matrix
    adj[:v, v:] = inc.matrix.T
    return ColoredGraph(adj, np.r_[np.zeros(v, np.int64), np.ones(b, np.int64)])


def _triple_histograms(a: np.ndarray) -> np.ndarray:
    """Per column p of ``a``: histogram over column pairs {q, r} (both != p)
    of the number of rows meeting p, q and r."""
    rows, cols = a.shape
    a = a.astype(np.float64)
    iu = np.triu_indices(cols, 1)
    out = np.zeros((cols, rows + 1), dtype=np.int64)
    for p in range(cols):
        t = (a.T * a[:, p]) @ a
        keep = (iu[0] != p) & (iu[1] != p)
        out[p] = np.bincount(t[iu][keep].astype(np.int64), minlength=rows + 1)
    return out


def _design_invariant(inc: IncidenceStructure):
    a = inc.matrix
    if min(a.shape) == 0:
        return None
    point_inv = _triple_histograms(a)
    block_inv = _triple_histograms(a.T)
    width = max(point_inv.shape[1], block_inv.shape[1])
    inv = np.zeros((inc.v + inc.b, width), dtype=np.int64)
    inv[: inc.v, : point_inv.shape[1]] = point_inv
    inv[inc.v :, : block_inv.shape[1]] = block_inv
    return lambda adj, colors: inv


def _canon_design(inc: IncidenceStructure) -> CanonResult:
    return canonical_form(design_graph(inc), _design_invariant(inc))


def design_certificate(inc: IncidenceStructure) -> Certificate:
    res = _canon_design(inc)
    head = np.array([inc.v, inc.b], dtype=np.int64).tobytes()
    return Certificate("design", head + res.form, res.group_order)


def are_isomorphic(d1: IncidenceStructure, d2: IncidenceStructure) -> bool:
    if (d1.v, d1.b) != (d2.v, d2.b):
        return False
    return design_certificate(d1) == design_certificate(d2)


def aut_group_order(inc: IncidenceStructure) -> int:
    """Order of the full automorphism group (point and block permutations)."""
    return _canon_design(inc).group_order


def is_self_dual(inc: IncidenceStructure) -> bool:
    if inc.v != inc.b:
        raise NotSymmetric(f"self-duality needs v = b, got v={inc.v}, b={inc.b}")
    return design_certificate(inc) == design_certificate(dual(inc))


# -- Hadamard matrices -------------------------------------------------------


def _as_sign_array(h) -> np.ndarray:
    a = np.asarray(getattr(h, "entries", h), dtype=np.int64)
    return a


def _check_hadamard(h: np.ndarray) -> None:
    m = h.shape[0]
    if h.ndim != 2 or h.shape != (m, m) or not np.isin(h, (-1, 1)).all():
        raise NotHadamard("not a square +-1 matrix")
    if not np.array_equal(h @ h.T, m * np.eye(m, dtype=np.int64)):
        raise NotHadamard("rows are not pairwise orthogonal")


def hadamard_graph(h) -> ColoredGraph:
    h = _as_sign_array(h)
    m = h.shape[0]
    pos = (h > 0).astype(np.uint8)
    neg = 1 - pos
    adj = np.zeros((4 * m, 4 * m), dtype=np.uint8)
    adj[:m, 2 * m : 3 * m] = pos
    adj[m : 2 * m, 3 * m :] = pos
    adj[:m, 3 * m :] = neg
    adj[m : 2 * m, 2 * m : 3 * m] = neg
    adj |= adj.T
    return ColoredGraph(adj, np.r_[np.zeros(2 * m, np.int64), np.ones(2 * m, np.int64)])


def _profile_histograms(h: np.ndarray) -> np.ndarray:
    """Per row i: histogram over row triples {j, k, l} (all distinct from i)
    of |sum_c h[i,c] h[j,c] h[k,c] h[l,c]|, each triple counted 3 times."""
    m = h.shape[0]
    out = np.zeros((m, m + 1), dtype=np.int64)
    if m < 4:
        return out
    hf = h.astype(np.float64)
    iu = np.triu_indices(m, 1)
    pair_prod = hf[iu[0]] * hf[iu[1]]
    idx = np.arange(m)
    pair_has = (iu[0][None, :] == idx[:, None]) | (iu[1][None, :] == idx[:, None])
    for i in range(m):
        z = np.abs((hf * hf[i]) @ pair_prod.T).astype(np.int64)
        valid = ~pair_has & ~pair_has[i][None, :]
        valid[i] = False
        out[i] = np.bincount(z[valid], minlength=m + 1)
    return out


def _hadamard_invariant(h: np.ndarray):
    rows = _profile_histograms(h)
    cols = _profile_histograms(h.T)
    inv = np.concatenate([rows, rows, cols, cols])
    return lambda adj, colors: inv


def hadamard_certificate(h) -> Certificate:
    """Certificate of the Hadamard equivalence class of ``h``.

    ``group_order`` counts pairs of signed permutation matrices (P, Q) with
    P h Q^T = h, so it includes the global negation (-I, -I).
    """
    a = _as_sign_array(h)
    _check_hadamard(a)
    res = canonical_form(hadamard_graph(a), _hadamard_invariant(a))
    head = np.array([a.shape[0]], dtype=np.int64).tobytes()
    return Certificate("hadamard", head + res.form, res.group_order)
