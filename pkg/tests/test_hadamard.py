import numpy as np
import pytest

from designswitch.design import IncidenceStructure, validate_2design
from designswitch.errors import (
    NotBushStructured,
    NotHadamard,
    NotRegular,
    OrderMismatch,
    WrongParameters,
    WrongRowSum,
)
from designswitch.hadamard import (
    SignMatrix,
    block_negacyclic_matrix,
    diagonal_switching_sets,
    format_sign_matrix,
    hadamard_to_menon,
    is_block_negacyclic,
    is_bush_type,
    is_hadamard,
    is_regular,
    menon_to_hadamard,
    normalize_row_sum,
    parse_sign_matrix,
)
from designswitch.switching import apply_switching, switching_closure


def _negate_block_row(a, g, s):
    # -1 in all blocks of block-row g except the diagonal one
    out = a.copy()
    rows = slice(g * s, (g + 1) * s)
    out[rows] *= -1
    out[rows, g * s : (g + 1) * s] *= -1
    return out


def test_predicates(bush4, bush16, bush36):
    for h, n in ((bush4, 1), (bush16, 2), (bush36, 3)):
        assert is_hadamard(h) and is_regular(h) and is_bush_type(h, n)
    assert is_block_negacyclic(bush4, 1)
    assert is_block_negacyclic(bush36, 3)
    assert not is_hadamard(np.ones((4, 4)))
    assert not is_hadamard(np.ones((2, 3)))


def test_order_mismatch(bush16):
    with pytest.raises(OrderMismatch):
        is_bush_type(bush16, 3)
    with pytest.raises(OrderMismatch):
        is_block_negacyclic(bush16, 1)


def test_not_bush_after_column_swap(bush36):
    # swapping columns across groups keeps Hadamard but breaks the tiling
    a = bush36.entries.astype(np.int64)
    a[:, [0, 6]] = a[:, [6, 0]]
    assert is_hadamard(a)
    assert not is_bush_type(a, 3)
    assert not is_block_negacyclic(a, 3)


def test_negacyclic_toy():
    j, k = np.ones((2, 2), dtype=int), np.array([[1, -1], [-1, 1]])
    h = block_negacyclic_matrix([j, k])
    assert np.array_equal(h.entries[2:, :2], -k)
    assert np.array_equal(h.entries[2:, 2:], j)
    assert is_block_negacyclic(h, 1) and is_bush_type(h, 1)
    bad = h.entries.astype(np.int64)
    bad[2:, :2] *= -1
    assert not is_block_negacyclic(bad, 1)


def test_menon_roundtrip(bush16, bush36, bush64):
    for h, n in ((bush16, 2), (bush36, 3), (bush64, 4)):
        d = hadamard_to_menon(h)
        p = validate_2design(d)
        assert (p.v, p.k, p.lam) == (4 * n * n, 2 * n * n - n, n * n - n)
        assert menon_to_hadamard(d, n) == h


def test_menon_order4_degenerate(bush4):
    d = hadamard_to_menon(bush4)
    assert (d.v, d.b) == (4, 4) and (d.block_sizes == 1).all()
    assert menon_to_hadamard(d, 1) == bush4


def test_menon_errors(bush16):
    with pytest.raises(WrongRowSum):
        hadamard_to_menon(-bush16.entries.astype(np.int64))
    with pytest.raises(NotHadamard):
        hadamard_to_menon(np.ones((4, 4)))
    h2 = np.array([[1, 1], [1, -1]])
    with pytest.raises(NotRegular):
        hadamard_to_menon(np.kron(h2, h2))
    with pytest.raises(WrongParameters):
        menon_to_hadamard(IncidenceStructure(np.eye(16, dtype=np.uint8)), 2)
    with pytest.raises(WrongParameters):
        menon_to_hadamard(hadamard_to_menon(bush16), 3)


def test_normalize_row_sum(bush16):
    neg = -bush16.entries.astype(np.int64)
    assert normalize_row_sum(neg) == bush16
    assert normalize_row_sum(bush16) == bush16
    with pytest.raises(NotRegular):
        normalize_row_sum(np.array([[1, 1], [1, -1]]))


def test_diagonal_sets(menon36):
    sets = diagonal_switching_sets(menon36, 3)
    assert len(sets) == 6
    for g, sw in enumerate(sets):
        assert sw.blocks == tuple(range(6 * g, 6 * g + 6))
        assert sw.p1 == sw.blocks and sw.p2 == ()
        assert len(sw.balanced) == 30


def test_diagonal_sets_reject(menon36, fano):
    with pytest.raises(NotBushStructured):
        diagonal_switching_sets(fano, 1)
    m = menon36.matrix.copy()
    m[:, [0, 6]] = m[:, [6, 0]]
    with pytest.raises(NotBushStructured):
        diagonal_switching_sets(IncidenceStructure(m), 3)


def test_switch_is_block_row_negation(bush36, menon36):
    a = bush36.entries.astype(np.int64)
    sets = diagonal_switching_sets(menon36, 3)
    for g in (0, 4):
        out = menon_to_hadamard(apply_switching(menon36, sets[g]), 3)
        assert np.array_equal(out.entries, _negate_block_row(a, g, 6))


def test_closure_stays_bush(bush16):
    d = hadamard_to_menon(bush16)
    for x in switching_closure(d, diagonal_switching_sets(d, 2)):
        assert is_bush_type(menon_to_hadamard(x, 2), 2)


def test_sign_matrix_format(bush16):
    text = format_sign_matrix(bush16)
    assert text.splitlines()[0] == "16"
    assert parse_sign_matrix(text) == bush16
    assert parse_sign_matrix("# comment\n2\n++ # x\n+-\n").m == 2
    for bad in ("", "2\n++\n", "2\n++\n+x\n", "2\n+++\n++\n", "2\n++\n+-\n++\n"):
        with pytest.raises(ValueError):
            parse_sign_matrix(bad)


def test_sign_matrix_validation(bush4):
    with pytest.raises(ValueError):
        SignMatrix(np.zeros((2, 2)))
    with pytest.raises(ValueError):
        SignMatrix(np.ones((2, 3)))
    with pytest.raises(ValueError):
        bush4.entries[0, 0] = -1
    assert bush4 == SignMatrix(bush4.entries) and hash(bush4) == hash(SignMatrix(bush4.entries))
