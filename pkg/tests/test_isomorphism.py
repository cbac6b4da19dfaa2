import itertools

import numpy as np
import pytest
from oracles import aut_order_bruteforce, hadamard_order4_all, isomorphic_bruteforce, monomial_orbit, random_monomial

from designswitch.canon import ColoredGraph, canonical_form
from designswitch.design import IncidenceStructure, dual
from designswitch.errors import NotHadamard, NotSymmetric
from designswitch.isomorphism import (
    are_isomorphic,
    aut_group_order,
    design_certificate,
    hadamard_certificate,
    is_self_dual,
)


def _relabel(inc, rng):
    return IncidenceStructure(inc.matrix[rng.permutation(inc.b)][:, rng.permutation(inc.v)])


def test_fano_aut(fano):
    assert aut_group_order(fano) == 168
    assert aut_order_bruteforce(fano.matrix) == 168


def test_632_aut(d632):
    assert aut_group_order(d632) == aut_order_bruteforce(d632.matrix)


def test_certificate_stability(fano, rng):
    cert = design_certificate(fano)
    for _ in range(1000):
        assert design_certificate(_relabel(fano, rng)) == cert


def test_certificate_fields(fano, d632):
    c = design_certificate(fano)
    assert c.kind == "design" and c.group_order == 168
    assert len(c.digest) == 64 and c.to_dict() == {"digest": c.digest, "group_order": 168}
    assert c != design_certificate(d632)
    assert len({c, design_certificate(fano)}) == 1


def test_random_structures_against_bruteforce(rng):
    # half the pairs are relabelings, half are independent draws
    for trial in range(50):
        a = (rng.random((6, 8)) < 0.4).astype(np.uint8)
        if trial % 2:
            b = a[rng.permutation(6)][:, rng.permutation(8)]
        else:
            b = (rng.random((6, 8)) < 0.4).astype(np.uint8)
        got = are_isomorphic(IncidenceStructure(a), IncidenceStructure(b))
        assert got == isomorphic_bruteforce(a, b)
        if trial % 2:
            assert got


def test_aut_small_structures(rng):
    for _ in range(10):
        while True:
            a = (rng.random((7, 6)) < 0.5).astype(np.uint8)
            if len({tuple(r) for r in a}) == 7:
                break
        assert aut_group_order(IncidenceStructure(a)) == aut_order_bruteforce(a)


def test_points_never_swap_with_blocks():
    # a 3x3 identity is isomorphic to its dual, but an asymmetric
    # structure must not be matched to its transpose
    a = np.array([[1, 1, 0], [0, 0, 1]], dtype=np.uint8)
    assert not are_isomorphic(IncidenceStructure(a), IncidenceStructure(a.T.copy()))


def test_self_dual(fano, menon36, d632):
    assert is_self_dual(fano)
    assert is_self_dual(menon36) == are_isomorphic(menon36, dual(menon36))
    with pytest.raises(NotSymmetric):
        is_self_dual(d632)


def test_hadamard_order4_one_class():
    mats = hadamard_order4_all()
    assert len(mats) == 768
    orbit = monomial_orbit(mats[0])
    assert {m.astype(np.int8).tobytes() for m in mats} == orbit
    certs = {hadamard_certificate(m) for m in mats}
    assert len(certs) == 1


@pytest.mark.parametrize("fixture", ["bush4", "bush36"])
def test_hadamard_monomial_invariance(fixture, request, rng):
    h = request.getfixturevalue(fixture).entries.astype(np.int64)
    cert = hadamard_certificate(h)
    for _ in range(100):
        assert hadamard_certificate(random_monomial(h, rng)) == cert


def test_hadamard_group_order_order4():
    # orbit-stabilizer: (4! 2^4)^2 signed permutation pairs, 768 images
    h = hadamard_order4_all()[0]
    assert hadamard_certificate(h).group_order == (24 * 16) ** 2 // 768


def test_hadamard_sylvester_16(rng):
    # every order-4 Hadamard matrix is equivalent to H2 x H2, so any
    # Kronecker square of one lands in the Sylvester class of order 16
    h2 = np.array([[1, 1], [1, -1]])
    syl = np.kron(np.kron(h2, h2), np.kron(h2, h2))
    mats = hadamard_order4_all()
    sq = np.kron(mats[5], mats[700])
    assert hadamard_certificate(sq) == hadamard_certificate(syl)
    assert hadamard_certificate(sq).digest == hadamard_certificate(random_monomial(syl, rng)).digest


def test_not_hadamard():
    with pytest.raises(NotHadamard):
        hadamard_certificate(np.ones((4, 4), dtype=int))
    with pytest.raises(NotHadamard):
        hadamard_certificate(np.array([[1, 0], [0, 1]]))


def test_colored_graph_validation():
    with pytest.raises(ValueError):
        ColoredGraph(np.zeros((2, 3)), np.zeros(2))
    with pytest.raises(ValueError):
        ColoredGraph(np.array([[0, 1], [0, 0]]), np.zeros(2))
    with pytest.raises(ValueError):
        ColoredGraph(np.eye(2), np.zeros(2))
    with pytest.raises(ValueError):
        ColoredGraph(np.zeros((2, 2)), np.zeros(3))


def test_canonical_form_cycle_and_colors():
    n = 6
    adj = np.zeros((n, n), dtype=np.uint8)
    for i in range(n):
        adj[i, (i + 1) % n] = adj[(i + 1) % n, i] = 1
    g = ColoredGraph(adj, np.zeros(n))
    res = canonical_form(g)
    assert res.group_order == 12
    for perm in itertools.islice(itertools.permutations(range(n)), 0, 720, 37):
        assert canonical_form(g.relabel(np.array(perm))).form == res.form
    colored = ColoredGraph(adj, np.array([1, 0, 0, 0, 0, 0]))
    assert canonical_form(colored).group_order == 2
