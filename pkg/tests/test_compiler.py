import numpy as np
import pytest

from hybridpack.compiler import (build_net, haar_unitary, letter_table, operator_distance, parse_word,
                                 single_qudit_library, sk_compile, to_special)
from hybridpack.errors import InvalidArgumentError
from hybridpack.hilbert import ChargeAssignment, make_dims


@pytest.fixture(scope="module")
def net2():
    return build_net(None, 12, 2)


def test_operator_distance_properties():
    rng = np.random.default_rng(0)
    U = haar_unitary(3, rng)
    assert operator_distance(U, np.exp(0.4j) * U) < 1e-7
    V = haar_unitary(3, rng)
    assert abs(operator_distance(U, V) - operator_distance(V, U)) < 1e-9
    assert operator_distance(np.eye(2), np.diag([1, -1])) == pytest.approx(np.sqrt(2))
    assert abs(np.linalg.det(to_special(U)) - 1) < 1e-9


def test_letter_table_inverses():
    table = letter_table(single_qudit_library(3))
    for l in table:
        assert np.allclose(l.matrix @ table[l.inverse].matrix, np.eye(3))


def test_parse_word_round_trip(net2):
    w = parse_word("HN T HN", list(net2.table))
    assert w.length == 3
    assert np.allclose(w.inverse().unitary() @ w.unitary(), np.eye(2))
    with pytest.raises(InvalidArgumentError):
        parse_word("bogus", list(net2.table))


def test_levels_improve(net2):
    rng = np.random.default_rng(3)
    charge = ChargeAssignment(make_dims(2, 1))
    for _ in range(3):
        U = haar_unitary(2, rng)
        e = [sk_compile(U, net2, k).epsilon for k in range(3)]
        assert e[2] < e[1] < e[0]
        w = sk_compile(U, net2, 2).word
        assert abs(operator_distance(U, w.unitary()) - e[2]) < 1e-12
        assert w.prefix_gauge_ok(charge)


def test_qutrit_net_words():
    net = build_net(None, 6, 3)
    assert len(net) > 10
    U = haar_unitary(3, np.random.default_rng(0))
    assert sk_compile(U, net, 1).epsilon <= sk_compile(U, net, 0).epsilon + 1e-12


def test_rejects_non_unitary(net2):
    with pytest.raises(InvalidArgumentError):
        sk_compile(np.ones((2, 2)), net2, 1)
