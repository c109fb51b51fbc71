import itertools

import pytest

from mlcheck.canon import canonical_form
from mlcheck.enumeration import (MAX_ORDER, BudgetExceeded, count_by_order, enumerate_multiplicative_lattices,
                                 iter_multiplicative_lattices, lattice_orders, lattices_of_order)

from oracles import Naive


def naive_axioms_hold(L):
    o = Naive(L)
    n, m = range(o.n), o.mul
    for a, b in itertools.product(n, repeat=2):
        if m[a][b] != m[b][a] or not o.le(m[a][b], o.meet(a, b)):
            return False
        for c in n:
            if m[m[a][b]][c] != m[a][m[b][c]] or m[a][o.join(b, c)] != o.join(m[a][b], m[a][c]):
                return False
    return all(m[o.top][a] == a and m[o.bottom][a] == o.bottom for a in n)


def test_lattice_order_counts():
    # unlabelled lattices with n elements
    assert [len(lattice_orders(n)) for n in range(2, 8)] == [1, 1, 2, 5, 15, 53]


def test_small_counts_by_hand():
    # order 2: the field; order 3: the 3-chain with m^2 = 0 or m^2 = m
    assert count_by_order(3) == {2: 1, 3: 2}


def test_counts_through_order_five_under_both_strategies():
    a = count_by_order(5, "order-first")
    b = count_by_order(5, "brute-force")
    assert a == b == {2: 1, 3: 2, 4: 7, 5: 26}


def test_both_strategies_find_the_same_classes():
    for n in range(2, 6):
        a = {canonical_form(L).certificate for L in lattices_of_order(n, "order-first")}
        b = {canonical_form(L).certificate for L in lattices_of_order(n, "brute-force")}
        assert a == b


def test_order_six_count():
    assert len(lattices_of_order(6)) == 129


def test_every_enumerated_lattice_satisfies_the_axioms(enumerated5):
    assert all(naive_axioms_hold(L) for L in enumerated5)
    certs = [canonical_form(L).certificate for L in enumerated5]
    assert len(set(certs)) == len(certs)


def test_order_and_names(enumerated5):
    sizes = [L.size for L in enumerated5]
    assert sizes == sorted(sizes)
    for L in enumerated5:
        assert L.name(L.bottom) == "0" and L.name(L.top) == "1"


def test_emit_callback_and_budget():
    seen = []
    out = enumerate_multiplicative_lattices(4, seen.append)
    assert len(out) == len(seen) == 10
    with pytest.raises(BudgetExceeded):
        list(iter_multiplicative_lattices(5, budget=10))


def test_bad_arguments():
    with pytest.raises(ValueError):
        lattices_of_order(3, "guesswork")
    with pytest.raises(ValueError):
        list(iter_multiplicative_lattices(MAX_ORDER + 1))
    assert lattices_of_order(1) == []
