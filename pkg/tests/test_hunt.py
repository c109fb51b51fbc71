import pytest

from mlcheck.canon import canonical_form
from mlcheck.constructions import divisor_lattice
from mlcheck.hunt import CONJECTURES, candidates, hunt

from oracles import Naive


@pytest.fixture(scope="module")
def pool():
    return candidates(5)


def test_candidates_are_distinct_and_ordered(pool):
    keys = [(L.size, canonical_form(L).certificate) for _, L in pool]
    assert keys == sorted(keys)
    assert len({k[1] for k in keys}) == len(keys)
    assert any(ident.startswith("ring:") for ident, _ in pool)


def test_meet_of_oa_counterexample_is_genuine():
    res = hunt("meet-of-OA-is-OA")
    assert res.status == "counterexample" and res.lattice.size <= 6
    L, w = res.lattice, res.witness
    o = Naive(L)
    x, y, z = (L.index(w[k]) for k in ("x", "y", "meet"))
    assert o.is_one_absorbing(x) and o.is_one_absorbing(y)
    assert o.meet(x, y) == z and not o.is_one_absorbing(z)


def test_meet_of_oa_fails_in_d12():
    # 2 and 3 are prime (so OA) in D12, but their meet 6 is TA and not OA
    L = divisor_lattice(12)
    o = Naive(L)
    two, three, six = L.index("2"), L.index("3"), L.index("6")
    assert o.is_one_absorbing(two) and o.is_one_absorbing(three)
    assert o.meet(two, three) == six
    assert o.is_two_absorbing(six) and not o.is_one_absorbing(six)


def test_smaller_meet_counterexample_exists():
    # D10 = F x F already refutes the statement, so the size-ordered search finds it first
    res = hunt("meet-of-OA-is-OA")
    assert res.lattice_id == "divisors:10" and res.witness == {"x": "2", "y": "5", "meet": "10"}


def test_ta_implies_oa_refuted_in_corpus():
    res = hunt("ta-implies-oa")
    assert res.status == "counterexample"
    o = Naive(res.lattice)
    x = res.lattice.index(res.witness["x"])
    assert o.is_two_absorbing(x) and not o.is_one_absorbing(x)


@pytest.mark.parametrize("cid", ["prime-implies-oa", "oa-implies-ta", "oa-implies-primary", "join-of-OA-is-OA"])
def test_true_statements_stay_clean(cid, pool):
    res = hunt(cid)
    assert res.status == "clean" and res.examined == len(pool)


def test_primary_implies_oa_refuted():
    res = hunt("primary-implies-oa")
    o = Naive(res.lattice)
    x = res.lattice.index(res.witness["x"])
    assert o.is_primary(x) and not o.is_one_absorbing(x)


def test_every_conjecture_runs():
    for cid in CONJECTURES:
        assert hunt(cid, max_order=4).status in {"clean", "counterexample"}


def test_budget_is_distinct_from_clean():
    res = hunt("prime-implies-oa", budget=5)
    assert res.status == "budget-exhausted" and res.examined == 5


def test_unknown_conjecture():
    with pytest.raises(KeyError):
        hunt("everything-is-prime")
