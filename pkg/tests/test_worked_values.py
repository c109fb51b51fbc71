"""Small hand-checkable values, each confirmed by the naive oracle as well."""

from mlcheck.constructions import diamond6, divisor_lattice
from mlcheck.elements import (classify_element, min_primes, principal_status, profile, radical)
from mlcheck.factorization import (check_zpi_prufer, classify_factorization_lattice, factor_closure,
                                   factorization, oafl_fastpath, tafl_fastpath)
from mlcheck.rings import RingPresentation, build_ring, ideal_lattice

from oracles import Naive


def test_diamond_operations():
    L = diamond6()
    i, o = L.index, Naive(L)
    assert L.name(L.join([i("b"), i("c")])) == "d" == L.name(o.join(i("b"), i("c")))
    assert L.name(L.meet([i("b"), i("c")])) == "a" == L.name(o.meet(i("b"), i("c")))
    assert L.name(L.residual(i("c"), i("b"))) == "d" == L.name(o.residual(i("c"), i("b")))
    assert L.residual(i("c"), L.top) == i("c")
    k, v = L.stable_power(i("d"))
    assert (k, L.name(v)) == (2, "a")
    assert L.stable_power(L.top) == (1, L.top)


def test_diamond_element_b():
    L = diamond6()
    b = L.index("b")
    st = principal_status(L, b)
    assert st.weak_meet and not st.weak_join
    assert Naive(L).principal_laws(b)[2:] == (True, False)
    c = classify_element(L, b)
    assert c.is_proper and not c.is_prime and c.is_primary and c.is_two_absorbing and c.is_one_absorbing
    assert not c.is_principal and not c.is_nilpotent and not c.is_comparable
    assert L.name(radical(L, b)) == "d"
    assert {L.name(p) for p in min_primes(L, L.index("a"))} == {"d"}


def test_diamond_profile_and_factorization():
    L = diamond6()
    prof = profile(L)
    assert prof.is_quasi_local and prof.is_domain and prof.dimension == 1
    assert not prof.is_principally_generated
    assert {L.name(x) for x in prof.principal_elements} == {"0", "1"}
    assert {L.name(x) for x in factor_closure(L, "prime").reachable} == {"0", "1", "a", "d"}
    assert factorization(L, L.index("b"), "prime") is None
    assert factorization(L, L.index("b"), "oa").factors == (L.index("b"),)
    fp = classify_factorization_lattice(L)
    assert fp.is_oafl and fp.is_tafl and not fp.is_zpi
    assert not oafl_fastpath(L).applicable


def test_d12_values():
    D = divisor_lattice(12)
    i = D.index
    assert D.name(D.join([i("4"), i("6")])) == "2"
    assert D.name(D.meet([i("2"), i("3")])) == "6"
    assert D.name(radical(D, i("12"))) == "6"
    assert {D.name(p) for p in min_primes(D, i("12"))} == {"2", "3"}
    assert [D.name(f) for f in factorization(D, i("12"), "prime").factors] == ["2", "2", "3"]
    assert all(all(principal_status(D, e)[:4]) for e in range(D.size))
    fp = classify_factorization_lattice(D)
    assert fp.is_zpi and fp.is_oafl and fp.is_poafl
    assert check_zpi_prufer(D).statements == (True, True, True)
    o = Naive(D)
    assert not o.is_prime(i("4")) and not o.is_primary(i("6")) and not o.is_two_absorbing(i("12"))


def test_square_zero_local_ring():
    # Z/4[x]/(x^2, 2x): maximal ideal m = (2, x) with m^2 = 0, a plane over F2
    res = ideal_lattice(build_ring(RingPresentation(4, (1, 0, 0), ((2, 0),))))
    L = res.lattice
    assert sorted(L.names) == sorted(["(0)", "(2)", "(x)", "(2+x)", "(2,x)", "(1)"])
    fp = classify_factorization_lattice(L)
    assert fp.is_oafl and fp.is_tafl and fp.is_ptafl and not fp.is_zpi
    assert factorization(L, L.index("(x)"), "prime") is None
    v = oafl_fastpath(L)
    assert v.applicable and v.branches == {"b"} and v.oafl
    t = tafl_fastpath(L)
    assert t.applicable and t.tafl and profile(L).dimension == 0
