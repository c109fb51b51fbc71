import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mlcheck.constructions import diamond6, divisor_lattice
from mlcheck.enumeration import iter_multiplicative_lattices
from mlcheck.lattice import (InvalidLattice, LatticeSpec, SizeCapExceeded, check_axioms, lattice,
                             validate)
from mlcheck.mlat import MlatError, dumps, loads, parse

from oracles import Naive

SMALL = list(iter_multiplicative_lattices(5)) + [diamond6(), divisor_lattice(36), divisor_lattice(60)]

CHAIN4 = [(0, 1), (1, 2), (2, 3)]


def chain4(aa, ab, bb):
    # 0 < a < b < 1
    return LatticeSpec(4, CHAIN4, [[0, 0, 0, 0], [0, aa, ab, 1], [0, ab, bb, 2], [0, 1, 2, 3]])


def axioms_of(spec):
    report, _ = check_axioms(spec)
    return report.axioms()


@pytest.mark.parametrize("spec, axiom", [
    (LatticeSpec(2, [(0, 1), (1, 0)], [[0, 0], [0, 1]]), "antisymmetry"),
    (LatticeSpec(3, [(0, 2), (1, 2)], [[0, 0, 0]] * 3), "bottom"),
    (LatticeSpec(3, [(0, 1), (0, 2)], [[0, 0, 0]] * 3), "top"),
    (LatticeSpec(6, [(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 5), (4, 5)], [[0] * 6] * 6), "join"),
    (LatticeSpec(6, [(0, 1), (0, 2), (1, 3), (2, 3), (1, 4), (2, 4), (3, 5), (4, 5)], [[0] * 6] * 6), "meet"),
    (LatticeSpec(3, [(0, 1), (1, 2)], [[0, 0, 0], [0, 0, 1], [0, 0, 2]]), "commutativity"),
    (LatticeSpec(3, [(0, 1), (1, 2)], [[0, 0, 0], [0, 0, 0], [0, 0, 2]]), "identity"),
    (LatticeSpec(3, [(0, 1), (1, 2)], [[1, 0, 0], [0, 1, 1], [0, 1, 2]]), "zero"),
    (LatticeSpec(3, [(0, 1), (1, 2)], [[0, 0, 0], [0, 2, 1], [0, 1, 2]]), "mul-below-meet"),
    (chain4(1, 0, 2), "monotonicity"),
    (LatticeSpec(4, [(0, 1), (0, 2), (1, 3), (2, 3)], [[0, 0, 0, 0], [0, 0, 0, 1], [0, 0, 2, 2], [0, 1, 2, 3]]),
     "distributivity"),
    (chain4(0, 1, 1), "associativity"),
])
def test_each_axiom_violation_is_reported(spec, axiom):
    assert axiom in axioms_of(spec)


def test_associativity_is_the_only_failure_of_that_chain():
    assert axioms_of(chain4(0, 1, 1)) == ["associativity"]


def test_validate_raises_with_report():
    with pytest.raises(InvalidLattice) as err:
        validate(chain4(0, 1, 1))
    assert err.value.report.axioms() == ["associativity"]


def test_malformed_spec_is_a_value_error():
    with pytest.raises(ValueError):
        check_axioms(LatticeSpec(2, [(0, 5)], [[0, 0], [0, 1]]))
    with pytest.raises(ValueError):
        check_axioms(LatticeSpec(2, [(0, 1)], [[0, 0]]))


def test_out_of_range_product():
    assert "range" in axioms_of(LatticeSpec(2, [(0, 1)], [[0, 0], [0, 7]]))


def test_size_cap_from_environment(monkeypatch):
    monkeypatch.setenv("MLCHECK_SIZE_CAP", "5")
    with pytest.raises(SizeCapExceeded):
        divisor_lattice(12)
    monkeypatch.setenv("MLCHECK_SIZE_CAP", "6")
    assert divisor_lattice(12).size == 6


def test_bad_size_cap_value(monkeypatch):
    monkeypatch.setenv("MLCHECK_SIZE_CAP", "lots")
    with pytest.raises(ValueError):
        divisor_lattice(12)


def test_tables_match_naive_oracle():
    for L in SMALL:
        o = Naive(L)
        assert L.bottom == o.bottom and L.top == o.top
        for a in range(L.size):
            for b in range(L.size):
                assert L.le(a, b) == o.le(a, b)
                assert L.join_table[a][b] == o.join(a, b)
                assert L.meet_table[a][b] == o.meet(a, b)
                assert L.residual(a, b) == o.residual(a, b)


def test_divisor_lattice_arithmetic():
    D = divisor_lattice(12)
    assert D.names == ("1", "2", "3", "4", "6", "12")
    i = D.index
    assert D.bottom == i("12") and D.top == i("1")
    assert D.join_table[i("4")][i("6")] == i("2")       # gcd
    assert D.meet_table[i("4")][i("6")] == i("12")      # lcm
    assert D.mul(i("2"), i("6")) == i("12")
    assert D.residual(i("4"), i("2")) == i("2")


def test_empty_join_meet_product():
    L = diamond6()
    assert L.join([]) == L.bottom
    assert L.meet([]) == L.top
    assert L.product([]) == L.top


def test_stable_power():
    L = divisor_lattice(8)
    k, v = L.stable_power(L.index("2"))
    assert v == L.bottom and L.power(L.index("2"), k) == v


element_pairs = st.sampled_from(SMALL).flatmap(
    lambda L: st.tuples(st.just(L), st.integers(0, L.size - 1), st.integers(0, L.size - 1),
                        st.integers(0, L.size - 1)))


@settings(max_examples=300, deadline=None)
@given(element_pairs)
def test_residual_is_adjoint_to_multiplication(case):
    L, x, a, b = case
    assert L.le(x, L.residual(a, b)) == L.le(L.mul(x, b), a)


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(SMALL), st.randoms(use_true_random=False))
def test_relabel_preserves_structure(L, rnd):
    perm = list(range(L.size))
    rnd.shuffle(perm)
    R = L.relabel(perm)
    for a in range(L.size):
        for b in range(L.size):
            assert R.le(perm[a], perm[b]) == L.le(a, b)
            assert R.mul(perm[a], perm[b]) == perm[L.mul(a, b)]
            assert R.join_table[perm[a]][perm[b]] == perm[L.join_table[a][b]]
    assert R.names[perm[0]] == L.names[0]


# -- mlat -----------------------------------------------------------------------------------

@pytest.mark.parametrize("L", SMALL[:12] + [diamond6()])
def test_mlat_round_trip(L):
    text = dumps(L, "a comment\nover two lines")
    M = loads(text)
    assert M.names == L.names
    assert M.mul_table == L.mul_table
    assert all(M.le(a, b) == L.le(a, b) for a in range(L.size) for b in range(L.size))


def test_mlat_accepts_non_cover_pairs_and_comments():
    text = """# header
mlat 1
elements 3   # three
names 0 m 1
order
0 1
0 2        # implied by the closure anyway
1 2
mul
0 0 0
0 0 1
0 1 2
"""
    L = loads(text)
    assert L.names == ("0", "m", "1")
    assert L.mul(1, 1) == 0


@pytest.mark.parametrize("text, fragment", [
    ("", "mlat 1"),
    ("mlat 2\nelements 2\n", "mlat 1"),
    ("mlat 1\nsize 2\n", "elements"),
    ("mlat 1\nelements two\n", "element count"),
    ("mlat 1\nelements 2\nnames a\n", "expected 2 names"),
    ("mlat 1\nelements 2\norder\n0 1\n", "missing 'mul'"),
    ("mlat 1\nelements 2\norder\n0 1\nmul\n0 0\n", "rows"),
    ("mlat 1\nelements 2\norder\n0 3\nmul\n0 0\n0 1\n", "out of range"),
    ("mlat 1\nelements 2\norder\n0 x\nmul\n0 0\n0 1\n", "integers"),
    ("mlat 1\nelements 2\n0 1\n", "outside a section"),
    ("mlat 1\nelements 2\nmul\n0 0\nmul\n0 1\n", "duplicate"),
])
def test_mlat_parse_errors(text, fragment):
    with pytest.raises(MlatError, match=fragment):
        parse(text)


def test_mlat_rejects_bad_names_on_write():
    L = lattice(2, [(0, 1)], [[0, 0], [0, 1]], ["zero", "has space"])
    with pytest.raises(MlatError):
        dumps(L)


def test_unit_square_in_a_chain_breaks_distributivity():
    # 0 < m < 1 with m * m = 1
    spec = LatticeSpec(3, [(0, 1), (1, 2)], [[0, 0, 0], [0, 2, 1], [0, 1, 2]])
    assert axioms_of(spec) == ["mul-below-meet", "monotonicity", "distributivity"]
