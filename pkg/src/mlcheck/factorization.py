"""Factorizations into prime / primary / TA / OA elements and the lattice-level
factorization classes (ZPI, Q-lattice, TAFL, OAFL and their P- and C- variants).

Reachability is computed as a breadth-first closure of the top under
multiplication by class members, so witnesses have minimal length; ties are
broken by the lexicographically smallest factor sequence.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .elements import elements_where, is_nilpotent, principal_elements, profile
from .lattice import ALL_ELEMENTS_COMPACT, Lattice

FACTOR_CLASSES = ("prime", "primary", "ta", "oa", "principal-oa")


def class_members(L: Lattice, cls: str) -> frozenset[int]:
    if cls == "prime":
        return elements_where(L, "prime")
    if cls == "primary":
        return elements_where(L, "primary")
    if cls == "ta":
        return elements_where(L, "two_absorbing")
    if cls == "oa":
        return elements_where(L, "one_absorbing")
    if cls == "principal-oa":
        return elements_where(L, "one_absorbing") & principal_elements(L)
    raise ValueError(f"unknown factor class {cls!r}; choose from {FACTOR_CLASSES}")


@dataclass(frozen=True)
class FactorizationWitness:
    target: int
    factor_class: str
    factors: tuple[int, ...]

    def product(self, L: Lattice) -> int:
        return L.product(self.factors)


@dataclass
class ReachSet:
    factor_class: str
    reachable: frozenset[int]
    # element -> (factor, previous element); the top has no entry
    links: dict[int, tuple[int, int]] = field(repr=False)
    best: dict[int, tuple[int, ...]] = field(repr=False)

    def __contains__(self, x):
        return x in self.reachable


def _closure(L: Lattice, cls: str) -> ReachSet:
    members = sorted(class_members(L, cls))
    mul = L.mul_table
    best = {L.top: ()}
    links = {}
    layer = [L.top]
    while layer:
        found: dict[int, tuple[tuple[int, ...], int, int]] = {}
        for y in layer:
            tail = best[y]
            for f in members:
                x = mul[f][y]
                if x in best:
                    continue
                cand = (f,) + tail
                if x not in found or cand < found[x][0]:
                    found[x] = (cand, f, y)
        for x, (cand, f, y) in found.items():
            best[x] = cand
            links[x] = (f, y)
        layer = sorted(found)
    return ReachSet(cls, frozenset(best), links, best)


def factor_closure(L: Lattice, cls: str) -> ReachSet:
    return L.memo(("closure", cls), lambda: _closure(L, cls))


def factorization(L: Lattice, x: int, cls: str) -> FactorizationWitness | None:
    """Shortest (then lexicographically smallest) factorization, or None."""
    reach = factor_closure(L, cls)
    if x not in reach:
        return None
    factors = []
    cur = x
    while cur != L.top:
        f, cur = reach.links[cur]
        factors.append(f)
    assert tuple(factors) == reach.best[x]
    return FactorizationWitness(x, cls, tuple(factors))


def verify_witness(L: Lattice, w: FactorizationWitness) -> bool:
    """Re-multiply the factors and re-check each factor's class membership."""
    if not w.factors and w.target != L.top:
        return False
    return w.product(L) == w.target and all(f in class_members(L, w.factor_class) for f in w.factors)


@dataclass(frozen=True)
class FactorizationProfile:
    is_zpi: bool
    is_q_lattice: bool
    is_tafl: bool
    is_oafl: bool
    is_ptafl: bool
    is_poafl: bool
    is_ctafl: bool
    is_coafl: bool
    counterexamples: dict[str, int]   # flag -> smallest element lacking a factorization


def _first_missing(reach: ReachSet, required) -> int | None:
    return next((x for x in sorted(required) if x not in reach), None)


def _classify_factorization(L: Lattice) -> FactorizationProfile:
    everything = range(L.size)
    pe = principal_elements(L)
    checks = {
        "is_zpi": ("prime", everything),
        "is_q_lattice": ("primary", everything),
        "is_tafl": ("ta", everything),
        "is_oafl": ("oa", everything),
        "is_ptafl": ("ta", pe),
        "is_poafl": ("oa", pe),
    }
    flags, missing = {}, {}
    for key, (cls, required) in checks.items():
        bad = _first_missing(factor_closure(L, cls), required)
        flags[key] = bad is None
        if bad is not None:
            missing[key] = bad
    # Every element of a finite lattice is compact, so the compact-element
    # variants coincide with the unrestricted ones.
    assert ALL_ELEMENTS_COMPACT
    flags["is_ctafl"] = flags["is_tafl"]
    flags["is_coafl"] = flags["is_oafl"]
    for src, dst in (("is_tafl", "is_ctafl"), ("is_oafl", "is_coafl")):
        if src in missing:
            missing[dst] = missing[src]
    return FactorizationProfile(counterexamples=missing, **flags)


def classify_factorization_lattice(L: Lattice) -> FactorizationProfile:
    return L.memo("factorization_profile", lambda: _classify_factorization(L))


def principal_pair_joins(L: Lattice) -> list[tuple[int, int, int]]:
    pe = sorted(principal_elements(L))
    return [(a, b, L.join_table[a][b]) for i, a in enumerate(pe) for b in pe[i:]]


def principal_joins_factor(L: Lattice) -> tuple[bool, tuple[int, int, int] | None]:
    """Whether the join of any two principal elements has an OA-factorization."""
    reach = factor_closure(L, "oa")
    for a, b, j in principal_pair_joins(L):
        if j not in reach:
            return False, (a, b, j)
    return True, None


# -- fast-path characterizations ----------------------------------------------

def _m_data(L: Lattice):
    prof = profile(L)
    m = prof.jacobson
    m2 = L.mul(m, m)
    return prof, m, m2


@dataclass(frozen=True)
class OAFLVerdict:
    """Three-branch structural test for OAFLs on principally generated lattices."""

    applicable: bool
    branches: frozenset[str]          # subset of {"a", "b", "c"}
    fast_path: bool
    oafl: bool
    coafl: bool
    principal_joins: bool

    @property
    def agree(self) -> bool:
        if not self.applicable:
            return True
        return self.fast_path == self.oafl == self.coafl == self.principal_joins


def oafl_fastpath(L: Lattice) -> OAFLVerdict:
    """For principally generated L with m = J(L), OAFL holds iff

    (a) L is ZPI, or
    (b) L is quasi-local, m^2 is comparable and m is nilpotent, or
    (c) L is a quasi-local domain, m^2 is comparable and the powers of m meet in 0;

    and, equivalently, iff the join of any two principal elements has an
    OA-factorization.
    """
    prof, m, m2 = _m_data(L)
    fp = classify_factorization_lattice(L)
    joins_ok, _ = principal_joins_factor(L)
    if not prof.is_principally_generated:
        return OAFLVerdict(False, frozenset(), False, fp.is_oafl, fp.is_coafl, joins_ok)
    stable = L.stable_power(m)[1]
    branches = set()
    if fp.is_zpi:
        branches.add("a")
    local_comparable = prof.is_quasi_local and prof.m_squared_comparable
    if local_comparable and is_nilpotent(L, m):
        branches.add("b")
    # finitely, the meet of all powers of m is its stable power
    if local_comparable and prof.is_domain and stable == L.bottom:
        branches.add("c")
    return OAFLVerdict(True, frozenset(branches), bool(branches), fp.is_oafl, fp.is_coafl, joins_ok)


@dataclass(frozen=True)
class TAFLVerdict:
    applicable: bool
    domain: bool
    tafl: bool
    fast_path: bool                   # dim <= 1 (domain) or dim = 0 (otherwise), and PTAFL
    powers_vanish: bool               # stable power of m is the bottom
    m_squared_comparable: bool

    @property
    def agree(self) -> bool:
        if not self.applicable:
            return True
        if self.tafl != self.fast_path:
            return False
        if self.domain and self.tafl:
            return self.powers_vanish and self.m_squared_comparable
        return True


def tafl_fastpath(L: Lattice) -> TAFLVerdict:
    """Quasi-local principally generated L: TAFL iff PTAFL and dim <= 1 for a
    domain (then also m^n meets in 0 and m^2 is comparable), or PTAFL and
    dim = 0 otherwise."""
    prof, m, m2 = _m_data(L)
    fp = classify_factorization_lattice(L)
    applicable = prof.is_quasi_local and prof.is_principally_generated
    dim_ok = prof.dimension <= 1 if prof.is_domain else prof.dimension == 0
    return TAFLVerdict(
        applicable=applicable,
        domain=prof.is_domain,
        tafl=fp.is_tafl,
        fast_path=dim_ok and fp.is_ptafl,
        powers_vanish=L.stable_power(m)[1] == L.bottom,
        m_squared_comparable=prof.m_squared_comparable,
    )


@dataclass(frozen=True)
class EquivalenceVerdict:
    applicable: bool
    statements: tuple[bool, ...]

    @property
    def agree(self) -> bool:
        return not self.applicable or len(set(self.statements)) <= 1


def check_zpi_prufer(L: Lattice) -> EquivalenceVerdict:
    """Principally generated L: ZPI <=> Pruefer OAFL <=> Pruefer POAFL."""
    prof = profile(L)
    fp = classify_factorization_lattice(L)
    return EquivalenceVerdict(
        prof.is_principally_generated,
        (fp.is_zpi, prof.is_prufer and fp.is_oafl, prof.is_prufer and fp.is_poafl),
    )


def check_local_domain(L: Lattice) -> EquivalenceVerdict:
    """Quasi-local principally generated domains: seven equivalent conditions
    (OAFL, TAFL, COAFL, CTAFL with ACC on primes, dim<=1 and POAFL,
    dim<=1 and PTAFL, dim<=1 with m^2 comparable and vanishing powers of m)."""
    prof, m, _ = _m_data(L)
    fp = classify_factorization_lattice(L)
    applicable = prof.is_quasi_local and prof.is_principally_generated and prof.is_domain
    dim1 = prof.dimension <= 1
    acc_on_primes = True   # finite
    return EquivalenceVerdict(applicable, (
        fp.is_oafl,
        fp.is_tafl,
        fp.is_coafl,
        fp.is_ctafl and acc_on_primes,
        dim1 and fp.is_poafl,
        dim1 and fp.is_ptafl,
        dim1 and prof.m_squared_comparable and L.stable_power(m)[1] == L.bottom,
    ))
