"""Registry of executable lattice properties.

Each property has a hypothesis (does this lattice fall under the statement?)
and a check that returns ``None`` on success or a JSON-ready witness dict.
Anchors are short formula summaries of the statement being checked.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property, lru_cache
from typing import Callable

from .canon import isomorphic
from .constructions import direct_product, field, localize_at_prime, quotient
from .elements import (classify, elements_where, is_one_absorbing, is_prime, min_primes,
                       principal_status, profile, radical)
from .factorization import (check_local_domain, check_zpi_prufer, classify_factorization_lattice,
                            factor_closure, oafl_fastpath, principal_joins_factor, tafl_fastpath)
from .lattice import Lattice

PRODUCT_SIZE_LIMIT = 64


class Study:
    """A corpus lattice together with the derived data the checks share."""

    def __init__(self, L: Lattice, ident: str, partners: tuple[tuple[str, Lattice], ...] = ()):
        self.L = L
        self.id = ident
        self.partners = partners

    def names(self, *xs):
        return [self.L.name(x) for x in xs]

    @cached_property
    def prof(self):
        return profile(self.L)

    @cached_property
    def fp(self):
        return classify_factorization_lattice(self.L)

    @cached_property
    def oa(self) -> frozenset[int]:
        return elements_where(self.L, "one_absorbing")

    @cached_property
    def ta(self) -> frozenset[int]:
        return elements_where(self.L, "two_absorbing")

    @cached_property
    def primes(self) -> list[int]:
        return sorted(elements_where(self.L, "prime"))

    @cached_property
    def proper(self) -> list[int]:
        return [x for x in range(self.L.size) if x != self.L.top]

    @cached_property
    def principal(self) -> frozenset[int]:
        return self.prof.principal_elements

    @property
    def m(self) -> int:
        """J(L); the maximal element when quasi-local."""
        return self.prof.jacobson

    @cached_property
    def m2(self) -> int:
        return self.L.mul(self.m, self.m)

    @cached_property
    def pg(self) -> bool:
        return self.prof.is_principally_generated

    @cached_property
    def local(self) -> bool:
        return self.prof.is_quasi_local

    @cached_property
    def joins_factor(self) -> bool:
        return principal_joins_factor(self.L)[0]

    @cached_property
    def min_nonmaximal_primes(self) -> list[int]:
        maxi = self.prof.maximal_elements
        return sorted(p for p in min_primes(self.L, self.L.bottom) if p not in maxi)

    def quotient(self, p):
        return self.L.memo(("quotient", p), lambda: quotient(self.L, p))

    def localization(self, p):
        return self.L.memo(("localize_prime", p), lambda: localize_at_prime(self.L, p))


@dataclass(frozen=True)
class PropertyDescriptor:
    id: str
    anchor: str
    hypothesis: Callable[[Study], bool]
    check: Callable[[Study], dict | None]
    must_be_exercised: bool = False


REGISTRY: dict[str, PropertyDescriptor] = {}


def register(pid: str, anchor: str, hypothesis, mandatory: bool = False):
    def deco(fn):
        if pid in REGISTRY:
            raise ValueError(f"duplicate property id {pid}")
        REGISTRY[pid] = PropertyDescriptor(pid, anchor, hypothesis, fn, mandatory)
        return fn
    return deco


def _always(st):
    return True


def _iff(name_a, a, name_b, b, **extra):
    if a == b:
        return None
    return {name_a: a, name_b: b, **extra}


# -- single OA elements ----------------------------------------------------------------

@register("P2.5.1", "x OA  =>  rad(x) prime and rad(x)^2 <= x", lambda st: bool(st.oa))
def _p2_5_1(st):
    L = st.L
    for x in sorted(st.oa):
        r = radical(L, x)
        if not is_prime(L, r) or not L.le(L.mul(r, r), x):
            return {"x": L.name(x), "rad": L.name(r)}
    return None


@register("P2.5.2", "x OA, a proper, a not <= x  =>  (x:a) prime", lambda st: bool(st.oa))
def _p2_5_2(st):
    # a = 1 is excluded: (x:1) = x, and OA elements need not be prime
    L = st.L
    for x in sorted(st.oa):
        for a in st.proper:
            if not L.le(a, x) and not is_prime(L, L.residual(x, a)):
                return {"x": L.name(x), "a": L.name(a), "residual": L.name(L.residual(x, a))}
    return None


def _primary_oa_candidates(st):
    """Primary x with p = rad(x) and (p^2:a) <= x for all a <= p with a not <= x."""
    L = st.L
    out = []
    for c in classify(L):
        if not c.is_primary:
            continue
        x, p = c.element, c.radical
        p2 = L.mul(p, p)
        if all(L.le(L.residual(p2, a), x) for a in range(L.size) if L.le(a, p) and not L.le(a, x)):
            out.append(x)
    return out


@register("P2.5.3", "x p-primary, (p^2:a) <= x for a <= p, a not <= x  =>  x OA",
          lambda st: bool(_primary_oa_candidates(st)))
def _p2_5_3(st):
    for x in _primary_oa_candidates(st):
        if x not in st.oa:
            return {"x": st.L.name(x)}
    return None


@register("P2.7", "some OA element is not prime  =>  L quasi-local",
          lambda st: any(x not in st.primes for x in st.oa))
def _p2_7(st):
    return None if st.local else {"maximal": st.names(*sorted(st.prof.maximal_elements))}


@register("P2.8", "(L, m) quasi-local, x proper: x OA  <=>  x prime or m^2 <= x < m",
          lambda st: st.local, mandatory=True)
def _p2_8(st):
    L, m = st.L, st.m
    for x in st.proper:
        rhs = is_prime(L, x) or (L.le(st.m2, x) and L.lt(x, m))
        if (x in st.oa) != rhs:
            return {"x": L.name(x), "oa": x in st.oa, "prime_or_between": rhs}
    return None


@register("P2.9", "exists OA non-prime  <=>  quasi-local with m^2 != m", _always)
def _p2_9(st):
    lhs = any(x not in st.primes for x in st.oa)
    return _iff("oa_not_prime_exists", lhs, "local_m2_ne_m", st.local and st.m2 != st.m)


@register("P2.10", "PG, m = J(L): all proper OA  <=>  all proper principal OA  <=>  quasi-local and m^2 = 0",
          lambda st: st.pg, mandatory=True)
def _p2_10(st):
    s1 = all(x in st.oa for x in st.proper)
    s2 = all(x in st.oa for x in st.proper if x in st.principal)
    s3 = st.local and st.m2 == st.L.bottom
    if s1 == s2 == s3:
        return None
    return {"all_oa": s1, "principal_oa": s2, "local_m2_zero": s3}


def _join_principally_generated(st):
    L = st.L
    jp = [c.element for c in classify(L) if c.is_join_principal]
    return all(L.join(e for e in jp if L.le(e, x)) == x for x in range(L.size))


def _nonzero_proper_all_oa(st):
    return all(x in st.oa for x in st.proper if x != st.L.bottom)


@register("P2.11", "join-PG, every nonzero proper element OA  =>  dim(L) = 0",
          lambda st: _join_principally_generated(st) and _nonzero_proper_all_oa(st))
def _p2_11(st):
    return None if st.prof.dimension == 0 else {"dim": st.prof.dimension}


@register("P2.12", "PG quasi-local, m^2 comparable: principal elements above m^2 form a chain"
          "  <=>  every OA element is prime or equals m^2",
          lambda st: st.pg and st.local and st.prof.m_squared_comparable)
def _p2_12(st):
    L = st.L
    above = [x for x in sorted(st.principal) if L.le(st.m2, x)]
    s1 = all(L.comparable(x, y) for x in above for y in above)
    s2 = all(x in st.primes or x == st.m2 for x in st.oa)
    return _iff("principal_chain", s1, "oa_prime_or_m2", s2)


@register("P2.13", "x, y OA and not prime  =>  x ^ y and x v y OA",
          lambda st: any(x not in st.primes for x in st.oa))
def _p2_13(st):
    L = st.L
    bad = sorted(x for x in st.oa if x not in st.primes)
    for i, x in enumerate(bad):
        for y in bad[i:]:
            for op, z in (("meet", L.meet_table[x][y]), ("join", L.join_table[x][y])):
                if z not in st.oa:
                    return {"x": L.name(x), "y": L.name(y), op: L.name(z)}
    return None


@register("P2.14", "0 OA  <=>  L domain or (quasi-local and m^2 = 0)", _always)
def _p2_14(st):
    rhs = st.prof.is_domain or (st.local and st.m2 == st.L.bottom)
    return _iff("zero_oa", st.L.bottom in st.oa, "domain_or_m2_zero", rhs)


@register("P2.15", "every TA element OA  <=>  primes form a chain and for TA x, p in min(x): x = p or p = m",
          _always, mandatory=True)
def _p2_15(st):
    L = st.L
    lhs = st.ta <= st.oa
    chain = all(L.comparable(p, q) for p in st.primes for q in st.primes)
    rhs = chain and all(x == p or p == st.m
                        for x in sorted(st.ta) for p in sorted(min_primes(L, x)))
    return _iff("ta_subset_oa", lhs, "conditions", rhs)


@register("P2.16", "x OA, p prime, p <= x  =>  x OA in L/p",
          lambda st: any(st.L.le(p, x) for x in st.oa for p in st.primes))
def _p2_16(st):
    L = st.L
    for p in st.primes:
        Q, log = st.quotient(p)
        for x in sorted(st.oa):
            if L.le(p, x) and not is_one_absorbing(Q, log.element_map[x]):
                return {"x": L.name(x), "p": L.name(p)}
    return None


@register("P2.17", "x OA, p prime, x <= p  =>  x_p OA in L_p",
          lambda st: any(st.L.le(x, p) for x in st.oa for p in st.primes))
def _p2_17(st):
    L = st.L
    for p in st.primes:
        Lp, log = st.localization(p)
        for x in sorted(st.oa):
            if L.le(x, p) and not is_one_absorbing(Lp, log.element_map[x]):
                return {"x": L.name(x), "p": L.name(p)}
    return None


@lru_cache(maxsize=None)
def _field_squared():
    return direct_product(field(), field())


@register("P2.18", "PG: every nonzero proper element OA  <=>  L = F x F, or quasi-local with m = rad(0)"
          " and m^2 <= x for all nonzero proper principal x", lambda st: st.pg)
def _p2_18(st):
    L = st.L
    lhs = _nonzero_proper_all_oa(st)
    ff = L.size == 4 and isomorphic(L, _field_squared())
    local_branch = st.local and st.m == radical(L, L.bottom) and all(
        L.le(st.m2, x) for x in st.principal if x not in (L.bottom, L.top))
    return _iff("nonzero_all_oa", lhs, "structure", ff or local_branch)


@register("P2.19", "PG quasi-local: every OA element prime  <=>  L is a field",
          lambda st: st.pg and st.local)
def _p2_19(st):
    return _iff("oa_all_prime", st.oa <= set(st.primes), "field", st.prof.is_field)


# -- TAFL ---------------------------------------------------------------------------------

def _closure_checks(st, flag: str, what: str):
    L = st.L
    for p in st.primes:
        for kind, (M, _) in (("quotient", st.quotient(p)), ("localization", st.localization(p))):
            if not getattr(classify_factorization_lattice(M), flag):
                return {"p": L.name(p), "construction": kind, "fails": what}
    return None


@register("P3.2/3.6", "L TAFL  =>  L/p and L_p TAFL;  L1 x L2 TAFL  <=>  both TAFL (same for CTAFL)", _always)
def _p3_2(st):
    if st.fp.is_tafl:
        for flag in ("is_tafl", "is_ctafl"):
            w = _closure_checks(st, flag, flag[3:])
            if w:
                return w
    for pname, P in st.partners:
        if st.L.size * P.size > PRODUCT_SIZE_LIMIT:
            continue
        prod = classify_factorization_lattice(direct_product(st.L, P))
        pf = classify_factorization_lattice(P)
        for flag in ("is_tafl", "is_ctafl"):
            if getattr(prod, flag) != (getattr(st.fp, flag) and getattr(pf, flag)):
                return {"partner": pname, "flag": flag[3:], "product": getattr(prod, flag)}
    return None


def _rad_maximal_elements(st):
    L = st.L
    maxi = st.prof.maximal_elements
    return [x for x in st.proper if radical(L, x) in maxi]


def _p3_3_targets(st):
    if st.fp.is_tafl:
        return _rad_maximal_elements(st)
    if st.fp.is_ptafl:
        return [x for x in _rad_maximal_elements(st) if x in st.principal]
    return []


@register("P3.3", "rad(x) maximal, and L TAFL or (L PTAFL and x principal)  =>  x, rad(x)^2 comparable",
          lambda st: bool(_p3_3_targets(st)), mandatory=True)
def _p3_3(st):
    L = st.L
    for x in _p3_3_targets(st):
        r = radical(L, x)
        if not L.comparable(x, L.mul(r, r)):
            return {"x": L.name(x), "rad": L.name(r)}
    return None


def _dim_at_most_one(st):
    return None if st.prof.dimension <= 1 else {"dim": st.prof.dimension}


register("P3.4", "PG TAFL  =>  dim(L) <= 1", lambda st: st.pg and st.fp.is_tafl)(_dim_at_most_one)
register("P3.7", "PG CTAFL with ACC on primes  =>  dim(L) <= 1",
         lambda st: st.pg and st.fp.is_ctafl)(_dim_at_most_one)


@register("P3.5", "TAFL Pruefer domain  =>  ZPI domain",
          lambda st: st.fp.is_tafl and st.prof.is_prufer and st.prof.is_domain)
def _p3_5(st):
    return None if st.fp.is_zpi else {"zpi_counterexample": st.L.name(st.fp.counterexamples["is_zpi"])}


@register("P3.8", "Pruefer: CTAFL  <=>  PTAFL", lambda st: st.prof.is_prufer)
def _p3_8(st):
    return _iff("ctafl", st.fp.is_ctafl, "ptafl", st.fp.is_ptafl)


def _powers_vanish(st):
    return st.L.stable_power(st.m)[1] == st.L.bottom


@register("P3.10", "quasi-local PG domain, dim <= 1, m^2 comparable, meet of m^n = 0  =>  TAFL",
          lambda st: st.local and st.pg and st.prof.is_domain and st.prof.dimension <= 1
          and st.prof.m_squared_comparable and _powers_vanish(st))
def _p3_10(st):
    return None if st.fp.is_tafl else {"tafl_counterexample": st.L.name(st.fp.counterexamples["is_tafl"])}


@register("P3.11/3.12", "quasi-local PG: TAFL  <=>  PTAFL and dim <= 1 (domain) or dim = 0 (otherwise);"
          " domain TAFL  =>  meet of m^n = 0 and m^2 comparable",
          lambda st: st.local and st.pg, mandatory=True)
def _p3_11(st):
    v = tafl_fastpath(st.L)
    return None if v.agree else {"verdict": _verdict_dict(v)}


@register("P3.13", "quasi-local Pruefer TAFL domain  =>  every proper element is a power of m",
          lambda st: st.local and st.prof.is_prufer and st.fp.is_tafl and st.prof.is_domain)
def _p3_13(st):
    L = st.L
    powers, y = set(), st.m
    while y not in powers:
        powers.add(y)
        y = L.mul(y, st.m)
    for x in st.proper:
        if x not in powers:
            return {"x": L.name(x)}
    return None


# -- OAFL -----------------------------------------------------------------------------------

@register("P4.2", "OAFL  =>  Q-lattice and TAFL, L_p and L/p OAFL", lambda st: st.fp.is_oafl)
def _p4_2(st):
    if not (st.fp.is_q_lattice and st.fp.is_tafl):
        return {"q_lattice": st.fp.is_q_lattice, "tafl": st.fp.is_tafl}
    return _closure_checks(st, "is_oafl", "oafl")


register("P4.3", "PG OAFL  =>  dim(L) <= 1", lambda st: st.pg and st.fp.is_oafl)(_dim_at_most_one)


def _p4_4_hyp(st):
    if not (st.local and st.pg and st.prof.m_squared_comparable):
        return False
    nilpotent = st.L.stable_power(st.m)[1] == st.L.bottom
    return nilpotent or (st.prof.is_domain and _powers_vanish(st))


@register("P4.4", "quasi-local PG, m^2 comparable, m nilpotent or (domain and meet of m^n = 0)"
          "  =>  OAFL, proper principal elements are products of principal OA elements", _p4_4_hyp)
def _p4_4(st):
    if not st.fp.is_oafl:
        return {"oafl_counterexample": st.L.name(st.fp.counterexamples["is_oafl"])}
    reach = factor_closure(st.L, "principal-oa")
    for x in sorted(st.principal):
        if x != st.L.top and x not in reach:
            return {"principal": st.L.name(x)}
    return None


@register("P4.5", "COAFL  =>  CTAFL, L/p and L_p COAFL", lambda st: st.fp.is_coafl)
def _p4_5(st):
    if not st.fp.is_ctafl:
        return {"ctafl": False}
    return _closure_checks(st, "is_coafl", "coafl")


@register("P4.6", "quasi-local COAFL  =>  minimal non-maximal primes weak meet principal",
          lambda st: st.local and st.fp.is_coafl and bool(st.min_nonmaximal_primes))
def _p4_6(st):
    for p in st.min_nonmaximal_primes:
        if not principal_status(st.L, p).weak_meet:
            return {"p": st.L.name(p)}
    return None


@register("P4.7", "Pruefer: COAFL  <=>  POAFL", lambda st: st.prof.is_prufer)
def _p4_7(st):
    return _iff("coafl", st.fp.is_coafl, "poafl", st.fp.is_poafl)


@register("P4.8", "quasi-local PG POAFL  =>  minimal non-maximal primes principal",
          lambda st: st.local and st.pg and st.fp.is_poafl and bool(st.min_nonmaximal_primes))
def _p4_8(st):
    for p in st.min_nonmaximal_primes:
        if p not in st.principal:
            return {"p": st.L.name(p)}
    return None


@register("P4.9", "quasi-local PG, joins of principal pairs OA-factor  =>  non-maximal primes principal, dim <= 2",
          lambda st: st.local and st.pg and st.joins_factor)
def _p4_9(st):
    for p in st.primes:
        if p not in st.prof.maximal_elements and p not in st.principal:
            return {"p": st.L.name(p)}
    return None if st.prof.dimension <= 2 else {"dim": st.prof.dimension}


register("P4.10", "PG, joins of principal pairs OA-factor  =>  dim(L) <= 1",
         lambda st: st.pg and st.joins_factor)(_dim_at_most_one)


@register("P4.11", "quasi-local PG, joins of principal pairs OA-factor, dim = 1  =>  domain",
          lambda st: st.local and st.pg and st.joins_factor and st.prof.dimension == 1)
def _p4_11(st):
    return None if st.prof.is_domain else {"domain": False}


@register("P4.12", "PG, joins of principal pairs OA-factor  =>  ZPI, or quasi-local with m^2 comparable and"
          " m nilpotent, or quasi-local domain with m^2 comparable and meet of m^n = 0",
          lambda st: st.pg and st.joins_factor)
def _p4_12(st):
    v = oafl_fastpath(st.L)
    return None if v.branches else {"verdict": _verdict_dict(v)}


@register("T4.13", "PG, m = J(L): OAFL  <=>  COAFL  <=>  principal pair joins OA-factor  <=>  branch (a), (b) or (c)",
          lambda st: st.pg, mandatory=True)
def _t4_13(st):
    v = oafl_fastpath(st.L)
    return None if v.agree else {"verdict": _verdict_dict(v)}


@register("T4.14", "PG: ZPI  <=>  Pruefer OAFL  <=>  Pruefer POAFL", lambda st: st.pg, mandatory=True)
def _t4_14(st):
    v = check_zpi_prufer(st.L)
    return None if v.agree else {"statements": list(v.statements)}


@register("T4.15", "quasi-local PG domain: OAFL, TAFL, COAFL, CTAFL, dim <= 1 with POAFL, dim <= 1 with PTAFL,"
          " dim <= 1 with m^2 comparable and meet of m^n = 0 all coincide",
          lambda st: st.local and st.pg and st.prof.is_domain)
def _t4_15(st):
    v = check_local_domain(st.L)
    return None if v.agree else {"statements": list(v.statements)}


def _verdict_dict(v) -> dict:
    out = {}
    for k, val in vars(v).items():
        out[k] = sorted(val) if isinstance(val, frozenset) else val
    return out


MANDATORY = frozenset(pid for pid, d in REGISTRY.items() if d.must_be_exercised)


def select(ids=None) -> list[PropertyDescriptor]:
    """Descriptors in registry order, optionally restricted to ``ids``."""
    if ids is None:
        return list(REGISTRY.values())
    unknown = sorted(set(ids) - set(REGISTRY))
    if unknown:
        raise KeyError(f"unknown property ids: {', '.join(unknown)}")
    wanted = set(ids)
    return [d for d in REGISTRY.values() if d.id in wanted]
