"""Element predicates and lattice-level structure invariants.

All predicates are exhaustive loops over the finite lattice.  The ``*_witness``
functions return ``None`` when the element has the property and otherwise a
tuple of element indices refuting it; an improper element (the top) gets the
empty tuple, since every predicate here is defined for proper elements only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .lattice import ALL_ELEMENTS_COMPACT, Lattice, bool_rows_to_bits, iter_bits


def below_rows(L: Lattice, x: int) -> list[int]:
    """rows[y] = bitset of all c with y*c <= x."""
    return bool_rows_to_bits(L.leq_np[L.mul_np, x])


def _lowest(mask: int) -> int:
    return (mask & -mask).bit_length() - 1


# -- prime / maximal --------------------------------------------------------

def prime_witness(L: Lattice, x: int):
    """(a, b) with ab <= x but a, b not below x."""
    if x == L.top:
        return ()
    outside = ~L.leq_np[:, x]
    below = L.leq_np[L.mul_np, x]
    hits = np.argwhere(below & outside[:, None] & outside[None, :])
    return tuple(int(v) for v in hits[0]) if len(hits) else None


def is_prime(L: Lattice, x: int) -> bool:
    return prime_witness(L, x) is None


def primes(L: Lattice) -> frozenset[int]:
    return L.memo("primes", lambda: frozenset(x for x in range(L.size) if is_prime(L, x)))


def is_maximal(L: Lattice, x: int) -> bool:
    return x != L.top and L.up[x] == (1 << x) | (1 << L.top)


def maximal_elements(L: Lattice) -> frozenset[int]:
    return L.memo("maximal", lambda: frozenset(x for x in range(L.size) if is_maximal(L, x)))


# -- radical ----------------------------------------------------------------

def radical(L: Lattice, x: int) -> int:
    """Meet of the primes above x (the top when there are none)."""
    return L.meet(p for p in primes(L) if L.le(x, p))


def radical_via_powers(L: Lattice, x: int) -> int:
    """Join of all y with some power y^n <= x; equals :func:`radical` finitely."""
    return L.join(y for y in range(L.size) if L.le(L.stable_power(y)[1], x))


def min_primes(L: Lattice, x: int) -> frozenset[int]:
    above = [p for p in primes(L) if L.le(x, p)]
    return frozenset(p for p in above if not any(q != p and L.le(q, p) for q in above))


# -- primary / absorbing ------------------------------------------------------

def primary_witness(L: Lattice, q: int, rows: list[int] | None = None):
    """(a, b) with ab <= q, a not below q and b not below the radical of q."""
    if q == L.top:
        return ()
    rows = below_rows(L, q) if rows is None else rows
    not_q = L.full & ~L.down[q]
    not_rad = L.full & ~L.down[radical(L, q)]
    for a in iter_bits(not_q):
        hit = rows[a] & not_rad
        if hit:
            return (a, _lowest(hit))
    return None


def is_primary(L: Lattice, q: int) -> bool:
    return primary_witness(L, q) is None


def two_absorbing_witness(L: Lattice, x: int, rows: list[int] | None = None):
    """(a, b, c) with abc <= x while none of ab, ac, bc is below x."""
    if x == L.top:
        return ()
    rows = below_rows(L, x) if rows is None else rows
    cand = L.proper & ~L.down[x]
    outside = {a: cand & ~rows[a] for a in iter_bits(cand)}
    mul = L.mul_table
    for a, out_a in outside.items():
        for b in iter_bits(out_a >> a << a):
            hit = rows[mul[a][b]] & out_a & outside[b]
            if hit:
                return (a, b, _lowest(hit))
    return None


def is_two_absorbing(L: Lattice, x: int) -> bool:
    return two_absorbing_witness(L, x) is None


def one_absorbing_witness(L: Lattice, x: int, rows: list[int] | None = None):
    """Proper (a, b, c) with abc <= x, ab not below x and c not below x."""
    if x == L.top:
        return ()
    rows = below_rows(L, x) if rows is None else rows
    cand = L.proper & ~L.down[x]
    mul, down = L.mul_table, L.down
    for a in iter_bits(cand):
        row = mul[a]
        for b in iter_bits(cand >> a << a):
            ab = row[b]
            if down[x] >> ab & 1:
                continue
            hit = rows[ab] & cand
            if hit:
                return (a, b, _lowest(hit))
    return None


def is_one_absorbing(L: Lattice, x: int) -> bool:
    return one_absorbing_witness(L, x) is None


# -- principal elements --------------------------------------------------------

class PrincipalStatus(NamedTuple):
    meet: bool
    join: bool
    weak_meet: bool
    weak_join: bool

    @property
    def principal(self) -> bool:
        return self.meet and self.join

    @property
    def weak_principal(self) -> bool:
        return self.weak_meet and self.weak_join


def _principal_failures(L: Lattice, e: int) -> dict[str, np.ndarray]:
    n = L.size
    M, J, W, R = L.mul_np, L.join_np, L.meet_np, L.residual_np
    ar = np.arange(n)
    be = M[:, e]
    re = R[:, e]
    return {
        # a ^ be = ((a:e) ^ b) e
        "meet": W[:, be] != M[W[re[:, None], ar[None, :]], e],
        # ((a v be) : e) = (a:e) v b
        "join": R[J[:, be], e] != J[re[:, None], ar[None, :]],
        # a ^ e = (a:e) e
        "weak_meet": W[:, e] != M[re, e],
        # (be : e) = (0:e) v b
        "weak_join": R[be, e] != J[re[L.bottom], :],
    }


def principal_status(L: Lattice, e: int) -> PrincipalStatus:
    table = L.memo("principal", lambda: {})
    if e not in table:
        bad = _principal_failures(L, e)
        table[e] = PrincipalStatus(*(not bool(bad[k].any()) for k in PrincipalStatus._fields))
    return table[e]


def principal_witness(L: Lattice, e: int, kind: str):
    """First (a, b) (or (a,) / (b,) for the weak laws) violating ``kind``."""
    bad = _principal_failures(L, e)[kind]
    hits = np.argwhere(bad)
    return tuple(int(v) for v in hits[0]) if len(hits) else None


def is_principal(L: Lattice, e: int) -> bool:
    return principal_status(L, e).principal


def principal_elements(L: Lattice) -> frozenset[int]:
    return L.memo("principal_set", lambda: frozenset(e for e in range(L.size) if is_principal(L, e)))


# -- misc ----------------------------------------------------------------------

def is_nilpotent(L: Lattice, x: int) -> bool:
    return L.stable_power(x)[1] == L.bottom


def is_comparable(L: Lattice, x: int) -> bool:
    return (L.up[x] | L.down[x]) == L.full


@dataclass(frozen=True)
class ElementClassification:
    element: int
    is_proper: bool
    is_prime: bool
    is_maximal: bool
    is_primary: bool
    is_two_absorbing: bool
    is_one_absorbing: bool
    is_meet_principal: bool
    is_join_principal: bool
    is_weak_meet_principal: bool
    is_weak_join_principal: bool
    is_principal: bool
    is_weak_principal: bool
    is_compact: bool
    is_nilpotent: bool
    is_comparable: bool
    radical: int
    min_primes: frozenset[int]
    primary_radical: int | None


def _classify_all(L: Lattice) -> tuple[ElementClassification, ...]:
    out = []
    prime_set = primes(L)
    for x in range(L.size):
        ps = principal_status(L, x)
        common = dict(
            element=x,
            is_meet_principal=ps.meet, is_join_principal=ps.join,
            is_weak_meet_principal=ps.weak_meet, is_weak_join_principal=ps.weak_join,
            is_principal=ps.principal, is_weak_principal=ps.weak_principal,
            is_compact=ALL_ELEMENTS_COMPACT,
            is_nilpotent=is_nilpotent(L, x), is_comparable=is_comparable(L, x),
            radical=radical(L, x), min_primes=min_primes(L, x),
        )
        if x == L.top:
            out.append(ElementClassification(
                is_proper=False, is_prime=False, is_maximal=False, is_primary=False,
                is_two_absorbing=False, is_one_absorbing=False, primary_radical=None, **common))
            continue
        rows = below_rows(L, x)
        primary = primary_witness(L, x, rows) is None
        out.append(ElementClassification(
            is_proper=True,
            is_prime=x in prime_set,
            is_maximal=is_maximal(L, x),
            is_primary=primary,
            is_two_absorbing=two_absorbing_witness(L, x, rows) is None,
            is_one_absorbing=one_absorbing_witness(L, x, rows) is None,
            primary_radical=common["radical"] if primary else None,
            **common))
    return tuple(out)


def classify(L: Lattice) -> tuple[ElementClassification, ...]:
    """Classification of every element, memoized on the lattice."""
    return L.memo("classify", lambda: _classify_all(L))


def classify_element(L: Lattice, x: int) -> ElementClassification:
    return classify(L)[x]


FLAG_NAMES = ("prime", "maximal", "primary", "two_absorbing", "one_absorbing", "principal",
              "meet_principal", "join_principal", "weak_meet_principal", "weak_join_principal",
              "nilpotent", "comparable")


def elements_where(L: Lattice, flag: str) -> frozenset[int]:
    """All elements whose classification has ``is_<flag>`` set."""
    if flag not in FLAG_NAMES:
        raise ValueError(f"unknown flag {flag!r}")
    key = ("where", flag)
    return L.memo(key, lambda: frozenset(c.element for c in classify(L) if getattr(c, "is_" + flag)))


# -- lattice profile -------------------------------------------------------------

@dataclass(frozen=True)
class LatticeProfile:
    maximal_elements: frozenset[int]
    jacobson: int
    dimension: int
    is_field: bool
    is_quasi_local: bool
    is_domain: bool
    is_principally_generated: bool
    is_prufer: bool
    is_noetherian: bool
    m_squared_comparable: bool
    principal_elements: frozenset[int]

    @property
    def maximal(self) -> int | None:
        """The unique maximal element of a quasi-local lattice."""
        return next(iter(self.maximal_elements)) if self.is_quasi_local else None


def prime_dimension(L: Lattice) -> int:
    """Number of links in the longest strict chain of primes (0 if none)."""
    ps = sorted(primes(L), key=lambda p: L.down[p].bit_count())
    longest = {}
    for p in ps:
        longest[p] = max((longest[q] + 1 for q in longest if L.lt(q, p)), default=0)
    return max(longest.values(), default=0)


def _profile(L: Lattice) -> LatticeProfile:
    maxi = maximal_elements(L)
    jac = L.meet(maxi)
    pe = principal_elements(L)
    pg = all(L.join(p for p in pe if L.le(p, x)) == x for x in range(L.size))
    return LatticeProfile(
        maximal_elements=maxi,
        jacobson=jac,
        dimension=prime_dimension(L),
        is_field=L.size == 2,
        is_quasi_local=len(maxi) == 1,
        is_domain=L.bottom in primes(L),
        is_principally_generated=pg,
        is_prufer=len(pe) == L.size,
        is_noetherian=ALL_ELEMENTS_COMPACT,
        m_squared_comparable=is_comparable(L, L.mul(jac, jac)),
        principal_elements=pe,
    )


def profile(L: Lattice) -> LatticeProfile:
    return L.memo("profile", lambda: _profile(L))
