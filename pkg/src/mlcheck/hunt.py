"""Counterexample search for conjectures about OA-elements.

Candidates are the enumerated lattices up to a size bound together with the
default corpus, deduplicated up to isomorphism and visited smallest first
(by size, then canonical certificate).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Callable

from .canon import canonical_form
from .corpus import default_manifest, resolve
from .elements import elements_where, is_prime, radical
from .enumeration import iter_multiplicative_lattices
from .lattice import Lattice


@dataclass(frozen=True)
class Conjecture:
    id: str
    statement: str
    search: Callable[[Lattice], dict | None]     # witness dict or None


def _oa(L):
    return elements_where(L, "one_absorbing")


def _names(L, **elements):
    return {k: L.name(v) for k, v in elements.items()}


def _meet_of_oa(L):
    oa = sorted(_oa(L))
    for i, x in enumerate(oa):
        for y in oa[i:]:
            z = L.meet_table[x][y]
            if z not in oa:
                return _names(L, x=x, y=y, meet=z)
    return None


def _join_of_oa(L):
    oa = sorted(_oa(L))
    for i, x in enumerate(oa):
        for y in oa[i:]:
            z = L.join_table[x][y]
            if z != L.top and z not in oa:
                return _names(L, x=x, y=y, join=z)
    return None


def _implies(flag_from: str, flag_to: str):
    def search(L):
        bad = elements_where(L, flag_from) - elements_where(L, flag_to)
        return _names(L, x=min(bad)) if bad else None
    return search


def _rad_converse(L):
    oa = _oa(L)
    for x in range(L.size):
        if x == L.top or x in oa:
            continue
        r = radical(L, x)
        if is_prime(L, r) and L.le(L.mul(r, r), x):
            return _names(L, x=x, rad=r)
    return None


def _residual_converse(L):
    oa = _oa(L)
    proper = [a for a in range(L.size) if a != L.top]
    for x in proper:
        if x in oa:
            continue
        if all(is_prime(L, L.residual(x, a)) for a in proper if not L.le(a, x)):
            return _names(L, x=x)
    return None


CONJECTURES = {c.id: c for c in (
    Conjecture("meet-of-OA-is-OA", "x, y OA  =>  x ^ y OA", _meet_of_oa),
    Conjecture("join-of-OA-is-OA", "x, y OA, x v y proper  =>  x v y OA", _join_of_oa),
    Conjecture("ta-implies-oa", "x TA  =>  x OA", _implies("two_absorbing", "one_absorbing")),
    Conjecture("primary-implies-oa", "x primary  =>  x OA", _implies("primary", "one_absorbing")),
    Conjecture("prime-implies-oa", "x prime  =>  x OA", _implies("prime", "one_absorbing")),
    Conjecture("oa-implies-prime", "x OA  =>  x prime", _implies("one_absorbing", "prime")),
    Conjecture("oa-implies-primary", "x OA  =>  x primary", _implies("one_absorbing", "primary")),
    Conjecture("oa-implies-ta", "x OA  =>  x TA", _implies("one_absorbing", "two_absorbing")),
    Conjecture("radical-converse", "rad(x) prime and rad(x)^2 <= x  =>  x OA", _rad_converse),
    Conjecture("residual-converse", "(x:a) prime for all proper a not <= x  =>  x OA", _residual_converse),
)}


@dataclass
class HuntResult:
    conjecture: str
    status: str                   # "counterexample", "clean" or "budget-exhausted"
    examined: int
    lattice_id: str | None = None
    lattice: Lattice | None = None
    witness: dict | None = None


def candidates(max_order: int = 5, include_corpus: bool = True) -> list[tuple[str, Lattice]]:
    return list(_candidates(max_order, include_corpus))


@lru_cache(maxsize=4)
def _candidates(max_order: int, include_corpus: bool) -> tuple[tuple[str, Lattice], ...]:
    pool = [(f"enumerated:{L.size}:{i}", L) for i, L in enumerate(iter_multiplicative_lattices(max_order))]
    if include_corpus:
        pool += [m for m in resolve(default_manifest()) if not m[0].startswith("enumerated:")]
    seen, out = set(), []
    keyed = sorted(((L.size, canonical_form(L).certificate, ident), ident, L) for ident, L in pool)
    for (size, cert, _), ident, L in keyed:
        if cert in seen:
            continue
        seen.add(cert)
        out.append((ident, L))
    return tuple(out)


def hunt(conjecture_id: str, max_order: int = 5, budget: int | None = None,
         include_corpus: bool = True) -> HuntResult:
    if conjecture_id not in CONJECTURES:
        raise KeyError(f"unknown conjecture {conjecture_id!r}; choose from {sorted(CONJECTURES)}")
    conj = CONJECTURES[conjecture_id]
    examined = 0
    for ident, L in candidates(max_order, include_corpus):
        if budget is not None and examined >= budget:
            return HuntResult(conjecture_id, "budget-exhausted", examined)
        examined += 1
        w = conj.search(L)
        if w is not None:
            return HuntResult(conjecture_id, "counterexample", examined, ident, L, w)
    return HuntResult(conjecture_id, "clean", examined)
