"""Quotients, localizations, direct products and concrete lattice families."""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd

from .elements import is_prime
from .lattice import Lattice, check_size, iter_bits, lattice, validate


@dataclass(frozen=True)
class LatticeMorphismLog:
    kind: str
    source: Lattice
    element_map: dict[int, int]      # source index -> target index


def quotient(L: Lattice, a: int) -> tuple[Lattice, LatticeMorphismLog]:
    """L/a: the elements above a with product (cd) v a."""
    elems = list(iter_bits(L.up[a]))
    spec = L.sublattice_spec(elems, lambda c, d: L.join_table[L.mul_table[c][d]][a])
    Q = validate(spec)
    pos = {e: i for i, e in enumerate(elems)}
    emap = {b: pos[L.join_table[b][a]] for b in range(L.size)}
    return Q, LatticeMorphismLog("quotient", L, emap)


def is_multiplicatively_closed(L: Lattice, S) -> bool:
    S = set(S)
    return L.top in S and all(L.mul(s, t) in S for s in S for t in S)


def saturation(L: Lattice, a: int, S) -> int:
    """a_S: the join of all x with xs <= a for some s in S."""
    return L.join(L.residual(a, s) for s in S)


def localize(L: Lattice, S) -> tuple[Lattice, LatticeMorphismLog]:
    """L_S = {a_S}, ordered as in L, with product (ab)_S."""
    S = sorted(set(S))
    if not is_multiplicatively_closed(L, S):
        raise ValueError("S must contain the top and be closed under multiplication")
    sat = [saturation(L, a, S) for a in range(L.size)]
    elems = sorted(set(sat))
    spec = L.sublattice_spec(elems, lambda a, b: sat[L.mul_table[a][b]])
    Ls = validate(spec)
    pos = {e: i for i, e in enumerate(elems)}
    return Ls, LatticeMorphismLog("localization", L, {a: pos[sat[a]] for a in range(L.size)})


def localize_at_prime(L: Lattice, p: int) -> tuple[Lattice, LatticeMorphismLog]:
    if not is_prime(L, p):
        raise ValueError(f"{L.name(p)} is not a prime element")
    return localize(L, [x for x in range(L.size) if not L.le(x, p)])


def direct_product(A: Lattice, B: Lattice) -> Lattice:
    """Componentwise order and product; element (i, j) has index i*|B| + j."""
    n, m = A.size, B.size
    check_size(n * m)
    order = [(i * m + j, i2 * m + j) for i, i2 in A.covers() for j in range(m)]
    order += [(i * m + j, i * m + j2) for j, j2 in B.covers() for i in range(n)]
    mul = [[A.mul_table[i][k] * m + B.mul_table[j][l] for k in range(n) for l in range(m)]
           for i in range(n) for j in range(m)]
    names = [f"({a},{b})" for a in A.names for b in B.names]
    return lattice(n * m, order, mul, names)


def divisor_lattice(n: int) -> Lattice:
    """Ideal lattice of Z/n written with divisors: d stands for the ideal (d).

    d1 <= d2 iff d2 | d1; join = gcd, meet = lcm, product = gcd(d1 d2, n).
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    divs = [d for d in range(1, n + 1) if n % d == 0]
    check_size(len(divs))
    pos = {d: i for i, d in enumerate(divs)}
    order = [(pos[d1], pos[d2]) for d1 in divs for d2 in divs if d1 != d2 and d1 % d2 == 0]
    mul = [[pos[gcd(a * b, n)] for b in divs] for a in divs]
    return lattice(len(divs), order, mul, [str(d) for d in divs])


def field() -> Lattice:
    return lattice(2, [(0, 1)], [[0, 0], [0, 1]], ["0", "1"])


def nilpotent_chain3() -> Lattice:
    """0 < m < 1 with m^2 = 0."""
    return lattice(3, [(0, 1), (1, 2)], [[0, 0, 0], [0, 0, 1], [0, 1, 2]], ["0", "m", "1"])


def idempotent_chain3() -> Lattice:
    """0 < m < 1 with m^2 = m."""
    return lattice(3, [(0, 1), (1, 2)], [[0, 0, 0], [0, 1, 1], [0, 1, 2]], ["0", "m", "1"])


def gap_chain5() -> Lattice:
    """0 < u < n < m < 1 with m^2 = n and every other proper product 0.

    The smallest multiplicative lattice that is not a TAFL: u is not a
    product of TA-elements.
    """
    mul = [[0, 0, 0, 0, 0],
           [0, 0, 0, 0, 1],
           [0, 0, 0, 0, 2],
           [0, 0, 0, 2, 3],
           [0, 1, 2, 3, 4]]
    return lattice(5, [(0, 1), (1, 2), (2, 3), (3, 4)], mul, ["0", "u", "n", "m", "1"])


def diamond6() -> Lattice:
    """{0, 1, a, b, c, d} with a <= b <= d, a <= c <= d and xy = a on {a, b, c, d}.

    Quasi-local with maximal element d; its primes are 0 and d, and b is a
    non-prime 1-absorbing prime element.
    """
    names = ["0", "1", "a", "b", "c", "d"]
    O, I, A, B, C, D = range(6)
    order = [(O, A), (A, B), (A, C), (B, D), (C, D), (D, I)]
    mul = [[0] * 6 for _ in range(6)]
    for x in range(6):
        for y in range(6):
            if x == O or y == O:
                mul[x][y] = O
            elif x == I:
                mul[x][y] = y
            elif y == I:
                mul[x][y] = x
            else:
                mul[x][y] = A
    return lattice(6, order, mul, names)


BUILTINS = {
    "field": field,
    "chain3-nil": nilpotent_chain3,
    "chain3-idem": idempotent_chain3,
    "gap-chain5": gap_chain5,
    "diamond6": diamond6,
}


def builtin(name: str) -> Lattice:
    try:
        return BUILTINS[name]()
    except KeyError:
        raise KeyError(f"unknown builtin lattice {name!r}; choose from {sorted(BUILTINS)}") from None
