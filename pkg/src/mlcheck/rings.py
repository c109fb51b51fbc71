"""Finite commutative rings Z/n[x]/(f, relations) and their ideal lattices."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .constructions import divisor_lattice
from .elements import classify_element
from .factorization import classify_factorization_lattice, factorization
from .lattice import Lattice, check_size, lattice

RING_SIZE_CAP = 4096
_EXHAUSTIVE_AXIOM_LIMIT = 128
_SAMPLED_TRIPLES = 50_000


class RingError(ValueError):
    pass


@dataclass(frozen=True)
class RingPresentation:
    """Z/modulus[x] modulo a monic ``poly`` and extra ``relations``.

    Polynomials are coefficient lists, highest degree first: x^2 + 4 is
    ``(1, 0, 4)``.  An empty ``poly`` means the ring Z/modulus itself.
    """

    modulus: int
    poly: tuple[int, ...] = ()
    relations: tuple[tuple[int, ...], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "poly", tuple(int(c) for c in self.poly))
        object.__setattr__(self, "relations", tuple(tuple(int(c) for c in r) for r in self.relations))

    def label(self) -> str:
        if not self.poly:
            base = f"Z/{self.modulus}"
            gens = [format_poly(r, self.modulus) for r in self.relations]
        else:
            base = f"Z/{self.modulus}[x]"
            gens = [format_poly(g, None, high_first=True) for g in (self.poly,) + self.relations]
        return base if not gens else base + "/(" + ",".join(gens) + ")"


def format_poly(coeffs_high_first, modulus=None, high_first=False) -> str:
    """Render a polynomial; terms are written lowest degree first unless ``high_first``."""
    low = list(reversed(coeffs_high_first))
    if modulus:
        low = [c % modulus for c in low]
    terms = []
    for i, c in enumerate(low):
        if c == 0:
            continue
        mono = "" if i == 0 else "x" if i == 1 else f"x^{i}"
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        else:
            terms.append(f"{c}{mono}")
    if high_first:
        terms.reverse()
    return "+".join(terms) if terms else "0"


@dataclass
class FiniteRing:
    size: int
    add: np.ndarray
    mul: np.ndarray
    zero: int
    one: int
    names: tuple[str, ...]
    presentation: RingPresentation | None = None
    x: int | None = None             # image of the indeterminate, if any

    def index(self, name: str) -> int:
        return self.names.index(name)

    def element_of(self, coeffs_high_first) -> int:
        """Index of the image of an integer polynomial."""
        return _poly_image(self, coeffs_high_first)


def _poly_image(R: FiniteRing, coeffs) -> int:
    coeffs = list(coeffs)
    while len(coeffs) > 1 and coeffs[0] == 0:
        coeffs.pop(0)
    if len(coeffs) > 1 and R.x is None:
        raise RingError("polynomial relation in a ring without an indeterminate")
    x = R.x if R.x is not None else R.zero
    acc = R.zero
    for c in coeffs:
        acc = int(R.mul[acc, x])
        acc = int(R.add[acc, _scalar(R, c)])
    return acc


def _scalar(R: FiniteRing, c: int) -> int:
    c %= R.presentation.modulus if R.presentation else R.size
    acc = R.zero
    for _ in range(c):
        acc = int(R.add[acc, R.one])
    return acc


def _monic_base(n: int, f: tuple[int, ...]):
    d = len(f) - 1
    if d < 1 or f[0] % n != 1:
        raise RingError("defining polynomial must be monic of degree >= 1")
    size = n ** d
    if size > RING_SIZE_CAP:
        raise RingError(f"ring would have {size} elements (cap {RING_SIZE_CAP})")
    # reduction: x^d = -(f[1] x^(d-1) + ... + f[d])
    tail_low = np.array([(-c) % n for c in reversed(f[1:])], dtype=np.int64)  # low first
    idx = np.arange(size)
    coeffs = np.stack([(idx // n ** i) % n for i in range(d)], axis=1)       # low first
    weights = n ** np.arange(d)
    add = ((coeffs[:, None, :] + coeffs[None, :, :]) % n) @ weights
    mul = np.empty((size, size), dtype=np.int64)
    step = max(1, (1 << 21) // size)
    for lo in range(0, size, step):
        a = coeffs[lo:lo + step]
        prod = np.zeros((len(a), size, 2 * d - 1), dtype=np.int64)
        for i in range(d):
            for j in range(d):
                prod[:, :, i + j] += a[:, None, i] * coeffs[None, :, j]
        prod %= n
        for k in range(2 * d - 2, d - 1, -1):
            top = prod[:, :, k]
            prod[:, :, k - d:k] = (prod[:, :, k - d:k] + top[:, :, None] * tail_low) % n
        mul[lo:lo + step] = prod[:, :, :d] @ weights
    names = tuple(format_poly(list(reversed(c.tolist()))) for c in coeffs)
    return size, add.astype(np.int32), mul.astype(np.int32), names


def _check_ring_axioms(R: FiniteRing) -> None:
    n = R.size
    A, M = R.add, R.mul
    ar = np.arange(n)
    if (A != A.T).any() or (M != M.T).any():
        raise RingError("operations are not commutative")
    if (A[R.zero] != ar).any() or (M[R.one] != ar).any():
        raise RingError("identity laws fail")
    if not (A == R.zero).any(axis=1).all():
        raise RingError("missing additive inverses")
    if n <= _EXHAUSTIVE_AXIOM_LIMIT:
        step = max(1, (1 << 22) // (n * n))
        for lo in range(0, n, step):
            sl = slice(lo, lo + step)
            if (A[A[sl], :] != A[ar[sl, None, None], A[None]]).any():
                raise RingError("addition is not associative")
            if (M[M[sl], :] != M[ar[sl, None, None], M[None]]).any():
                raise RingError("multiplication is not associative")
            if (M[ar[sl, None, None], A[None]] != A[M[sl][:, :, None], M[sl][:, None, :]]).any():
                raise RingError("multiplication does not distribute")
    else:
        rng = np.random.default_rng(0)
        a, b, c = rng.integers(0, n, size=(3, _SAMPLED_TRIPLES))
        if (A[A[a, b], c] != A[a, A[b, c]]).any() or (M[M[a, b], c] != M[a, M[b, c]]).any() \
                or (M[a, A[b, c]] != A[M[a, b], M[a, c]]).any():
            raise RingError("ring axioms fail on sampled triples")


def build_ring(p: RingPresentation) -> FiniteRing:
    n = p.modulus
    if n < 2:
        raise RingError("modulus must be at least 2")
    if p.poly:
        size, add, mul, names = _monic_base(n, p.poly)
        x_index = n if len(p.poly) > 2 else None
    else:
        if n > RING_SIZE_CAP:
            raise RingError(f"ring would have {n} elements (cap {RING_SIZE_CAP})")
        ar = np.arange(n)
        size = n
        add = ((ar[:, None] + ar[None, :]) % n).astype(np.int32)
        mul = ((ar[:, None] * ar[None, :]) % n).astype(np.int32)
        names = tuple(map(str, range(n)))
        x_index = None
    if p.poly and x_index is None:
        # degree-1 f: x reduces to the constant -f[1]
        x_index = int((-p.poly[1]) % n)
    R = FiniteRing(size, add, mul, 0, 1, names, p, x_index)
    if p.relations:
        R = _quotient_ring(R, [R.element_of(r) for r in p.relations])
    _check_ring_axioms(R)
    return R


def _quotient_ring(R: FiniteRing, gens: list[int]) -> FiniteRing:
    I = _ideal_mask(R, gens)
    members = np.nonzero(I)[0]
    rep = R.add[:, members].min(axis=1)
    reps = np.unique(rep)
    pos = np.full(R.size, -1, dtype=np.int64)
    pos[reps] = np.arange(len(reps))
    add = pos[rep[R.add[np.ix_(reps, reps)]]].astype(np.int32)
    mul = pos[rep[R.mul[np.ix_(reps, reps)]]].astype(np.int32)
    x = None if R.x is None else int(pos[rep[R.x]])
    return FiniteRing(len(reps), add, mul, int(pos[rep[R.zero]]), int(pos[rep[R.one]]),
                      tuple(R.names[r] for r in reps), R.presentation, x)


def _ideal_mask(R: FiniteRing, gens) -> np.ndarray:
    mask = np.zeros(R.size, dtype=bool)
    mask[R.zero] = True
    for g in gens:
        mask = _sum_masks(R, mask, _principal_mask(R, g))
    return mask


def _principal_mask(R: FiniteRing, a: int) -> np.ndarray:
    mask = np.zeros(R.size, dtype=bool)
    mask[R.mul[a]] = True
    return mask


def _sum_masks(R: FiniteRing, I: np.ndarray, P: np.ndarray) -> np.ndarray:
    """I + P for additive subgroups I, P (union of the cosets I + p)."""
    out = I.copy()
    base = np.nonzero(I)[0]
    for p in np.nonzero(P)[0]:
        if not out[p]:
            out[R.add[base, p]] = True
    return out


def _key(mask: np.ndarray) -> bytes:
    return np.packbits(mask).tobytes()


@dataclass(frozen=True)
class IdealDescriptor:
    generators: tuple[int, ...]
    members: frozenset[int]


@dataclass
class IdealLatticeResult:
    lattice: Lattice
    ideals: list[IdealDescriptor]
    ring: FiniteRing
    _lookup: dict = field(repr=False, default_factory=dict)

    def element_for(self, generators) -> int:
        """Lattice element of the ideal generated by the given ring elements."""
        return self._lookup[_key(_ideal_mask(self.ring, generators))]


def ideal_lattice(R: FiniteRing) -> IdealLatticeResult:
    """All ideals of R, ordered by inclusion with the ideal product."""
    principal: dict[bytes, tuple[int, np.ndarray]] = {}
    for a in range(R.size):
        m = _principal_mask(R, a)
        principal.setdefault(_key(m), (a, m))
    gens_of: dict[bytes, tuple[int, ...]] = {}
    masks: dict[bytes, np.ndarray] = {}
    frontier = []
    for k, (a, m) in principal.items():
        gens_of[k] = (a,)
        masks[k] = m
        frontier.append(k)
    plist = list(principal.values())
    while frontier:
        nxt = []
        for k in frontier:
            I = masks[k]
            for a, P in plist:
                if I[a]:
                    continue
                S = _sum_masks(R, I, P)
                sk = _key(S)
                if sk not in masks:
                    masks[sk] = S
                    gens_of[sk] = gens_of[k] + (a,)
                    nxt.append(sk)
        frontier = nxt
    check_size(len(masks))

    keys = sorted(masks, key=lambda k: (int(masks[k].sum()), gens_of[k]))
    pos = {k: i for i, k in enumerate(keys)}
    sets = [masks[k] for k in keys]
    n = len(keys)
    order = [(i, j) for i in range(n) for j in range(n)
             if i != j and not (sets[i] & ~sets[j]).any()]

    def product(i, j):
        acc = np.zeros(R.size, dtype=bool)
        acc[R.zero] = True
        for g in gens_of[keys[i]]:
            for h in gens_of[keys[j]]:
                gh = int(R.mul[g, h])
                if not acc[gh]:
                    acc = _sum_masks(R, acc, _principal_mask(R, gh))
        return pos[_key(acc)]

    mul = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            mul[i][j] = mul[j][i] = product(i, j)

    names = []
    for k in keys:
        g = gens_of[k]
        names.append("(" + ",".join(R.names[a] for a in g) + ")")
    L = lattice(n, order, mul, names)
    ideals = [IdealDescriptor(gens_of[k], frozenset(np.nonzero(masks[k])[0].tolist())) for k in keys]
    return IdealLatticeResult(L, ideals, R, pos)


def ring_zn(n: int) -> FiniteRing:
    return build_ring(RingPresentation(n))


# -- finite stand-ins for infinite-ring examples ---------------------------------

@dataclass
class Surrogate:
    name: str
    lattice: Lattice
    targets: dict[str, int]          # label -> lattice element
    note: str
    ideals: IdealLatticeResult | None = None

    def summary(self) -> dict:
        """Oracle verdicts for each target and for the lattice as a whole."""
        L = self.lattice
        fp = classify_factorization_lattice(L)
        out = {"lattice": self.name, "size": L.size, "tafl": fp.is_tafl, "oafl": fp.is_oafl,
               "zpi": fp.is_zpi, "targets": {}}
        if not fp.is_tafl:
            out["no_ta_factorization"] = L.name(fp.counterexamples["is_tafl"])
        for label, x in self.targets.items():
            c = classify_element(L, x)
            w = factorization(L, x, "oa")
            out["targets"][label] = {
                "element": L.name(x), "proper": c.is_proper, "prime": c.is_prime,
                "primary": c.is_primary, "two_absorbing": c.is_two_absorbing,
                "one_absorbing": c.is_one_absorbing,
                "oa_factorization": None if w is None else [L.name(f) for f in w.factors],
            }
        return out


SURROGATE_NOTE = ("finite quotient of an infinite ring: properties are decided by exhaustive "
                  "search here and say nothing about the infinite ring")


def surrogate_lattices(k: int = 4) -> list[Surrogate]:
    """Finite stand-ins: the divisor lattice of 240 (for ideals of Z) and the
    ideal lattices of Z[x]/(x^2+7, 2^k) and Z[x]/(x^2+4, 2^k)."""
    D = divisor_lattice(240)
    out = [Surrogate("D240", D, {"(15)": D.index("15"), "(8)": D.index("8")},
                     "divisor lattice of 240 standing in for the ideals of Z")]
    mod = 2 ** k
    r7 = ideal_lattice(build_ring(RingPresentation(mod, (1, 0, 7))))
    R7 = r7.ring
    out.append(Surrogate(
        f"Z[x]/(x^2+7,{mod})", r7.lattice,
        {"(3,1+x)": r7.element_for([R7.element_of((3,)), R7.element_of((1, 1))]),
         "(2,1+x)": r7.element_for([R7.element_of((2,)), R7.element_of((1, 1))])},
        SURROGATE_NOTE, r7))
    r4 = ideal_lattice(build_ring(RingPresentation(mod, (1, 0, 4))))
    R4 = r4.ring
    out.append(Surrogate(
        f"Z[x]/(x^2+4,{mod})", r4.lattice,
        {"(2+x)": r4.element_for([R4.element_of((1, 2))])},
        SURROGATE_NOTE, r4))
    return out
