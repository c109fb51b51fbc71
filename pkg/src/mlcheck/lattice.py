"""Finite multiplicative lattices: representation, validation and arithmetic.

A lattice is stored as its fully closed order (up-set and down-set bitsets per
element plus a boolean matrix) and a commutative multiplication table.  Joins,
meets and residuals are tabulated once, so every query used by the classifiers
is a table lookup.
"""

from __future__ import annotations

import os
from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

DEFAULT_SIZE_CAP = 4096

# Every element of a finite lattice is compact, so finite lattices are always
# C-lattices (and Noetherian).  Kept as a named constant instead of a check.
ALL_ELEMENTS_COMPACT = True


def size_cap() -> int:
    """Element cap, overridable through ``MLCHECK_SIZE_CAP``."""
    raw = os.environ.get("MLCHECK_SIZE_CAP")
    if raw is None:
        return DEFAULT_SIZE_CAP
    try:
        cap = int(raw)
    except ValueError:
        raise ValueError(f"MLCHECK_SIZE_CAP must be an integer, got {raw!r}") from None
    if cap < 1:
        raise ValueError("MLCHECK_SIZE_CAP must be positive")
    return cap


class SizeCapExceeded(ValueError):
    pass


def check_size(n: int) -> None:
    cap = size_cap()
    if n > cap:
        raise SizeCapExceeded(f"{n} elements exceeds the size cap of {cap}")


def iter_bits(mask: int):
    """Yield the indices of the set bits of ``mask`` in increasing order."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


def bits_to_bool(mask: int, n: int) -> np.ndarray:
    raw = mask.to_bytes((n + 7) // 8, "little")
    return np.unpackbits(np.frombuffer(raw, dtype=np.uint8), bitorder="little")[:n].astype(bool)


def bool_rows_to_bits(rows: np.ndarray) -> list[int]:
    """Convert each row of a boolean matrix into an int bitset."""
    packed = np.packbits(rows, axis=1, bitorder="little")
    return [int.from_bytes(r.tobytes(), "little") for r in packed]


@dataclass(frozen=True)
class LatticeSpec:
    """Raw, unvalidated description of a finite multiplicative lattice."""

    size: int
    order: tuple[tuple[int, int], ...]
    mul: tuple[tuple[int, ...], ...]
    names: tuple[str, ...] | None = None

    def __post_init__(self):
        object.__setattr__(self, "order", tuple((int(a), int(b)) for a, b in self.order))
        object.__setattr__(self, "mul", tuple(tuple(int(v) for v in row) for row in self.mul))
        if self.names is not None:
            object.__setattr__(self, "names", tuple(str(s) for s in self.names))


@dataclass(frozen=True)
class Violation:
    axiom: str
    witness: tuple[int, ...]
    detail: str = ""

    def __str__(self):
        w = ", ".join(map(str, self.witness))
        text = f"{self.axiom} ({w})"
        return f"{text}: {self.detail}" if self.detail else text


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def axioms(self) -> list[str]:
        return [v.axiom for v in self.violations]

    def __str__(self):
        if self.ok:
            return "valid multiplicative lattice"
        return "\n".join(str(v) for v in self.violations)


class InvalidLattice(ValueError):
    """Raised by :func:`validate` when a LatticeSpec violates an axiom."""

    def __init__(self, report: ValidationReport):
        self.report = report
        super().__init__("invalid multiplicative lattice:\n" + str(report))


def _close_order(n: int, pairs: Iterable[tuple[int, int]]) -> list[int]:
    up = [1 << i for i in range(n)]
    for a, b in pairs:
        up[a] |= 1 << b
    for k in range(n):
        bk, uk = 1 << k, up[k]
        for i in range(n):
            if up[i] & bk:
                up[i] |= uk
    return up


def _down_from_up(up: Sequence[int]) -> list[int]:
    n = len(up)
    down = [0] * n
    for i, u in enumerate(up):
        bi = 1 << i
        for j in iter_bits(u):
            down[j] |= bi
    return down


def _first(mask: np.ndarray):
    hits = np.argwhere(mask)
    return tuple(int(v) for v in hits[0]) if len(hits) else None


def _chunks(n: int, per: int):
    step = max(1, per // max(1, n * n))
    for start in range(0, n, step):
        yield start, min(n, start + step)


def _check_mul(n, bottom, top, M, J, LEQ, MEET, report):
    add = report.violations.append
    ar = np.arange(n)
    w = _first(M != M.T)
    if w:
        add(Violation("commutativity", w, f"mul{w} = {M[w]} but mul{w[::-1]} = {M[w[::-1]]}"))
    bad = np.nonzero(M[top] != ar)[0]
    if len(bad):
        x = int(bad[0])
        add(Violation("identity", (x,), f"1*{x} = {M[top, x]}"))
    bad = np.nonzero(M[:, bottom] != bottom)[0]
    if len(bad):
        x = int(bad[0])
        add(Violation("zero", (x,), f"{x}*0 = {M[x, bottom]}"))
    w = _first(~LEQ[M, MEET])
    if w:
        add(Violation("mul-below-meet", w, f"product {M[w]} is not below meet {MEET[w]}"))

    # monotonicity: a <= b  =>  xa <= xb
    pairs = np.argwhere(LEQ)
    for lo, hi in _chunks(n, 1 << 22):
        sub = LEQ[M[lo:hi][:, pairs[:, 0]], M[lo:hi][:, pairs[:, 1]]]
        w = _first(~sub)
        if w:
            x, k = lo + w[0], w[1]
            a, b = (int(v) for v in pairs[k])
            add(Violation("monotonicity", (x, a, b), f"{a} <= {b} but {x}*{a} > {x}*{b}"))
            break

    for lo, hi in _chunks(n, 1 << 22):
        Mx = M[lo:hi]
        lhs = Mx[:, J]                                   # x * (a v b)
        rhs = J[Mx[:, :, None], Mx[:, None, :]]          # xa v xb
        w = _first(lhs != rhs)
        if w:
            w = (lo + w[0], w[1], w[2])
            add(Violation("distributivity", w, "x(a v b) != xa v xb"))
            break

    for lo, hi in _chunks(n, 1 << 22):
        lhs = M[M[lo:hi]]                                # (ab)c
        rhs = M[np.arange(lo, hi)[:, None, None], M[None, :, :]]  # a(bc)
        w = _first(lhs != rhs)
        if w:
            w = (lo + w[0], w[1], w[2])
            add(Violation("associativity", w, "(ab)c != a(bc)"))
            break


def check_axioms(spec: LatticeSpec) -> tuple[ValidationReport, dict | None]:
    """Check every multiplicative-lattice axiom; never raises on bad axioms.

    Returns the report and, when the order part is sound, the derived tables.
    """
    n = spec.size
    if n < 1:
        raise ValueError("a lattice needs at least one element")
    check_size(n)
    for a, b in spec.order:
        if not (0 <= a < n and 0 <= b < n):
            raise ValueError(f"order pair ({a}, {b}) out of range")
    if len(spec.mul) != n or any(len(row) != n for row in spec.mul):
        raise ValueError(f"multiplication table must be {n} x {n}")
    if spec.names is not None:
        if len(spec.names) != n:
            raise ValueError("names must have one entry per element")
        if len(set(spec.names)) != n:
            raise ValueError("element names must be unique")

    report = ValidationReport()
    add = report.violations.append
    up = _close_order(n, spec.order)
    down = _down_from_up(up)
    for i in range(n):
        both = up[i] & down[i] & ~(1 << i)
        if both:
            j = next(iter_bits(both))
            add(Violation("antisymmetry", (i, j), f"{i} <= {j} and {j} <= {i}"))
            return report, None

    full = (1 << n) - 1
    bottoms = [i for i in range(n) if up[i] == full]
    tops = [i for i in range(n) if down[i] == full]
    if not bottoms:
        add(Violation("bottom", (), "no least element"))
    if not tops:
        add(Violation("top", (), "no greatest element"))
    if report.violations:
        return report, None
    bottom, top = bottoms[0], tops[0]

    up_index = {u: i for i, u in enumerate(up)}
    down_index = {d: i for i, d in enumerate(down)}
    join_t = [[0] * n for _ in range(n)]
    meet_t = [[0] * n for _ in range(n)]
    bad_join = bad_meet = None
    for a in range(n):
        ua, da = up[a], down[a]
        for b in range(a, n):
            j = up_index.get(ua & up[b])
            m = down_index.get(da & down[b])
            if j is None:
                bad_join = bad_join or (a, b)
            else:
                join_t[a][b] = join_t[b][a] = j
            if m is None:
                bad_meet = bad_meet or (a, b)
            else:
                meet_t[a][b] = meet_t[b][a] = m
    if bad_join:
        add(Violation("join", bad_join, "no least upper bound"))
    if bad_meet:
        add(Violation("meet", bad_meet, "no greatest lower bound"))
    if bad_join or bad_meet:
        return report, None

    M = np.array(spec.mul, dtype=np.int64)
    if M.size and (M.min() < 0 or M.max() >= n):
        bad = _first((M < 0) | (M >= n))
        add(Violation("range", bad, "product index out of range"))
        return report, None
    M = M.astype(np.int32)
    J = np.array(join_t, dtype=np.int32)
    MEET = np.array(meet_t, dtype=np.int32)
    LEQ = np.array([bits_to_bool(u, n) for u in up], dtype=bool).reshape(n, n)
    _check_mul(n, bottom, top, M, J, LEQ, MEET, report)
    tables = dict(up=up, down=down, bottom=bottom, top=top, join=join_t, meet=meet_t,
                  M=M, J=J, MEET=MEET, LEQ=LEQ)
    return report, tables


def validate(spec: LatticeSpec) -> "Lattice":
    """Close the generating order, verify all axioms and build a :class:`Lattice`.

    Raises :class:`InvalidLattice` (carrying the :class:`ValidationReport`)
    when any axiom fails.
    """
    report, tables = check_axioms(spec)
    if not report.ok:
        raise InvalidLattice(report)
    return Lattice(spec.size, tables, spec.names)


def lattice(size: int, order, mul, names=None) -> "Lattice":
    """Shorthand for ``validate(LatticeSpec(...))``."""
    return validate(LatticeSpec(size, tuple(order), tuple(map(tuple, mul)),
                                None if names is None else tuple(names)))


class Lattice:
    """A validated finite multiplicative lattice.

    Elements are the integers ``0 .. size-1``.  Instances are immutable after
    construction; derived data (residuals, classifications) is memoized on the
    instance and never changes observable behaviour.
    """

    def __init__(self, size: int, tables: dict, names: Sequence[str] | None = None):
        self.size = size
        self.bottom: int = tables["bottom"]
        self.top: int = tables["top"]
        self.up: list[int] = tables["up"]
        self.down: list[int] = tables["down"]
        self.join_table: list[list[int]] = tables["join"]
        self.meet_table: list[list[int]] = tables["meet"]
        self.mul_np: np.ndarray = tables["M"]
        self.join_np: np.ndarray = tables["J"]
        self.meet_np: np.ndarray = tables["MEET"]
        self.leq_np: np.ndarray = tables["LEQ"]
        self.mul_table: list[list[int]] = self.mul_np.tolist()
        self.names: tuple[str, ...] = tuple(names) if names is not None else tuple(map(str, range(size)))
        self._index = {s: i for i, s in enumerate(self.names)}
        self.full = (1 << size) - 1
        self.proper = self.full & ~(1 << self.top)
        self._memo: dict = {}

    def __repr__(self):
        return f"<Lattice size={self.size}>"

    def __len__(self):
        return self.size

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_memo"] = {}
        return state

    def memo(self, key, compute):
        try:
            return self._memo[key]
        except KeyError:
            value = self._memo[key] = compute()
            return value

    # -- naming -----------------------------------------------------------
    def index(self, ref) -> int:
        """Resolve an element by name, or by integer index."""
        if isinstance(ref, (int, np.integer)):
            if not 0 <= ref < self.size:
                raise IndexError(f"element {ref} out of range")
            return int(ref)
        if ref in self._index:
            return self._index[ref]
        try:
            return self.index(int(ref))
        except ValueError:
            raise KeyError(f"no element named {ref!r}") from None

    def name(self, x: int) -> str:
        return self.names[x]

    # -- order ------------------------------------------------------------
    def le(self, a: int, b: int) -> bool:
        return bool(self.up[a] >> b & 1)

    def lt(self, a: int, b: int) -> bool:
        return a != b and self.le(a, b)

    def comparable(self, a: int, b: int) -> bool:
        return self.le(a, b) or self.le(b, a)

    def join(self, xs: Iterable[int] = ()) -> int:
        """Least upper bound; the empty join is the bottom."""
        r = self.bottom
        jt = self.join_table
        for x in xs:
            r = jt[r][x]
        return r

    def meet(self, xs: Iterable[int] = ()) -> int:
        """Greatest lower bound; the empty meet is the top."""
        r = self.top
        mt = self.meet_table
        for x in xs:
            r = mt[r][x]
        return r

    def covers(self) -> list[tuple[int, int]]:
        """Covering pairs (a, b): a < b with nothing strictly between."""
        out = []
        for a in range(self.size):
            above = self.up[a] & ~(1 << a)
            for b in iter_bits(above):
                if not (above & self.down[b] & ~(1 << b)):
                    out.append((a, b))
        return out

    # -- multiplication -----------------------------------------------------
    def mul(self, a: int, b: int) -> int:
        return self.mul_table[a][b]

    def product(self, xs: Iterable[int] = ()) -> int:
        """Left-folded product; the empty product is the top."""
        r = self.top
        mt = self.mul_table
        for x in xs:
            r = mt[r][x]
        return r

    def power(self, a: int, k: int) -> int:
        if k < 0:
            raise ValueError("negative exponent")
        return self.product([a] * k)

    def stable_power(self, a: int) -> tuple[int, int]:
        """Smallest k >= 1 with a^k = a^(k+1), and that stable value.

        In a finite lattice the stable value is the meet of all powers of a.
        """
        k, cur = 1, a
        while True:
            nxt = self.mul_table[cur][a]
            if nxt == cur:
                return k, cur
            k, cur = k + 1, nxt

    @property
    def residual_np(self) -> np.ndarray:
        return self.memo("residual", self._residuals)

    @property
    def residual_table(self) -> list[list[int]]:
        return self.memo("residual_list", lambda: self.residual_np.tolist())

    def _residuals(self) -> np.ndarray:
        # (a:b) is the largest x with xb <= a.  The feasible x form the
        # down-set of the answer, so it is the feasible x with the largest
        # down-set.
        n = self.size
        weight = np.array([d.bit_count() for d in self.down], dtype=np.int64)
        out = np.empty((n, n), dtype=np.int32)
        M, LEQ = self.mul_np, self.leq_np
        for a in range(n):
            feasible = LEQ[M, a]                          # [x, b]: xb <= a
            score = np.where(feasible, weight[:, None], -1)
            out[a] = np.argmax(score, axis=0)
        return out

    def residual(self, a: int, b: int) -> int:
        """(a:b), the join of all x with xb <= a."""
        return self.residual_table[a][b]

    # -- derived lattices -----------------------------------------------------
    def spec(self) -> LatticeSpec:
        return LatticeSpec(self.size, tuple(self.covers()),
                           tuple(map(tuple, self.mul_table)), self.names)

    def relabel(self, perm: Sequence[int]) -> "Lattice":
        """Return the isomorphic copy in which element ``x`` becomes ``perm[x]``."""
        n = self.size
        if sorted(perm) != list(range(n)):
            raise ValueError("perm must be a permutation of the elements")
        inv = [0] * n
        for x, y in enumerate(perm):
            inv[y] = x
        order = tuple((perm[a], perm[b]) for a, b in self.covers())
        mul = tuple(tuple(perm[self.mul_table[inv[i]][inv[j]]] for j in range(n)) for i in range(n))
        names = tuple(self.names[inv[i]] for i in range(n))
        return validate(LatticeSpec(n, order, mul, names))

    def sublattice_spec(self, elements: Sequence[int], mul) -> LatticeSpec:
        """LatticeSpec on ``elements`` with the inherited order and the given product.

        ``mul(a, b)`` receives original indices and must return an original index
        belonging to ``elements``.
        """
        pos = {e: i for i, e in enumerate(elements)}
        order = [(pos[a], pos[b]) for a in elements for b in elements if a != b and self.le(a, b)]
        table = tuple(tuple(pos[mul(a, b)] for b in elements) for a in elements)
        return LatticeSpec(len(elements), tuple(order), table, tuple(self.names[e] for e in elements))
