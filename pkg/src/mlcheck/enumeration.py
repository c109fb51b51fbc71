"""Exhaustive enumeration of small multiplicative lattices up to isomorphism.

Two independent strategies are provided so their counts can be compared:

``order-first``
    Lattice orders are enumerated up to isomorphism, then multiplication
    tables are built cell by cell with backtracking, pruning on
    ``ab <= a ^ b`` and on binary join-distributivity as soon as the cells
    involved are filled.  Associativity is checked on complete tables.

``brute-force``
    Every naturally labelled lattice order (no isomorphism reduction) is
    paired with every commutative table whose entries lie below the meet,
    and each candidate is handed to the full axiom validator.

Both deduplicate by canonical form and emit lattices relabelled into
canonical order, sorted by size and then by certificate.
"""

from __future__ import annotations

import itertools
from collections.abc import Callable, Iterator

import numpy as np

from .canon import canonical_arrays, canonical_form
from .lattice import Lattice, LatticeSpec, check_axioms, validate

MAX_ORDER = 7
STRATEGIES = ("order-first", "brute-force")


class BudgetExceeded(RuntimeError):
    pass


class _Budget:
    def __init__(self, limit: int | None):
        self.limit = limit
        self.used = 0

    def tick(self, k: int = 1):
        self.used += k
        if self.limit is not None and self.used > self.limit:
            raise BudgetExceeded(f"enumeration budget of {self.limit} steps exhausted")


# -- lattice orders -------------------------------------------------------------

def _natural_orders(n: int) -> Iterator[np.ndarray]:
    """Boolean leq matrices of all lattice orders on 0..n-1 with 0 the bottom,
    n-1 the top and i < j whenever i is strictly below j."""
    inner = list(range(1, n - 1))
    pairs = list(itertools.combinations(inner, 2))
    for bits in range(1 << len(pairs)):
        le = np.eye(n, dtype=bool)
        le[0, :] = True
        le[:, n - 1] = True
        for k, (i, j) in enumerate(pairs):
            if bits >> k & 1:
                le[i, j] = True
        # transitively closed already?
        if (((le.astype(np.int64) @ le.astype(np.int64)) > 0) != le).any():
            continue
        if _has_joins_and_meets(le):
            yield le


def _has_joins_and_meets(le: np.ndarray) -> bool:
    n = len(le)
    for a in range(n):
        for b in range(a + 1, n):
            ub = le[a] & le[b]
            # the least upper bound is the one below every other upper bound
            if not any(ub[c] and (le[c] | ~ub).all() for c in range(n)):
                return False
            lb = le[:, a] & le[:, b]
            if not any(lb[c] and (le[:, c] | ~lb).all() for c in range(n)):
                return False
    return True


def lattice_orders(n: int) -> list[np.ndarray]:
    """Lattice orders on n elements up to isomorphism, naturally labelled."""
    if n < 1:
        return []
    if n == 1:
        return [np.ones((1, 1), dtype=bool)]
    zeros = np.zeros((n, n), dtype=np.int64)
    seen = {}
    for le in _natural_orders(n):
        cert = canonical_arrays(zeros, le).certificate
        seen.setdefault(cert, le)
    return [seen[c] for c in sorted(seen)]


def _order_tables(le: np.ndarray):
    n = len(le)
    join = np.zeros((n, n), dtype=np.int64)
    meet = np.zeros((n, n), dtype=np.int64)
    for a in range(n):
        for b in range(n):
            ub = le[a] & le[b]
            join[a, b] = next(c for c in range(n) if ub[c] and (le[c] | ~ub).all())
            lb = le[:, a] & le[:, b]
            meet[a, b] = next(c for c in range(n) if lb[c] and (le[:, c] | ~lb).all())
    return join, meet


def _spec_from(le: np.ndarray, mul) -> LatticeSpec:
    n = len(le)
    order = [(i, j) for i in range(n) for j in range(n) if i != j and le[i, j]]
    return LatticeSpec(n, order, [list(map(int, row)) for row in mul])


# -- strategy: order first, backtracking over cells ----------------------------------

def _tables_for_order(le: np.ndarray, budget: _Budget) -> Iterator[np.ndarray]:
    n = len(le)
    bot, top = 0, n - 1
    join, meet = _order_tables(le)
    M = np.full((n, n), -1, dtype=np.int64)
    M[bot, :] = M[:, bot] = bot
    M[top, :] = np.arange(n)
    M[:, top] = np.arange(n)
    inner = range(1, n - 1)
    cells = [(a, b) for a in inner for b in inner if a <= b]
    choices = {c: [v for v in range(n) if le[v, meet[c]]] for c in cells}

    # distributivity constraints a(b v c) = ab v ac, keyed by the last cell filled
    pos = {c: i for i, c in enumerate(cells)}

    def cell(x, y):
        return (x, y) if x <= y else (y, x)

    checks: list[list[tuple[int, int, int]]] = [[] for _ in cells]
    for a in range(n):
        for b in range(n):
            for c in range(b + 1, n):
                involved = [cell(a, b), cell(a, c), cell(a, int(join[b, c]))]
                idx = [pos[x] for x in involved if x in pos]
                if idx:
                    checks[max(idx)].append((a, b, c))

    def consistent(i):
        for a, b, c in checks[i]:
            if M[a, join[b, c]] != join[M[a, b], M[a, c]]:
                return False
        return True

    def assign(i):
        if i == len(cells):
            budget.tick()
            if _associative(M):
                yield M.copy()
            return
        a, b = cells[i]
        for v in choices[cells[i]]:
            budget.tick()
            M[a, b] = M[b, a] = v
            if consistent(i):
                yield from assign(i + 1)
        M[a, b] = M[b, a] = -1

    yield from assign(0)


def _associative(M: np.ndarray) -> bool:
    ar = np.arange(len(M))
    # [a, b, c] -> (ab)c and a(bc)
    return bool((M[M[:, :, None], ar[None, None, :]] == M[ar[:, None, None], M[None, :, :]]).all())


def _order_first(n: int, budget: _Budget) -> dict[bytes, Lattice]:
    found: dict[bytes, Lattice] = {}
    for le in lattice_orders(n):
        for M in _tables_for_order(le, budget):
            L = validate(_spec_from(le, M))
            found.setdefault(canonical_form(L).certificate, L)
    return found


# -- strategy: brute force over labelled orders and bounded tables ---------------------

def _brute_force(n: int, budget: _Budget) -> dict[bytes, Lattice]:
    found: dict[bytes, Lattice] = {}
    orders = list(_natural_orders(n)) if n > 1 else [np.ones((1, 1), dtype=bool)]
    for le in orders:
        _, meet = _order_tables(le)
        cells = [(a, b) for a in range(n) for b in range(a, n)]
        ranges = [[v for v in range(n) if le[v, meet[a, b]]] for a, b in cells]
        rows, cols = np.array(cells).T
        ar = np.arange(n)
        for values in itertools.product(*ranges):
            budget.tick()
            M = np.zeros((n, n), dtype=np.int64)
            M[rows, cols] = values
            M[cols, rows] = values
            # cheap rejection before the full validator: top must act as identity
            if (M[n - 1] != ar).any():
                continue
            report, _ = check_axioms(_spec_from(le, M))
            if not report.ok:
                continue
            L = validate(_spec_from(le, M))
            found.setdefault(canonical_form(L).certificate, L)
    return found


# -- public entry points ------------------------------------------------------------

def lattices_of_order(n: int, strategy: str = "order-first", budget: int | None = None) -> list[Lattice]:
    """All multiplicative lattices with exactly n elements, up to isomorphism."""
    if strategy not in STRATEGIES:
        raise ValueError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    if n > MAX_ORDER:
        raise ValueError(f"enumeration is limited to order {MAX_ORDER}")
    if n < 2:
        return []
    run = _order_first if strategy == "order-first" else _brute_force
    found = run(n, _Budget(budget))
    out = []
    for cert in sorted(found):
        L = found[cert]
        C = L.relabel(canonical_form(L).labeling)
        out.append(validate(LatticeSpec(C.size, C.covers(), C.mul_table, _element_names(C))))
    return out


def _element_names(L: Lattice) -> list[str]:
    """'0' and '1' for bottom and top, letters for the rest in index order."""
    letters = iter("abcdefghijklmnopqrstuvwxyz")
    return ["0" if x == L.bottom else "1" if x == L.top else next(letters) for x in range(L.size)]


def iter_multiplicative_lattices(max_order: int = 5, strategy: str = "order-first",
                                 budget: int | None = None) -> Iterator[Lattice]:
    """Every multiplicative lattice of size 2..max_order, once per isomorphism
    class, by size and then by canonical certificate."""
    if max_order > MAX_ORDER:
        raise ValueError(f"enumeration is limited to order {MAX_ORDER}")
    for n in range(2, max_order + 1):
        yield from lattices_of_order(n, strategy, budget)


def enumerate_multiplicative_lattices(max_order: int = 5, emit: Callable[[Lattice], None] | None = None,
                                      strategy: str = "order-first", budget: int | None = None) -> list[Lattice]:
    out = []
    for L in iter_multiplicative_lattices(max_order, strategy, budget):
        if emit is not None:
            emit(L)
        out.append(L)
    return out


def count_by_order(max_order: int = 5, strategy: str = "order-first") -> dict[int, int]:
    return {n: len(lattices_of_order(n, strategy)) for n in range(2, max_order + 1)}
