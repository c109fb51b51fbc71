"""Canonical labelling of finite multiplicative lattices.

Colour refinement over the order relation and the multiplication table,
followed by individualisation of the first non-singleton cell and exhaustive
branching.  The certificate is the lexicographically smallest encoding over
all leaves of the search tree, so two lattices share a certificate exactly
when they are isomorphic.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass

import numpy as np

from .lattice import Lattice


@dataclass(frozen=True)
class CanonicalForm:
    certificate: bytes
    labeling: tuple[int, ...]       # labeling[old] = new

    @property
    def digest(self) -> str:
        return hashlib.sha256(self.certificate).hexdigest()


def _rank_rows(rows: np.ndarray) -> np.ndarray:
    _, inv = np.unique(rows, axis=0, return_inverse=True)
    return inv.reshape(-1).astype(np.int64)


def _refine(colors: np.ndarray, M: np.ndarray, LE: np.ndarray) -> np.ndarray:
    n = len(colors)
    while True:
        k = int(colors.max()) + 1
        code = (colors[None, :] * k + colors[M]) * 4 + LE * 2 + LE.T
        code.sort(axis=1)
        new = _rank_rows(np.concatenate([colors[:, None], code], axis=1))
        if len(np.unique(new)) == len(np.unique(colors)):
            return new
        colors = new
        if int(colors.max()) + 1 == n:
            return colors


def _encode(colors: np.ndarray, M: np.ndarray, LE: np.ndarray) -> bytes:
    n = len(colors)
    inv = np.empty(n, dtype=np.int64)
    inv[colors] = np.arange(n)
    le = LE[np.ix_(inv, inv)]
    mul = colors[M[np.ix_(inv, inv)]]
    head = n.to_bytes(4, "big")
    return head + np.packbits(le).tobytes() + mul.astype(">u2").tobytes()


def _initial_colors(M: np.ndarray, LE: np.ndarray) -> np.ndarray:
    n = len(M)
    sig = np.stack([
        LE.sum(axis=0), LE.sum(axis=1),
        (M[np.arange(n), np.arange(n)] == np.arange(n)).astype(np.int64),
    ], axis=1)
    return _rank_rows(sig)


def canonical_form(L: Lattice) -> CanonicalForm:
    return L.memo("canonical_form", lambda: _canonical_form(L))


def _canonical_form(L: Lattice) -> CanonicalForm:
    return canonical_arrays(L.mul_np, L.leq_np)


def canonical_arrays(mul, leq) -> CanonicalForm:
    """Canonical form of a raw (multiplication, order) pair of n x n arrays.

    ``mul`` need not be a valid multiplication; passing a constant table
    canonicalises the order alone.
    """
    M = np.asarray(mul, dtype=np.int64)
    LE = np.asarray(leq, dtype=np.int64)
    best: list = [None, None]

    def search(colors):
        colors = _refine(colors, M, LE)
        n = len(colors)
        counts = np.bincount(colors, minlength=n)
        if counts.max() == 1:
            cert = _encode(colors, M, LE)
            if best[0] is None or cert < best[0]:
                best[0], best[1] = cert, colors
            return
        target = int(np.nonzero(counts > 1)[0][0])
        for v in np.nonzero(colors == target)[0]:
            branch = colors * 2 + 1
            branch[v] -= 1
            search(_rank_rows(branch[:, None]))

    search(_initial_colors(M, LE))
    return CanonicalForm(best[0], tuple(int(c) for c in best[1]))


def canonical_lattice(L: Lattice) -> Lattice:
    """The isomorphic copy of ``L`` relabelled into canonical order."""
    return L.relabel(canonical_form(L).labeling)


def isomorphic(A: Lattice, B: Lattice) -> bool:
    if A.size != B.size:
        return False
    return canonical_form(A).certificate == canonical_form(B).certificate
