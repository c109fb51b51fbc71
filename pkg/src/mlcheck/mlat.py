"""Reader and writer for the line-oriented ``mlat 1`` lattice format.

::

    mlat 1
    elements 3
    names 0 m 1          # optional
    order
    0 1
    1 2
    mul
    0 0 0
    0 0 1
    0 1 2

``#`` starts a comment.  Order lines are any generating set of pairs
``i j`` meaning element i <= element j; the closure is computed on load.
"""

from __future__ import annotations

from pathlib import Path

from .lattice import Lattice, LatticeSpec, validate


class MlatError(ValueError):
    pass


def parse(text: str) -> LatticeSpec:
    lines = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if line:
            lines.append((lineno, line.split()))
    if not lines or lines[0][1] != ["mlat", "1"]:
        raise MlatError("first line must be 'mlat 1'")
    if len(lines) < 2 or lines[1][1][0] != "elements" or len(lines[1][1]) != 2:
        raise MlatError("second line must be 'elements <n>'")
    try:
        n = int(lines[1][1][1])
    except ValueError:
        raise MlatError(f"line {lines[1][0]}: bad element count") from None
    if n < 1:
        raise MlatError("element count must be positive")

    names = None
    order: list[tuple[int, int]] = []
    mul: list[tuple[int, ...]] = []
    section = None
    seen = set()
    for lineno, toks in lines[2:]:
        head = toks[0]
        if head == "names" and section is None:
            names = tuple(toks[1:])
            if len(names) != n:
                raise MlatError(f"line {lineno}: expected {n} names, got {len(names)}")
            continue
        if head in ("order", "mul") and len(toks) == 1:
            if head in seen:
                raise MlatError(f"line {lineno}: duplicate section '{head}'")
            seen.add(head)
            section = head
            continue
        try:
            vals = tuple(int(t) for t in toks)
        except ValueError:
            raise MlatError(f"line {lineno}: expected integers, got {' '.join(toks)!r}") from None
        if any(not 0 <= v < n for v in vals):
            raise MlatError(f"line {lineno}: index out of range 0..{n - 1}")
        if section == "order":
            if len(vals) != 2:
                raise MlatError(f"line {lineno}: order lines have two indices")
            order.append((vals[0], vals[1]))
        elif section == "mul":
            if len(vals) != n:
                raise MlatError(f"line {lineno}: mul rows have {n} entries")
            mul.append(vals)
        else:
            raise MlatError(f"line {lineno}: data outside a section")
    if "mul" not in seen:
        raise MlatError("missing 'mul' section")
    if len(mul) != n:
        raise MlatError(f"mul section has {len(mul)} rows, expected {n}")
    return LatticeSpec(n, tuple(order), tuple(mul), names)


def dumps(L: Lattice | LatticeSpec, comment: str | None = None) -> str:
    spec = L.spec() if isinstance(L, Lattice) else L
    out = []
    if comment:
        out.extend(f"# {line}" for line in comment.splitlines())
    out += ["mlat 1", f"elements {spec.size}"]
    if spec.names is not None:
        if any(not s or any(c.isspace() for c in s) or "#" in s for s in spec.names):
            raise MlatError("names must be non-empty tokens without whitespace or '#'")
        out.append("names " + " ".join(spec.names))
    out.append("order")
    out.extend(f"{a} {b}" for a, b in spec.order)
    out.append("mul")
    out.extend(" ".join(map(str, row)) for row in spec.mul)
    return "\n".join(out) + "\n"


def loads(text: str) -> Lattice:
    return validate(parse(text))


def load(path) -> Lattice:
    return loads(Path(path).read_text())


def dump(L, path, comment: str | None = None) -> None:
    Path(path).write_text(dumps(L, comment))
