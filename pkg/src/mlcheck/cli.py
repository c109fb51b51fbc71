"""Command-line interface.

Exit codes: 0 success, 1 property violation / vacuity / negative answer,
2 input or configuration error, 3 hunt budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import asdict
from pathlib import Path

from .corpus import ManifestError, emit_report, load_manifest, run_corpus
from .elements import classify, profile
from .enumeration import STRATEGIES, BudgetExceeded, enumerate_multiplicative_lattices
from .factorization import FACTOR_CLASSES, classify_factorization_lattice, factorization
from .hunt import CONJECTURES, hunt
from .lattice import InvalidLattice, SizeCapExceeded, check_axioms
from .mlat import MlatError, dump, load, parse
from .properties import REGISTRY
from .rings import RingError, RingPresentation, build_ring, ideal_lattice

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


class InputError(Exception):
    pass


def _load(path):
    try:
        return load(path)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None
    except (MlatError, InvalidLattice, SizeCapExceeded) as exc:
        raise InputError(f"{path}: {exc}") from None


def _element(L, ref):
    try:
        return L.index(ref)
    except (KeyError, ValueError, IndexError):
        raise InputError(f"no element {ref!r}") from None


def _coeffs(text):
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise InputError(f"bad coefficient list {text!r}; use e.g. 1,0,4 for x^2+4") from None


# -- commands --------------------------------------------------------------------------------

def cmd_validate(args):
    try:
        spec = parse(Path(args.file).read_text())
    except OSError as exc:
        raise InputError(f"cannot read {args.file}: {exc.strerror}") from None
    except MlatError as exc:
        raise InputError(f"{args.file}: {exc}") from None
    try:
        report, _ = check_axioms(spec)
    except ValueError as exc:
        raise InputError(f"{args.file}: {exc}") from None
    if report.ok:
        print(f"ok: multiplicative lattice with {spec.size} elements")
        return EXIT_OK
    print(f"invalid: {len(report.violations)} axiom violation(s)")
    for v in report.violations:
        print(f"  {v}")
    return EXIT_FAIL


_FLAG_COLUMNS = ("prime", "maximal", "primary", "two_absorbing", "one_absorbing",
                 "principal", "weak_principal", "nilpotent", "comparable")
_SHORT = {"two_absorbing": "TA", "one_absorbing": "OA", "weak_principal": "weak-principal"}


def _element_line(L, c):
    flags = [_SHORT.get(f, f) for f in _FLAG_COLUMNS if getattr(c, "is_" + f)]
    return f"{L.name(c.element):>10}  rad={L.name(c.radical):<8} {' '.join(flags) or '-'}"


def cmd_classify(args):
    L = _load(args.file)
    rows = classify(L)
    if args.element is not None:
        c = rows[_element(L, args.element)]
        if args.json:
            print(json.dumps(_jsonable(L, asdict(c)), indent=2))
        else:
            print(_element_line(L, c))
        return EXIT_OK
    prof = profile(L)
    fp = classify_factorization_lattice(L)
    if args.json:
        out = {"elements": [_jsonable(L, asdict(c)) for c in rows],
               "profile": _jsonable(L, asdict(prof)),
               "factorization": asdict(fp)}
        out["factorization"]["counterexamples"] = {k: L.name(v) for k, v in fp.counterexamples.items()}
        print(json.dumps(out, indent=2))
        return EXIT_OK
    for c in rows:
        print(_element_line(L, c))
    maxi = ",".join(L.name(m) for m in sorted(prof.maximal_elements))
    print(f"maximal={maxi} J={L.name(prof.jacobson)} dim={prof.dimension} quasi-local={prof.is_quasi_local}"
          f" domain={prof.is_domain} PG={prof.is_principally_generated} pruefer={prof.is_prufer}")
    classes = [k[3:].upper() for k, v in asdict(fp).items() if k.startswith("is_") and v]
    print("factorization classes: " + (" ".join(classes) or "none"))
    return EXIT_OK


def _jsonable(L, d):
    out = {}
    for k, v in d.items():
        if k in ("element", "radical", "jacobson", "primary_radical") and isinstance(v, int):
            out[k] = L.name(v)
        elif isinstance(v, (set, frozenset)):
            out[k] = sorted(L.name(x) for x in v)
        else:
            out[k] = v
    return out


def cmd_factorize(args):
    L = _load(args.file)
    x = _element(L, args.element)
    w = factorization(L, x, args.factor_class)
    if w is None:
        print(f"{L.name(x)} has no {args.factor_class}-factorization")
        return EXIT_FAIL
    shown = " * ".join(L.name(f) for f in w.factors) or "(empty product)"
    print(f"{L.name(x)} = {shown}")
    return EXIT_OK


def cmd_corpus_run(args):
    try:
        manifest = load_manifest(args.manifest) if args.manifest else None
        ids = [s.strip() for s in args.properties.split(",")] if args.properties else None
        run = run_corpus(manifest, ids, jobs=args.jobs)
    except (ManifestError, KeyError, SizeCapExceeded) as exc:
        raise InputError(str(exc).strip("'\"")) from None
    sys.stdout.write(emit_report(run, args.format))
    return run.exit_code


def cmd_corpus_list(args):
    for pid, d in REGISTRY.items():
        print(f"{pid:<11}{'*' if d.must_be_exercised else ' '} {d.anchor}")
    return EXIT_OK


def cmd_enumerate(args):
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    counts: dict[int, int] = {}

    def emit(L):
        i = counts.get(L.size, 0)
        counts[L.size] = i + 1
        dump(L, out / f"order{L.size}_{i:04d}.mlat", f"enumerated multiplicative lattice, order {L.size}, #{i}")

    try:
        enumerate_multiplicative_lattices(args.max_order, emit, strategy=args.strategy, budget=args.budget)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except ValueError as exc:
        raise InputError(str(exc)) from None
    for n in sorted(counts):
        print(f"order {n}: {counts[n]}")
    print(f"total {sum(counts.values())} lattices written to {out}")
    return EXIT_OK


def cmd_ring(args):
    if args.zn is not None:
        pres = RingPresentation(args.zn)
    else:
        if args.mod is None or args.poly is None:
            raise InputError("ring needs --zn N, or --mod N with --poly COEFFS")
        pres = RingPresentation(args.mod, _coeffs(args.poly), tuple(_coeffs(r) for r in args.rel or ()))
    try:
        result = ideal_lattice(build_ring(pres))
    except (RingError, SizeCapExceeded) as exc:
        raise InputError(str(exc)) from None
    L = result.lattice
    dump(L, args.out, f"ideal lattice of {pres.label()} ({result.ring.size} ring elements)")
    print(f"{pres.label()}: {result.ring.size} elements, {L.size} ideals -> {args.out}")
    return EXIT_OK


def cmd_hunt(args):
    try:
        res = hunt(args.conjecture, args.max_order, args.budget)
    except KeyError as exc:
        raise InputError(str(exc).strip("'\"")) from None
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if res.status == "counterexample":
        print(f"counterexample to {res.conjecture} after {res.examined} lattice(s): "
              f"{res.lattice_id} (size {res.lattice.size})")
        print("witness: " + json.dumps(res.witness, sort_keys=True))
        return EXIT_OK
    if res.status == "clean":
        print(f"no counterexample to {res.conjecture} among {res.examined} lattice(s)")
        return EXIT_OK
    print(f"budget exhausted after {res.examined} lattice(s); search incomplete")
    return EXIT_BUDGET


# -- parser ----------------------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="mlcheck", description="Finite multiplicative lattice checker.")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check the multiplicative lattice axioms of an mlat file")
    s.add_argument("file")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("classify", help="classify every element (or one) of a lattice")
    s.add_argument("file")
    s.add_argument("--element", help="element index or name")
    s.add_argument("--json", action="store_true", help="machine-readable output")
    s.set_defaults(func=cmd_classify)

    s = sub.add_parser("factorize", help="shortest factorization of an element")
    s.add_argument("file")
    s.add_argument("--element", required=True)
    s.add_argument("--class", dest="factor_class", required=True, choices=FACTOR_CLASSES)
    s.set_defaults(func=cmd_factorize)

    s = sub.add_parser("corpus", help="run the property registry over a corpus")
    csub = s.add_subparsers(dest="corpus_command", required=True)
    r = csub.add_parser("run")
    r.add_argument("--manifest", help="JSON manifest (default: built-in corpus)")
    r.add_argument("--properties", help="comma-separated property ids")
    r.add_argument("--jobs", type=int, default=1)
    r.add_argument("--format", choices=("text", "json"), default="text")
    r.set_defaults(func=cmd_corpus_run)
    r = csub.add_parser("list", help="list registered properties")
    r.set_defaults(func=cmd_corpus_list)

    s = sub.add_parser("enumerate", help="write all multiplicative lattices up to an order")
    s.add_argument("--max-order", type=int, default=5)
    s.add_argument("--out", required=True)
    s.add_argument("--strategy", choices=STRATEGIES, default="order-first")
    s.add_argument("--budget", type=int)
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("ring", help="write the ideal lattice of a finite ring")
    g = s.add_mutually_exclusive_group(required=True)
    g.add_argument("--zn", type=int, help="the ring Z/n")
    g.add_argument("--mod", type=int, help="coefficient modulus for Z/n[x]/(f)")
    s.add_argument("--poly", help="monic f, coefficients highest degree first, e.g. 1,0,4")
    s.add_argument("--rel", action="append", help="extra relation polynomial (repeatable)")
    s.add_argument("--out", required=True)
    s.set_defaults(func=cmd_ring)

    s = sub.add_parser("hunt", help="search small lattices for a counterexample")
    s.add_argument("--conjecture", required=True, help=", ".join(sorted(CONJECTURES)))
    s.add_argument("--max-order", type=int, default=5)
    s.add_argument("--budget", type=int, help="maximum number of lattices to examine")
    s.set_defaults(func=cmd_hunt)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except SizeCapExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
