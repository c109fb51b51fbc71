"""Corpus manifests, the property runner and report serialization."""

from __future__ import annotations

import hashlib
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path

from .constructions import BUILTINS, builtin, divisor_lattice, field as field_lattice, gap_chain5
from .enumeration import lattices_of_order
from .lattice import Lattice
from .mlat import load
from .properties import REGISTRY, Study, select
from .rings import RingPresentation, build_ring, ideal_lattice


class ManifestError(ValueError):
    pass


DEFAULT_RINGS = (
    RingPresentation(4), RingPresentation(8), RingPresentation(12), RingPresentation(16),
    RingPresentation(36), RingPresentation(240),
    RingPresentation(4, (1, 0, 0), ((2, 0),)),
    RingPresentation(16, (1, 0, 4)),
    RingPresentation(16, (1, 0, 7)),
)


def default_manifest() -> dict:
    return {
        "sources": [
            {"kind": "builtin", "names": list(BUILTINS)},
            {"kind": "divisors", "from": 2, "to": 200},
            *({"kind": "ring", "modulus": p.modulus, "poly": list(p.poly),
               "relations": [list(r) for r in p.relations]} for p in DEFAULT_RINGS),
            {"kind": "enumerate", "max_order": 5},
        ]
    }


def manifest_digest(manifest: dict) -> str:
    blob = json.dumps(manifest, sort_keys=True, separators=(",", ":")).encode()
    return hashlib.sha256(blob).hexdigest()


def load_manifest(path) -> dict:
    try:
        data = json.loads(Path(path).read_text())
    except (OSError, json.JSONDecodeError) as exc:
        raise ManifestError(f"cannot read manifest {path}: {exc}") from None
    if not isinstance(data, dict) or not isinstance(data.get("sources"), list):
        raise ManifestError("manifest must be an object with a 'sources' list")
    base = Path(path).parent
    for src in data["sources"]:
        if src.get("kind") == "file" and not Path(src["path"]).is_absolute():
            src["path"] = str(base / src["path"])
    return data


def _members(src: dict):
    kind = src.get("kind")
    if kind == "builtin":
        for name in src.get("names", list(BUILTINS)):
            yield f"builtin:{name}", builtin(name)
    elif kind == "divisors":
        for n in range(int(src["from"]), int(src["to"]) + 1):
            yield f"divisors:{n}", divisor_lattice(n)
    elif kind == "ring":
        p = RingPresentation(int(src["modulus"]), tuple(src.get("poly", ())),
                             tuple(tuple(r) for r in src.get("relations", ())))
        yield f"ring:{p.label()}", ideal_lattice(build_ring(p)).lattice
    elif kind == "enumerate":
        for n in range(2, int(src["max_order"]) + 1):
            for i, L in enumerate(lattices_of_order(n)):
                yield f"enumerated:{n}:{i}", L
    elif kind == "file":
        yield f"file:{src['path']}", load(src["path"])
    else:
        raise ManifestError(f"unknown source kind {kind!r}")


def resolve(manifest: dict) -> list[tuple[str, Lattice]]:
    """Corpus members in manifest order; raises ManifestError on bad sources."""
    out = []
    for src in manifest["sources"]:
        try:
            out.extend(_members(src))
        except ManifestError:
            raise
        except (KeyError, TypeError, ValueError, OSError) as exc:
            raise ManifestError(f"cannot resolve source {src}: {exc}") from None
    return out


def product_partners() -> tuple[tuple[str, Lattice], ...]:
    """A TAFL and a non-TAFL partner for the direct-product checks."""
    return (("field", field_lattice()), ("gap-chain5", gap_chain5()))


# -- running -----------------------------------------------------------------------------

@dataclass
class PropertyReport:
    id: str
    anchor: str
    examined: int = 0
    hypothesis_hits: int = 0
    violations: list[dict] = field(default_factory=list)
    elapsed_ms: float = 0.0
    must_be_exercised: bool = False

    @property
    def vacuous(self) -> bool:
        return self.hypothesis_hits == 0

    @property
    def status(self) -> str:
        if self.violations:
            return "violated"
        if self.vacuous:
            return "vacuous-mandatory" if self.must_be_exercised else "vacuous"
        return "pass"


@dataclass
class CorpusRun:
    manifest_digest: str
    reports: list[PropertyReport]
    members: list[str]

    @property
    def verdict(self) -> str:
        if any(r.violations for r in self.reports):
            return "fail"
        if any(r.status == "vacuous-mandatory" for r in self.reports):
            return "vacuous"
        return "pass"

    @property
    def exit_code(self) -> int:
        return 0 if self.verdict == "pass" else 1


def _evaluate(args):
    ident, L, ids = args
    st = Study(L, ident, product_partners())
    out = []
    for pid in ids:
        d = REGISTRY[pid]
        t0 = time.perf_counter()
        hit = bool(d.hypothesis(st))
        witness = d.check(st) if hit else None
        out.append((hit, witness, (time.perf_counter() - t0) * 1000))
    return out


def run_corpus(manifest: dict | None = None, properties=None, jobs: int = 1) -> CorpusRun:
    manifest = default_manifest() if manifest is None else manifest
    descriptors = select(properties)
    ids = [d.id for d in descriptors]
    members = resolve(manifest)
    tasks = [(ident, L, ids) for ident, L in members]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_evaluate, tasks, chunksize=4))
    else:
        results = [_evaluate(t) for t in tasks]
    reports = [PropertyReport(d.id, d.anchor, must_be_exercised=d.must_be_exercised) for d in descriptors]
    for (ident, _), per_prop in zip(members, results):
        for rep, (hit, witness, ms) in zip(reports, per_prop):
            rep.examined += 1
            rep.elapsed_ms += ms
            if hit:
                rep.hypothesis_hits += 1
                if witness is not None:
                    rep.violations.append({"lattice": ident, "witness": witness})
    for rep in reports:
        rep.elapsed_ms = round(rep.elapsed_ms, 3)
    return CorpusRun(manifest_digest(manifest), reports, [m[0] for m in members])


# -- reports ----------------------------------------------------------------------------------

def report_dict(run: CorpusRun) -> dict:
    return {
        "manifest_digest": run.manifest_digest,
        "properties": [
            {"id": r.id, "anchor": r.anchor, "examined": r.examined,
             "hypothesis_hits": r.hypothesis_hits, "violations": r.violations,
             "elapsed_ms": r.elapsed_ms}
            for r in run.reports
        ],
        "verdict": run.verdict,
    }


def emit_report(run: CorpusRun, fmt: str = "text") -> str:
    if fmt == "json":
        return json.dumps(report_dict(run), indent=2) + "\n"
    if fmt != "text":
        raise ValueError(f"unknown report format {fmt!r}")
    width = max(len(r.id) for r in run.reports) if run.reports else 0
    lines = [f"manifest {run.manifest_digest[:16]}  members {len(run.members)}"]
    for r in run.reports:
        mark = "*" if r.must_be_exercised else " "
        lines.append(f"{r.id:<{width}}{mark} {r.status:<17} hits {r.hypothesis_hits:>4}/{r.examined:<4}"
                     f" violations {len(r.violations):<3} {r.anchor}")
        for v in r.violations[:5]:
            lines.append(f"    {v['lattice']}: {json.dumps(v['witness'], sort_keys=True)}")
    lines.append(f"verdict: {run.verdict}  (* = must be exercised)")
    return "\n".join(lines) + "\n"
