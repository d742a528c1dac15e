"""Structured documents (JSON) for embeddings, Groebner bases, sweeps and
run manifests, plus the plain-text listings printed by the command line."""

from __future__ import annotations

import hashlib
import json
import math
from fractions import Fraction
from pathlib import Path
from typing import Mapping

import numpy as np

from . import __version__
from .embed import Embedding, SolveOptions
from .graphs import Graph
from .groebner import GroebnerResult
from .poly import ConstraintSystem

EMBEDDING_FORMAT = "udembed.embedding/1"
BASIS_FORMAT = "udembed.basis/1"
SWEEP_FORMAT = "udembed.sweep/1"
SEARCH_FORMAT = "udembed.search/1"
MANIFEST_FORMAT = "udembed.manifest/1"


def dumps(doc) -> str:
    # floats go through repr, the shortest text that reads back to the same double
    return json.dumps(doc, indent=2, sort_keys=False, allow_nan=True) + "\n"


def write(path, doc) -> str:
    text = dumps(doc)
    Path(path).write_text(text)
    return text


def read(path) -> dict:
    return json.loads(Path(path).read_text())


def sha256_text(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def graph_doc(g: Graph) -> dict:
    return {
        "name": g.name,
        "digest": g.digest(),
        "labels": list(g.labels),
        "edges": [list(e) for e in g.edge_labels()],
    }


def graph_from_doc(doc: Mapping) -> Graph:
    g = Graph.from_edges(doc["labels"], [tuple(e) for e in doc["edges"]], name=doc.get("name", ""))
    if "digest" in doc and doc["digest"] != g.digest():
        raise ValueError("graph digest does not match its labels/edges")
    return g


def _finite(x: float):
    return x if math.isfinite(x) else None


def embedding_doc(
    emb: Embedding,
    label: str = "embedding",
    options: SolveOptions | Mapping | None = None,
    extra: Mapping | None = None,
) -> dict:
    if isinstance(options, SolveOptions):
        options = options.to_dict()
    doc = {
        "format": EMBEDDING_FORMAT,
        "label": label,
        "graph": graph_doc(emb.graph),
        "vertices": [{"label": lab, "x": float(x), "y": float(y)} for lab, (x, y) in zip(emb.graph.labels, emb.coords)],
        "metrics": {
            "max_edge_deviation": emb.max_edge_deviation,
            "min_separation": _finite(emb.min_separation),
        },
        "solver": dict(options) if options else None,
        "seed": (options or {}).get("seed") if options else None,
    }
    if extra:
        doc.update(extra)
    return doc


def embedding_from_doc(doc: Mapping) -> Embedding:
    if doc.get("format") != EMBEDDING_FORMAT:
        raise ValueError(f"not an embedding document (format {doc.get('format')!r})")
    g = graph_from_doc(doc["graph"])
    coords = {v["label"]: (float(v["x"]), float(v["y"])) for v in doc["vertices"]}
    return Embedding(g, coords)


def _pin_doc(pins: Mapping[str, tuple[Fraction, Fraction]]) -> dict:
    return {lab: [str(x), str(y)] for lab, (x, y) in pins.items()}


def basis_doc(system: ConstraintSystem, result: GroebnerResult) -> dict:
    order = result.order
    return {
        "format": BASIS_FORMAT,
        "graph": graph_doc(system.graph),
        "variables": list(result.names),
        "order": {"kind": order.kind, "precedence": list(order.rank(len(result.names)))},
        "pins": _pin_doc(system.pins),
        "saturated_pairs": [list(p) for p in system.saturated_pairs],
        "status": result.status,
        "basis": result.lines(),
        "pinned_relations": [text for text, _, _ in system.pinned_relations()],
        "stats": result.stats,
    }


def basis_listing(system: ConstraintSystem, result: GroebnerResult) -> str:
    lines = [f"# {system.graph.name or 'graph'}: status {result.status}"]
    lines += [f"{t} = 0" for t in result.lines()]
    lines += [f"{t} = 0    (pinned)" for t, _, _ in system.pinned_relations()]
    return "\n".join(lines) + "\n"


# --------------------------------------------------------------------------
# Sweeps


def sweep_table(result, axes=None) -> str:
    axes = list(axes or result.axes)
    head = ["index", *axes, "distance", "min_separation", "status"]
    rows = ["\t".join(head)]
    for s in result.samples:
        d = "nan" if s.target_distance is None else repr(s.target_distance)
        sep = "nan" if s.min_separation is None else repr(s.min_separation)
        rows.append("\t".join([str(s.index), *(repr(s.params[a]) for a in axes), d, sep, s.status]))
    return "\n".join(rows) + "\n"


def bracket_doc(b) -> dict:
    return {"axis": b.axis, "lo": b.lo, "hi": b.hi, "fixed": b.fixed, "d_lo": b.d_lo, "d_hi": b.d_hi}


def sweep_doc(plan, result) -> dict:
    return {
        "format": SWEEP_FORMAT,
        "plan": plan.name,
        "branches": plan.branches(),
        "axes": list(result.axes),
        "samples": [
            {"index": s.index, "params": s.params, "distance": s.target_distance,
             "min_separation": s.min_separation, "status": s.status}
            for s in result.samples
        ],
        "brackets": [bracket_doc(b) for b in result.brackets],
    }


def search_doc(report) -> dict:
    cands = []
    for c in report.candidates:
        cands.append({
            "label": c.label,
            "bracket": bracket_doc(c.bracket),
            "bisection": {"status": c.bisection.status, "param": c.bisection.param,
                          "iterations": c.bisection.iterations,
                          "distance": c.bisection.target_distance,
                          "failing_interval": c.bisection.failing_interval},
            "max_edge_deviation": _finite(c.max_edge_deviation),
            "min_separation": c.min_separation,
            "passed": c.passed,
        })
    return {
        "format": SEARCH_FORMAT,
        "status": report.status,
        "samples": report.n_samples,
        "brackets": report.n_brackets,
        "tolerances": {"edge": report.edge_tol, "separation": report.separation_tol},
        "variants": [br for br, _ in report.sweeps],
        "candidates": cands,
    }


# --------------------------------------------------------------------------
# Manifests


def manifest_doc(command: list[str], inputs: Mapping[str, str], options: Mapping, outcome: Mapping) -> dict:
    return {
        "format": MANIFEST_FORMAT,
        "command": list(command),
        "inputs": dict(inputs),
        "options": dict(options),
        "version": __version__,
        "outcome": dict(outcome),
    }


def jsonable(obj):
    """Convert numpy scalars / Fractions / tuples for JSON output."""
    if isinstance(obj, dict):
        return {str(k): jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [jsonable(v) for v in obj]
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, Fraction):
        return str(obj)
    return obj
