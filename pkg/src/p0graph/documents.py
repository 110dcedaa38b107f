"""JSON input documents and certificate documents.

Rationals always travel as strings in lowest terms (``"-3/4"``, ``"2"``);
bare JSON integers are accepted on input as shorthand. Floats are rejected.

Input document::

    {"k": 2,
     "matrices": [{"rows": 1, "cols": 2, "entries": [[1, "1/2"]]},
                  {"rows": 2, "cols": 1, "entries": [[3], [-4]]}]}

``entries`` may be a list of rows or a flat row-major list.
"""

from __future__ import annotations

import json
from fractions import Fraction
from importlib.metadata import PackageNotFoundError, version
from typing import Any

from .bcdigraph import CycleCensus, LayeredVertex, build_graph, classify_cycle
from .certify import COUNTEREXAMPLE, Certificate, Counterexample
from .errors import ConsistencyError, DimensionError
from .ratmat import (
    IndexSet,
    RationalMatrix,
    SignPattern,
    check_chain,
    is_P0,
    minor,
    principal_minors,
    product_chain,
    sign_pattern,
    to_rational,
)

__all__ = [
    "TOOL_NAME",
    "InputError",
    "tool_version",
    "parse_input",
    "load_input",
    "input_document",
    "certificate_to_document",
    "certificate_from_document",
    "verify_document",
]

TOOL_NAME = "p0graph"


class InputError(ValueError):
    """Malformed input document; the message names the offending field."""


def tool_version() -> str:
    try:
        return version("artifact")
    except PackageNotFoundError:
        return "0+unknown"


def _parse_entry(x: Any, where: str) -> Fraction:
    if isinstance(x, bool) or not isinstance(x, (int, str)):
        raise InputError(f"{where}: expected an integer or 'p/q' string, got {json.dumps(x)}")
    try:
        return to_rational(x)
    except (TypeError, ValueError) as exc:
        raise InputError(f"{where}: {exc}") from None


def _field(obj: dict, key: str, where: str):
    if not isinstance(obj, dict):
        raise InputError(f"{where}: expected an object")
    if key not in obj:
        raise InputError(f"{where}: missing field '{key}'")
    return obj[key]


def _positive_int(x, where: str) -> int:
    if isinstance(x, bool) or not isinstance(x, int) or x < 1:
        raise InputError(f"{where}: expected a positive integer, got {json.dumps(x)}")
    return x


def parse_input(doc: Any) -> list[RationalMatrix]:
    """Validate an input document and return its matrix list."""
    k = _positive_int(_field(doc, "k", "document"), "k")
    blocks = _field(doc, "matrices", "document")
    if not isinstance(blocks, list):
        raise InputError("matrices: expected a list")
    if len(blocks) != k:
        raise InputError(f"k is {k} but {len(blocks)} matrices were given")
    ms = []
    for b, block in enumerate(blocks):
        where = f"matrices[{b}]"
        rows = _positive_int(_field(block, "rows", where), f"{where}.rows")
        cols = _positive_int(_field(block, "cols", where), f"{where}.cols")
        entries = _field(block, "entries", where)
        if not isinstance(entries, list):
            raise InputError(f"{where}.entries: expected a list")
        if entries and all(isinstance(r, list) for r in entries):
            if len(entries) != rows:
                raise InputError(f"{where}.entries: {len(entries)} rows, expected {rows}")
            grid = []
            for i, r in enumerate(entries):
                if len(r) != cols:
                    raise InputError(f"{where}.entries[{i}]: {len(r)} entries, expected {cols}")
                grid.append([_parse_entry(x, f"{where}.entries[{i}][{j}]") for j, x in enumerate(r)])
        else:
            if len(entries) != rows * cols:
                raise InputError(f"{where}.entries: {len(entries)} entries, expected {rows}x{cols}={rows * cols}")
            flat = [_parse_entry(x, f"{where}.entries[{i}]") for i, x in enumerate(entries)]
            grid = [flat[i * cols:(i + 1) * cols] for i in range(rows)]
        ms.append(RationalMatrix(grid))
    try:
        check_chain([m.shape for m in ms])
    except DimensionError as exc:
        raise InputError(f"matrices: {exc}") from None
    return ms


def load_input(path) -> list[RationalMatrix]:
    """Read and validate an input document from a file."""
    try:
        with open(path, encoding="utf-8") as fh:
            text = fh.read()
    except OSError as exc:
        raise InputError(f"{path}: {exc.strerror}") from None
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno} column {exc.colno}: {exc.msg}") from None
    return parse_input(doc)


def input_document(ms) -> dict:
    """Inverse of :func:`parse_input`."""
    ms = [RationalMatrix(m) for m in ms]
    return {
        "k": len(ms),
        "matrices": [{"rows": m.nrows, "cols": m.ncols, "entries": m.to_strings()} for m in ms],
    }


def _cycle_doc(c) -> dict:
    return {
        "vertices": [[v.layer, v.index] for v in c.vertices],
        "length": c.length,
        "r1": c.r1,
        "r2": c.r2,
        "parity": c.parity,
    }


def _cycle_from_doc(g, d):
    verts = [LayeredVertex(*v) for v in d["vertices"]]
    edges = []
    for u, v in zip(verts, verts[1:] + verts[:1]):
        e = g.edge(u, v)
        if e is None:
            raise ValueError(f"cycle edge {u} -> {v} is not in the graph")
        edges.append(e)
    c = classify_cycle(edges, g.k)
    if (c.r1, c.r2, c.parity) != (d["r1"], d["r2"], d["parity"]):
        raise ValueError(f"cycle {d['vertices']} recorded as {d['r1']},{d['r2']},{d['parity']}")
    return c


def _matrices_doc(ms) -> list:
    return [m.to_strings() for m in ms]


def certificate_to_document(cert: Certificate, seed: int = 0, input_matrices=None) -> dict:
    """Plain-JSON form of a certificate.

    ``input_matrices``, when given, adds the concrete product of the input
    and its principal minors. That part is informational: the verdict
    depends only on sign patterns.
    """
    g = build_graph(cert.patterns)
    doc: dict[str, Any] = {
        "tool": TOOL_NAME,
        "version": tool_version(),
        "verdict": cert.verdict,
        "k": g.k,
        "layer_sizes": list(g.layer_sizes),
        "patterns": [p.tolist() for p in cert.patterns],
        "enumeration": {
            "inventory": cert.census is not None,
            "cycle_count": len(cert.census) if cert.census is not None else None,
            "examined": cert.cycles_examined,
            "truncated": cert.truncated,
            "cap": cert.census.cap if cert.census is not None else None,
        },
        "cycles": [_cycle_doc(c) for c in cert.cycle_inventory],
        "samples": {"drawn": cert.samples_drawn, "passed": cert.samples_passed, "seed": seed},
        "counterexample": None,
    }
    if cert.counterexample is not None:
        cx = cert.counterexample
        doc["counterexample"] = {
            "ecycle": _cycle_doc(cx.ecycle),
            "alpha0": list(cx.alpha0),
            "restricted": _matrices_doc(cx.restricted),
            "restricted_minor": str(cx.restricted_minor),
            "witness": _matrices_doc(cx.witness),
            "witness_minor": str(cx.witness_minor),
            "epsilon": str(cx.epsilon),
        }
    if input_matrices is not None:
        product = product_chain(input_matrices)
        doc["input_product"] = {
            "matrix": product.to_strings(),
            "principal_minors": [
                {"alpha": list(a), "value": str(v)} for a, v in principal_minors(product)
            ],
            "is_P0": bool(is_P0(product)),
        }
    return doc


def certificate_from_document(doc: dict) -> Certificate:
    """Rebuild a :class:`Certificate` from its JSON form.

    Cycles are re-derived from the graph of the recorded patterns, so a
    cycle that is not actually in the graph, or whose parity is misrecorded,
    raises ``ValueError``.
    """
    patterns = tuple(SignPattern(p) for p in doc["patterns"])
    g = build_graph(patterns)
    enum = doc["enumeration"]
    census = None
    if enum["inventory"]:
        cycles = tuple(_cycle_from_doc(g, c) for c in doc["cycles"])
        census = CycleCensus(cycles, enum["truncated"], enum["cap"])
    cx = None
    if doc["counterexample"] is not None:
        d = doc["counterexample"]
        cx = Counterexample(
            _cycle_from_doc(g, d["ecycle"]),
            IndexSet(d["alpha0"]),
            tuple(RationalMatrix(m) for m in d["restricted"]),
            to_rational(d["restricted_minor"]),
            tuple(RationalMatrix(m) for m in d["witness"]),
            to_rational(d["witness_minor"]),
            to_rational(d["epsilon"]),
        )
    return Certificate(
        doc["verdict"], patterns, census, enum["examined"],
        doc["samples"]["drawn"], doc["samples"]["passed"], cx,
    )


def verify_document(doc: dict) -> None:
    """Recompute every checkable number in a certificate document.

    Raises :class:`ConsistencyError` on the first mismatch.
    """
    cert = certificate_from_document(doc)
    if any(c.is_e for c in cert.cycle_inventory) and cert.verdict != COUNTEREXAMPLE:
        raise ConsistencyError(f"verdict {cert.verdict} but the inventory lists an e-cycle")
    cx = cert.counterexample
    if (cx is not None) != (cert.verdict == COUNTEREXAMPLE):
        raise ConsistencyError("counterexample block does not match the verdict")
    if cx is None:
        return
    if not cx.ecycle.is_e:
        raise ConsistencyError("recorded e-cycle is an o-cycle")
    rmin = minor(product_chain(cx.restricted), cx.alpha0, cx.alpha0)
    wprod = product_chain(cx.witness)
    wmin = minor(wprod, cx.alpha0, cx.alpha0)
    if rmin != cx.restricted_minor or not rmin < 0:
        raise ConsistencyError(f"restricted minor recomputes to {rmin}, recorded {cx.restricted_minor}")
    if wmin != cx.witness_minor or not wmin < 0:
        raise ConsistencyError(f"witness minor recomputes to {wmin}, recorded {cx.witness_minor}")
    if is_P0(wprod):
        raise ConsistencyError("witness product is P0")
    for j, (p, w) in enumerate(zip(cert.patterns, cx.witness)):
        if sign_pattern(w) != p:
            raise ConsistencyError(f"witness factor {j} has the wrong sign pattern")
