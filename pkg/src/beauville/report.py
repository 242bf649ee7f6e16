"""Report assembly and rendering for the command-line front end.

JSON schema (``version`` is the package version)::

    {version, spec, group: {order, classes, sigma_count, sigma_sizes},
     dimension: {d, witness, certificate, blocking_element}, timing_ms}

``witness`` is a list of ``{x, y, z, sigma_size}`` (``null`` when d = 1),
``certificate`` a list of ``[element, carrier index]`` and elements are
rendered as words in the designated generators when a word of length at
most 12 exists, else as ``"#<index>"``.  ``timing_ms`` is ``null`` when
timing is switched off, which makes the output byte-identical across runs.
"""

from __future__ import annotations

import csv
import io
import json
import time
from collections import deque
from typing import Any

import numpy as np

from . import __version__
from .catalog import FixtureRow, expand_presets
from .core import DimensionResult, StructureFamily, beauville_dimension
from .dsl import build
from .errors import BeauvilleError, ConstructionError, DegenerateInput, SpecError
from .groups import GroupTable
from .words import Word, render_word

MAX_WORD_LENGTH = 12


class ElementNamer:
    """Shortest words for elements, found by breadth-first search over the
    generators and their inverses."""

    def __init__(self, G: GroupTable, max_length: int = MAX_WORD_LENGTH):
        self.G = G
        n = G.order
        self.words: list[Word | None] = [None] * n
        self.words[0] = Word()
        steps = []
        for name, g in zip(G.generator_names, G.generators):
            steps.append((Word.gen(name), int(g)))
            if G.inv[g] != g:
                steps.append((Word.gen(name, -1), int(G.inv[g])))
        queue = deque([(0, 0)])
        while queue:
            e, depth = queue.popleft()
            if depth == max_length:
                continue
            for w, g in steps:
                f = int(G.mult[e, g])
                if self.words[f] is None:
                    self.words[f] = self.words[e] * w
                    queue.append((f, depth + 1))

    def __call__(self, e: int) -> str:
        w = self.words[int(e)]
        return render_word(w) if w is not None else f"#{int(e)}"


def _pair_dicts(fam: StructureFamily, name: ElementNamer) -> list[dict]:
    return [
        {"x": name(p.x), "y": name(p.y), "z": name(p.z), "sigma_size": len(c)}
        for p, c in zip(fam.pairs, fam.sigma_carriers)
    ]


def analysis_report(spec: str, G: GroupTable, result: DimensionResult, timing_ms: float | None) -> dict:
    name = ElementNamer(G)
    records = result.records
    return {
        "version": __version__,
        "spec": spec,
        "group": {
            "order": G.order,
            "classes": len(G.class_reps),
            "sigma_count": len(records),
            "sigma_sizes": [len(r.carrier) for r in records],
        },
        "dimension": {
            "d": result.d,
            "witness": _pair_dicts(result.witness, name) if result.witness else None,
            "certificate": [[name(e), i] for e, i in result.certificate],
            "blocking_element": None if result.blocking_element is None else name(result.blocking_element),
        },
        "timing_ms": None if timing_ms is None else round(timing_ms, 3),
    }


def analyze(spec: str, *, cap: int, max_cosets: int, workers: int = 1, timing: bool = True) -> dict:
    t0 = time.perf_counter()
    G = build(expand_presets(spec), cap=cap, max_cosets=max_cosets)
    result = beauville_dimension(G, workers=workers)
    elapsed = (time.perf_counter() - t0) * 1000 if timing else None
    return analysis_report(spec, G, result, elapsed)


def structures_report(spec: str, G: GroupTable, result: DimensionResult, families: list[StructureFamily]) -> dict:
    name = ElementNamer(G)
    return {
        "version": __version__,
        "spec": spec,
        "d": result.d,
        "blocking_element": None if result.blocking_element is None else name(result.blocking_element),
        "families": [
            {"classification": str(f.classification), "pairs": _pair_dicts(f, name)} for f in families
        ],
    }


def error_kind(exc: BaseException) -> str:
    if isinstance(exc, (SpecError, KeyError)):
        return "parse"
    if isinstance(exc, ConstructionError):
        return "construction"
    if isinstance(exc, DegenerateInput):
        return "degenerate"
    return "error"


def run_fixture(row: FixtureRow, cap: int, max_cosets: int) -> dict:
    """One fixture row; errors are captured in the row, never raised."""
    out: dict[str, Any] = {
        "spec": row.spec,
        "provenance": row.provenance,
        "expected_d": row.expected_d,
        "expected_order": row.expected_order,
        "order": None,
        "d": None,
        "ok": False,
        "error": None,
    }
    try:
        G = build(expand_presets(row.spec), cap=cap, max_cosets=max_cosets)
        out["order"] = G.order
        out["d"] = beauville_dimension(G).d
    except (BeauvilleError, KeyError) as exc:
        out["error"] = f"{error_kind(exc)}: {exc}"
        return out
    out["ok"] = out["d"] == row.expected_d and (row.expected_order is None or row.expected_order == out["order"])
    return out


def to_json(obj) -> str:
    return json.dumps(obj, indent=2, sort_keys=False, default=_json_default) + "\n"


def _json_default(v):
    if isinstance(v, np.integer):
        return int(v)
    if isinstance(v, (set, frozenset)):
        return sorted(v)
    raise TypeError(f"cannot serialise {type(v).__name__}")


def to_csv(header: list[str], rows: list[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    w.writerows(rows)
    return buf.getvalue()


def analysis_text(rep: dict) -> str:
    g, d = rep["group"], rep["dimension"]
    lines = [
        f"spec        {rep['spec']}",
        f"order       {g['order']}",
        f"classes     {g['classes']}",
        f"carriers    {g['sigma_count']} (sizes {', '.join(map(str, g['sigma_sizes']))})",
        f"d           {d['d']}",
    ]
    if d["blocking_element"] is not None:
        lines.append(f"blocking    {d['blocking_element']} lies in every carrier")
    if d["witness"]:
        for i, p in enumerate(d["witness"]):
            lines.append(f"witness[{i}]  x = {p['x']}, y = {p['y']}, z = {p['z']}  |sigma| = {p['sigma_size']}")
    if rep["timing_ms"] is not None:
        lines.append(f"time        {rep['timing_ms']:.1f} ms")
    return "\n".join(lines) + "\n"


def analysis_csv(rep: dict) -> str:
    g, d = rep["group"], rep["dimension"]
    witness = ";".join(f"({p['x']},{p['y']})" for p in d["witness"] or [])
    return to_csv(
        ["spec", "order", "classes", "sigma_count", "d", "witness", "blocking_element", "timing_ms"],
        [[rep["spec"], g["order"], g["classes"], g["sigma_count"], d["d"], witness, d["blocking_element"] or "", rep["timing_ms"] if rep["timing_ms"] is not None else ""]],
    )
