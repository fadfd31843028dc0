"""JSON matroid and plan files.

Matroid file::

    {
      "name": "vamos",
      "elements": ["a1", "a1p", ...],
      "kind": "sparse_paving",
      "rank": 4,
      "sets": [
        ["a1", "a1p", "a2", "a2p"],
        ...
      ]
    }

``rank`` is present only for ``sparse_paving``. The writer emits one set per
line, elements in ground-set order and sets sorted by size then position, so
parse/format round-trips byte for byte on canonically ordered input.

Plan file::

    {
      "parts": {"X": [...], "Y": [...], "Z": [...]},
      "tree_edges": [["X", "Y"], ["Y", "Z"]],
      "requests": [
        {"edge": ["X", "Y"], "Y_strand": [...], "Z_strand": [...], "label": "p"}
      ]
    }

The ``Y_strand`` of a request lies on the side of ``edge[0]``.
"""
from __future__ import annotations

import hashlib
import json

from .errors import InvalidSpec, ParseError, SchemaError
from .extension import ExtensionRequest, TreeExtensionPlan
from .matroid import KINDS, Matroid, MatroidSpec, validate_spec

MATROID_FIELDS = ("name", "elements", "kind", "rank", "sets")
PLAN_FIELDS = ("parts", "tree_edges", "requests")
REQUEST_FIELDS = ("edge", "Y_strand", "Z_strand", "label")


def _load(text: str):
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _label_list(value, field: str) -> list:
    if not isinstance(value, list) or not all(isinstance(v, str) for v in value):
        raise SchemaError(f"field {field!r}: expected a list of element labels")
    return value


def _check_fields(obj, allowed, required, where):
    if not isinstance(obj, dict):
        raise SchemaError(f"{where}: expected a JSON object")
    unknown = [k for k in obj if k not in allowed]
    if unknown:
        raise SchemaError(f"{where}: unknown field {unknown[0]!r}")
    missing = [k for k in required if k not in obj]
    if missing:
        raise SchemaError(f"{where}: missing field {missing[0]!r}")


def parse_matroid_file(text: str) -> MatroidSpec:
    obj = _load(text)
    _check_fields(obj, MATROID_FIELDS, ("elements", "kind", "sets"), "matroid file")
    name = obj.get("name", "")
    if not isinstance(name, str):
        raise SchemaError("field 'name': expected a string")
    elements = _label_list(obj["elements"], "elements")
    kind = obj["kind"]
    if kind not in KINDS:
        raise SchemaError(f"field 'kind': expected one of {', '.join(KINDS)}")
    rank = obj.get("rank")
    if kind == "sparse_paving":
        if not isinstance(rank, int) or isinstance(rank, bool):
            raise SchemaError("field 'rank': sparse_paving files need an integer rank")
    elif "rank" in obj:
        raise SchemaError("field 'rank': only sparse_paving files carry a rank")
    if not isinstance(obj["sets"], list):
        raise SchemaError("field 'sets': expected a list of label lists")
    sets = [_label_list(s, "sets") for s in obj["sets"]]
    spec = MatroidSpec(kind, elements, sets, rank=rank, name=name)
    try:
        validate_spec(spec)
    except InvalidSpec as exc:
        raise SchemaError(str(exc)) from exc
    return spec


def canonical_spec(spec: MatroidSpec) -> MatroidSpec:
    pos = {e: i for i, e in enumerate(spec.elements)}
    sets = [tuple(sorted(s, key=pos.__getitem__)) for s in spec.sets]
    sets.sort(key=lambda s: (len(s), [pos[e] for e in s]))
    return MatroidSpec(spec.kind, spec.elements, sets, rank=spec.rank, name=spec.name)


def format_matroid_file(spec: MatroidSpec) -> str:
    spec = canonical_spec(spec)
    lines = ["{", f'  "name": {json.dumps(spec.name)},',
             f'  "elements": {json.dumps(list(spec.elements))},',
             f'  "kind": {json.dumps(spec.kind)},']
    if spec.kind == "sparse_paving":
        lines.append(f'  "rank": {spec.rank},')
    if spec.sets:
        lines.append('  "sets": [')
        body = [f"    {json.dumps(list(s))}" for s in spec.sets]
        lines.append(",\n".join(body))
        lines.append("  ]")
    else:
        lines.append('  "sets": []')
    lines.append("}")
    return "\n".join(lines) + "\n"


def digest(text: str) -> str:
    return "sha256:" + hashlib.sha256(text.encode()).hexdigest()


def parse_plan_file(text: str, m: Matroid) -> TreeExtensionPlan:
    obj = _load(text)
    _check_fields(obj, PLAN_FIELDS, PLAN_FIELDS, "plan file")

    def mask(labels, field):
        labels = _label_list(labels, field)
        unknown = [s for s in labels if s not in m.labels]
        if unknown:
            raise SchemaError(f"field {field!r}: unknown elements {unknown}")
        return m.mask(labels)

    if not isinstance(obj["parts"], dict):
        raise SchemaError("field 'parts': expected an object of named label lists")
    parts = {name: mask(v, f"parts.{name}") for name, v in obj["parts"].items()}
    edges = []
    for e in obj["tree_edges"] if isinstance(obj["tree_edges"], list) else [None]:
        if not (isinstance(e, list) and len(e) == 2 and all(isinstance(v, str) for v in e)):
            raise SchemaError("field 'tree_edges': expected pairs of part names")
        edges.append(tuple(e))
    if not isinstance(obj["requests"], list):
        raise SchemaError("field 'requests': expected a list")
    requests = []
    for k, req in enumerate(obj["requests"]):
        _check_fields(req, REQUEST_FIELDS, REQUEST_FIELDS, f"requests[{k}]")
        edge = req["edge"]
        if not (isinstance(edge, list) and len(edge) == 2 and all(isinstance(v, str) for v in edge)):
            raise SchemaError(f"requests[{k}].edge: expected a pair of part names")
        if not isinstance(req["label"], str) or not req["label"]:
            raise SchemaError(f"requests[{k}].label: expected a nonempty string")
        requests.append(ExtensionRequest(
            tuple(edge),
            mask(req["Y_strand"], f"requests[{k}].Y_strand"),
            mask(req["Z_strand"], f"requests[{k}].Z_strand"),
            req["label"],
        ))
    return TreeExtensionPlan(parts, edges, requests)


def format_plan_file(plan: TreeExtensionPlan, m: Matroid) -> str:
    obj = {
        "parts": {name: m.labels_of(mask) for name, mask in plan.parts.items()},
        "tree_edges": [list(e) for e in plan.tree_edges],
        "requests": [
            {"edge": list(r.edge), "Y_strand": m.labels_of(r.y_strand),
             "Z_strand": m.labels_of(r.z_strand), "label": r.label}
            for r in plan.requests
        ],
    }
    return json.dumps(obj, indent=2) + "\n"
