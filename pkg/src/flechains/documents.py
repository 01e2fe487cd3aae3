"""JSON document format for groups, bunches, tables, formations, and results.

Rationals are serialized as ints when integral and as exact "p/q" strings
otherwise; floats are rejected.  Matrices are row-major arrays.  Every
document carries a format_version field.  parse and serialize are exact
inverses on the documented kinds.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .amalgam import AmalgamResult, VFormation
from .bunches import Bunch, EmbeddingSpec, make_bunch
from .chains import AlgElement, FiniteChainTable, TAG_DOTTED, TAG_PLAIN
from .dirsys import DirectSystem, Skeleton
from .intlin import frac, mat
from .ogroups import (
    LATTICE_INT,
    LATTICE_RAT,
    TRIVIAL,
    OGroup,
    OGroupHom,
    SubgroupSpec,
    lex_group,
)

FORMAT_VERSION = "1"

KINDS = ("bunch", "system", "skeleton", "table", "vformation", "embedding", "elements", "amalgam")


class DocumentError(ValueError):
    def __init__(self, errors):
        if isinstance(errors, str):
            errors = [errors]
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass(frozen=True)
class Document:
    kind: str
    payload: object
    format_version: str = FORMAT_VERSION


# ---------------------------------------------------------------------------
# Rationals and matrices


def rational_to_json(value):
    f = Fraction(value)
    if f.denominator == 1:
        return int(f)
    return f"{f.numerator}/{f.denominator}"


def rational_from_json(value, path="$"):
    if isinstance(value, float):
        raise DocumentError(f"{path}: floats are not exact; write rationals as 'p/q'")
    try:
        return frac(value)
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"{path}: {exc}") from None


def matrix_to_json(matrix):
    return [[rational_to_json(x) for x in row] for row in matrix]


def matrix_from_json(rows, path="$"):
    if not isinstance(rows, list) or any(not isinstance(r, list) for r in rows):
        raise DocumentError(f"{path}: a matrix is a list of rows")
    return tuple(
        tuple(rational_from_json(x, f"{path}[{i}][{j}]") for j, x in enumerate(row))
        for i, row in enumerate(rows)
    )


# ---------------------------------------------------------------------------
# Groups, homs, subgroups


def group_to_json(group: OGroup):
    if group.is_trivial:
        return {"kind": "trivial"}
    return {
        "kind": "lex",
        "lattice": group.lattice,
        "rank": group.rank,
        "functionals": matrix_to_json(group.functionals),
    }


def group_from_json(data, path="$"):
    if not isinstance(data, dict) or "kind" not in data:
        raise DocumentError(f"{path}: a group is an object with a 'kind'")
    if data["kind"] == "trivial":
        return TRIVIAL
    if data["kind"] != "lex":
        raise DocumentError(f"{path}: unknown group kind {data['kind']!r}")
    if data.get("lattice") not in (LATTICE_INT, LATTICE_RAT):
        raise DocumentError(f"{path}: lattice must be 'int' or 'rat'")
    try:
        return lex_group(data["lattice"], int(data["rank"]), matrix_from_json(data["functionals"], path))
    except (KeyError, ValueError, TypeError) as exc:
        raise DocumentError(f"{path}: {exc}") from None


def hom_to_json(hom: OGroupHom):
    return {
        "source": group_to_json(hom.source),
        "target": group_to_json(hom.target),
        "matrix": matrix_to_json(hom.matrix),
    }


def hom_from_json(data, path="$"):
    try:
        return OGroupHom(
            group_from_json(data["source"], f"{path}.source"),
            group_from_json(data["target"], f"{path}.target"),
            matrix_from_json(data["matrix"], f"{path}.matrix"),
        )
    except KeyError as exc:
        raise DocumentError(f"{path}: missing field {exc}") from None
    except ValueError as exc:
        raise DocumentError(f"{path}: {exc}") from None


# ---------------------------------------------------------------------------
# Skeletons, systems, bunches


def skeleton_to_json(skeleton: Skeleton):
    return [{"id": node, "label": label} for node, label in zip(skeleton.nodes, skeleton.labels)]


def skeleton_from_json(data, path="$"):
    if not isinstance(data, list):
        raise DocumentError(f"{path}: a skeleton is a list of nodes")
    nodes, labels = [], []
    for i, entry in enumerate(data):
        if not isinstance(entry, dict) or "id" not in entry or "label" not in entry:
            raise DocumentError(f"{path}[{i}]: a node is an object with 'id' and 'label'")
        nodes.append(entry["id"])
        labels.append(entry["label"])
    try:
        return Skeleton(tuple(nodes), tuple(labels))
    except ValueError as exc:
        raise DocumentError(f"{path}: {exc}") from None


def _system_body_to_json(system: DirectSystem):
    body = {
        "skeleton": skeleton_to_json(system.skeleton),
        "groups": [group_to_json(g) for g in system.groups],
        "transitions": [matrix_to_json(step.matrix) for step in system.steps],
    }
    if system.extra:
        body["extra_transitions"] = [
            {"from": u, "to": v, "matrix": matrix_to_json(hom.matrix)} for u, v, hom in system.extra
        ]
    return body


def _system_body_from_json(data, path="$"):
    skeleton = skeleton_from_json(data.get("skeleton"), f"{path}.skeleton")
    raw_groups = data.get("groups")
    if not isinstance(raw_groups, list) or len(raw_groups) != len(skeleton):
        raise DocumentError(f"{path}.groups: one group per skeleton node")
    groups = tuple(group_from_json(g, f"{path}.groups[{i}]") for i, g in enumerate(raw_groups))
    raw_steps = data.get("transitions", [])
    if len(raw_steps) != max(len(skeleton) - 1, 0):
        raise DocumentError(f"{path}.transitions: one matrix per consecutive node pair")
    steps = []
    for i, rows in enumerate(raw_steps):
        try:
            steps.append(OGroupHom(groups[i], groups[i + 1], matrix_from_json(rows, f"{path}.transitions[{i}]")))
        except ValueError as exc:
            raise DocumentError(f"{path}.transitions[{i}]: {exc}") from None
    extra = []
    for i, entry in enumerate(data.get("extra_transitions", [])):
        epath = f"{path}.extra_transitions[{i}]"
        if not isinstance(entry, dict) or "from" not in entry or "to" not in entry:
            raise DocumentError(f"{epath}: needs 'from', 'to', and 'matrix'")
        try:
            u, v = entry["from"], entry["to"]
            hom = OGroupHom(
                groups[skeleton.position(u)],
                groups[skeleton.position(v)],
                matrix_from_json(entry.get("matrix"), f"{epath}.matrix"),
            )
        except (KeyError, ValueError) as exc:
            raise DocumentError(f"{epath}: {exc}") from None
        extra.append((u, v, hom))
    return DirectSystem(skeleton, groups, tuple(steps), tuple(extra))


def system_to_json(system: DirectSystem):
    return {"format_version": FORMAT_VERSION, "kind": "system", **_system_body_to_json(system)}


def bunch_to_json(bunch: Bunch):
    body = _system_body_to_json(bunch.system)
    body["subgroups"] = [
        {"node": node, "basis": [[int(x) for x in row] for row in spec.basis]}
        for node, spec in bunch.subgroups
    ]
    return {"format_version": FORMAT_VERSION, "kind": "bunch", **body}


def bunch_from_json(data, path="$"):
    system = _system_body_from_json(data, path)
    subgroups = {}
    for i, entry in enumerate(data.get("subgroups", [])):
        spath = f"{path}.subgroups[{i}]"
        if not isinstance(entry, dict) or "node" not in entry or "basis" not in entry:
            raise DocumentError(f"{spath}: needs 'node' and 'basis'")
        try:
            subgroups[entry["node"]] = SubgroupSpec(matrix_from_json(entry["basis"], f"{spath}.basis"))
        except ValueError as exc:
            raise DocumentError(f"{spath}: {exc}") from None
    return make_bunch(system.skeleton, system.groups, system.steps, subgroups, system.extra)


# ---------------------------------------------------------------------------
# Embeddings, formations, tables, elements, amalgams


def embedding_to_json(spec: EmbeddingSpec):
    return {
        "node_map": [[a, b] for a, b in spec.node_map],
        "layer_homs": [{"node": node, "matrix": matrix_to_json(hom.matrix)} for node, hom in spec.layer_homs],
    }


def embedding_from_json(data, source: Bunch, target: Bunch, path="$"):
    if not isinstance(data, dict):
        raise DocumentError(f"{path}: an embedding is an object")
    raw_map = data.get("node_map")
    if not isinstance(raw_map, list):
        raise DocumentError(f"{path}.node_map: a list of [from, to] pairs")
    node_map = []
    for i, pair in enumerate(raw_map):
        if not isinstance(pair, list) or len(pair) != 2:
            raise DocumentError(f"{path}.node_map[{i}]: a [from, to] pair")
        node_map.append((pair[0], pair[1]))
    mapping = dict(node_map)
    homs = []
    for i, entry in enumerate(data.get("layer_homs", [])):
        hpath = f"{path}.layer_homs[{i}]"
        if not isinstance(entry, dict) or "node" not in entry or "matrix" not in entry:
            raise DocumentError(f"{hpath}: needs 'node' and 'matrix'")
        node = entry["node"]
        try:
            hom = OGroupHom(
                source.group_at(node),
                target.group_at(mapping[node]),
                matrix_from_json(entry["matrix"], f"{hpath}.matrix"),
            )
        except (KeyError, ValueError) as exc:
            raise DocumentError(f"{hpath}: {exc}") from None
        homs.append((node, hom))
    return EmbeddingSpec(tuple(node_map), tuple(homs))


def _bunch_or_path(value, base_dir: Path | None, path: str):
    if isinstance(value, str):
        if base_dir is None:
            raise DocumentError(f"{path}: file references need a base directory")
        doc = parse_document((base_dir / value))
        if doc.kind != "bunch":
            raise DocumentError(f"{path}: referenced file is a {doc.kind}, not a bunch")
        return doc.payload
    return bunch_from_json(value, path)


def vformation_from_json(data, path="$", base_dir: Path | None = None):
    try:
        x = _bunch_or_path(data["x"], base_dir, f"{path}.x")
        y = _bunch_or_path(data["y"], base_dir, f"{path}.y")
        z = _bunch_or_path(data["z"], base_dir, f"{path}.z")
        iota1 = embedding_from_json(data["iota1"], x, y, f"{path}.iota1")
        iota2 = embedding_from_json(data["iota2"], x, z, f"{path}.iota2")
    except KeyError as exc:
        raise DocumentError(f"{path}: missing field {exc}") from None
    return VFormation(x=x, y=y, z=z, iota1=iota1, iota2=iota2)


def vformation_to_json(v: VFormation):
    return {
        "format_version": FORMAT_VERSION,
        "kind": "vformation",
        "x": _strip_header(bunch_to_json(v.x)),
        "y": _strip_header(bunch_to_json(v.y)),
        "z": _strip_header(bunch_to_json(v.z)),
        "iota1": embedding_to_json(v.iota1),
        "iota2": embedding_to_json(v.iota2),
    }


def _strip_header(body: dict) -> dict:
    return {k: v for k, v in body.items() if k not in ("format_version", "kind")}


def table_to_json(table: FiniteChainTable):
    return {
        "format_version": FORMAT_VERSION,
        "kind": "table",
        "size": table.size,
        "mul": [list(row) for row in table.mul],
        "t": table.t_index,
        "f": table.f_index,
    }


def table_from_json(data, path="$"):
    try:
        return FiniteChainTable(
            size=int(data["size"]),
            mul=tuple(tuple(int(v) for v in row) for row in data["mul"]),
            t_index=int(data["t"]),
            f_index=int(data["f"]),
        )
    except KeyError as exc:
        raise DocumentError(f"{path}: missing field {exc}") from None
    except (TypeError, ValueError) as exc:
        raise DocumentError(f"{path}: {exc}") from None


def element_to_json(element: AlgElement):
    return {
        "node": element.node,
        "tag": element.tag,
        "coords": [rational_to_json(x) for x in element.coords],
    }


def element_from_json(data, path="$"):
    if not isinstance(data, dict) or "node" not in data:
        raise DocumentError(f"{path}: an element is an object with 'node', 'tag', 'coords'")
    tag = data.get("tag", TAG_PLAIN)
    if tag not in (TAG_PLAIN, TAG_DOTTED):
        raise DocumentError(f"{path}.tag: 'plain' or 'dotted'")
    coords = data.get("coords", [])
    if not isinstance(coords, list):
        raise DocumentError(f"{path}.coords: a list of rationals")
    return AlgElement(
        data["node"], tag, tuple(rational_from_json(x, f"{path}.coords[{i}]") for i, x in enumerate(coords))
    )


def amalgam_to_json(result: AmalgamResult):
    return {
        "format_version": FORMAT_VERSION,
        "kind": "amalgam",
        "w": _strip_header(bunch_to_json(result.w)),
        "iota3": embedding_to_json(result.iota3),
        "iota4": embedding_to_json(result.iota4),
        "layer_orders": [
            {"node": node, "functionals": matrix_to_json(order) if order else []}
            for node, order in result.layer_orders
        ],
        "construction": result.construction,
        "verification": result.report.render(),
    }


# ---------------------------------------------------------------------------
# Top-level parse and serialize


def parse_document(source, base_dir: Path | None = None) -> Document:
    """Parse a document from a path, JSON text, or a parsed object."""
    if isinstance(source, Path):
        base_dir = source.parent
        try:
            text = source.read_text(encoding="utf-8")
        except OSError as exc:
            raise DocumentError(str(exc)) from None
        return parse_document(text, base_dir)
    if isinstance(source, str):
        try:
            data = json.loads(source)
        except json.JSONDecodeError as exc:
            raise DocumentError(f"line {exc.lineno}, column {exc.colno}: {exc.msg}") from None
        return parse_document(data, base_dir)
    data = source
    if not isinstance(data, dict):
        raise DocumentError("$: a document is a JSON object")
    version = data.get("format_version")
    if version != FORMAT_VERSION:
        raise DocumentError(f"$.format_version: expected {FORMAT_VERSION!r}, got {version!r}")
    kind = data.get("kind")
    if kind not in KINDS:
        raise DocumentError(f"$.kind: expected one of {', '.join(KINDS)}")
    if kind == "bunch":
        payload = bunch_from_json(data)
    elif kind == "system":
        payload = _system_body_from_json(data)
    elif kind == "skeleton":
        payload = skeleton_from_json(data.get("nodes"), "$.nodes")
    elif kind == "table":
        payload = table_from_json(data)
    elif kind == "vformation":
        payload = vformation_from_json(data, base_dir=base_dir)
    elif kind == "elements":
        raw = data.get("elements")
        if not isinstance(raw, list):
            raise DocumentError("$.elements: a list of elements")
        payload = tuple(element_from_json(e, f"$.elements[{i}]") for i, e in enumerate(raw))
    elif kind == "embedding":
        raise DocumentError("$.kind: embeddings are parsed in the context of their bunches")
    else:
        payload = data
    return Document(kind=kind, payload=payload, format_version=version)


def serialize_document(doc_kind: str, payload) -> str:
    if doc_kind == "bunch":
        body = bunch_to_json(payload)
    elif doc_kind == "system":
        body = system_to_json(payload)
    elif doc_kind == "skeleton":
        body = {"format_version": FORMAT_VERSION, "kind": "skeleton", "nodes": skeleton_to_json(payload)}
    elif doc_kind == "table":
        body = table_to_json(payload)
    elif doc_kind == "vformation":
        body = vformation_to_json(payload)
    elif doc_kind == "amalgam":
        body = amalgam_to_json(payload)
    elif doc_kind == "elements":
        body = {
            "format_version": FORMAT_VERSION,
            "kind": "elements",
            "elements": [element_to_json(e) for e in payload],
        }
    else:
        raise ValueError(f"cannot serialize documents of kind {doc_kind!r}")
    return json.dumps(body, indent=2, sort_keys=False)
