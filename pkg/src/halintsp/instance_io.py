"""Instance files: JSON with canonical string keys.

Layout::

    {
      "version": 1,
      "k": 3,
      "tree_edges": [[u, v], ...],
      "cycle": [u, ...],
      "linear_costs": {"u,v": c, ...},
      "quadratic_costs": {"u,v|x,y": q, ...}
    }

Edge keys are ``"u,v"`` with u < v; a pair key joins two edge keys with
``|``, the smaller (as an integer tuple) first.  Zero quadratic costs are
omitted; every edge gets a linear entry.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .costs import CostModel
from .errors import CycleMismatch, HalinTSPError, NonPlanar, ValidationError
from .halin import HalinEmbedding, build_embedding, edge_key

FORMAT_VERSION = 1


class InstanceFormatError(ValidationError):
    """The file is not a well-formed instance document."""


@dataclass(eq=False)
class Instance:
    H: HalinEmbedding
    costs: CostModel
    k: int = 3

    @property
    def n(self) -> int:
        return self.H.n


def _parse_edge(key: str) -> tuple[int, int]:
    parts = key.split(",")
    if len(parts) != 2:
        raise InstanceFormatError(f"bad edge key {key!r}")
    try:
        u, v = int(parts[0]), int(parts[1])
    except ValueError:
        raise InstanceFormatError(f"bad edge key {key!r}") from None
    if not u < v:
        raise InstanceFormatError(f"edge key {key!r} is not canonical (need u < v)")
    return u, v


def _edge_str(uv) -> str:
    return f"{uv[0]},{uv[1]}"


def _cost(value, where: str) -> int:
    if isinstance(value, bool) or not isinstance(value, int) or value < 0:
        raise InstanceFormatError(f"{where}: cost must be a nonnegative integer")
    return value


def instance_to_dict(inst: Instance) -> dict:
    H = inst.H
    lin, quad = inst.costs.node_costs(H)
    linear = {_edge_str(uv): lin.get(uv, 0) for uv in sorted(H.edges.values())}
    quadratic = {f"{_edge_str(a)}|{_edge_str(b)}": q
                 for (a, b), q in sorted(quad.items()) if q}
    return {
        "version": FORMAT_VERSION,
        "k": inst.k,
        "tree_edges": [list(uv) for uv in H.tree_edges()],
        "cycle": list(H.cycle),
        "linear_costs": linear,
        "quadratic_costs": quadratic,
    }


def dump_json(doc: dict) -> str:
    """One top-level field per line, values compact; stable for diffs."""
    body = ",\n".join(f" {json.dumps(k)}: {json.dumps(v, separators=(',', ':'))}"
                       for k, v in doc.items())
    return "{\n" + body + "\n}\n"


def dumps(inst: Instance) -> str:
    return dump_json(instance_to_dict(inst))


def write_instance(inst: Instance, path) -> None:
    Path(path).write_text(dumps(inst))


def instance_from_dict(doc: dict) -> Instance:
    """Build and validate an instance.  Validation errors carry a ``field``
    attribute naming the top-level key they concern."""
    if not isinstance(doc, dict):
        raise InstanceFormatError("top level must be an object")
    missing = {"version", "tree_edges", "cycle"} - set(doc)
    if missing:
        raise InstanceFormatError(f"missing field(s): {', '.join(sorted(missing))}")
    field = "version"
    try:
        if doc["version"] != FORMAT_VERSION:
            raise InstanceFormatError(f"unsupported version {doc['version']!r}")
        field = "k"
        k = doc.get("k", 3)
        if k not in (1, 2, 3):
            raise InstanceFormatError(f"k must be 1, 2 or 3, got {k!r}")
        field = "tree_edges"
        try:
            tree = [(int(u), int(v)) for u, v in doc["tree_edges"]]
            field = "cycle"
            cycle = [int(u) for u in doc["cycle"]]
        except (TypeError, ValueError):
            raise InstanceFormatError("tree_edges must be node pairs and cycle a node list") from None
        field = "tree_edges"
        try:
            H = build_embedding(tree, cycle)
        except (CycleMismatch, NonPlanar):
            # the tree is fine; the leaf order is what conflicts
            field = "cycle"
            raise
        field = "linear_costs"
        linear = {}
        for key, c in doc.get("linear_costs", {}).items():
            uv = _parse_edge(key)
            if not H.has_edge(*uv):
                raise InstanceFormatError(f"linear cost on non-edge {key!r}")
            linear[uv] = _cost(c, f"linear_costs[{key!r}]")
        field = "quadratic_costs"
        quadratic = {}
        for key, q in doc.get("quadratic_costs", {}).items():
            halves = key.split("|")
            if len(halves) != 2:
                raise InstanceFormatError(f"bad pair key {key!r}")
            a, b = _parse_edge(halves[0]), _parse_edge(halves[1])
            if not a < b:
                raise InstanceFormatError(f"pair key {key!r} is not canonical")
            for uv in (a, b):
                if not H.has_edge(*uv):
                    raise InstanceFormatError(f"quadratic cost on non-edge {_edge_str(uv)!r}")
            quadratic[(a, b)] = _cost(q, f"quadratic_costs[{key!r}]")
    except ValidationError as exc:
        exc.field = field
        raise
    return Instance(H, CostModel.from_node_costs(H, linear, quadratic), int(k))


def _line_of(text: str, needle: str) -> int:
    pos = text.find(needle)
    return 1 if pos < 0 else text.count("\n", 0, pos) + 1


def loads(text: str) -> Instance:
    """Parse an instance document; errors carry a ``line N:`` prefix
    pointing at the offending field."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceFormatError(f"line {exc.lineno}: {exc.msg}") from None
    try:
        return instance_from_dict(doc)
    except ValidationError as exc:
        where = getattr(exc, "field", None)
        line = _line_of(text, f'"{where}"') if where else 1
        raise type(exc)(f"line {line}: {exc}") from None


def read_instance(path) -> Instance:
    return loads(Path(path).read_text())


def read_tour(path) -> list[int]:
    """Whitespace-separated node ids."""
    text = Path(path).read_text()
    try:
        return [int(tok) for tok in text.split()]
    except ValueError as exc:
        raise HalinTSPError(f"tour file: {exc}") from None


def same_instance(a: Instance, b: Instance) -> bool:
    """Field-exact comparison of two instances."""
    return instance_to_dict(a) == instance_to_dict(b)


__all__ = [
    "Instance", "InstanceFormatError", "dumps", "loads", "read_instance",
    "write_instance", "read_tour", "instance_to_dict", "instance_from_dict",
    "same_instance", "edge_key",
]
