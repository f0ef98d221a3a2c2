"""Graph documents (JSON) and their conversion to :class:`LabelledGraph`.

A document is one JSON object::

    {"name": "...", "vertices": ["v1", ...],
     "edges": [{"id": "e1", "ends": ["v1", "v2"], "label": 3}, ...]}

with ``"inf"`` as the label of an infinite edge.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .errors import GraphError, ParseError, ValidationError
from .graph import INF, Edge, LabelledGraph


@dataclass(frozen=True)
class GraphDocument:
    name: str
    vertices: tuple[str, ...]
    edges: tuple[tuple[str, str, str, Any], ...]

    def to_graph(self) -> LabelledGraph:
        edges = []
        for eid, s, t, label in self.edges:
            if label == "inf":
                label = INF
            edges.append(Edge(eid, s, t, label))
        try:
            return LabelledGraph(self.vertices, tuple(edges))
        except GraphError as exc:
            raise ValidationError(f"{self.name}: {exc}") from exc

    @classmethod
    def from_graph(cls, g: LabelledGraph, name: str = "graph") -> GraphDocument:
        return cls(name, g.vertices, tuple(
            (e.id, e.source, e.target, "inf" if e.label == INF else e.label) for e in g.edges))

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "vertices": list(self.vertices),
            "edges": [{"id": eid, "ends": [s, t], "label": label}
                      for eid, s, t, label in self.edges],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


def _fail(where: str, msg: str):
    raise ParseError(f"{where}: {msg}")


def document_from_dict(data: Any, source: str = "<document>") -> GraphDocument:
    if not isinstance(data, dict):
        _fail(source, "top level must be a JSON object")
    unknown = set(data) - {"name", "vertices", "edges"}
    if unknown:
        _fail(source, f"unknown field(s) {sorted(unknown)}")
    name = data.get("name", Path(source).stem)
    if not isinstance(name, str):
        _fail(f"{source}: name", "must be a string")
    vertices = data.get("vertices")
    if not isinstance(vertices, list) or not all(isinstance(v, str) for v in vertices):
        _fail(f"{source}: vertices", "must be a list of strings")
    edges = data.get("edges", [])
    if not isinstance(edges, list):
        _fail(f"{source}: edges", "must be a list")
    out = []
    for i, e in enumerate(edges):
        where = f"{source}: edges[{i}]"
        if not isinstance(e, dict):
            _fail(where, "must be an object")
        extra = set(e) - {"id", "ends", "label"}
        if extra:
            _fail(where, f"unknown field(s) {sorted(extra)}")
        eid, ends, label = e.get("id"), e.get("ends"), e.get("label")
        if not isinstance(eid, str):
            _fail(f"{where}.id", "must be a string")
        if (not isinstance(ends, list) or len(ends) != 2
                or not all(isinstance(x, str) for x in ends)):
            _fail(f"{where}.ends", "must be a list of two vertex ids")
        if label != "inf" and (isinstance(label, bool) or not isinstance(label, int)):
            _fail(f"{where}.label", f"must be a positive integer or \"inf\", got {label!r}")
        if label != "inf" and label < 1:
            raise ValidationError(f"{where}.label: labels must be >= 1, got {label}")
        out.append((eid, ends[0], ends[1], label))
    return GraphDocument(name, tuple(vertices), tuple(out))


def parse_graph_text(text: str, source: str = "<document>") -> GraphDocument:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
    doc = document_from_dict(data, source)
    doc.to_graph()
    return doc


def parse_graph_file(path: str | Path) -> GraphDocument:
    path = Path(path)
    try:
        text = path.read_text(encoding="utf-8")
    except (OSError, UnicodeDecodeError) as exc:
        raise ParseError(f"{path}: cannot read: {exc}") from None
    return parse_graph_text(text, str(path))


def load_graph(path: str | Path) -> LabelledGraph:
    return parse_graph_file(path).to_graph()


FIXTURES = Path(__file__).parent / "data"


def fixture(name: str) -> LabelledGraph:
    """One of the example graphs shipped with the package, e.g. ``"two_triangles"``."""
    return load_graph(FIXTURES / f"{name}.json")
