"""Labelled multigraphs and the graph-theoretic constructions on them.

Vertex and edge ids are strings.  Their declaration order is the canonical
order used everywhere a tie has to be broken (spanning trees, circuit
traversal, matrix rows and columns).  Edge labels are positive ints or
``INF``; loops and parallel edges are allowed.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping, Sequence, Union

from .errors import (
    CircuitCapExceeded,
    DanglingEndpoint,
    DisconnectedGraph,
    DuplicateId,
    InvalidLabel,
    NotASpanningTree,
    UnknownEdge,
)

INF = math.inf
Label = Union[int, float]

DEFAULT_CIRCUIT_CAP = 10_000


def is_finite(label: Label) -> bool:
    return label != INF


def check_label(label) -> Label:
    if label == INF:
        return INF
    if isinstance(label, bool) or not isinstance(label, int):
        raise InvalidLabel(f"edge label must be a positive integer or inf, got {label!r}")
    if label < 1:
        raise InvalidLabel(f"edge label must be >= 1, got {label}")
    return label


@dataclass(frozen=True)
class Edge:
    id: str
    source: str
    target: str
    label: Label

    @property
    def is_loop(self) -> bool:
        return self.source == self.target

    def other(self, v: str) -> str:
        return self.target if v == self.source else self.source


class _UnionFind:
    def __init__(self, items: Iterable[str]):
        self.parent = {x: x for x in items}

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        self.parent[rb] = ra
        return True


@dataclass(frozen=True)
class LabelledGraph:
    """Finite connected multigraph with edge labels in Z>=1 and ``INF``.

    ``source``/``target`` of an edge only fix a reference orientation.
    Instances validate themselves on construction and are immutable.
    """

    vertices: tuple[str, ...]
    edges: tuple[Edge, ...]

    def __post_init__(self) -> None:
        if not self.vertices:
            raise DisconnectedGraph("graph has no vertices")
        seen = set()
        for v in self.vertices:
            if v in seen:
                raise DuplicateId(f"duplicate vertex id {v!r}")
            seen.add(v)
        eids = set()
        for e in self.edges:
            if e.id in eids:
                raise DuplicateId(f"duplicate edge id {e.id!r}")
            eids.add(e.id)
            for end in (e.source, e.target):
                if end not in seen:
                    raise DanglingEndpoint(f"edge {e.id!r} has unknown endpoint {end!r}")
            check_label(e.label)
        uf = _UnionFind(self.vertices)
        for e in self.edges:
            uf.union(e.source, e.target)
        roots = {uf.find(v) for v in self.vertices}
        if len(roots) > 1:
            raise DisconnectedGraph(f"graph has {len(roots)} connected components")

    @cached_property
    def vertex_index(self) -> dict[str, int]:
        return {v: i for i, v in enumerate(self.vertices)}

    @cached_property
    def edge_index(self) -> dict[str, int]:
        return {e.id: i for i, e in enumerate(self.edges)}

    @cached_property
    def _edges_by_id(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def incidence(self) -> dict[str, tuple[Edge, ...]]:
        """Edges at each vertex in edge order; a loop appears once."""
        inc: dict[str, list[Edge]] = {v: [] for v in self.vertices}
        for e in self.edges:
            inc[e.source].append(e)
            if not e.is_loop:
                inc[e.target].append(e)
        return {v: tuple(es) for v, es in inc.items()}

    def edge(self, eid: str) -> Edge:
        try:
            return self._edges_by_id[eid]
        except KeyError:
            raise UnknownEdge(f"unknown edge {eid!r}") from None

    @property
    def nullity(self) -> int:
        return len(self.edges) - len(self.vertices) + 1

    @property
    def labels(self) -> tuple[Label, ...]:
        return tuple(e.label for e in self.edges)

    def has_infinite_edges(self) -> bool:
        return any(e.label == INF for e in self.edges)


def build_graph(vertices: Sequence[str],
                edges: Iterable[tuple[str, str, str, Label] | Edge]) -> LabelledGraph:
    """Validated graph from a vertex list and ``(id, source, target, label)`` tuples."""
    es = tuple(e if isinstance(e, Edge) else Edge(*e) for e in edges)
    return LabelledGraph(tuple(vertices), es)


def contract_infinite(g: LabelledGraph) -> tuple[LabelledGraph, dict[str, str]]:
    """Contract every ``INF`` edge.

    Each class of vertices joined by infinite edges collapses onto its first
    member in vertex order.  Finite edges keep their ids and may become loops;
    infinite edges disappear.  Returns the contracted graph and the vertex map.
    """
    uf = _UnionFind(g.vertices)
    for e in g.edges:
        if e.label == INF:
            a, b = uf.find(e.source), uf.find(e.target)
            if a != b:
                # keep the earlier vertex as representative
                if g.vertex_index[a] > g.vertex_index[b]:
                    a, b = b, a
                uf.parent[b] = a
    vmap = {v: uf.find(v) for v in g.vertices}
    vertices = tuple(v for v in g.vertices if vmap[v] == v)
    edges = tuple(Edge(e.id, vmap[e.source], vmap[e.target], e.label)
                  for e in g.edges if e.label != INF)
    return LabelledGraph(vertices, edges), vmap


@dataclass(frozen=True)
class SpanningTree:
    graph: LabelledGraph
    tree_edges: frozenset[str]
    links: tuple[str, ...]


def spanning_tree(g: LabelledGraph, tree_edges: Iterable[str] | None = None) -> SpanningTree:
    """Breadth-first spanning tree from the first vertex, edges tried in edge order.

    Passing ``tree_edges`` forces a particular tree instead; it is checked
    to really be a spanning tree.
    """
    if tree_edges is not None:
        chosen = list(tree_edges)
        for eid in chosen:
            g.edge(eid)
        if len(set(chosen)) != len(g.vertices) - 1:
            raise NotASpanningTree(
                f"a spanning tree needs {len(g.vertices) - 1} edges, got {len(set(chosen))}")
        uf = _UnionFind(g.vertices)
        for eid in chosen:
            e = g.edge(eid)
            if not uf.union(e.source, e.target):
                raise NotASpanningTree(f"edge {eid!r} closes a circuit")
        tree = frozenset(chosen)
    else:
        root = g.vertices[0]
        seen = {root}
        picked = set()
        queue = deque([root])
        while queue:
            v = queue.popleft()
            for e in g.incidence[v]:
                w = e.other(v)
                if w not in seen:
                    seen.add(w)
                    picked.add(e.id)
                    queue.append(w)
        tree = frozenset(picked)
    links = tuple(e.id for e in g.edges if e.id not in tree)
    return SpanningTree(g, tree, links)


@dataclass(frozen=True)
class Circuit:
    """A closed walk with distinct edges and vertices.

    ``vertices[i]`` is where ``edges[i]`` is entered, so the walk runs
    ``vertices[0] -e0-> vertices[1] -e1-> ... -> vertices[0]``.
    ``agrees[i]`` is +1 when the walk traverses ``edges[i]`` from its
    source to its target and -1 otherwise.
    """

    edges: tuple[str, ...]
    vertices: tuple[str, ...]
    agrees: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.edges)

    def sign_of(self, eid: str) -> int:
        """+1/-1 for an edge on the circuit, 0 otherwise."""
        for e, s in zip(self.edges, self.agrees):
            if e == eid:
                return s
        return 0

    def reversed(self) -> Circuit:
        n = len(self.edges)
        edges = tuple(reversed(self.edges))
        verts = tuple(self.vertices[(n - i) % n] for i in range(n))
        return Circuit(edges, verts, tuple(-s for s in reversed(self.agrees)))


def _walk(g: LabelledGraph, start: str, edge_ids: Sequence[str]) -> Circuit:
    verts, signs = [], []
    v = start
    for eid in edge_ids:
        e = g.edge(eid)
        verts.append(v)
        if e.source == v:
            signs.append(1)
            v = e.target
        else:
            signs.append(-1)
            v = e.source
    if v != start:
        raise ValueError("edge sequence is not closed")
    return Circuit(tuple(edge_ids), tuple(verts), tuple(signs))


def fundamental_circuits(g: LabelledGraph, t: SpanningTree) -> list[Circuit]:
    """One circuit per link, traversed in the direction of the link."""
    adj: dict[str, list[tuple[str, str]]] = {v: [] for v in g.vertices}
    for eid in t.tree_edges:
        e = g.edge(eid)
        adj[e.source].append((e.target, eid))
        adj[e.target].append((e.source, eid))
    # parent pointers of the tree rooted at the first vertex
    root = g.vertices[0]
    parent: dict[str, tuple[str, str] | None] = {root: None}
    depth = {root: 0}
    queue = deque([root])
    while queue:
        v = queue.popleft()
        for w, eid in sorted(adj[v], key=lambda p: g.edge_index[p[1]]):
            if w not in parent:
                parent[w] = (v, eid)
                depth[w] = depth[v] + 1
                queue.append(w)

    def tree_path(a: str, b: str) -> list[str]:
        # edge ids along the tree path a -> b
        up_a, up_b = [], []
        while depth[a] > depth[b]:
            p, eid = parent[a]
            up_a.append(eid)
            a = p
        while depth[b] > depth[a]:
            p, eid = parent[b]
            up_b.append(eid)
            b = p
        while a != b:
            pa, ea = parent[a]
            pb, eb = parent[b]
            up_a.append(ea)
            up_b.append(eb)
            a, b = pa, pb
        return up_a + list(reversed(up_b))

    circuits = []
    for lid in t.links:
        link = g.edge(lid)
        if link.is_loop:
            circuits.append(Circuit((lid,), (link.source,), (1,)))
            continue
        path = tree_path(link.target, link.source)
        circuits.append(_walk(g, link.source, [lid] + path))
    return circuits


def _circuit_key(g: LabelledGraph, c: Circuit) -> tuple:
    return (len(c.edges), tuple(sorted(g.edge_index[e] for e in c.edges)))


def enumerate_circuits(g: LabelledGraph, cap: int = DEFAULT_CIRCUIT_CAP) -> list[Circuit]:
    """Every circuit of ``g`` exactly once.

    A circuit starts at its earliest vertex and leaves it along the earlier
    of its two edges there.  Circuits are ordered by length, then by their
    sorted edge positions.  Raises :class:`CircuitCapExceeded` past ``cap``.
    """
    vidx, eidx = g.vertex_index, g.edge_index
    found: list[Circuit] = []

    def record(c: Circuit) -> None:
        found.append(c)
        if len(found) > cap:
            raise CircuitCapExceeded(f"more than {cap} circuits")

    for s in g.vertices:
        si = vidx[s]
        for e in g.incidence[s]:
            if e.is_loop:
                record(Circuit((e.id,), (s,), (1,)))
        # depth-first over simple paths from s through later vertices only
        stack = [(s, [], [s], set())]
        while stack:
            v, path, verts, used = stack.pop()
            for e in reversed(g.incidence[v]):
                if e.is_loop or e.id in used:
                    continue
                w = e.other(v)
                if w == s:
                    if path and eidx[path[0]] < eidx[e.id]:
                        record(_walk(g, s, path + [e.id]))
                    continue
                if vidx[w] < si or w in verts:
                    continue
                stack.append((w, path + [e.id], verts + [w], used | {e.id}))
    found.sort(key=lambda c: _circuit_key(g, c))
    return found


@dataclass(frozen=True)
class BlowupGraph:
    """A blow-up of ``base`` together with its provenance.

    ``old_vertices`` are the vertices of ``base`` (they keep their ids).
    ``edge_origin`` maps every edge to the base edge it subdivides.
    ``vertex_origin`` maps every new vertex to ``(base edge, offset)`` where
    offset is the summed label from the base edge's source, or ``None`` when
    an infinite edge lies between (only possible on infinite base edges).
    """

    graph: LabelledGraph
    base: LabelledGraph
    old_vertices: frozenset[str]
    edge_origin: Mapping[str, str]
    vertex_origin: Mapping[str, tuple[str, int | None]]
    level: int
    # per edge: offsets of its two ends measured from the base source and target
    edge_ends: Mapping[str, tuple[tuple, tuple]] = field(repr=False, default_factory=dict)

    @property
    def new_vertices(self) -> tuple[str, ...]:
        return tuple(v for v in self.graph.vertices if v not in self.old_vertices)

    @classmethod
    def wrap(cls, g: LabelledGraph) -> BlowupGraph:
        """Level-0 blow-up: the graph itself, every vertex old."""
        ends = {}
        for e in g.edges:
            m = e.label if is_finite(e.label) else None
            ends[e.id] = ((0, m), (m, 0))
        return cls(graph=g, base=g, old_vertices=frozenset(g.vertices),
                   edge_origin={e.id: e.id for e in g.edges}, vertex_origin={},
                   level=0, edge_ends=ends)


def _shift(pos: tuple, step: int) -> tuple:
    # move ``step`` units toward the base target
    s, t = pos
    return (None if s is None else s + step, None if t is None else t - step)


def _fresh(taken: set[str], want: str) -> str:
    name, k = want, 1
    while name in taken:
        k += 1
        name = f"{want}#{k}"
    taken.add(name)
    return name


def first_blowup(bg: BlowupGraph | LabelledGraph) -> BlowupGraph:
    """Replace every edge of label m >= 2 by a path labelled 1, m-2, 1.

    For m == 2 the two interior vertices coincide and the path is 1, 1;
    an ``INF`` edge becomes 1, INF, 1.  Label-1 edges are untouched.
    """
    if isinstance(bg, LabelledGraph):
        bg = BlowupGraph.wrap(bg)
    g = bg.graph
    vtaken = set(g.vertices)
    etaken = {e.id for e in g.edges}
    vertices = list(g.vertices)
    edges: list[Edge] = []
    edge_origin = dict(bg.edge_origin)
    vertex_origin = dict(bg.vertex_origin)
    ends = dict(bg.edge_ends)

    for e in g.edges:
        m = e.label
        if m == 1:
            edges.append(e)
            continue
        origin = bg.edge_origin[e.id]
        start, stop = bg.edge_ends[e.id]
        del edge_origin[e.id], ends[e.id]
        etaken.discard(e.id)
        a = _fresh(vtaken, f"{e.id}:a")
        pa = _shift(start, 1)
        vertices.append(a)
        vertex_origin[a] = (origin, pa[0])
        if m == 2:
            pieces = [(e.source, a, 1, start, pa), (a, e.target, 1, pa, stop)]
        else:
            b = _fresh(vtaken, f"{e.id}:b")
            pb = _shift(stop, -1)
            vertices.append(b)
            vertex_origin[b] = (origin, pb[0])
            pieces = [(e.source, a, 1, start, pa),
                      (a, b, m - 2 if is_finite(m) else INF, pa, pb),
                      (b, e.target, 1, pb, stop)]
        for k, (u, w, lab, pu, pw) in enumerate(pieces, 1):
            nid = _fresh(etaken, f"{e.id}.{k}")
            edges.append(Edge(nid, u, w, lab))
            edge_origin[nid] = origin
            ends[nid] = (pu, pw)

    graph = LabelledGraph(tuple(vertices), tuple(edges))
    return BlowupGraph(graph=graph, base=bg.base, old_vertices=bg.old_vertices,
                       edge_origin=edge_origin, vertex_origin=vertex_origin,
                       level=bg.level + 1, edge_ends=ends)


def nth_blowup(g: LabelledGraph, n: int) -> BlowupGraph:
    if n < 0:
        raise ValueError("blow-up level must be non-negative")
    bg = BlowupGraph.wrap(g)
    for _ in range(n):
        bg = first_blowup(bg)
    return bg


def total_blowup(g: LabelledGraph) -> BlowupGraph:
    """Subdivide each finite edge of label m into m unit edges; ``INF`` edges stay.

    The result is reported with ``level=1``: it is a single blow-up step
    from ``g``, not an iterate of :func:`first_blowup`.
    """
    vtaken = set(g.vertices)
    etaken = {e.id for e in g.edges}
    vertices = list(g.vertices)
    edges: list[Edge] = []
    edge_origin: dict[str, str] = {}
    vertex_origin: dict[str, tuple[str, int | None]] = {}
    ends = {}
    for e in g.edges:
        m = e.label
        if m == INF or m == 1:
            edges.append(e)
            edge_origin[e.id] = e.id
            mm = None if m == INF else 1
            ends[e.id] = ((0, mm), (mm, 0))
            continue
        etaken.discard(e.id)
        path = [e.source]
        for k in range(1, m):
            v = _fresh(vtaken, f"{e.id}:{k}")
            vertices.append(v)
            vertex_origin[v] = (e.id, k)
            path.append(v)
        path.append(e.target)
        for k in range(m):
            nid = _fresh(etaken, f"{e.id}.{k + 1}")
            edges.append(Edge(nid, path[k], path[k + 1], 1))
            edge_origin[nid] = e.id
            ends[nid] = ((k, m - k), (k + 1, m - k - 1))
    graph = LabelledGraph(tuple(vertices), tuple(edges))
    return BlowupGraph(graph=graph, base=g, old_vertices=frozenset(g.vertices),
                       edge_origin=edge_origin, vertex_origin=vertex_origin,
                       level=1, edge_ends=ends)


def to_networkx(g: LabelledGraph, old_vertices: Iterable[str] | None = None):
    import networkx as nx

    old = set(g.vertices if old_vertices is None else old_vertices)
    nxg = nx.MultiGraph()
    for v in g.vertices:
        nxg.add_node(v, old=v in old)
    for e in g.edges:
        nxg.add_edge(e.source, e.target, key=e.id, label=e.label)
    return nxg


def are_isomorphic(a: LabelledGraph, b: LabelledGraph,
                   old_a: Iterable[str] | None = None,
                   old_b: Iterable[str] | None = None) -> bool:
    """Label-preserving isomorphism test that maps old vertices to old vertices.

    With ``old_a``/``old_b`` omitted every vertex counts as old.
    """
    import networkx as nx

    def edges_match(x, y):
        return sorted(d["label"] for d in x.values()) == sorted(d["label"] for d in y.values())

    return nx.is_isomorphic(
        to_networkx(a, old_a), to_networkx(b, old_b),
        node_match=lambda x, y: x["old"] == y["old"],
        edge_match=edges_match,
    )
