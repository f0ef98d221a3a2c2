"""Vertex labellings: the Cartier lattice, the multidegree operator and the
component groups it presents, plus the maps between a graph and its blow-ups.

Vertex labellings are plain ``dict`` objects from vertex id to int.

Geometric reading, for orientation only: a Cartier labelling is a Cartier
divisor supported on the special fibre, the multidegree of a labelling is
the multidegree of the associated line bundle, and blow-up graphs are the
dual graphs of the iterated blow-ups of the non-regular points.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .errors import NotABlowupOf, NotCartier, SupportConditionViolated
from .graph import INF, BlowupGraph, LabelledGraph, nth_blowup
from .zlinalg import IntMatrix, LatticeBasis, coker_invariants, congruence_lattice, snf, solve_with

VertexLabelling = dict[str, int]


@dataclass(frozen=True)
class CartierLattice:
    graph: LabelledGraph
    lattice: LatticeBasis

    @property
    def basis(self) -> list[VertexLabelling]:
        vs = self.graph.vertices
        return [dict(zip(vs, vec)) for vec in self.lattice.vectors]

    @property
    def rank(self) -> int:
        return self.lattice.rank


@dataclass(frozen=True)
class ComponentGroup:
    free_rank: int
    torsion: tuple[int, ...]

    def __str__(self) -> str:
        parts = ["Z"] * (self.free_rank > 0)
        if self.free_rank > 1:
            parts = [f"Z^{self.free_rank}"]
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


def is_cartier(g: LabelledGraph, phi: Mapping[str, int]) -> tuple[bool, str | None]:
    """Whether ``phi`` is Cartier, and the first edge that breaks it if not."""
    for e in g.edges:
        diff = phi[e.source] - phi[e.target]
        if e.label == INF:
            if diff != 0:
                return False, e.id
        elif diff % e.label:
            return False, e.id
    return True, None


def cartier_basis(g: LabelledGraph) -> CartierLattice:
    idx = g.vertex_index
    constraints = []
    for e in g.edges:
        if e.is_loop:
            continue
        row = [0] * len(g.vertices)
        row[idx[e.source]] += 1
        row[idx[e.target]] -= 1
        constraints.append((row, e.label))
    return CartierLattice(g, congruence_lattice(constraints, len(g.vertices)))


def _multidegree_unchecked(g: LabelledGraph, phi: Mapping[str, int]) -> VertexLabelling:
    out = dict.fromkeys(g.vertices, 0)
    for e in g.edges:
        if e.is_loop or e.label == INF:
            continue
        flow = (phi[e.target] - phi[e.source]) // e.label
        out[e.source] += flow
        out[e.target] -= flow
    return out


def multidegree(g: LabelledGraph, phi: Mapping[str, int]) -> VertexLabelling:
    """``v -> sum over edges at v of (phi(w) - phi(v)) / l(e)``; loops and INF edges give 0."""
    ok, bad = is_cartier(g, phi)
    if not ok:
        raise NotCartier(f"labelling is not Cartier across edge {bad!r}")
    return _multidegree_unchecked(g, phi)


def delta_matrix(g: LabelledGraph, lattice: CartierLattice | None = None) -> IntMatrix:
    """Matrix of the multidegree operator from Cartier-basis coordinates to Z^V."""
    if lattice is None:
        lattice = cartier_basis(g)
    cols = [[d[v] for v in g.vertices]
            for d in (_multidegree_unchecked(g, phi) for phi in lattice.basis)]
    return IntMatrix.from_columns(cols, rows=len(g.vertices))


def component_group(g: LabelledGraph) -> ComponentGroup:
    free, torsion = coker_invariants(delta_matrix(g))
    return ComponentGroup(free, tuple(torsion))


def _check_blowup(g: LabelledGraph, target: BlowupGraph) -> None:
    if target.base != g:
        raise NotABlowupOf("target is not a blow-up of this graph")


def iota_interpolate(g: LabelledGraph, target: BlowupGraph,
                     phi: Mapping[str, int]) -> VertexLabelling:
    """Extend a Cartier labelling of ``g`` to ``target`` by linear interpolation.

    A new vertex at offset k along a base edge v -> w of label m gets
    ``((m - k) phi(v) + k phi(w)) / m``; along INF edges the value is constant.
    """
    _check_blowup(g, target)
    ok, bad = is_cartier(g, phi)
    if not ok:
        raise NotCartier(f"labelling is not Cartier across edge {bad!r}")
    out = {v: int(phi[v]) for v in g.vertices}
    for z, (eid, k) in target.vertex_origin.items():
        e = g.edge(eid)
        a, b = phi[e.source], phi[e.target]
        if e.label == INF:
            out[z] = a
        else:
            out[z] = a + k * (b - a) // e.label
    return {v: out[v] for v in target.graph.vertices}


def epsilon_extend(g: LabelledGraph, target: BlowupGraph,
                   alpha: Mapping[str, int]) -> VertexLabelling:
    """Extension by zero onto the new vertices of ``target``."""
    _check_blowup(g, target)
    return {v: (int(alpha[v]) if v in target.old_vertices else 0)
            for v in target.graph.vertices}


class _DescentSystem:
    """Multidegree rows of the new vertices, factored once for many right-hand sides."""

    def __init__(self, target: BlowupGraph):
        self.target = target
        g = target.graph
        self.lattice = cartier_basis(g)
        self.new = target.new_vertices
        full = delta_matrix(g, self.lattice)
        self.rows = full.select_rows(g.vertex_index[v] for v in self.new)
        self.dec = snf(self.rows) if self.new else None

    def solve(self, alpha: Mapping[str, int]) -> VertexLabelling | None:
        g = self.target.graph
        if self.dec is None:
            return dict.fromkeys(g.vertices, 0)
        rhs = [-int(alpha.get(v, 0)) for v in self.new]
        if not any(rhs):
            return dict.fromkeys(g.vertices, 0)
        y = solve_with(self.dec, rhs)
        if y is None:
            return None
        phi = dict.fromkeys(g.vertices, 0)
        for coeff, vec in zip(y, self.lattice.lattice.vectors):
            if coeff:
                for v, x in zip(g.vertices, vec):
                    phi[v] += coeff * x
        return phi


def descent_solve(target: BlowupGraph, alpha: Mapping[str, int]) -> VertexLabelling | None:
    """A Cartier ``phi`` on ``target`` with ``multidegree(phi) + alpha`` zero on
    every new vertex, or ``None`` when no such labelling exists."""
    return _DescentSystem(target).solve(alpha)


def pushforward_multidegree(target: BlowupGraph, alpha: Mapping[str, int],
                            phi: Mapping[str, int]) -> VertexLabelling:
    """``multidegree(phi) + alpha`` restricted to the old vertices, as a labelling of the base."""
    g = target.graph
    deg = multidegree(g, phi)
    total = {v: deg[v] + int(alpha.get(v, 0)) for v in g.vertices}
    stray = [v for v in target.new_vertices if total[v]]
    if stray:
        raise SupportConditionViolated(
            f"multidegree plus alpha is {total[stray[0]]} at new vertex {stray[0]!r}")
    return {v: total[v] for v in target.base.vertices}


def h_map_is_iso(g: LabelledGraph, n: int) -> bool:
    """Whether H -> H_n is an isomorphism.

    The map is always injective; it is onto exactly when every unit labelling
    at a new vertex of the level-``n`` blow-up admits a descent witness.
    """
    if n < 0:
        raise ValueError("blow-up level must be non-negative")
    target = nth_blowup(g, n)
    system = _DescentSystem(target)
    return all(system.solve({v: 1}) is not None for v in system.new)

