"""Circuit matrices of (labelled) graphs and the right-hand sides b(e)."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .errors import InfiniteLabelPresent
from .graph import (
    DEFAULT_CIRCUIT_CAP,
    INF,
    Circuit,
    LabelledGraph,
    SpanningTree,
    enumerate_circuits,
    fundamental_circuits,
    spanning_tree,
)
from .zlinalg import IntMatrix


@dataclass(frozen=True)
class CircuitMatrixBundle:
    """A circuit matrix with the row (circuit) and column (edge) orders used."""

    graph: LabelledGraph
    circuits: tuple[Circuit, ...]
    edge_order: tuple[str, ...]
    matrix: IntMatrix
    labelled: bool
    tree: SpanningTree | None = None

    def identity_view(self) -> tuple[IntMatrix, tuple[str, ...]]:
        """Columns permuted so the links come first, in link order.

        For an unlabelled fundamental matrix the leading block is the identity.
        """
        if self.tree is None:
            raise ValueError("only fundamental circuit matrices have an identity-block view")
        links = list(self.tree.links)
        rest = [e for e in self.edge_order if e not in self.tree.links]
        order = links + rest
        idx = {e: i for i, e in enumerate(self.edge_order)}
        return self.matrix.select_cols(idx[e] for e in order), tuple(order)


def _rows(g: LabelledGraph, circuits: Sequence[Circuit], labelled: bool) -> IntMatrix:
    if labelled and g.has_infinite_edges():
        bad = next(e.id for e in g.edges if e.label == INF)
        raise InfiniteLabelPresent(
            f"edge {bad!r} is labelled inf; contract infinite edges before "
            "forming a labelled circuit matrix")
    eidx = g.edge_index
    rows = []
    for c in circuits:
        row = [0] * len(g.edges)
        for eid, s in zip(c.edges, c.agrees):
            row[eidx[eid]] = s * (g.edge(eid).label if labelled else 1)
        rows.append(row)
    return IntMatrix.from_rows(rows, cols=len(g.edges))


def circuit_matrix(g: LabelledGraph, labelled: bool = False,
                   cap: int = DEFAULT_CIRCUIT_CAP) -> CircuitMatrixBundle:
    circuits = tuple(enumerate_circuits(g, cap))
    return CircuitMatrixBundle(g, circuits, tuple(e.id for e in g.edges),
                               _rows(g, circuits, labelled), labelled)


def fundamental_circuit_matrix(g: LabelledGraph, t: SpanningTree | None = None,
                               labelled: bool = False) -> CircuitMatrixBundle:
    if t is None:
        t = spanning_tree(g)
    circuits = tuple(fundamental_circuits(g, t))
    return CircuitMatrixBundle(g, circuits, tuple(e.id for e in g.edges),
                               _rows(g, circuits, labelled), labelled, tree=t)


def rhs_vector(g: LabelledGraph, eid: str, circuits: Sequence[Circuit]) -> tuple[int, ...]:
    """b(e): -1 where the circuit runs along e's orientation, +1 against it, else 0."""
    g.edge(eid)
    return tuple(-c.sign_of(eid) for c in circuits)
