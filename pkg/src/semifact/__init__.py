"""Circuit-coprimality and semi-factoriality checks for labelled dual graphs.

A nodal curve over a discrete valuation ring is summarised by the dual graph
of its special fibre, each edge labelled by the thickness of its node
(``INF`` for nodes that persist in the generic fibre).  The curve is
semi-factorial when that labelled graph is circuit-coprime.
"""

from .graph import (
    INF,
    BlowupGraph,
    LabelledGraph,
    build_graph,
    contract_infinite,
    first_blowup,
    nth_blowup,
    total_blowup,
)
from .io import fixture, load_graph
from .labellings import component_group, descent_solve, h_map_is_iso, multidegree
from .verdict import Verdict, circuit_coprime, semifactorial_verdict, stabilization_index

__version__ = "0.1.0"

__all__ = [
    "INF",
    "BlowupGraph",
    "LabelledGraph",
    "Verdict",
    "build_graph",
    "circuit_coprime",
    "component_group",
    "contract_infinite",
    "descent_solve",
    "first_blowup",
    "fixture",
    "h_map_is_iso",
    "load_graph",
    "multidegree",
    "nth_blowup",
    "semifactorial_verdict",
    "stabilization_index",
    "total_blowup",
]
