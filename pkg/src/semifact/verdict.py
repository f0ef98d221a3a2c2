"""Circuit-coprimality deciders and the semi-factoriality verdict.

Three independent ways to decide whether a labelled graph is
circuit-coprime, all after contracting the infinite edges:

``prime-forest``
    for every prime p dividing a finite label, the edges whose label p
    divides must form a forest.  Polynomial; the default.
``snf``
    the Smith normal form of the labelled fundamental circuit matrix has
    only 1s on its diagonal.
``naive``
    every circuit's labels have gcd 1.  Enumerates circuits, so it is
    exponential and guarded by a cap.

For a nodal curve over a discrete valuation ring whose special fibre has
split singularities, a circuit-coprime labelled dual graph means the curve
is semi-factorial and ``Pic/cl(e)`` is a Neron lft-model of the Picard
scheme of the generic fibre.  The converse needs a strictly henselian base:
without it a non-coprime graph does not rule out semi-factoriality.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass, field
from functools import reduce

from .circuits import fundamental_circuit_matrix
from .graph import (
    DEFAULT_CIRCUIT_CAP,
    INF,
    LabelledGraph,
    _UnionFind,
    contract_infinite,
    enumerate_circuits,
    spanning_tree,
)
from .zlinalg import smith_diagonal

METHODS = ("prime-forest", "snf", "naive")


@dataclass(frozen=True)
class Verdict:
    """Outcome of a circuit-coprimality check.

    A negative verdict carries ``prime`` and ``witness_edges``: edges whose
    labels are all divisible by ``prime`` and which form a circuit of the
    contracted graph.  A positive verdict carries the Smith diagonal of the
    labelled fundamental circuit matrix in ``snf_diagonal``.
    """

    circuit_coprime: bool
    method: str
    prime: int | None = None
    witness_edges: tuple[str, ...] = ()
    snf_diagonal: tuple[int, ...] | None = None
    notes: tuple[str, ...] = field(default=(), compare=False)

    @property
    def semi_factorial(self) -> bool:
        return self.circuit_coprime

    @property
    def neron_lft_model(self) -> bool:
        return self.circuit_coprime

    def summary(self) -> str:
        yn = lambda b: "true" if b else "false"
        return (f"circuit-coprime: {yn(self.circuit_coprime)}; "
                f"semi-factorial: {yn(self.semi_factorial)}; "
                f"Néron lft-model: {yn(self.neron_lft_model)}")


def prime_factors(n: int) -> list[int]:
    """Distinct primes of ``n`` by trial division."""
    out, p = [], 2
    while p * p <= n:
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1 if p == 2 else 2
    if n > 1:
        out.append(n)
    return out


def _finite_primes(g: LabelledGraph) -> list[int]:
    primes = set()
    for lab in g.labels:
        if lab != INF:
            primes.update(prime_factors(lab))
    return sorted(primes)


def _circuit_in(g: LabelledGraph, edge_ids: list[str]) -> tuple[str, ...] | None:
    """Edges of some circuit inside the subgraph ``edge_ids``, or ``None`` if it is a forest."""
    uf = _UnionFind(g.vertices)
    forest: dict[str, list[tuple[str, str]]] = {v: [] for v in g.vertices}
    for eid in edge_ids:
        e = g.edge(eid)
        if e.is_loop:
            return (eid,)
        if not uf.union(e.source, e.target):
            # tree path target -> source closes the circuit
            prev = {e.target: None}
            queue = deque([e.target])
            while queue:
                v = queue.popleft()
                if v == e.source:
                    break
                for w, fid in forest[v]:
                    if w not in prev:
                        prev[w] = (v, fid)
                        queue.append(w)
            path, v = [], e.source
            while prev[v] is not None:
                u, fid = prev[v]
                path.append(fid)
                v = u
            return (eid, *reversed(path))
        forest[e.source].append((e.target, eid))
        forest[e.target].append((e.source, eid))
    return None


def _snf_diagonal(gc: LabelledGraph) -> tuple[int, ...]:
    if gc.nullity == 0:
        return ()
    bundle = fundamental_circuit_matrix(gc, spanning_tree(gc), labelled=True)
    return smith_diagonal(bundle.matrix)


def _witness(gc: LabelledGraph, p: int) -> tuple[str, ...] | None:
    ep = [e.id for e in gc.edges if e.label % p == 0]
    return _circuit_in(gc, ep)


def circuit_coprime_prime_forest(g: LabelledGraph, with_diagonal: bool = True) -> Verdict:
    gc, _ = contract_infinite(g)
    for p in _finite_primes(gc):
        cyc = _witness(gc, p)
        if cyc is not None:
            return Verdict(False, "prime-forest", prime=p, witness_edges=cyc)
    return Verdict(True, "prime-forest",
                   snf_diagonal=_snf_diagonal(gc) if with_diagonal else None)


def circuit_coprime_snf(g: LabelledGraph) -> Verdict:
    gc, _ = contract_infinite(g)
    diag = _snf_diagonal(gc)
    if all(d == 1 for d in diag):
        return Verdict(True, "snf", snf_diagonal=diag)
    # the last invariant factor is divisible by some prime p; then E_p holds a circuit
    p = prime_factors(diag[-1])[0]
    cyc = _witness(gc, p)
    assert cyc is not None, "SNF diagonal disagrees with the edge structure"
    return Verdict(False, "snf", prime=p, witness_edges=cyc, snf_diagonal=diag)


def circuit_coprime_naive(g: LabelledGraph, cap: int = DEFAULT_CIRCUIT_CAP,
                          with_diagonal: bool = True) -> Verdict:
    gc, _ = contract_infinite(g)
    for c in enumerate_circuits(gc, cap):
        d = reduce(math.gcd, (gc.edge(e).label for e in c.edges))
        if d != 1:
            return Verdict(False, "naive", prime=prime_factors(d)[0], witness_edges=c.edges)
    return Verdict(True, "naive", snf_diagonal=_snf_diagonal(gc) if with_diagonal else None)


def circuit_coprime(g: LabelledGraph, method: str = "prime-forest",
                    cap: int = DEFAULT_CIRCUIT_CAP, with_diagonal: bool = True) -> Verdict:
    """Decide circuit-coprimality with one of :data:`METHODS`.

    ``with_diagonal=False`` skips the Smith diagonal that positive verdicts
    of the prime-forest and naive methods otherwise carry.
    """
    if method == "prime-forest":
        return circuit_coprime_prime_forest(g, with_diagonal)
    if method == "snf":
        return circuit_coprime_snf(g)
    if method == "naive":
        return circuit_coprime_naive(g, cap, with_diagonal)
    raise ValueError(f"unknown method {method!r}; expected one of {', '.join(METHODS)}")


def semifactorial_verdict(g: LabelledGraph, method: str = "prime-forest",
                          cap: int = DEFAULT_CIRCUIT_CAP) -> Verdict:
    """Semi-factoriality of a nodal curve with labelled dual graph ``g``.

    Positive verdicts hold over any discrete valuation ring when the special
    fibre has split singularities.  Negative ones are only guaranteed over a
    strictly henselian base.
    """
    v = circuit_coprime(g, method, cap)
    note = ("negative verdict assumes a strictly henselian base; "
            "semi-factoriality does not descend along etale base change")
    return v if v.circuit_coprime else Verdict(
        v.circuit_coprime, v.method, v.prime, v.witness_edges, v.snf_diagonal, (note,))


def stabilization_index(g: LabelledGraph) -> int:
    """Blow-up level after which every finite label has become 1.

    ``max(1, ceil((m - 1) / 2))`` over finite labels ``m``; 0 for a graph
    without edges.
    """
    if not g.edges:
        return 0
    finite = [lab for lab in g.labels if lab != INF]
    # ceil((m - 1) / 2) == m // 2
    return max([1] + [m // 2 for m in finite])


def is_circuit(g: LabelledGraph, edge_ids) -> bool:
    """Whether the edges form exactly one circuit: connected, every vertex of degree 2."""
    edge_ids = list(edge_ids)
    if not edge_ids or len(set(edge_ids)) != len(edge_ids):
        return False
    degree: dict[str, int] = {}
    uf = _UnionFind(g.vertices)
    for eid in edge_ids:
        e = g.edge(eid)
        degree[e.source] = degree.get(e.source, 0) + 1
        degree[e.target] = degree.get(e.target, 0) + 1
        uf.union(e.source, e.target)
    return (len({uf.find(v) for v in degree}) == 1
            and all(d == 2 for d in degree.values()))


def check_witness(g: LabelledGraph, v: Verdict) -> bool:
    """Negative witness sanity: a prime dividing every witness label, edges forming a circuit."""
    if v.circuit_coprime:
        return True
    if v.prime is None or prime_factors(v.prime) != [v.prime]:
        return False
    gc, _ = contract_infinite(g)
    try:
        if any(gc.edge(e).label % v.prime for e in v.witness_edges):
            return False
    except KeyError:
        return False
    return is_circuit(gc, v.witness_edges)
