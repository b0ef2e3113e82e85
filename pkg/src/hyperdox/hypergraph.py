"""Chromatic directed hypergraph models and their satisfaction relation.

Vertices are agent-colored local states carrying that agent's variables.
A directed hyperedge is a (tail, head) pair of disjoint vertex sets and
stands for a global state; the tail holds the local states whose agents
consider the state doxastically possible. Accessibility between edges:

    e1 -B_a-> e2  iff  some a-colored vertex lies in span(e1) and tail(e2)
    e1 -K_a-> e2  iff  some a-colored vertex lies in span(e1) and span(e2)

where span(e) = tail(e) | head(e).
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import PreconditionError, ValidationError
from .formula import And, Atom, Believes, Formula, Knows, Not
from .kripke import Relation
from .workspace import PropVar, Workspace


@dataclass(frozen=True)
class Vertex:
    id: str
    color: int
    atoms: frozenset


@dataclass(frozen=True)
class DirectedEdge:
    name: str
    tail: frozenset
    head: frozenset

    @property
    def span(self) -> frozenset:
        return self.tail | self.head


class HypergraphModel:
    """Directed hypergraph model over a workspace.

    Construction checks only that identifiers are unique; run
    validate_model for the semantic invariants (chromatic coloring,
    per-color valuations, tail/head disjointness, no dangling ids).
    Instances are immutable after construction; accessibility relations
    and satisfaction masks are cached per instance.
    """

    def __init__(self, workspace: Workspace, vertices, edges):
        self.workspace = workspace
        self.vertices: dict[str, Vertex] = {}
        violations = []
        for v in vertices:
            if v.id in self.vertices:
                violations.append(f"duplicate vertex id {v.id!r}")
            self.vertices[v.id] = v
        if not self.vertices:
            violations.append("model has no vertices")
        self.edges = tuple(edges)
        names = [e.name for e in self.edges]
        if len(set(names)) != len(names):
            violations.append("duplicate edge names")
        if violations:
            raise ValidationError(violations)
        self._edge_index = {e.name: i for i, e in enumerate(self.edges)}
        self._acc: dict[tuple, Relation] = {}
        self._sat: dict[Formula, int] = {}
        self._full = (1 << len(self.edges)) - 1

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    def edge_index(self, name: str) -> int:
        try:
            return self._edge_index[name]
        except KeyError:
            raise ValidationError([f"unknown edge {name!r}"]) from None

    def color_vertex(self, edge_idx: int, agent: int):
        """The unique agent-colored vertex id in the edge's span, or None."""
        for vid in self.edges[edge_idx].span:
            if self.vertices[vid].color == agent:
                return vid
        return None


def validate_model(m: HypergraphModel) -> list:
    """All invariant violations, each naming the offending vertex or edge."""
    ws = m.workspace
    violations = []
    for v in m.vertices.values():
        if not 0 <= v.color < ws.n_agents:
            violations.append(f"vertex {v.id}: unknown color index {v.color}")
            continue
        for p in v.atoms:
            if not (0 <= p.owner < ws.n_agents and 0 <= p.index < len(ws.vars[p.owner])):
                violations.append(f"vertex {v.id}: unknown atom {p}")
            elif p.owner != v.color:
                violations.append(
                    f"vertex {v.id}: atom {ws.var_name(p)} belongs to agent "
                    f"{ws.agents[p.owner]} but the vertex is colored {ws.agents[v.color]}"
                )
    for e in m.edges:
        for vid in e.tail | e.head:
            if vid not in m.vertices:
                violations.append(f"edge {e.name}: dangling vertex id {vid!r}")
        overlap = e.tail & e.head
        if overlap:
            violations.append(
                f"edge {e.name}: tail and head overlap on {sorted(overlap)}"
            )
        span = [vid for vid in e.span if vid in m.vertices]
        by_color: dict[int, list] = {}
        for vid in span:
            by_color.setdefault(m.vertices[vid].color, []).append(vid)
        for color, vids in sorted(by_color.items()):
            if len(vids) > 1:
                violations.append(
                    f"edge {e.name}: vertices {sorted(vids)} share color "
                    f"{ws.agents[color] if 0 <= color < ws.n_agents else color}"
                )
    return violations


@dataclass
class HypergraphClassReport:
    rank: int
    n_uniform: bool
    simple: bool
    tail_complete: bool
    in_h_su: bool
    in_h_sut: bool

    def to_json(self) -> dict:
        return {
            "kind": "hypergraph",
            "rank": self.rank,
            "n_uniform": self.n_uniform,
            "simple": self.simple,
            "tail_complete": self.tail_complete,
            "in_H_su": self.in_h_su,
            "in_H_sut": self.in_h_sut,
        }


def graph_metrics(m: HypergraphModel) -> HypergraphClassReport:
    n = m.workspace.n_agents
    spans = [e.span for e in m.edges]
    rank = max((len(s) for s in spans), default=0)
    n_uniform = all(len(s) == n for s in spans)
    simple = True
    for i, si in enumerate(spans):
        for j, sj in enumerate(spans):
            if i != j and si <= sj:
                simple = False
                break
        if not simple:
            break
    in_tails = set()
    for e in m.edges:
        in_tails |= e.tail
    tail_complete = set(m.vertices) <= in_tails
    in_h_su = simple and n_uniform
    in_h_sut = in_h_su and tail_complete
    return HypergraphClassReport(rank, n_uniform, simple, tail_complete, in_h_su, in_h_sut)


def accessibility(m: HypergraphModel, agent: int, kind: str) -> Relation:
    """Doxastic or epistemic accessibility over edge indices; cached."""
    if kind not in ("doxastic", "epistemic"):
        raise PreconditionError(f"unknown accessibility kind {kind!r}")
    key = (agent, kind)
    cached = m._acc.get(key)
    if cached is not None:
        return cached
    n_edges = m.n_edges
    pairs = set()
    spans = [e.span for e in m.edges]
    targets = [e.tail for e in m.edges] if kind == "doxastic" else spans
    colored = [m.color_vertex(i, agent) for i in range(n_edges)]
    for i in range(n_edges):
        vid = colored[i]
        if vid is None:
            continue
        for j in range(n_edges):
            if vid in targets[j]:
                pairs.add((i, j))
    rel = Relation(n_edges, frozenset(pairs))
    m._acc[key] = rel
    return rel


def edge_atoms(m: HypergraphModel, edge) -> frozenset:
    """Union of the vertex valuations across the edge's span."""
    i = m.edge_index(edge) if isinstance(edge, str) else edge
    atoms: set[PropVar] = set()
    for vid in m.edges[i].span:
        atoms |= m.vertices[vid].atoms
    return frozenset(atoms)


def sat_mask_h(m: HypergraphModel, f: Formula) -> int:
    """Bitmask of edges satisfying f (bit i = edge i)."""
    cached = m._sat.get(f)
    if cached is not None:
        return cached
    if isinstance(f, Atom):
        out = 0
        for i in range(m.n_edges):
            if f.var in edge_atoms(m, i):
                out |= 1 << i
    elif isinstance(f, Not):
        out = ~sat_mask_h(m, f.sub) & m._full
    elif isinstance(f, And):
        out = sat_mask_h(m, f.left) & sat_mask_h(m, f.right)
    elif isinstance(f, (Believes, Knows)):
        kind = "doxastic" if isinstance(f, Believes) else "epistemic"
        rel = accessibility(m, f.agent, kind)
        succ = [0] * m.n_edges
        for u, v in rel.pairs:
            succ[u] |= 1 << v
        sub = sat_mask_h(m, f.sub)
        out = 0
        for i in range(m.n_edges):
            if succ[i] & ~sub == 0:
                out |= 1 << i
    else:
        raise TypeError(f"not a formula: {f!r}")
    m._sat[f] = out
    return out


def satisfies_h(m: HypergraphModel, edge, f: Formula) -> bool:
    """Satisfaction at an edge; edge may be an index or an edge name."""
    i = m.edge_index(edge) if isinstance(edge, str) else edge
    if not 0 <= i < m.n_edges:
        raise PreconditionError(f"edge index {i} out of bounds")
    return bool(sat_mask_h(m, f) >> i & 1)


def valid_in_h(m: HypergraphModel, f: Formula) -> bool:
    return sat_mask_h(m, f) == m._full


def induced_complex(m: HypergraphModel) -> list:
    """Facets of the induced simplicial complex: maximal nonempty spans.

    Returned as a list of frozensets of vertex ids, sorted by (size,
    sorted ids) for deterministic output. Equal spans collapse to one
    facet; on a simple graph the facet count equals the edge count.
    """
    spans = {e.span for e in m.edges if e.span}
    facets = [s for s in spans if not any(s < t for t in spans)]
    return sorted(facets, key=lambda s: (len(s), sorted(s)))
