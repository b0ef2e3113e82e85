"""Conversions between Kripke models and hypergraph models.

Kripke to hypergraph: vertices are the classes of each agent's generated
equivalence; world u maps to the edge whose tail holds the classes of
agents with a reflexive belief loop at u and whose head holds the rest.
Locality of the input is required so that class valuations are
well-defined. Hypergraph to Kripke: edges become worlds, the doxastic
accessibility relations become the belief relations, and each world's
valuation is the edge's atom set.

Round trips are checked semantically (formula by formula), never as
structural isomorphism.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, Sequence

from .errors import FragmentError, PreconditionError
from .formula import And, Atom, Believes, Formula, Knows, Not, fragment_check
from .hypergraph import (
    DirectedEdge,
    HypergraphModel,
    Vertex,
    accessibility,
    edge_atoms,
    graph_metrics,
    sat_mask_h,
)
from .kripke import (
    KripkeModel,
    equivalence_classes,
    model_properties,
)
from .workspace import PropVar, Workspace


@dataclass
class ConversionCertificate:
    direction: str
    mapping: dict
    injective: bool
    class_before: object
    class_after: object

    def to_json(self) -> dict:
        return {
            "direction": self.direction,
            "map": dict(self.mapping),
            "injective": self.injective,
            "class_before": self.class_before.to_json(),
            "class_after": self.class_after.to_json(),
        }


def _class_vertex_id(ws: Workspace, agent: int, worlds: Sequence[str]) -> str:
    return f"{ws.agents[agent]}:{{{','.join(sorted(worlds))}}}"


def kripke_to_hypergraph(m: KripkeModel):
    """Convert a local Kripke model; returns (model, certificate).

    Improper inputs are accepted but flagged: distinct worlds may then
    collapse onto one structural edge and the certificate map is not
    injective.
    """
    before = model_properties(m)
    if not before.local:
        raise PreconditionError(
            "conversion requires a local model: " + before.witnesses.get("local", "")
        )
    ws = m.workspace
    vertex_of: dict[tuple, str] = {}
    vertices = []
    for a in range(ws.n_agents):
        var_set = frozenset(ws.vars_of(a))
        for group in equivalence_classes(m.belief[a]):
            vid = _class_vertex_id(ws, a, [m.worlds[u] for u in group])
            atoms = m.valuation[group[0]] & var_set
            vertices.append(Vertex(vid, a, atoms))
            for u in group:
                vertex_of[(a, u)] = vid

    edges = []
    by_structure: dict[tuple, str] = {}
    mapping: dict[str, str] = {}
    for u in range(m.n_worlds):
        tail = frozenset(
            vertex_of[(a, u)] for a in range(ws.n_agents) if (u, u) in m.belief[a].pairs
        )
        head = frozenset(
            vertex_of[(a, u)] for a in range(ws.n_agents) if (u, u) not in m.belief[a].pairs
        )
        key = (tail, head)
        name = by_structure.get(key)
        if name is None:
            name = f"e{len(edges) + 1}"
            by_structure[key] = name
            edges.append(DirectedEdge(name, tail, head))
        mapping[m.worlds[u]] = name

    out = HypergraphModel(ws, vertices, edges)
    cert = ConversionCertificate(
        direction="k2h",
        mapping=mapping,
        injective=len(by_structure) == m.n_worlds,
        class_before=before,
        class_after=graph_metrics(out),
    )
    return out, cert


def hypergraph_to_kripke(m: HypergraphModel):
    """Convert any hypergraph model; returns (model, certificate)."""
    before = graph_metrics(m)
    ws = m.workspace
    belief = {
        a: accessibility(m, a, "doxastic") for a in range(ws.n_agents)
    }
    valuation = [edge_atoms(m, i) for i in range(m.n_edges)]
    worlds = [e.name for e in m.edges]
    out = KripkeModel(ws, worlds, belief, valuation)
    cert = ConversionCertificate(
        direction="h2k",
        mapping={name: name for name in worlds},
        injective=True,
        class_before=before,
        class_after=model_properties(out),
    )
    return out, cert


@dataclass
class EquivalenceRow:
    state: str
    formula: Formula
    kripke_value: bool
    hypergraph_value: bool

    @property
    def agree(self) -> bool:
        return self.kripke_value == self.hypergraph_value


@dataclass
class EquivalenceReport:
    checked: int = 0
    rows: list = field(default_factory=list)
    disagreements: list = field(default_factory=list)

    @property
    def agree(self) -> bool:
        return not self.disagreements


def check_modal_equivalence(
    mk: KripkeModel,
    mh: HypergraphModel,
    mapping: dict,
    formulas: Sequence[Formula],
    collect_all: bool = False,
) -> EquivalenceReport:
    """Compare satisfaction on both sides across all (world, formula) pairs.

    The mapping must cover every world of mk. Formulas containing a
    knowledge modality are only admitted when both models lie in the
    serial classes (K_ste and H_sut); otherwise only belief-fragment
    formulas may be supplied.
    """
    if mk.workspace != mh.workspace:
        raise PreconditionError("models are declared over different workspaces")
    missing = [w for w in mk.worlds if w not in mapping]
    if missing:
        raise PreconditionError(f"mapping does not cover worlds: {missing}")
    needs_serial = any(not fragment_check(f).in_doxastic_fragment for f in formulas)
    if needs_serial:
        ck = model_properties(mk)
        ch = graph_metrics(mh)
        if not (ck.in_k_ste and ch.in_h_sut):
            raise FragmentError(
                "knowledge formulas require the serial classes on both sides"
            )
    report = EquivalenceReport()
    edge_idx = {w: mh.edge_index(mapping[w]) for w in mk.worlds}
    for f in formulas:
        mask_k = mk.sat_mask(f)
        mask_h = sat_mask_h(mh, f)
        for i, w in enumerate(mk.worlds):
            vk = bool(mask_k >> i & 1)
            vh = bool(mask_h >> edge_idx[w] & 1)
            report.checked += 1
            row = EquivalenceRow(w, f, vk, vh)
            if collect_all:
                report.rows.append(row)
            if not row.agree:
                report.disagreements.append(row)
    return report


def enumerate_formulas(
    vars: Sequence[PropVar],
    agents: Sequence[int],
    max_depth: int,
    max_size: int,
) -> Iterator[Formula]:
    """Exhaustive, duplicate-free stream of core-constructor formulas.

    Size counts AST nodes; depth counts nested modalities. The order is
    deterministic: by size, then atoms, negations, beliefs, knowledge,
    conjunctions (splitting the left size from small to large).
    """
    if max_depth < 0 or max_size < 0:
        raise PreconditionError("bounds must be nonnegative")
    by_size: list[list] = [[]]
    for size in range(1, max_size + 1):
        layer = []
        if size == 1:
            for v in vars:
                layer.append((Atom(v), 0))
        else:
            for f, d in by_size[size - 1]:
                layer.append((Not(f), d))
            if max_depth >= 1:
                for a in agents:
                    for f, d in by_size[size - 1]:
                        if d < max_depth:
                            layer.append((Believes(a, f), d + 1))
                for a in agents:
                    for f, d in by_size[size - 1]:
                        if d < max_depth:
                            layer.append((Knows(a, f), d + 1))
            for left_size in range(1, size - 1):
                for f, df in by_size[left_size]:
                    for g, dg in by_size[size - 1 - left_size]:
                        layer.append((And(f, g), max(df, dg)))
        by_size.append(layer)
        for f, _ in layer:
            yield f
