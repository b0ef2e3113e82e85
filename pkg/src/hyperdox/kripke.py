"""Doxastic Kripke models: relation algebra, class checks and satisfaction.

Knowledge is never stored as its own relation. It is always interpreted
through the equivalence generated by the belief relation (the
reflexive-transitive closure of its symmetric closure), which on the model
classes used here determines the knowledge relation uniquely.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from .errors import FragmentError, PreconditionError, ValidationError
from .formula import (
    And,
    Atom,
    Believes,
    Formula,
    Knows,
    Not,
    f_iff,
    f_imp,
    fragment_check,
)
from .workspace import Workspace


@dataclass(frozen=True)
class Relation:
    """Binary relation over world indices 0..size-1."""

    size: int
    pairs: frozenset

    @classmethod
    def from_pairs(cls, size: int, pairs) -> "Relation":
        ps = frozenset((int(u), int(v)) for u, v in pairs)
        for u, v in ps:
            if not (0 <= u < size and 0 <= v < size):
                raise ValidationError([f"relation pair ({u},{v}) out of bounds for size {size}"])
        return cls(size, ps)

    def successors(self, u: int) -> set:
        return {v for (x, v) in self.pairs if x == u}

    def adjacency(self) -> list:
        adj = [set() for _ in range(self.size)]
        for u, v in self.pairs:
            adj[u].add(v)
        return adj


def inverse(r: Relation) -> Relation:
    return Relation(r.size, frozenset((v, u) for (u, v) in r.pairs))


def symmetric_closure(r: Relation) -> Relation:
    return Relation(r.size, r.pairs | inverse(r).pairs)


def compose(r: Relation, s: Relation) -> Relation:
    adj = s.adjacency()
    return Relation(r.size, frozenset((u, w) for (u, v) in r.pairs for w in adj[v]))


def power(r: Relation, m: int) -> Relation:
    out = Relation(r.size, frozenset((u, u) for u in range(r.size)))
    for _ in range(m):
        out = compose(out, r)
    return out


def reflexive_transitive_closure(r: Relation) -> Relation:
    adj = r.adjacency()
    pairs = set()
    for start in range(r.size):
        seen = {start}
        frontier = [start]
        while frontier:
            u = frontier.pop()
            for v in adj[u]:
                if v not in seen:
                    seen.add(v)
                    frontier.append(v)
        pairs.update((start, v) for v in seen)
    return Relation(r.size, frozenset(pairs))


def generated_equivalence(r: Relation) -> Relation:
    """Smallest equivalence containing r, via union-find."""
    parent = list(range(r.size))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for u, v in r.pairs:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[rv] = ru
    roots = [find(u) for u in range(r.size)]
    members: dict[int, list[int]] = {}
    for u, root in enumerate(roots):
        members.setdefault(root, []).append(u)
    pairs = set()
    for group in members.values():
        for u in group:
            for v in group:
                pairs.add((u, v))
    return Relation(r.size, frozenset(pairs))


def equivalence_classes(r: Relation) -> list:
    """Classes of generated_equivalence(r), each a sorted list of indices."""
    eq = generated_equivalence(r)
    adj = eq.adjacency()
    seen: set[int] = set()
    classes = []
    for u in range(r.size):
        if u not in seen:
            group = sorted(adj[u] | {u})
            seen.update(group)
            classes.append(group)
    return classes


@dataclass(frozen=True)
class RelationProperties:
    serial: bool
    transitive: bool
    euclidean: bool
    reflexive: bool
    symmetric: bool

    def to_json(self) -> dict:
        return {
            "serial": self.serial,
            "transitive": self.transitive,
            "euclidean": self.euclidean,
            "reflexive": self.reflexive,
            "symmetric": self.symmetric,
        }


def relation_properties(r: Relation) -> RelationProperties:
    adj = r.adjacency()
    pairs = r.pairs
    serial = all(adj[u] for u in range(r.size))
    transitive = all((u, w) in pairs for (u, v) in pairs for w in adj[v])
    euclidean = all(
        (v, w) in pairs for u in range(r.size) for v in adj[u] for w in adj[u]
    )
    reflexive = all((u, u) in pairs for u in range(r.size))
    symmetric = all((v, u) in pairs for (u, v) in pairs)
    return RelationProperties(serial, transitive, euclidean, reflexive, symmetric)


class KripkeModel:
    """Finite doxastic Kripke model over a workspace.

    Treat instances as immutable after construction; satisfaction results,
    generated equivalences and successor masks are cached on the instance.
    """

    def __init__(self, workspace: Workspace, worlds, belief, valuation):
        self.workspace = workspace
        self.worlds = tuple(worlds)
        violations = []
        if not self.worlds:
            violations.append("model has no worlds")
        if len(set(self.worlds)) != len(self.worlds):
            violations.append("world names must be unique")
        n = workspace.n_agents
        size = len(self.worlds)
        rels = []
        for a in range(n):
            r = belief.get(a, Relation(size, frozenset()))
            if r.size != size:
                violations.append(f"relation for agent {workspace.agents[a]} has wrong size")
            rels.append(r)
        extra = set(belief) - set(range(n))
        if extra:
            violations.append(f"belief relations for unknown agent indices: {sorted(extra)}")
        self.belief = tuple(rels)
        vals = [frozenset(v) for v in valuation]
        if len(vals) != size:
            violations.append("valuation must assign one atom set per world")
        for i, atoms in enumerate(vals):
            for p in atoms:
                if not (0 <= p.owner < n and 0 <= p.index < len(workspace.vars[p.owner])):
                    violations.append(f"world {self.worlds[i] if i < size else i}: unknown atom {p}")
        self.valuation = tuple(vals)
        if violations:
            raise ValidationError(violations)
        self._world_index = {w: i for i, w in enumerate(self.worlds)}
        self._equiv: dict[int, Relation] = {}
        self._succ_b: dict[int, list] = {}
        self._succ_k: dict[int, list] = {}
        self._sat: dict[Formula, int] = {}
        self._full = (1 << size) - 1

    @property
    def n_worlds(self) -> int:
        return len(self.worlds)

    def world_index(self, name: str) -> int:
        try:
            return self._world_index[name]
        except KeyError:
            raise ValidationError([f"unknown world {name!r}"]) from None

    def equivalence(self, agent: int) -> Relation:
        if agent not in self._equiv:
            self._equiv[agent] = generated_equivalence(self.belief[agent])
        return self._equiv[agent]

    def _belief_masks(self, agent: int) -> list:
        if agent not in self._succ_b:
            masks = [0] * self.n_worlds
            for u, v in self.belief[agent].pairs:
                masks[u] |= 1 << v
            self._succ_b[agent] = masks
        return self._succ_b[agent]

    def _knowledge_masks(self, agent: int) -> list:
        if agent not in self._succ_k:
            masks = [0] * self.n_worlds
            for u, v in self.equivalence(agent).pairs:
                masks[u] |= 1 << v
            self._succ_k[agent] = masks
        return self._succ_k[agent]

    def sat_mask(self, f: Formula) -> int:
        """Bitmask of worlds satisfying f (bit i = world i)."""
        cached = self._sat.get(f)
        if cached is not None:
            return cached
        if isinstance(f, Atom):
            out = 0
            for i, atoms in enumerate(self.valuation):
                if f.var in atoms:
                    out |= 1 << i
        elif isinstance(f, Not):
            out = ~self.sat_mask(f.sub) & self._full
        elif isinstance(f, And):
            out = self.sat_mask(f.left) & self.sat_mask(f.right)
        elif isinstance(f, Believes):
            sub = self.sat_mask(f.sub)
            masks = self._belief_masks(f.agent)
            out = 0
            for i in range(self.n_worlds):
                if masks[i] & ~sub == 0:
                    out |= 1 << i
        elif isinstance(f, Knows):
            sub = self.sat_mask(f.sub)
            masks = self._knowledge_masks(f.agent)
            out = 0
            for i in range(self.n_worlds):
                if masks[i] & ~sub == 0:
                    out |= 1 << i
        else:
            raise TypeError(f"not a formula: {f!r}")
        self._sat[f] = out
        return out


def satisfies_k(m: KripkeModel, world, f: Formula) -> bool:
    """Satisfaction at a world; world may be an index or a world name."""
    w = m.world_index(world) if isinstance(world, str) else world
    if not 0 <= w < m.n_worlds:
        raise PreconditionError(f"world index {w} out of bounds")
    return bool(m.sat_mask(f) >> w & 1)


def valid_in(m: KripkeModel, f: Formula) -> bool:
    return m.sat_mask(f) == m._full


@dataclass
class KripkeClassReport:
    local: bool
    proper: bool
    serial: bool
    transitive: bool
    euclidean: bool
    per_agent: dict
    in_k_te: bool
    in_k_ste: bool
    witnesses: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {
            "kind": "kripke",
            "local": self.local,
            "proper": self.proper,
            "serial": self.serial,
            "transitive": self.transitive,
            "euclidean": self.euclidean,
            "per_agent": {a: p.to_json() for a, p in self.per_agent.items()},
            "in_K_te": self.in_k_te,
            "in_K_ste": self.in_k_ste,
            "witnesses": dict(sorted(self.witnesses.items())),
        }


def model_properties(m: KripkeModel) -> KripkeClassReport:
    ws = m.workspace
    witnesses: dict[str, str] = {}

    local = True
    for a in range(ws.n_agents):
        var_set = frozenset(ws.vars_of(a))
        for u, v in symmetric_closure(m.belief[a]).pairs:
            if m.valuation[u] & var_set != m.valuation[v] & var_set:
                local = False
                witnesses.setdefault(
                    "local",
                    f"agent {ws.agents[a]} relates {m.worlds[u]} and {m.worlds[v]} "
                    f"but they disagree on {ws.agents[a]}'s variables",
                )
                break
        if not local:
            break

    proper = True
    equivs = [m.equivalence(a) for a in range(ws.n_agents)]
    for u in range(m.n_worlds):
        for v in range(u + 1, m.n_worlds):
            if all((u, v) in eq.pairs for eq in equivs):
                proper = False
                witnesses.setdefault(
                    "proper",
                    f"no agent distinguishes {m.worlds[u]} from {m.worlds[v]}",
                )
                break
        if not proper:
            break

    per_agent = {}
    for a in range(ws.n_agents):
        per_agent[ws.agents[a]] = relation_properties(m.belief[a])
    serial = all(p.serial for p in per_agent.values())
    transitive = all(p.transitive for p in per_agent.values())
    euclidean = all(p.euclidean for p in per_agent.values())
    in_k_te = local and proper and transitive and euclidean
    in_k_ste = in_k_te and serial
    return KripkeClassReport(
        local, proper, serial, transitive, euclidean, per_agent, in_k_te, in_k_ste, witnesses
    )


def check_local_veracity(m: KripkeModel, agent: int, f: Formula) -> bool:
    """Whether f -> B_a f is valid in m (f <-> B_a f when m is serial).

    Preconditions: f must be an a-formula for the given agent and m must
    be local. Violations raise instead of returning False.
    """
    info = fragment_check(f)
    if agent not in info.agent_formula_for:
        raise FragmentError(
            f"formula is not an {m.workspace.agents[agent]}-formula"
        )
    props = model_properties(m)
    if not props.local:
        raise PreconditionError("model is not local: " + props.witnesses.get("local", ""))
    if props.serial:
        goal = f_iff(f, Believes(agent, f))
    else:
        goal = f_imp(f, Believes(agent, f))
    return valid_in(m, goal)
