"""Formula AST, parser, printer and fragment/depth analyses.

The core language has five constructors: atoms, negation, conjunction and
the two modalities (belief and knowledge, both agent-indexed). Disjunction,
implication, equivalence, `true` and `false` are parser sugar and are
desugared immediately:

    x | y   ==  ~(~x & ~y)
    x -> y  ==  ~x | y
    x <-> y ==  (x -> y) & (y -> x)
    false   ==  p & ~p        for the workspace's designated atom p
    true    ==  ~false

Grammar (tightest first: unary, &, |, ->, <->; -> and <-> associate to
the right):

    form  ::= iff
    iff   ::= imp ("<->" imp)*
    imp   ::= or ("->" imp)?
    or    ::= and ("|" and)*
    and   ::= unary ("&" unary)*
    unary ::= "~" unary | "B{" agent "}" unary | "K{" agent "}" unary
            | atom | "true" | "false" | "(" form ")"
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .errors import ParseError, WorkspaceError
from .workspace import PropVar, Workspace


class Formula:
    """Base class; instances are immutable and hash-consable by value."""

    __slots__ = ("_hash",)

    def __hash__(self):
        return self._hash


class Atom(Formula):
    __slots__ = ("var",)

    def __init__(self, var: PropVar):
        self.var = var
        self._hash = hash((1, var))

    __hash__ = Formula.__hash__

    def __eq__(self, other):
        return self is other or (type(other) is Atom and self.var == other.var)

    def __repr__(self):
        return f"Atom({self.var.owner},{self.var.index})"


class Not(Formula):
    __slots__ = ("sub",)

    def __init__(self, sub: Formula):
        self.sub = sub
        self._hash = hash((2, sub._hash))

    __hash__ = Formula.__hash__

    def __eq__(self, other):
        return self is other or (
            type(other) is Not and self._hash == other._hash and self.sub == other.sub
        )

    def __repr__(self):
        return f"Not({self.sub!r})"


class And(Formula):
    __slots__ = ("left", "right")

    def __init__(self, left: Formula, right: Formula):
        self.left = left
        self.right = right
        self._hash = hash((3, left._hash, right._hash))

    __hash__ = Formula.__hash__

    def __eq__(self, other):
        return self is other or (
            type(other) is And
            and self._hash == other._hash
            and self.left == other.left
            and self.right == other.right
        )

    def __repr__(self):
        return f"And({self.left!r},{self.right!r})"


class Believes(Formula):
    __slots__ = ("agent", "sub")

    def __init__(self, agent: int, sub: Formula):
        self.agent = agent
        self.sub = sub
        self._hash = hash((4, agent, sub._hash))

    __hash__ = Formula.__hash__

    def __eq__(self, other):
        return self is other or (
            type(other) is Believes
            and self._hash == other._hash
            and self.agent == other.agent
            and self.sub == other.sub
        )

    def __repr__(self):
        return f"B{self.agent}({self.sub!r})"


class Knows(Formula):
    __slots__ = ("agent", "sub")

    def __init__(self, agent: int, sub: Formula):
        self.agent = agent
        self.sub = sub
        self._hash = hash((5, agent, sub._hash))

    __hash__ = Formula.__hash__

    def __eq__(self, other):
        return self is other or (
            type(other) is Knows
            and self._hash == other._hash
            and self.agent == other.agent
            and self.sub == other.sub
        )

    def __repr__(self):
        return f"K{self.agent}({self.sub!r})"


def f_or(left: Formula, right: Formula) -> Formula:
    return Not(And(Not(left), Not(right)))


def f_imp(left: Formula, right: Formula) -> Formula:
    return f_or(Not(left), right)


def f_iff(left: Formula, right: Formula) -> Formula:
    return And(f_imp(left, right), f_imp(right, left))


def f_bottom(ws: Workspace) -> Formula:
    p = Atom(ws.bottom_var())
    return And(p, Not(p))


def f_top(ws: Workspace) -> Formula:
    return Not(f_bottom(ws))


_TOKEN_RE = re.compile(r"<->|->|[~&|(){}]|[A-Za-z_][A-Za-z0-9_]*")
_WS_RE = re.compile(r"\s*")


def _tokenize(text: str) -> list[tuple[str, int]]:
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        pos = _WS_RE.match(text, pos).end()
        if pos >= n:
            break
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        tokens.append((m.group(), pos))
        pos = m.end()
    tokens.append(("", n))
    return tokens


class _Parser:
    def __init__(self, text: str, ws: Workspace):
        self.ws = ws
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self) -> str:
        return self.tokens[self.i][0]

    def pos(self) -> int:
        return self.tokens[self.i][1]

    def take(self) -> str:
        tok = self.tokens[self.i][0]
        self.i += 1
        return tok

    def expect(self, tok: str, what: str):
        if self.peek() != tok:
            raise ParseError(f"expected {what}", self.pos())
        self.take()

    def form(self) -> Formula:
        parts = [self.imp()]
        while self.peek() == "<->":
            self.take()
            parts.append(self.imp())
        out = parts[-1]
        for part in reversed(parts[:-1]):
            out = f_iff(part, out)
        return out

    def imp(self) -> Formula:
        left = self.or_()
        if self.peek() == "->":
            self.take()
            return f_imp(left, self.imp())
        return left

    def or_(self) -> Formula:
        out = self.and_()
        while self.peek() == "|":
            self.take()
            out = f_or(out, self.and_())
        return out

    def and_(self) -> Formula:
        out = self.unary()
        while self.peek() == "&":
            self.take()
            out = And(out, self.unary())
        return out

    def unary(self) -> Formula:
        tok = self.peek()
        pos = self.pos()
        if tok == "~":
            self.take()
            return Not(self.unary())
        if tok in ("B", "K") and self.tokens[self.i + 1][0] == "{":
            self.take()
            self.take()
            agent_name = self.peek()
            agent_pos = self.pos()
            if not agent_name or not (agent_name[0].isalpha() or agent_name[0] == "_"):
                raise ParseError("expected agent name", agent_pos)
            self.take()
            try:
                agent = self.ws.agent_index(agent_name)
            except WorkspaceError:
                raise ParseError(f"undeclared agent {agent_name!r}", agent_pos) from None
            self.expect("}", "'}'")
            return (Believes if tok == "B" else Knows)(agent, self.unary())
        if tok == "(":
            self.take()
            out = self.form()
            self.expect(")", "')'")
            return out
        if tok == "true":
            self.take()
            try:
                return f_top(self.ws)
            except WorkspaceError as exc:
                raise ParseError(str(exc), pos) from None
        if tok == "false":
            self.take()
            try:
                return f_bottom(self.ws)
            except WorkspaceError as exc:
                raise ParseError(str(exc), pos) from None
        if tok and (tok[0].isalpha() or tok[0] == "_"):
            self.take()
            try:
                return Atom(self.ws.var_by_name(tok))
            except WorkspaceError:
                raise ParseError(f"undeclared atom {tok!r}", pos) from None
        raise ParseError("expected a formula", pos)


def parse_formula(text: str, ws: Workspace) -> Formula:
    """Parse and fully desugar a formula over the given workspace."""
    p = _Parser(text, ws)
    out = p.form()
    if p.peek() != "":
        raise ParseError(f"unexpected token {p.peek()!r}", p.pos())
    return out


def render_formula(f: Formula, ws: Workspace) -> str:
    """Print a formula using core connectives only; re-parses to an equal AST."""
    if isinstance(f, Atom):
        return ws.var_name(f.var)
    if isinstance(f, Not):
        return "~" + _render_tight(f.sub, ws)
    if isinstance(f, Believes):
        return f"B{{{ws.agents[f.agent]}}}" + _render_arg(f.sub, ws)
    if isinstance(f, Knows):
        return f"K{{{ws.agents[f.agent]}}}" + _render_arg(f.sub, ws)
    if isinstance(f, And):
        left = render_formula(f.left, ws)
        if isinstance(f.right, And):
            return f"{left} & ({render_formula(f.right, ws)})"
        return f"{left} & {render_formula(f.right, ws)}"
    raise TypeError(f"not a formula: {f!r}")


def _render_tight(f: Formula, ws: Workspace) -> str:
    if isinstance(f, And):
        return "(" + render_formula(f, ws) + ")"
    return render_formula(f, ws)


def _render_arg(f: Formula, ws: Workspace) -> str:
    if isinstance(f, And):
        return "(" + render_formula(f, ws) + ")"
    return " " + render_formula(f, ws)


@dataclass(frozen=True)
class FragmentInfo:
    in_doxastic_fragment: bool
    agent_formula_for: frozenset


def fragment_check(f: Formula) -> FragmentInfo:
    """Belief-only fragment membership and the agents for which f is an a-formula.

    f is an a-formula when every atom is one of a's local variables and
    every modality is indexed by a. Since formulas contain at least one
    atom, at most one agent can qualify.
    """
    owners: set[int] = set()
    modal_agents: set[int] = set()
    has_knows = False
    stack = [f]
    while stack:
        node = stack.pop()
        if isinstance(node, Atom):
            owners.add(node.var.owner)
        elif isinstance(node, Not):
            stack.append(node.sub)
        elif isinstance(node, And):
            stack.append(node.left)
            stack.append(node.right)
        elif isinstance(node, Believes):
            modal_agents.add(node.agent)
            stack.append(node.sub)
        elif isinstance(node, Knows):
            has_knows = True
            modal_agents.add(node.agent)
            stack.append(node.sub)
    mentioned = owners | modal_agents
    qualifying = frozenset(mentioned) if len(mentioned) == 1 else frozenset()
    return FragmentInfo(not has_knows, qualifying)


def modal_depth(f: Formula) -> int:
    if isinstance(f, Atom):
        return 0
    if isinstance(f, Not):
        return modal_depth(f.sub)
    if isinstance(f, And):
        return max(modal_depth(f.left), modal_depth(f.right))
    if isinstance(f, (Believes, Knows)):
        return 1 + modal_depth(f.sub)
    raise TypeError(f"not a formula: {f!r}")


def node_count(f: Formula) -> int:
    if isinstance(f, Atom):
        return 1
    if isinstance(f, Not):
        return 1 + node_count(f.sub)
    if isinstance(f, And):
        return 1 + node_count(f.left) + node_count(f.right)
    if isinstance(f, (Believes, Knows)):
        return 1 + node_count(f.sub)
    raise TypeError(f"not a formula: {f!r}")
