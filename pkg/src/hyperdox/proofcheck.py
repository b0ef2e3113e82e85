"""Hilbert-style proof checking for the three systems.

Systems:
  EDL      full epistemic-doxastic system; all twelve schemes, modus
           ponens and knowledge necessitation (from phi infer K_a phi).
  LocKD45  belief-only consistent belief; K_B, D_B, 4_B, 5_B, Loc, modus
           ponens and belief necessitation. All formulas must stay in the
           belief fragment.
  LocK45   LocKD45 without D_B (merely introspective belief).

Axiom steps are validated by structural scheme matching over the
desugared core language; tautology steps by abstracting maximal modal
subformulas into fresh letters and running a truth table.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum
from typing import Optional, Union

from .errors import HyperdoxError
from .formula import And, Atom, Believes, Formula, Knows, Not, f_imp, fragment_check
from .workspace import PropVar


class System(str, Enum):
    EDL = "EDL"
    LOC_KD45 = "LocKD45"
    LOC_K45 = "LocK45"


class SchemeId(str, Enum):
    K_B = "K_B"
    K_K = "K_K"
    D_B = "D_B"
    FOUR_B = "4_B"
    FIVE_B = "5_B"
    T_K = "T_K"
    FOUR_K = "4_K"
    FIVE_K = "5_K"
    SPI = "SPI"
    SNI = "SNI"
    K_IB = "K_IB"
    LOC = "Loc"


ADMITTED = {
    System.EDL: frozenset(SchemeId),
    System.LOC_KD45: frozenset(
        {SchemeId.K_B, SchemeId.D_B, SchemeId.FOUR_B, SchemeId.FIVE_B, SchemeId.LOC}
    ),
    System.LOC_K45: frozenset(
        {SchemeId.K_B, SchemeId.FOUR_B, SchemeId.FIVE_B, SchemeId.LOC}
    ),
}


# Scheme patterns. MetaF stands for an arbitrary formula, MetaAtom for an
# atom (whose owner must equal the scheme's agent), PB/PK for modalities
# indexed by the scheme's single agent metavariable.


@dataclass(frozen=True)
class MetaF:
    name: str


@dataclass(frozen=True)
class MetaAtom:
    name: str


@dataclass(frozen=True)
class PNot:
    sub: object


@dataclass(frozen=True)
class PAnd:
    left: object
    right: object


@dataclass(frozen=True)
class PB:
    sub: object


@dataclass(frozen=True)
class PK:
    sub: object


def _por(x, y):
    return PNot(PAnd(PNot(x), PNot(y)))


def _pimp(x, y):
    return _por(PNot(x), y)


_PHI = MetaF("phi")
_PSI = MetaF("psi")
_P = MetaAtom("p")

SCHEMES = {
    SchemeId.K_B: _pimp(PB(_pimp(_PHI, _PSI)), _pimp(PB(_PHI), PB(_PSI))),
    SchemeId.K_K: _pimp(PK(_pimp(_PHI, _PSI)), _pimp(PK(_PHI), PK(_PSI))),
    SchemeId.D_B: PNot(PB(PAnd(_PHI, PNot(_PHI)))),
    SchemeId.FOUR_B: _pimp(PB(_PHI), PB(PB(_PHI))),
    SchemeId.FIVE_B: _pimp(PNot(PB(_PHI)), PB(PNot(PB(_PHI)))),
    SchemeId.T_K: _pimp(PK(_PHI), _PHI),
    SchemeId.FOUR_K: _pimp(PK(_PHI), PK(PK(_PHI))),
    SchemeId.FIVE_K: _pimp(PNot(PK(_PHI)), PK(PNot(PK(_PHI)))),
    SchemeId.SPI: _pimp(PB(_PHI), PK(PB(_PHI))),
    SchemeId.SNI: _pimp(PNot(PB(_PHI)), PK(PNot(PB(_PHI)))),
    SchemeId.K_IB: _pimp(PK(_PHI), PB(_PHI)),
    SchemeId.LOC: PAnd(
        _pimp(_P, PB(_P)),
        _pimp(PNot(_P), PB(PNot(_P))),
    ),
}


SCHEME_ARITY = {
    SchemeId.K_B: "two",
    SchemeId.K_K: "two",
    SchemeId.D_B: "one",
    SchemeId.FOUR_B: "one",
    SchemeId.FIVE_B: "one",
    SchemeId.T_K: "one",
    SchemeId.FOUR_K: "one",
    SchemeId.FIVE_K: "one",
    SchemeId.SPI: "one",
    SchemeId.SNI: "one",
    SchemeId.K_IB: "one",
    SchemeId.LOC: "atom",
}


def instantiate_scheme(
    scheme: SchemeId,
    agent: int,
    phi: Optional[Formula] = None,
    psi: Optional[Formula] = None,
    p: Optional[PropVar] = None,
) -> Formula:
    """Build the scheme instance for the given agent and metavariables."""
    binding = {"a": agent, "phi": phi, "psi": psi, "p": p}
    return _substitute(SCHEMES[scheme], binding)


def _substitute(pattern, binding: dict) -> Formula:
    if isinstance(pattern, MetaF):
        value = binding[pattern.name]
        if value is None:
            raise ValueError(f"metavariable {pattern.name} not supplied")
        return value
    if isinstance(pattern, MetaAtom):
        value = binding[pattern.name]
        if value is None:
            raise ValueError(f"metavariable {pattern.name} not supplied")
        return Atom(value)
    if isinstance(pattern, PNot):
        return Not(_substitute(pattern.sub, binding))
    if isinstance(pattern, PAnd):
        return And(_substitute(pattern.left, binding), _substitute(pattern.right, binding))
    if isinstance(pattern, PB):
        return Believes(binding["a"], _substitute(pattern.sub, binding))
    if isinstance(pattern, PK):
        return Knows(binding["a"], _substitute(pattern.sub, binding))
    raise TypeError(f"bad pattern node: {pattern!r}")


def _match(pattern, f: Formula, binding: dict) -> bool:
    if isinstance(pattern, MetaF):
        bound = binding.get(pattern.name)
        if bound is None:
            binding[pattern.name] = f
            return True
        return bound == f
    if isinstance(pattern, MetaAtom):
        if not isinstance(f, Atom):
            return False
        bound = binding.get(pattern.name)
        if bound is None:
            binding[pattern.name] = f.var
            return True
        return bound == f.var
    if isinstance(pattern, PNot):
        return isinstance(f, Not) and _match(pattern.sub, f.sub, binding)
    if isinstance(pattern, PAnd):
        return (
            isinstance(f, And)
            and _match(pattern.left, f.left, binding)
            and _match(pattern.right, f.right, binding)
        )
    if isinstance(pattern, (PB, PK)):
        want = Believes if isinstance(pattern, PB) else Knows
        if type(f) is not want:
            return False
        bound = binding.get("a")
        if bound is None:
            binding["a"] = f.agent
        elif bound != f.agent:
            return False
        return _match(pattern.sub, f.sub, binding)
    raise TypeError(f"bad pattern node: {pattern!r}")


def match_scheme(f: Formula, scheme: SchemeId) -> Optional[dict]:
    """Substitution making f an instance of the scheme, or None.

    Keys: 'a' (agent index), 'phi'/'psi' (formulas) and 'p' (an atom,
    for Loc, whose owner must be the bound agent).
    """
    binding: dict = {}
    if not _match(SCHEMES[scheme], f, binding):
        return None
    if scheme is SchemeId.LOC:
        p: PropVar = binding["p"]
        if p.owner != binding["a"]:
            return None
    return binding


class TautologyTooLarge(HyperdoxError):
    """Abstraction produced more distinct letters than the checker accepts."""


_MAX_LETTERS = 20


def _abstract(f: Formula, letters: dict):
    if isinstance(f, Atom):
        key = ("atom", f.var)
    elif isinstance(f, (Believes, Knows)):
        key = ("modal", f)
    elif isinstance(f, Not):
        return ("not", _abstract(f.sub, letters))
    elif isinstance(f, And):
        return ("and", _abstract(f.left, letters), _abstract(f.right, letters))
    else:
        raise TypeError(f"not a formula: {f!r}")
    idx = letters.get(key)
    if idx is None:
        idx = len(letters)
        letters[key] = idx
    return ("lit", idx)


def _eval_skeleton(expr, bits: int) -> bool:
    tag = expr[0]
    if tag == "lit":
        return bool(bits >> expr[1] & 1)
    if tag == "not":
        return not _eval_skeleton(expr[1], bits)
    return _eval_skeleton(expr[1], bits) and _eval_skeleton(expr[2], bits)


def is_tautology_instance(f: Formula) -> bool:
    """Truth-table validity after abstracting maximal modal subformulas."""
    letters: dict = {}
    skeleton = _abstract(f, letters)
    k = len(letters)
    if k > _MAX_LETTERS:
        raise TautologyTooLarge(
            f"tautology check abstracts {k} letters, more than the supported {_MAX_LETTERS}"
        )
    for bits in range(1 << k):
        if not _eval_skeleton(skeleton, bits):
            return False
    return True


@dataclass(frozen=True)
class Tautology:
    pass


@dataclass(frozen=True)
class Axiom:
    scheme: SchemeId


@dataclass(frozen=True)
class MP:
    antecedent: int
    implication: int


@dataclass(frozen=True)
class NecK:
    agent: int
    premise: int


@dataclass(frozen=True)
class NecB:
    agent: int
    premise: int


Justification = Union[Tautology, Axiom, MP, NecK, NecB]


@dataclass(frozen=True)
class ProofStep:
    formula: Formula
    by: Justification


@dataclass
class ProofResult:
    ok: bool
    step: Optional[int] = None
    reason: Optional[str] = None

    def to_json(self) -> dict:
        out: dict = {"ok": self.ok}
        if not self.ok:
            out["step"] = self.step
            out["reason"] = self.reason
        return out


def check_proof(system: System, steps) -> ProofResult:
    """Check a proof; on failure reports the first bad step (1-based)."""
    steps = list(steps)
    if system in (System.LOC_KD45, System.LOC_K45):
        for idx, step in enumerate(steps, start=1):
            if not fragment_check(step.formula).in_doxastic_fragment:
                return ProofResult(
                    False, idx, "formula leaves the belief fragment required by " + system.value
                )
    for idx, step in enumerate(steps, start=1):
        by = step.by
        if isinstance(by, Tautology):
            try:
                if not is_tautology_instance(step.formula):
                    return ProofResult(False, idx, "not an instance of a classical tautology")
            except TautologyTooLarge as exc:
                return ProofResult(False, idx, str(exc))
        elif isinstance(by, Axiom):
            if by.scheme not in ADMITTED[system]:
                return ProofResult(
                    False, idx, f"scheme {by.scheme.value} is not part of {system.value}"
                )
            if match_scheme(step.formula, by.scheme) is None:
                return ProofResult(
                    False, idx, f"no match against scheme {by.scheme.value}"
                )
        elif isinstance(by, MP):
            err = _check_ref(by.antecedent, idx) or _check_ref(by.implication, idx)
            if err:
                return ProofResult(False, idx, err)
            expected = f_imp(steps[by.antecedent - 1].formula, step.formula)
            if steps[by.implication - 1].formula != expected:
                return ProofResult(
                    False,
                    idx,
                    f"step {by.implication} is not (step {by.antecedent} -> this step)",
                )
        elif isinstance(by, NecK):
            if system is not System.EDL:
                return ProofResult(
                    False, idx, f"knowledge necessitation is not a rule of {system.value}"
                )
            err = _check_ref(by.premise, idx)
            if err:
                return ProofResult(False, idx, err)
            if step.formula != Knows(by.agent, steps[by.premise - 1].formula):
                return ProofResult(
                    False, idx, f"formula is not K applied to step {by.premise}"
                )
        elif isinstance(by, NecB):
            if system is System.EDL:
                return ProofResult(
                    False, idx, "belief necessitation is not a rule of EDL"
                )
            err = _check_ref(by.premise, idx)
            if err:
                return ProofResult(False, idx, err)
            if step.formula != Believes(by.agent, steps[by.premise - 1].formula):
                return ProofResult(
                    False, idx, f"formula is not B applied to step {by.premise}"
                )
        else:
            return ProofResult(False, idx, f"unknown justification {by!r}")
    return ProofResult(True)


def _check_ref(ref: int, current: int) -> Optional[str]:
    if not 1 <= ref < current:
        return f"reference to step {ref} is out of range (must be 1..{current - 1})"
    return None
