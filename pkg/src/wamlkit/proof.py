"""Hilbert-style proof checking for the weakly aggregative systems.

The system of arity n extends propositional logic with the axiom schema

    box p0 & ... & box pn -> box OR_{0 <= i < j <= n} (p_i & p_j)

(the pigeonhole weakening of aggregation), the necessitation rule and the
monotonicity rule.  Replacement of provable equivalents under box and
tautological consequence from cited lines are admitted as derived-rule
conveniences.  Diamonds are read as the negated-box abbreviation before
any line is validated, so propositional steps may move between ``dia f``
and ``~box ~f`` freely; box subformulas themselves are opaque atoms for
propositional reasoning.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Mapping

from .errors import BudgetExceededError, ModelLoadError
from .syntax import (
    And,
    Bottom,
    Box,
    Diamond,
    Formula,
    Iff,
    Implies,
    Letter,
    Not,
    Or,
    Top,
    parse,
    print_formula,
)

MAX_TAUTOLOGY_ATOMS = 20


@dataclass(frozen=True)
class Justification:
    pass


@dataclass(frozen=True)
class TautJust(Justification):
    pass


@dataclass(frozen=True)
class KnAxiomJust(Justification):
    substitution: tuple[tuple[str, Formula], ...]  # sorted (p_i, formula) pairs


@dataclass(frozen=True)
class MPJust(Justification):
    implication: int
    antecedent: int


@dataclass(frozen=True)
class NecJust(Justification):
    source: int


@dataclass(frozen=True)
class RMJust(Justification):
    source: int


@dataclass(frozen=True)
class REJust(Justification):
    source: int | None = None  # None: the equivalence is itself tautological


@dataclass(frozen=True)
class PLFromJust(Justification):
    sources: tuple[int, ...]


@dataclass(frozen=True)
class ProofLine:
    formula: Formula
    justification: Justification


@dataclass(frozen=True)
class ProofScript:
    arity: int
    lines: tuple[ProofLine, ...]

    def theorem(self) -> Formula:
        return self.lines[-1].formula


@dataclass(frozen=True)
class LineReport:
    line: int  # 1-based
    reason: str


# ---------------------------------------------------------------------------
# Normalization and propositional abstraction

def expand_diamonds(f: Formula) -> Formula:
    """Rewrite every diamond into its negated-box form."""
    match f:
        case Letter() | Top() | Bottom():
            return f
        case Not(g):
            return Not(expand_diamonds(g))
        case And(l, r):
            return And(expand_diamonds(l), expand_diamonds(r))
        case Or(l, r):
            return Or(expand_diamonds(l), expand_diamonds(r))
        case Implies(l, r):
            return Implies(expand_diamonds(l), expand_diamonds(r))
        case Iff(l, r):
            return Iff(expand_diamonds(l), expand_diamonds(r))
        case Box(g):
            return Box(expand_diamonds(g))
        case Diamond(g):
            return Not(Box(Not(expand_diamonds(g))))
    raise TypeError(f"not a formula: {f!r}")


def _atoms_of(f: Formula, acc: dict[object, None]) -> None:
    # maximal boxed subformulas and letters, after diamond expansion
    match f:
        case Letter(name):
            acc.setdefault(("letter", name))
        case Top() | Bottom():
            pass
        case Box():
            acc.setdefault(("box", f))
        case Not(g):
            _atoms_of(g, acc)
        case And(l, r) | Or(l, r) | Implies(l, r) | Iff(l, r):
            _atoms_of(l, acc)
            _atoms_of(r, acc)
        case _:
            raise TypeError(f"unexpected formula: {f!r}")


def _prop_eval(f: Formula, env: dict[object, bool]) -> bool:
    match f:
        case Letter(name):
            return env[("letter", name)]
        case Top():
            return True
        case Bottom():
            return False
        case Box():
            return env[("box", f)]
        case Not(g):
            return not _prop_eval(g, env)
        case And(l, r):
            return _prop_eval(l, env) and _prop_eval(r, env)
        case Or(l, r):
            return _prop_eval(l, env) or _prop_eval(r, env)
        case Implies(l, r):
            return (not _prop_eval(l, env)) or _prop_eval(r, env)
        case Iff(l, r):
            return _prop_eval(l, env) == _prop_eval(r, env)
    raise TypeError(f"unexpected formula: {f!r}")


def is_tautology(f: Formula) -> bool:
    """Exact truth-table check after abstracting maximal boxed subformulas
    (syntactically identical boxes share an atom, nothing else does)."""
    expanded = expand_diamonds(f)
    atoms: dict[object, None] = {}
    _atoms_of(expanded, atoms)
    keys = list(atoms)
    if len(keys) > MAX_TAUTOLOGY_ATOMS:
        raise BudgetExceededError(
            f"tautology check over {len(keys)} atoms exceeds the cap of "
            f"{MAX_TAUTOLOGY_ATOMS}"
        )
    for values in itertools.product((False, True), repeat=len(keys)):
        if not _prop_eval(expanded, dict(zip(keys, values))):
            return False
    return True


def tautological_consequence(premises: list[Formula], conclusion: Formula) -> bool:
    f = conclusion
    for p in reversed(premises):
        f = Implies(p, f)
    return is_tautology(f)


# ---------------------------------------------------------------------------
# The axiom schema

def kn_axiom(arity: int, substitution: Mapping[str, Formula]) -> Formula:
    """The arity-n axiom instance under the substitution for p0..pn, with
    the pairwise disjunction enumerated in lexicographic (i, j) order."""
    if arity < 1:
        raise ValueError("arity must be >= 1")
    names = [f"p{i}" for i in range(arity + 1)]
    missing = [p for p in names if p not in substitution]
    if missing:
        raise ValueError(f"substitution missing {', '.join(missing)}")
    args = [substitution[p] for p in names]
    antecedent: Formula = Box(args[0])
    for g in args[1:]:
        antecedent = And(antecedent, Box(g))
    pairs = [
        And(args[i], args[j])
        for i in range(arity + 1)
        for j in range(i + 1, arity + 1)
    ]
    disjunction: Formula = pairs[0]
    for g in pairs[1:]:
        disjunction = Or(disjunction, g)
    return Implies(antecedent, Box(disjunction))


# ---------------------------------------------------------------------------
# Script checking

def _norm(f: Formula) -> Formula:
    return expand_diamonds(f)


def check_script(script: ProofScript) -> LineReport | None:
    """None when every line validates; otherwise the first invalid line
    with the reason."""
    if script.arity < 1:
        return LineReport(0, f"arity must be >= 1, got {script.arity}")
    if not script.lines:
        return LineReport(0, "script has no lines")
    norms: list[Formula] = []
    for number, line in enumerate(script.lines, start=1):
        current = _norm(line.formula)

        def cited(index: int) -> Formula | None:
            if not 1 <= index < number:
                return None
            return norms[index - 1]

        reason = _check_line(script.arity, current, line.justification, cited)
        if reason is not None:
            return LineReport(number, reason)
        norms.append(current)
    return None


def _check_line(arity, current, just, cited) -> str | None:
    match just:
        case TautJust():
            try:
                if not is_tautology(current):
                    return "not a propositional tautology after abstraction"
            except BudgetExceededError as e:
                return str(e)
            return None
        case KnAxiomJust(substitution):
            subst = dict(substitution)
            expected_names = {f"p{i}" for i in range(arity + 1)}
            if set(subst) != expected_names:
                return (
                    "substitution domain must be exactly "
                    f"{{{', '.join(sorted(expected_names))}}}"
                )
            expected = _norm(kn_axiom(arity, subst))
            if current != expected:
                return (
                    "formula is not the stated axiom instance; expected "
                    + print_formula(expected)
                )
            return None
        case MPJust(implication, antecedent):
            impl = cited(implication)
            ante = cited(antecedent)
            if impl is None or ante is None:
                return "cited line must be strictly earlier"
            if not isinstance(impl, Implies):
                return f"line {implication} is not an implication"
            if impl.left != ante:
                return f"line {antecedent} does not match the antecedent"
            if impl.right != current:
                return "formula does not match the consequent"
            return None
        case NecJust(source):
            src = cited(source)
            if src is None:
                return "cited line must be strictly earlier"
            if current != Box(src):
                return f"formula is not box applied to line {source}"
            return None
        case RMJust(source):
            src = cited(source)
            if src is None:
                return "cited line must be strictly earlier"
            if not isinstance(src, Implies):
                return f"line {source} is not an implication"
            if current != Implies(Box(src.left), Box(src.right)):
                return "formula is not the boxed form of the cited implication"
            return None
        case REJust(source):
            if not (
                isinstance(current, Iff)
                and isinstance(current.left, Box)
                and isinstance(current.right, Box)
            ):
                return "formula must be a biconditional between two boxes"
            equivalence = Iff(current.left.operand, current.right.operand)
            if source is None:
                try:
                    if not is_tautology(equivalence):
                        return "the unboxed biconditional is not a tautology"
                except BudgetExceededError as e:
                    return str(e)
                return None
            src = cited(source)
            if src is None:
                return "cited line must be strictly earlier"
            if src != equivalence:
                return f"line {source} is not the matching biconditional"
            return None
        case PLFromJust(sources):
            premises = []
            for index in sources:
                src = cited(index)
                if src is None:
                    return "cited line must be strictly earlier"
                premises.append(src)
            try:
                if not tautological_consequence(premises, current):
                    return "not a tautological consequence of the cited lines"
            except BudgetExceededError as e:
                return str(e)
            return None
    return f"unknown justification {just!r}"


# ---------------------------------------------------------------------------
# JSON round-trip

def script_to_dict(script: ProofScript) -> dict:
    lines = []
    for line in script.lines:
        match line.justification:
            case TautJust():
                just: dict = {"kind": "Taut"}
            case KnAxiomJust(substitution):
                just = {
                    "kind": "KnAxiom",
                    "subst": {
                        name: print_formula(g) for name, g in substitution
                    },
                }
            case MPJust(implication, antecedent):
                just = {"kind": "MP", "from": [implication, antecedent]}
            case NecJust(source):
                just = {"kind": "Nec", "from": [source]}
            case RMJust(source):
                just = {"kind": "RM", "from": [source]}
            case REJust(source):
                just = {"kind": "RE"}
                if source is not None:
                    just["from"] = [source]
            case PLFromJust(sources):
                just = {"kind": "PLFrom", "from": list(sources)}
            case other:
                raise TypeError(f"unknown justification {other!r}")
        lines.append({"formula": print_formula(line.formula), "just": just})
    return {"arity": script.arity, "lines": lines}


def _just_from_dict(data: object, where: str) -> Justification:
    if not isinstance(data, dict) or "kind" not in data:
        raise ModelLoadError(f"{where}: justification must carry a kind")
    kind = data["kind"]
    refs = data.get("from", [])
    if not isinstance(refs, list) or not all(isinstance(i, int) for i in refs):
        raise ModelLoadError(f"{where}: 'from' must be a list of line numbers")
    if kind == "Taut":
        return TautJust()
    if kind == "KnAxiom":
        subst = data.get("subst")
        if not isinstance(subst, dict):
            raise ModelLoadError(f"{where}: KnAxiom needs a 'subst' object")
        pairs = tuple(
            sorted((name, parse(text)) for name, text in subst.items())
        )
        return KnAxiomJust(pairs)
    if kind == "MP":
        if len(refs) != 2:
            raise ModelLoadError(f"{where}: MP cites exactly two lines")
        return MPJust(refs[0], refs[1])
    if kind == "Nec":
        if len(refs) != 1:
            raise ModelLoadError(f"{where}: Nec cites exactly one line")
        return NecJust(refs[0])
    if kind == "RM":
        if len(refs) != 1:
            raise ModelLoadError(f"{where}: RM cites exactly one line")
        return RMJust(refs[0])
    if kind == "RE":
        if len(refs) > 1:
            raise ModelLoadError(f"{where}: RE cites at most one line")
        return REJust(refs[0] if refs else None)
    if kind == "PLFrom":
        return PLFromJust(tuple(refs))
    raise ModelLoadError(f"{where}: unknown justification kind {kind!r}")


def script_from_dict(data: object) -> ProofScript:
    if not isinstance(data, dict):
        raise ModelLoadError("proof JSON must be an object")
    arity = data.get("arity")
    if not isinstance(arity, int) or arity < 1:
        raise ModelLoadError(f"arity must be an integer >= 1, got {arity!r}")
    raw_lines = data.get("lines")
    if not isinstance(raw_lines, list) or not raw_lines:
        raise ModelLoadError("lines must be a nonempty list")
    lines = []
    for i, raw in enumerate(raw_lines, start=1):
        where = f"lines[{i}]"
        if not isinstance(raw, dict) or "formula" not in raw or "just" not in raw:
            raise ModelLoadError(f"{where}: each line needs formula and just")
        lines.append(
            ProofLine(parse(raw["formula"]), _just_from_dict(raw["just"], where))
        )
    return ProofScript(arity, tuple(lines))


def load_script(text: bytes | str) -> ProofScript:
    if isinstance(text, bytes):
        text = text.decode("utf-8")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as e:
        raise ModelLoadError(f"malformed JSON: {e}") from e
    return script_from_dict(data)


def save_script(script: ProofScript) -> bytes:
    return (json.dumps(script_to_dict(script), indent=2, sort_keys=True) + "\n").encode()


# ---------------------------------------------------------------------------
# Refutation scripts for the interpolation counterexamples

def _conj(parts: list[Formula]) -> Formula:
    f = parts[0]
    for g in parts[1:]:
        f = And(f, g)
    return f


def binary_tag(index: int, width: int) -> Formula:
    """Conjunction of literals over r1..r_width encoding index-1 in binary:
    bit b set means r_{b+1} positive, otherwise negated.  Distinct indices
    yield jointly unsatisfiable conjunctions."""
    bits = index - 1
    literals: list[Formula] = []
    for b in range(width):
        letter = Letter(f"r{b + 1}")
        literals.append(letter if bits >> b & 1 else Not(letter))
    return _conj(literals)


def tag_width(n: int) -> int:
    """Least m with 2**m >= n - 1."""
    m = 0
    while (1 << m) < n - 1:
        m += 1
    return m


def refutation_formulas(n: int) -> tuple[Formula, Formula]:
    """The jointly refutable pair (phi_n, psi_n) whose only common letter
    is p.  The pair for n = 2 and n = 3 is hand-crafted; for larger n the
    left side forces p at a successor of every tuple while the right side
    forces ~p, with pairwise-incompatible tags keeping the right boxes
    distinct."""
    if n < 2:
        raise ValueError("n must be >= 2")
    p, q = Letter("p"), Letter("q")
    if n == 2:
        phi = And(Box(Or(Not(p), Not(q))), Diamond(q))
        psi = And(Box(And(p, Letter("r"))), Box(And(p, Not(Letter("r")))))
        return phi, psi
    if n == 3:
        r = Letter("r")
        taut = Or(p, Not(p))
        phi = _conj([Box(And(p, Not(q))), Box(And(p, q)), Diamond(taut)])
        psi = _conj([Box(And(Not(p), r)), Box(And(Not(p), Not(r))), Diamond(taut)])
        return phi, psi
    width = tag_width(n)
    phi = _conj([Box(And(p, Not(q))), Box(And(p, q)), Diamond(Top())])
    psi = _conj(
        [Box(And(Not(p), binary_tag(i, width))) for i in range(1, n)]
        + [Diamond(Top())]
    )
    return phi, psi


def generate_interp_refutation(n: int) -> ProofScript:
    """A checkable derivation of phi_n -> ~psi_n in the arity-n system:
    the axiom instance on the n+1 box arguments, replacement collapsing the
    pairwise disjunction (every disjunct is contradictory), monotonicity,
    then propositional steps against the diamond conjunct."""
    if n < 2:
        raise ValueError("n must be >= 2")
    phi, psi = refutation_formulas(n)
    p, q = Letter("p"), Letter("q")
    if n == 2:
        a = Or(Not(p), Not(q))
        b = And(p, Letter("r"))
        c = And(p, Not(Letter("r")))
        target = And(p, Not(q))
        axiom_inst = kn_axiom(2, {"p0": a, "p1": b, "p2": c})
        boxes = axiom_inst.left
        disjunction = axiom_inst.right.operand
        lines = [
            ProofLine(axiom_inst, KnAxiomJust((("p0", a), ("p1", b), ("p2", c)))),
            ProofLine(Iff(Box(disjunction), Box(target)), REJust()),
            ProofLine(Implies(boxes, Box(target)), PLFromJust((1, 2))),
            ProofLine(
                Implies(And(phi, psi), And(Box(target), Diamond(q))),
                PLFromJust((3,)),
            ),
            ProofLine(Implies(target, Not(q)), TautJust()),
            ProofLine(Implies(Box(target), Box(Not(q))), RMJust(5)),
            ProofLine(
                Implies(And(phi, psi), And(Box(Not(q)), Not(Box(Not(q))))),
                PLFromJust((4, 6)),
            ),
            ProofLine(Implies(phi, Not(psi)), PLFromJust((7,))),
        ]
        return ProofScript(2, tuple(lines))
    if n == 3:
        args = [
            And(p, Not(q)),
            And(p, q),
            And(Not(p), Letter("r")),
            And(Not(p), Not(Letter("r"))),
        ]
        contradiction: Formula = And(p, Not(p))
        negated = Not(Or(p, Not(p)))
    else:
        width = tag_width(n)
        args = [And(p, Not(q)), And(p, q)] + [
            And(Not(p), binary_tag(i, width)) for i in range(1, n)
        ]
        contradiction = Bottom()
        negated = Not(Top())
    subst = {f"p{i}": g for i, g in enumerate(args)}
    axiom_inst = kn_axiom(n, subst)
    boxes = axiom_inst.left
    disjunction = axiom_inst.right.operand
    lines = [
        ProofLine(axiom_inst, KnAxiomJust(tuple(sorted(subst.items())))),
        ProofLine(Iff(Box(disjunction), Box(contradiction)), REJust()),
        ProofLine(Implies(boxes, Box(contradiction)), PLFromJust((1, 2))),
        ProofLine(Implies(contradiction, negated), TautJust()),
        ProofLine(Implies(Box(contradiction), Box(negated)), RMJust(4)),
        ProofLine(Implies(phi, Not(psi)), PLFromJust((3, 5))),
    ]
    return ProofScript(n, tuple(lines))
