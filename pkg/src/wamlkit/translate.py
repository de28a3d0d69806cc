"""Standard translation into first-order logic over one (n+1)-ary relation
symbol, a finite Tarskian evaluator, and TPTP export.

``box f`` becomes a universal over n successor variables: if the relation
holds, the translated body is true at some successor variable.  ``dia f``
becomes the existential mirror with a conjunction over the successors.
The output has exactly one free variable.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from .model import NModel
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
)


@dataclass(frozen=True)
class FolFormula:
    pass


@dataclass(frozen=True)
class LetterPred(FolFormula):
    letter: str
    var: str


@dataclass(frozen=True)
class Rel(FolFormula):
    args: tuple[str, ...]


@dataclass(frozen=True)
class FolTop(FolFormula):
    pass


@dataclass(frozen=True)
class FolBottom(FolFormula):
    pass


@dataclass(frozen=True)
class FolNot(FolFormula):
    operand: FolFormula


@dataclass(frozen=True)
class FolAnd(FolFormula):
    left: FolFormula
    right: FolFormula


@dataclass(frozen=True)
class FolOr(FolFormula):
    left: FolFormula
    right: FolFormula


@dataclass(frozen=True)
class FolImplies(FolFormula):
    left: FolFormula
    right: FolFormula


@dataclass(frozen=True)
class Forall(FolFormula):
    var: str
    body: FolFormula


@dataclass(frozen=True)
class Exists(FolFormula):
    var: str
    body: FolFormula


def st(f: Formula, arity: int, free_var: str = "x") -> FolFormula:
    """Standard translation of f with the given free variable.

    Bound variables are y1..yn for the first modal operator reached and
    y1_c..yn_c (c = 1, 2, ...) for each later one, so no variable is ever
    bound twice along a path.
    """
    if arity < 1:
        raise ValueError("arity must be >= 1")
    counter = 0

    def fresh() -> list[str]:
        nonlocal counter
        suffix = "" if counter == 0 else f"_{counter}"
        counter += 1
        return [f"y{i}{suffix}" for i in range(1, arity + 1)]

    def go(g: Formula, var: str) -> FolFormula:
        match g:
            case Letter(name):
                return LetterPred(name, var)
            case Top():
                return FolTop()
            case Bottom():
                return FolBottom()
            case Not(h):
                return FolNot(go(h, var))
            case And(l, r):
                return FolAnd(go(l, var), go(r, var))
            case Or(l, r):
                return FolOr(go(l, var), go(r, var))
            case Implies(l, r):
                return FolImplies(go(l, var), go(r, var))
            case Iff(l, r):
                return FolAnd(
                    FolImplies(go(l, var), go(r, var)),
                    FolImplies(go(r, var), go(l, var)),
                )
            case Box(h):
                ys = fresh()
                body = go(h, ys[0])
                for y in ys[1:]:
                    body = FolOr(body, go(h, y))
                quantified = FolImplies(Rel((var, *ys)), body)
                for y in reversed(ys):
                    quantified = Forall(y, quantified)
                return quantified
            case Diamond(h):
                ys = fresh()
                body = go(h, ys[0])
                for y in ys[1:]:
                    body = FolAnd(body, go(h, y))
                quantified = FolAnd(Rel((var, *ys)), body)
                for y in reversed(ys):
                    quantified = Exists(y, quantified)
                return quantified
        raise TypeError(f"not a formula: {g!r}")

    return go(f, free_var)


def free_variables(g: FolFormula) -> frozenset[str]:
    match g:
        case LetterPred(_, var):
            return frozenset({var})
        case Rel(args):
            return frozenset(args)
        case FolTop() | FolBottom():
            return frozenset()
        case FolNot(h):
            return free_variables(h)
        case FolAnd(l, r) | FolOr(l, r) | FolImplies(l, r):
            return free_variables(l) | free_variables(r)
        case Forall(var, body) | Exists(var, body):
            return free_variables(body) - {var}
    raise TypeError(f"not a first-order formula: {g!r}")


def fol_eval(m: NModel, assignment: dict[str, str], g: FolFormula) -> bool:
    """Tarskian satisfaction over m viewed as a first-order structure;
    quantifiers range over m.worlds."""
    missing = sorted(free_variables(g) - set(assignment))
    if missing:
        raise ValueError(f"unassigned free variables: {', '.join(missing)}")

    def go(h: FolFormula, env: dict[str, str]) -> bool:
        match h:
            case LetterPred(letter, var):
                return letter in m.valuation[env[var]]
            case Rel(args):
                return tuple(env[a] for a in args) in m.relation
            case FolTop():
                return True
            case FolBottom():
                return False
            case FolNot(b):
                return not go(b, env)
            case FolAnd(l, r):
                return go(l, env) and go(r, env)
            case FolOr(l, r):
                return go(l, env) or go(r, env)
            case FolImplies(l, r):
                return (not go(l, env)) or go(r, env)
            case Forall(var, body):
                return all(go(body, {**env, var: w}) for w in m.worlds)
            case Exists(var, body):
                return any(go(body, {**env, var: w}) for w in m.worlds)
        raise TypeError(f"not a first-order formula: {h!r}")

    return go(g, dict(assignment))


# ---------------------------------------------------------------------------
# Rendering

_TPTP_NAME_RE = re.compile(r"[a-z][a-zA-Z0-9_]*\Z")


def _render(g: FolFormula, term) -> str:
    def flatten(h, cls):
        if isinstance(h, cls):
            return flatten(h.left, cls) + flatten(h.right, cls)
        return [h]

    match g:
        case LetterPred(letter, var):
            return f"p_{letter}({term(var)})"
        case Rel(args):
            return "r(" + ",".join(term(a) for a in args) + ")"
        case FolTop():
            return "$true"
        case FolBottom():
            return "$false"
        case FolNot(h):
            return "~ " + _render(h, term)
        case FolAnd():
            return "(" + " & ".join(_render(p, term) for p in flatten(g, FolAnd)) + ")"
        case FolOr():
            return "(" + " | ".join(_render(p, term) for p in flatten(g, FolOr)) + ")"
        case FolImplies(l, r):
            return "(" + _render(l, term) + " => " + _render(r, term) + ")"
        case Forall() | Exists():
            symbol = "!" if isinstance(g, Forall) else "?"
            cls = type(g)
            names = []
            body = g
            while isinstance(body, cls):
                names.append(body.var)
                body = body.body
            joined = ",".join(term(v) for v in names)
            return f"{symbol} [{joined}] : " + _render(body, term)
    raise TypeError(f"not a first-order formula: {g!r}")


def render_text(g: FolFormula) -> str:
    """Plain-text rendering with variables kept verbatim."""
    return _render(g, lambda v: v)


def tptp_export(
    g: FolFormula, role: str, name: str, grounding: dict[str, str]
) -> str:
    """One TPTP fof line for g.  Free variables must all be grounded to
    constants; bound variables are uppercased as TPTP requires."""
    if role not in ("axiom", "conjecture"):
        raise ValueError(f"role must be axiom or conjecture, got {role!r}")
    if not _TPTP_NAME_RE.match(name):
        raise ValueError(f"{name!r} is not a valid TPTP identifier")
    unground = sorted(free_variables(g) - set(grounding))
    if unground:
        raise ValueError(f"ungrounded free variables: {', '.join(unground)}")
    for const in grounding.values():
        if not _TPTP_NAME_RE.match(const):
            raise ValueError(f"{const!r} is not a valid TPTP constant")

    def term(v: str) -> str:
        if v in grounding:
            return grounding[v]
        return v[0].upper() + v[1:]

    return f"fof({name}, {role}, {_render(g, term)})."
