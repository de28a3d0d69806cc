"""Machine-checked counterexamples to Craig interpolation for every arity
n >= 2.

Each bundle carries two pointed n-models, a pair of jointly refutable
formulas true at the respective points, a bisimulation over their common
vocabulary linking the points, and a checkable derivation of the
refutation.  Together these witness that no interpolant in the shared
vocabulary can exist: an interpolant would transfer across the
bisimulation yet separate the two points.  Only soundness of the system
over the two models is used, so any extension valid on them inherits the
failure.
"""

from __future__ import annotations

from dataclasses import dataclass

from . import bisim, proof, semantics, syntax
from .bisim import PairRelation
from .errors import BudgetExceededError
from .model import PointedModel, make_model
from .proof import ProofScript, binary_tag, refutation_formulas, tag_width
from .syntax import Formula, Implies, Not, And, letters, print_formula


@dataclass(frozen=True)
class CounterexampleBundle:
    n: int
    left: PointedModel
    right: PointedModel
    phi: Formula
    psi: Formula
    z: PairRelation
    refutation: ProofScript


def _positive_letters(f: Formula) -> list[str]:
    # positive literals of a conjunction of literals
    out = []
    stack = [f]
    while stack:
        g = stack.pop()
        match g:
            case syntax.And(l, r):
                stack.extend((l, r))
            case syntax.Letter(name):
                out.append(name)
            case syntax.Not(syntax.Letter()):
                pass
            case _:
                raise ValueError(f"not a conjunction of literals: {g!r}")
    return sorted(out)


def build_counterexample(n: int) -> CounterexampleBundle:
    """The counterexample bundle at arity n.  Point valuations are empty;
    the bisimulation alphabet is the single shared letter p."""
    if n < 2:
        raise ValueError("n must be >= 2")
    phi, psi = refutation_formulas(n)
    if n == 2:
        left = make_model(
            2,
            ["w", "w1", "w2", "w3", "w4"],
            [("w", "w1", "w2"), ("w", "w3", "w4")],
            {"w1": ["p"], "w2": ["p"], "w3": ["p", "q"], "w4": ["q"]},
        )
        right = make_model(
            2,
            ["v", "v1", "v2"],
            [("v", "v1", "v2")],
            {"v1": ["p"], "v2": ["p", "r"]},
        )
        pairs = {("w", "v"), ("w1", "v1"), ("w2", "v2"), ("w3", "v1"), ("w3", "v2")}
    elif n == 3:
        left = make_model(
            3,
            ["w", "w1", "w2", "w3"],
            [("w", "w1", "w2", "w3")],
            {"w1": ["p"], "w2": ["p", "q"], "w3": ["q"]},
        )
        right = make_model(
            3,
            ["v", "v1", "v2", "v3"],
            [("v", "v1", "v2", "v3")],
            {"v1": ["r"], "v3": ["p", "r"]},
        )
        pairs = {("w", "v"), ("w1", "v3"), ("w2", "v3"), ("w3", "v1"), ("w3", "v2")}
    else:
        width = tag_width(n)
        left_worlds = ["w"] + [f"w{i}" for i in range(1, n + 1)]
        left_val = {"w1": ["p"], "w2": ["p", "q"]}
        left = make_model(
            n,
            left_worlds,
            [tuple(left_worlds)],
            left_val,
        )
        right_worlds = ["v"] + [f"v{i}" for i in range(1, n + 1)]
        right_val: dict[str, list[str]] = {"v1": ["p"]}
        for i in range(1, n):
            right_val[f"v{i + 1}"] = _positive_letters(binary_tag(i, width))
        right = make_model(n, right_worlds, [tuple(right_worlds)], right_val)
        pairs = {("w", "v"), ("w1", "v1"), ("w2", "v1")}
        pairs |= {
            (f"w{i}", f"v{j}") for i in range(3, n + 1) for j in range(2, n + 1)
        }
    common = letters(phi) & letters(psi)
    z = PairRelation(left, right, frozenset(pairs), common)
    return CounterexampleBundle(
        n=n,
        left=PointedModel(left, left.worlds[0]),
        right=PointedModel(right, right.worlds[0]),
        phi=phi,
        psi=psi,
        z=z,
        refutation=proof.generate_interp_refutation(n),
    )


@dataclass(frozen=True)
class ConditionReport:
    passed: bool
    detail: str


@dataclass(frozen=True)
class InterpolationReport:
    n: int
    models_satisfy: ConditionReport
    refutation_valid: ConditionReport
    roots_indistinguishable: ConditionReport
    joint_sat_corroboration: ConditionReport
    note: str

    @property
    def passed(self) -> bool:
        return (
            self.models_satisfy.passed
            and self.refutation_valid.passed
            and self.roots_indistinguishable.passed
        )


_SWEEP_DEPTH = 2
_SWEEP_SIZE = 6

_NOTE = (
    "only soundness over these two models is used, so any extension of the "
    "system that stays valid on them also lacks interpolation"
)


def verify_counterexample(
    bundle: CounterexampleBundle, sat_bound: int
) -> InterpolationReport:
    """Check the three counterexample conditions end to end.

    (1) each pointed model satisfies its formula; (2) the bundled script
    derives phi -> ~psi and checks, with a bounded joint-satisfiability
    search as corroborating (never authoritative) evidence; (3) the bundled
    relation is a bisimulation over the common vocabulary linking the two
    points, cross-checked by sweeping all small common-vocabulary formulas
    at the roots.
    """
    b = bundle
    w, v = b.left.point, b.right.point

    sat_left = semantics.check(b.left.model, w, b.phi)
    sat_right = semantics.check(b.right.model, v, b.psi)
    models_satisfy = ConditionReport(
        sat_left and sat_right,
        f"left point satisfies phi: {sat_left}; "
        f"right point satisfies psi: {sat_right}",
    )

    expected_theorem = Implies(b.phi, Not(b.psi))
    if b.refutation.theorem() != expected_theorem:
        refutation_valid = ConditionReport(
            False, "script does not end in phi -> ~psi"
        )
    else:
        report = proof.check_script(b.refutation)
        refutation_valid = ConditionReport(
            report is None,
            "script checks"
            if report is None
            else f"line {report.line}: {report.reason}",
        )

    try:
        witness = semantics.bounded_sat(And(b.phi, b.psi), b.n, sat_bound)
        if witness is None:
            corroboration = ConditionReport(
                True, f"phi & psi unsatisfiable up to {sat_bound} worlds"
            )
        else:
            corroboration = ConditionReport(
                False,
                f"phi & psi satisfied at {witness.point} of a "
                f"{len(witness.model.worlds)}-world model",
            )
    except BudgetExceededError as e:
        corroboration = ConditionReport(True, f"search inconclusive: {e}")

    violation = bisim.check_bisim(b.z)
    if violation is not None:
        roots = ConditionReport(False, violation.describe())
    elif (w, v) not in b.z.pairs:
        roots = ConditionReport(False, "relation does not link the two points")
    else:
        disagreement = None
        stream = syntax.enumerate_formulas(b.z.alphabet, _SWEEP_DEPTH, _SWEEP_SIZE)
        lev = semantics.ModelEvaluator(b.left.model)
        rev = semantics.ModelEvaluator(b.right.model)
        for f in stream:
            if lev.holds(w, f) != rev.holds(v, f):
                disagreement = f
                break
        if disagreement is None:
            roots = ConditionReport(
                True,
                "relation is a bisimulation over the common vocabulary and "
                "the points agree on all small common-vocabulary formulas",
            )
        else:
            witness_formula = bisim.distinguishing_formula(
                b.left.model, w, b.right.model, v, b.z.alphabet
            )
            shown = disagreement if witness_formula is None else witness_formula
            roots = ConditionReport(
                False,
                f"points disagree on {print_formula(shown)}",
            )
    # a failed bisimulation check also deserves a distinguishing formula
    if not roots.passed and violation is not None:
        separating = bisim.distinguishing_formula(
            b.left.model, w, b.right.model, v, b.z.alphabet
        )
        if separating is not None:
            roots = ConditionReport(
                False,
                roots.detail + f"; points separated by {print_formula(separating)}",
            )

    # corroboration finding an actual joint model would contradict soundness
    if not corroboration.passed:
        refutation_valid = ConditionReport(
            False,
            refutation_valid.detail + "; " + corroboration.detail,
        )

    return InterpolationReport(
        n=b.n,
        models_satisfy=models_satisfy,
        refutation_valid=refutation_valid,
        roots_indistinguishable=roots,
        joint_sat_corroboration=corroboration,
        note=_NOTE,
    )
