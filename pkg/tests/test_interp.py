import pytest

from wamlkit.bisim import PairRelation
from wamlkit.interp import (
    CounterexampleBundle,
    build_counterexample,
    verify_counterexample,
)
from wamlkit.model import load, restrict_valuation
from wamlkit.proof import binary_tag, tag_width
from wamlkit.semantics import valid_on_model
from wamlkit.syntax import letters, parse

from conftest import fixture


def test_arity_two_bundle_matches_fixtures():
    b = build_counterexample(2)
    assert b.left.model == load(fixture("m2.json").read_bytes())
    assert b.right.model == load(fixture("n2.json").read_bytes())
    assert b.phi == parse("box (~p | ~q) & dia q")
    assert b.psi == parse("box (p & r) & box (p & ~r)")
    assert b.z.pairs == {
        ("w", "v"),
        ("w1", "v1"),
        ("w2", "v2"),
        ("w3", "v1"),
        ("w3", "v2"),
    }
    assert b.z.alphabet == {"p"}


def test_arity_three_bundle_matches_fixtures():
    b = build_counterexample(3)
    assert b.left.model == load(fixture("m3.json").read_bytes())
    assert b.right.model == load(fixture("n3.json").read_bytes())
    assert b.phi == parse("box (p & ~q) & box (p & q) & dia (p | ~p)")
    assert b.psi == parse("box (~p & r) & box (~p & ~r) & dia (p | ~p)")
    assert b.z.pairs == {
        ("w", "v"),
        ("w1", "v3"),
        ("w2", "v3"),
        ("w3", "v1"),
        ("w3", "v2"),
    }


def test_binary_tags_for_arity_four():
    assert tag_width(4) == 2
    assert binary_tag(1, 2) == parse("~r1 & ~r2")
    assert binary_tag(2, 2) == parse("r1 & ~r2")
    assert binary_tag(3, 2) == parse("~r1 & r2")


def test_tags_pairwise_incompatible():
    for n in (4, 5, 6, 9):
        width = tag_width(n)
        tags = [binary_tag(i, width) for i in range(1, n)]
        assert len(set(tags)) == len(tags)
        for i, a in enumerate(tags):
            for b in tags[i + 1 :]:
                from wamlkit.semantics import bounded_sat
                from wamlkit.syntax import And

                assert bounded_sat(And(a, b), 1, 1) is None


def test_common_vocabulary_is_exactly_p():
    for n in range(2, 7):
        b = build_counterexample(n)
        assert letters(b.phi) & letters(b.psi) == {"p"}
        assert b.z.alphabet == {"p"}


def test_rejects_n_below_two():
    with pytest.raises(ValueError):
        build_counterexample(1)


@pytest.mark.parametrize("n,bound", [(2, 5), (3, 4), (4, 3), (5, 3), (6, 3)])
def test_verification_passes_for_all_arities(n, bound):
    report = verify_counterexample(build_counterexample(n), bound)
    assert report.models_satisfy.passed, report.models_satisfy.detail
    assert report.refutation_valid.passed, report.refutation_valid.detail
    assert report.roots_indistinguishable.passed, report.roots_indistinguishable.detail
    assert report.joint_sat_corroboration.passed
    assert report.passed


def test_mutated_bundle_fails_with_named_witness():
    b = build_counterexample(2)
    broken_left = restrict_valuation(b.left.model, set())  # drop every letter
    mutated = CounterexampleBundle(
        n=b.n,
        left=type(b.left)(broken_left, b.left.point),
        right=b.right,
        phi=b.phi,
        psi=b.psi,
        z=PairRelation(broken_left, b.right.model, b.z.pairs, b.z.alphabet),
        refutation=b.refutation,
    )
    report = verify_counterexample(mutated, 2)
    assert not report.passed
    assert not (
        report.models_satisfy.passed and report.roots_indistinguishable.passed
    )
    failing = (
        report.models_satisfy
        if not report.models_satisfy.passed
        else report.roots_indistinguishable
    )
    assert failing.detail  # names what went wrong


def test_mutated_relation_reports_distinguishing_formula():
    b = build_counterexample(2)
    # break invariance: relate a p-world to a letterless world
    pairs = b.z.pairs | {("w1", "v")}
    mutated = CounterexampleBundle(
        n=b.n,
        left=b.left,
        right=b.right,
        phi=b.phi,
        psi=b.psi,
        z=PairRelation(b.left.model, b.right.model, pairs, b.z.alphabet),
        refutation=b.refutation,
    )
    report = verify_counterexample(mutated, 2)
    assert not report.roots_indistinguishable.passed
    assert "fails inv" in report.roots_indistinguishable.detail


def test_transitivity_axiom_valid_on_fixture_models():
    # the reflexion-free frames here validate box p -> box box p, so the
    # counterexamples transfer to extensions with that axiom
    axiom = parse("box p -> box box p")
    for n in (2, 3):
        b = build_counterexample(n)
        assert valid_on_model(b.left.model, axiom)
        assert valid_on_model(b.right.model, axiom)


def test_report_note_mentions_soundness():
    report = verify_counterexample(build_counterexample(2), 2)
    assert "soundness" in report.note
