from fractions import Fraction

import pytest

from cutexplain import dioph, explain, library
from cutexplain.kernel import StepLimitExceeded, check, expand_range_enum
from cutexplain.kernel import proofs as P
from cutexplain.kernel.checker import range_hyp
from cutexplain.lang import Eq, IntLit, Mul, Var, parse_formula, parse_term

from oracles import centroid_oracle

F = parse_formula


def _double():
    chain = P.RewriteChain(F("x + x = 2 * x"), (
        P.RewriteStep("RingNormalize", (), parse_term("x + x"), parse_term("2 * x")),))
    return P.ForallIntro("x", chain)


def _digit_target(n):
    return Eq(Mul(IntLit(12345679), IntLit(9 * n)), IntLit(111111111 * n))


# ------------------------------------------------------------------ cuts


def test_displayed_cut_is_found_at_the_root():
    t = parse_term("y + 3")
    cuts = explain.detect_cuts(P.ForallElim(_double(), t))
    assert len(cuts) == 1
    tpl, inp, path = cuts[0]
    assert inp == t and path == ()
    assert tpl.statement == F("x + x = 2 * x") and tpl.param == "x"


def test_reduced_proof_has_no_cut():
    proof = P.ForallElim(_double(), IntLit(21))
    reduced = explain.reduce_all_cuts(proof)
    assert explain.detect_cuts(reduced) == []
    assert check(reduced, F("21 + 21 = 2 * 21")).accepted


def test_reduce_cut_needs_a_cut():
    with pytest.raises(ValueError):
        explain.reduce_cut(_double(), ())


def test_nested_cuts_outermost_first():
    inner = P.ForallElim(_double(), IntLit(2))
    outer = P.ForallElim(P.ForallIntro("z", inner), IntLit(9))
    paths = [path for _, _, path in explain.detect_cuts(outer)]
    assert paths == [(), ("universal", "body")]


# ---------------------------------------------------------- explanations


def _digit_explanation(n):
    lemmas = library.statements()
    goal, proof = library.digit_scaling_instance(4)
    tpl, _, _ = explain.detect_cuts(proof, lemmas)[0]
    return explain.Explanation(explain.TemplateProgram(tpl), IntLit(n)), lemmas


def test_template_explanation_runs():
    e, lemmas = _digit_explanation(4)
    proof, report = explain.run_explanation(e, _digit_target(4), lemmas=lemmas)
    assert check(proof, _digit_target(4), lemmas).accepted
    assert report.input_bytes == 1
    assert report.statement_bytes == len("12345679 * 36 = 444444444")
    assert report.ratio == Fraction(report.size, report.statement_bytes)
    assert report.passes_threshold is False
    assert explain.run_explanation(e, _digit_target(4), lemmas=lemmas)[1] == report


def test_wrong_instance_is_a_mismatch():
    e, lemmas = _digit_explanation(10)
    with pytest.raises(explain.ProofMismatch):
        explain.run_explanation(e, _digit_target(4), lemmas=lemmas)


def test_step_limit():
    e, lemmas = _digit_explanation(4)
    with pytest.raises(StepLimitExceeded):
        explain.run_explanation(e, _digit_target(4), step_limit=3, lemmas=lemmas)
    with pytest.raises(ValueError):
        explain.run_explanation(e, _digit_target(4), step_limit=0, lemmas=lemmas)


def test_trace_program():
    goal = F("7678 * 3706 = 28454668")
    e = explain.Explanation(explain.TraceProgram("multiply", 10), (IntLit(7678), IntLit(3706)))
    proof, report = explain.run_explanation(e, goal)
    assert isinstance(proof, P.ComputeLeaf)
    assert e.input_text() == "7678, 3706"
    assert report.run_steps > 0


def test_division_trace_program():
    goal = F("9 * 12345679 + 0 = 111111111 /\\ 0 < 9")
    e = explain.Explanation(explain.TraceProgram("divide"), (IntLit(111111111), IntLit(9)))
    proof, _ = explain.run_explanation(e, goal)
    assert check(proof, goal).accepted


def test_enumeration_program():
    body = F("x^2 < 1800")
    e = explain.Explanation(explain.EnumGenerator("x", 0, 42, body), IntLit(17))
    proof, report = explain.run_explanation(e, F("17^2 < 1800"))
    assert report.run_steps > 43


# -------------------------------------------------------- classification


def test_digit_scaling_cut_is_explanatory():
    lemmas = library.statements()
    _, proof = library.digit_scaling_instance(4)
    cat = explain.classify_proof(proof, 12, lemmas)
    assert isinstance(cat, explain.Explanatory)
    assert explain.classification_dict(proof, cat, lemmas)["category"] == "Explanatory"


def test_interval_proof_counts_two_cases():
    p = dioph.parse_poly("x^2 - 1800")
    cut = dioph.as_cut(dioph.prove_no_solution_interval(p), 42)
    assert explain.classify_proof(cut, 12) == explain.Explanatory(
        explain.classify_proof(cut, 12).cuts, 2)
    assert explain.classify_proof(cut, 2).k == 2
    assert explain.classify_proof(cut, 1) == explain.CaseAnalytic(2)


def test_enumerated_range_is_case_analytic():
    body = F("x^2 < 1800")
    enum = expand_range_enum(P.RangeEnum("x", IntLit(0), IntLit(42), body, "compute"))
    intro = P.ForallRangeIntro("x", IntLit(0), IntLit(42),
                               P.ForallElim(enum, Var("x"), P.HypRef("h")), "h")
    assert check(intro, F("forall x in [0, 42] . x^2 < 1800")).accepted
    assert range_hyp("x", IntLit(0), IntLit(42)) == F("0 <= x /\\ x <= 42")
    cut = P.ForallElim(intro, IntLit(5))
    assert explain.classify_proof(cut, 12) == explain.CaseAnalytic(43)


def test_proof_without_cut_is_opaque():
    assert explain.classify_proof(P.ComputeLeaf(F("42^2 = 1764"))) == explain.Opaque()


def test_case_count_follows_lemmas():
    assert explain.case_count(P.LemmaRef("geom_merge")) == 0
    assert explain.case_count(P.CaseSplit(P.HypRef("a"), P.HypRef("b"), P.HypRef("c"))) == 2


# -------------------------------------------------------------- ordering


def _report(size, steps, target="t"):
    return explain.ExplanationReport(target, size, 0, 10, steps)


def test_ordering():
    a, b = object(), object()
    one = [(a, _report(5, 5))]
    assert explain.order_explanations(one) == one
    twins = [(a, _report(5, 5)), (b, _report(5, 5))]
    assert explain.order_explanations(twins) == twins
    assert explain.pareto_front(twins) == twins
    mixed = [(a, _report(5, 5, "s")), (b, _report(5, 5, "t"))]
    with pytest.raises(ValueError):
        explain.order_explanations(mixed)


def test_interval_dominates_enumeration():
    p = dioph.parse_poly("x^2 - 1800")
    target = F("5^2 - 1800 != 0")
    items = []
    for mode in ("enum", "interval"):
        proof = dioph.prove(p, mode)
        tpl = explain.Template("x", dioph.statement(p).body, proof)
        e = explain.Explanation(explain.TemplateProgram(tpl), IntLit(5))
        items.append((mode, explain.run_explanation(e, target)[1]))
    (_, enum), (_, interval) = items
    assert explain.dominates(interval, enum)
    assert not explain.dominates(enum, interval)
    assert explain.order_explanations([(m, r) for m, r in items])[0][0] == "interval"


# ----------------------------------------------------------- existential


def test_bookshop():
    wm = explain.bookshop_map()
    e, witness, proof = explain.explain_existential(wm, IntLit(7))
    assert witness == IntLit(205)
    assert check(proof, F("205 = 101 \\/ 205 = 205 \\/ 205 = 150")).accepted
    produced, _ = explain.run_explanation(e, explain.existential_target(wm))
    assert isinstance(produced, P.ExistsIntro)


def test_bookshop_precondition():
    with pytest.raises(explain.PreconditionFalse):
        explain.explain_existential(explain.bookshop_map(), IntLit(5))


# --------------------------------------------------------------- centroid


def _data(rows):
    return explain.LabeledDataset(tuple(rows))


def test_dog_picture():
    data = explain.load_dataset()
    assert explain.centroid_label(data, (9, 9)) == "dog"
    assert centroid_oracle(data.points, (9, 9)) == "dog"


def test_single_point_classes():
    data = _data([((0, 0), "cat"), ((10, 10), "dog")])
    assert explain.centroid_label(data, (10, 10)) == "dog"
    assert explain.centroid_label(data, (0, 0)) == "cat"


def test_exact_tie():
    data = _data([((0, 0), "cat"), ((2, 0), "dog")])
    with pytest.raises(explain.Tie):
        explain.centroid_label(data, (1, 5))


def test_dataset_errors():
    with pytest.raises(ValueError):
        explain.centroid_label(_data([]), (1, 1))
    with pytest.raises(ValueError):
        explain.centroid_label(_data([((0, 0), "cat")]), (1, 1, 1))
    with pytest.raises(ValueError):
        _data([((0, 0), "cat"), ((0, 0, 0), "dog")])


@pytest.mark.parametrize("scale", [Fraction(1, 3), 2, 17])
def test_labels_are_scale_invariant(scale):
    data = explain.load_dataset()
    scaled = _data([(tuple(c * scale for c in v), lab) for v, lab in data.points])
    for q in [(1, 2), (6, 5), (9, 9), (Fraction(9, 2), 5)]:
        sq = tuple(Fraction(c) * scale for c in q)
        assert explain.centroid_label(scaled, sq) == explain.centroid_label(data, q)


def test_centroid_report():
    data = explain.load_dataset()
    label, e, report = explain.centroid_classify(data, (9, 9))
    assert label == "dog"
    assert report.target == "label((9, 9)) = dog"
    assert report.input_bytes > report.statement_bytes
    assert not report.passes_threshold
    _, _, generous = explain.centroid_classify(data, (9, 9), alpha=10 ** 6)
    assert generous.passes_threshold
