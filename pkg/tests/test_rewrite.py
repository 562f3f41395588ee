import pytest

from cutexplain.kernel import RewriteError, apply_rewrite, normalize_ring
from cutexplain.kernel.proofs import RewriteStep
from cutexplain.lang import IntLit, eval_formula, eval_term, parse_term


def step(rule, before, after, pos=(), arg=None):
    return RewriteStep(rule, pos, parse_term(before), parse_term(after), (), arg)


def test_distribute_first_expansion():
    ok, sides = apply_rewrite(step("Distribute", "(s + 1) * (b - 1)",
                                   "s * (b - 1) + 1 * (b - 1)"))
    assert ok and sides == []


def test_distribute_rejects_a_wrong_product():
    ok, _ = apply_rewrite(step("Distribute", "(s + 1) * (b - 1)", "s * (b - 1) + (b - 1)"))
    assert not ok


def test_index_shift_then_normalize():
    before = "sum(i, 0, b - 2, (b - 2 - i) * b^(i + 1))"
    shifted = "sum(i, 0 + 1, b - 2 + 1, (b - 2 - (i - 1)) * b^(i - 1 + 1))"
    ok, sides = apply_rewrite(step("IndexShift", before, shifted, arg=IntLit(1)))
    assert ok and sides == []
    target = parse_term("sum(i, 1, b - 1, (b - 1 - i) * b^i)")
    got = parse_term(shifted)
    # bounds and body are equal polynomials in b and i
    assert normalize_ring(got.lo) == normalize_ring(target.lo)
    assert normalize_ring(got.hi) == normalize_ring(target.hi)
    assert normalize_ring(got.body) == normalize_ring(target.body)
    for b in range(2, 13):
        env = {"b": b}
        assert eval_term(parse_term(before), env) == eval_term(target, env) \
            == eval_term(got, env)


def test_index_shift_needs_a_term():
    ok, _ = apply_rewrite(step("IndexShift", "sum(i, 0, 3, i)", "sum(i, 0 + 1, 3 + 1, i - 1)"))
    assert not ok


def test_telescope():
    f = parse_term("b^i")
    ok, sides = apply_rewrite(step("Telescope", "sum(i, a, m, b^(i + 1) - b^i)",
                                   "b^(m + 1) - b^a", arg=f))
    assert ok
    for a in range(0, 4):
        for m in range(a - 1, 6):
            env = {"a": a, "m": m, "b": 3}
            assert all(eval_formula(s, env) for s in sides)
            assert eval_term(parse_term("sum(i, a, m, b^(i + 1) - b^i)"), env) == \
                eval_term(parse_term("b^(m + 1) - b^a"), env)


def test_telescope_rejects_a_non_difference():
    ok, _ = apply_rewrite(step("Telescope", "sum(i, 0, m, b^i)", "b^(m + 1) - b^0",
                               arg=parse_term("b^i")))
    assert not ok


def test_split_last_carries_its_side_condition():
    ok, sides = apply_rewrite(step("SumSplitLast", "sum(i, 0, n, i)",
                                   "sum(i, 0, n - 1, i) + n"))
    assert ok
    assert len(sides) == 1 and eval_formula(sides[0], {"n": 0})
    assert not eval_formula(sides[0], {"n": -1})


def test_rules_are_directional():
    # Distribute read right to left is Factor, not Distribute
    ok, _ = apply_rewrite(step("Distribute", "s * (b - 1) + 1 * (b - 1)",
                               "(s + 1) * (b - 1)"))
    assert not ok
    ok, _ = apply_rewrite(step("Factor", "s * (b - 1) + 1 * (b - 1)", "(s + 1) * (b - 1)"))
    assert ok


def test_rewrite_inside_a_position():
    ok, _ = apply_rewrite(step("Evaluate", "x + 2 * 3", "x + 6", pos=(1,)))
    assert ok
    ok, _ = apply_rewrite(step("Evaluate", "x + 2 * 3", "y + 6", pos=(1,)))
    assert not ok


def test_side_conditions_cannot_mention_a_bound_index():
    ok, _ = apply_rewrite(step("SumSplitLast", "sum(k, 0, 3, sum(i, 0, k, i))",
                               "sum(k, 0, 3, sum(i, 0, k - 1, i) + k)", pos=(2,)))
    assert not ok


def test_position_out_of_range():
    with pytest.raises(IndexError):
        apply_rewrite(step("Evaluate", "x + 1", "x + 1", pos=(5,)))


def test_unknown_rule():
    with pytest.raises(RewriteError):
        apply_rewrite(step("Magic", "1", "2"))
