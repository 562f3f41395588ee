"""Rewrite rules for the sum algebra.

Each rule decides whether the subterm ``after`` may replace ``before`` and
returns the side conditions that must then be discharged.  Rules match on
exact structure; only RingNormalize (and the body test of Telescope) goes
through the normalizer.
"""

from __future__ import annotations

from ..lang import (Add, Eq, IntLit, Le, Lt, Mul, Pow, Sub, Sum, Var,
                    binders_along, eval_term, free_vars, is_closed, is_term,
                    replace_at, show, subst, subterm, EvalError, CaptureError)
from .ring import Normalizer, NormalizeError, ac_shape, normal_form
from .proofs import RewriteStep


class RewriteError(Exception):
    pass


ONE = IntLit(1)


def _fail(msg):
    raise RewriteError(msg)


def _distribute(b, a):
    out = []
    if isinstance(b, Mul):
        if isinstance(b.r, (Add, Sub)):
            out.append(type(b.r)(Mul(b.l, b.r.l), Mul(b.l, b.r.r)))
        if isinstance(b.l, (Add, Sub)):
            out.append(type(b.l)(Mul(b.l.l, b.r), Mul(b.l.r, b.r)))
    return a in out


def rule_distribute(b, a, arg):
    if not _distribute(b, a):
        _fail("not a distribution of a product over a sum")
    return []


def rule_factor(b, a, arg):
    if not _distribute(a, b):
        _fail("not a factorization")
    return []


def _linear_forms(x):
    if not isinstance(x, Sum):
        return []
    i, lo, hi, f = x.index, x.lo, x.hi, x.body
    out = []
    if isinstance(f, (Add, Sub)):
        out.append(type(f)(Sum(i, lo, hi, f.l), Sum(i, lo, hi, f.r)))
    if isinstance(f, Mul):
        if i not in free_vars(f.l):
            out.append(Mul(f.l, Sum(i, lo, hi, f.r)))
        if i not in free_vars(f.r):
            out.append(Mul(Sum(i, lo, hi, f.l), f.r))
    return out


def rule_sum_linearity(b, a, arg):
    if a in _linear_forms(b) or b in _linear_forms(a):
        return []
    _fail("not an instance of sum linearity")


def _need_sum(x):
    if not isinstance(x, Sum):
        _fail(f"expected a sum, found {show(x)}")
    return x


def rule_split_last(b, a, arg):
    s = _need_sum(b)
    want = Add(Sum(s.index, s.lo, Sub(s.hi, ONE), s.body), subst(s.body, s.index, s.hi))
    if a != want:
        _fail("result is not the sum without its last term plus that term")
    return [Le(s.lo, s.hi)]


def rule_split_first(b, a, arg):
    s = _need_sum(b)
    want = Add(subst(s.body, s.index, s.lo), Sum(s.index, Add(s.lo, ONE), s.hi, s.body))
    if a != want:
        _fail("result is not the first term plus the remaining sum")
    return [Le(s.lo, s.hi)]


def rule_index_shift(b, a, arg):
    s = _need_sum(b)
    if not is_term(arg):
        _fail("IndexShift needs a shift term")
    if s.index in free_vars(arg):
        _fail("shift mentions the summation index")
    want = Sum(s.index, Add(s.lo, arg), Add(s.hi, arg),
               subst(s.body, s.index, Sub(Var(s.index), arg)))
    if a != want:
        _fail("result is not the shifted sum")
    return []


def rule_telescope(b, a, arg):
    s = _need_sum(b)
    if not is_term(arg):
        _fail("Telescope needs the telescoped function as argument")
    i = s.index
    diff = Sub(subst(arg, i, Add(Var(i), ONE)), arg)
    try:
        ok = normal_form(s.body, True) == normal_form(diff, True)
    except NormalizeError as e:
        _fail(f"body not comparable: {e}")
    if not ok:
        _fail("body is not a difference f(i + 1) - f(i)")
    want = Sub(subst(arg, i, Add(s.hi, ONE)), subst(arg, i, s.lo))
    if a != want:
        _fail("result is not f(hi + 1) - f(lo)")
    return [Le(s.lo, Add(s.hi, ONE))]


def rule_sum_empty(b, a, arg):
    s, z = (b, a) if isinstance(b, Sum) else (a, b)
    if not isinstance(s, Sum) or z != IntLit(0):
        _fail("SumEmpty relates a sum and 0")
    return [Lt(s.hi, s.lo)]


def rule_sum_join(b, a, arg):
    if not (isinstance(b, Add) and isinstance(b.l, Sum) and isinstance(b.r, Sum)):
        _fail("SumJoin needs a sum of two sums")
    s1, s2 = b.l, b.r
    if s2.lo != Add(s1.hi, ONE):
        _fail("second sum must start right after the first")
    if s1.index != s2.index and s1.index in free_vars(s2.body):
        _fail("index clash between the joined sums")
    if subst(s2.body, s2.index, Var(s1.index)) != s1.body:
        _fail("joined sums have different bodies")
    if a != Sum(s1.index, s1.lo, s2.hi, s1.body):
        _fail("result is not the joined sum")
    return [Le(s1.lo, Add(s1.hi, ONE)), Le(s1.hi, s2.hi)]


def rule_pow_add_exp(b, a, arg):
    for p, m in ((b, a), (a, b)):
        if isinstance(p, Pow) and isinstance(p.exp, Add):
            if m == Mul(Pow(p.base, p.exp.l), Pow(p.base, p.exp.r)):
                return [Le(IntLit(0), p.exp.l), Le(IntLit(0), p.exp.r)]
    _fail("not x^(a + b) = x^a * x^b")


def rule_evaluate(b, a, arg):
    if not (is_closed(b) and is_closed(a)):
        _fail("Evaluate needs closed terms")
    if a == b:
        _fail("empty step")
    try:
        if eval_term(b) != eval_term(a):
            _fail("values differ")
    except EvalError as e:
        _fail(str(e))
    return []


def rule_ring_normalize(b, a, arg):
    if a == b:
        _fail("empty step")
    if ac_shape(a) == ac_shape(b):
        _fail("a rearrangement of the same sum or product is an AssocComm step")
    try:
        nb, na = Normalizer(True), Normalizer(True)
        pb, pa = nb.norm(b), na.norm(a)
    except NormalizeError as e:
        _fail(str(e))
    if pb != pa:
        _fail("sides are not equal as polynomials")
    # one side must be the canonical form of the other, which keeps the rule
    # from standing in for Distribute, AssocComm and the like
    if a != nb.to_term(pb) and b != na.to_term(pa):
        _fail("neither side is in canonical form")
    return []


def rule_assoc_comm(b, a, arg):
    if a == b or ac_shape(a) != ac_shape(b):
        _fail("not a rearrangement of the same sum or product")
    return []


def rule_lemma(b, a, arg):
    if not isinstance(arg, Eq):
        _fail("Lemma needs a proved equation")
    if b != arg.l or a != arg.r:
        _fail(f"equation {show(arg)} does not rewrite {show(b)} to {show(a)}")
    return []


RULES = {
    "Distribute": rule_distribute,
    "Factor": rule_factor,
    "SumLinearity": rule_sum_linearity,
    "SumSplitLast": rule_split_last,
    "SumSplitFirst": rule_split_first,
    "SumJoin": rule_sum_join,
    "SumEmpty": rule_sum_empty,
    "IndexShift": rule_index_shift,
    "Telescope": rule_telescope,
    "PowAddExp": rule_pow_add_exp,
    "Evaluate": rule_evaluate,
    "RingNormalize": rule_ring_normalize,
    "AssocComm": rule_assoc_comm,
    "Lemma": rule_lemma,
}


def apply_rewrite(step: RewriteStep, lemma_eq=None):
    """Check one step in isolation.

    Returns ``(ok, side_conditions)``; for Lemma steps the proved equation
    is passed as ``lemma_eq``.  Unknown rules and bad positions raise.
    """
    if step.rule not in RULES:
        raise RewriteError(f"unknown rule {step.rule}")
    b = subterm(step.before, step.position)
    a = subterm(step.after, step.position)
    if not (is_term(b) and is_term(a)):
        raise RewriteError("position does not point at a term")
    try:
        if replace_at(step.before, step.position, a) != step.after:
            return False, []
        arg = lemma_eq if step.rule == "Lemma" else step.arg
        sides = RULES[step.rule](b, a, arg)
    except (RewriteError, CaptureError):
        return False, []
    bound = set(binders_along(step.before, step.position))
    for f in sides:
        if free_vars(f) & bound:
            return False, []
    if step.rule == "Lemma" and free_vars(lemma_eq) & bound:
        return False, []
    return True, sides


def explain_failure(step: RewriteStep, lemma_eq=None) -> str:
    try:
        b = subterm(step.before, step.position)
        a = subterm(step.after, step.position)
        if replace_at(step.before, step.position, a) != step.after:
            return "terms differ outside the rewritten position"
        arg = lemma_eq if step.rule == "Lemma" else step.arg
        RULES[step.rule](b, a, arg)
    except (RewriteError, CaptureError, IndexError, KeyError) as e:
        return str(e)
    return "side condition mentions a bound index"
