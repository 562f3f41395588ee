"""The trusted checker."""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Mapping, Optional

from ..lang import (Add, And, CaptureError, Eq, EvalError, ExistsNat, ForallNat,
                    ForallRange, Formula, Implies, IntLit, Le, LangError, Lt, Or,
                    Sub, Var, binders_along, eval_formula, eval_term, free_vars,
                    is_closed, is_range_only, is_term, replace_at, show, subst,
                    subterm)
from . import proofs as P
from .axioms import AxiomError, instantiate
from .ring import NormalizeError, Normalizer, as_const, scale, sub as psub
from .rewrite import RewriteError, apply_rewrite, explain_failure


class CheckFailure(Exception):
    def __init__(self, path, msg):
        super().__init__(msg)
        self.path = path
        self.msg = msg


class StepLimitExceeded(Exception):
    pass


@dataclass(frozen=True)
class CheckReport:
    accepted: bool
    steps: int
    failure: Optional[tuple] = None  # (path, message)
    conclusion: Optional[Formula] = None

    def __str__(self):
        if self.accepted:
            return f"accepted ({self.steps} steps): {show(self.conclusion)}"
        path, msg = self.failure
        return f"rejected at {path or '<root>'}: {msg}"


def fmt_path(path):
    return "/".join(path)


class Checker:
    """Derives the conclusion of a proof, counting steps.

    ``lemmas`` maps names to statements that were themselves checked; a
    LemmaRef concludes the named statement.
    """

    def __init__(self, lemmas: Mapping[str, Formula] | None = None,
                 step_limit: int | None = None):
        self.lemmas = dict(lemmas or {})
        self.step_limit = step_limit
        self.steps = 0

    def tick(self, n=1):
        self.steps += n
        if self.step_limit is not None and self.steps > self.step_limit:
            raise StepLimitExceeded(f"more than {self.step_limit} steps")

    # ---------------------------------------------------------------- api

    def infer(self, p, hyps=None, generics=frozenset(), path=()):
        return self._infer(p, dict(hyps or {}), frozenset(generics), path)

    def _infer(self, p, hyps, generics, path):
        self.tick()
        method = getattr(self, "_" + type(p).__name__, None)
        if method is None:
            raise CheckFailure(fmt_path(path), f"not a proof node: {type(p).__name__}")
        try:
            return method(p, hyps, generics, path)
        except (LangError, AxiomError, NormalizeError, RewriteError,
                IndexError) as e:
            raise CheckFailure(fmt_path(path), str(e)) from None

    def _sub(self, p, seg, hyps, generics, path):
        return self._infer(p, hyps, generics, path + (seg,))

    def _expect(self, got, want, path, what="conclusion"):
        if got != want:
            raise CheckFailure(fmt_path(path),
                               f"{what} is {show(got)}, expected {show(want)}")

    def _decide(self, f, path):
        if not is_closed(f):
            raise CheckFailure(fmt_path(path), f"cannot compute open formula {show(f)}")
        if not is_range_only(f):
            raise CheckFailure(fmt_path(path), f"unbounded quantifier in {show(f)}")
        self.tick()
        try:
            ok = eval_formula(f)
        except EvalError as e:
            raise CheckFailure(fmt_path(path), str(e)) from None
        if not ok:
            raise CheckFailure(fmt_path(path), f"{show(f)} evaluates to false")

    def _discharge(self, f, proof, seg, hyps, generics, path):
        if proof is None:
            self._decide(f, path + (seg,))
        else:
            self._expect(self._sub(proof, seg, hyps, generics, path), f,
                         path + (seg,))

    # -------------------------------------------------------------- leaves

    def _ComputeLeaf(self, p, hyps, generics, path):
        self._decide(p.goal, path)
        return p.goal

    def _AxiomRef(self, p, hyps, generics, path):
        return instantiate(p.name, p.inst)

    def _LemmaRef(self, p, hyps, generics, path):
        if p.name not in self.lemmas:
            raise CheckFailure(fmt_path(path), f"unknown lemma {p.name}")
        return self.lemmas[p.name]

    def _HypRef(self, p, hyps, generics, path):
        if p.label not in hyps:
            raise CheckFailure(fmt_path(path), f"no open hypothesis {p.label}")
        return hyps[p.label]

    # -------------------------------------------------------- quantifiers

    def _open_var(self, var, hyps, generics, path):
        if var in generics:
            raise CheckFailure(fmt_path(path), f"{var} shadows a generic variable")
        for label, h in hyps.items():
            if var in free_vars(h):
                raise CheckFailure(fmt_path(path),
                                   f"{var} is free in open hypothesis {label}")

    def _add_hyp(self, hyps, label, f, path):
        if label in hyps:
            raise CheckFailure(fmt_path(path), f"hypothesis label {label} reused")
        out = dict(hyps)
        out[label] = f
        return out

    def _ForallIntro(self, p, hyps, generics, path):
        self._open_var(p.var, hyps, generics, path)
        inner = hyps
        if p.label is not None:
            inner = self._add_hyp(hyps, p.label, Le(IntLit(0), Var(p.var)), path)
        body = self._sub(p.body, "body", inner, generics | {p.var}, path)
        return ForallNat(p.var, body)

    def _ForallRangeIntro(self, p, hyps, generics, path):
        self._open_var(p.var, hyps, generics, path)
        if p.var in free_vars(p.lo) | free_vars(p.hi):
            raise CheckFailure(fmt_path(path), "range bounds mention the bound variable")
        inner = hyps
        if p.label is not None:
            inner = self._add_hyp(hyps, p.label, range_hyp(p.var, p.lo, p.hi), path)
        body = self._sub(p.body, "body", inner, generics | {p.var}, path)
        return ForallRange(p.var, p.lo, p.hi, body)

    def _ForallElim(self, p, hyps, generics, path):
        u = self._sub(p.universal, "universal", hyps, generics, path)
        if isinstance(u, ForallNat):
            need = Le(IntLit(0), p.witness)
        elif isinstance(u, ForallRange):
            need = range_hyp_for(u.lo, u.hi, p.witness)
        else:
            raise CheckFailure(fmt_path(path), f"not a universal statement: {show(u)}")
        self._discharge(need, p.bound, "bound", hyps, generics, path)
        return subst(u.body, u.var, p.witness)

    def _ExistsIntro(self, p, hyps, generics, path):
        got = self._sub(p.proof, "proof", hyps, generics, path)
        self._expect(got, subst(p.body, p.var, p.witness), path + ("proof",))
        self._discharge(Le(IntLit(0), p.witness), p.bound, "bound", hyps, generics, path)
        return ExistsNat(p.var, p.body)

    def _RangeEnum(self, p, hyps, generics, path):
        if not (is_closed(p.lo) and is_closed(p.hi)):
            raise CheckFailure(fmt_path(path), "enumeration bounds must be closed")
        lo, hi = eval_term(p.lo), eval_term(p.hi)
        values = range(lo, hi + 1)
        if isinstance(p.cases, str):
            if p.cases != "compute":
                raise CheckFailure(fmt_path(path), f"unregistered generator {p.cases}")
            for v in values:
                self.tick()
                self._decide(subst(p.body, p.var, IntLit(v)), path + (f"case{v - lo}",))
        else:
            if len(p.cases) != len(values):
                raise CheckFailure(fmt_path(path),
                                   f"{len(p.cases)} cases for {len(values)} values")
            for v, case in zip(values, p.cases):
                self.tick()
                seg = f"case{v - lo}"
                got = self._sub(case, seg, hyps, generics, path)
                self._expect(got, subst(p.body, p.var, IntLit(v)), path + (seg,))
        return ForallRange(p.var, p.lo, p.hi, p.body)

    def _Induction(self, p, hyps, generics, path):
        base = self._sub(p.base, "base", hyps, generics, path)
        self._expect(base, subst(p.motive, p.var, IntLit(0)), path + ("base",))
        step = self._sub(p.step, "step", hyps, generics, path)
        succ = subst(p.motive, p.var, Add(Var(p.var), IntLit(1)))
        self._expect(step, ForallNat(p.var, Implies(p.motive, succ)), path + ("step",))
        return ForallNat(p.var, p.motive)

    # -------------------------------------------------------- connectives

    def _ImpIntro(self, p, hyps, generics, path):
        inner = self._add_hyp(hyps, p.label, p.hyp, path)
        return Implies(p.hyp, self._sub(p.body, "body", inner, generics, path))

    def _ImpElim(self, p, hyps, generics, path):
        imp = self._sub(p.imp, "imp", hyps, generics, path)
        if not isinstance(imp, Implies):
            raise CheckFailure(fmt_path(path), f"not an implication: {show(imp)}")
        arg = self._sub(p.arg, "arg", hyps, generics, path)
        self._expect(arg, imp.l, path + ("arg",))
        return imp.r

    def _AndIntro(self, p, hyps, generics, path):
        return And(self._sub(p.l, "l", hyps, generics, path),
                   self._sub(p.r, "r", hyps, generics, path))

    def _and(self, p, hyps, generics, path):
        f = self._sub(p.proof, "proof", hyps, generics, path)
        if not isinstance(f, And):
            raise CheckFailure(fmt_path(path), f"not a conjunction: {show(f)}")
        return f

    def _AndElimL(self, p, hyps, generics, path):
        return self._and(p, hyps, generics, path).l

    def _AndElimR(self, p, hyps, generics, path):
        return self._and(p, hyps, generics, path).r

    def _CaseSplit(self, p, hyps, generics, path):
        d = self._sub(p.disjunction, "disjunction", hyps, generics, path)
        if not isinstance(d, Or):
            raise CheckFailure(fmt_path(path), f"not a disjunction: {show(d)}")
        left = self._sub(p.left, "left", hyps, generics, path)
        right = self._sub(p.right, "right", hyps, generics, path)
        for f, want, seg in ((left, d.l, "left"), (right, d.r, "right")):
            if not isinstance(f, Implies):
                raise CheckFailure(fmt_path(path + (seg,)), "branch is not an implication")
            self._expect(f.l, want, path + (seg,), "branch hypothesis")
        self._expect(right.r, left.r, path + ("right",), "branch conclusion")
        return left.r

    # ----------------------------------------------------------- equality

    def _RewriteChain(self, p, hyps, generics, path):
        goal = p.goal
        if not isinstance(goal, Eq):
            raise CheckFailure(fmt_path(path), "rewrite chains prove equations")
        cur = goal.l
        for i, step in enumerate(p.steps):
            spath = path + (f"step{i}",)
            self.tick()
            if step.before != cur:
                raise CheckFailure(fmt_path(spath),
                                   f"step starts from {show(step.before)}, expected {show(cur)}")
            lemma_eq = None
            if step.rule == "Lemma":
                if not isinstance(step.arg, P.PROOF_TYPES):
                    raise CheckFailure(fmt_path(spath), "Lemma step needs a proof")
                lemma_eq = self._sub(step.arg, f"step{i}.arg", hyps, generics, path)
            elif isinstance(step.arg, P.PROOF_TYPES):
                raise CheckFailure(fmt_path(spath), f"{step.rule} takes no proof")
            try:
                ok, sides = apply_rewrite(step, lemma_eq)
            except (RewriteError, IndexError) as e:
                raise CheckFailure(fmt_path(spath), str(e)) from None
            if not ok:
                raise CheckFailure(fmt_path(spath),
                                   f"{step.rule}: {explain_failure(step, lemma_eq)}")
            given = Counter(sc.goal for sc in step.side)
            if given != Counter(sides):
                raise CheckFailure(fmt_path(spath), "side conditions "
                                   f"{[show(sc.goal) for sc in step.side]} do not "
                                   f"match required {[show(f) for f in sides]}")
            for j, sc in enumerate(step.side):
                self._discharge(sc.goal, sc.proof, f"step{i}.side{j}", hyps, generics, path)
            cur = step.after
        if cur != goal.r:
            raise CheckFailure(fmt_path(path),
                               f"chain ends at {show(cur)}, expected {show(goal.r)}")
        return goal

    def _EqSubst(self, p, hyps, generics, path):
        eq = self._sub(p.equality, "equality", hyps, generics, path)
        if not isinstance(eq, Eq):
            raise CheckFailure(fmt_path(path), f"not an equation: {show(eq)}")
        f = self._sub(p.target, "target", hyps, generics, path)
        at = subterm(f, p.position)
        if not is_term(at) or at != eq.l:
            raise CheckFailure(fmt_path(path),
                               f"no occurrence of {show(eq.l)} at {p.position}")
        if set(binders_along(f, p.position)) & (free_vars(eq.l) | free_vars(eq.r)):
            raise CheckFailure(fmt_path(path), "equation would be captured by a binder")
        return replace_at(f, p.position, eq.r)

    def _LinearComb(self, p, hyps, generics, path):
        g = p.goal
        if not isinstance(g, (Le, Lt)):
            raise CheckFailure(fmt_path(path), "linear combinations prove <= or <")
        norm = Normalizer(True)
        acc = norm.norm(Sub(g.r, g.l))
        for i, (q, c) in enumerate(p.premises):
            f = self._sub(q, f"premise{i}", hyps, generics, path)
            if isinstance(f, Eq):
                slack = norm.norm(Sub(f.r, f.l))
            elif isinstance(f, (Le, Lt)):
                if c < 0:
                    raise CheckFailure(fmt_path(path), "negative weight on an inequality")
                slack = norm.norm(Sub(f.r, f.l))
                if isinstance(f, Lt):
                    slack = psub(slack, norm.norm(IntLit(1)))
            else:
                raise CheckFailure(fmt_path(path + (f"premise{i}",)),
                                   f"not a comparison: {show(f)}")
            acc = psub(acc, scale(slack, c))
        rest = as_const(acc)
        need = 1 if isinstance(g, Lt) else 0
        if rest is None or rest < need:
            raise CheckFailure(fmt_path(path),
                               f"remainder {show(norm.to_term(acc))} is not a constant >= {need}")
        return g


def range_hyp(var, lo, hi):
    return range_hyp_for(lo, hi, Var(var))


def range_hyp_for(lo, hi, t):
    return And(Le(lo, t), Le(t, hi))


def check(p, goal: Formula, lemmas=None, step_limit=None) -> CheckReport:
    """Check ``p`` against ``goal``.  Rejection is reported, never raised,
    except that an explicit ``step_limit`` raises StepLimitExceeded."""
    c = Checker(lemmas, step_limit)
    try:
        got = c.infer(p)
    except CheckFailure as e:
        return CheckReport(False, c.steps, (e.path, e.msg))
    except (RecursionError, CaptureError) as e:
        return CheckReport(False, c.steps, ("", str(e)))
    if got != goal:
        return CheckReport(False, c.steps,
                           ("", f"proves {show(got)}, not {show(goal)}"), got)
    return CheckReport(True, c.steps, None, got)


def conclusion(p, lemmas=None, hyps=None, generics=()):
    """Conclusion of ``p``; raises CheckFailure if ``p`` is not a valid proof."""
    return Checker(lemmas).infer(p, hyps, generics)
