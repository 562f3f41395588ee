"""Construction of the shipped lemma proofs.

The proofs are assembled here and written to ``lemmas/*.sexp``; the
library itself only ever loads (and re-checks) those files.
"""

from __future__ import annotations

from pathlib import Path

from ..lang import (Add, Eq, IntLit, Mul, Pow, Sub, Sum, Var, parse_formula,
                    parse_term, replace_at, show, subst, subterm)
from ..kernel import proofs as P
from ..kernel.rewrite import RULES
from ..kernel.ring import Normalizer, ac_shape
from ..kernel.sexpr import dump_proof, pretty

STATEMENTS = {
    "repunit_core":
        "forall b . 2 <= b => "
        "(sum(i, 0, b - 2, (b - 2 - i) * b^i) + 1) * (b - 1) = sum(i, 0, b - 2, b^i)",
    "geom_merge":
        "forall x . forall m . 1 <= m => forall p . "
        "sum(i, 0, m - 1, x^i) * sum(j, 0, p - 1, x^(m * j)) = sum(k, 0, m * p - 1, x^k)",
    "repunit_general":
        "forall b . 2 <= b => forall p . 1 <= p => "
        "(sum(i, 0, b - 2, (b - 2 - i) * b^i) + 1) * sum(j, 0, p - 1, b^((b - 1) * j))"
        " * (b - 1) = sum(k, 0, (b - 1) * p - 1, b^k)",
    "digit_scaling":
        "forall n in [1, 9] . 12345679 * 9 * n = 111111111 * n",
    "division_invariant_core":
        "(forall n in [1, 7] . 10 * n + 1 = 9 * n + (n + 1) /\\ n + 1 < 9)"
        " /\\ 10 * 8 + 1 = 9 * 9 + 0",
}

ORDER = list(STATEMENTS)

TAGS = {
    "repunit_core": ("generic",),
    "geom_merge": ("generic", "induction"),
    "repunit_general": ("generic",),
    "digit_scaling": ("generic", "range"),
    "division_invariant_core": ("generic", "range"),
}

F = parse_formula
T = parse_term


def lin(goal, *premises):
    """Linear-arithmetic certificate; premises are proofs with weight 1
    unless given as ``(proof, weight)``."""
    prem = tuple(q if isinstance(q, tuple) else (q, 1) for q in premises)
    return P.LinearComb(F(goal) if isinstance(goal, str) else goal, prem)


class Chain:
    """Accumulates rewrite steps from a start term.

    ``sides`` maps a required side condition to its proof; conditions not
    in the map are left to evaluation.
    """

    def __init__(self, start, sides=None):
        self.start = start
        self.cur = start
        self.steps = []
        self.sides = sides or (lambda f: None)

    def step(self, rule, pos, new, arg=None, lemma_eq=None):
        new = T(new) if isinstance(new, str) else new
        arg = T(arg) if isinstance(arg, str) else arg
        before = subterm(self.cur, pos)
        need = RULES[rule](before, new, lemma_eq if rule == "Lemma" else arg)
        side = tuple(P.SideCondition(f, self.sides(f)) for f in need)
        after = replace_at(self.cur, pos, new)
        self.steps.append(P.RewriteStep(rule, tuple(pos), self.cur, after, side, arg))
        self.cur = after
        return self

    def lemma(self, pos, proof, eq):
        """Rewrite with a proved equation ``eq`` (the conclusion of ``proof``)."""
        before = subterm(self.cur, pos)
        if before != eq.l:
            raise ValueError("lemma does not match")
        after = replace_at(self.cur, pos, eq.r)
        self.steps.append(P.RewriteStep("Lemma", tuple(pos), self.cur, after, (), proof))
        self.cur = after
        return self

    def ring(self, pos, target):
        """Reach ``target`` by ring normalization, through the canonical form."""
        target = T(target) if isinstance(target, str) else target
        here = subterm(self.cur, pos)
        canon = Normalizer(True)
        canon = canon.to_term(canon.norm(here))
        for t in (canon, target):
            here = subterm(self.cur, pos)
            if here != t:
                rule = "AssocComm" if ac_shape(here) == ac_shape(t) else "RingNormalize"
                self.step(rule, pos, t)
        return self

    def done(self, goal=None):
        goal = goal if goal is not None else Eq(self.start, self.cur)
        if goal.l != self.start or goal.r != self.cur:
            raise ValueError("chain does not reach the goal")
        return P.RewriteChain(goal, tuple(self.steps))


def _sides(table):
    return lambda f: table.get(f)


def repunit_core():
    st = F(STATEMENTS["repunit_core"])
    hyp = st.body.l
    eq = st.body.r
    hb = P.HypRef("hb")
    g = T("(b - 1 - i) * b^i")
    shifted = subst(g, "i", T("i + 1"))
    c = Chain(eq.l, _sides({F("0 <= b - 2 + 1"): lin("0 <= b - 2 + 1", hb)}))
    c.step("Distribute", (), "sum(i, 0, b - 2, (b - 2 - i) * b^i) * (b - 1) + 1 * (b - 1)")
    c.step("SumLinearity", (0,), "sum(i, 0, b - 2, (b - 2 - i) * b^i * (b - 1))")
    diff = Sub(shifted, g)
    c.ring((0, 2), Add(diff, Pow(Var("b"), Var("i"))))
    c.step("SumLinearity", (0,), Add(Sum("i", T("0"), T("b - 2"), diff),
                                     T("sum(i, 0, b - 2, b^i)")))
    c.step("Telescope", (0, 0), Sub(subst(g, "i", T("b - 2 + 1")), subst(g, "i", T("0"))),
           arg=g)
    c.ring((), eq.r)
    body = P.ImpIntro("hb", hyp, c.done(eq))
    return st, P.ForallIntro("b", body)


def geom_merge():
    st = F(STATEMENTS["geom_merge"])
    hm_f = st.body.body.l
    motive = st.body.body.r.body
    hm, hp, ih = P.HypRef("hm"), P.HypRef("hp"), P.HypRef("ih")

    base_goal = subst(motive, "p", IntLit(0))
    c = Chain(base_goal.l, _sides({F("m * 0 - 1 < 0"): lin("m * 0 - 1 < 0")}))
    c.step("SumEmpty", (1,), "0")
    c.ring((), "0")
    c.step("SumEmpty", (), base_goal.r)
    base = c.done(base_goal)

    succ = subst(motive, "p", T("p + 1"))
    m_pos = lin("0 <= m", hm)
    mp_pos = P.ImpElim(P.ImpElim(
        P.AxiomRef("MulMonoLe", (("x", T("0")), ("y", T("p")), ("z", T("m")))), hp), m_pos)
    sides = {
        F("0 <= p + 1 - 1"): lin("0 <= p + 1 - 1", hp),
        F("0 <= m * p - 1 + 1"): lin("0 <= m * p - 1 + 1", mp_pos),
        F("m * p - 1 <= m - 1 + m * p"): lin("m * p - 1 <= m - 1 + m * p", hm),
    }
    c = Chain(succ.l, _sides(sides))
    c.step("SumSplitLast", (1,), "sum(j, 0, p + 1 - 1 - 1, x^(m * j)) + x^(m * (p + 1 - 1))")
    c.ring((1, 0, 1), "p - 1")
    c.step("Distribute", (), Add(Mul(c.cur.l, c.cur.r.l), Mul(c.cur.l, c.cur.r.r)))
    c.lemma((0,), ih, motive)
    c.step("SumLinearity", (1,), "sum(i, 0, m - 1, x^i * x^(m * (p + 1 - 1)))")
    c.ring((1, 2), "x^(i + m * p)")
    c.step("IndexShift", (1,), "sum(i, 0 + m * p, m - 1 + m * p, x^(i - m * p + m * p))",
           arg="m * p")
    c.ring((1, 2), "x^i")
    c.ring((1, 0), "m * p - 1 + 1")
    c.step("SumJoin", (), "sum(k, 0, m - 1 + m * p, x^k)")
    c.ring((1,), succ.r.hi)
    step = P.ForallIntro("p", P.ImpIntro("ih", motive, c.done(succ)), "hp")

    ind = P.Induction("p", motive, base, step)
    return st, P.ForallIntro("x", P.ForallIntro("m", P.ImpIntro("hm", hm_f, ind)))


def repunit_general(core, geom):
    st = F(STATEMENTS["repunit_general"])
    hb, hp = P.HypRef("hb"), P.HypRef("hp")
    eq = st.body.r.body.r
    core_eq = core.body.r
    core_inst = P.ImpElim(P.ForallElim(P.LemmaRef("repunit_core"), Var("b"),
                                       lin("0 <= b", hb)), hb)
    m = T("b - 1")
    geom_body = subst(subst(geom.body.body.r.body, "x", Var("b")), "m", m)
    geom_inst = P.ForallElim(
        P.ImpElim(
            P.ForallElim(P.ForallElim(P.LemmaRef("geom_merge"), Var("b"), lin("0 <= b", hb)),
                         m, lin("0 <= b - 1", hb)),
            lin("1 <= b - 1", hb)),
        Var("p"), lin("0 <= p", hp))
    c = Chain(eq.l)
    c.step("AssocComm", (), Mul(Mul(eq.l.l.l, eq.l.r), eq.l.l.r))
    c.lemma((0,), core_inst, core_eq)
    c.ring((0, 1), "b - 1 - 1")
    c.lemma((), geom_inst, geom_body)
    inner = P.ForallIntro("p", P.ImpIntro("hp", st.body.r.body.l, c.done(eq)))
    return st, P.ForallIntro("b", P.ImpIntro("hb", st.body.l, inner))


def core_at_ten():
    """Proof of ``12345679 * 9 = 111111111`` through the core lemma at b = 10."""
    core = F(STATEMENTS["repunit_core"])
    inst = subst(core.body.r, "b", IntLit(10))
    use = P.ImpElim(P.ForallElim(P.LemmaRef("repunit_core"), IntLit(10)),
                    P.ComputeLeaf(F("2 <= 10")))
    c = Chain(T("12345679 * 9"))
    c.step("Evaluate", (), inst.l)
    c.lemma((), use, inst)
    c.step("Evaluate", (), "111111111")
    return c.done()


def digit_scaling():
    st = F(STATEMENTS["digit_scaling"])
    lhs = st.body.l
    refl = P.AxiomRef("EqRefl", (("x", lhs),))
    body = P.EqSubst(core_at_ten(), refl, (1, 0))
    return st, P.ForallRangeIntro("n", st.lo, st.hi, body)


def division_invariant_core():
    st = F(STATEMENTS["division_invariant_core"])
    gen = st.l
    eq, bound = gen.body.l, gen.body.r
    c = Chain(eq.l)
    c.ring((), eq.r)
    body = P.AndIntro(c.done(eq), lin(bound, P.AndElimR(P.HypRef("hn"))))
    return st, P.AndIntro(P.ForallRangeIntro("n", gen.lo, gen.hi, body, "hn"),
                          P.ComputeLeaf(st.r))


def build_all():
    """``{name: (statement, proof)}`` in dependency order."""
    core = repunit_core()
    geom = geom_merge()
    return {
        "repunit_core": core,
        "geom_merge": geom,
        "repunit_general": repunit_general(core[0], geom[0]),
        "digit_scaling": digit_scaling(),
        "division_invariant_core": division_invariant_core(),
    }


def write_lemma_files(directory: Path):
    directory.mkdir(parents=True, exist_ok=True)
    for name, (st, proof) in build_all().items():
        text = f"; {name}\n; {show(st)}\n" + pretty(dump_proof(proof))
        (directory / f"{name}.sexp").write_text(text, encoding="utf-8")


if __name__ == "__main__":
    write_lemma_files(Path(__file__).with_name("lemmas"))
