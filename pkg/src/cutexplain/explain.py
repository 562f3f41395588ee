"""Explanations as (program, input) pairs.

A proof that instantiates a freshly proved universal statement (a
universal cut) carries an explanation: the generic proof is the program,
the instance is the input.  This module finds such cuts, runs the pairs
back into proofs, measures them, classifies proofs by how much case
analysis their general part needs, and orders competing explanations.
"""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources
from typing import Optional, Union

from .lang import (Add, And, Eq, ExistsNat, Formula, IntLit, Le, Lt, Mul, Term, Var,
                   eval_formula, eval_term, is_closed, is_range_only,
                   parse_formula, show, size_bytes, subst)
from .kernel import (CheckFailure, Checker, check, dump_proof,
                     expand_range_enum)
from .kernel import proofs as P
from .kernel.checker import range_hyp, range_hyp_for
from .numeral import long_divide_trace, long_multiply_trace

DEFAULT_ALPHA = Fraction(1)
DEFAULT_KMAX = 12
DEFAULT_STEP_LIMIT = 10 ** 7


class ProofMismatch(Exception):
    pass


class PreconditionFalse(Exception):
    pass


class Tie(Exception):
    pass


# ------------------------------------------------------------------ cuts


@dataclass(frozen=True)
class Template:
    """A generic proof ``proof`` of ``statement`` in the parameter ``param``.
    ``proof`` is the introduction node itself (nat or range)."""
    param: str
    statement: Formula
    proof: object = field(repr=False)

    @property
    def is_range(self):
        return isinstance(self.proof, P.ForallRangeIntro)


def _intro_hyps(p, hyps, generics):
    """Context seen by the direct sub-proofs of ``p``."""
    if isinstance(p, P.ImpIntro):
        return {**hyps, p.label: p.hyp}, generics
    if isinstance(p, P.ForallIntro):
        h = hyps if p.label is None else {**hyps, p.label: Le(IntLit(0), Var(p.var))}
        return h, generics | {p.var}
    if isinstance(p, P.ForallRangeIntro):
        h = hyps if p.label is None else {**hyps, p.label: range_hyp(p.var, p.lo, p.hi)}
        return h, generics | {p.var}
    return hyps, generics


def _is_cut(p):
    return isinstance(p, P.ForallElim) and \
        isinstance(p.universal, (P.ForallIntro, P.ForallRangeIntro))


def detect_cuts(p, lemmas=None):
    """Every ``ForallElim`` applied directly to an introduction, outermost
    first, as ``(Template, input, path)``."""
    out = []

    def visit(q, path, hyps, generics):
        if _is_cut(q):
            intro = q.universal
            try:
                general = Checker(lemmas).infer(intro, hyps, generics)
                statement = general.body
            except CheckFailure:
                statement = None
            out.append((Template(intro.var, statement, intro), q.witness, path))
        inner_h, inner_g = _intro_hyps(q, hyps, generics)
        for seg, sub in P.subproofs(q):
            visit(sub, path + (seg,), inner_h, inner_g)

    visit(p, (), {}, frozenset())
    return out


def instantiate(template: Template, witness: Term, bound=None):
    """The generic proof specialized to ``witness``, with no cut left:
    the parameter is substituted and its domain hypothesis discharged."""
    intro = template.proof
    body = P.subst_proof(intro.body, intro.var, witness)
    if intro.label is not None:
        if bound is None:
            if isinstance(intro, P.ForallIntro):
                need = Le(IntLit(0), witness)
            else:
                need = range_hyp_for(intro.lo, intro.hi, witness)
            bound = P.ComputeLeaf(need)
        body = P.replace_hyp(body, intro.label, bound)
    return body


def reduce_cut(p, path):
    """Replace the cut at ``path`` by its instantiated body."""
    cut = P.subproof_at(p, path)
    if not _is_cut(cut):
        raise ValueError("no cut at that path")
    tpl = Template(cut.universal.var, None, cut.universal)
    return P.replace_subproof(p, path, instantiate(tpl, cut.witness, cut.bound))


def reduce_all_cuts(p):
    while True:
        cuts = detect_cuts(p)
        if not cuts:
            return p
        p = reduce_cut(p, cuts[-1][2])


# -------------------------------------------------------------- programs


@dataclass(frozen=True)
class TemplateProgram:
    template: Template

    def text(self):
        return dump_proof(self.template.proof)

    def produce(self, inp):
        return P.ForallElim(self.template.proof, inp), 1


@dataclass(frozen=True)
class EnumGenerator:
    var: str
    lo: int
    hi: int
    body: Formula

    def text(self):
        return dump_proof(P.RangeEnum(self.var, IntLit(self.lo), IntLit(self.hi),
                                      self.body, "compute"))

    def produce(self, inp):
        enum = expand_range_enum(P.RangeEnum(self.var, IntLit(self.lo), IntLit(self.hi),
                                             self.body, "compute"))
        return P.ForallElim(enum, inp), len(enum.cases)


@dataclass(frozen=True)
class TraceProgram:
    kind: str  # multiply | divide
    base: int = 10

    def __post_init__(self):
        if self.kind not in ("multiply", "divide"):
            raise ValueError(f"unknown trace kind {self.kind!r}")

    def text(self):
        return f"(trace {self.kind} {self.base})"

    def produce(self, inp):
        x, y = (eval_term(t) for t in inp)
        if self.kind == "multiply":
            tr = long_multiply_trace(x, y, self.base)
            goal = Eq(Mul(IntLit(x), IntLit(y)), IntLit(tr.result.value))
            return P.ComputeLeaf(goal), len(tr.partial_rows)
        tr = long_divide_trace(x, y, self.base)
        goal = And(Eq(Add(Mul(IntLit(y), IntLit(tr.quotient)), IntLit(tr.remainder)),
                      IntLit(x)),
                   Lt(IntLit(tr.remainder), IntLit(y)))
        return P.ComputeLeaf(goal), len(tr.steps)


# registered witness maps: name -> function on closed terms
BOOKSHOP_ORDERS = {3: 101, 7: 205, 12: 150}


def _bookshop(t):
    return IntLit(BOOKSHOP_ORDERS[eval_term(t)])


WITNESS_FNS = {
    "bookshop": _bookshop,
    "identity": lambda t: t,
}


@dataclass(frozen=True)
class WitnessMap:
    """Maps an input satisfying ``input_predicate`` (in ``in_var``) to a
    witness satisfying ``output_predicate`` (in ``out_var``)."""
    name: str
    in_var: str
    input_predicate: Formula
    out_var: str
    output_predicate: Formula

    def __post_init__(self):
        if self.name not in WITNESS_FNS:
            raise ValueError(f"unregistered witness map {self.name!r}")

    def text(self):
        return (f"(witness-map {self.name} {self.in_var} \"{show(self.input_predicate)}\" "
                f"{self.out_var} \"{show(self.output_predicate)}\")")

    def produce(self, inp):
        pre = subst(self.input_predicate, self.in_var, inp)
        if not eval_formula(pre):
            raise PreconditionFalse(f"{show(pre)} does not hold")
        w = WITNESS_FNS[self.name](inp)
        leaf = P.ComputeLeaf(subst(self.output_predicate, self.out_var, w))
        return P.ExistsIntro(self.out_var, self.output_predicate, w, leaf), 1


@dataclass(frozen=True)
class CentroidProgram:
    """Label by the smallest mean squared distance to each class."""

    def text(self):
        return "(centroid-classifier mean-squared-distance)"


Program = Union[TemplateProgram, EnumGenerator, TraceProgram, WitnessMap, CentroidProgram]


@dataclass(frozen=True)
class Explanation:
    program: object
    input: object  # closed Term, or a tuple of them

    def input_text(self):
        if isinstance(self.input, tuple):
            return ", ".join(show(t) if not isinstance(t, str) else t for t in self.input)
        return self.input if isinstance(self.input, str) else show(self.input)


@dataclass(frozen=True)
class ExplanationReport:
    target: str
    program_bytes: int
    input_bytes: int
    statement_bytes: int
    run_steps: int
    alpha: Fraction = DEFAULT_ALPHA

    @property
    def size(self):
        return self.program_bytes + self.input_bytes

    @property
    def ratio(self) -> Fraction:
        return Fraction(self.size, self.statement_bytes)

    @property
    def passes_threshold(self) -> bool:
        return self.ratio <= self.alpha

    def as_dict(self):
        return {
            "program_bytes": self.program_bytes,
            "input_bytes": self.input_bytes,
            "statement_bytes": self.statement_bytes,
            "run_steps": self.run_steps,
            "ratio": str(self.ratio),
            "passes_threshold": self.passes_threshold,
            "alpha": str(self.alpha),
        }


def _bridge(raw_concl, raw, target):
    """Rewrite a closed instance into an arithmetically equal target."""
    from .library.build import Chain
    if not (isinstance(raw_concl, Eq) and isinstance(target, Eq)
            and is_closed(raw_concl) and is_closed(target)):
        return None
    try:
        if eval_term(raw_concl.l) != eval_term(target.l) or \
                eval_term(raw_concl.r) != eval_term(target.r):
            return None
    except Exception:
        return None
    c = Chain(target.l)
    if target.l != raw_concl.l:
        c.step("Evaluate", (), raw_concl.l)
    c.lemma((), raw, raw_concl)
    if raw_concl.r != target.r:
        c.step("Evaluate", (), target.r)
    return c.done(target)


def run_explanation(e: Explanation, target: Formula, step_limit=DEFAULT_STEP_LIMIT,
                    lemmas=None, alpha=DEFAULT_ALPHA):
    """Run the program on the input and check the result against ``target``.

    Returns ``(proof, report)``.  A result that proves something else
    raises ProofMismatch; running over ``step_limit`` raises
    StepLimitExceeded.
    """
    if step_limit < 1:
        raise ValueError("step limit must be at least 1")
    raw, produced = e.program.produce(e.input)
    checker = Checker(lemmas, step_limit)
    try:
        got = checker.infer(raw)
    except CheckFailure as err:
        raise ProofMismatch(f"program output does not check: {err.msg}") from None
    proof = raw
    if got != target:
        proof = _bridge(got, raw, target)
        if proof is None:
            raise ProofMismatch(f"program proves {show(got)}, not {show(target)}")
    report = check(proof, target, lemmas, step_limit)
    if not report.accepted:
        raise ProofMismatch(str(report))
    return proof, ExplanationReport(
        target=show(target),
        program_bytes=size_bytes(e.program.text()),
        input_bytes=size_bytes(e.input_text()),
        statement_bytes=size_bytes(target),
        run_steps=report.steps + produced,
        alpha=Fraction(alpha),
    )


# ------------------------------------------------------- classification


@dataclass(frozen=True)
class Explanatory:
    cuts: tuple  # ((Template, input), ...)
    k: int = 0
    name = "Explanatory"


@dataclass(frozen=True)
class CaseAnalytic:
    k: int
    name = "CaseAnalytic"


@dataclass(frozen=True)
class Opaque:
    k: Optional[int] = None
    name = "Opaque"


def case_count(p, lemma_proofs=None, _memo=None):
    """Largest number of cases any single step of ``p`` splits into
    (enumerations count their values, a case split counts 2), following
    lemma references into their proofs."""
    lemma_proofs = lemma_proofs if lemma_proofs is not None else _library_proofs()
    memo = _memo if _memo is not None else {}
    best = 0
    for _, q in P.walk(p):
        if isinstance(q, P.RangeEnum):
            best = max(best, q.count())
        elif isinstance(q, P.CaseSplit):
            best = max(best, 2)
        elif isinstance(q, P.LemmaRef) and q.name in lemma_proofs:
            if q.name not in memo:
                memo[q.name] = 0  # guards against cycles
                memo[q.name] = case_count(lemma_proofs[q.name], lemma_proofs, memo)
            best = max(best, memo[q.name])
    return best


def _library_proofs():
    from .library import load_library
    return {name: e.proof for name, e in load_library().items()}


def classify_proof(p, k_max=DEFAULT_KMAX, lemmas=None):
    cuts = detect_cuts(p, lemmas)
    if not cuts:
        return Opaque()
    proofs = _library_proofs()
    counted = [(case_count(tpl.proof, proofs), tpl, inp) for tpl, inp, _ in cuts]
    good = [(k, tpl, inp) for k, tpl, inp in counted if k <= k_max]
    if good:
        return Explanatory(tuple((tpl, inp) for _, tpl, inp in good),
                           min(k for k, _, _ in good))
    return CaseAnalytic(min(k for k, _, _ in counted))


def classification_dict(p, category, lemmas=None):
    return {
        "category": category.name,
        "k": category.k,
        "cuts": [{"input": show(inp), "path": "/".join(path)}
                 for _, inp, path in detect_cuts(p, lemmas)],
    }


# -------------------------------------------------------------- ordering


def dominates(a: ExplanationReport, b: ExplanationReport) -> bool:
    """No worse on size and steps, better on at least one."""
    return (a.size <= b.size and a.run_steps <= b.run_steps
            and (a.size < b.size or a.run_steps < b.run_steps))


def order_explanations(items):
    """Sort ``(Explanation, report)`` pairs best first: by size, then steps,
    then their given order.  Reports must share one target."""
    items = list(items)
    targets = {r.target for _, r in items}
    if len(targets) > 1:
        raise ValueError("explanations of different statements cannot be ordered")
    ranked = sorted(enumerate(items), key=lambda x: (x[1][1].size, x[1][1].run_steps, x[0]))
    return [it for _, it in ranked]


def pareto_front(items):
    items = list(items)
    return [it for it in items
            if not any(dominates(o[1], it[1]) for o in items if o is not it)]


# ------------------------------------------------------------- existential


def bookshop_map():
    orders = " \\/ ".join(f"x = {k}" for k in BOOKSHOP_ORDERS)
    books = " \\/ ".join(f"y = {v}" for v in BOOKSHOP_ORDERS.values())
    return WitnessMap("bookshop", "x", parse_formula(orders), "y", parse_formula(books))


def explain_existential(wm: WitnessMap, inp: Term):
    """Returns ``(Explanation, witness, proof of B[witness])``."""
    pre = subst(wm.input_predicate, wm.in_var, inp)
    if not is_range_only(pre) or not eval_formula(pre):
        raise PreconditionFalse(f"{show(pre)} does not hold")
    w = WITNESS_FNS[wm.name](inp)
    proof = P.ComputeLeaf(subst(wm.output_predicate, wm.out_var, w))
    return Explanation(wm, inp), w, proof


def existential_target(wm: WitnessMap):
    return ExistsNat(wm.out_var, wm.output_predicate)


# ---------------------------------------------------------------- centroid


@dataclass(frozen=True)
class LabeledDataset:
    points: tuple  # ((vector of Fractions, label), ...)

    def __post_init__(self):
        pts = tuple((tuple(Fraction(c) for c in v), str(lab)) for v, lab in self.points)
        object.__setattr__(self, "points", pts)
        dims = {len(v) for v, _ in pts}
        if len(dims) > 1:
            raise ValueError("points have different dimensions")

    @property
    def dim(self):
        return len(self.points[0][0]) if self.points else 0

    def labels(self):
        return sorted({lab for _, lab in self.points})

    def text(self):
        return "\n".join(",".join(str(c) for c in v) + "," + lab for v, lab in self.points)


def load_dataset(path=None) -> LabeledDataset:
    if path is None:
        path = resources.files(__package__) / "data" / "cats_dogs.csv"
    with open(path, newline="", encoding="utf-8") as fh:
        rows = [r for r in csv.reader(fh) if r and not r[0].startswith("#")]
    header, *body = rows
    return LabeledDataset(tuple((tuple(Fraction(c) for c in r[:-1]), r[-1]) for r in body))


def mean_sq_distances(data: LabeledDataset, point):
    point = tuple(Fraction(c) for c in point)
    if len(point) != data.dim:
        raise ValueError(f"query has dimension {len(point)}, data has {data.dim}")
    sums, counts = {}, {}
    for v, lab in data.points:
        d = sum((a - b) ** 2 for a, b in zip(v, point))
        sums[lab] = sums.get(lab, 0) + d
        counts[lab] = counts.get(lab, 0) + 1
    return {lab: Fraction(sums[lab], counts[lab]) for lab in sums}


def centroid_label(data: LabeledDataset, point):
    if not data.points:
        raise ValueError("empty dataset")
    dist = mean_sq_distances(data, point)
    best = min(dist.values())
    winners = sorted(lab for lab, d in dist.items() if d == best)
    if len(winners) > 1:
        raise Tie(f"labels {winners} are equally close")
    return winners[0]


def _point_text(point):
    return "(" + ", ".join(str(Fraction(c)) for c in point) + ")"


def centroid_classify(data: LabeledDataset, point, alpha=DEFAULT_ALPHA):
    """``(label, Explanation, report)``; the explanation's input is the whole
    dataset together with the query."""
    label = centroid_label(data, point)
    statement = f"label({_point_text(point)}) = {label}"
    inp = data.text() + "\n" + _point_text(point)
    e = Explanation(CentroidProgram(), inp)
    report = ExplanationReport(
        target=statement,
        program_bytes=size_bytes(e.program.text()),
        input_bytes=size_bytes(inp),
        statement_bytes=size_bytes(statement),
        run_steps=len(data.points),
        alpha=Fraction(alpha),
    )
    return label, e, report
