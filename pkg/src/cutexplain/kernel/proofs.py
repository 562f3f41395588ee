"""Proof objects.  Every node is an immutable dataclass; the checker gives
them meaning."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional, Union

from ..lang import Formula, Term, replace_at, subst, subterm
from .ring import NormalizeError, Normalizer, ac_shape


@dataclass(frozen=True)
class ComputeLeaf:
    goal: Formula


@dataclass(frozen=True)
class AxiomRef:
    name: str
    inst: tuple  # ((var, Term), ...)


@dataclass(frozen=True)
class LemmaRef:
    name: str


@dataclass(frozen=True)
class HypRef:
    label: str


@dataclass(frozen=True)
class ForallIntro:
    """Generic proof over the naturals; ``label`` names ``0 <= var``."""
    var: str
    body: "Proof"
    label: Optional[str] = None


@dataclass(frozen=True)
class ForallRangeIntro:
    """Generic proof over ``[lo, hi]``; ``label`` names ``lo <= var /\\ var <= hi``."""
    var: str
    lo: Term
    hi: Term
    body: "Proof"
    label: Optional[str] = None


@dataclass(frozen=True)
class ForallElim:
    """Instantiate a universal; ``bound`` proves the witness is in the domain
    (computed when omitted, which needs a closed witness)."""
    universal: "Proof"
    witness: Term
    bound: Optional["Proof"] = None


@dataclass(frozen=True)
class ExistsIntro:
    var: str
    body: Formula
    witness: Term
    proof: "Proof"
    bound: Optional["Proof"] = None


@dataclass(frozen=True)
class RangeEnum:
    """One case per value of ``var`` in ``[lo, hi]``; ``cases`` is a tuple of
    proofs or a generator name (``"compute"``)."""
    var: str
    lo: Term
    hi: Term
    body: Formula
    cases: Union[tuple, str]

    def count(self):
        from ..lang import eval_term
        return max(0, eval_term(self.hi) - eval_term(self.lo) + 1)


@dataclass(frozen=True)
class Induction:
    var: str
    motive: Formula
    base: "Proof"
    step: "Proof"


@dataclass(frozen=True)
class ImpIntro:
    label: str
    hyp: Formula
    body: "Proof"


@dataclass(frozen=True)
class ImpElim:
    imp: "Proof"
    arg: "Proof"


@dataclass(frozen=True)
class AndIntro:
    l: "Proof"
    r: "Proof"


@dataclass(frozen=True)
class AndElimL:
    proof: "Proof"


@dataclass(frozen=True)
class AndElimR:
    proof: "Proof"


@dataclass(frozen=True)
class CaseSplit:
    """From ``A \\/ B``, ``A => C`` and ``B => C`` conclude ``C``."""
    disjunction: "Proof"
    left: "Proof"
    right: "Proof"


@dataclass(frozen=True)
class SideCondition:
    goal: Formula
    proof: Optional["Proof"] = None  # None: decided by evaluation


@dataclass(frozen=True)
class RewriteStep:
    rule: str
    position: tuple
    before: Term
    after: Term
    side: tuple = ()
    arg: Optional[object] = None  # Term for IndexShift/Telescope, Proof for Lemma


@dataclass(frozen=True)
class RewriteChain:
    goal: Formula
    steps: tuple


@dataclass(frozen=True)
class EqSubst:
    equality: "Proof"
    target: "Proof"
    position: tuple


@dataclass(frozen=True)
class LinearComb:
    """Conclude ``goal`` (``l <= r`` or ``l < r``) when ``r - l`` minus the
    weighted slacks of the premises normalizes to a large enough constant."""
    goal: Formula
    premises: tuple = field(default=())  # ((Proof, int), ...)


Proof = Union[ComputeLeaf, AxiomRef, LemmaRef, HypRef, ForallIntro,
              ForallRangeIntro, ForallElim, ExistsIntro, RangeEnum, Induction,
              ImpIntro, ImpElim, AndIntro, AndElimL, AndElimR, CaseSplit,
              RewriteChain, EqSubst, LinearComb]


def subproofs(p):
    """Direct sub-proofs, with the path segment naming each."""
    if isinstance(p, (ForallIntro, ForallRangeIntro, ImpIntro)):
        return [("body", p.body)]
    if isinstance(p, ForallElim):
        out = [("universal", p.universal)]
        if p.bound is not None:
            out.append(("bound", p.bound))
        return out
    if isinstance(p, ExistsIntro):
        out = [("proof", p.proof)]
        if p.bound is not None:
            out.append(("bound", p.bound))
        return out
    if isinstance(p, RangeEnum):
        return [] if isinstance(p.cases, str) else \
            [(f"case{i}", c) for i, c in enumerate(p.cases)]
    if isinstance(p, Induction):
        return [("base", p.base), ("step", p.step)]
    if isinstance(p, ImpElim):
        return [("imp", p.imp), ("arg", p.arg)]
    if isinstance(p, AndIntro):
        return [("l", p.l), ("r", p.r)]
    if isinstance(p, (AndElimL, AndElimR)):
        return [("proof", p.proof)]
    if isinstance(p, CaseSplit):
        return [("disjunction", p.disjunction), ("left", p.left), ("right", p.right)]
    if isinstance(p, RewriteChain):
        out = []
        for i, s in enumerate(p.steps):
            if isinstance(s.arg, PROOF_TYPES):
                out.append((f"step{i}.arg", s.arg))
            for j, sc in enumerate(s.side):
                if sc.proof is not None:
                    out.append((f"step{i}.side{j}", sc.proof))
        return out
    if isinstance(p, EqSubst):
        return [("equality", p.equality), ("target", p.target)]
    if isinstance(p, LinearComb):
        return [(f"premise{i}", q) for i, (q, _) in enumerate(p.premises)]
    return []


def walk(p, path=()):
    """Pre-order traversal yielding ``(path, node)``."""
    yield path, p
    for seg, q in subproofs(p):
        yield from walk(q, path + (seg,))


def count_nodes(p, kind) -> int:
    return sum(1 for _, q in walk(p) if isinstance(q, kind))


PROOF_TYPES = Proof.__args__


# ------------------------------------------------------------ rebuilding


def _subst_step(s, var, t):
    arg = s.arg
    if isinstance(arg, PROOF_TYPES):
        arg = subst_proof(arg, var, t)
    elif arg is not None:
        arg = subst(arg, var, t)
    side = tuple(SideCondition(subst(sc.goal, var, t),
                               None if sc.proof is None else subst_proof(sc.proof, var, t))
                 for sc in s.side)
    return replace(s, before=subst(s.before, var, t), after=subst(s.after, var, t),
                   side=side, arg=arg)


def _renormalize(steps):
    """Substitution can leave a RingNormalize step with neither side in
    canonical form (constants fold, powers of literals merge).  Route such a
    step through the canonical form, retag it when only a rearrangement is
    left, and drop steps that became empty."""
    out = []
    for s in steps:
        if s.rule != "RingNormalize":
            out.append(s)
            continue
        b, a = subterm(s.before, s.position), subterm(s.after, s.position)
        if a == b:
            continue
        if ac_shape(a) == ac_shape(b):
            out.append(replace(s, rule="AssocComm"))
            continue
        try:
            nb, na = Normalizer(True), Normalizer(True)
            cb, ca = nb.to_term(nb.norm(b)), na.to_term(na.norm(a))
        except NormalizeError:
            out.append(s)
            continue
        if a == cb or b == ca or cb != ca:
            out.append(s)
            continue
        mid = replace_at(s.before, s.position, cb)
        if cb != b:
            out.append(replace(s, after=mid))
        out.append(replace(s, before=mid))
    return out


def subst_proof(p, var, t):
    """Replace the free variable ``var`` by ``t`` throughout a proof."""
    def go(q):
        return subst_proof(q, var, t)

    def f(x):
        return subst(x, var, t)

    if isinstance(p, ComputeLeaf):
        return ComputeLeaf(f(p.goal))
    if isinstance(p, AxiomRef):
        return AxiomRef(p.name, tuple((v, f(u)) for v, u in p.inst))
    if isinstance(p, (LemmaRef, HypRef)):
        return p
    if isinstance(p, ForallIntro):
        return p if p.var == var else replace(p, body=go(p.body))
    if isinstance(p, ForallRangeIntro):
        body = p.body if p.var == var else go(p.body)
        return replace(p, lo=f(p.lo), hi=f(p.hi), body=body)
    if isinstance(p, ForallElim):
        return ForallElim(go(p.universal), f(p.witness),
                          None if p.bound is None else go(p.bound))
    if isinstance(p, ExistsIntro):
        body = p.body if p.var == var else f(p.body)
        return ExistsIntro(p.var, body, f(p.witness), go(p.proof),
                           None if p.bound is None else go(p.bound))
    if isinstance(p, RangeEnum):
        body = p.body if p.var == var else f(p.body)
        cases = p.cases if isinstance(p.cases, str) else tuple(go(c) for c in p.cases)
        return RangeEnum(p.var, f(p.lo), f(p.hi), body, cases)
    if isinstance(p, Induction):
        motive = p.motive if p.var == var else f(p.motive)
        return Induction(p.var, motive, go(p.base), go(p.step))
    if isinstance(p, ImpIntro):
        return ImpIntro(p.label, f(p.hyp), go(p.body))
    if isinstance(p, RewriteChain):
        steps = [_subst_step(s, var, t) for s in p.steps]
        return RewriteChain(f(p.goal), tuple(_renormalize(steps)))
    if isinstance(p, EqSubst):
        return EqSubst(go(p.equality), go(p.target), p.position)
    if isinstance(p, LinearComb):
        return LinearComb(f(p.goal), tuple((go(q), c) for q, c in p.premises))
    return map_subproofs(p, go)


def map_subproofs(p, fn):
    """Rebuild ``p`` with ``fn`` applied to each direct sub-proof."""
    if isinstance(p, (ComputeLeaf, AxiomRef, LemmaRef, HypRef)):
        return p
    if isinstance(p, (ForallIntro, ForallRangeIntro, ImpIntro)):
        return replace(p, body=fn(p.body))
    if isinstance(p, ForallElim):
        return replace(p, universal=fn(p.universal),
                       bound=None if p.bound is None else fn(p.bound))
    if isinstance(p, ExistsIntro):
        return replace(p, proof=fn(p.proof),
                       bound=None if p.bound is None else fn(p.bound))
    if isinstance(p, RangeEnum):
        return p if isinstance(p.cases, str) else \
            replace(p, cases=tuple(fn(c) for c in p.cases))
    if isinstance(p, Induction):
        return replace(p, base=fn(p.base), step=fn(p.step))
    if isinstance(p, ImpElim):
        return ImpElim(fn(p.imp), fn(p.arg))
    if isinstance(p, AndIntro):
        return AndIntro(fn(p.l), fn(p.r))
    if isinstance(p, (AndElimL, AndElimR)):
        return type(p)(fn(p.proof))
    if isinstance(p, CaseSplit):
        return CaseSplit(fn(p.disjunction), fn(p.left), fn(p.right))
    if isinstance(p, RewriteChain):
        steps = []
        for s in p.steps:
            arg = fn(s.arg) if isinstance(s.arg, PROOF_TYPES) else s.arg
            side = tuple(SideCondition(sc.goal, None if sc.proof is None else fn(sc.proof))
                         for sc in s.side)
            steps.append(replace(s, arg=arg, side=side))
        return replace(p, steps=tuple(steps))
    if isinstance(p, EqSubst):
        return replace(p, equality=fn(p.equality), target=fn(p.target))
    if isinstance(p, LinearComb):
        return replace(p, premises=tuple((fn(q), c) for q, c in p.premises))
    raise TypeError(f"not a proof node: {type(p).__name__}")


def replace_hyp(p, label, q):
    """Discharge hypothesis ``label`` by the proof ``q``."""
    if isinstance(p, HypRef):
        return q if p.label == label else p
    if isinstance(p, ImpIntro) and p.label == label:
        return p
    if isinstance(p, (ForallIntro, ForallRangeIntro)) and p.label == label:
        return p
    return map_subproofs(p, lambda r: replace_hyp(r, label, q))


def subproof_at(p, path):
    for seg in path:
        p = dict(subproofs(p))[seg]
    return p


def replace_subproof(p, path, new):
    if not path:
        return new
    seg, rest = path[0], path[1:]
    segs = [name for name, _ in subproofs(p)]
    if seg not in segs:
        raise KeyError(f"no sub-proof {seg}")
    want = segs.index(seg)
    seen = iter(range(len(segs)))

    # map_subproofs visits children in the order subproofs lists them
    def fn(q):
        return replace_subproof(q, rest, new) if next(seen) == want else q

    return map_subproofs(p, fn)
