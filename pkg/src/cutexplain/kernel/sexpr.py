"""Text format for proofs: one parenthesized form per node.

Terms and formulas are embedded as double-quoted strings in the statement
syntax, e.g. ``(forall-elim (forall-intro n - (compute "0 <= 1")) "4")``.
Node tags::

    compute axiom lemma hyp forall-intro forall-range-intro forall-elim
    exists-intro range-enum induction imp-intro imp-elim and-intro
    and-elim-l and-elim-r case-split rewrite step eq-subst lin-comb
"""

from __future__ import annotations

import re

from ..lang import parse_formula, parse_term, show
from . import proofs as P


class SexpError(Exception):
    pass


_TOK = re.compile(r'\s+|;[^\n]*|(\()|(\))|"([^"]*)"|([^\s()"]+)')


class Str(str):
    """A quoted string, as opposed to a bare symbol."""


def read_sexp(text):
    stack = [[]]
    pos = 0
    while pos < len(text):
        m = _TOK.match(text, pos)
        if not m:
            raise SexpError(f"bad character at offset {pos}")
        pos = m.end()
        if m.group(1):
            stack.append([])
        elif m.group(2):
            if len(stack) == 1:
                raise SexpError(f"unbalanced ')' at offset {m.start()}")
            done = stack.pop()
            stack[-1].append(done)
        elif m.group(3) is not None:
            stack[-1].append(Str(m.group(3)))
        elif m.group(4):
            stack[-1].append(m.group(4))
    if len(stack) != 1:
        raise SexpError("unbalanced '('")
    return stack[0]


# ------------------------------------------------------------------ dump


def _q(x):
    return f'"{show(x)}"'


def _label(x):
    return "-" if x is None else x


def _dump(p):
    if isinstance(p, P.ComputeLeaf):
        return f"(compute {_q(p.goal)})"
    if isinstance(p, P.AxiomRef):
        inst = " ".join(f"({v} {_q(t)})" for v, t in p.inst)
        return f"(axiom {p.name} {inst})" if inst else f"(axiom {p.name})"
    if isinstance(p, P.LemmaRef):
        return f"(lemma {p.name})"
    if isinstance(p, P.HypRef):
        return f"(hyp {p.label})"
    if isinstance(p, P.ForallIntro):
        return f"(forall-intro {p.var} {_label(p.label)} {_dump(p.body)})"
    if isinstance(p, P.ForallRangeIntro):
        return (f"(forall-range-intro {p.var} {_q(p.lo)} {_q(p.hi)} "
                f"{_label(p.label)} {_dump(p.body)})")
    if isinstance(p, P.ForallElim):
        tail = "" if p.bound is None else " " + _dump(p.bound)
        return f"(forall-elim {_dump(p.universal)} {_q(p.witness)}{tail})"
    if isinstance(p, P.ExistsIntro):
        tail = "" if p.bound is None else " " + _dump(p.bound)
        return (f"(exists-intro {p.var} {_q(p.body)} {_q(p.witness)} "
                f"{_dump(p.proof)}{tail})")
    if isinstance(p, P.RangeEnum):
        if isinstance(p.cases, str):
            cases = p.cases
        else:
            cases = "(cases" + "".join(" " + _dump(c) for c in p.cases) + ")"
        return f"(range-enum {p.var} {_q(p.lo)} {_q(p.hi)} {_q(p.body)} {cases})"
    if isinstance(p, P.Induction):
        return (f"(induction {p.var} {_q(p.motive)} {_dump(p.base)} "
                f"{_dump(p.step)})")
    if isinstance(p, P.ImpIntro):
        return f"(imp-intro {p.label} {_q(p.hyp)} {_dump(p.body)})"
    if isinstance(p, P.ImpElim):
        return f"(imp-elim {_dump(p.imp)} {_dump(p.arg)})"
    if isinstance(p, P.AndIntro):
        return f"(and-intro {_dump(p.l)} {_dump(p.r)})"
    if isinstance(p, P.AndElimL):
        return f"(and-elim-l {_dump(p.proof)})"
    if isinstance(p, P.AndElimR):
        return f"(and-elim-r {_dump(p.proof)})"
    if isinstance(p, P.CaseSplit):
        return (f"(case-split {_dump(p.disjunction)} {_dump(p.left)} "
                f"{_dump(p.right)})")
    if isinstance(p, P.RewriteChain):
        steps = "".join(" " + _dump_step(s) for s in p.steps)
        return f"(rewrite {_q(p.goal)}{steps})"
    if isinstance(p, P.EqSubst):
        return (f"(eq-subst {_dump(p.equality)} {_dump(p.target)} "
                f"{_at(p.position)})")
    if isinstance(p, P.LinearComb):
        prem = "".join(f" (premise {c} {_dump(q)})" for q, c in p.premises)
        return f"(lin-comb {_q(p.goal)}{prem})"
    raise SexpError(f"cannot serialize {type(p).__name__}")


def _at(pos):
    return "(at" + "".join(f" {i}" for i in pos) + ")"


def _dump_step(s):
    parts = [f"(step {s.rule} {_at(s.position)} {_q(s.before)} {_q(s.after)}"]
    if s.arg is not None:
        inner = _dump(s.arg) if isinstance(s.arg, P.PROOF_TYPES) else _q(s.arg)
        parts.append(f"(arg {inner})")
    for sc in s.side:
        tail = "" if sc.proof is None else " " + _dump(sc.proof)
        parts.append(f"(side {_q(sc.goal)}{tail})")
    return " ".join(parts) + ")"


def dump_proof(p) -> str:
    """Canonical one-line serialization (this is what sizes are measured on)."""
    return _dump(p)


def pretty(text: str, width: int = 100) -> str:
    """Indent a serialized proof for reading; ``read`` accepts either form."""
    def fmt(x, ind):
        flat = _flat(x)
        if len(flat) + ind <= width or not isinstance(x, list):
            return " " * ind + flat
        head = []
        rest = list(x)
        while rest and not isinstance(rest[0], list):
            head.append(_flat(rest.pop(0)))
        lines = [" " * ind + "(" + " ".join(head)]
        for y in rest:
            lines.append(fmt(y, ind + 2))
        lines[-1] += ")"
        return "\n".join(lines)

    return "\n".join(fmt(x, 0) for x in read_sexp(text)) + "\n"


def _flat(x):
    if isinstance(x, list):
        return "(" + " ".join(_flat(y) for y in x) + ")"
    if isinstance(x, Str):
        return f'"{x}"'
    return x


# ------------------------------------------------------------------ load


def _sym(x):
    if not isinstance(x, str) or isinstance(x, Str):
        raise SexpError(f"expected a symbol, found {x!r}")
    return x


def _str(x):
    if not isinstance(x, Str):
        raise SexpError(f"expected a quoted string, found {x!r}")
    return x


def _F(x):
    return parse_formula(_str(x))


def _T(x):
    return parse_term(_str(x))


def _opt_label(x):
    x = _sym(x)
    return None if x == "-" else x


def _n(x, k, tag):
    if len(x) != k:
        raise SexpError(f"{tag} takes {k - 1} arguments, got {len(x) - 1}")


def _load(x):
    if not isinstance(x, list) or not x:
        raise SexpError(f"expected a proof form, found {x!r}")
    tag, args = _sym(x[0]), x[1:]
    if tag == "compute":
        _n(x, 2, tag)
        return P.ComputeLeaf(_F(args[0]))
    if tag == "axiom":
        inst = []
        for pair in args[1:]:
            if not isinstance(pair, list) or len(pair) != 2:
                raise SexpError("axiom instantiation is (var \"term\")")
            inst.append((_sym(pair[0]), _T(pair[1])))
        return P.AxiomRef(_sym(args[0]), tuple(inst))
    if tag == "lemma":
        _n(x, 2, tag)
        return P.LemmaRef(_sym(args[0]))
    if tag == "hyp":
        _n(x, 2, tag)
        return P.HypRef(_sym(args[0]))
    if tag == "forall-intro":
        _n(x, 4, tag)
        return P.ForallIntro(_sym(args[0]), _load(args[2]), _opt_label(args[1]))
    if tag == "forall-range-intro":
        _n(x, 6, tag)
        return P.ForallRangeIntro(_sym(args[0]), _T(args[1]), _T(args[2]),
                                  _load(args[4]), _opt_label(args[3]))
    if tag == "forall-elim":
        if len(args) not in (2, 3):
            raise SexpError("forall-elim takes a proof, a witness and an optional bound")
        bound = _load(args[2]) if len(args) == 3 else None
        return P.ForallElim(_load(args[0]), _T(args[1]), bound)
    if tag == "exists-intro":
        if len(args) not in (4, 5):
            raise SexpError("exists-intro takes 4 or 5 arguments")
        bound = _load(args[4]) if len(args) == 5 else None
        return P.ExistsIntro(_sym(args[0]), _F(args[1]), _T(args[2]),
                             _load(args[3]), bound)
    if tag == "range-enum":
        _n(x, 6, tag)
        c = args[4]
        if isinstance(c, list):
            if not c or c[0] != "cases":
                raise SexpError("range-enum cases are (cases ...)")
            cases = tuple(_load(y) for y in c[1:])
        else:
            cases = _sym(c)
        return P.RangeEnum(_sym(args[0]), _T(args[1]), _T(args[2]), _F(args[3]), cases)
    if tag == "induction":
        _n(x, 5, tag)
        return P.Induction(_sym(args[0]), _F(args[1]), _load(args[2]), _load(args[3]))
    if tag == "imp-intro":
        _n(x, 4, tag)
        return P.ImpIntro(_sym(args[0]), _F(args[1]), _load(args[2]))
    if tag == "imp-elim":
        _n(x, 3, tag)
        return P.ImpElim(_load(args[0]), _load(args[1]))
    if tag == "and-intro":
        _n(x, 3, tag)
        return P.AndIntro(_load(args[0]), _load(args[1]))
    if tag == "and-elim-l":
        _n(x, 2, tag)
        return P.AndElimL(_load(args[0]))
    if tag == "and-elim-r":
        _n(x, 2, tag)
        return P.AndElimR(_load(args[0]))
    if tag == "case-split":
        _n(x, 4, tag)
        return P.CaseSplit(_load(args[0]), _load(args[1]), _load(args[2]))
    if tag == "rewrite":
        return P.RewriteChain(_F(args[0]), tuple(_load_step(s) for s in args[1:]))
    if tag == "eq-subst":
        _n(x, 4, tag)
        return P.EqSubst(_load(args[0]), _load(args[1]), _load_at(args[2]))
    if tag == "lin-comb":
        prem = []
        for y in args[1:]:
            if not isinstance(y, list) or len(y) != 3 or y[0] != "premise":
                raise SexpError("lin-comb premises are (premise weight proof)")
            prem.append((_load(y[2]), int(_sym(y[1]))))
        return P.LinearComb(_F(args[0]), tuple(prem))
    raise SexpError(f"unknown proof tag {tag!r}")


def _load_at(x):
    if not isinstance(x, list) or not x or x[0] != "at":
        raise SexpError("positions are (at i j ...)")
    return tuple(int(_sym(i)) for i in x[1:])


def _load_step(x):
    if not isinstance(x, list) or len(x) < 5 or x[0] != "step":
        raise SexpError("rewrite steps are (step Rule (at ...) \"before\" \"after\" ...)")
    rule, pos, before, after = _sym(x[1]), _load_at(x[2]), _T(x[3]), _T(x[4])
    arg, side = None, []
    for y in x[5:]:
        if not isinstance(y, list) or not y:
            raise SexpError("bad step attribute")
        if y[0] == "arg":
            _n(y, 2, "arg")
            arg = _T(y[1]) if isinstance(y[1], Str) else _load(y[1])
        elif y[0] == "side":
            if len(y) not in (2, 3):
                raise SexpError("side is (side \"F\" [proof])")
            side.append(P.SideCondition(_F(y[1]), _load(y[2]) if len(y) == 3 else None))
        else:
            raise SexpError(f"unknown step attribute {y[0]!r}")
    return P.RewriteStep(rule, pos, before, after, tuple(side), arg)


def load_proof(text: str):
    forms = read_sexp(text)
    if len(forms) != 1:
        raise SexpError(f"expected exactly one proof, found {len(forms)} forms")
    return _load(forms[0])
