"""Statement language: integer terms with bounded sums, first-order formulas.

Terms and formulas are frozen dataclasses, so they hash and compare
structurally.  ``parse_term``/``parse_formula`` read the concrete syntax
and ``show`` prints the canonical form that ``size_bytes`` measures.

Concrete syntax::

    term    := int | ident | term (+|-|*) term | term ^ term
             | sum(ident, term, term, term) | ( term )
    formula := term (=|!=|<=|<|>=|>) term | formula (/\\|\\/|=>) formula
             | ~ formula | (forall|exists) ident [in [term, term]] . formula
             | ( formula )
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Mapping, Union


# ---------------------------------------------------------------- terms


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Add:
    l: "Term"
    r: "Term"


@dataclass(frozen=True)
class Sub:
    l: "Term"
    r: "Term"


@dataclass(frozen=True)
class Mul:
    l: "Term"
    r: "Term"


@dataclass(frozen=True)
class Pow:
    base: "Term"
    exp: "Term"


@dataclass(frozen=True)
class Sum:
    index: str
    lo: "Term"
    hi: "Term"
    body: "Term"


Term = Union[IntLit, Var, Add, Sub, Mul, Pow, Sum]
BINOPS = (Add, Sub, Mul, Pow)


# ------------------------------------------------------------- formulas


@dataclass(frozen=True)
class Eq:
    l: Term
    r: Term


@dataclass(frozen=True)
class Neq:
    l: Term
    r: Term


@dataclass(frozen=True)
class Le:
    l: Term
    r: Term


@dataclass(frozen=True)
class Lt:
    l: Term
    r: Term


@dataclass(frozen=True)
class And:
    l: "Formula"
    r: "Formula"


@dataclass(frozen=True)
class Or:
    l: "Formula"
    r: "Formula"


@dataclass(frozen=True)
class Implies:
    l: "Formula"
    r: "Formula"


@dataclass(frozen=True)
class Not:
    body: "Formula"


@dataclass(frozen=True)
class ForallNat:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ExistsNat:
    var: str
    body: "Formula"


@dataclass(frozen=True)
class ForallRange:
    var: str
    lo: Term
    hi: Term
    body: "Formula"


@dataclass(frozen=True)
class ExistsRange:
    var: str
    lo: Term
    hi: Term
    body: "Formula"


Formula = Union[Eq, Neq, Le, Lt, And, Or, Implies, Not,
                ForallNat, ExistsNat, ForallRange, ExistsRange]
ATOMS = (Eq, Neq, Le, Lt)
CONNECTIVES = (And, Or, Implies)
NAT_QUANTS = (ForallNat, ExistsNat)
RANGE_QUANTS = (ForallRange, ExistsRange)
QUANTS = NAT_QUANTS + RANGE_QUANTS


class LangError(Exception):
    pass


class EvalError(LangError):
    pass


class CaptureError(LangError):
    pass


class ParseError(LangError):
    def __init__(self, msg, line, col):
        super().__init__(f"{msg} at line {line}, column {col}")
        self.line = line
        self.col = col


def lit(n: int) -> IntLit:
    return IntLit(int(n))


def is_term(x) -> bool:
    return isinstance(x, (IntLit, Var, Add, Sub, Mul, Pow, Sum))


# ------------------------------------------------------------- children
# Positions used by the rewriter index into these child tuples.


def children(x) -> tuple:
    if isinstance(x, (IntLit, Var)):
        return ()
    if isinstance(x, BINOPS + ATOMS + CONNECTIVES):
        return (x.l, x.r) if not isinstance(x, Pow) else (x.base, x.exp)
    if isinstance(x, Sum):
        return (x.lo, x.hi, x.body)
    if isinstance(x, Not):
        return (x.body,)
    if isinstance(x, NAT_QUANTS):
        return (x.body,)
    if isinstance(x, RANGE_QUANTS):
        return (x.lo, x.hi, x.body)
    raise TypeError(f"not a term or formula: {x!r}")


def with_children(x, kids):
    if isinstance(x, Pow):
        return Pow(*kids)
    if isinstance(x, BINOPS + ATOMS + CONNECTIVES):
        return type(x)(*kids)
    if isinstance(x, Sum):
        return Sum(x.index, *kids)
    if isinstance(x, Not):
        return Not(*kids)
    if isinstance(x, NAT_QUANTS):
        return type(x)(x.var, *kids)
    if isinstance(x, RANGE_QUANTS):
        return type(x)(x.var, *kids)
    raise TypeError(f"no children: {x!r}")


def binder_at(x, i):
    """Name bound by ``x`` over child ``i``, or None."""
    if isinstance(x, Sum) and i == 2:
        return x.index
    if isinstance(x, NAT_QUANTS):
        return x.var
    if isinstance(x, RANGE_QUANTS) and i == 2:
        return x.var
    return None


def subterm(x, path):
    for i in path:
        kids = children(x)
        if not 0 <= i < len(kids):
            raise IndexError(f"position {tuple(path)} out of range")
        x = kids[i]
    return x


def replace_at(x, path, new):
    if not path:
        return new
    kids = list(children(x))
    i = path[0]
    if not 0 <= i < len(kids):
        raise IndexError(f"position {tuple(path)} out of range")
    kids[i] = replace_at(kids[i], path[1:], new)
    return with_children(x, kids)


def binders_along(x, path):
    out = []
    for i in path:
        b = binder_at(x, i)
        if b is not None:
            out.append(b)
        x = children(x)[i]
    return out


# ------------------------------------------------------- free variables


def free_vars(x) -> frozenset:
    if isinstance(x, IntLit):
        return frozenset()
    if isinstance(x, Var):
        return frozenset([x.name])
    out = set()
    for i, k in enumerate(children(x)):
        fv = free_vars(k)
        b = binder_at(x, i)
        if b is not None:
            fv = fv - {b}
        out |= fv
    return frozenset(out)


def is_closed(x) -> bool:
    return not free_vars(x)


def contains(x, kind) -> bool:
    if isinstance(x, kind):
        return True
    return any(contains(k, kind) for k in children(x))


# --------------------------------------------------------- substitution


def subst(x, var: str, t: Term):
    """Replace free ``var`` by ``t`` in ``x``; raises CaptureError on capture."""
    if isinstance(x, Var):
        return t if x.name == var else x
    if isinstance(x, IntLit):
        return x
    if var not in free_vars(x):
        return x
    tfv = free_vars(t)
    kids = []
    for i, k in enumerate(children(x)):
        b = binder_at(x, i)
        if b == var:
            kids.append(k)
            continue
        if b is not None and b in tfv and var in free_vars(k):
            raise CaptureError(f"substituting for {var} would capture {b}")
        kids.append(subst(k, var, t))
    return with_children(x, kids)


def substitute(x, var: str, t: Term):
    """Substitute a closed term for the free occurrences of ``var``."""
    if not is_closed(t):
        raise LangError(f"substituted term must be closed: {show(t)}")
    return subst(x, var, t)


def rename_bound(x, old: str, new: str):
    return subst(x, old, Var(new))


# ----------------------------------------------------------- evaluation


def eval_term(t: Term, env: Mapping[str, int] | None = None) -> int:
    env = env or {}
    if isinstance(t, IntLit):
        return t.value
    if isinstance(t, Var):
        try:
            return env[t.name]
        except KeyError:
            raise EvalError(f"unbound variable {t.name}") from None
    if isinstance(t, Add):
        return eval_term(t.l, env) + eval_term(t.r, env)
    if isinstance(t, Sub):
        return eval_term(t.l, env) - eval_term(t.r, env)
    if isinstance(t, Mul):
        return eval_term(t.l, env) * eval_term(t.r, env)
    if isinstance(t, Pow):
        e = eval_term(t.exp, env)
        if e < 0:
            raise EvalError(f"negative exponent in {show(t)}")
        return eval_term(t.base, env) ** e
    if isinstance(t, Sum):
        lo, hi = eval_term(t.lo, env), eval_term(t.hi, env)
        inner = dict(env)
        total = 0
        for i in range(lo, hi + 1):
            inner[t.index] = i
            total += eval_term(t.body, inner)
        return total
    raise TypeError(f"not a term: {t!r}")


def eval_formula(f: Formula, env: Mapping[str, int] | None = None,
                 range_only: bool = True) -> bool:
    """Decide ``f`` by exhaustive evaluation.

    Only range quantifiers can be evaluated; unbounded ones raise EvalError
    whatever ``range_only`` says.
    """
    env = env or {}
    if isinstance(f, Eq):
        return eval_term(f.l, env) == eval_term(f.r, env)
    if isinstance(f, Neq):
        return eval_term(f.l, env) != eval_term(f.r, env)
    if isinstance(f, Le):
        return eval_term(f.l, env) <= eval_term(f.r, env)
    if isinstance(f, Lt):
        return eval_term(f.l, env) < eval_term(f.r, env)
    if isinstance(f, And):
        return eval_formula(f.l, env) and eval_formula(f.r, env)
    if isinstance(f, Or):
        return eval_formula(f.l, env) or eval_formula(f.r, env)
    if isinstance(f, Implies):
        return (not eval_formula(f.l, env)) or eval_formula(f.r, env)
    if isinstance(f, Not):
        return not eval_formula(f.body, env)
    if isinstance(f, NAT_QUANTS):
        raise EvalError(f"cannot evaluate unbounded quantifier over {f.var}")
    if isinstance(f, RANGE_QUANTS):
        lo, hi = eval_term(f.lo, env), eval_term(f.hi, env)
        inner = dict(env)
        test = all if isinstance(f, ForallRange) else any

        def cases():
            for v in range(lo, hi + 1):
                inner[f.var] = v
                yield eval_formula(f.body, inner)

        return test(cases())
    raise TypeError(f"not a formula: {f!r}")


def is_range_only(f) -> bool:
    if isinstance(f, NAT_QUANTS):
        return False
    if is_term(f):
        return True
    return all(is_range_only(k) for k in children(f) if not is_term(k))


# ------------------------------------------------------------- printing

_TERM_PREC = {Add: 1, Sub: 1, Mul: 2, Pow: 3}
_CMP = {Eq: "=", Neq: "!=", Le: "<=", Lt: "<"}
_CONN = {Implies: ("=>", 1), Or: ("\\/", 2), And: ("/\\", 3)}


def _show_term(t, ctx):
    if isinstance(t, IntLit):
        return str(t.value) if t.value >= 0 else f"({t.value})"
    if isinstance(t, Var):
        return t.name
    if isinstance(t, Sum):
        return (f"sum({t.index}, {_show_term(t.lo, 0)}, "
                f"{_show_term(t.hi, 0)}, {_show_term(t.body, 0)})")
    p = _TERM_PREC[type(t)]
    if isinstance(t, Pow):
        s = f"{_show_term(t.base, 4)}^{_show_term(t.exp, 3)}"
    else:
        op = {Add: "+", Sub: "-", Mul: "*"}[type(t)]
        s = f"{_show_term(t.l, p)} {op} {_show_term(t.r, p + 1)}"
    return f"({s})" if p < ctx else s


def _show_formula(f, ctx):
    if isinstance(f, ATOMS):
        return f"{_show_term(f.l, 0)} {_CMP[type(f)]} {_show_term(f.r, 0)}"
    if isinstance(f, Not):
        return "~" + _show_formula(f.body, 4)
    if isinstance(f, CONNECTIVES):
        op, p = _CONN[type(f)]
        if isinstance(f, Implies):
            s = f"{_show_formula(f.l, p + 1)} {op} {_show_formula(f.r, p)}"
        else:
            s = f"{_show_formula(f.l, p)} {op} {_show_formula(f.r, p + 1)}"
        return f"({s})" if p < ctx else s
    q = "forall" if isinstance(f, (ForallNat, ForallRange)) else "exists"
    if isinstance(f, RANGE_QUANTS):
        head = f"{q} {f.var} in [{_show_term(f.lo, 0)}, {_show_term(f.hi, 0)}]"
    else:
        head = f"{q} {f.var}"
    s = f"{head} . {_show_formula(f.body, 0)}"
    return f"({s})" if ctx > 0 else s


def show(x) -> str:
    """Canonical printed form of a term or formula."""
    if is_term(x):
        return _show_term(x, 0)
    return _show_formula(x, 0)


def size_bytes(x) -> int:
    """Byte length of the canonical UTF-8 print of a term, formula or proof."""
    if isinstance(x, str):
        return len(x.encode("utf-8"))
    if is_term(x) or isinstance(x, Formula.__args__):
        return len(show(x).encode("utf-8"))
    from .kernel.sexpr import dump_proof
    return len(dump_proof(x).encode("utf-8"))


# -------------------------------------------------------------- parsing

_TOKEN = re.compile(r"""
    (?P<ws>\s+)
  | (?P<int>\d+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<op>/\\|\\/|=>|!=|<=|>=|[<>=+\-*^()\[\],.~])
""", re.VERBOSE)

KEYWORDS = {"forall", "exists", "in", "sum"}


class _Parser:
    def __init__(self, text):
        self.text = text
        self.toks = []
        pos = 0
        while pos < len(text):
            m = _TOKEN.match(text, pos)
            if not m:
                self._fail_at(pos, f"unexpected character {text[pos]!r}")
            if m.lastgroup != "ws":
                self.toks.append((m.lastgroup, m.group(), pos))
            pos = m.end()
        self.toks.append(("eof", "", len(text)))
        self.i = 0

    def _fail_at(self, pos, msg):
        line = self.text.count("\n", 0, pos) + 1
        col = pos - (self.text.rfind("\n", 0, pos) + 1) + 1
        raise ParseError(msg, line, col)

    def fail(self, msg):
        self._fail_at(self.toks[self.i][2], msg)

    def peek(self, k=0):
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def at(self, value):
        kind, v, _ = self.peek()
        return v == value and kind in ("op", "ident")

    def expect(self, value):
        if not self.at(value):
            self.fail(f"expected {value!r}, found {self.peek()[1] or 'end of input'!r}")
        self.i += 1

    def ident(self):
        kind, v, _ = self.peek()
        if kind != "ident" or v in KEYWORDS:
            self.fail(f"expected identifier, found {v or 'end of input'!r}")
        self.i += 1
        return v

    def done(self):
        if self.peek()[0] != "eof":
            self.fail(f"unexpected {self.peek()[1]!r}")

    # terms
    def term(self):
        t = self.product()
        while self.at("+") or self.at("-"):
            op = Add if self.peek()[1] == "+" else Sub
            self.i += 1
            t = op(t, self.product())
        return t

    def product(self):
        t = self.power()
        while self.at("*"):
            self.i += 1
            t = Mul(t, self.power())
        return t

    def power(self):
        base = self.primary()
        if self.at("^"):
            self.i += 1
            return Pow(base, self.power())
        return base

    def primary(self):
        kind, v, _ = self.peek()
        if kind == "int":
            self.i += 1
            return IntLit(int(v))
        if v == "-" and self.peek(1)[0] == "int":
            self.i += 2
            return IntLit(-int(self.toks[self.i - 1][1]))
        if kind == "ident" and v == "sum":
            self.i += 1
            self.expect("(")
            idx = self.ident()
            self.expect(",")
            lo = self.term()
            self.expect(",")
            hi = self.term()
            self.expect(",")
            body = self.term()
            self.expect(")")
            return Sum(idx, lo, hi, body)
        if kind == "ident":
            return Var(self.ident())
        if v == "(":
            self.i += 1
            t = self.term()
            self.expect(")")
            return t
        self.fail(f"expected a term, found {v or 'end of input'!r}")

    # formulas
    def formula(self):
        if self.at("forall") or self.at("exists"):
            return self.quantified()
        left = self.disj()
        if self.at("=>"):
            self.i += 1
            return Implies(left, self.formula())
        return left

    def quantified(self):
        univ = self.peek()[1] == "forall"
        self.i += 1
        var = self.ident()
        if self.at("in"):
            self.i += 1
            self.expect("[")
            lo = self.term()
            self.expect(",")
            hi = self.term()
            self.expect("]")
            self.expect(".")
            body = self.formula()
            return (ForallRange if univ else ExistsRange)(var, lo, hi, body)
        self.expect(".")
        body = self.formula()
        return (ForallNat if univ else ExistsNat)(var, body)

    def disj(self):
        f = self.conj()
        while self.at("\\/"):
            self.i += 1
            f = Or(f, self.conj())
        return f

    def conj(self):
        f = self.unary()
        while self.at("/\\"):
            self.i += 1
            f = And(f, self.unary())
        return f

    def unary(self):
        if self.at("~"):
            self.i += 1
            return Not(self.unary())
        if self.at("forall") or self.at("exists"):
            return self.quantified()
        if self.at("("):
            save = self.i
            try:
                return self.comparison()
            except ParseError:
                self.i = save
            self.i += 1
            f = self.formula()
            self.expect(")")
            return f
        return self.comparison()

    def comparison(self):
        l = self.term()
        kind, v, _ = self.peek()
        ops = {"=": Eq, "!=": Neq, "<=": Le, "<": Lt}
        if v in ops:
            self.i += 1
            return ops[v](l, self.term())
        if v in (">=", ">"):
            self.i += 1
            r = self.term()
            return (Le if v == ">=" else Lt)(r, l)
        self.fail(f"expected a comparison, found {v or 'end of input'!r}")


def parse_term(text: str) -> Term:
    p = _Parser(text)
    t = p.term()
    p.done()
    _check_binders(t)
    return t


def parse_formula(text: str) -> Formula:
    p = _Parser(text)
    f = p.formula()
    p.done()
    _check_binders(f)
    return f


def _check_binders(x):
    if isinstance(x, (Sum,) + RANGE_QUANTS):
        name = x.index if isinstance(x, Sum) else x.var
        if name in free_vars(x.lo) | free_vars(x.hi):
            raise LangError(f"bounds of the binder {name} mention {name}")
    for k in children(x):
        _check_binders(k)


def as_formula(x) -> Formula:
    return parse_formula(x) if isinstance(x, str) else x


def as_term(x) -> Term:
    if isinstance(x, str):
        return parse_term(x)
    if isinstance(x, int):
        return IntLit(x)
    return x
