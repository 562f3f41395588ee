"""Univariate polynomial equations over the naturals: the root bound, a
solver, and two provers of non-solvability (bounded enumeration, and a
two-interval monotonicity argument)."""

from __future__ import annotations

from dataclasses import dataclass

from .lang import (Add, Eq, ForallNat, IntLit, Le, Lt, Mul, Neq, Pow, Sub,
                   Var, parse_term, show)
from .kernel import expand_range_enum
from .kernel import proofs as P
from .kernel.ring import NormalizeError, as_const, normal_form


class RootFound(Exception):
    def __init__(self, witness: int):
        super().__init__(f"x = {witness} is a root")
        self.witness = witness


class UnsupportedShape(ValueError):
    pass


@dataclass(frozen=True)
class IntPoly:
    """Coefficients lowest degree first; the variable is named ``var``."""
    coeffs: tuple
    var: str = "x"

    def __post_init__(self):
        cs = tuple(int(c) for c in self.coeffs)
        object.__setattr__(self, "coeffs", cs)
        if len(cs) < 2:
            raise ValueError("degree must be at least 1")
        if cs[-1] == 0:
            raise ValueError("leading coefficient must be nonzero")

    @property
    def degree(self):
        return len(self.coeffs) - 1

    @property
    def lead(self):
        return self.coeffs[-1]

    def __call__(self, x: int) -> int:
        acc = 0
        for c in reversed(self.coeffs):
            acc = acc * x + c
        return acc

    def term(self):
        return poly_term(self)

    def __str__(self):
        return show(poly_term(self))


def _mono(c, k, var):
    x = Var(var)
    m = None if k == 0 else (x if k == 1 else Pow(x, IntLit(k)))
    if m is None:
        return IntLit(c)
    return m if c == 1 else Mul(IntLit(c), m)


def poly_term(p: IntPoly):
    """Highest degree first, e.g. ``x^2 - 1800`` or ``(-2) * x^3 + 7``."""
    out = None
    for k in range(p.degree, -1, -1):
        c = p.coeffs[k]
        if c == 0:
            continue
        if out is None:
            out = _mono(c, k, p.var)
        elif c > 0:
            out = Add(out, _mono(c, k, p.var))
        else:
            out = Sub(out, _mono(-c, k, p.var))
    return out


def parse_poly(text) -> IntPoly:
    t = parse_term(text) if isinstance(text, str) else text
    try:
        nf = normal_form(t)
    except NormalizeError as e:
        raise ValueError(f"not a polynomial: {e}") from None
    coeffs = {}
    var = None
    for mono, c in nf:
        if mono == ():
            coeffs[0] = c
            continue
        if len(mono) != 1:
            raise ValueError("only one variable is supported")
        (base, exp), = mono
        k = as_const(exp)
        if base[0] != "v" or k is None or k < 1:
            raise ValueError(f"not a polynomial term: {show(t)}")
        if var not in (None, base[1]):
            raise ValueError("only one variable is supported")
        var = base[1]
        coeffs[k] = c
    if var is None:
        raise ValueError("degree must be at least 1")
    n = max(coeffs)
    return IntPoly(tuple(coeffs.get(k, 0) for k in range(n + 1)), var)


def bound(p: IntPoly) -> int:
    """Beyond this value the leading term outweighs all the others."""
    return p.degree * max(abs(c) for c in p.coeffs[:-1])


def solve(p: IntPoly) -> list:
    return [x for x in range(bound(p) + 1) if p(x) == 0]


def statement(p: IntPoly):
    return ForallNat(p.var, Neq(poly_term(p), IntLit(0)))


# ------------------------------------------------------------ helpers


def _ax(name, **inst):
    return P.AxiomRef(name, tuple(sorted(inst.items())))


def _imp(proof, *args):
    for a in args:
        proof = P.ImpElim(proof, a)
    return proof


def _lin(goal, *premises):
    return P.LinearComb(goal, tuple(premises))


def _power(x, k):
    return Pow(x, IntLit(k))


def _pow_nonneg(x, k, h0):
    """``0 <= x^k`` from ``0 <= x``."""
    mono = _imp(_ax("PowMonoLe", n=IntLit(k), x=IntLit(0), y=x),
                P.ComputeLeaf(Le(IntLit(0), IntLit(k))),
                P.ComputeLeaf(Le(IntLit(0), IntLit(0))), h0)
    return _lin(Le(IntLit(0), _power(x, k)), (mono, 1))


def _neq_from(p_term, sign, comparison):
    """``p != 0`` from ``0 < p`` (sign > 0) or ``p < 0``."""
    if sign > 0:
        return P.ImpElim(_ax("GtNeq", x=p_term, y=IntLit(0)), comparison)
    return P.ImpElim(_ax("LtNeq", x=p_term, y=IntLit(0)), comparison)


def _sign_goal(p_term, sign):
    return Lt(IntLit(0), p_term) if sign > 0 else Lt(p_term, IntLit(0))


# ---------------------------------------------------------- enumeration


def _tail(p: IntPoly, b: int, h0, h2):
    """Generic argument that ``p(x) != 0`` once ``b < x``."""
    x = Var(p.var)
    n = p.degree
    sign = 1 if p.lead > 0 else -1
    c = [sign * a for a in p.coeffs]
    top = b + 1
    big = P.ImpElim(_ax("SuccGt", t=IntLit(b), x=x), h2)  # b + 1 <= x
    ge_top = _lin(Le(IntLit(top), x), (big, 1))
    ge_one = _lin(Le(IntLit(1), x), (big, 1))
    premises = []
    # x^n >= top * x^(n-1)
    dom = _imp(_ax("MulMonoLe", x=IntLit(top), y=x, z=_power(x, n - 1)),
               ge_top, _pow_nonneg(x, n - 1, h0))
    premises.append((dom, c[n]))
    # x^j <= x^(j+1), weighted so that every negative term becomes x^(n-1)
    neg = 0
    for j in range(n - 1):
        if c[j] < 0:
            neg += -c[j]
        if neg:
            step = _imp(_ax("MulMonoLe", x=IntLit(1), y=x, z=_power(x, j)),
                        ge_one, _pow_nonneg(x, j, h0))
            premises.append((step, neg))
    if c[n - 1] < 0:
        neg += -c[n - 1]
    # positive terms of degree >= 1 are dropped
    for i in range(1, n):
        if c[i] > 0:
            premises.append((_pow_nonneg(x, i, h0), c[i]))
    k = c[n] * top - neg
    assert k >= 1, "bound too small"
    at_least_one = _imp(_ax("PowMonoLe", n=IntLit(n - 1), x=IntLit(1), y=x),
                        P.ComputeLeaf(Le(IntLit(0), IntLit(n - 1))),
                        P.ComputeLeaf(Le(IntLit(0), IntLit(1))), ge_one)
    premises.append((at_least_one, k))
    t = poly_term(p)
    return _neq_from(t, sign, _lin(_sign_goal(t, sign), *premises))


def prove_no_solution_enum(p: IntPoly):
    """Cases ``x <= B`` checked one by one, generic argument above ``B``."""
    b = bound(p)
    for v in range(b + 1):
        if p(v) == 0:
            raise RootFound(v)
    x = Var(p.var)
    t = poly_term(p)
    h0, h1, h2 = P.HypRef("h0"), P.HypRef("h1"), P.HypRef("h2")
    enum = expand_range_enum(P.RangeEnum(p.var, IntLit(0), IntLit(b), Neq(t, IntLit(0)),
                                         "compute"))
    small = P.ImpIntro("h1", Le(x, IntLit(b)),
                       P.ForallElim(enum, x, P.AndIntro(h0, h1)))
    large = P.ImpIntro("h2", Lt(IntLit(b), x), _tail(p, b, h0, h2))
    split = P.CaseSplit(_ax("Trichotomy", x=x, t=IntLit(b)), small, large)
    return P.ForallIntro(p.var, split, "h0")


# ------------------------------------------------------------- intervals


def _shape(p: IntPoly):
    """``(a, k, c)`` with ``p = a*x^k - c``, a >= 1 and c >= 1."""
    a, k, c = p.lead, p.degree, -p.coeffs[0]
    if a < 1 or c < 1 or any(p.coeffs[1:-1]):
        raise UnsupportedShape(f"{p} is not of the form a*x^k - c with a, c >= 1")
    return a, k, c


def threshold(p: IntPoly) -> int:
    """Largest x with a*x^k <= c (binary search)."""
    a, k, c = _shape(p)
    lo, hi = 0, 1
    while a * hi ** k <= c:
        hi *= 2
    while hi - lo > 1:
        mid = (lo + hi) // 2
        if a * mid ** k <= c:
            lo = mid
        else:
            hi = mid
    return lo


def prove_no_solution_interval(p: IntPoly):
    """Two generic cases split at the threshold t: ``x <= t`` makes p negative,
    ``t < x`` makes it positive."""
    a, k, c = _shape(p)
    t = threshold(p)
    if a * t ** k == c:
        raise RootFound(t)
    x = Var(p.var)
    pt = poly_term(p)
    h0, h1, h2 = P.HypRef("h0"), P.HypRef("h1"), P.HypRef("h2")
    kk, tt, t1 = IntLit(k), IntLit(t), IntLit(t + 1)
    zero_le_k = P.ComputeLeaf(Le(IntLit(0), kk))

    # x <= t: x^k <= t^k = value, so a*x^k - c < 0
    mono = _imp(_ax("PowMonoLe", n=kk, x=x, y=tt), zero_le_k, h0, h1)
    low = IntLit(t ** k)
    mono = P.EqSubst(P.ComputeLeaf(Eq(_power(tt, k), low)), mono, (1,))
    neg = _lin(Lt(pt, IntLit(0)), (mono, a))
    small = P.ImpIntro("h1", Le(x, tt), _neq_from(pt, -1, neg))

    # t < x: (t+1)^k <= x^k, so a*x^k - c > 0
    succ = P.ImpElim(_ax("SuccGt", t=tt, x=x), h2)
    succ = _lin(Le(t1, x), (succ, 1))
    zero_le_t1 = P.ComputeLeaf(Le(IntLit(0), t1))
    mono = _imp(_ax("PowMonoLe", n=kk, x=t1, y=x), zero_le_k, zero_le_t1, succ)
    high = IntLit((t + 1) ** k)
    mono = P.EqSubst(P.ComputeLeaf(Eq(_power(t1, k), high)), mono, (0,))
    pos = _lin(Lt(IntLit(0), pt), (mono, a))
    large = P.ImpIntro("h2", Lt(tt, x), _neq_from(pt, 1, pos))

    split = P.CaseSplit(_ax("Trichotomy", x=x, t=tt), small, large)
    return P.ForallIntro(p.var, split, "h0")


def threshold_leaves(proof):
    """The two computed power facts an interval proof rests on."""
    return [q.goal for _, q in P.walk(proof)
            if isinstance(q, P.ComputeLeaf) and isinstance(q.goal, Eq)]


def as_cut(proof, witness: int):
    """Apply a proof of ``forall x . p(x) != 0`` to one value, which turns the
    outer introduction into a cut (used for classification)."""
    return P.ForallElim(proof, IntLit(witness))


def prove(p: IntPoly, mode: str = "interval"):
    if mode == "enum":
        return prove_no_solution_enum(p)
    if mode == "interval":
        return prove_no_solution_interval(p)
    raise ValueError(f"unknown mode {mode!r}")

