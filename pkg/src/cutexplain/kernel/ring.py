"""Canonical polynomial forms with symbolic (polynomial) exponents.

A normal form is a map from monomials to integer coefficients.  A monomial
is a sorted tuple of ``(base, exponent)`` factors where ``base`` is a
variable, an integer constant or an opaque sum, and ``exponent`` is itself
a normal form.  ``b * b^(i + 1)`` and ``b^(i + 2)`` therefore share one
normal form.  Powers of compound bases need a literal exponent.

Sums are only accepted when ``opaque_sums`` is set: each one becomes an
atom keyed by its bounds and body (normalized, with the index renamed), so
sums that differ by ring identities in their bounds or body coincide.
"""

from __future__ import annotations

from ..lang import (Add, IntLit, Mul, Pow, Sub, Sum, Term, Var, rename_bound)

# Repeated multiplication is capped; exact powers of constants are not.
MAX_EXPANSION = 64


class NormalizeError(Exception):
    pass


def _extract(m, c):
    """Pull a positive constant offset out of the exponent of a literal base
    into the coefficient, so that ``5^(i + 1)`` and ``5 * 5^i`` coincide."""
    if not any(b[0] == "c" and abs(b[1]) >= 2 for b, _ in m):
        return m, c
    out = []
    for b, e in m:
        if b[0] == "c" and abs(b[1]) >= 2:
            k = dict(e).get((), 0)
            if k > 0:
                c *= b[1] ** k
                e = tuple(item for item in e if item[0] != ())
                if e == ZERO:
                    continue
        out.append((b, e))
    return tuple(sorted(out)), c


def _freeze(d):
    out = {}
    for m, c in d.items():
        if c:
            m, c = _extract(m, c)
            out[m] = out.get(m, 0) + c
    return tuple(sorted((m, c) for m, c in out.items() if c != 0))


ZERO = ()
ONE = (((), 1),)


def const(c):
    return _freeze({(): c})


def as_const(p):
    """Integer value of a constant normal form, else None."""
    if p == ZERO:
        return 0
    if len(p) == 1 and p[0][0] == ():
        return p[0][1]
    return None


def add(p, q):
    d = dict(p)
    for m, c in q:
        d[m] = d.get(m, 0) + c
    return _freeze(d)


def scale(p, k):
    return _freeze({m: c * k for m, c in p})


def sub(p, q):
    return add(p, scale(q, -1))


def _mul_mono(m1, m2):
    """Multiply two monomials; returns (extra coefficient, monomial)."""
    fac = dict(m1)
    for b, e in m2:
        fac[b] = add(fac[b], e) if b in fac else e
    coeff = 1
    out = []
    for b, e in fac.items():
        if e == ZERO:
            continue
        k = as_const(e)
        if b[0] == "c" and k is not None and k >= 0:
            coeff *= b[1] ** k
            continue
        out.append((b, e))
    return coeff, tuple(sorted(out))


def mul(p, q):
    d = {}
    for m1, c1 in p:
        for m2, c2 in q:
            k, m = _mul_mono(m1, m2)
            d[m] = d.get(m, 0) + c1 * c2 * k
    return _freeze(d)


def atom(base, exp=ONE):
    if exp == ZERO:
        return ONE
    k = as_const(exp)
    if base[0] == "c" and k is not None and k >= 0:
        return const(base[1] ** k)
    return _freeze({((base, exp),): 1})


def power(p, e):
    k = as_const(e)
    if k is not None:
        if k < 0:
            raise NormalizeError("negative literal exponent")
        c = as_const(p)
        if c is not None:
            return const(c ** k)
        if len(p) == 1:
            (m, coeff), = p
            return _freeze({tuple((b, scale(x, k)) for b, x in m): coeff ** k}) \
                if k else ONE
        if k > MAX_EXPANSION:
            raise NormalizeError("exponent too large to expand")
        out = ONE
        for _ in range(k):
            out = mul(out, p)
        return out
    # symbolic exponent: base must be a single monomial
    if len(p) == 0:
        return atom(("c", 0), e)
    if len(p) != 1:
        raise NormalizeError("non-linear symbolic exponent over a compound base")
    (m, coeff), = p
    out = ONE if coeff == 1 else atom(("c", coeff), e)
    for b, x in m:
        out = mul(out, atom(b, mul(x, e)))
    return out


class Normalizer:
    """Normalizes terms; remembers one representative term per sum atom."""

    def __init__(self, opaque_sums=False):
        self.opaque_sums = opaque_sums
        self.sums = {}

    def norm(self, t: Term, depth=0):
        if isinstance(t, IntLit):
            return const(t.value)
        if isinstance(t, Var):
            return atom(("v", t.name))
        if isinstance(t, Add):
            return add(self.norm(t.l, depth), self.norm(t.r, depth))
        if isinstance(t, Sub):
            return sub(self.norm(t.l, depth), self.norm(t.r, depth))
        if isinstance(t, Mul):
            return mul(self.norm(t.l, depth), self.norm(t.r, depth))
        if isinstance(t, Pow):
            return power(self.norm(t.base, depth), self.norm(t.exp, depth))
        if isinstance(t, Sum):
            if not self.opaque_sums:
                raise NormalizeError("sum inside a ring-normalized term")
            canon = f"#{depth}"
            key = ("s", (self.norm(t.lo, depth), self.norm(t.hi, depth),
                         self.norm(rename_bound(t.body, t.index, canon), depth + 1)))
            self.sums.setdefault(key, t)
            return atom(key)
        raise TypeError(f"not a term: {t!r}")

    # ------------------------------------------------------ back to terms

    def _base_term(self, b):
        if b[0] == "v":
            return Var(b[1])
        if b[0] == "c":
            return IntLit(b[1])
        return self.sums[b]

    def _mono_term(self, m):
        t = None
        for b, e in m:
            f = self._base_term(b)
            if e != ONE:
                f = Pow(f, self.to_term(e))
            t = f if t is None else Mul(t, f)
        return t

    def to_term(self, p) -> Term:
        # non-constant monomials by degree (descending), constant last
        def key(item):
            m, _ = item
            deg = sum(as_const(e) or 1 for _, e in m)
            return (m == (), -deg, repr(m))

        items = sorted(p, key=key)
        if not items:
            return IntLit(0)
        out = None
        for m, c in items:
            mag = abs(c)
            mono = self._mono_term(m)
            if mono is None:
                piece = IntLit(mag)
            elif mag == 1:
                piece = mono
            else:
                piece = Mul(IntLit(mag), mono)
            if out is None:
                if c < 0:
                    piece = Mul(IntLit(c), mono) if mono is not None else IntLit(c)
                out = piece
            else:
                out = Add(out, piece) if c > 0 else Sub(out, piece)
        return out


def ac_shape(x):
    """Shape of ``x`` modulo associativity and commutativity of + and *."""
    if isinstance(x, (Add, Mul)):
        op = type(x)
        items, stack = [], [x]
        while stack:
            y = stack.pop()
            if isinstance(y, op):
                stack += [y.l, y.r]
            else:
                items.append(ac_shape(y))
        return (op.__name__, tuple(sorted(items, key=repr)))
    if isinstance(x, (IntLit, Var)):
        return ("atom", repr(x))
    if isinstance(x, Sum):
        return ("Sum", x.index, ac_shape(x.lo), ac_shape(x.hi), ac_shape(x.body))
    if isinstance(x, Pow):
        return ("Pow", ac_shape(x.base), ac_shape(x.exp))
    return ("Sub", ac_shape(x.l), ac_shape(x.r))


def normal_form(t: Term, opaque_sums=False):
    return Normalizer(opaque_sums).norm(t)


def normalize_ring(t: Term, opaque_sums=False) -> Term:
    """Canonical term for ``t``; equal polynomials normalize identically."""
    n = Normalizer(opaque_sums)
    return n.to_term(n.norm(t))


def ring_equal(a: Term, b: Term) -> bool:
    try:
        return normal_form(a, True) == normal_form(b, True)
    except NormalizeError:
        return False
