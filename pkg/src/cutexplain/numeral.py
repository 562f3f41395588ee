"""Base-b digit strings and the long multiplication and division traces
behind the digit tables (the vigesimal one included)."""

from __future__ import annotations

from dataclasses import dataclass

from .lang import Eq, IntLit, Mul

ALPHABET = "0123456789abcdefghijklmnopqrstuvwxyz"


def _check_base(base):
    if not isinstance(base, int) or not 2 <= base <= len(ALPHABET):
        raise ValueError(f"base must be in [2, {len(ALPHABET)}], got {base!r}")


def _check_nat(n, what="value"):
    if not isinstance(n, int) or n < 0:
        raise ValueError(f"{what} must be a natural number, got {n!r}")


@dataclass(frozen=True)
class Digits:
    """Digits most-significant first.  Leading zeros are allowed so that
    trace rows can keep their printed width; ``canonical`` drops them."""
    base: int
    digits: tuple

    def __post_init__(self):
        _check_base(self.base)
        object.__setattr__(self, "digits", tuple(self.digits))
        if not self.digits:
            raise ValueError("empty digit string")
        for d in self.digits:
            if not 0 <= d < self.base:
                raise ValueError(f"digit {d} out of range for base {self.base}")

    @property
    def value(self) -> int:
        return from_digits(self)

    def canonical(self) -> "Digits":
        ds = self.digits
        k = 0
        while k < len(ds) - 1 and ds[k] == 0:
            k += 1
        return Digits(self.base, ds[k:])

    def is_canonical(self) -> bool:
        return self.canonical() == self

    def __str__(self):
        return "".join(ALPHABET[d] for d in self.digits)

    def __len__(self):
        return len(self.digits)


def to_digits(n: int, base: int) -> Digits:
    _check_base(base)
    _check_nat(n)
    if n == 0:
        return Digits(base, (0,))
    out = []
    while n:
        n, r = divmod(n, base)
        out.append(r)
    return Digits(base, tuple(reversed(out)))


def from_digits(ds: Digits) -> int:
    n = 0
    for d in ds.digits:
        n = n * ds.base + d
    return n


def parse_digits(text: str, base: int) -> Digits:
    """Read a numeral written in ``ALPHABET`` (case-insensitive)."""
    _check_base(base)
    if not text:
        raise ValueError("empty numeral")
    out = []
    for ch in text.lower():
        d = ALPHABET.find(ch)
        if d < 0 or d >= base:
            raise ValueError(f"{ch!r} is not a base-{base} digit")
        out.append(d)
    return Digits(base, tuple(out))


def padded(n: int, base: int, width: int) -> Digits:
    ds = to_digits(n, base).digits
    return Digits(base, (0,) * (width - len(ds)) + ds)


@dataclass(frozen=True)
class MultTrace:
    base: int
    multiplicand: int
    multiplier: int
    partial_rows: tuple  # ((shift, Digits), ...), least-significant digit first
    result: Digits

    def rows_value(self) -> int:
        return sum(row.value * self.base ** k for k, row in self.partial_rows)


@dataclass(frozen=True)
class DivTrace:
    base: int
    dividend: int
    divisor: int
    steps: tuple  # ((partial_dividend, quotient_digit, partial_remainder), ...)
    quotient: int
    remainder: int

    def quotient_digits(self) -> Digits:
        """Quotient as traced, one digit per step (leading zeros kept)."""
        return Digits(self.base, tuple(q for _, q, _ in self.steps))


def long_multiply_trace(x: int, y: int, base: int) -> MultTrace:
    _check_base(base)
    _check_nat(x, "multiplicand")
    _check_nat(y, "multiplier")
    width = len(to_digits(x, base)) + 1
    rows = []
    for k, d in enumerate(reversed(to_digits(y, base).digits)):
        # a zero digit still gets its row, written out in full width
        row = to_digits(x * d, base) if d else padded(0, base, width)
        rows.append((k, row))
    return MultTrace(base, x, y, tuple(rows), to_digits(x * y, base))


def long_divide_trace(n: int, d: int, base: int) -> DivTrace:
    _check_base(base)
    _check_nat(n, "dividend")
    if not isinstance(d, int) or d < 1:
        raise ZeroDivisionError(f"divisor must be >= 1, got {d!r}")
    steps = []
    r = 0
    for digit in to_digits(n, base).digits:
        pd = r * base + digit
        q, r = divmod(pd, d)
        steps.append((pd, q, r))
    quotient = 0
    for _, q, _ in steps:
        quotient = quotient * base + q
    return DivTrace(base, n, d, tuple(steps), quotient, r)


def magic_number(b: int, p: int) -> int:
    """The multiplicand of the repdigit trick: 12345679 in base ten,
    repeated ``p`` times with a zero between blocks."""
    _check_base(b)
    if not isinstance(p, int) or p < 1:
        raise ValueError(f"repetitions must be >= 1, got {p!r}")
    head = sum((b - 2 - i) * b ** i for i in range(b - 1)) + 1
    return head * sum(b ** ((b - 1) * j) for j in range(p))


def repdigit(d: int, length: int, base: int) -> int:
    return d * sum(base ** k for k in range(length))


def trick_table(b: int, d: int, p: int = 1):
    """Statement ``magic * ((b-1)*d) = dd...d`` and the multiplication proving it."""
    _check_base(b)
    if not isinstance(d, int) or not 1 <= d <= b - 1:
        raise ValueError(f"digit must be in [1, {b - 1}], got {d!r}")
    m = magic_number(b, p)
    k = (b - 1) * d
    result = repdigit(d, (b - 1) * p, b)
    statement = Eq(Mul(IntLit(m), IntLit(k)), IntLit(result))
    return statement, long_multiply_trace(m, k, b)


# ------------------------------------------------------------- rendering


def _grid(cells, width):
    """Right-align each ``(text, end_column)`` within ``width`` columns."""
    return [(" " * (end - len(text)) + text).rstrip() if text else ""
            for text, end in cells]


def render_multiplication(t: MultTrace) -> str:
    top = str(to_digits(t.multiplicand, t.base))
    bottom = str(to_digits(t.multiplier, t.base))
    rows = [(str(row), k) for k, row in t.partial_rows]
    width = max([len(top), len(bottom), len(t.result)]
                + [len(s) + k for s, k in rows])
    lines = _grid([(top, width), (bottom, width)], width)
    lines.append("-" * width)
    lines += _grid([(s, width - k) for s, k in rows], width)
    lines.append("-" * width)
    lines += _grid([(str(t.result), width)], width)
    return "\n".join(lines) + "\n"


def render_division(t: DivTrace) -> str:
    dividend = str(to_digits(t.dividend, t.base))
    n = len(dividend)
    # row i: remainder of step i followed by the next dividend digit
    cells = []
    for i, (_, _, r) in enumerate(t.steps[:-1]):
        cells.append((str(to_digits(r, t.base)) + dividend[i + 1], i + 2))
    cells.append((str(to_digits(t.steps[-1][2], t.base)), n))
    shift = max([0] + [len(s) - end for s, end in cells])
    cells = [(dividend, n)] + [(s, end + shift) for s, end in cells]
    width = n + shift
    quotient = str(t.quotient_digits())
    right = [str(to_digits(t.divisor, t.base)), "-" * len(quotient), quotient]
    while len(cells) < len(right):
        cells.append(("", 0))
    left = [(" " * (end - len(s)) + s).ljust(width) for s, end in cells]
    lines = []
    for i, text in enumerate(left):
        extra = right[i] if i < len(right) else ""
        lines.append(f"{text} | {extra}".rstrip())
    return "\n".join(lines) + "\n"
