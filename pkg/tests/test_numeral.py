from pathlib import Path

import pytest

from cutexplain import numeral
from cutexplain.lang import Eq, IntLit, Mul

from oracles import magic_by_division, repunit

GOLDEN = Path(__file__).parent / "golden"


@pytest.mark.parametrize("n,base,text", [
    (0, 10, "0"), (76, 20, "3g"), (28454668, 10, "28454668"), (35, 36, "z")])
def test_to_digits(n, base, text):
    ds = numeral.to_digits(n, base)
    assert str(ds) == text
    assert ds.is_canonical()
    assert numeral.from_digits(ds) == n
    assert numeral.parse_digits(text, base) == ds


@pytest.mark.parametrize("base", [1, 37, 0])
def test_base_out_of_range(base):
    with pytest.raises(ValueError):
        numeral.to_digits(5, base)


def test_bad_digit_text():
    with pytest.raises(ValueError):
        numeral.parse_digits("12a", 10)


def test_padded_keeps_leading_zeros():
    ds = numeral.padded(0, 10, 5)
    assert str(ds) == "00000" and not ds.is_canonical()
    assert ds.canonical() == numeral.to_digits(0, 10)


def test_multiplication_rows_keep_the_zero_row():
    t = numeral.long_multiply_trace(7678, 3706, 10)
    assert [(k, str(r)) for k, r in t.partial_rows] == \
        [(0, "46068"), (1, "00000"), (2, "53746"), (3, "23034")]
    assert str(t.result) == "28454668"


def test_fig4_rows():
    t = numeral.long_multiply_trace(12345679, 36, 10)
    assert [(k, str(r)) for k, r in t.partial_rows] == [(0, "74074074"), (1, "37037037")]
    assert t.result.value == 444444444


def test_unit_multiplier():
    t = numeral.long_multiply_trace(987654, 1, 7)
    assert len(t.partial_rows) == 1
    assert t.partial_rows[0][1].value == 987654 == t.result.value


def test_fig6_division():
    t = numeral.long_divide_trace(111111111, 9, 10)
    assert [q for _, q, _ in t.steps] == [0, 1, 2, 3, 4, 5, 6, 7, 9]
    assert [r for _, _, r in t.steps] == [1, 2, 3, 4, 5, 6, 7, 8, 0]
    assert str(t.quotient_digits()) == "012345679"
    assert (t.quotient, t.remainder) == (12345679, 0)


def test_partial_dividends_follow_ten_n_plus_one():
    # the n-th remainder n followed by a 1 gives 10n + 1 = 9n + (n + 1)
    t = numeral.long_divide_trace(111111111, 9, 10)
    for n, (pd, q, r) in enumerate(t.steps[1:8], start=1):
        assert pd == 10 * n + 1 and q == n and r == n + 1


def test_twenty_seven_ones():
    t = numeral.long_divide_trace(repunit(27), 9, 10)
    assert t.quotient == 12345679012345679012345679
    assert t.remainder == 0


def test_unit_divisor():
    t = numeral.long_divide_trace(123456, 1, 10)
    assert (t.quotient, t.remainder) == (123456, 0)


@pytest.mark.parametrize("d", [0, -3])
def test_division_by_zero(d):
    with pytest.raises(ZeroDivisionError):
        numeral.long_divide_trace(10, d, 10)


def test_magic_numbers():
    assert numeral.magic_number(10, 1) == 12345679
    assert numeral.magic_number(10, 3) == 12345679012345679012345679
    assert numeral.magic_number(20, 1) == int("123456789abcdefghj", 20)
    for b in (2, 3, 16, 36):
        for p in (1, 2, 5):
            assert numeral.magic_number(b, p) == magic_by_division(b, p)


def test_magic_number_parameters():
    with pytest.raises(ValueError):
        numeral.magic_number(10, 0)


def test_base_twenty_identity():
    # 123456789abcdefghj * j = 1111111111111111111 in base 20
    m = numeral.magic_number(20, 1)
    assert numeral.to_digits(m * 19, 20) == numeral.parse_digits("1" * 19, 20)


@pytest.mark.parametrize("d,rhs", [(4, 444444444), (7, 777777777), (1, 111111111)])
def test_trick_table_base_ten(d, rhs):
    st, t = numeral.trick_table(10, d)
    assert st == Eq(Mul(IntLit(12345679), IntLit(9 * d)), IntLit(rhs))
    assert t.result.value == rhs


def test_trick_table_base_twenty():
    _, t = numeral.trick_table(20, 4)
    assert str(numeral.to_digits(t.multiplier, 20)) == "3g"
    assert str(t.result) == "4" * 19


@pytest.mark.parametrize("d", [0, 10])
def test_trick_table_digit_range(d):
    with pytest.raises(ValueError):
        numeral.trick_table(10, d)


@pytest.mark.parametrize("name,render", [
    ("fig4.txt", lambda: numeral.render_multiplication(numeral.trick_table(10, 4)[1])),
    ("fig5.txt", lambda: numeral.render_multiplication(
        numeral.long_multiply_trace(7678, 3706, 10))),
    ("fig6.txt", lambda: numeral.render_division(numeral.long_divide_trace(111111111, 9, 10))),
    ("fig7.txt", lambda: numeral.render_multiplication(numeral.trick_table(20, 4)[1])),
])
def test_rendering_matches_golden(name, render):
    assert render() == (GOLDEN / name).read_text(encoding="utf-8")
