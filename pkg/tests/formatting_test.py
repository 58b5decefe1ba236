import pytest

from src.curve_core import INFINITY, make_point
from src.formatting import format_counts, format_digits, format_hex, format_ns, format_point, format_x, parse_point
from src.fp_arith import OpCounter, PrimeModulus
from tests.conftest import small_curve


def test_format_hex():
    assert format_hex(None) == "N/A"
    assert format_hex(0) == "0"
    assert format_hex(10150) == "27a6"


def test_format_point():
    E = small_curve(97, 2, 3)
    assert format_point(make_point(E, 3, 6)) == "3,6"
    assert format_point(make_point(E, 0x50, 0x0A)) == "50,a"
    assert format_point(INFINITY) == "infinity"
    assert format_point(None) == "infinity"


def test_format_x():
    assert format_x(None) == "infinity"
    assert format_x(255) == "ff"
    assert format_x(PrimeModulus(97).element(10)) == "a"


def test_parse_point():
    assert parse_point("3,6") == (3, 6)
    assert parse_point("A,ff") == (10, 255)
    for bad in ("3", "3,6,1", "x,6", "3,"):
        with pytest.raises(ValueError):
            parse_point(bad)


def test_format_digits():
    assert format_digits([2, 7, 10, 6]) == "2 7 10 6"
    assert format_digits([1, 0, -1]) == "1 0 -1"
    assert format_digits([]) == ""


def test_format_counts():
    assert format_counts(OpCounter(3, 2, 5, 1, 0)) == "mul=3 sqr=2 add_sub=5 inv=1 neg=0"


def test_format_ns():
    assert format_ns(None) == "N/A"
    assert format_ns(250) == "250ns"
    assert format_ns(12_500) == "12.5us"
    assert format_ns(3_210_000) == "3.21ms"
