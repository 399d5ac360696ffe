from fractions import Fraction

import pytest

from twisted_vw.errors import InvalidGerbeDataError
from twisted_vw.utils import exponent_key, key_exponent, parse_rat, rat_to_str, require_picard, require_prime_rank


@pytest.mark.parametrize(
    "value,text",
    [(Fraction(3, 2), "3/2"), (Fraction(-15, 4), "-15/4"), (Fraction(8, 4), "2"), (0, "0"), ("6/4", "3/2")],
)
def test_rat_to_str(value, text):
    assert rat_to_str(value) == text


@pytest.mark.parametrize("raw,expected", [("3/2", Fraction(3, 2)), (" -7 ", Fraction(-7)), (5, Fraction(5))])
def test_parse_rat(raw, expected):
    assert parse_rat(raw) == expected


@pytest.mark.parametrize("raw", ["", "three", "1/0", 1.5, None])
def test_parse_rat_rejects(raw):
    with pytest.raises(ValueError):
        parse_rat(raw)


def test_prime_rank():
    assert require_prime_rank(2) == 2
    assert require_prime_rank(7) == 7
    for bad in (1, 4, 9, True, "3"):
        with pytest.raises(InvalidGerbeDataError):
            require_prime_rank(bad)


def test_picard_numbers():
    assert [require_picard(rho) for rho in (0, 11, 20, 22)] == [0, 11, 20, 22]
    with pytest.raises(InvalidGerbeDataError, match="21 is not realized"):
        require_picard(21)
    for bad in (-1, 23, False):
        with pytest.raises(InvalidGerbeDataError):
            require_picard(bad)


def test_exponent_keys():
    assert exponent_key(Fraction(3, 2), 4) == 6
    assert key_exponent(6, 4) == Fraction(3, 2)
    with pytest.raises(ValueError, match="does not fit ramification 4"):
        exponent_key(Fraction(1, 3), 4)
