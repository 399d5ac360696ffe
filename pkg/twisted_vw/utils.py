"""
Utility Functions - twisted_vw

This module provides small helpers shared by every layer of the package:

- Exact rational formatting and parsing ("num/den", or "num" when den = 1)
- Validation of the prime rank r and of the Picard number of a K3 surface
- Exponent bookkeeping for series stored over a fixed ramification

The functions here never touch floating point; everything stays in
fractions.Fraction or Python integers.
"""

import logging
from fractions import Fraction
from typing import Union

from sympy import isprime

from .errors import InvalidGerbeDataError
from .vw_base import LOGGER_NAME

logger = logging.getLogger(LOGGER_NAME)

RatLike = Union[int, Fraction, str]

# Picard numbers realized by K3 surfaces: 0..20 in characteristic zero,
# 22 for supersingular surfaces. 21 never occurs.
SUPERSINGULAR_PICARD = 22
MAX_COMPLEX_PICARD = 20


def rat_to_str(value: RatLike) -> str:
    """Return the canonical string of a rational: "num/den" or "num"."""
    value = Fraction(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def parse_rat(raw: RatLike) -> Fraction:
    """Parse "num/den", "num" or an int into a reduced Fraction."""
    if isinstance(raw, Fraction):
        return raw
    if isinstance(raw, int):
        return Fraction(raw)
    if not isinstance(raw, str):
        raise ValueError(f"Invalid rational: {raw!r}")
    text = raw.strip()
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError) as e:
        raise ValueError(f"Invalid rational: {raw!r}") from e


def require_prime_rank(r: int) -> int:
    if not isinstance(r, int) or isinstance(r, bool) or not isprime(r):
        raise InvalidGerbeDataError(f"rank must be a prime number, got {r!r}")
    return r


def require_picard(rho: int) -> int:
    if not isinstance(rho, int) or isinstance(rho, bool):
        raise InvalidGerbeDataError(f"Picard number must be an integer, got {rho!r}")
    if rho == MAX_COMPLEX_PICARD + 1:
        raise InvalidGerbeDataError(
            "Picard number 21 is not realized by any K3 surface "
            "(allowed: 0..20, or 22 for supersingular surfaces)"
        )
    if not (0 <= rho <= MAX_COMPLEX_PICARD or rho == SUPERSINGULAR_PICARD):
        raise InvalidGerbeDataError(
            f"Picard number must lie in 0..20 or equal 22, got {rho}"
        )
    return rho


def exponent_key(exponent: RatLike, ramification: int) -> int:
    """Return k with exponent = k / ramification, or raise if it does not fit."""
    exponent = Fraction(exponent)
    scaled = exponent * ramification
    if scaled.denominator != 1:
        raise ValueError(
            f"exponent {rat_to_str(exponent)} does not fit ramification {ramification}"
        )
    return scaled.numerator


def key_exponent(key: int, ramification: int) -> Fraction:
    return Fraction(key, ramification)
