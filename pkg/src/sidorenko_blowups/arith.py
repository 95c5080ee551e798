"""Exact/float number helpers shared by the density evaluators.

Densities are returned as :class:`fractions.Fraction` when computed exactly
and as :class:`mpmath.mpf` otherwise.
"""

from __future__ import annotations

from fractions import Fraction

import gmpy2
import mpmath

DEFAULT_PRECISION_BITS = 128
DEFAULT_TERM_CAP = 10**8

MODES = ("auto", "exact", "float")


class InfeasibleSizeError(RuntimeError):
    """The requested evaluation would enumerate more terms than the cap allows."""


class ExactnessError(ValueError):
    """Exact arithmetic was requested but some power is irrational."""


def check_mode(mode: str) -> str:
    if mode not in MODES:
        raise ValueError(f"unknown arithmetic mode {mode!r}; expected one of {MODES}")
    return mode


def check_cap(terms: int, cap: int, what: str) -> None:
    if terms > cap:
        raise InfeasibleSizeError(f"{what} needs {terms} terms, above the cap of {cap}")


def is_exact(x) -> bool:
    return isinstance(x, (Fraction, int))


def to_mpf(x, prec: int = DEFAULT_PRECISION_BITS) -> mpmath.mpf:
    with mpmath.workprec(prec):
        if isinstance(x, Fraction):
            return mpmath.mpf(x.numerator) / x.denominator
        return mpmath.mpf(x)


def exact_root(x: Fraction, d: int) -> Fraction | None:
    """The rational d-th root of a nonnegative rational, or None if irrational."""
    if x < 0:
        raise ValueError("roots of negative numbers are not supported")
    num, ok_n = gmpy2.iroot(x.numerator, d)
    if not ok_n:
        return None
    den, ok_d = gmpy2.iroot(x.denominator, d)
    if not ok_d:
        return None
    return Fraction(int(num), int(den))


def exact_power(base: Fraction, exponent: Fraction) -> Fraction | None:
    """base**exponent as a Fraction when it is rational (nonnegative base and exponent)."""
    exponent = Fraction(exponent)
    if exponent.denominator == 1:
        return Fraction(base) ** exponent.numerator
    if base == 0:
        return Fraction(0) if exponent > 0 else Fraction(1)
    root = exact_root(Fraction(base), exponent.denominator)
    return None if root is None else root**exponent.numerator


def float_power(base, exponent, prec: int = DEFAULT_PRECISION_BITS) -> mpmath.mpf:
    with mpmath.workprec(prec):
        b = to_mpf(base, prec)
        e = to_mpf(Fraction(exponent), prec)
        if e == 0:
            return mpmath.mpf(1)
        return mpmath.power(b, e)


def format_value(x, digits: int = 40) -> str:
    """Rationals as 'p/q' (or 'p'); floats as decimal strings."""
    if isinstance(x, (Fraction, int)):
        return str(Fraction(x))
    return mpmath.nstr(x, digits)


def parse_value(text: str, prec: int = DEFAULT_PRECISION_BITS):
    """Inverse of :func:`format_value`."""
    text = text.strip()
    if any(c in text for c in ".eE") or text in ("inf", "-inf", "+inf", "nan"):
        with mpmath.workprec(prec):
            return mpmath.mpf(text)
    return Fraction(text)


def difference(lhs, rhs, prec: int = DEFAULT_PRECISION_BITS):
    """lhs - rhs, exact when both sides are exact."""
    if is_exact(lhs) and is_exact(rhs):
        return Fraction(lhs) - Fraction(rhs)
    with mpmath.workprec(prec):
        return to_mpf(lhs, prec) - to_mpf(rhs, prec)
