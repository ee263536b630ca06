"""Exact scalars.

Every coefficient in the toolkit is a :class:`fractions.Fraction`.  Complex
input is rejected outright, floats are rejected because they are almost never
what the caller meant in an exact verification path.
"""
import numbers
from fractions import Fraction
from math import gcd


def to_rational(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, bool):
        return Fraction(int(x))
    if isinstance(x, numbers.Integral):
        return Fraction(int(x))
    if isinstance(x, numbers.Rational):
        return Fraction(int(x.numerator), int(x.denominator))
    if isinstance(x, str):
        s = x.strip()
        if "j" in s or "J" in s:
            raise TypeError(f"complex scalar {x!r} is not supported (rational entries only)")
        return Fraction(s)
    if isinstance(x, numbers.Complex) and not isinstance(x, numbers.Real):
        raise TypeError("complex scalars are not supported (rational entries only)")
    if isinstance(x, numbers.Real):
        raise TypeError(f"float {x!r} is not an exact scalar; pass a Fraction, an int or a decimal string")
    raise TypeError(f"cannot interpret {type(x).__name__} as a rational scalar")


def rational_to_strings(q: Fraction):
    return str(q.numerator), str(q.denominator)


def rational_from_strings(num, den="1") -> Fraction:
    n = int(str(num))
    d = int(str(den))
    if d == 0:
        raise ValueError("zero denominator")
    return Fraction(n, d)


def format_rational(q: Fraction) -> str:
    return str(q.numerator) if q.denominator == 1 else f"{q.numerator}/{q.denominator}"


def lcm(a: int, b: int) -> int:
    return a // gcd(a, b) * b
