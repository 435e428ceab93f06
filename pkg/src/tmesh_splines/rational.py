"""Exact rational scalars used everywhere in the library.

All coordinates, polynomial coefficients and matrix entries are rationals in
lowest terms; there is no floating point anywhere in the computational core.
gmpy2's mpq is used when present (much faster bignum arithmetic), with
fractions.Fraction as a drop-in fallback.  Both types normalize on
construction, hash, compare and stringify the same way ("p/q" or "p").
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as _ratimpl

    _RAT_TYPES = None  # resolved below
except ImportError:  # pragma: no cover - exercised only without gmpy2
    from fractions import Fraction as _ratimpl

    _RAT_TYPES = None


def rat(a, b=None):
    """Build a rational from ints, another rational, or a 'p/q' string."""
    if b is None:
        return _ratimpl(a)
    return _ratimpl(a, b)


ZERO = rat(0)
ONE = rat(1)
TWO = rat(2)
HALF = rat(1, 2)

_RAT_TYPES = (type(ZERO), int)


def is_rat(x) -> bool:
    return isinstance(x, _RAT_TYPES)


def rat_from_json(v):
    """Parse a JSON-encoded rational: an int, or a string 'p' / 'p/q'."""
    if isinstance(v, bool):
        raise ValueError("boolean is not a rational")
    if isinstance(v, int):
        return rat(v)
    if isinstance(v, str):
        s = v.strip()
        if "/" in s:
            p, q = s.split("/", 1)
            return rat(int(p), int(q))
        return rat(int(s))
    raise ValueError(f"cannot parse rational from {v!r}")


def rat_to_json(x):
    """Encode a rational as a JSON int (when integral) or a 'p/q' string."""
    x = rat(x)
    if x.denominator == 1:
        return int(x.numerator)
    return f"{x.numerator}/{x.denominator}"


def rat_str(x) -> str:
    x = rat(x)
    if x.denominator == 1:
        return str(int(x.numerator))
    return f"{x.numerator}/{x.denominator}"
