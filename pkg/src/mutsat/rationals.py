"""Exact rational scalars.

gmpy2.mpq is used when available (much faster arbitrary-precision
arithmetic); fractions.Fraction is a drop-in fallback.  Both expose
.numerator/.denominator and print as "p/q", which the text formats
below rely on.
"""

from __future__ import annotations

try:
    from gmpy2 import mpq as RAT
    from gmpy2 import isqrt as _isqrt

    HAVE_GMPY2 = True
except ImportError:  # pragma: no cover
    from fractions import Fraction as RAT
    from math import isqrt as _isqrt

    HAVE_GMPY2 = False

ZERO = RAT(0)
ONE = RAT(1)


def rat(num, den=1):
    """Build a reduced rational from integers (or parse a 'p/q' string)."""
    if isinstance(num, str):
        num = num.strip()
        if "/" in num:
            p, q = num.split("/")
            return RAT(int(p), int(q))
        return RAT(int(num))
    return RAT(num, den)


def rat_sqrt(x):
    """Exact square root of a rational, or None if x is not a perfect square."""
    if x < 0:
        return None
    p, q = x.numerator, x.denominator
    rp, rq = _isqrt(p), _isqrt(q)
    if rp * rp == p and rq * rq == q:
        return RAT(rp, rq)
    return None


def rat_text(x) -> str:
    """Canonical 'p' or 'p/q' form; round-trips through rat()."""
    if x.denominator == 1:
        return str(x.numerator)
    return "%d/%d" % (x.numerator, x.denominator)
