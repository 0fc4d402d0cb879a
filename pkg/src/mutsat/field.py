"""The dual-mode coefficient field.

Every matrix computation runs over one of two interchangeable scalar
realisations:

  * symbolic  -- scalars are RationalFunction values in a,
  * pointwise -- scalars are plain rationals, a fixed to a sample point.

Scalars carry their own arithmetic; the field object only provides
construction (powers of a, embeddings) and mode bookkeeping, so matrix
code is written once and runs in either mode.
"""

from __future__ import annotations

import random

from .laurent import LaurentPoly, RationalFunction, format_ratfunc, parse_ratfunc
from .rationals import RAT, rat, rat_text


class SingularSampleError(ValueError):
    """A pointwise computation hit a degenerate sample point; resample."""


class SymbolicField:
    mode = "symbolic"
    sample = None

    def zero(self):
        return RationalFunction.from_laurent(LaurentPoly())

    def one(self):
        return RationalFunction.from_rat(RAT(1))

    def from_int(self, n):
        return RationalFunction.from_rat(RAT(n))

    def from_rat(self, v):
        return RationalFunction.from_rat(v)

    def a_power(self, k):
        return RationalFunction.a_power(k)

    def from_laurent(self, p: LaurentPoly):
        return RationalFunction.from_laurent(p)

    def scalar_text(self, x) -> str:
        return format_ratfunc(x)

    def parse_scalar(self, text: str):
        return parse_ratfunc(text)

    def describe(self):
        return {"mode": "symbolic"}

    def __repr__(self):
        return "SymbolicField()"


class PointwiseField:
    mode = "pointwise"

    def __init__(self, a0):
        a0 = RAT(a0)
        if a0 == 0 or a0 == 1 or a0 == -1:
            raise ValueError("sample point must avoid 0 and +-1")
        self.sample = a0

    def zero(self):
        return RAT(0)

    def one(self):
        return RAT(1)

    def from_int(self, n):
        return RAT(n)

    def from_rat(self, v):
        return v

    def a_power(self, k):
        return self.sample**k

    def from_laurent(self, p: LaurentPoly):
        return p.evaluate(self.sample)

    def scalar_text(self, x) -> str:
        return rat_text(x)

    def parse_scalar(self, text: str):
        return rat(text)

    def describe(self):
        return {"mode": "pointwise", "sample": rat_text(self.sample)}

    def __repr__(self):
        return "PointwiseField(%s)" % self.sample


def specialize(x, a0):
    """Value of a symbolic scalar at a = a0."""
    return x.evaluate(a0)


def sample_points(seed: int):
    """Deterministic infinite stream of generic sample points.

    Small positive rationals n/7 with n >= 2 not divisible by 7: never
    0 or +-1, and never a root of unity, so the eigenvalue collisions
    that make a sample degenerate cannot occur.  The seed fixes the
    order only; any exact result is sample-independent.
    """
    rng = random.Random(seed)
    base = 2
    while True:
        block = [n for n in range(base, base + 96) if n % 7 != 0]
        rng.shuffle(block)
        for n in block:
            yield RAT(n, 7)
        base += 96
