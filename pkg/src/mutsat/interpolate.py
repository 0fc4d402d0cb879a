"""Exact reconstruction of Laurent polynomials from sample values.

This is what makes the pointwise evaluation strategy viable: run the
whole pipeline at rational sample points, then recover the exact
polynomial by interpolation inside a declared exponent window.
"""

from __future__ import annotations

from .laurent import ArithmeticDomainError, LaurentPoly
from .rationals import ZERO


class DegreeBoundViolation(ValueError):
    """Samples are inconsistent with the declared exponent window."""


def interpolate_laurent(samples, min_deg: int, max_deg: int) -> LaurentPoly:
    """Unique Laurent polynomial with support in [min_deg, max_deg] through the samples.

    samples: list of (point, value) pairs with distinct nonzero rational
    points.  Needs at least max_deg - min_deg + 1 samples; extras are
    used as consistency checks and raise DegreeBoundViolation on
    mismatch.
    """
    width = max_deg - min_deg + 1
    if width < 1:
        raise ArithmeticDomainError("empty exponent window")
    if len(samples) < width:
        raise ArithmeticDomainError(
            "need %d samples for window [%d, %d], got %d"
            % (width, min_deg, max_deg, len(samples))
        )
    pts = [p for p, _ in samples]
    if len(set(pts)) != len(pts):
        raise ArithmeticDomainError("duplicate sample points")
    if any(p == 0 for p in pts):
        raise ArithmeticDomainError("zero sample point")

    # Reduce to an ordinary polynomial g with p(a) = a^min_deg * g(a).
    xs = pts[:width]
    ys = [v * p ** (-min_deg) for p, v in samples[:width]]

    # Newton divided differences.
    coef = list(ys)
    for j in range(1, width):
        for i in range(width - 1, j - 1, -1):
            coef[i] = (coef[i] - coef[i - 1]) / (xs[i] - xs[i - j])

    # Expand the Newton form into monomial coefficients:
    # g = c_0 + c_1 (x-x_0) + c_2 (x-x_0)(x-x_1) + ...
    g = [ZERO] * width
    g[0] = coef[0]
    basis = [ZERO] * width  # running product (x - x_0)...(x - x_{k-1})
    basis[0] = ZERO + 1
    for k in range(1, width):
        xk = xs[k - 1]
        for i in range(k, 0, -1):
            basis[i] = basis[i - 1] - xk * basis[i]
        basis[0] = -xk * basis[0]
        ck = coef[k]
        if ck != 0:
            for i in range(k + 1):
                if basis[i] != 0:
                    g[i] = g[i] + ck * basis[i]

    result = LaurentPoly({min_deg + i: c for i, c in enumerate(g)})

    for p, v in samples[width:]:
        if result.evaluate(p) != v:
            raise DegreeBoundViolation(
                "held-out sample at a=%s disagrees; widen the window [%d, %d]"
                % (p, min_deg, max_deg)
            )
    return result
