"""Laurent polynomials and rational functions in the quarter parameter.

Everything downstream is expressed in a single variable a, with s = a^2
and q = a^4 as derived notations.  Coefficients are exact rationals.
A Laurent polynomial is stored as a map {exponent: nonzero coefficient};
exponents may be negative.
"""

from __future__ import annotations

from .rationals import ONE, RAT, ZERO, rat, rat_text


class ArithmeticDomainError(ValueError):
    """Operation outside its mathematical domain (e.g. gcd(0, 0))."""


class LaurentPoly:
    __slots__ = ("c",)

    def __init__(self, coeffs=None):
        c = {}
        if coeffs:
            for e, v in coeffs.items():
                v = v if isinstance(v, type(ONE)) else RAT(v)
                if v != 0:
                    c[int(e)] = v
        self.c = c

    # -- constructors -------------------------------------------------

    @staticmethod
    def zero():
        return LaurentPoly()

    @staticmethod
    def const(v):
        return LaurentPoly({0: v})

    @staticmethod
    def monomial(coeff, exp):
        return LaurentPoly({exp: coeff})

    @staticmethod
    def a_power(exp):
        return LaurentPoly({exp: 1})

    # -- queries ------------------------------------------------------

    def is_zero(self):
        return not self.c

    def min_exp(self):
        if not self.c:
            raise ArithmeticDomainError("zero polynomial has no exponents")
        return min(self.c)

    def max_exp(self):
        if not self.c:
            raise ArithmeticDomainError("zero polynomial has no exponents")
        return max(self.c)

    def is_monomial(self):
        return len(self.c) == 1

    def support(self):
        return sorted(self.c)

    def __len__(self):
        return len(self.c)

    def __eq__(self, other):
        if not isinstance(other, LaurentPoly):
            return NotImplemented
        return self.c == other.c

    def __hash__(self):
        return hash(frozenset(self.c.items()))

    def __bool__(self):
        return bool(self.c)

    # -- arithmetic ---------------------------------------------------

    def __add__(self, other):
        out = dict(self.c)
        for e, v in other.c.items():
            w = out.get(e, ZERO) + v
            if w == 0:
                out.pop(e, None)
            else:
                out[e] = w
        r = LaurentPoly.__new__(LaurentPoly)
        r.c = out
        return r

    def __sub__(self, other):
        out = dict(self.c)
        for e, v in other.c.items():
            w = out.get(e, ZERO) - v
            if w == 0:
                out.pop(e, None)
            else:
                out[e] = w
        r = LaurentPoly.__new__(LaurentPoly)
        r.c = out
        return r

    def __neg__(self):
        r = LaurentPoly.__new__(LaurentPoly)
        r.c = {e: -v for e, v in self.c.items()}
        return r

    def __mul__(self, other):
        if isinstance(other, LaurentPoly):
            out = {}
            for e1, v1 in self.c.items():
                for e2, v2 in other.c.items():
                    e = e1 + e2
                    w = out.get(e, ZERO) + v1 * v2
                    if w == 0:
                        out.pop(e, None)
                    else:
                        out[e] = w
            r = LaurentPoly.__new__(LaurentPoly)
            r.c = out
            return r
        v = other if isinstance(other, type(ONE)) else RAT(other)
        if v == 0:
            return LaurentPoly()
        r = LaurentPoly.__new__(LaurentPoly)
        r.c = {e: w * v for e, w in self.c.items()}
        return r

    __rmul__ = __mul__

    def __pow__(self, n):
        if n < 0:
            if not self.is_monomial():
                raise ArithmeticDomainError("negative power of a non-monomial")
            e, v = next(iter(self.c.items()))
            return LaurentPoly({e * n: v**n})
        out = LaurentPoly.const(1)
        base = self
        while n:
            if n & 1:
                out = out * base
            base = base * base
            n >>= 1
        return out

    def shift(self, k):
        """Multiply by a^k."""
        r = LaurentPoly.__new__(LaurentPoly)
        r.c = {e + k: v for e, v in self.c.items()}
        return r

    def evaluate(self, a0):
        """Exact value at a = a0 (a0 a nonzero rational)."""
        total = ZERO
        for e, v in self.c.items():
            total += v * a0**e
        return total

    # -- content / division -------------------------------------------

    def monomial_content(self):
        """Exponent k with self = a^k * (ordinary poly with nonzero constant term)."""
        return self.min_exp()

    def poly_part(self):
        """The ordinary-polynomial part: self shifted so its lowest exponent is 0."""
        return self.shift(-self.min_exp())

    def leading_coeff(self):
        return self.c[self.max_exp()]

    def monic(self):
        lc = self.leading_coeff()
        if lc == 1:
            return self
        return self * (ONE / lc)


def divmod_poly(p: LaurentPoly, q: LaurentPoly):
    """Euclidean division of the polynomial parts: p = q*quot + rem.

    Both inputs must have min_exp() == 0 (ordinary polynomials); rem has
    degree < deg q.
    """
    if q.is_zero():
        raise ArithmeticDomainError("division by zero polynomial")
    dq = q.max_exp()
    qc = q.c
    lead = qc[dq]
    rem = dict(p.c)
    quot = {}
    while rem:
        dr = max(rem)
        if dr < dq:
            break
        f = rem[dr] / lead
        k = dr - dq
        quot[k] = f
        for e, v in qc.items():
            ee = e + k
            w = rem.get(ee, ZERO) - f * v
            if w == 0:
                rem.pop(ee, None)
            else:
                rem[ee] = w
    return LaurentPoly(quot), LaurentPoly(rem)


def exact_div(p: LaurentPoly, q: LaurentPoly):
    """p / q when the division is exact in the Laurent ring, else None."""
    if q.is_zero():
        raise ArithmeticDomainError("division by zero polynomial")
    if p.is_zero():
        return LaurentPoly()
    kp, kq = p.min_exp(), q.min_exp()
    quot, rem = divmod_poly(p.poly_part(), q.poly_part())
    if not rem.is_zero():
        return None
    return quot.shift(kp - kq)


def poly_gcd(p: LaurentPoly, q: LaurentPoly) -> LaurentPoly:
    """Monic gcd of the polynomial parts (monomial content is a unit here).

    Use monomial_content() on the inputs when the shared a-power matters.
    """
    if p.is_zero() and q.is_zero():
        raise ArithmeticDomainError("gcd(0, 0) is undefined")
    if p.is_zero():
        return q.poly_part().monic()
    if q.is_zero():
        return p.poly_part().monic()
    x, y = p.poly_part(), q.poly_part()
    while not y.is_zero():
        _, r = divmod_poly(x, y)
        x, y = y, r.poly_part() if not r.is_zero() else r
    return x.monic()


def unit_monomial_quotient(p: LaurentPoly, q: LaurentPoly):
    """(sign, k) with p == sign * a^k * q exactly, else None.

    Results of the tangle calculations are defined up to such units; this
    is the canonical equality test for them.
    """
    if q.is_zero():
        raise ArithmeticDomainError("comparison against the zero polynomial")
    if p.is_zero() or len(p) != len(q):
        return None
    k = p.min_exp() - q.min_exp()
    if p.max_exp() - q.max_exp() != k:
        return None
    sign = p.c[p.min_exp()] / q.c[q.min_exp()]
    if sign != 1 and sign != -1:
        return None
    for e, v in q.c.items():
        if p.c.get(e + k) != sign * v:
            return None
    return (1 if sign == 1 else -1), k


# -- text format -------------------------------------------------------
#
# Terms in descending exponent order, written in q = a^4 whenever every
# exponent is divisible by 4, otherwise in a.  "2*q^6 - q^5 + 1" style;
# parse(format(p)) == p bit-exactly.


def format_laurent(p: LaurentPoly) -> str:
    if p.is_zero():
        return "0"
    use_q = all(e % 4 == 0 for e in p.c)
    var, div = ("q", 4) if use_q else ("a", 1)
    parts = []
    for e in sorted(p.c, reverse=True):
        v = p.c[e]
        neg = v < 0
        mag = -v if neg else v
        ee = e // div
        if ee == 0:
            body = rat_text(mag)
        else:
            pw = var if ee == 1 else "%s^%d" % (var, ee)
            body = pw if mag == 1 else "%s*%s" % (rat_text(mag), pw)
        if not parts:
            parts.append("-" + body if neg else body)
        else:
            parts.append(("- " if neg else "+ ") + body)
    return " ".join(parts)


def parse_laurent(text: str) -> LaurentPoly:
    text = text.strip()
    if text == "0":
        return LaurentPoly()
    toks = text.replace("- ", "+ -").split("+ ")
    coeffs = {}
    for tok in toks:
        tok = tok.strip()
        if not tok:
            raise ValueError("empty term in %r" % text)
        sign = ONE
        if tok.startswith("-"):
            sign = -ONE
            tok = tok[1:].strip()
        if "*" in tok:
            cs, ps = tok.split("*")
            coeff = rat(cs)
        elif tok[0] in "aq":
            coeff, ps = ONE, tok
        else:
            coeff, ps = rat(tok), None
        if ps is None:
            e = 0
        else:
            var = ps[0]
            if var not in "aq":
                raise ValueError("bad variable in term %r" % tok)
            mult = 4 if var == "q" else 1
            e = mult * (int(ps[2:]) if ps[1:].startswith("^") else 1)
            if len(ps) > 1 and not ps[1:].startswith("^"):
                raise ValueError("bad power syntax in term %r" % tok)
        e0 = coeffs.get(e, ZERO) + sign * coeff
        if e0 == 0:
            coeffs.pop(e, None)
        else:
            coeffs[e] = e0
    return LaurentPoly(coeffs)


# -- rational functions ------------------------------------------------


class RationalFunction:
    """Quotient of Laurent polynomials, kept in canonical reduced form.

    Canonical form: numerator and denominator coprime, denominator an
    ordinary polynomial (lowest exponent 0) whose lowest-degree
    coefficient is +1.  Needed because inverting eigenbasis matrices
    produces entries outside the Laurent ring.
    """

    __slots__ = ("num", "den")

    def __init__(self, num: LaurentPoly, den: LaurentPoly = None, _canonical=False):
        if den is None:
            den = LaurentPoly.const(1)
        if _canonical:
            self.num, self.den = num, den
            return
        if den.is_zero():
            raise ArithmeticDomainError("zero denominator")
        if num.is_zero():
            self.num = LaurentPoly()
            self.den = LaurentPoly.const(1)
            return
        g = poly_gcd(num, den)
        if g.max_exp() > 0:
            num = exact_div(num, g)
            den = exact_div(den, g)
        k = den.min_exp()
        if k:
            den = den.shift(-k)
            num = num.shift(-k)
        low = den.c[0]
        if low != 1:
            inv = ONE / low
            num = num * inv
            den = den * inv
        self.num, self.den = num, den

    # -- constructors --------------------------------------------------

    @staticmethod
    def from_laurent(p: LaurentPoly):
        return RationalFunction(p, LaurentPoly.const(1), _canonical=True)

    @staticmethod
    def from_rat(v):
        return RationalFunction.from_laurent(LaurentPoly.const(v))

    @staticmethod
    def a_power(exp):
        return RationalFunction.from_laurent(LaurentPoly.a_power(exp))

    # -- queries -------------------------------------------------------

    def is_zero(self):
        return self.num.is_zero()

    def as_laurent(self):
        """The underlying Laurent polynomial, or None if truly fractional."""
        if self.den == LaurentPoly.const(1):
            return self.num
        return None

    def evaluate(self, a0):
        d = self.den.evaluate(a0)
        if d == 0:
            raise ZeroDivisionError("denominator vanishes at sample point")
        return self.num.evaluate(a0) / d

    def __eq__(self, other):
        if isinstance(other, RationalFunction):
            return self.num == other.num and self.den == other.den
        if isinstance(other, LaurentPoly):
            return self.den == LaurentPoly.const(1) and self.num == other
        if isinstance(other, (int, type(ONE))):
            return self == RationalFunction.from_rat(RAT(other))
        return NotImplemented

    def __hash__(self):
        return hash((self.num, self.den))

    def __bool__(self):
        return not self.num.is_zero()

    # -- arithmetic ----------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, RationalFunction):
            return other
        if isinstance(other, LaurentPoly):
            return RationalFunction.from_laurent(other)
        if isinstance(other, (int, type(ONE))):
            return RationalFunction.from_rat(RAT(other))
        return None

    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.den + o.num * self.den, self.den * o.den)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.den - o.num * self.den, self.den * o.den)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o - self

    def __neg__(self):
        return RationalFunction(-self.num, self.den, _canonical=True)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return RationalFunction(self.num * o.num, self.den * o.den)

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        if o.is_zero():
            raise ZeroDivisionError("division by zero rational function")
        return RationalFunction(self.num * o.den, self.den * o.num)

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        return o / self

    def __pow__(self, n):
        if n < 0:
            return RationalFunction(self.den, self.num) ** (-n)
        return RationalFunction(self.num**n, self.den**n)


def format_ratfunc(r: RationalFunction) -> str:
    if r.den == LaurentPoly.const(1):
        return format_laurent(r.num)
    return "%s :: %s" % (format_laurent(r.num), format_laurent(r.den))


def parse_ratfunc(text: str) -> RationalFunction:
    if " :: " in text:
        ns, ds = text.split(" :: ")
        return RationalFunction(parse_laurent(ns), parse_laurent(ds))
    return RationalFunction.from_laurent(parse_laurent(text))
