"""Schur-function computations: products, plethysm with p_2, square splits.

The combinatorial engine behind the multiplicity scans: a Schur square
(s_mu)^2 splits into symmetric and exterior parts, and the multiplicity
of s_nu in each part is the dimension of the corresponding half-twist
eigenspace.  Squares are computed by Littlewood-Richardson tableau
enumeration; the plethysm s_mu(x^2) goes through the power-sum basis
with Murnaghan-Nakayama characters.
"""

from __future__ import annotations

from functools import lru_cache

from .partitions import as_partition, hooks_of, partitions_of
from .rationals import RAT


class ConsistencyError(ArithmeticError):
    """An internal identity that must hold exactly was violated."""


class SchurExpansion:
    """Integer combination of Schur functions, keyed by partition."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for mu, k in terms.items():
                if k:
                    self.terms[as_partition(mu)] = int(k)

    def __eq__(self, other):
        if not isinstance(other, SchurExpansion):
            return NotImplemented
        return self.terms == other.terms

    def __bool__(self):
        return bool(self.terms)

    def __getitem__(self, mu):
        return self.terms.get(as_partition(mu), 0)

    def __iter__(self):
        return iter(sorted(self.terms))

    def items(self):
        return [(mu, self.terms[mu]) for mu in sorted(self.terms)]

    def __add__(self, other):
        out = dict(self.terms)
        for mu, k in other.terms.items():
            w = out.get(mu, 0) + k
            if w:
                out[mu] = w
            else:
                out.pop(mu, None)
        r = SchurExpansion()
        r.terms = out
        return r

    def __sub__(self, other):
        out = dict(self.terms)
        for mu, k in other.terms.items():
            w = out.get(mu, 0) - k
            if w:
                out[mu] = w
            else:
                out.pop(mu, None)
        r = SchurExpansion()
        r.terms = out
        return r

    def halved(self):
        out = {}
        for mu, k in self.terms.items():
            if k % 2:
                raise ConsistencyError("odd multiplicity %d at %r before halving" % (k, mu))
            out[mu] = k // 2
        r = SchurExpansion()
        r.terms = out
        return r

    def restrict_rows(self, max_rows: int):
        r = SchurExpansion()
        r.terms = {mu: k for mu, k in self.terms.items() if len(mu) <= max_rows}
        return r

    def __repr__(self):
        return "SchurExpansion(%s)" % format_expansion(self)


def format_expansion(e: SchurExpansion) -> str:
    """Text grammar: 'k*s[l1,l2,...]' terms joined by ' + ', partition-sorted."""
    if not e.terms:
        return "0"
    parts = []
    for mu in sorted(e.terms):
        k = e.terms[mu]
        body = "s[%s]" % ",".join(str(x) for x in mu)
        parts.append(body if k == 1 else "%d*%s" % (k, body))
    return " + ".join(parts)


def parse_expansion(text: str) -> SchurExpansion:
    text = text.strip()
    if text == "0":
        return SchurExpansion()
    terms = {}
    for tok in text.split(" + "):
        tok = tok.strip()
        if "*" in tok:
            ks, body = tok.split("*")
            k = int(ks)
        else:
            k, body = 1, tok
        if not (body.startswith("s[") and body.endswith("]")):
            raise ValueError("bad term %r" % tok)
        inner = body[2:-1]
        mu = as_partition(int(x) for x in inner.split(",")) if inner else ()
        terms[mu] = terms.get(mu, 0) + k
    return SchurExpansion(terms)


# -- Littlewood-Richardson products -------------------------------------


def _lr_fillings(lam, mu, nu) -> int:
    """Count LR skew tableaux of shape lam/mu and content nu.

    Cells are filled in reading order (rows top to bottom, right to
    left), which lets the lattice condition be enforced on the fly.
    """
    rows = len(lam)
    mu = mu + (0,) * (rows - len(mu))
    nletters = len(nu)
    counts = [0] * (nletters + 1)  # counts[0] is a sentinel infinity substitute
    tableau = [[0] * lam[r] for r in range(rows)]

    cells = []
    for r in range(rows):
        for c in range(lam[r] - 1, mu[r] - 1, -1):
            cells.append((r, c))

    total = 0

    def place(idx):
        nonlocal total
        if idx == len(cells):
            total += 1
            return
        r, c = cells[idx]
        right = tableau[r][c + 1] if c + 1 < lam[r] else nletters
        # strictness binds only against filled cells; cells still inside mu
        # (c < mu[r-1]) are empty
        above = tableau[r - 1][c] if r > 0 and mu[r - 1] <= c < lam[r - 1] else 0
        lo = above + 1
        hi = right
        for v in range(lo, hi + 1):
            if counts[v] >= nu[v - 1]:
                continue
            if v > 1 and counts[v] + 1 > counts[v - 1]:
                continue  # lattice violation
            counts[v] += 1
            tableau[r][c] = v
            place(idx + 1)
            tableau[r][c] = 0
            counts[v] -= 1

    place(0)
    return total


@lru_cache(maxsize=None)
def lr_mult(mu, nu) -> SchurExpansion:
    """Expansion of s_mu * s_nu with Littlewood-Richardson coefficients."""
    mu, nu = as_partition(mu), as_partition(nu)
    if not nu:
        return SchurExpansion({mu: 1}) if mu else SchurExpansion({(): 1})
    if not mu:
        return SchurExpansion({nu: 1})
    n = sum(mu) + sum(nu)
    out = {}
    maxrows = len(mu) + len(nu)
    for lam in partitions_of(n, max_rows=maxrows, max_part=mu[0] + nu[0]):
        if not contains_shape(lam, mu):
            continue
        k = _lr_fillings(lam, mu, nu)
        if k:
            out[lam] = k
    return SchurExpansion(out)


def contains_shape(lam, mu):
    if len(mu) > len(lam):
        return False
    return all(lam[i] >= mu[i] for i in range(len(mu)))


# -- Murnaghan-Nakayama characters ---------------------------------------


@lru_cache(maxsize=None)
def _beta_set(lam):
    ell = len(lam)
    return tuple(sorted(lam[i] + (ell - 1 - i) for i in range(ell)))


def _partition_from_beta(beta):
    ell = len(beta)
    lam = tuple(
        sorted((b - i for i, b in enumerate(sorted(beta))), reverse=True)
    )
    lam = tuple(x for x in lam if x)
    return lam


@lru_cache(maxsize=None)
def character(lam, rho) -> int:
    """Symmetric group character chi^lam(rho) by border-strip recursion."""
    lam, rho = as_partition(lam), as_partition(rho)
    if sum(lam) != sum(rho):
        raise ValueError("size mismatch")
    if not lam:
        return 1
    k = rho[0]
    rest = rho[1:]
    beta = set(_beta_set(lam))
    total = 0
    for b in beta:
        nb = b - k
        if nb < 0 or nb in beta:
            continue
        crossings = sum(1 for x in beta if nb < x < b)
        newbeta = frozenset(beta - {b} | {nb})
        sub = _partition_from_beta(tuple(newbeta))
        total += (-1) ** crossings * character(sub, rest)
    return total


def _z_order(rho) -> int:
    z = 1
    mult = {}
    for part in rho:
        mult[part] = mult.get(part, 0) + 1
    for k, m in mult.items():
        z *= k**m
        for i in range(1, m + 1):
            z *= i
    return z


@lru_cache(maxsize=None)
def plethysm_p2(mu) -> SchurExpansion:
    """Signed Schur expansion of s_mu(x^2), i.e. the plethysm s_mu o p_2.

    s_mu is expanded over power sums with characters, each p_k is sent to
    p_2k, and the result converted back:
      coeff of s_lam = sum_rho chi^mu(rho) chi^lam(2 rho) / z_rho.
    """
    mu = as_partition(mu)
    n = sum(mu)
    if n == 0:
        return SchurExpansion({(): 1})
    rhos = [(rho, _z_order(rho), character(mu, rho)) for rho in partitions_of(n)]
    out = {}
    for lam in partitions_of(2 * n):
        acc = RAT(0)
        for rho, z, chimu in rhos:
            if chimu == 0:
                continue
            doubled = as_partition(sorted((2 * p for p in rho), reverse=True))
            acc += RAT(chimu * character(lam, doubled), z)
        if acc != 0:
            if acc.denominator != 1:
                raise ConsistencyError("non-integer plethysm coefficient at %r" % (lam,))
            out[lam] = int(acc)
    return SchurExpansion(out)


# -- squares and scans -----------------------------------------------------


def square_split(mu):
    """(symmetric, exterior) parts of the Schur square of s_mu.

    sym = (s_mu^2 + s_mu o p_2)/2, ext = (s_mu^2 - s_mu o p_2)/2; the parts
    add back to the full square and all multiplicities are nonnegative.
    """
    mu = as_partition(mu)
    square = lr_mult(mu, mu)
    pleth = plethysm_p2(mu)
    sym = (square + pleth).halved()
    ext = (square - pleth).halved()
    for part in (sym, ext):
        for lam, k in part.terms.items():
            if k < 0:
                raise ConsistencyError("negative multiplicity %d at %r" % (k, lam))
    return sym, ext


def _scan(mus):
    report = []
    for mu in mus:
        sym, ext = square_split(mu)
        for name, part in (("sym", sym), ("ext", ext)):
            for nu, k in part.items():
                if k > 1:
                    report.append((mu, name, nu, k))
    report.sort(key=lambda row: (sum(row[0]), row[0], row[2], row[1]))
    return report


def multiplicity_scan(max_size: int):
    """All (mu, part, nu, mult>1) entries over every |mu| <= max_size."""
    mus = []
    for n in range(1, max_size + 1):
        mus.extend(partitions_of(n))
    return _scan(mus)


def hook_scan(max_size: int):
    """The same scan restricted to hook partitions."""
    mus = []
    for n in range(1, max_size + 1):
        mus.extend(hooks_of(n))
    return _scan(mus)


# -- mixed-orientation sl(3) decomposition ---------------------------------


def mixed_sl3_decomp(r: int, t: int):
    """Multiplicities of sl(3) irreducibles in V^r tensor (V*)^t.

    V is the fundamental (1); its dual is (1,1).  Products are cut to
    three rows and full columns stripped, so keys are sl(3) labels with
    at most two rows.
    """
    if r < 0 or t < 0:
        raise ValueError("tensor powers must be nonnegative")
    acc = {(): 1}
    for factor in [(1,)] * r + [(1, 1)] * t:
        nxt = {}
        for lam, mult in acc.items():
            prod = lr_mult(lam, factor).restrict_rows(3)
            for out_lam, k in prod.items():
                key = _strip_columns(out_lam)
                nxt[key] = nxt.get(key, 0) + mult * k
        acc = nxt
    return dict(sorted(acc.items()))


def _strip_columns(lam):
    if len(lam) == 3 and lam[2] > 0:
        k = lam[2]
        return tuple(x for x in (lam[0] - k, lam[1] - k) if x)
    return lam


def mixed_square_exceptions(r: int, t: int):
    """Constituents of V^r (V*)^t whose sl(3) square has a repeated summand.

    The multiplicity is counted among partitions with at most 3 rows,
    which is what survives as an sl(3) highest-weight space.
    """
    out = []
    for lam, mult in mixed_sl3_decomp(r, t).items():
        if mult <= 0:
            continue
        sym, ext = square_split(lam)
        hit = any(
            k > 1 for part in (sym.restrict_rows(3), ext.restrict_rows(3))
            for _, k in part.items()
        )
        if hit:
            out.append(lam)
    return out
