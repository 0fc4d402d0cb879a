"""Partition combinatorics.

Partitions are plain tuples of weakly decreasing positive integers; the
empty partition is ().
"""

from __future__ import annotations

from functools import lru_cache
from math import factorial


def as_partition(seq):
    t = tuple(int(x) for x in seq if x)
    if any(t[i] < t[i + 1] for i in range(len(t) - 1)) or any(x < 0 for x in t):
        raise ValueError("not weakly decreasing: %r" % (seq,))
    return t


def partitions_of(n: int, max_rows=None, max_part=None):
    """All partitions of n, largest-part-first lexicographic order."""
    if n == 0:
        yield ()
        return
    cap = n if max_part is None else min(n, max_part)
    rows = n if max_rows is None else max_rows
    if rows <= 0 or cap <= 0:
        return
    for first in range(cap, 0, -1):
        for rest in partitions_of(n - first, rows - 1, first):
            yield (first,) + rest


def conjugate(mu):
    if not mu:
        return ()
    out = []
    for j in range(mu[0]):
        out.append(sum(1 for part in mu if part > j))
    return tuple(out)


def is_hook(mu):
    return len(mu) <= 1 or all(part == 1 for part in mu[1:])


def hooks_of(n: int):
    """All hook partitions (a, 1, ..., 1) of n."""
    for arm in range(n, 0, -1):
        yield (arm,) + (1,) * (n - arm)


def contains(lam, mu):
    if len(mu) > len(lam):
        return False
    return all(lam[i] >= mu[i] for i in range(len(mu)))


def hook_length(mu, i, j, conj=None):
    conj = conjugate(mu) if conj is None else conj
    return (mu[i] - j) + (conj[j] - i) - 1


@lru_cache(maxsize=None)
def syt_count(mu) -> int:
    """Number of standard Young tableaux (hook-length formula)."""
    n = sum(mu)
    conj = conjugate(mu)
    denom = 1
    for i, row in enumerate(mu):
        for j in range(row):
            denom *= hook_length(mu, i, j, conj)
    count, rem = divmod(factorial(n), denom)
    assert rem == 0
    return count


@lru_cache(maxsize=None)
def sl_dim(mu, N: int) -> int:
    """Dimension of the sl(N) irreducible labelled by mu (hook-content formula)."""
    if len(mu) > N:
        return 0
    conj = conjugate(mu)
    num = 1
    den = 1
    for i, row in enumerate(mu):
        for j in range(row):
            num *= N + j - i
            den *= hook_length(mu, i, j, conj)
    dim, rem = divmod(num, den)
    assert rem == 0
    return dim


def sl3_normalize(lam):
    """Reduce a <=3-row partition to its sl(3) label by stripping full columns."""
    if len(lam) > 3:
        raise ValueError("partition has more than 3 rows")
    if len(lam) < 3 or lam[2] == 0:
        return tuple(x for x in lam if x)
    k = lam[2]
    return tuple(x for x in (lam[0] - k, lam[1] - k) if x)


def ssyt_fillings(mu, nvars: int):
    """Semistandard tableaux of shape mu with entries in 1..nvars, as row tuples."""
    if not mu:
        yield ()
        return
    rows = len(mu)

    def fill(r, above, acc):
        if r == rows:
            yield tuple(acc)
            return
        width = mu[r]

        def fill_row(j, row):
            if j == width:
                yield tuple(row)
                return
            lo = row[j - 1] if j else 1
            if above is not None and j < len(above):
                lo = max(lo, above[j] + 1)
            for v in range(lo, nvars + 1):
                yield from fill_row(j + 1, row + [v])

        for row in fill_row(0, []):
            yield from fill(r + 1, row, acc + [row])

    yield from fill(0, None, [])


def schur_eval(mu, xs):
    """Exact value of the Schur polynomial s_mu(x_1..x_n) by tableau sum."""
    total = None
    for tab in ssyt_fillings(mu, len(xs)):
        term = None
        for row in tab:
            for v in row:
                term = xs[v - 1] if term is None else term * xs[v - 1]
        if term is None:
            term = 1
        total = term if total is None else total + term
    if total is None:
        total = xs[0] / xs[0] if xs else 1  # empty partition
    return total


def weight_monomials(mu, nvars: int):
    """Multiset of exponent vectors of s_mu in nvars variables, as a dict."""
    out = {}
    for tab in ssyt_fillings(mu, nvars):
        w = [0] * nvars
        for row in tab:
            for v in row:
                w[v - 1] += 1
        key = tuple(w)
        out[key] = out.get(key, 0) + 1
    return out
