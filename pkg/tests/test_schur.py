"""Symmetric-function engine: LR products, plethysm, squares, scans.

The plethysm has an independent brute-force oracle: evaluate s_mu at
squared variables in 6 unknowns and decompose the resulting symmetric
polynomial by repeated leading-term subtraction.
"""

import random
from functools import lru_cache

from mutsat.partitions import (
    conjugate,
    hooks_of,
    is_hook,
    partitions_of,
    sl_dim,
    syt_count,
    weight_monomials,
)
from mutsat.schur import (
    SchurExpansion,
    format_expansion,
    hook_scan,
    lr_mult,
    mixed_sl3_decomp,
    mixed_square_exceptions,
    multiplicity_scan,
    parse_expansion,
    plethysm_p2,
    square_split,
)

PAPER_H2_S42 = parse_expansion(
    "s[8,4] + s[8,2,2] + s[7,4,1] + s[7,3,2] + s[7,3,1,1] + s[6,6] + s[6,5,1]"
    " + 2*s[6,4,2] + s[6,3,2,1] + s[6,2,2,2] + s[5,5,1,1] + s[5,4,3]"
    " + s[5,4,2,1] + s[5,3,3,1] + s[4,4,4] + s[4,4,2,2]"
)


class TestLittlewoodRichardson:
    def test_square_of_s1(self):
        assert lr_mult((1,), (1,)) == SchurExpansion({(2,): 1, (1, 1): 1})

    def test_pieri_on_22(self):
        got = lr_mult((2, 2), (2,))
        assert got == SchurExpansion({(4, 2): 1, (3, 2, 1): 1, (2, 2, 2): 1})

    def test_sl3_dimensions_27_8_1(self):
        got = lr_mult((2, 2), (2,))
        dims = sorted((sl_dim(nu, 3) for nu in got), reverse=True)
        assert dims == [27, 8, 1]
        assert sum(dims) == sl_dim((2, 2), 3) * sl_dim((2,), 3)

    def test_symmetry(self):
        rng = random.Random(4)
        pool = [p for n in range(0, 5) for p in partitions_of(n)]
        for _ in range(12):
            mu, nu = rng.choice(pool), rng.choice(pool)
            assert lr_mult(mu, nu) == lr_mult(nu, mu)

    def test_empty_partition_identity(self):
        assert lr_mult((), (3, 1)) == SchurExpansion({(3, 1): 1})


# -- plethysm oracle: brute force in 6 variables ---------------------------

NVARS = 6


@lru_cache(maxsize=None)
def _schur_monomials(lam):
    return weight_monomials(lam, NVARS)


def _brute_force_plethysm(mu):
    """Decompose s_mu(x^2) in 6 variables by leading-term subtraction."""
    poly = {}
    for expo, count in weight_monomials(mu, NVARS).items():
        doubled = tuple(2 * e for e in expo)
        poly[doubled] = poly.get(doubled, 0) + count
    out = {}
    while poly:
        lead = max(poly)
        coeff = poly[lead]
        lam = tuple(x for x in lead if x)
        assert tuple(sorted(lam, reverse=True)) == lam, "leading term not dominant"
        out[lam] = coeff
        for expo, count in _schur_monomials(lam).items():
            w = poly.get(expo, 0) - coeff * count
            if w:
                poly[expo] = w
            else:
                poly.pop(expo, None)
    return SchurExpansion(out)


class TestPlethysm:
    def test_p2_itself(self):
        assert plethysm_p2((1,)) == SchurExpansion({(2,): 1, (1, 1): -1})

    def test_s2_of_squares(self):
        assert plethysm_p2((2,)) == SchurExpansion(
            {(4,): 1, (3, 1): -1, (2, 2): 1}
        )

    def test_brute_force_oracle_through_degree_5(self):
        for n in range(1, 6):
            for mu in partitions_of(n):
                expect = _brute_force_plethysm(mu)
                got = plethysm_p2(mu).restrict_rows(NVARS)
                assert got == expect, "plethysm mismatch at %s" % (mu,)

    def test_signed_dimension_consistency(self):
        # evaluating at x_i = 1 in N variables: s_mu(1^N)^... the plethysm
        # preserves total dimension: s_mu(x^2) at x=1 equals s_mu(1)
        for mu in [(2, 1), (3,), (2, 2)]:
            total = sum(
                k * sl_dim(lam, 3) for lam, k in plethysm_p2(mu).items()
            )
            assert total == sl_dim(mu, 3)


class TestSquareSplit:
    def test_s1_split(self):
        sym, ext = square_split((1,))
        assert sym == SchurExpansion({(2,): 1})
        assert ext == SchurExpansion({(1, 1): 1})

    def test_paper_h2_s42(self):
        sym, _ = square_split((4, 2))
        assert sym == PAPER_H2_S42

    def test_multiplicity_3_splits_2_plus_1(self):
        sym, ext = square_split((4, 2))
        assert lr_mult((4, 2), (4, 2))[(6, 4, 2)] == 3
        assert sym[(6, 4, 2)] == 2
        assert ext[(6, 4, 2)] == 1

    def test_sym_plus_ext_is_square_through_7(self):
        for n in range(1, 8):
            for mu in partitions_of(n):
                sym, ext = square_split(mu)
                assert sym + ext == lr_mult(mu, mu)

    def test_dimension_consistency(self):
        for n_vars in (3, 4, 5):
            for n in range(1, 7):
                for mu in partitions_of(n):
                    sym, ext = square_split(mu)
                    total = sum(k * sl_dim(nu, n_vars) for nu, k in sym.items())
                    total += sum(k * sl_dim(nu, n_vars) for nu, k in ext.items())
                    assert total == sl_dim(mu, n_vars) ** 2

    def test_nonnegative(self):
        for n in range(1, 7):
            for mu in partitions_of(n):
                sym, ext = square_split(mu)
                assert all(k > 0 for _, k in sym.items())
                assert all(k > 0 for _, k in ext.items())


class TestScans:
    def test_empty_through_degree_5(self):
        assert multiplicity_scan(5) == []

    def test_degree_6_exceptional_sets(self):
        report = multiplicity_scan(6)
        sym_mus = {mu for mu, part, _, _ in report if part == "sym"}
        ext_mus = {mu for mu, part, _, _ in report if part == "ext"}
        assert sym_mus == {(4, 2), (2, 2, 1, 1), (3, 2, 1)}
        assert ext_mus == {(3, 2, 1)}

    def test_degree_6_conjugation_closure(self):
        report = multiplicity_scan(6)
        sym_mus = {mu for mu, part, _, _ in report if part == "sym"}
        assert {conjugate(mu) for mu in sym_mus} == sym_mus

    def test_scan_ordering_deterministic(self):
        report = multiplicity_scan(6)
        keys = [(sum(mu), mu, nu) for mu, _, nu, _ in report]
        assert keys == sorted(keys)

    def test_hooks_empty_through_6(self):
        assert hook_scan(6) == []

    def test_hook_detection(self):
        assert is_hook((3, 1, 1))
        assert not is_hook((2, 2))
        assert list(hooks_of(3)) == [(3,), (2, 1), (1, 1, 1)]


class TestDimensions:
    def test_paper_dimensions(self):
        assert sl_dim((4, 2), 3) == 27
        assert sl_dim((3, 2, 1), 3) == 8
        assert sl_dim((2, 2, 2), 3) == 1

    def test_too_many_rows(self):
        assert sl_dim((2, 2, 1, 1), 3) == 0

    def test_syt_count_hook_length(self):
        assert syt_count((4, 2)) == 9
        assert syt_count((1,)) == 1
        assert syt_count((2, 2)) == 2


class TestMixedOrientation:
    def test_v_alone(self):
        assert mixed_sl3_decomp(1, 0) == {(1,): 1}

    def test_v_vstar_adjoint_plus_trivial(self):
        got = mixed_sl3_decomp(1, 1)
        assert got == {(): 1, (2, 1): 1}
        assert sum(k * sl_dim(lam, 3) for lam, k in got.items()) == 9

    def test_dimension_bookkeeping_2_2(self):
        got = mixed_sl3_decomp(2, 2)
        assert sum(k * sl_dim(lam, 3) for lam, k in got.items()) == 81

    def test_only_42_has_square_multiplicity(self):
        assert mixed_square_exceptions(2, 2) == [(4, 2)]


def test_expansion_text_roundtrip():
    rng = random.Random(8)
    pool = [p for n in range(0, 7) for p in partitions_of(n)]
    for _ in range(20):
        e = SchurExpansion({
            rng.choice(pool): rng.choice((-3, -1, 1, 2, 5)) for _ in range(4)
        })
        assert parse_expansion(format_expansion(e)) == e
    assert format_expansion(SchurExpansion()) == "0"
