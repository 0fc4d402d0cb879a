"""Standalone property suites: the checks that guard the whole pipeline.

Runnable on their own (pytest tests/test_properties.py): Yang-Baxter at
several sample points, symbolic/pointwise coherence on the fundamental
level, basis invariance of the trace difference, the standard-tableaux
count behind the weight-trace formula, and the negative controls.
"""

import itertools
import random

import pytest

from mutsat.certify import (
    classify_quotient,
    paper_difference_polynomial,
    perturbed_target,
    qdim_nu_polynomial,
)
from mutsat.field import PointwiseField, SymbolicField
from mutsat.laurent import parse_laurent
from mutsat.partitions import syt_count
from mutsat.qsl3 import (
    QModule,
    build_tower,
    derive_r_matrix,
    dual_module,
    fundamental_E,
    r_matrix_fundamental,
    solve_cup_cap,
    verify_module_axioms,
    yang_baxter_ok,
)
from mutsat.rationals import RAT
from mutsat.sparse import SparseMatrix
from mutsat.tangles import BlockMatrix2, mutant_block_pair, trace_difference

SAMPLE_POINTS = (RAT(2, 7), RAT(3, 7), RAT(9, 7))


class TestYangBaxterAtThreeSamples:
    @pytest.mark.parametrize("a0", SAMPLE_POINTS, ids=str)
    def test_all_ef_triples(self, a0):
        f = PointwiseField(a0)
        e = fundamental_E(f)
        fm = dual_module(e)
        r_ee = r_matrix_fundamental(f)
        cc = solve_cup_cap(e, fm)
        lookup = {
            ("E", "E"): r_ee.matrix,
            ("E", "F"): derive_r_matrix("EF", cc, r_ee, f).matrix,
            ("F", "E"): derive_r_matrix("FE", cc, r_ee, f).matrix,
            ("F", "F"): derive_r_matrix("FF", cc, r_ee, f).matrix,
        }
        dims = {"E": 3, "F": 3}
        for trip in itertools.product("EF", repeat=3):
            assert yang_baxter_ok(trip, lambda x, y: lookup[(x, y)], dims), trip


class TestModeCoherence:
    def test_fundamental_crossing_specialises(self):
        sym = SymbolicField()
        r_sym = r_matrix_fundamental(sym)
        for a0 in SAMPLE_POINTS:
            pt = PointwiseField(a0)
            r_pt = r_matrix_fundamental(pt)
            spec = {(r, c): v.evaluate(a0) for r, c, v in r_sym.matrix.entries()}
            assert spec == {(r, c): v for r, c, v in r_pt.matrix.entries()}

    def test_cup_cap_specialises(self):
        sym = SymbolicField()
        e_s = fundamental_E(sym)
        cc_s = solve_cup_cap(e_s, dual_module(e_s))
        for a0 in SAMPLE_POINTS:
            pt = PointwiseField(a0)
            e_p = fundamental_E(pt)
            cc_p = solve_cup_cap(e_p, dual_module(e_p))
            for ms, mp in (
                (cc_s.cup_ef, cc_p.cup_ef), (cc_s.cap_ef, cc_p.cap_ef),
                (cc_s.cup_fe, cc_p.cup_fe), (cc_s.cap_fe, cc_p.cap_fe),
            ):
                spec = {(r, c): v.evaluate(a0) for r, c, v in ms.entries()}
                assert spec == {(r, c): v for r, c, v in mp.entries()}


class TestTraceBasisInvariance:
    def test_twenty_random_basis_changes(self):
        tower = build_tower(PointwiseField(RAT(2, 7)))
        a, b = mutant_block_pair(tower)
        base = trace_difference(a, b)
        assert base != 0
        rng = random.Random(99)
        done = 0
        while done < 20:
            p = [[RAT(rng.randint(-6, 6)) for _ in range(2)] for _ in range(2)]
            det = p[0][0] * p[1][1] - p[0][1] * p[1][0]
            if det == 0:
                continue
            inv = [[p[1][1] / det, -p[0][1] / det],
                   [-p[1][0] / det, p[0][0] / det]]

            def conj(m):
                left = [
                    [
                        inv[0][0] * m.entries[0][0] + inv[0][1] * m.entries[1][0],
                        inv[0][0] * m.entries[0][1] + inv[0][1] * m.entries[1][1],
                    ],
                    [
                        inv[1][0] * m.entries[0][0] + inv[1][1] * m.entries[1][0],
                        inv[1][0] * m.entries[0][1] + inv[1][1] * m.entries[1][1],
                    ],
                ]
                out = [
                    [
                        left[0][0] * p[0][0] + left[0][1] * p[1][0],
                        left[0][0] * p[0][1] + left[0][1] * p[1][1],
                    ],
                    [
                        left[1][0] * p[0][0] + left[1][1] * p[1][0],
                        left[1][0] * p[0][1] + left[1][1] * p[1][1],
                    ],
                ]
                return BlockMatrix2(out, m.basis)

            assert trace_difference(conj(a), conj(b)) == base
            done += 1


class TestWeightTraceCoefficient:
    def test_d_42_is_9(self):
        # the multiplicity of the (4,2) cell in the 6-string identity
        # closure is the number of standard tableaux of that shape
        assert syt_count((4, 2)) == 9


class TestNegativeControls:
    def test_corrupted_module_fails_axioms(self):
        f = PointwiseField(RAT(2, 7))
        e = fundamental_E(f)
        bad_gen = dict(e.gen)
        bad_gen["X1+"] = SparseMatrix.from_entries(3, 3, [(0, 1, f.from_int(2))])
        assert verify_module_axioms(QModule(3, bad_gen, e.weights, "bad", f)) != []

    def test_perturbed_target_fails_certification(self):
        # the known-correct certified polynomial against a target with one
        # factor's exponent altered: the quotient is no longer a unit
        target = paper_difference_polynomial()
        qdim = qdim_nu_polynomial()
        correct = parse_laurent("a^-188") * target * -1
        form, _, _ = classify_quotient(correct, target, qdim)
        assert form == "unit"
        bad = perturbed_target()
        form_bad, _, _ = classify_quotient(correct, bad, qdim)
        assert form_bad == "FAIL"
