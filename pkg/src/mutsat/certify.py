"""Certification of the mutant trace difference against the target polynomial.

The pointwise strategy evaluates the whole pipeline at rational sample
points and reconstructs the exact Laurent polynomial by interpolation:
a cheap probing pass first locates the monomial normalisation (the
result is a unit times a polynomial in q = a^4, so the support lives on
a stride-4 lattice and needs four times fewer samples), and held-out
sample points validate the reconstruction exactly before any claim is
made.  Division by the target then classifies the quotient as a
monomial unit, optionally times or divided by the quantum dimension of
V_(6,4,2).
"""

from __future__ import annotations

import json
import math
import time
from dataclasses import asdict, dataclass
from multiprocessing import Pool

from .field import PointwiseField, SymbolicField, SingularSampleError, sample_points
from .interpolate import DegreeBoundViolation, interpolate_laurent
from .laurent import LaurentPoly, format_laurent, unit_monomial_quotient
from .partitions import weight_monomials
from .qsl3 import ConstructionError, build_tower
from .rationals import RAT, rat, rat_text
from .tangles import StructureError, sample_trace_difference

# The target: the factorised difference polynomial, factors in q with
# multiplicities.
PAPER_DIFFERENCE_FACTORS = (
    ({0: 2}, 1),
    ({6: 1, 5: 1, 4: 1, 3: 1, 2: 1, 1: 1, 0: 1}, 1),
    ({4: 1, 0: 1}, 1),
    ({6: 1, 3: 1, 0: 1}, 2),
    ({4: 1, 2: -1, 0: 1}, 2),
    ({4: 1, 3: 1, 2: 1, 1: 1, 0: 1}, 3),
    ({2: 1, 0: 1}, 4),
    ({2: 1, 1: 1, 0: 1}, 4),
    ({2: 1, 1: -1, 0: 1}, 4),
    ({1: 1, 0: 1}, 10),
    ({1: 1, 0: -1}, 18),
)

# The extra factor relating the second pretzel pair to the first, in q.
SECOND_EXAMPLE_FACTOR_Q = {
    32: 2, 31: -1, 30: -3, 29: 5, 28: 3, 27: -10, 26: 1, 25: 14, 24: -6,
    23: -19, 22: 21, 21: 20, 20: -46, 19: 2, 18: 61, 17: -48, 16: -35,
    15: 83, 14: -27, 13: -66, 12: 72, 11: 3, 10: -57, 9: 40, 8: 10,
    7: -33, 6: 16, 5: 7, 4: -12, 3: 7, 1: -4, 0: 2,
}


def _q_poly(coeffs_q) -> LaurentPoly:
    return LaurentPoly({4 * e: c for e, c in coeffs_q.items()})


def paper_difference_polynomial() -> LaurentPoly:
    """The expanded certified difference, exponents in a (all divisible by 4)."""
    out = LaurentPoly.const(1)
    for coeffs, mult in PAPER_DIFFERENCE_FACTORS:
        factor = _q_poly(coeffs)
        for _ in range(mult):
            out = out * factor
    return out


def second_example_factor() -> LaurentPoly:
    return _q_poly(SECOND_EXAMPLE_FACTOR_Q)


def qdim_nu_polynomial() -> LaurentPoly:
    """Quantum dimension of V_(6,4,2) (the 27-dimensional sl(3) type (4,2)).

    Trace of the twist element: sum over the module's weights of
    q^(m1 - m3); an integer Laurent polynomial in q.
    """
    out = LaurentPoly()
    for (m1, m2, m3), count in weight_monomials((4, 2), 3).items():
        out = out + LaurentPoly.monomial(count, 4 * (m1 - m3))
    return out


# -- pointwise workers ---------------------------------------------------

# Tangle word realising the second pretzel pair: exchanging the middle
# letters of A A B B B produces the mutant partner.  Found by exact
# pointwise search over candidate words; validated against the published
# factor by the certification below.
SECOND_EXAMPLE_WORD = ("A", "A", "B", "B", "B")
SECOND_EXAMPLE_SWAP = (1, 2)


def _diff_at_sample(a0_text: str):
    """Worker: exact trace difference at one sample point, as text."""
    a0 = rat(a0_text)
    try:
        tower = build_tower(PointwiseField(a0))
        value = sample_trace_difference(tower)
        return (a0_text, rat_text(value), None)
    except (SingularSampleError, ConstructionError, StructureError) as exc:
        return (a0_text, None, "%s: %s" % (type(exc).__name__, exc))


def _word_diff_at_sample(a0_text: str):
    """Worker: trace difference for the second-example tangle word."""
    from .tangles import mutant_block_pair, word_trace_difference

    a0 = rat(a0_text)
    try:
        tower = build_tower(PointwiseField(a0))
        a_nu, b_nu = mutant_block_pair(tower)
        value = word_trace_difference(
            SECOND_EXAMPLE_WORD, SECOND_EXAMPLE_SWAP, a_nu, b_nu
        )
        return (a0_text, rat_text(value), None)
    except (SingularSampleError, ConstructionError, StructureError) as exc:
        return (a0_text, None, "%s: %s" % (type(exc).__name__, exc))


class SampleEngine:
    """Evaluates an exact quantity at seeded sample points, in parallel.

    Degenerate samples (singular elimination at special values) are
    skipped and replaced by the next points in the seeded stream.
    """

    def __init__(self, seed: int, processes: int = 1, worker=_diff_at_sample):
        self.stream = sample_points(seed)
        self.values = {}  # RAT sample -> RAT value
        self.skipped = []
        self.processes = max(1, processes)
        self.worker = worker

    def ensure(self, count: int):
        while len(self.values) < count:
            need = count - len(self.values)
            batch = [rat_text(next(self.stream)) for _ in range(need)]
            if self.processes > 1 and len(batch) > 1:
                with Pool(self.processes) as pool:
                    results = pool.map(self.worker, batch)
            else:
                results = [self.worker(t) for t in batch]
            for a0_text, val_text, err in results:
                if err is None:
                    self.values[rat(a0_text)] = rat(val_text)
                else:
                    self.skipped.append((a0_text, err))
        return self.values

    def items(self):
        return sorted(self.values.items())


def _detect_monomial_form(samples, target: LaurentPoly, qdim: LaurentPoly):
    """(sign, exponent, qdim_power) with diff = sign a^k target qdim^e, or None.

    Uses exact arithmetic on the probe values; a float log only suggests
    the integer exponent, which is then verified exactly on every probe.
    """
    for e in (0, 1, -1):
        shaped = target if e == 0 else (target * qdim if e == 1 else None)
        ok = True
        k_found = sign_found = None
        for a0, val in samples:
            tval = shaped.evaluate(a0) if shaped is not None else (
                target.evaluate(a0) / qdim.evaluate(a0)
            )
            if tval == 0:
                ok = False
                break
            r = val / tval
            if r == 0:
                ok = False
                break
            kf = math.log(abs(float(r))) / math.log(float(a0))
            k = round(kf)
            if abs(kf - k) > 0.25:
                ok = False
                break
            if a0**k == r:
                sgn = 1
            elif a0**k == -r:
                sgn = -1
            else:
                ok = False
                break
            if k_found is None:
                k_found, sign_found = k, sgn
            elif (k, sgn) != (k_found, sign_found):
                ok = False
                break
        if ok and k_found is not None:
            return sign_found, k_found, e
    return None


def _stride_window(k: int, shaped: LaurentPoly):
    lo = k + shaped.min_exp()
    hi = k + shaped.max_exp()
    return lo, hi


def _interpolate_stride4(engine: SampleEngine, lo: int, hi: int, extras: int):
    """Reconstruct a polynomial supported on {lo, lo+4, ..., hi}.

    Substituting b = a^4 turns it into an ordinary window of a quarter
    the width; extra held-out samples validate the result at full
    precision.
    """
    assert (hi - lo) % 4 == 0
    width = (hi - lo) // 4 + 1
    engine.ensure(width + extras)
    items = engine.items()
    base = [(a0**4, val * a0 ** (-lo)) for a0, val in items[:width]]
    g = interpolate_laurent(base, 0, (hi - lo) // 4)
    poly = LaurentPoly({4 * e + lo: c for e, c in g.c.items()})
    for a0, val in items[width:width + extras]:
        if poly.evaluate(a0) != val:
            raise DegreeBoundViolation("stride-4 reconstruction failed validation")
    return poly, width + extras


def _interpolate_dense(engine: SampleEngine, window: int, extras: int, max_window: int):
    """Symmetric-window interpolation, widening on validation failure."""
    while True:
        lo, hi = -window, window
        width = hi - lo + 1
        engine.ensure(width + extras)
        items = engine.items()
        try:
            poly = interpolate_laurent(
                [(a0, v) for a0, v in items[:width + extras]], lo, hi
            )
            return poly, width + extras
        except DegreeBoundViolation:
            if window >= max_window:
                raise
            window *= 2


@dataclass
class CertificationReport:
    strategy: str
    seed: int
    status: str  # PASS | FAIL | ERROR
    quotient_form: str  # unit | unit*qdim | unit/qdim | FAIL
    sign: int
    monomial_exponent: int
    interpolated_polynomial: str
    target_polynomial: str
    qdim_polynomial: str
    sample_points_used: list
    samples_skipped: list
    window: list
    wall_time: float
    detail: str = ""

    def to_json(self) -> str:
        return json.dumps(asdict(self), indent=2, sort_keys=True)

    def summary(self) -> str:
        lines = [
            "certification: %s" % self.status,
            "  strategy: %s (seed %d)" % (self.strategy, self.seed),
            "  quotient form: %s" % self.quotient_form,
        ]
        if self.status == "PASS":
            lines.append(
                "  difference = %s a^%d * target%s"
                % (
                    "+" if self.sign > 0 else "-",
                    self.monomial_exponent,
                    {"unit": "", "unit*qdim": " * qdim", "unit/qdim": " / qdim"}[
                        self.quotient_form
                    ],
                )
            )
        lines.append("  samples used: %d" % len(self.sample_points_used))
        lines.append("  wall time: %.1fs" % self.wall_time)
        if self.detail:
            lines.append("  detail: %s" % self.detail)
        return "\n".join(lines)


def classify_quotient(poly: LaurentPoly, target: LaurentPoly, qdim: LaurentPoly):
    """Match poly against sign a^k target qdim^e for e in {0, +1, -1}."""
    hit = unit_monomial_quotient(poly, target)
    if hit:
        return "unit", hit[0], hit[1]
    hit = unit_monomial_quotient(poly, target * qdim)
    if hit:
        return "unit*qdim", hit[0], hit[1]
    hit = unit_monomial_quotient(poly * qdim, target)
    if hit:
        return "unit/qdim", hit[0], hit[1]
    return "FAIL", 0, 0


def certify_difference(
    strategy: str = "pointwise",
    seed: int = 1,
    target: LaurentPoly = None,
    processes: int = 1,
    probes: int = 4,
    validation_extras: int = 6,
    dense_start_window: int = 512,
    max_window: int = 4096,
) -> CertificationReport:
    """Compute the exact trace difference and certify it against the target.

    PASS iff the difference equals the target up to a monomial unit and
    an optional factor of the quantum dimension of V_(6,4,2); the
    matched form is reported.
    """
    t0 = time.time()
    target = paper_difference_polynomial() if target is None else target
    qdim = qdim_nu_polynomial()

    if strategy == "symbolic":
        tower = build_tower(SymbolicField())
        diff = sample_trace_difference(tower)
        poly = diff.as_laurent()
        if poly is None:
            return CertificationReport(
                strategy, seed, "ERROR", "FAIL", 0, 0, "", format_laurent(target),
                format_laurent(qdim), [], [], [], time.time() - t0,
                "symbolic difference is not a Laurent polynomial",
            )
        form, sign, k = classify_quotient(poly, target, qdim)
        return CertificationReport(
            strategy, seed, "PASS" if form != "FAIL" else "FAIL", form, sign, k,
            format_laurent(poly), format_laurent(target), format_laurent(qdim),
            [], [], [poly.min_exp(), poly.max_exp()], time.time() - t0,
        )

    if strategy != "pointwise":
        raise ValueError("strategy must be 'pointwise' or 'symbolic'")

    engine = SampleEngine(seed, processes)
    return _pointwise_certify(
        engine, target, qdim, strategy, seed, t0,
        probes, validation_extras, dense_start_window, max_window,
    )


def _pointwise_certify(
    engine, target, qdim, strategy, seed, t0,
    probes, validation_extras, dense_start_window, max_window,
):
    engine.ensure(probes)
    probe_items = engine.items()[:probes]

    poly = None
    used = 0
    detected = _detect_monomial_form(probe_items, target, qdim)
    if detected:
        sign, k, e = detected
        shaped = target * qdim if e == 1 else target
        lo, hi = _stride_window(k, shaped)
        if e == -1:
            # support of target/qdim is not a polynomial window; divide later
            lo, hi = k + (target.min_exp() - qdim.max_exp()), k + (
                target.max_exp() - qdim.min_exp()
            )
        try:
            poly, used = _interpolate_stride4(engine, lo, hi, validation_extras)
        except DegreeBoundViolation:
            poly = None
    if poly is None:
        try:
            poly, used = _interpolate_dense(
                engine, dense_start_window, validation_extras, max_window
            )
        except DegreeBoundViolation as exc:
            return CertificationReport(
                strategy, seed, "ERROR", "FAIL", 0, 0, "", format_laurent(target),
                format_laurent(qdim),
                [rat_text(p) for p, _ in engine.items()],
                engine.skipped, [], time.time() - t0,
                "interpolation window exhausted: %s" % exc,
            )

    form, sign, k = classify_quotient(poly, target, qdim)
    status = "PASS" if form != "FAIL" else "FAIL"
    detail = ""
    if form == "FAIL":
        detail = "difference does not match the target up to the allowed forms"
    return CertificationReport(
        strategy, seed, status, form, sign, k,
        format_laurent(poly), format_laurent(target), format_laurent(qdim),
        [rat_text(p) for p, _ in engine.items()[:used]],
        engine.skipped,
        [poly.min_exp(), poly.max_exp()],
        time.time() - t0,
        detail,
    )


def certify_second_example(
    seed: int = 1,
    processes: int = 1,
    probes: int = 4,
    validation_extras: int = 6,
) -> CertificationReport:
    """Certify the second pretzel pair against target * (degree-32 factor).

    The tangle word is SECOND_EXAMPLE_WORD with the letters at
    SECOND_EXAMPLE_SWAP exchanged; its trace difference must equal the
    first difference times the published degree-32 factor, up to the same
    unit freedom.
    """
    t0 = time.time()
    target = paper_difference_polynomial() * second_example_factor()
    qdim = qdim_nu_polynomial()
    engine = SampleEngine(seed, processes, worker=_word_diff_at_sample)
    return _pointwise_certify(
        engine, target, qdim, "pointwise", seed, t0,
        probes, validation_extras, 1024, 4096,
    )


def perturbed_target(index: int = 3) -> LaurentPoly:
    """The paper polynomial with one factor's exponent altered (negative control)."""
    factors = list(PAPER_DIFFERENCE_FACTORS)
    coeffs, mult = factors[index]
    factors[index] = (coeffs, mult + 1)
    out = LaurentPoly.const(1)
    for coeffs, mult in factors:
        factor = _q_poly(coeffs)
        for _ in range(mult):
            out = out * factor
    return out
