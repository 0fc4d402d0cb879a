"""Command-line entry point.

Subcommands: scan, hooks, mixed (combinatorial verifications against the
built-in expectation tables), build (tower construction + cache),
certify (the headline polynomial certification), cache (list | clear |
verify).

Exit codes: 0 = verified, 1 = mathematical mismatch, 2 = operational
error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import dataclass
from importlib import resources

from . import cache as cache_mod
from . import certify as certify_mod
from .field import PointwiseField, SymbolicField, sample_points
from .qsl3 import ConstructionError, build_tower, quantum_dimension, verify_module_axioms
from .laurent import format_laurent
from .schur import hook_scan, mixed_square_exceptions, multiplicity_scan

EXIT_OK = 0
EXIT_MISMATCH = 1
EXIT_ERROR = 2


@dataclass
class RunConfig:
    command: str
    max_size: int = 6
    strategy: str = "pointwise"
    seed: int = 1
    cache_dir: str = ".mutsat-cache"
    output: str = "text"
    out_file: str = None
    processes: int = 1


def _expectations():
    with resources.files("mutsat.data").joinpath("scan_expectations.json").open() as fh:
        return json.load(fh)


def _emit(cfg: RunConfig, text: str, structured: dict):
    if cfg.output == "structured":
        body = json.dumps(structured, indent=2, sort_keys=True)
    else:
        body = text
    if cfg.out_file:
        with open(cfg.out_file, "w") as fh:
            fh.write(body + "\n")
    else:
        print(body)


def _scan_rows(report):
    return [
        {"mu": list(mu), "part": part, "nu": list(nu), "multiplicity": k}
        for mu, part, nu, k in report
    ]


def cmd_scan(cfg: RunConfig) -> int:
    report = multiplicity_scan(cfg.max_size)
    expect = _expectations()
    free_through = expect["multiplicity_free_through"]
    sym6 = {tuple(p) for p in expect["degree6"]["sym"]}
    ext6 = {tuple(p) for p in expect["degree6"]["ext"]}

    bad = []
    low = [row for row in report if sum(row[0]) <= min(cfg.max_size, free_through)]
    if low:
        bad.append("expected no repeated summands through degree %d, found %d rows"
                   % (free_through, len(low)))
    if cfg.max_size >= 6:
        got_sym = {mu for mu, part, _, _ in report if sum(mu) == 6 and part == "sym"}
        got_ext = {mu for mu, part, _, _ in report if sum(mu) == 6 and part == "ext"}
        if got_sym != sym6:
            bad.append("degree-6 symmetric exceptions %s != expected %s"
                       % (sorted(got_sym), sorted(sym6)))
        if got_ext != ext6:
            bad.append("degree-6 exterior exceptions %s != expected %s"
                       % (sorted(got_ext), sorted(ext6)))

    lines = ["multiplicity scan through degree %d: %d repeated summands"
             % (cfg.max_size, len(report))]
    for mu, part, nu, k in report:
        lines.append("  mu=%s %s nu=%s multiplicity %d" % (mu, part, nu, k))
    lines.extend("MISMATCH: " + b for b in bad)
    lines.append("verdict: " + ("ok" if not bad else "mismatch"))
    _emit(cfg, "\n".join(lines), {
        "command": "scan", "max_size": cfg.max_size,
        "rows": _scan_rows(report), "mismatches": bad,
        "verdict": "ok" if not bad else "mismatch",
    })
    return EXIT_OK if not bad else EXIT_MISMATCH


def cmd_hooks(cfg: RunConfig) -> int:
    report = hook_scan(cfg.max_size)
    bad = [] if not report else [
        "hook squares must be multiplicity-free, found %d rows" % len(report)
    ]
    lines = ["hook scan through degree %d: %d repeated summands"
             % (cfg.max_size, len(report))]
    for mu, part, nu, k in report:
        lines.append("  mu=%s %s nu=%s multiplicity %d" % (mu, part, nu, k))
    lines.append("verdict: " + ("ok" if not bad else "mismatch"))
    _emit(cfg, "\n".join(lines), {
        "command": "hooks", "max_size": cfg.max_size,
        "rows": _scan_rows(report), "mismatches": bad,
        "verdict": "ok" if not bad else "mismatch",
    })
    return EXIT_OK if not bad else EXIT_MISMATCH


def cmd_mixed(cfg: RunConfig) -> int:
    exceptions = mixed_square_exceptions(2, 2)
    expect = [tuple(p) for p in _expectations()["mixed22_exceptions"]]
    ok = exceptions == expect
    text = (
        "V (x) V (x) V* (x) V* over sl(3): constituents with repeated square "
        "summands: %s\nverdict: %s" % (exceptions, "ok" if ok else "mismatch")
    )
    _emit(cfg, text, {
        "command": "mixed", "exceptions": [list(p) for p in exceptions],
        "expected": [list(p) for p in expect],
        "verdict": "ok" if ok else "mismatch",
    })
    return EXIT_OK if ok else EXIT_MISMATCH


def _field_for(cfg: RunConfig):
    if cfg.strategy == "symbolic":
        return SymbolicField()
    return PointwiseField(next(sample_points(cfg.seed)))


def cmd_build(cfg: RunConfig) -> int:
    t0 = time.time()
    field = _field_for(cfg)
    try:
        tower = cache_mod.load_tower(cfg.cache_dir, field)
        rebuilt = tower is None
        if tower is None:
            tower = build_tower(field)
            cache_mod.save_tower(cfg.cache_dir, tower)
    except cache_mod.CacheChecksumError as exc:
        _emit(cfg, "cache error: %s" % exc, {"command": "build", "error": str(exc)})
        return EXIT_ERROR
    except ConstructionError as exc:
        _emit(cfg, "construction failed: %s" % exc,
              {"command": "build", "error": str(exc)})
        return EXIT_MISMATCH

    axioms = {m.label: verify_module_axioms(m) for m in (tower.E, tower.F, tower.m1, tower.m2, tower.M)}
    bad = {k: v for k, v in axioms.items() if v}
    qd = quantum_dimension(tower.M)
    lines = [
        "tower (%s): %s" % (field.mode, "rebuilt" if rebuilt else "from cache"),
        "  V[2] dim %d, V[2,2] dim %d, V[4,2] dim %d"
        % (tower.m1.dim, tower.m2.dim, tower.M.dim),
        "  R_MM: %dx%d, %d nonzero entries"
        % (tower.r_mm.matrix.rows, tower.r_mm.matrix.cols, tower.r_mm.matrix.nnz()),
        "  qdim V[4,2] = %s" % format_laurent(qd),
        "  module axioms: %s" % ("all pass" if not bad else "violations %s" % bad),
        "  wall time: %.1fs" % (time.time() - t0),
    ]
    _emit(cfg, "\n".join(lines), {
        "command": "build", "mode": field.mode,
        "sample": None if field.sample is None else str(field.sample),
        "dims": {"M1": tower.m1.dim, "M2": tower.m2.dim, "M": tower.M.dim},
        "r_mm_nnz": tower.r_mm.matrix.nnz(),
        "qdim": format_laurent(qd),
        "axiom_violations": bad,
        "rebuilt": rebuilt,
    })
    return EXIT_OK if not bad else EXIT_MISMATCH


def cmd_certify(cfg: RunConfig) -> int:
    try:
        report = certify_mod.certify_difference(
            strategy=cfg.strategy, seed=cfg.seed, processes=cfg.processes
        )
    except ConstructionError as exc:
        _emit(cfg, "construction failed: %s" % exc,
              {"command": "certify", "error": str(exc)})
        return EXIT_MISMATCH
    structured = {
        "command": "certify",
        "result": {
            "status": report.status,
            "quotient_form": report.quotient_form,
            "sign": report.sign,
            "monomial_exponent": report.monomial_exponent,
            "interpolated_polynomial": report.interpolated_polynomial,
            "target_polynomial": report.target_polynomial,
            "qdim_polynomial": report.qdim_polynomial,
            "strategy": report.strategy,
            "seed": report.seed,
            "window": report.window,
        },
        "runtime": {
            "wall_time": report.wall_time,
            "sample_points_used": report.sample_points_used,
            "samples_skipped": report.samples_skipped,
        },
    }
    _emit(cfg, report.summary(), structured)
    if report.status == "PASS":
        return EXIT_OK
    if report.status == "FAIL":
        return EXIT_MISMATCH
    return EXIT_ERROR


def cmd_cache(cfg: RunConfig, action: str) -> int:
    if action == "list":
        entries = cache_mod.list_entries(cfg.cache_dir)
        lines = ["%s (%s%s) %s" % (
            e["stage"], e["mode"],
            "" if not e.get("sample") else " @ a=" + e["sample"],
            e["checksum"][:12],
        ) for e in entries]
        _emit(cfg, "\n".join(lines) if lines else "cache is empty",
              {"command": "cache", "action": "list", "entries": entries})
        return EXIT_OK
    if action == "clear":
        n = cache_mod.clear(cfg.cache_dir)
        _emit(cfg, "removed %d files" % n,
              {"command": "cache", "action": "clear", "removed": n})
        return EXIT_OK
    if action == "verify":
        results = cache_mod.verify_entries(cfg.cache_dir)
        bad = [(k, status) for k, status in results if status != "ok"]
        lines = ["%s: %s" % (k, status) for k, status in results]
        lines.append("verdict: %s" % ("ok" if not bad else "corrupt entries found"))
        _emit(cfg, "\n".join(lines), {
            "command": "cache", "action": "verify",
            "entries": [{"key": k, "status": s} for k, s in results],
            "verdict": "ok" if not bad else "corrupt",
        })
        return EXIT_OK if not bad else EXIT_ERROR
    raise ValueError(action)


def build_parser():
    p = argparse.ArgumentParser(
        prog="mutsat",
        description="Schur-square multiplicity scans and the sl(3)_q mutant "
        "satellite difference, in exact arithmetic.",
    )
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp, cache=False):
        sp.add_argument("--output", choices=("text", "structured"), default="text")
        sp.add_argument("--out", dest="out_file", default=None,
                        help="write the report to a file instead of stdout")
        if cache:
            sp.add_argument("--cache-dir", default=".mutsat-cache")

    sp = sub.add_parser("scan", help="Schur-square multiplicity scan")
    sp.add_argument("--max-size", type=int, default=6)
    common(sp)

    sp = sub.add_parser("hooks", help="hook-partition multiplicity scan")
    sp.add_argument("--max-size", type=int, default=10)
    common(sp)

    sp = sub.add_parser("mixed", help="mixed-orientation sl(3) square check")
    common(sp)

    sp = sub.add_parser("build", help="build the module tower (cached)")
    sp.add_argument("--strategy", choices=("pointwise", "symbolic"),
                    default="pointwise")
    sp.add_argument("--seed", type=int, default=1)
    common(sp, cache=True)

    sp = sub.add_parser("certify", help="certify the mutant trace difference")
    sp.add_argument("--strategy", choices=("pointwise", "symbolic"),
                    default="pointwise")
    sp.add_argument("--seed", type=int, default=1)
    sp.add_argument("--processes", type=int, default=1)
    common(sp, cache=True)

    sp = sub.add_parser("cache", help="inspect the stage cache")
    sp.add_argument("action", choices=("list", "clear", "verify"))
    common(sp, cache=True)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    cfg = RunConfig(
        command=args.command,
        max_size=getattr(args, "max_size", 6),
        strategy=getattr(args, "strategy", "pointwise"),
        seed=getattr(args, "seed", 1),
        cache_dir=getattr(args, "cache_dir", ".mutsat-cache"),
        output=args.output,
        out_file=args.out_file,
        processes=getattr(args, "processes", 1),
    )
    try:
        if args.command == "scan":
            return cmd_scan(cfg)
        if args.command == "hooks":
            return cmd_hooks(cfg)
        if args.command == "mixed":
            return cmd_mixed(cfg)
        if args.command == "build":
            return cmd_build(cfg)
        if args.command == "certify":
            return cmd_certify(cfg)
        if args.command == "cache":
            return cmd_cache(cfg, args.action)
    except cache_mod.CacheChecksumError as exc:
        print("cache error: %s" % exc, file=sys.stderr)
        return EXIT_ERROR
    except Exception as exc:  # operational failures -> exit 2
        print("error: %s" % exc, file=sys.stderr)
        return EXIT_ERROR
    return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
