"""Stage cache: bit-exact round-trips, checksums, atomicity basics."""

import os

import pytest

from mutsat.cache import (
    CacheChecksumError,
    clear,
    list_entries,
    load_tower,
    read_stage,
    save_tower,
    verify_entries,
    write_stage,
)
from mutsat.field import PointwiseField, SymbolicField
from mutsat.qsl3 import build_tower
from mutsat.rationals import RAT
from mutsat.tangles import sample_trace_difference


@pytest.fixture(scope="module")
def tower():
    return build_tower(PointwiseField(RAT(2, 7)))


def test_tower_roundtrip_bit_exact(tmp_path, tower):
    cache_dir = str(tmp_path)
    save_tower(cache_dir, tower)
    loaded = load_tower(cache_dir, tower.field)
    assert loaded is not None
    assert loaded.r_mm.matrix == tower.r_mm.matrix
    assert loaded.r_mm_inv == tower.r_mm_inv
    assert loaded.t_m == tower.t_m
    assert loaded.M.weights == tower.M.weights
    for name in ("X1+", "X2+", "X1-", "X2-", "K1", "K2"):
        assert loaded.M.gen[name] == tower.M.gen[name]
    assert loaded.ip_m.inj == tower.ip_m.inj
    assert loaded.ip_m.proj == tower.ip_m.proj
    assert loaded.ip_m.eigenvalue == tower.ip_m.eigenvalue
    # the loaded tower computes the same difference
    assert sample_trace_difference(loaded) == sample_trace_difference(tower)


def test_missing_entries_tolerated(tmp_path):
    assert load_tower(str(tmp_path), PointwiseField(RAT(2, 7))) is None
    assert read_stage(str(tmp_path), "r_mm", PointwiseField(RAT(2, 7))) is None


def test_corrupt_payload_detected(tmp_path, tower):
    cache_dir = str(tmp_path)
    save_tower(cache_dir, tower)
    victim = next(n for n in sorted(os.listdir(cache_dir)) if n.endswith(".mat"))
    path = os.path.join(cache_dir, victim)
    with open(path) as fh:
        text = fh.read()
    with open(path, "w") as fh:
        fh.write(text + "\n# tampered\n")
    stage = victim.split("@")[0]
    with pytest.raises(CacheChecksumError):
        read_stage(cache_dir, stage, tower.field)
    results = dict(verify_entries(cache_dir))
    assert results[victim] == "checksum mismatch"


def test_list_and_clear(tmp_path, tower):
    cache_dir = str(tmp_path)
    save_tower(cache_dir, tower)
    entries = list_entries(cache_dir)
    assert {e["stage"] for e in entries} >= {"E", "F", "r_mm", "t_m", "ip_m"}
    assert all(e["mode"] == "pointwise" for e in entries)
    removed = clear(cache_dir)
    assert removed > 0
    assert list_entries(cache_dir) == []


def test_symbolic_stage_roundtrip(tmp_path):
    f = SymbolicField()
    from mutsat.qsl3 import fundamental_E
    from mutsat.cache import _module_payload, _module_from_payload

    e = fundamental_E(f)
    payload = _module_payload(e, f)
    write_stage(str(tmp_path), "E", payload, f)
    back = read_stage(str(tmp_path), "E", f)
    assert back == payload
    e2 = _module_from_payload(back, f)
    for name in ("X1+", "K1", "K2"):
        assert e2.gen[name] == e.gen[name]
    assert e2.weights == e.weights
