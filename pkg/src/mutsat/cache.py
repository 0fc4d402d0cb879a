"""On-disk cache of tower stages.

Layout: for each stage there is a payload file <key>.mat and a manifest
<key>.json carrying {stage, mode, sample, convention, checksum}.  A
payload holds named sections, each a matrix in sparse triplet form:

    ## <section name>
    <rows> <cols>
    <row> <col> <scalar as text>      (sorted by row, then column)

plus scalar "=" lines and metadata "~" lines.  Writers go through a
temporary file and an atomic rename, so a reader never sees a torn
entry; missing entries simply mean "rebuild".  Round-trips are
bit-exact: parse(format(x)) == x for every scalar the field produces.
"""

from __future__ import annotations

import hashlib
import json
import os
import tempfile

from .qsl3 import CupCap, InjProj, QModule, RMatrix, Tower, tensor_module
from .sparse import SparseMatrix

CONVENTION_VERSION = "quarter-a.v1"

GEN_ORDER = ("X1+", "X2+", "X1-", "X2-", "K1", "K2")


class CacheChecksumError(RuntimeError):
    """A cache entry's payload does not match its recorded checksum."""


def _key(stage: str, field) -> str:
    if field.mode == "pointwise":
        from .rationals import rat_text

        return "%s@pointwise@%s" % (stage, rat_text(field.sample).replace("/", "_"))
    return "%s@symbolic" % stage


def _matrix_lines(name: str, m: SparseMatrix, field):
    yield "## %s" % name
    yield "%d %d" % (m.rows, m.cols)
    for r, c, v in m.sorted_entries():
        yield "%d %d %s" % (r, c, field.scalar_text(v))


def _scalar_line(name: str, v, field):
    return "= %s %s" % (name, field.scalar_text(v))


def _meta_line(name: str, text: str):
    return "~ %s %s" % (name, text)


def _parse_payload(text: str, field):
    """-> (sections: name -> SparseMatrix, scalars: name -> value, meta: name -> str)"""
    sections, scalars, meta = {}, {}, {}
    lines = text.splitlines()
    i = 0
    while i < len(lines):
        line = lines[i]
        if line.startswith("## "):
            name = line[3:]
            rows, cols = (int(x) for x in lines[i + 1].split())
            i += 2
            entries = []
            while i < len(lines) and lines[i] and lines[i][0] not in "#=~":
                r, c, val = lines[i].split(" ", 2)
                entries.append((int(r), int(c), field.parse_scalar(val)))
                i += 1
            sections[name] = SparseMatrix.from_entries(rows, cols, entries)
        elif line.startswith("= "):
            _, name, val = line.split(" ", 2)
            scalars[name] = field.parse_scalar(val)
            i += 1
        elif line.startswith("~ "):
            _, name, val = line.split(" ", 2)
            meta[name] = val
            i += 1
        else:
            i += 1
    return sections, scalars, meta


def write_stage(cache_dir: str, stage: str, payload: str, field):
    os.makedirs(cache_dir, exist_ok=True)
    key = _key(stage, field)
    checksum = hashlib.sha256(payload.encode()).hexdigest()
    manifest = {
        "stage": stage,
        "mode": field.mode,
        "sample": None if field.sample is None else str(field.sample),
        "convention": CONVENTION_VERSION,
        "checksum": checksum,
        "payload": key + ".mat",
    }
    for name, data in ((key + ".mat", payload), (key + ".json", json.dumps(manifest, indent=1))):
        fd, tmp = tempfile.mkstemp(dir=cache_dir, prefix=name + ".")
        with os.fdopen(fd, "w") as fh:
            fh.write(data)
        os.replace(tmp, os.path.join(cache_dir, name))


def read_stage(cache_dir: str, stage: str, field):
    """Payload text, or None when the entry is absent; checksum enforced."""
    key = _key(stage, field)
    mpath = os.path.join(cache_dir, key + ".json")
    ppath = os.path.join(cache_dir, key + ".mat")
    if not (os.path.exists(mpath) and os.path.exists(ppath)):
        return None
    with open(mpath) as fh:
        manifest = json.load(fh)
    if manifest.get("convention") != CONVENTION_VERSION:
        return None
    with open(ppath) as fh:
        payload = fh.read()
    checksum = hashlib.sha256(payload.encode()).hexdigest()
    if checksum != manifest.get("checksum"):
        raise CacheChecksumError("cache entry %s failed its checksum" % key)
    return payload


def _module_payload(m: QModule, field) -> str:
    lines = [
        _meta_line("label", m.label),
        _meta_line("dim", str(m.dim)),
        _meta_line("weights", json.dumps(m.weights)),
    ]
    for name in GEN_ORDER:
        lines.extend(_matrix_lines(name, m.gen[name], field))
    return "\n".join(lines) + "\n"


def _module_from_payload(payload: str, field) -> QModule:
    sections, _, meta = _parse_payload(payload, field)
    weights = [tuple(w) for w in json.loads(meta["weights"])]
    return QModule(
        int(meta["dim"]), {n: sections[n] for n in GEN_ORDER}, weights,
        meta["label"], field,
    )


def _injproj_payload(ip: InjProj, field) -> str:
    lines = [
        _meta_line("label", ip.label),
        _meta_line("weights", json.dumps(ip.weights)),
        _scalar_line("eigenvalue", ip.eigenvalue, field),
    ]
    lines.extend(_matrix_lines("inj", ip.inj, field))
    lines.extend(_matrix_lines("proj", ip.proj, field))
    return "\n".join(lines) + "\n"


def _injproj_from_payload(payload: str, field) -> InjProj:
    sections, scalars, meta = _parse_payload(payload, field)
    return InjProj(
        sections["inj"], sections["proj"], scalars["eigenvalue"],
        [tuple(w) for w in json.loads(meta["weights"])], meta.get("label", ""),
    )


def _matrix_payload(m: SparseMatrix, field) -> str:
    return "\n".join(_matrix_lines("matrix", m, field)) + "\n"


def _matrix_from_payload(payload: str, field) -> SparseMatrix:
    sections, _, _ = _parse_payload(payload, field)
    return sections["matrix"]


_TOWER_MODULES = ("E", "F", "m1", "m2", "M")
_TOWER_MATRICES = (
    "r_ee", "r_ef", "r_fe", "r_ff",
    "r_m1m1", "r_m1m2", "r_m2m1", "r_m2m2",
    "r_mm", "r_mm_inv", "t_m",
)
_TOWER_CUPCAP = ("cup_ef", "cup_fe", "cap_ef", "cap_fe")
_TOWER_INJPROJ = ("ip_m1", "ip_m2", "ip_m")


def save_tower(cache_dir: str, tower: Tower):
    f = tower.field
    for name in _TOWER_MODULES:
        write_stage(cache_dir, name, _module_payload(getattr(tower, name), f), f)
    mats = {
        "r_ee": tower.r_ee.matrix, "r_ef": tower.r_ef.matrix,
        "r_fe": tower.r_fe.matrix, "r_ff": tower.r_ff.matrix,
        "r_m1m1": tower.r_sub[("M1", "M1")], "r_m1m2": tower.r_sub[("M1", "M2")],
        "r_m2m1": tower.r_sub[("M2", "M1")], "r_m2m2": tower.r_sub[("M2", "M2")],
        "r_mm": tower.r_mm.matrix, "r_mm_inv": tower.r_mm_inv, "t_m": tower.t_m,
    }
    for name in _TOWER_MATRICES:
        write_stage(cache_dir, name, _matrix_payload(mats[name], f), f)
    for name in _TOWER_CUPCAP:
        write_stage(
            cache_dir, name, _matrix_payload(getattr(tower.cupcap, name), f), f
        )
    for name in _TOWER_INJPROJ:
        write_stage(cache_dir, name, _injproj_payload(getattr(tower, name), f), f)


def load_tower(cache_dir: str, field):
    """Rebuild a Tower from cache, or None if any stage is missing."""
    payloads = {}
    for name in (
        _TOWER_MODULES + _TOWER_MATRICES + _TOWER_CUPCAP + _TOWER_INJPROJ
    ):
        payload = read_stage(cache_dir, name, field)
        if payload is None:
            return None
        payloads[name] = payload
    modules = {n: _module_from_payload(payloads[n], field) for n in _TOWER_MODULES}
    mats = {n: _matrix_from_payload(payloads[n], field) for n in _TOWER_MATRICES}
    cupcap = CupCap(*(_matrix_from_payload(payloads[n], field) for n in _TOWER_CUPCAP))
    ips = {n: _injproj_from_payload(payloads[n], field) for n in _TOWER_INJPROJ}
    r_sub = {
        ("M1", "M1"): mats["r_m1m1"], ("M1", "M2"): mats["r_m1m2"],
        ("M2", "M1"): mats["r_m2m1"], ("M2", "M2"): mats["r_m2m2"],
    }
    return Tower(
        field=field, E=modules["E"], F=modules["F"],
        r_ee=RMatrix("E", "E", mats["r_ee"]), cupcap=cupcap,
        r_ef=RMatrix("E", "F", mats["r_ef"]), r_fe=RMatrix("F", "E", mats["r_fe"]),
        r_ff=RMatrix("F", "F", mats["r_ff"]),
        ip_m1=ips["ip_m1"], ip_m2=ips["ip_m2"],
        m1=modules["m1"], m2=modules["m2"], r_sub=r_sub,
        ip_m=ips["ip_m"], M=modules["M"], MM=tensor_module(modules["M"], modules["M"]),
        r_mm=RMatrix("M", "M", mats["r_mm"]), r_mm_inv=mats["r_mm_inv"],
        t_m=mats["t_m"],
    )


def list_entries(cache_dir: str):
    out = []
    if not os.path.isdir(cache_dir):
        return out
    for name in sorted(os.listdir(cache_dir)):
        if not name.endswith(".json"):
            continue
        try:
            with open(os.path.join(cache_dir, name)) as fh:
                manifest = json.load(fh)
        except (OSError, json.JSONDecodeError):
            continue
        out.append(manifest)
    return out


def verify_entries(cache_dir: str):
    """[(key, 'ok' | error text)] for every manifest in the cache."""
    results = []
    for manifest in list_entries(cache_dir):
        key = manifest.get("payload", "?")
        path = os.path.join(cache_dir, key)
        if not os.path.exists(path):
            results.append((key, "payload missing"))
            continue
        with open(path) as fh:
            payload = fh.read()
        checksum = hashlib.sha256(payload.encode()).hexdigest()
        results.append(
            (key, "ok" if checksum == manifest.get("checksum") else "checksum mismatch")
        )
    return results


def clear(cache_dir: str) -> int:
    removed = 0
    if not os.path.isdir(cache_dir):
        return removed
    for name in os.listdir(cache_dir):
        if name.endswith(".mat") or name.endswith(".json"):
            os.remove(os.path.join(cache_dir, name))
            removed += 1
    return removed
