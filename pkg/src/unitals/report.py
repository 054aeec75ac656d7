"""Plane file ingestion, result records, and report emission.

Internal point labels are 0-based everywhere; the 1-based convention of the
source listings exists only at this boundary. Text reports always print
1-based labels; plane files carry an explicit declared base (0 or 1), never
guessed. Group orders travel as decimal strings in JSON so consumers never
face 64-bit overflow.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass

from .design import ProjectivePlane, unital_size
from .errors import BaseLabelError, FormatError, ParameterError

_SCHEMA = "unitals-report/1"
_PLANE_SCHEMA = "unitals-plane/1"


@dataclass(frozen=True)
class UnitalRecord:
    """One result block: a unital with its group data and provenance."""

    plane_name: str
    plane_group_order: int
    plane_orbit_count: int
    unital_group_order: int
    unital_orbit_count: int
    unital_orbit_sizes: tuple[int, ...]
    members: tuple[int, ...]
    q: int
    certificate_hex: str
    stabilizer_order: int
    provenance: dict

    def __post_init__(self):
        want = unital_size(self.q)
        if len(self.members) != want:
            raise ParameterError(
                f"record has {len(self.members)} members, expected {want} for q={self.q}")
        if sum(self.unital_orbit_sizes) != want:
            raise ParameterError(
                f"orbit sizes sum to {sum(self.unital_orbit_sizes)}, expected {want}")
        if len(self.unital_orbit_sizes) != self.unital_orbit_count:
            raise ParameterError("orbit count disagrees with the size list")


@dataclass(frozen=True)
class CampaignResult:
    """Everything one plane's search produced, in deterministic order."""

    plane_name: str
    order: int
    q: int
    plane_group_order: int
    plane_orbit_count: int
    seed: int
    complete: bool
    nodes: int
    family_count: int
    records: tuple[UnitalRecord, ...]


# ---------------------------------------------------------------------------
# plane files


def parse_plane(text: str, base: int = 1, name: str | None = None):
    """Parse a plane from whitespace text (v rows of n+1 labels) or JSON
    ({name, order, base, lines}). Returns (ProjectivePlane, name or None).

    The declared base overrides nothing: labels outside the base's valid
    range raise BaseLabelError. Structural problems raise FormatError with
    the offending row; axiom failures surface as PlaneValidationError.
    """
    if base not in (0, 1):
        raise ParameterError(f"label base must be 0 or 1, got {base}")
    stripped = text.lstrip()
    if stripped.startswith("{"):
        return _parse_plane_json(text, name)
    rows = []
    for lineno, line in enumerate(text.splitlines(), 1):
        line = line.strip()
        if not line or line.startswith("#"):
            continue
        toks = line.split()
        try:
            rows.append([int(t) for t in toks])
        except ValueError:
            raise FormatError(f"row {lineno}: non-integer token in {toks!r}")
    if not rows:
        raise FormatError("no data rows found")
    width = len(rows[0])
    if width < 3:
        raise FormatError(f"row 1: a line needs at least 3 points, got {width}")
    n = width - 1
    v = n * n + n + 1
    for i, row in enumerate(rows, 1):
        if len(row) != width:
            raise FormatError(f"row {i}: expected {width} labels, got {len(row)}")
    if len(rows) != v:
        raise FormatError(
            f"got {len(rows)} rows; order {n} inferred from row length requires {v}")
    lines = _rebase(rows, base, v)
    return ProjectivePlane(n, lines, validate=True), name


def _rebase(rows, base, v):
    lo, hi = (1, v) if base == 1 else (0, v - 1)
    out = []
    for i, row in enumerate(rows, 1):
        shifted = []
        for lab in row:
            if not (lo <= lab <= hi):
                raise BaseLabelError(
                    f"row {i}: label {lab} outside {lo}..{hi} for base {base}")
            shifted.append(lab - base)
        out.append(tuple(shifted))
    return out


def _parse_plane_json(text: str, name_override):
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"bad JSON: {e}")
    for key in ("order", "base", "lines"):
        if key not in doc:
            raise FormatError(f"plane JSON missing field {key!r}")
    n = int(doc["order"])
    base = int(doc["base"])
    if base not in (0, 1):
        raise ParameterError(f"label base must be 0 or 1, got {base}")
    rows = doc["lines"]
    v = n * n + n + 1
    if len(rows) != v:
        raise FormatError(f"expected {v} lines for order {n}, got {len(rows)}")
    clean = []
    for i, row in enumerate(rows, 1):
        if len(row) != n + 1:
            raise FormatError(f"row {i}: expected {n + 1} labels, got {len(row)}")
        clean.append([int(x) for x in row])
    lines = _rebase(clean, base, v)
    name = name_override if name_override is not None else doc.get("name")
    return ProjectivePlane(n, lines, validate=True), name


def emit_plane(plane: ProjectivePlane, name: str = "PLANE", fmt: str = "text",
               base: int = 1) -> str:
    """Serialize a plane. parse_plane(emit_plane(p)) round-trips exactly."""
    if base not in (0, 1):
        raise ParameterError(f"label base must be 0 or 1, got {base}")
    if fmt == "text":
        rows = []
        for line in plane.lines:
            rows.append(" ".join(str(p + base) for p in line))
        return "\n".join(rows) + "\n"
    if fmt == "json":
        doc = {
            "schema": _PLANE_SCHEMA,
            "name": name,
            "order": plane.order_n,
            "base": base,
            "lines": [[p + base for p in line] for line in plane.lines],
        }
        return json.dumps(doc, indent=1, sort_keys=True) + "\n"
    raise ParameterError(f"unknown plane format {fmt!r}")


# ---------------------------------------------------------------------------
# result reports


def _records_of(source) -> tuple:
    if isinstance(source, CampaignResult):
        return source.records
    return tuple(source)


def _plane_header_fields(source, records):
    if isinstance(source, CampaignResult):
        return source.plane_name, source.plane_group_order, source.plane_orbit_count
    if records:
        r = records[0]
        return r.plane_name, r.plane_group_order, r.plane_orbit_count
    return "", 0, 0


def emit_report(source, fmt: str = "text") -> str:
    """Render records (a CampaignResult or a list of UnitalRecord from one
    plane) as the classical text block or as JSON.

    Text layout per block: the plane name; the plane group order right-
    aligned to width 16; the orbit-count line (with its historical "GTOUP="
    misprint) aligned to width 7; then per unital the group order (width
    13), orbit count (width 7), orbit sizes as "i- size" pairs, and
    "UNITAL=" followed by 1-based member labels, 16 per row, width 4.
    """
    records = _records_of(source)
    if fmt == "json":
        return _emit_report_json(source, records)
    if fmt != "text":
        raise ParameterError(f"unknown report format {fmt!r}")
    name, group_order, orbit_count = _plane_header_fields(source, records)
    out = [
        f"{name}",
        f"ORDER OF THE PLANE AUTOMORPHISM GROUP{group_order:>16}",
        f"NUMBER OF THE ORBITS OF THE PLANE AUTOMORPHISM GTOUP={orbit_count:>7}",
    ]
    for rec in records:
        out.append(f"ORDER OF THE UNITAL AUTOMORPHISM GROUP={rec.unital_group_order:>13}")
        out.append(
            f"NUMBER OF THE ORBITS OF THE UNITAL AUTOMORPHISM GROUP ={rec.unital_orbit_count:>7}")
        sizes = "".join(f"  {i}- {s}" for i, s in enumerate(rec.unital_orbit_sizes, 1))
        out.append(f"SIZES OF THE ORBITS OF THE UNITAL AUTOMORPHISM GROUP={sizes}")
        out.append("UNITAL=")
        labels = [m + 1 for m in rec.members]
        for i in range(0, len(labels), 16):
            out.append("".join(f"{x:>4}" for x in labels[i:i + 16]))
    return "\n".join(out) + "\n"


def _record_to_json(rec: UnitalRecord) -> dict:
    d = asdict(rec)
    d["plane_group_order"] = str(rec.plane_group_order)
    d["unital_group_order"] = str(rec.unital_group_order)
    d["stabilizer_order"] = str(rec.stabilizer_order)
    d["unital_orbit_sizes"] = list(rec.unital_orbit_sizes)
    d["members"] = list(rec.members)
    return d


def _record_from_json(d: dict) -> UnitalRecord:
    return UnitalRecord(
        plane_name=d["plane_name"],
        plane_group_order=int(d["plane_group_order"]),
        plane_orbit_count=int(d["plane_orbit_count"]),
        unital_group_order=int(d["unital_group_order"]),
        unital_orbit_count=int(d["unital_orbit_count"]),
        unital_orbit_sizes=tuple(d["unital_orbit_sizes"]),
        members=tuple(d["members"]),
        q=int(d["q"]),
        certificate_hex=d["certificate_hex"],
        stabilizer_order=int(d["stabilizer_order"]),
        provenance=dict(d["provenance"]),
    )


def _emit_report_json(source, records) -> str:
    doc = {"schema": _SCHEMA}
    if isinstance(source, CampaignResult):
        doc["plane"] = {
            "name": source.plane_name,
            "order": source.order,
            "q": source.q,
            "group_order": str(source.plane_group_order),
            "orbit_count": source.plane_orbit_count,
        }
        doc["search"] = {
            "seed": source.seed,
            "complete": source.complete,
            "nodes": source.nodes,
            "family_count": source.family_count,
        }
    doc["records"] = [_record_to_json(r) for r in records]
    return json.dumps(doc, indent=1, sort_keys=True) + "\n"


def parse_report_json(text: str):
    """Inverse of emit_report(..., "json"). Returns a CampaignResult when
    the plane/search sections are present, else a list of UnitalRecord."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as e:
        raise FormatError(f"bad JSON: {e}")
    if doc.get("schema") != _SCHEMA:
        raise FormatError(f"unexpected schema {doc.get('schema')!r}")
    records = tuple(_record_from_json(d) for d in doc.get("records", []))
    if "plane" in doc and "search" in doc:
        p, s = doc["plane"], doc["search"]
        return CampaignResult(
            plane_name=p["name"],
            order=int(p["order"]),
            q=int(p["q"]),
            plane_group_order=int(p["group_order"]),
            plane_orbit_count=int(p["orbit_count"]),
            seed=int(s["seed"]),
            complete=bool(s["complete"]),
            nodes=int(s["nodes"]),
            family_count=int(s["family_count"]),
            records=records,
        )
    return list(records)


# ---------------------------------------------------------------------------
# persistence


def _atomic_write(path: str, data: str):
    tmp = path + ".tmp"
    try:
        with open(tmp, "w", encoding="utf-8") as f:
            f.write(data)
        os.replace(tmp, path)
    except OSError as e:
        try:
            if os.path.exists(tmp):
                os.unlink(tmp)
        except OSError:
            pass
        raise OSError(f"cannot write {path}: {e}") from e


def store_results(result: CampaignResult, results_dir: str) -> list[str]:
    """Write <plane>.unitals.json plus a merged certificates.index.json that
    maps certificate hex -> every (plane, record index) seen, enabling
    cross-plane isomorph queries. Writes are atomic; reruns with identical
    inputs produce identical bytes."""
    if not os.path.isdir(results_dir):
        raise OSError(f"results directory does not exist: {results_dir}")
    plane_path = os.path.join(results_dir, f"{result.plane_name}.unitals.json")
    _atomic_write(plane_path, emit_report(result, "json"))

    index_path = os.path.join(results_dir, "certificates.index.json")
    index: dict[str, list] = {}
    if os.path.exists(index_path):
        with open(index_path, encoding="utf-8") as f:
            loaded = json.load(f)
        if loaded.get("schema") == "unitals-certindex/1":
            index = loaded.get("certificates", {})
    for i, rec in enumerate(result.records):
        entry = {"plane": result.plane_name, "record": i}
        hits = index.setdefault(rec.certificate_hex, [])
        if entry not in hits:
            hits.append(entry)
    for key in index:
        index[key] = sorted(index[key], key=lambda e: (e["plane"], e["record"]))
    doc = {"schema": "unitals-certindex/1", "certificates": index}
    _atomic_write(index_path, json.dumps(doc, indent=1, sort_keys=True) + "\n")
    return [plane_path, index_path]


def load_results(results_dir: str, plane_name: str) -> CampaignResult:
    path = os.path.join(results_dir, f"{plane_name}.unitals.json")
    try:
        with open(path, encoding="utf-8") as f:
            text = f.read()
    except OSError as e:
        raise OSError(f"cannot read {path}: {e}") from e
    result = parse_report_json(text)
    if not isinstance(result, CampaignResult):
        raise FormatError(f"{path} does not contain a full campaign result")
    return result
