"""Machine-readable catalog of difference families, with reproduction tools.

Entries live as JSON files under ``data/catalog/<list>/<id>.json``.  The
"required" lists are the fully transcribed ones whose per-group entry counts
are pinned; the large SmallGroup(126, 2/8/10/12) lists ship in the same
format as optional extras.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .designs import Design, DifferenceFamily, Mode, develop, verify_steiner
from .errors import GroupUnavailable, OrderingNotFound, SchemaError, SumInvariantError
from .fingerprint import TOTAL_QUADRUPLES, Fingerprint, fingerprint
from .groups import (
    CayleyGroup,
    External,
    GroupSpec,
    build_group,
    label_from_json,
    label_to_json,
    spec_from_json,
    spec_to_json,
)

#: fully transcribed lists: list key -> expected number of entries
REQUIRED_LIST_SIZES = {
    "ex1": 8,       # Z_125
    "ex2": 32,      # Z_5 x Z_25
    "ex3": 20,      # (Z_5 x Z_5) : Z_5
    "ex4": 29,      # Z_25 : Z_5
    "ex5": 8,       # Z_5 x Z_5 x Z_5
    "sg126-1": 3,   # C7 : C18
    "sg126-3": 1,   # C7 x D18
    "sg126-7": 2,   # C3 x (C7 : C6)
}

#: the two pairs of transitive designs that share a fingerprint
FINGERPRINT_SHARING_PAIRS = (
    ("sg126-8-25", "sg126-10-191"),
    ("sg126-8-38", "sg126-10-273"),
)

_ENTRY_KEYS = {"id", "group", "mode", "base_blocks", "expected_fingerprint",
               "source", "candidates"}


@dataclass
class CatalogEntry:
    id: str
    group_spec: GroupSpec
    mode: Mode
    base_blocks: list  # label lists
    expected_fingerprint: dict  # count -> frequency
    source: str
    candidates: list = field(default_factory=list)  # optional GroupSpecs
    path: Path | None = None

    def family(self) -> DifferenceFamily:
        return DifferenceFamily(self.mode, self.base_blocks)

    def expected(self) -> Fingerprint:
        return Fingerprint.from_dict(self.expected_fingerprint)

    def resolved_int_blocks(self) -> list:
        """Integer-labeled base blocks (transitive entries only)."""
        return [[int(lab) for lab in b] for b in self.base_blocks]

    def group(self) -> CayleyGroup:
        return _build_entry_group(self.group_spec, self.path)


def data_dir() -> Path:
    return Path(__file__).resolve().parent / "data"


def catalog_dir() -> Path:
    return data_dir() / "catalog"


def tables_dir() -> Path:
    return data_dir() / "tables"


def load_entry(path: str | Path) -> CatalogEntry:
    path = Path(path)
    try:
        obj = json.loads(path.read_text(encoding="utf-8"))
    except json.JSONDecodeError as exc:
        raise SchemaError(f"{path}: invalid JSON: {exc}") from None
    return entry_from_json(obj, path)


def entry_from_json(obj: dict, path: Path | None = None) -> CatalogEntry:
    if not isinstance(obj, dict):
        raise SchemaError("entry must be a JSON object")
    unknown = set(obj) - _ENTRY_KEYS
    if unknown:
        raise SchemaError(f"unknown entry keys: {sorted(unknown)}")
    for key in ("id", "group", "mode", "base_blocks", "expected_fingerprint", "source"):
        if key not in obj:
            raise SchemaError(f"missing entry key {key!r}")
    if not isinstance(obj["id"], str) or not isinstance(obj["source"], str):
        raise SchemaError("id and source must be strings")
    try:
        spec = spec_from_json(obj["group"])
    except Exception as exc:
        raise SchemaError(f"bad group spec: {exc}") from None
    if obj["mode"] not in (Mode.TRANSITIVE.value, Mode.ONE_ROTATIONAL.value):
        raise SchemaError(f"bad mode {obj['mode']!r}")
    if not isinstance(obj["base_blocks"], list) or not obj["base_blocks"]:
        raise SchemaError("base_blocks must be a nonempty list")
    blocks = [[label_from_json(lab) for lab in b] for b in obj["base_blocks"]]
    fp = obj["expected_fingerprint"]
    if not isinstance(fp, dict):
        raise SchemaError("expected_fingerprint must be an object")
    try:
        fpd = {int(k): int(v) for k, v in fp.items()}
    except ValueError:
        raise SchemaError("expected_fingerprint keys/values must be integers") from None
    if sum(fpd.values()) != TOTAL_QUADRUPLES:
        raise SumInvariantError(
            f"expected fingerprint sums to {sum(fpd.values())}, not {TOTAL_QUADRUPLES}")
    candidates = [spec_from_json(c) for c in obj.get("candidates", [])]
    entry = CatalogEntry(
        id=obj["id"],
        group_spec=spec,
        mode=Mode(obj["mode"]),
        base_blocks=blocks,
        expected_fingerprint=fpd,
        source=obj["source"],
        candidates=candidates,
        path=path,
    )
    entry.family()  # validates the blocks
    return entry


def entry_to_json(entry: CatalogEntry) -> dict:
    obj = {
        "id": entry.id,
        "group": spec_to_json(entry.group_spec),
        "mode": entry.mode.value,
        "base_blocks": [[label_to_json(lab) for lab in b] for b in entry.base_blocks],
        "expected_fingerprint": {str(k): v for k, v in sorted(entry.expected_fingerprint.items())},
        "source": entry.source,
    }
    if entry.candidates:
        obj["candidates"] = [spec_to_json(c) for c in entry.candidates]
    return obj


def save_entry(entry: CatalogEntry, path: str | Path) -> None:
    obj = entry_to_json(entry)
    lines = ["{"]
    lines.append(f' "id": {json.dumps(obj["id"])},')
    lines.append(f' "group": {json.dumps(obj["group"])},')
    lines.append(f' "mode": {json.dumps(obj["mode"])},')
    lines.append(' "base_blocks": [')
    bb = obj["base_blocks"]
    for i, b in enumerate(bb):
        comma = "," if i < len(bb) - 1 else ""
        lines.append(f"  {json.dumps(b)}{comma}")
    tail_comma = "," if "candidates" in obj else ""
    lines.append(" ],")
    lines.append(f' "expected_fingerprint": {json.dumps(obj["expected_fingerprint"])},')
    lines.append(f' "source": {json.dumps(obj["source"])}{tail_comma}')
    if "candidates" in obj:
        lines.append(f' "candidates": {json.dumps(obj["candidates"])}')
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _entry_sort_key(entry_id: str):
    head, _, num = entry_id.rpartition("-")
    return (head, int(num))


def iter_entry_paths(filter_glob: str | None = None) -> list:
    import fnmatch

    paths = []
    for p in catalog_dir().rglob("*.json"):
        if filter_glob is None or fnmatch.fnmatch(p.stem, filter_glob):
            paths.append(p)
    return sorted(paths, key=lambda p: _entry_sort_key(p.stem))


def load_entries(filter_glob: str | None = None) -> list:
    return [load_entry(p) for p in iter_entry_paths(filter_glob)]


def required_entry_ids() -> list:
    ids = []
    for key, size in REQUIRED_LIST_SIZES.items():
        ids.extend(f"{key}-{j}" for j in range(1, size + 1))
    for pair in FINGERPRINT_SHARING_PAIRS:
        ids.extend(pair)
    return ids


def load_required_entries() -> list:
    by_id = {}
    for eid in required_entry_ids():
        key = eid.rpartition("-")[0]
        by_id[eid] = load_entry(catalog_dir() / key / f"{eid}.json")
    return list(by_id.values())


_group_cache: dict = {}


def _build_entry_group(spec: GroupSpec, entry_path: Path | None) -> CayleyGroup:
    if isinstance(spec, External):
        resolved = _resolve_table_path(spec.path, entry_path)
        key = ("external", str(resolved))
    else:
        key = ("spec", spec)
    cached = _group_cache.get(key)
    if cached is not None:
        return cached
    if isinstance(spec, External):
        group = build_group(External(str(key[1])))
    else:
        group = build_group(spec)
    _group_cache[key] = group
    return group


def _resolve_table_path(raw: str, entry_path: Path | None) -> Path:
    p = Path(raw)
    if p.is_absolute() and p.exists():
        return p
    candidates = []
    if entry_path is not None:
        candidates.append(entry_path.parent / p)
    candidates.append(data_dir() / p)
    candidates.append(p)
    for c in candidates:
        if c.exists():
            return c
    raise GroupUnavailable(
        f"no Cayley table at {raw!r} (searched {[str(c) for c in candidates]})")


@dataclass
class ReproductionRecord:
    entry_id: str
    steiner_ok: bool
    fingerprint_match: bool
    computed_fingerprint: Fingerprint | None
    elapsed_s: float

    @property
    def ok(self) -> bool:
        return self.steiner_ok and self.fingerprint_match


def reproduce(entry: CatalogEntry, check_fingerprint: bool = True) -> ReproductionRecord:
    """develop -> verify -> fingerprint -> compare against the transcription."""
    t0 = time.perf_counter()
    group = entry.group()
    design = develop(group, entry.family())
    steiner_ok = verify_steiner(design).is_steiner
    computed = None
    match = False
    if steiner_ok and check_fingerprint:
        computed = fingerprint(design)
        match = computed == entry.expected()
    return ReproductionRecord(entry.id, steiner_ok, match, computed,
                              time.perf_counter() - t0)


def develop_entry(entry: CatalogEntry) -> Design:
    return develop(entry.group(), entry.family())


@dataclass
class ReconstructedOrdering:
    spec: GroupSpec
    group: CayleyGroup
    reversed_labels: bool


def reconstruct_ordering(candidates: Sequence[GroupSpec],
                         family: DifferenceFamily) -> ReconstructedOrdering:
    """First candidate convention under which the family develops to S(2,6,126).

    For every candidate spec, both tuple readings are tried: labels as
    printed, then with top-level tuple coordinates reversed (the other
    mixed-radix coordinate order).  Raises OrderingNotFound when no
    convention validates.
    """
    for spec in candidates:
        try:
            group = build_group(spec)
        except Exception:
            continue
        for reversed_labels in (False, True):
            fam = _reverse_family(family) if reversed_labels else family
            try:
                design = develop(group, fam)
            except Exception:
                continue
            if design.block_count == 525 and verify_steiner(design).is_steiner:
                return ReconstructedOrdering(spec, group, reversed_labels)
    raise OrderingNotFound(
        f"none of the {len(list(candidates))} candidate conventions "
        "reproduces the family; supply an external Cayley table")


def _reverse_family(family: DifferenceFamily) -> DifferenceFamily:
    def rev(lab):
        return tuple(reversed(lab)) if isinstance(lab, tuple) else lab

    blocks = [[rev(lab) for lab in b] for b in family.base_blocks]
    return DifferenceFamily(family.mode, blocks)


def catalog_check(entries: Iterable[CatalogEntry], threads: int = 1) -> list:
    """ReproductionRecords for all entries, sorted by entry id."""
    entries = list(entries)
    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            records = list(pool.map(reproduce, entries))
    else:
        records = [reproduce(e) for e in entries]
    return sorted(records, key=lambda r: _entry_sort_key(r.entry_id))
