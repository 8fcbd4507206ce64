"""Derive the element orderings of the non-abelian order-126 groups.

The integer-labeled transitive families in the catalog presuppose a specific
element numbering of each SmallGroup(126,k): the one induced by a polycyclic
generating sequence with prime relative orders (an involution, two 3-slots,
an order-7 generator, in a handful of admissible chain orders), ranking the
normal forms a^e1 b^e2 c^e3 d^e4 by one of three candidate digit orders.

The exact generator choices are not published, so this script enumerates the
finite space of plausible generator tuples inside a concretely constructed
copy of each group, relabels the Cayley table accordingly, and keeps the
tuples under which the catalog families develop into verified S(2,6,126)
designs with bit-exact fingerprints.  Validated tables are written to
src/unitals/data/tables/ and shipped as loader fixtures.

Usage: python scripts/derive_tables.py [group-key ...]
"""

from __future__ import annotations

import sys
import time
from itertools import product as iter_product
from pathlib import Path

import numpy as np

SRC = Path(__file__).resolve().parent.parent / "src"
sys.path.insert(0, str(SRC))

from unitals.catalog import catalog_dir, load_entry  # noqa: E402
from unitals.designs import develop_blocks, verify_steiner  # noqa: E402
from unitals.fingerprint import Fingerprint, fingerprint  # noqa: E402
from unitals.groups import (  # noqa: E402
    CayleyGroup,
    Cyclic,
    Product,
    Semidirect,
    build_group,
    save_cayley_table,
)

TABLE_DIR = SRC / "unitals" / "data" / "tables"

C2, C3, C7 = Cyclic(2), Cyclic(3), Cyclic(7)
S3 = Semidirect(C3, C2, ((1, 2),))
C7_C3 = Semidirect(C7, C3, ((1, 2),))


def relabel_group(k: CayleyGroup, order_map: np.ndarray) -> CayleyGroup:
    """Cayley table in the new numbering: index i stands for element order_map[i]."""
    n = k.order
    inv = np.empty(n, dtype=np.int64)
    inv[order_map] = np.arange(n)
    table = inv[k.table[np.ix_(order_map, order_map)]].astype(np.int32)
    inverses = inv[k.inverses[order_map]].astype(np.int32)
    identity = int(inv[k.identity])
    labels = tuple(range(n))
    return CayleyGroup(n, table, identity, inverses, labels, {i: i for i in labels})


def powers(k: CayleyGroup, g: int, up_to: int) -> list:
    out = [k.identity]
    for _ in range(up_to - 1):
        out.append(k.mul(out[-1], g))
    return out


_rank_cache: dict = {}


def ranked_vectors(radices, mode: str) -> list:
    """Exponent vectors in rank order.

    mode "big": e1 is the most significant mixed-radix digit; "little": e1
    varies fastest; "shortlex": rank words by total letter length, then
    lexicographically by spelling (the sorted-elements order of pc groups).
    """
    key = (tuple(radices), mode)
    got = _rank_cache.get(key)
    if got is not None:
        return got
    vectors = list(iter_product(*[range(r) for r in radices]))
    if mode == "big":
        ranked = vectors
    elif mode == "little":
        ranked = sorted(vectors, key=lambda v: tuple(reversed(v)))
    elif mode == "shortlex":
        ranked = sorted(vectors, key=lambda v: (sum(v), tuple(-e for e in v)))
    else:
        raise ValueError(mode)
    _rank_cache[key] = ranked
    return ranked


def numbering(k: CayleyGroup, gens, radices, mode: str,
              table_rows: list) -> np.ndarray | None:
    """Numbering of normal forms a^e1 b^e2 c^e3 d^e4 (None if not bijective)."""
    ranked = ranked_vectors(radices, mode)
    pws = [powers(k, g, r) for g, r in zip(gens, radices)]
    p0, p1, p2, p3 = pws
    elems = []
    for e0, e1, e2, e3 in ranked:
        x = table_rows[p0[e0]][p1[e1]]
        x = table_rows[x][p2[e2]]
        x = table_rows[x][p3[e3]]
        elems.append(x)
    if len(set(elems)) != k.order:
        return None
    return np.asarray(elems, dtype=np.int64)


def elements_of_order(k: CayleyGroup, d: int) -> list:
    return [g for g in range(k.order) if k.element_order(g) == d]


def test_candidate(k: CayleyGroup, gens, radices, families,
                   mode: str, table_rows: list) -> tuple | None:
    """Relabeled group if every family verifies with matching fingerprint."""
    order_map = numbering(k, gens, radices, mode, table_rows)
    if order_map is None:
        return None
    grp = relabel_group(k, order_map)
    designs = []
    for blocks, _expected in families:
        design = develop_blocks(grp, blocks)
        if design.block_count != 525 or not verify_steiner(design).is_steiner:
            return None
        designs.append(design)
    for design, (_, expected) in zip(designs, families):
        if fingerprint(design) != expected:
            return None
    return grp, order_map


def load_families(key: str, items) -> list:
    fams = []
    for j in items:
        entry = load_entry(catalog_dir() / key / f"{key}-{j}.json")
        blocks = [[lab for lab in b] for b in entry.resolved_int_blocks()]
        fams.append((blocks, Fingerprint.from_dict(entry.expected_fingerprint)))
    return fams


def candidate_space(key: str):
    """(concrete group, pinned involution, pinned order-7 generator).

    The involution and the C7 generator can be pinned up to automorphism
    (conjugation acts transitively on the involutions fixing the C7 part;
    x -> kx on the C7 factor is an automorphism in all these groups).
    """
    if key == "sg126-1":  # C7 : C18
        k = build_group(Semidirect(C7, Cyclic(18), ((1, 3),)))
        return k, k.resolve((0, 9)), k.resolve((1, 0))
    if key == "sg126-2":  # C2 x (C7 : C9)
        k = build_group(Product(C2, Semidirect(C7, Cyclic(9), ((1, 2),))))
        return k, k.resolve((1, (0, 0))), k.resolve((0, (1, 0)))
    if key == "sg126-3":  # C7 x D18
        k = build_group(Product(C7, Semidirect(Cyclic(9), C2, ((1, 8),))))
        return k, k.resolve((0, (0, 1))), k.resolve((1, (0, 0)))
    if key == "sg126-7":  # C3 x (C7 : C6)
        k = build_group(Product(C3, Semidirect(C7, Cyclic(6), ((1, 3),))))
        return k, k.resolve((0, (0, 3))), k.resolve((0, (1, 0)))
    if key == "sg126-8":  # S3 x (C7 : C3)
        k = build_group(Product(S3, C7_C3))
        return k, k.resolve(((0, 1), (0, 0))), k.resolve(((0, 0), (1, 0)))
    if key == "sg126-10":  # C6 x (C7 : C3)
        k = build_group(Product(Product(C2, C3), C7_C3))
        return k, k.resolve((1, 0, (0, 0))), k.resolve((0, 0, (1, 0)))
    if key == "sg126-12":  # C21 x S3
        k = build_group(Product(Product(C3, C7), S3))
        return k, k.resolve((0, 0, (0, 1))), k.resolve((0, 1, (0, 0)))
    raise KeyError(key)


def candidate_tuples(k: CayleyGroup, alpha: int, delta: int):
    """(gens, radices) candidates: two 3-slots drawn from elements whose cube
    falls deeper in the chain (orders 3, 9, 21, 63), in the pc sequences that
    keep every tail subgroup normal."""
    p3 = [g for g in range(k.order) if k.element_order(g) in (3, 9, 21, 63)]
    sequences = [
        ((0, 1, 2, 3), (2, 3, 3, 7)),  # a b c d
        ((0, 1, 3, 2), (2, 3, 7, 3)),  # a b d c
        ((0, 3, 1, 2), (2, 7, 3, 3)),  # a d b c
        ((3, 0, 1, 2), (7, 2, 3, 3)),  # d a b c
        ((1, 0, 2, 3), (3, 2, 3, 7)),  # b a c d
        ((1, 2, 0, 3), (3, 3, 2, 7)),  # b c a d
        ((1, 0, 3, 2), (3, 2, 7, 3)),  # b a d c
        ((1, 2, 3, 0), (3, 3, 7, 2)),  # b c d a
    ]
    for b in p3:
        for c in p3:
            if b == c:
                continue
            slots = (alpha, b, c, delta)
            for order, radices in sequences:
                yield tuple(slots[i] for i in order), radices


def derive(key: str, probe_items) -> None:
    t0 = time.time()
    k, alpha, delta = candidate_space(key)
    table_rows = k.table.tolist()
    families = load_families(key, probe_items)
    probe = families[:1]
    hits = []
    tried = 0
    for gens, radices in candidate_tuples(k, alpha, delta):
        tried += 1
        for mode in ("shortlex", "big", "little"):
            got = test_candidate(k, gens, radices, probe, mode, table_rows)
            if got is None:
                continue
            got_full = test_candidate(k, gens, radices, families, mode, table_rows)
            if got_full is not None:
                hits.append(((tuple(gens), tuple(radices), mode), got_full))
    dt = time.time() - t0
    if not hits:
        print(f"{key}: NO candidate validated ({tried} tried, {dt:.1f}s)")
        return
    tables = {h[1][0].table.tobytes() for h in hits}
    (gens, radices, mode), (grp, order_map) = hits[0]
    TABLE_DIR.mkdir(parents=True, exist_ok=True)
    out = TABLE_DIR / f"{key.replace('-', '_')}.txt"
    save_cayley_table(
        grp, out,
        header=(f"{key}: Cayley table, pcgs normal-form numbering, "
                f"relative orders {radices}, {mode} rank order\n"
                f"derived by scripts/derive_tables.py; validated against the catalog"),
    )
    print(f"{key}: {len(hits)} validating tuples, {len(tables)} distinct tables, "
          f"radices={radices} mode={mode}, wrote {out.name} ({dt:.1f}s)")


PROBES = {
    "sg126-1": [1, 2, 3],
    "sg126-2": [1, 2, 33],
    "sg126-3": [1],
    "sg126-7": [1, 2],
    "sg126-8": [1, 25, 38, 129],
    "sg126-10": [1, 191, 273, 900],
    "sg126-12": [1, 2, 74],
}


def main(argv):
    keys = argv or list(PROBES)
    for key in keys:
        derive(key, PROBES[key])


if __name__ == "__main__":
    main(sys.argv[1:])
