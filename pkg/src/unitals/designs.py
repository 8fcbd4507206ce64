"""Point-block incidence structures developed from difference families.

A difference family over a group G is developed by the left action: the block
set is { g*B : g in G, B a base block }, deduplicated.  In 1-rotational mode
(|G| = 125) the extra fixed point ∞ gets the last point index |G|; in
transitive mode (|G| = 126) the points are exactly the group elements.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np

from .errors import (
    LabelNotInGroup,
    ModeOrderMismatch,
    NotAPermutation,
    SamePoint,
    SchemaError,
)
from .groups import INF, CayleyGroup, ElementLabel, format_element_label

BLOCK_SIZE = 6
N_POINTS = 126
BLOCK_COUNT = 525  # 126*125 / (6*5)


class Mode(str, Enum):
    TRANSITIVE = "transitive"
    ONE_ROTATIONAL = "one-rotational"


@dataclass
class DifferenceFamily:
    """Base blocks over labeled group elements plus a development mode."""

    mode: Mode
    base_blocks: list  # list of blocks; each block is a list of ElementLabel

    def __post_init__(self):
        self.mode = Mode(self.mode)
        for i, block in enumerate(self.base_blocks):
            if len(block) != BLOCK_SIZE:
                raise SchemaError(f"block {i} has {len(block)} entries, expected 6")
            if len(set(map(_label_key, block))) != BLOCK_SIZE:
                raise SchemaError(f"block {i} has repeated entries")
            n_inf = sum(1 for lab in block if lab is INF)
            if n_inf and self.mode is not Mode.ONE_ROTATIONAL:
                raise SchemaError("∞ label only allowed in one-rotational mode")
            if n_inf > 1:
                raise SchemaError(f"block {i} contains ∞ more than once")


def _label_key(lab):
    return ("inf",) if lab is INF else (type(lab).__name__, lab)


@dataclass
class Design:
    """Developed design: sorted blocks plus pair->line index and line bitmasks."""

    n_points: int
    blocks: tuple  # tuple of sorted point-index tuples
    labels: tuple  # point index -> ElementLabel (∞ last in 1-rotational mode)
    line_of: np.ndarray = field(repr=False)  # (n, n) int32, -1 off-diagonal sentinel
    line_masks: np.ndarray = field(repr=False)  # (b, 2) uint64
    _cache: dict = field(default_factory=dict, repr=False)

    @classmethod
    def from_blocks(cls, blocks: Sequence[Sequence[int]], n_points: int,
                    labels: Sequence[ElementLabel] | None = None) -> "Design":
        blk = tuple(sorted(tuple(sorted(int(p) for p in b)) for b in blocks))
        for b in blk:
            if len(set(b)) != len(b):
                raise SchemaError(f"block {b} has repeated points")
            if b and (b[0] < 0 or b[-1] >= n_points):
                raise SchemaError(f"block {b} outside point range 0..{n_points - 1}")
        if labels is None:
            labels = tuple(range(n_points))
        line_of = np.full((n_points, n_points), -1, dtype=np.int32)
        for i, b in enumerate(blk):
            for j, p in enumerate(b):
                for q in b[j + 1:]:
                    if line_of[p, q] == -1:
                        line_of[p, q] = i
                        line_of[q, p] = i
        masks = np.zeros((max(len(blk), 1), 2), dtype=np.uint64)
        for i, b in enumerate(blk):
            for p in b:
                masks[i, p >> 6] |= np.uint64(1) << np.uint64(p & 63)
        return cls(n_points, blk, tuple(labels), line_of, masks)

    @property
    def block_count(self) -> int:
        return len(self.blocks)

    def block_array(self) -> np.ndarray:
        arr = self._cache.get("block_array")
        if arr is None:
            arr = np.asarray(self.blocks, dtype=np.int32)
            self._cache["block_array"] = arr
        return arr

    def format_block(self, index: int, compact: bool = True) -> str:
        return " ".join(
            format_element_label(self.labels[p], compact=compact)
            for p in self.blocks[index]
        )


def resolve_family(group: CayleyGroup, family: DifferenceFamily) -> list:
    """Base blocks as point-index lists (∞ -> |G|), checking mode/order."""
    if family.mode is Mode.TRANSITIVE and group.order != N_POINTS:
        raise ModeOrderMismatch(
            f"transitive development needs group order 126, got {group.order}")
    if family.mode is Mode.ONE_ROTATIONAL and group.order != N_POINTS - 1:
        raise ModeOrderMismatch(
            f"1-rotational development needs group order 125, got {group.order}")
    inf_index = group.order
    resolved = []
    for block in family.base_blocks:
        resolved.append([
            inf_index if lab is INF else group.resolve(lab) for lab in block
        ])
    return resolved


def develop(group: CayleyGroup, family: DifferenceFamily) -> Design:
    """Left development of the base blocks; deduplicates, does not verify."""
    base = resolve_family(group, family)
    return develop_blocks(group, base, one_rotational=family.mode is Mode.ONE_ROTATIONAL)


def develop_blocks(group: CayleyGroup, base_blocks: Sequence[Sequence[int]],
                   one_rotational: bool = False) -> Design:
    """Development of raw index blocks (any block size; used by search too)."""
    n = group.order
    inf_index = n
    n_points = n + 1 if one_rotational else n
    seen = set()
    out = []
    table = group.table
    for block in base_blocks:
        finite = [p for p in block if p != inf_index]
        if any(not 0 <= p < n for p in finite):
            raise LabelNotInGroup(f"block {block} has out-of-range entries")
        has_inf = len(finite) < len(block)
        if has_inf and not one_rotational:
            raise LabelNotInGroup("∞ point requires 1-rotational mode")
        translates = table[:, finite]  # row g = g*B
        translates = np.sort(translates, axis=1)
        for row in translates:
            key = tuple(int(x) for x in row)
            if has_inf:
                key = key + (inf_index,)
            if key not in seen:
                seen.add(key)
                out.append(key)
    labels = group.labels + ((INF,) if one_rotational else ())
    return Design.from_blocks(out, n_points, labels)


@dataclass
class VerificationReport:
    is_steiner: bool
    block_count: int
    pair_coverage_defects: list  # ((p, q), count) with count != 1
    duplicate_blocks: int

    def __str__(self):
        if self.is_steiner:
            return f"valid S(2,6,126): {self.block_count} blocks, all pairs covered once"
        head = (f"not a Steiner system: {self.block_count} blocks, "
                f"{len(self.pair_coverage_defects)} defective pairs, "
                f"{self.duplicate_blocks} duplicate blocks")
        lines = [head]
        for (p, q), c in self.pair_coverage_defects[:20]:
            lines.append(f"  pair ({p}, {q}) covered {c} times")
        if len(self.pair_coverage_defects) > 20:
            lines.append(f"  ... {len(self.pair_coverage_defects) - 20} more")
        return "\n".join(lines)


def verify_steiner(design: Design) -> VerificationReport:
    """Exact pair-coverage count over all unordered point pairs."""
    n = design.n_points
    cov = np.zeros((n, n), dtype=np.int32)
    duplicates = len(design.blocks) - len(set(design.blocks))
    for b in design.blocks:
        for j, p in enumerate(b):
            for q in b[j + 1:]:
                cov[p, q] += 1
    defects = []
    iu = np.triu_indices(n, k=1)
    bad = np.nonzero(cov[iu] != 1)[0]
    for k in bad:
        p, q = int(iu[0][k]), int(iu[1][k])
        defects.append(((p, q), int(cov[p, q])))
    block_sizes_ok = all(len(b) == BLOCK_SIZE for b in design.blocks)
    is_steiner = (
        not defects
        and design.block_count == BLOCK_COUNT
        and design.n_points == N_POINTS
        and block_sizes_ok
        and duplicates == 0
    )
    return VerificationReport(is_steiner, design.block_count, defects, duplicates)


def line_through(design: Design, p: int, q: int) -> int:
    """Index of the unique block containing both points (O(1) lookup)."""
    if p == q:
        raise SamePoint(f"line_through needs two distinct points, got {p} twice")
    n = design.n_points
    if not (0 <= p < n and 0 <= q < n):
        raise SamePoint(f"points ({p}, {q}) out of range")
    return int(design.line_of[p, q])


def relabel(design: Design, permutation: Sequence[int]) -> Design:
    """Apply a point bijection; blocks are re-sorted and indices rebuilt."""
    perm = np.asarray(permutation, dtype=np.int64)
    n = design.n_points
    if perm.shape != (n,) or not np.array_equal(np.sort(perm), np.arange(n)):
        raise NotAPermutation(f"not a bijection on 0..{n - 1}")
    new_labels = [None] * n
    for p in range(n):
        new_labels[int(perm[p])] = design.labels[p]
    blocks = [[int(perm[p]) for p in b] for b in design.blocks]
    return Design.from_blocks(blocks, n, tuple(new_labels))


def translation_permutation(group: CayleyGroup, g: int, one_rotational: bool) -> np.ndarray:
    """Left translation by g as a permutation of design points (∞ fixed)."""
    perm = group.table[g].astype(np.int64)
    if one_rotational:
        perm = np.concatenate([perm, [group.order]])
    return perm


def is_block_invariant(design: Design, perm: Sequence[int]) -> bool:
    """Does the permutation map the block set onto itself?"""
    perm = np.asarray(perm, dtype=np.int64)
    arr = design.block_array()
    mapped = np.sort(perm[arr], axis=1)
    order = np.lexsort(mapped.T[::-1])
    return bool(np.array_equal(mapped[order], arr))
