"""Algebraic validation of difference families, without developing them.

A pair {p, q} lies in the left translate g*B iff g = p*a^-1 = q*b^-1 for some
a, b in B, i.e. q^-1 p = b^-1 a.  So the number of distinct translates of B
covering {p, q} equals the number of ordered pairs (a, b) in B with
b^-1 a = q^-1 p, divided by the order of B's left stabilizer.  This module
checks exact coverage directly from those counts; it is the independent
counterpart to develop + verify_steiner.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .designs import DifferenceFamily, Mode, resolve_family
from .groups import CayleyGroup


@dataclass
class DifferenceCoverage:
    """counts[d] = ordered pairs (a, b), a != b, with b^-1 a = d (finite labels)."""

    counts: np.ndarray  # (|G|,) int64
    per_block: list  # per base block: (finite part, stabilizer order, counts)

    @property
    def total(self) -> int:
        return int(self.counts.sum())


def left_stabilizer_order(group: CayleyGroup, block: list) -> int:
    """|{h : h*B = B}| for a set of group elements."""
    bset = frozenset(block)
    count = 0
    for h in range(group.order):
        if all(group.mul(h, b) in bset for b in block):
            count += 1
    return count


def difference_coverage(group: CayleyGroup, family: DifferenceFamily) -> DifferenceCoverage:
    inf_index = group.order
    base = resolve_family(group, family)
    counts = np.zeros(group.order, dtype=np.int64)
    per_block = []
    for block in base:
        finite = [p for p in block if p != inf_index]
        block_counts = np.zeros(group.order, dtype=np.int64)
        for a in finite:
            for b in finite:
                if a != b:
                    block_counts[group.mul(group.inv(b), a)] += 1
        stab = left_stabilizer_order(group, finite)
        counts += block_counts
        per_block.append((finite, stab, block_counts))
    return DifferenceCoverage(counts, per_block)


@dataclass
class DifferenceCheck:
    ok: bool
    defects: list  # human-readable defect strings

    def __bool__(self):
        return self.ok


def check_difference_family(group: CayleyGroup, family: DifferenceFamily) -> DifferenceCheck:
    """True iff the family develops into an S(2,6,126), decided algebraically.

    Each base block's difference counts are quotiented by its left-stabilizer
    order; every non-identity element must be covered exactly once.  In
    1-rotational mode the distinct translates of the ∞-blocks' finite parts
    must additionally partition the group (pairs {x, ∞}).
    """
    inf_index = group.order
    defects = []
    base = resolve_family(group, family)
    if not base:
        return DifferenceCheck(False, ["empty family covers nothing"])

    n = group.order
    quotiented = np.zeros(n, dtype=np.int64)
    inf_blocks = []
    for block in base:
        finite = [p for p in block if p != inf_index]
        if len(finite) < len(block):
            inf_blocks.append(finite)
        block_counts = np.zeros(n, dtype=np.int64)
        for a in finite:
            for b in finite:
                if a != b:
                    block_counts[group.mul(group.inv(b), a)] += 1
        stab = left_stabilizer_order(group, finite)
        if (block_counts % stab != 0).any():
            defects.append(
                f"block {finite}: difference counts not divisible by stabilizer {stab}")
            return DifferenceCheck(False, defects)
        quotiented += block_counts // stab

    for d in range(n):
        if d == group.identity:
            if quotiented[d] != 0:
                defects.append(f"identity difference covered {quotiented[d]:g} times")
            continue
        if quotiented[d] != 1:
            label = group.labels[d]
            word = "over" if quotiented[d] > 1 else "under"
            defects.append(
                f"difference {label!r} {word}-covered ({quotiented[d]:g} times)")

    if family.mode is Mode.ONE_ROTATIONAL:
        translates = set()
        for finite in inf_blocks:
            for g in range(n):
                translates.add(frozenset(group.mul(g, b) for b in finite))
        covered = np.zeros(n, dtype=np.int64)
        for translate in translates:
            for x in translate:
                covered[x] += 1
        bad = np.nonzero(covered != 1)[0]
        for x in bad[:10]:
            defects.append(
                f"pair {{{group.labels[int(x)]!r}, ∞}} covered {int(covered[x])} times")
        if len(bad) > 10:
            defects.append(f"... {len(bad) - 10} more ∞-pair defects")
        if not inf_blocks:
            defects.append("no ∞-block: pairs {x, ∞} uncovered")

    return DifferenceCheck(not defects, defects)
