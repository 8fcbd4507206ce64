"""Bounded difference-family search and completion.

Depth-first search over candidate base blocks, driven by a difference-cover
bitset: each accepted block must cover the smallest currently uncovered
difference, which visits every family exactly once.  Candidate blocks contain
the identity (translation normalization).  Three candidate kinds:

  * full blocks with 30 pairwise-distinct differences (trivial stabilizer);
  * in 1-rotational mode, the ∞-block H ∪ {∞} for an order-5 subgroup H;
  * subgroup-coset unions (stabilized blocks, orbit size |G|/|S|), which are
    the only way to cover involution differences in transitive mode.
"""

from __future__ import annotations

import time
from dataclasses import dataclass

import numpy as np

from .designs import BLOCK_SIZE, DifferenceFamily, Mode
from .difference import check_difference_family, left_stabilizer_order
from .errors import InconsistentPartial, UnsupportedCanonicalization
from .groups import INF, CayleyGroup, subgroups_of_order


@dataclass
class SearchBudget:
    max_nodes: int = 1_000_000
    max_solutions: int = 1_000_000
    time_limit_s: float = 3600.0

    def __post_init__(self):
        if self.max_nodes <= 0 or self.max_solutions <= 0 or self.time_limit_s <= 0:
            raise ValueError("budget fields must be positive")


@dataclass
class SearchStats:
    nodes: int = 0
    solutions: int = 0
    budget_hit: bool = False

    @property
    def exhausted(self) -> bool:
        return not self.budget_hit


@dataclass
class PartialFamily:
    mode: Mode
    fixed_blocks: list  # label lists (6 labels each, possibly with ∞)

    def __post_init__(self):
        self.mode = Mode(self.mode)


class _Budget:
    def __init__(self, budget: SearchBudget, stats: SearchStats):
        self.budget = budget
        self.stats = stats
        self.deadline = time.monotonic() + budget.time_limit_s

    def tick(self) -> bool:
        """Count a node; True while the search may continue."""
        self.stats.nodes += 1
        if self.stats.nodes >= self.budget.max_nodes or time.monotonic() > self.deadline:
            self.stats.budget_hit = True
            return False
        return True

    def solutions_left(self) -> bool:
        return self.stats.solutions < self.budget.max_solutions


def _block_differences(group: CayleyGroup, block) -> np.ndarray:
    counts = np.zeros(group.order, dtype=np.int64)
    for a in block:
        for b in block:
            if a != b:
                counts[group.mul(group.inv(b), a)] += 1
    return counts


@dataclass
class _StabilizedCandidate:
    block: tuple  # sorted element indices, contains the identity
    covered: np.ndarray  # bool: differences covered exactly once after quotient


def _stabilized_candidates(group: CayleyGroup) -> list:
    """Coset-union blocks (one per left-stabilizer class), quotient-exact only."""
    out = []
    seen = set()
    n = group.order
    for s in (6, 3, 2):
        if BLOCK_SIZE % s != 0:
            continue
        for sub in subgroups_of_order(group, s):
            sub_sorted = sorted(sub)
            cosets = sorted({tuple(sorted(group.mul(h, x) for h in sub_sorted))
                             for x in range(n)})
            others = [c for c in cosets if group.identity not in c]
            base = tuple(sorted(sub_sorted))
            for extra in _coset_combinations(others, BLOCK_SIZE // s - 1):
                block = tuple(sorted(base + sum(extra, ())))
                if block in seen:
                    continue
                seen.add(block)
                counts = _block_differences(group, block)
                stab = left_stabilizer_order(group, list(block))
                if (counts % stab != 0).any():
                    continue
                quot = counts // stab
                if quot.max() > 1:
                    continue  # would cover some difference twice
                out.append(_StabilizedCandidate(block, quot == 1))
    return out


def _coset_combinations(cosets: list, k: int):
    if k == 0:
        yield ()
        return
    for i, c in enumerate(cosets):
        for rest in _coset_combinations(cosets[i + 1:], k - 1):
            yield (c,) + rest


def _inf_block_candidates(group: CayleyGroup) -> list:
    """Order-5 subgroups H: the ∞-block must be H ∪ {∞} up to translation."""
    return [tuple(sorted(h)) for h in subgroups_of_order(group, 5)]


class _Searcher:
    def __init__(self, group: CayleyGroup, mode: Mode, budget: SearchBudget,
                 stats: SearchStats, canonical_transforms=None):
        self.group = group
        self.mode = mode
        self.stats = stats
        self.budget = _Budget(budget, stats)
        self.canonical_transforms = canonical_transforms
        self.inv = group.inverses
        self.table = group.table
        n = group.order
        self.is_involution = np.zeros(n, dtype=bool)
        for g in range(n):
            self.is_involution[g] = group.mul(g, g) == group.identity and g != group.identity
        self.stabilized = _stabilized_candidates(group) if mode is Mode.TRANSITIVE else []

    # ------------------------------------------------------------------
    def run(self, fixed_blocks_idx: list, uncovered: np.ndarray, need_inf: bool):
        """Yield completed families (index blocks); generator-based DFS."""
        yield from self._extend(fixed_blocks_idx, [], uncovered, need_inf)

    def _emit(self, fixed, chosen):
        return [list(b) for b in fixed] + [list(b) for b in chosen]

    def _extend(self, fixed, chosen, uncovered, need_inf):
        if self.stats.budget_hit or not self.budget.solutions_left():
            return
        if need_inf:
            # the ∞-block is forced up to the choice of the order-5 subgroup
            for h in _inf_block_candidates(self.group):
                if not self.budget.tick():
                    return
                cov = np.zeros(self.group.order, dtype=bool)
                cov[list(h)] = True
                cov[self.group.identity] = False
                if (cov & ~uncovered).any():
                    continue
                chosen.append(tuple(sorted(h)) + (-1,))  # -1 marks ∞
                yield from self._extend(fixed, chosen, uncovered & ~cov, False)
                chosen.pop()
            return
        if not uncovered.any():
            self.stats.solutions += 1
            yield self._emit(fixed, chosen)
            return
        delta = int(np.nonzero(uncovered)[0][0])
        # stabilized candidates (transitive mode): precomputed coset unions
        for cand in self.stabilized:
            if not cand.covered[delta]:
                continue
            if (cand.covered & ~uncovered).any():
                continue
            if not self.budget.tick():
                return
            chosen.append(cand.block)
            yield from self._extend(fixed, chosen, uncovered & ~cand.covered, False)
            chosen.pop()
            if self.stats.budget_hit:
                return
        if self.is_involution[delta]:
            return  # a full block covers d and d^-1 separately; impossible here
        yield from self._full_blocks(fixed, chosen, uncovered, delta)

    def _full_blocks(self, fixed, chosen, uncovered, delta):
        """Blocks {e, delta, x3..x6} with 30 distinct uncovered differences."""
        group = self.group
        e = group.identity
        used = np.zeros(group.order, dtype=bool)

        def add_diffs(x, members):
            """Register differences of x against members; None if infeasible."""
            new = []
            for s in members:
                d1 = int(self.table[self.inv[s], x])
                d2 = int(self.table[self.inv[x], s])
                if d1 == d2:  # involution difference: needs a stabilized block
                    undo(new)
                    return None
                ok = True
                for d in (d1, d2):
                    if used[d] or not uncovered[d] or d == e:
                        ok = False
                        break
                    used[d] = True
                    new.append(d)
                if not ok:
                    undo(new)
                    return None
            return new

        def undo(new):
            for d in new:
                used[d] = False

        def rec(members, start):
            if self.stats.budget_hit or not self.budget.solutions_left():
                return
            if len(members) == BLOCK_SIZE:
                block = tuple(sorted(members))
                if (self.canonical_transforms is not None
                        and not fixed and not chosen
                        and not self._first_block_canonical(block, delta)):
                    return
                cov = used.copy()
                chosen.append(block)
                yield from self._extend(fixed, chosen, uncovered & ~cov, False)
                chosen.pop()
                return
            for x in range(start, group.order):
                if x in members:
                    continue
                if not self.budget.tick():
                    return
                new = add_diffs(x, members)
                if new is None:
                    continue
                members.append(x)
                yield from rec(members, x + 1)
                members.pop()
                undo(new)
                if self.stats.budget_hit:
                    return

        seed = add_diffs(delta, [e])
        if seed is None:
            return
        yield from rec([e, delta], 1)
        undo(seed)

    def _first_block_canonical(self, block, delta) -> bool:
        """Is the block lexicographically minimal among its images under the
        supplied automorphisms, translated to contain {e, delta}?"""
        target = block
        e = self.group.identity
        for sigma in self.canonical_transforms:
            img = [int(sigma[x]) for x in block]
            for x in img:
                xinv = self.group.inv(x)
                form = tuple(sorted(int(self.table[xinv, y]) for y in img))
                if delta not in form:
                    continue
                if form < target:
                    return False
        return True


def _fixed_state(group: CayleyGroup, partial: PartialFamily):
    """(index blocks, uncovered array, need_inf) from the fixed blocks."""
    inf_index = group.order
    fam = DifferenceFamily(partial.mode, partial.fixed_blocks) if partial.fixed_blocks else None
    blocks_idx = []
    if fam is not None:
        from .designs import resolve_family

        blocks_idx = resolve_family(group, fam)
    quotiented = np.zeros(group.order, dtype=np.int64)
    have_inf = False
    for block in blocks_idx:
        finite = [p for p in block if p != inf_index]
        if len(finite) < len(block):
            have_inf = True
        counts = _block_differences(group, finite)
        stab = left_stabilizer_order(group, finite)
        if (counts % stab != 0).any():
            raise InconsistentPartial("difference counts not divisible by stabilizer")
        quotiented += counts // stab
    if quotiented.max() > 1:
        over = int(np.nonzero(quotiented > 1)[0][0])
        raise InconsistentPartial(
            f"difference {group.labels[over]!r} covered {int(quotiented[over])} times")
    if quotiented[group.identity] != 0:
        raise InconsistentPartial("identity difference covered")
    uncovered = quotiented == 0
    uncovered[group.identity] = False
    need_inf = partial.mode is Mode.ONE_ROTATIONAL and not have_inf
    return blocks_idx, uncovered, need_inf


def _blocks_to_family(group: CayleyGroup, mode: Mode, index_blocks: list) -> DifferenceFamily:
    blocks = []
    for block in index_blocks:
        labels = [INF if p in (-1, group.order) else group.labels[p] for p in block]
        blocks.append(labels)
    return DifferenceFamily(mode, blocks)


def complete_family(group: CayleyGroup, partial: PartialFamily,
                    budget: SearchBudget | None = None,
                    stats: SearchStats | None = None) -> list:
    """All completions of the partial family within budget.

    Every returned family passes check_difference_family.  Inspect the stats
    object (budget_hit) to learn whether the search was exhaustive.
    """
    budget = budget or SearchBudget()
    stats = stats if stats is not None else SearchStats()
    fixed_idx, uncovered, need_inf = _fixed_state(group, partial)
    searcher = _Searcher(group, partial.mode, budget, stats)
    out = []
    for idx_blocks in searcher.run(fixed_idx, uncovered, need_inf):
        fam = _blocks_to_family(group, partial.mode, idx_blocks)
        if not check_difference_family(group, fam):
            raise AssertionError("search emitted a family failing the algebraic check")
        out.append(fam)
    return out


def multiplier_generators(group: CayleyGroup) -> list:
    """Default canonical-pruning automorphisms: multipliers of a cyclic group.

    For cyclic groups (integer labels 0..n-1) the maps x -> u x over a set of
    units generating (Z/n)* give the full automorphism group.  For other
    abelian groups the default is empty (translation-only normalization);
    callers may supply their own generator permutations.
    """
    import math

    n = group.order
    if not group.is_abelian():
        raise UnsupportedCanonicalization("canonical pruning needs an abelian group")
    if not all(isinstance(lab, int) for lab in group.labels):
        return []
    gens = []
    covered = {1}
    for u in range(2, n):
        if math.gcd(u, n) != 1 or u in covered:
            continue
        gens.append(np.array([group.index[(u * lab) % n] for lab in group.labels],
                             dtype=np.int64))
        # close the covered unit set under multiplication
        new = {u}
        while new:
            x = new.pop()
            covered.add(x)
            for v in list(covered):
                w = (x * v) % n
                if w not in covered:
                    new.add(w)
    return gens


def _closure_of_perms(gens: list, n: int) -> list:
    """All permutations generated by gens (small groups only)."""
    ident = tuple(range(n))
    seen = {ident}
    frontier = [ident]
    gens_t = [tuple(int(x) for x in g) for g in gens]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens_t:
                q = tuple(g[x] for x in p)
                if q not in seen:
                    seen.add(q)
                    nxt.append(q)
        frontier = nxt
    return [np.array(p, dtype=np.int64) for p in sorted(seen)]


def search_families(group: CayleyGroup, mode: Mode | str,
                    budget: SearchBudget | None = None,
                    canonicalize: bool = True,
                    aut_generators: list | None = None,
                    stats: SearchStats | None = None):
    """Yield difference families over the group; exhaustive within budget.

    With canonicalize, the first base block is normalized to be
    lexicographically minimal under translations and the automorphism group
    generated by aut_generators (default: the multiplier group for cyclic
    groups), and families developing to designs with an already-seen
    canonical key are suppressed.
    """
    mode = Mode(mode)
    budget = budget or SearchBudget()
    stats = stats if stats is not None else SearchStats()
    transforms = None
    if canonicalize:
        if aut_generators is None:
            aut_generators = multiplier_generators(group)  # raises if non-abelian
        transforms = _closure_of_perms(aut_generators, group.order)
    searcher = _Searcher(group, mode, budget, stats, canonical_transforms=transforms)
    uncovered = np.ones(group.order, dtype=bool)
    uncovered[group.identity] = False
    need_inf = mode is Mode.ONE_ROTATIONAL

    seen_keys = set()
    for idx_blocks in searcher.run([], uncovered, need_inf):
        fam = _blocks_to_family(group, mode, idx_blocks)
        if not check_difference_family(group, fam):
            raise AssertionError("search emitted a family failing the algebraic check")
        if canonicalize:
            from .designs import develop
            from .isomorph import canonical_key

            key = canonical_key(develop(group, fam))
            if key in seen_keys:
                continue
            seen_keys.add(key)
        yield fam
