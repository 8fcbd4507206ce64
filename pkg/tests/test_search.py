"""Difference-family search: completion, budgets, canonical pruning."""

import pytest

from conftest import entry
from unitals.designs import Mode, develop, verify_steiner
from unitals.difference import check_difference_family
from unitals.errors import InconsistentPartial, UnsupportedCanonicalization
from unitals.groups import INF
from unitals.isomorph import canonical_key
from unitals.search import (
    PartialFamily,
    SearchBudget,
    SearchStats,
    complete_family,
    search_families,
)


def full_blocks(e):
    return [b for b in e.base_blocks if not any(x is INF for x in b)]


def test_completion_recovers_infinity_block(z125, ex1_1):
    partial = PartialFamily(Mode.ONE_ROTATIONAL, full_blocks(ex1_1))
    stats = SearchStats()
    fams = complete_family(z125, partial, SearchBudget(max_nodes=10**6), stats)
    assert stats.nodes < 10**6 and not stats.budget_hit
    assert len(fams) == 1
    last = fams[0].base_blocks[-1]
    assert last[:5] == [0, 25, 50, 75, 100] and last[5] is INF
    assert verify_steiner(develop(z125, fams[0])).is_steiner


def test_completion_of_complete_family_returns_itself(z125, ex1_1):
    stats = SearchStats()
    fams = complete_family(z125, PartialFamily(Mode.ONE_ROTATIONAL, ex1_1.base_blocks),
                           SearchBudget(), stats)
    assert len(fams) == 1
    assert fams[0].base_blocks == ex1_1.base_blocks


def test_inconsistent_partial_rejected(z125, ex1_1):
    blocks = full_blocks(ex1_1)
    doubled = blocks + [blocks[0]]
    with pytest.raises(InconsistentPartial):
        complete_family(z125, PartialFamily(Mode.ONE_ROTATIONAL, doubled))


@pytest.mark.parametrize("j", range(1, 9))
def test_one_block_removed_recovers(j, z125):
    e = entry(f"ex1-{j}")
    partial_blocks = [b for i, b in enumerate(e.base_blocks) if i != 1]
    stats = SearchStats()
    fams = complete_family(z125, PartialFamily(Mode.ONE_ROTATIONAL, partial_blocks),
                           SearchBudget(max_nodes=10**6), stats)
    assert not stats.budget_hit
    assert fams
    for fam in fams:
        assert check_difference_family(z125, fam)
        assert verify_steiner(develop(z125, fam)).is_steiner


def test_trivial_budget_empty_stream(z125):
    stats = SearchStats()
    got = list(search_families(z125, Mode.ONE_ROTATIONAL,
                               SearchBudget(max_nodes=1), stats=stats))
    assert got == []
    assert stats.budget_hit


def test_search_deterministic(z125):
    runs = []
    for _ in range(2):
        stats = SearchStats()
        list(search_families(z125, Mode.ONE_ROTATIONAL,
                             SearchBudget(max_nodes=20000), stats=stats))
        runs.append((stats.nodes, stats.solutions))
    assert runs[0] == runs[1]


def test_canonicalize_requires_abelian():
    g = entry("sg126-1-1").group()
    with pytest.raises(UnsupportedCanonicalization):
        list(search_families(g, Mode.TRANSITIVE, SearchBudget(max_nodes=10)))


def test_seeded_rediscovery_matches_catalog(z125, ex1_1):
    """Completions from one catalog block land on catalog designs (up to iso).

    A from-scratch run needs > 3e8 nodes before the first solution, so the
    rediscovery check seeds the first base block and searches the rest.
    """
    partial = PartialFamily(Mode.ONE_ROTATIONAL, ex1_1.base_blocks[:1])
    stats = SearchStats()
    fams = complete_family(z125, partial,
                           SearchBudget(max_nodes=4_000_000, max_solutions=2), stats)
    assert fams, f"no completion within {stats.nodes} nodes"
    catalog_keys = {canonical_key(develop(entry(f"ex1-{j}").group(),
                                          entry(f"ex1-{j}").family()))
                    for j in range(1, 9)}
    for fam in fams:
        d = develop(z125, fam)
        assert verify_steiner(d).is_steiner
        assert canonical_key(d) in catalog_keys


def test_emitted_families_pass_checks(z125):
    # no duplicate canonical keys among canonicalized emissions
    stats = SearchStats()
    partial_source = entry("ex1-2")
    seen = set()
    fams = complete_family(z125,
                           PartialFamily(Mode.ONE_ROTATIONAL,
                                         partial_source.base_blocks[:2]),
                           SearchBudget(max_nodes=2_000_000, max_solutions=4), stats)
    for fam in fams:
        assert check_difference_family(z125, fam)
        key = canonical_key(develop(z125, fam))
        seen.add(key)
    assert len(seen) >= 1


def test_transitive_completion_with_stabilized_blocks():
    e = entry("sg126-1-1")
    g = e.group()
    # drop the final block and let the search recover a completion
    partial = PartialFamily(Mode.TRANSITIVE, e.base_blocks[:-1])
    stats = SearchStats()
    fams = complete_family(g, partial,
                           SearchBudget(max_nodes=2_000_000, max_solutions=2), stats)
    assert fams
    for fam in fams:
        assert verify_steiner(develop(g, fam)).is_steiner
