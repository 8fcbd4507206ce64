"""Fingerprint kernel, text format, point profiles."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import design_of
from unitals.designs import relabel
from unitals.errors import DuplicateKey, NotASteinerSystem, ParseError
from unitals.fingerprint import (
    TOTAL_QUADRUPLES,
    Fingerprint,
    fingerprint,
    format_fingerprint,
    parse_fingerprint,
    point_profile,
)


def test_classical_unital_fingerprint(design_classical):
    assert format_fingerprint(fingerprint(design_classical)) == "{4=7560000}"


def test_ex1_1_fingerprint(design_ex1_1):
    assert format_fingerprint(fingerprint(design_ex1_1)) == \
        "{1=25000, 2=580500, 3=3042000, 4=3912500}"


def test_total_invariant(design_ex1_1, design_classical):
    for d in (design_ex1_1, design_classical):
        assert fingerprint(d).total == TOTAL_QUADRUPLES


def test_key_range(design_ex1_1):
    assert all(0 <= k <= 4 for k, _ in fingerprint(design_ex1_1).items)


def test_relabeling_invariance(design_ex1_1):
    fp = fingerprint(design_ex1_1)
    for seed in (0, 1):
        perm = np.random.default_rng(seed).permutation(126)
        assert fingerprint(relabel(design_ex1_1, perm)) == fp


def test_rejects_non_steiner(z125, ex1_1):
    from unitals.designs import Design

    d = design_of("ex1-1")
    broken = Design.from_blocks(d.blocks[:-1], 126, d.labels)
    with pytest.raises(NotASteinerSystem):
        fingerprint(broken)


def test_point_profile_classical(design_classical):
    profiles = point_profile(design_classical)
    assert len(profiles) == 126
    assert all(p.as_dict() == {4: 60000} for p in profiles)


def test_point_profile_sums_to_global(design_ex1_1):
    profiles = point_profile(design_ex1_1)
    totals = {}
    for p in profiles:
        for k, v in p.items:
            totals[k] = totals.get(k, 0) + v
    assert Fingerprint.from_dict(totals) == fingerprint(design_ex1_1)


def test_transitive_profiles_identical():
    d = design_of("sg126-1-1")
    profiles = point_profile(d)
    assert len({p.items for p in profiles}) == 1


@pytest.mark.parametrize("text", [
    "{4=7560000}",
    "{0=1250, 1=42000, 2=635250, 3=2987500, 4=3894000}",
    "{}",
    "{1=25000, 2=580500, 3=3042000, 4=3912500}",
])
def test_format_parse_round_trip(text):
    assert format_fingerprint(parse_fingerprint(text)) == text


def test_parse_errors():
    with pytest.raises(DuplicateKey):
        parse_fingerprint("{1=2, 1=3}")
    with pytest.raises(ParseError):
        parse_fingerprint("{2=1, 1=2}")  # not ascending
    with pytest.raises(ParseError):
        parse_fingerprint("1=2")
    with pytest.raises(ParseError):
        parse_fingerprint("{1:2}")


@given(st.dictionaries(st.integers(min_value=0, max_value=9),
                       st.integers(min_value=1, max_value=10**9), max_size=8))
@settings(max_examples=200, deadline=None)
def test_round_trip_random_histograms(d):
    fp = Fingerprint.from_dict(d)
    assert parse_fingerprint(format_fingerprint(fp)) == fp
