"""Shared fixtures: catalog entries and developed designs, cached per session."""

from __future__ import annotations

import pytest

from unitals.catalog import catalog_dir, load_entry
from unitals.designs import develop


def entry(entry_id: str):
    key = entry_id.rpartition("-")[0]
    return load_entry(catalog_dir() / key / f"{entry_id}.json")


_design_cache = {}


def design_of(entry_id: str):
    got = _design_cache.get(entry_id)
    if got is None:
        e = entry(entry_id)
        got = develop(e.group(), e.family())
        _design_cache[entry_id] = got
    return got


@pytest.fixture(scope="session")
def ex1_1():
    return entry("ex1-1")


@pytest.fixture(scope="session")
def z125(ex1_1):
    return ex1_1.group()


@pytest.fixture(scope="session")
def design_ex1_1():
    return design_of("ex1-1")


@pytest.fixture(scope="session")
def design_classical():
    return design_of("ex3-1")
