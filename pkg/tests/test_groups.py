"""Group layer: construction, validation, labels."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from unitals.errors import (
    IndexOutOfRange,
    InvalidAction,
    OrderMismatch,
    ParseError,
    ValidationError,
)
from unitals.groups import (
    INF,
    Cyclic,
    External,
    Product,
    Semidirect,
    build_group,
    format_element_label,
    inverse,
    load_cayley_table,
    multiply,
    parse_element_label,
    save_cayley_table,
    spec_from_json,
    spec_to_json,
    validate_table,
)

Z25_X_Z5 = Semidirect(Cyclic(25), Cyclic(5), ((1, 6),))
Z5SQ_X_Z5 = Semidirect(Product(Cyclic(5), Cyclic(5)), Cyclic(5),
                       (((0, 1), (0, 1)), ((1, 0), (1, 1))))

# reduced order-5 Latin square failing only associativity (found by brute
# force over reduced squares; the unique group of order 5 is Z5)
NON_ASSOC_5 = [
    [0, 1, 2, 3, 4],
    [1, 0, 3, 4, 2],
    [2, 4, 0, 1, 3],
    [3, 2, 4, 0, 1],
    [4, 3, 1, 2, 0],
]


def test_cyclic_table():
    g = build_group(Cyclic(5))
    for a in range(5):
        for b in range(5):
            assert g.mul(a, b) == (a + b) % 5
    assert g.identity == 0


def test_semidirect_z25_z5_product_rule():
    g = build_group(Z25_X_Z5)
    assert g.labels[g.mul(g.resolve((0, 1)), g.resolve((1, 0)))] == (6, 1)


def test_semidirect_z5sq_z5_product_rule():
    g = build_group(Z5SQ_X_Z5)
    lhs = g.resolve(((1, 0), 1))
    rhs = g.resolve(((1, 0), 0))
    assert g.labels[g.mul(lhs, rhs)] == ((2, 1), 1)


def test_multiply_and_inverse(z125):
    assert multiply(z125, 100, 50) == 25
    assert inverse(z125, z125.identity) == z125.identity
    with pytest.raises(IndexOutOfRange):
        multiply(z125, 0, 125)


def test_semidirect_inverse_by_row_scan():
    g = build_group(Z25_X_Z5)
    x = g.resolve((1, 1))
    # independent oracle: scan the row for the identity
    row = [g.mul(x, h) for h in range(g.order)]
    inv_scan = row.index(g.identity)
    assert inverse(g, x) == inv_scan
    assert g.labels[inv_scan] == (4, 4)
    assert g.mul(x, inv_scan) == g.identity


def test_load_tiny_table(tmp_path):
    p = tmp_path / "z2.txt"
    p.write_text("2\n0 1\n1 0\n")
    g = load_cayley_table(p)
    assert g.order == 2 and g.mul(1, 1) == 0


def test_load_rejects_non_latin(tmp_path):
    p = tmp_path / "bad.txt"
    p.write_text("2\n0 0\n1 0\n")
    with pytest.raises(ValidationError, match="row 0"):
        load_cayley_table(p)


def test_z6_mixed_radix_round_trip(tmp_path):
    # generate the Z2 x Z3 table by formula, round-trip through the loader
    table = [[0] * 6 for _ in range(6)]
    for a2 in range(2):
        for a3 in range(3):
            for b2 in range(2):
                for b3 in range(3):
                    i, j = a2 * 3 + a3, b2 * 3 + b3
                    table[i][j] = ((a2 + b2) % 2) * 3 + (a3 + b3) % 3
    p = tmp_path / "z6.txt"
    p.write_text("6\n" + "\n".join(" ".join(map(str, r)) for r in table) + "\n")
    g = load_cayley_table(p)
    assert g.identity == 0
    assert [list(r) for r in g.table] == table
    save_cayley_table(g, tmp_path / "z6b.txt", header="round trip")
    g2 = load_cayley_table(tmp_path / "z6b.txt")
    assert np.array_equal(g.table, g2.table)


def test_validate_valid_group(z125):
    assert validate_table(z125.table).ok


def test_validate_reports_associativity_triple():
    g = build_group(Cyclic(6))
    t = g.table.copy()
    # swap two entries in one row: keeps the row a permutation
    t[1, 2], t[1, 4] = t[1, 4], t[1, 2]
    report = validate_table(t)
    assert not report.ok
    assert "latin-square" in report.kinds() or "associativity" in report.kinds()


def test_validate_non_associative_latin_square():
    report = validate_table(NON_ASSOC_5)
    assert not report.ok
    assert report.kinds() == {"associativity"}
    assert "(1, 1, 2)" in str(report)


def test_invalid_action_rejected():
    with pytest.raises(InvalidAction):
        build_group(Semidirect(Cyclic(25), Cyclic(5), ((1, 5),)))  # 1->5 not bijective
    with pytest.raises(OrderMismatch):
        build_group(Semidirect(Cyclic(7), Cyclic(2), ((1, 2),)))  # order-3 action


def test_semidirect_order_and_commutativity():
    g = build_group(Z25_X_Z5)
    assert g.order == 125
    assert not g.is_abelian()
    assert build_group(Cyclic(126)).is_abelian()
    assert build_group(Product(Cyclic(5), Cyclic(25))).order == 125


@pytest.mark.parametrize("text,expected", [
    ("(2, 13)", (2, 13)),
    ("((0, 1), 3)", ((0, 1), 3)),
    ("inf", INF),
    ("∞", INF),
    ("42", 42),
])
def test_parse_element_label(text, expected):
    assert parse_element_label(text) == expected


def test_parse_label_errors():
    for bad in ["", "(1,", "1)", "(1 2)", "abc"]:
        with pytest.raises(ParseError):
            parse_element_label(bad)


labels = st.recursive(
    st.integers(min_value=0, max_value=200),
    lambda children: st.tuples(children, children) | st.tuples(children, children, children),
    max_leaves=6,
)


@given(labels)
@settings(max_examples=200, deadline=None)
def test_label_round_trip(label):
    assert parse_element_label(format_element_label(label)) == label
    assert parse_element_label(format_element_label(label, compact=True)) == label


def test_catalog_group_label_bijections():
    for spec in [Cyclic(125), Product(Cyclic(5), Cyclic(25)), Z25_X_Z5, Z5SQ_X_Z5,
                 Product(Product(Cyclic(5), Cyclic(5)), Cyclic(5))]:
        g = build_group(spec)
        assert len(set(g.labels)) == g.order
        for i, lab in enumerate(g.labels):
            assert g.resolve(lab) == i
            assert parse_element_label(format_element_label(lab)) == lab


def test_spec_json_round_trip():
    for spec in [Cyclic(125), Z25_X_Z5, Z5SQ_X_Z5, External("tables/sg126_1.txt")]:
        assert spec_from_json(spec_to_json(spec)) == spec


@given(st.integers(min_value=2, max_value=20), st.data())
@settings(max_examples=120, deadline=None)
def test_random_mutations_caught(n, data):
    g = build_group(Cyclic(n))
    t = g.table.copy()
    kind = data.draw(st.sampled_from(["replace", "swap"]))
    i = data.draw(st.integers(0, n - 1))
    j = data.draw(st.integers(0, n - 1))
    if kind == "replace":
        v = data.draw(st.integers(0, n - 1).filter(lambda x: x != t[i, j]))
        t[i, j] = v
    else:
        k = data.draw(st.integers(0, n - 1).filter(lambda x: x != j))
        if t[i, j] == t[i, k]:
            return
        t[i, j], t[i, k] = t[i, k], t[i, j]
    assert not validate_table(t).ok
