"""Function families: parsing, construction, and truth-table spot checks."""

from fractions import Fraction

import pytest

import ctlab
from ctlab.bits import popcount
from ctlab.catalog import build, canonical_name, family_descriptions, parse_spec
from ctlab.errors import DomainError, UsageError
from ctlab.spaces import is_monotone, save_bft


def test_parse_round_trip():
    for text in ("or:3", "tribes:2,4", "threshold:5,3", "random-monotone-dnf:6,3,2,9"):
        assert canonical_name(parse_spec(text)) == text
    assert canonical_name(parse_spec("OR:3")) == "or:3"
    assert canonical_name(parse_spec(" Majority:5 ")) == "majority:5"


def test_parse_rejects_malformed():
    for bad in ("or", "or:", "or:x", "or:3,4", "tribes:2", "nosuch:3", ":3", "or:-1"):
        with pytest.raises(UsageError):
            parse_spec(bad)


def test_build_domain_guards():
    for bad in ("majority:4", "threshold:3,5", "graph-triangle:2", "graph-triangle:8",
                "tribes:0,2", "or:0", "or:25"):
        with pytest.raises(DomainError):
            build(bad)


def test_dictator_tables():
    f = build("dictator:3")
    for x in range(8):
        assert f.value_at(x) == (1 if x & 1 else -1)


def test_and_or_tables():
    f = build("and:2")
    assert [f.value_at(x) for x in range(4)] == [-1, -1, -1, 1]
    g = build("or:2")
    assert [g.value_at(x) for x in range(4)] == [-1, 1, 1, 1]


def test_majority_parity_threshold_tables():
    f = build("majority:3")
    g = build("parity:3")
    h = build("threshold:4,2")
    for x in range(8):
        assert f.value_at(x) == (1 if popcount(x) >= 2 else -1)
        assert g.value_at(x) == (1 if popcount(x) % 2 == 1 else -1)
    for x in range(16):
        assert h.value_at(x) == (1 if popcount(x) >= 2 else -1)


def test_threshold_extremes_are_constants():
    assert all(build("threshold:3,0").value_at(x) == 1 for x in range(8))
    assert all(build("threshold:3,4").value_at(x) == -1 for x in range(8))


def test_tribes_table():
    f = build("tribes:2,2")
    for x in range(16):
        t1 = (x & 0b0011) == 0b0011
        t2 = (x & 0b1100) == 0b1100
        assert f.value_at(x) == (1 if (t1 or t2) else -1)


def test_graph_triangle_3_is_and():
    assert build("graph-triangle:3") == build("and:3")


def test_graph_connected_3_is_majority():
    # any two of the three possible edges connect a triangle's vertices
    assert build("graph-connected:3") == build("majority:3")


def test_graph_connected_4_count():
    # 38 of the 64 labeled graphs on 4 vertices are connected
    f = build("graph-connected:4")
    assert sum(1 for x in range(64) if f.value_at(x) == 1) == 38
    assert is_monotone(f)


def test_graph_triangle_4_count():
    # inclusion-exclusion over the four triangles of K4: 32 - 12 + 4 - 1
    f = build("graph-triangle:4")
    assert sum(1 for x in range(64) if f.value_at(x) == 1) == 23
    assert is_monotone(f)


def test_random_dnf_deterministic_and_monotone():
    a = build("random-monotone-dnf:8,4,3,12345")
    b = build("random-monotone-dnf:8,4,3,12345")
    c = build("random-monotone-dnf:8,4,3,54321")
    assert a == b
    assert a != c
    assert is_monotone(a)


def test_table_family_round_trip(tmp_path):
    f = build("majority:5")
    path = tmp_path / "maj5.bft"
    save_bft(f, path)
    assert build(f"table:{path}") == f


def test_family_descriptions_cover_all_families():
    families = {d["family"] for d in family_descriptions()}
    for name in ("dictator", "and", "or", "majority", "parity", "threshold",
                 "tribes", "graph-triangle", "graph-connected",
                 "random-monotone-dnf", "table"):
        assert name in families
