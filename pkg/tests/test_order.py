"""Lattice validation, characters, filters/ideals, and compactness."""

import itertools

import pytest
from hypothesis import given, strategies as st

from modalstone import jsonio
from modalstone.enumerate import all_distributive_lattices
from modalstone.order import (
    DIRECTED_SCAN_LIMIT,
    MissingMeetOrJoin,
    NotAPartialOrder,
    NotDistributive,
    NotPrincipal,
    StructureError,
    UnknownElement,
    all_ideals,
    as_principal_filter,
    as_principal_ideal,
    bits,
    characters,
    compacts,
    is_filter,
    is_scott_open,
    validate_lattice,
)


def chain(*names):
    return validate_lattice(names, list(zip(names, names[1:])))


@pytest.fixture(scope="module")
def b2():
    return validate_lattice(["a", "b", "c", "d"],
                            [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])


# -- validation -----------------------------------------------------------

def test_generating_pairs_are_closed():
    """Only covering pairs are supplied; a <= c must come out of closure."""
    lat = chain("a", "b", "c")
    assert lat.leq("a", "c")
    assert lat.leq("a", "a")
    assert not lat.leq("c", "a")


def test_chain_meet_join():
    lat = chain("a", "b", "c")
    assert lat.meet("b", "c") == "b"
    assert lat.join("a", "b") == "b"
    assert lat.bottom == "a" and lat.top == "c"


def test_diamond_meet_join(b2):
    assert b2.meet("b", "c") == "a"
    assert b2.join("b", "c") == "d"
    assert b2.big_join(["a", "b"]) == "b"
    assert b2.big_meet([]) == "d"


def test_m3_fixture_is_rejected():
    _, doc = jsonio.fixture_doc("m3.lattice.json")
    with pytest.raises(NotDistributive):
        validate_lattice(doc["elements"], [tuple(p) for p in doc["leq"]])


def test_cycle_is_rejected():
    with pytest.raises(NotAPartialOrder):
        validate_lattice(["a", "b"], [("a", "b"), ("b", "a")])


def test_missing_bound_is_rejected():
    # two maximal elements: no top, and b, c have no join
    with pytest.raises(MissingMeetOrJoin):
        validate_lattice(["a", "b", "c"], [("a", "b"), ("a", "c")])


def test_duplicate_and_unknown_elements():
    with pytest.raises(StructureError):
        validate_lattice(["a", "a"], [])
    with pytest.raises(UnknownElement):
        validate_lattice(["a"], [("a", "z")])


def test_single_element_lattice():
    lat = validate_lattice(["only"], [])
    assert lat.top == lat.bottom == "only"
    assert characters(lat) == []


# -- characters -----------------------------------------------------------

def test_chain_characters():
    lat = chain("a", "b", "c")
    chars = characters(lat)
    assert len(chars) == 2
    truth = sorted(tuple(p.value(x) for x in lat.names) for p in chars)
    assert truth == [(0, 0, 1), (0, 1, 1)]


def test_diamond_characters(b2):
    chars = characters(b2)
    assert len(chars) == 2
    for p in chars:
        members = p.members()
        # value respects meets and joins
        for x in b2.names:
            for y in b2.names:
                assert p.value(b2.meet(x, y)) == min(p.value(x), p.value(y))
                assert p.value(b2.join(x, y)) == max(p.value(x), p.value(y))
        assert is_filter(b2, members)


def test_character_counts_match_primes():
    for lat in all_distributive_lattices(5):
        assert len(characters(lat)) == len(lat.primes())


# -- filters and ideals ---------------------------------------------------

def test_principal_filter_roundtrip(b2):
    f = as_principal_filter(b2, ["b", "d"])
    assert f.generator == "b"
    assert f.members() == frozenset({"b", "d"})
    assert f.contains("d") and not f.contains("c")


def test_filter_rejections(b2):
    assert not is_filter(b2, [])
    assert not is_filter(b2, ["b", "c", "d"])       # meet escapes
    with pytest.raises(NotPrincipal):
        as_principal_filter(b2, ["b", "c", "d"])
    with pytest.raises(StructureError):
        as_principal_filter(b2, ["b"])              # not upward closed


def test_principal_ideal(b2):
    i = as_principal_ideal(b2, ["a", "b"])
    assert i.generator == "b"
    with pytest.raises(NotPrincipal):
        as_principal_ideal(b2, ["a", "b", "c"])     # join escapes


def test_all_ideals_against_subset_oracle():
    """Independent route: scan every subset for nonempty join-closed
    down-sets and compare with the structural enumeration."""
    for lat in all_distributive_lattices(5):
        names = lat.names
        expected = set()
        for r in range(1, len(names) + 1):
            for sub in itertools.combinations(names, r):
                s = set(sub)
                down_closed = all(y in s for x in s for y in names
                                  if lat.leq(y, x))
                join_closed = all(lat.join(x, y) in s for x in s for y in s)
                if down_closed and join_closed:
                    expected.add(frozenset(s))
        got = {ideal.members() for ideal in all_ideals(lat)}
        assert got == expected
        assert len(all_ideals(lat)) == lat.n


# -- compactness ----------------------------------------------------------

def test_every_element_compact():
    for lat in all_distributive_lattices(4):
        assert compacts(lat) == frozenset(lat.names)


def test_scott_open_is_upset(b2):
    assert is_scott_open(b2, ["d"])
    assert is_scott_open(b2, ["b", "d"])
    assert not is_scott_open(b2, ["a"])             # not upward closed
    assert is_scott_open(b2, [])


def test_scan_limit_is_documented_cutoff():
    assert DIRECTED_SCAN_LIMIT == 12


def test_bits_iterates_set_positions():
    assert list(bits(0b10110)) == [1, 2, 4]
    assert list(bits(0)) == []


# -- algebraic laws over the enumerated universe --------------------------

_LATTICES = all_distributive_lattices(5)


@given(st.data())
def test_lattice_laws(data):
    lat = data.draw(st.sampled_from(_LATTICES))
    if lat.n < 2:
        return
    a = data.draw(st.sampled_from(lat.names))
    b = data.draw(st.sampled_from(lat.names))
    c = data.draw(st.sampled_from(lat.names))
    assert lat.meet(a, b) == lat.meet(b, a)
    assert lat.join(a, lat.join(b, c)) == lat.join(lat.join(a, b), c)
    assert lat.meet(a, lat.join(a, b)) == a
    assert lat.join(a, lat.meet(a, b)) == a
    assert lat.meet(a, lat.join(b, c)) == lat.join(lat.meet(a, b), lat.meet(a, c))
    assert lat.leq(a, b) == (lat.meet(a, b) == a)
