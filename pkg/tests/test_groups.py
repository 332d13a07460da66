import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from isoplab import (
    CyclicGroup,
    DihedralGroup,
    FreeGroup,
    HeisenbergGroup,
    ParseError,
    SymmetricGroup,
    ZGroup,
    parse_group,
)
from oracle_helpers import unitriangular_matmul

ALL_SPECS = [
    "z", "zd:2", "zd:3", "cyclic:2", "cyclic:12", "dihedral:3", "dihedral:6",
    "free:1", "free:2", "heisenberg", "heisenberg:2", "heisenberg:3",
    "symmetric:3", "symmetric:4",
]


def elements_strategy(group):
    if isinstance(group, ZGroup):
        return st.tuples(*[st.integers(-6, 6)] * group.rank)
    if isinstance(group, CyclicGroup):
        return st.integers(0, group.n - 1)
    if isinstance(group, DihedralGroup):
        return st.tuples(st.integers(0, group.n - 1), st.integers(0, 1))
    if isinstance(group, FreeGroup):
        letters = [i for i in range(1, group.rank + 1)] + [-i for i in range(1, group.rank + 1)]

        def reduce(raw):
            word = ()
            for x in raw:
                word = group.mul(word, (x,))
            return word

        return st.lists(st.sampled_from(letters), max_size=6).map(reduce)
    if isinstance(group, HeisenbergGroup):
        hi = group.modulus - 1 if group.modulus else 6
        lo = 0 if group.modulus else -6
        return st.tuples(st.integers(lo, hi), st.integers(lo, hi), st.integers(lo, hi))
    if isinstance(group, SymmetricGroup):
        return st.permutations(range(1, group.n + 1)).map(tuple)
    raise AssertionError(group)


@pytest.mark.parametrize("spec", ALL_SPECS)
def test_group_axioms(spec):
    group = parse_group(spec)
    strategy = elements_strategy(group)

    @settings(max_examples=60, deadline=None)
    @given(strategy, strategy, strategy)
    def check(a, b, c):
        e = group.identity()
        assert group.mul(group.mul(a, b), c) == group.mul(a, group.mul(b, c))
        assert group.mul(a, e) == a
        assert group.mul(e, a) == a
        assert group.mul(a, group.inv(a)) == e
        assert group.mul(group.inv(a), a) == e
        group.validate(group.mul(a, b))  # products stay canonical

    check()


@pytest.mark.parametrize("spec", ALL_SPECS)
def test_format_parse_round_trip(spec):
    group = parse_group(spec)
    strategy = elements_strategy(group)

    @settings(max_examples=40, deadline=None)
    @given(strategy)
    def check(a):
        assert group.parse(group.format(a)) == a

    check()


@pytest.mark.parametrize("spec", ALL_SPECS)
def test_generating_set_invariants(spec):
    group = parse_group(spec)
    gs = group.generating_set
    assert len(gs.elements) > 0
    assert group.identity() not in gs.elements
    assert len(set(gs.elements)) == len(gs.elements)
    for i, s in enumerate(gs.elements):
        assert gs.elements[gs.inverse_pairing[i]] == group.inv(s)


def test_group_orders():
    assert parse_group("cyclic:12").order() == 12
    assert parse_group("dihedral:6").order() == 12
    assert parse_group("symmetric:4").order() == 24
    assert parse_group("heisenberg:3").order() == 27
    assert parse_group("z").order() is None
    assert parse_group("zd:3").order() is None
    assert parse_group("free:2").order() is None
    assert parse_group("heisenberg").order() is None


def test_generating_set_sizes():
    assert len(parse_group("z").generating_set) == 2
    assert len(parse_group("zd:3").generating_set) == 6
    assert len(parse_group("cyclic:2").generating_set) == 1  # involution counted once
    assert len(parse_group("cyclic:12").generating_set) == 2
    assert len(parse_group("dihedral:6").generating_set) == 3
    assert len(parse_group("free:2").generating_set) == 4
    assert len(parse_group("heisenberg").generating_set) == 4
    assert len(parse_group("heisenberg:2").generating_set) == 2  # X, Y self-inverse mod 2
    assert len(parse_group("symmetric:4").generating_set) == 3


def test_identity_examples():
    assert parse_group("zd:2").identity() == (0, 0)
    assert parse_group("free:2").identity() == ()
    assert parse_group("dihedral:5").identity() == (0, 0)


def test_multiply_examples():
    z = parse_group("z")
    assert z.mul((3,), (-5,)) == (-2,)
    f2 = parse_group("free:2")
    assert f2.mul(f2.parse("ab"), f2.parse("Ba")) == f2.parse("aa")
    h = parse_group("heisenberg")
    assert h.mul((1, 0, 0), (0, 1, 0)) == (1, 1, 1)


@settings(max_examples=100, deadline=None)
@given(
    st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)),
    st.tuples(st.integers(-5, 5), st.integers(-5, 5), st.integers(-5, 5)),
)
def test_heisenberg_matches_matrix_multiplication(p, q):
    h = HeisenbergGroup(None)
    assert h.mul(p, q) == unitriangular_matmul(p, q)


def test_inverse_examples():
    z2 = parse_group("zd:2")
    assert z2.inv((2, -1)) == (-2, 1)
    f2 = parse_group("free:2")
    assert f2.inv(f2.parse("abA")) == f2.parse("aBA")
    d6 = parse_group("dihedral:6")
    assert d6.inv((2, 1)) == (2, 1)
    assert d6.mul((2, 1), (2, 1)) == d6.identity()


def test_parse_examples():
    z2 = parse_group("zd:2")
    assert z2.parse("(1,-2)") == (1, -2)
    f2 = parse_group("free:2")
    assert f2.parse("aBa") == (1, -2, 1)
    assert f2.parse("e") == ()
    assert f2.parse("aA") == ()  # reduced on input
    s3 = parse_group("symmetric:3")
    assert s3.parse("[2,1,3]") == (2, 1, 3)


def test_parse_errors():
    with pytest.raises(ParseError):
        parse_group("cyclic:1")
    with pytest.raises(ParseError):
        parse_group("dihedral:2")
    with pytest.raises(ParseError):
        parse_group("nonsense:4")
    with pytest.raises(ParseError):
        parse_group("cyclic:12").parse("12")  # out of range
    with pytest.raises(ParseError):
        parse_group("symmetric:3").parse("[1,1,2]")  # not a permutation
    with pytest.raises(ParseError):
        parse_group("free:2").parse("ac")  # letter above rank
    with pytest.raises(ParseError):
        parse_group("zd:2").parse("(1,2,3)")


def test_canonical_order_is_length_then_lexicographic():
    f2 = parse_group("free:2")
    words = [f2.parse(w) for w in ("e", "a", "b", "A", "aa", "ab")]
    ordered = sorted(words, key=f2.sort_key)
    # identity (length 0) first, then length-1 words by signed letter value
    assert [f2.format(w) for w in ordered] == ["e", "A", "a", "b", "aa", "ab"]


def test_modular_heisenberg_wraps():
    h2 = parse_group("heisenberg:2")
    x = (1, 0, 0)
    assert h2.mul(x, x) == (0, 0, 0)  # involution mod 2
    h3 = parse_group("heisenberg:3")
    assert h3.mul((2, 0, 0), (2, 0, 0)) == (1, 0, 0)
    for e in [(0, 0, 0), (2, 2, 2), (1, 2, 0)]:
        h3.validate(e)
        assert h3.mul(e, h3.inv(e)) == (0, 0, 0)
