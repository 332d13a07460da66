from fractions import Fraction
from itertools import combinations
from math import comb

import pytest

from isoplab import (
    BudgetExceeded,
    FiniteSubset,
    ParseError,
    PreconditionViolated,
    ball,
    enumerate_group,
    exhaustive_profile,
    expand_trials,
    generate_set,
    generate_sets,
    gray_subset_steps,
    interval_subsets,
    parse_group,
    parse_set_descriptor,
    parse_size_range,
    phi,
    sharpness_of_subsets,
    sharpness_scan,
)
from oracle_helpers import naive_outer_boundary

Z = parse_group("z")
C8 = parse_group("cyclic:8")
F2 = parse_group("free:2")


# ----------------------------------------------------------------- descriptors

def test_parse_set_descriptor_forms():
    d = parse_set_descriptor("ball:3")
    assert d.kind == "ball" and d.radius == 3
    d = parse_set_descriptor("random:6:42")
    assert d.kind == "random" and d.size == 6 and d.seed == 42 and d.mode == "bfs_connected"
    d = parse_set_descriptor("random:6:42:ball=3")
    assert d.mode == "uniform_in_ball" and d.mode_radius == 3
    d = parse_set_descriptor("random:6:42:connected")
    assert d.mode == "bfs_connected"
    d = parse_set_descriptor("explicit:(1,0),(0,1)")
    assert d.kind == "explicit" and d.element_texts == ("(1,0)", "(0,1)")
    d = parse_set_descriptor("exhaustive:1..3")
    assert d.kind == "exhaustive" and (d.size_lo, d.size_hi) == (1, 3)


def test_parse_set_descriptor_errors():
    for bad in ("ball:x", "random:6", "random:0:1", "explicit:", "exhaustive:3..1", "nonsense"):
        with pytest.raises(ParseError):
            parse_set_descriptor(bad)


def test_parse_size_range():
    assert parse_size_range("1..5") == (1, 5)
    assert parse_size_range("4") == (4, 4)
    with pytest.raises(ParseError):
        parse_size_range("0..2")


# ------------------------------------------------------------------ generation

def test_generate_ball_set():
    subset = generate_set(Z, parse_set_descriptor("ball:2"))
    assert subset.elements == ((-2,), (-1,), (0,), (1,), (2,))


def test_generate_explicit_set():
    z2 = parse_group("zd:2")
    subset = generate_set(z2, parse_set_descriptor("explicit:(0,0),(1,0),(0,1)"))
    assert set(subset.elements) == {(0, 0), (1, 0), (0, 1)}


def test_exhaustive_stream_counts():
    subsets = list(generate_sets(C8, parse_set_descriptor("exhaustive:1..3")))
    assert len(subsets) == comb(8, 1) + comb(8, 2) + comb(8, 3) == 92
    assert all(1 <= len(s) <= 3 for s in subsets)
    # stream is deterministic
    again = list(generate_sets(C8, parse_set_descriptor("exhaustive:1..3")))
    assert [s.elements for s in again] == [s.elements for s in subsets]
    # and hits every subset exactly once
    seen = {s.elements for s in subsets}
    assert len(seen) == 92


def test_exhaustive_needs_small_finite_group():
    with pytest.raises(PreconditionViolated):
        next(generate_sets(Z, parse_set_descriptor("exhaustive:1..2")))
    d13 = parse_group("dihedral:13")  # 26 elements, above the default cap of 24
    with pytest.raises(BudgetExceeded):
        next(generate_sets(d13, parse_set_descriptor("exhaustive:1..2")))
    s4 = parse_group("symmetric:4")
    with pytest.raises(BudgetExceeded):
        next(generate_sets(s4, parse_set_descriptor("exhaustive:1..2"), subset_cap=12))
    # the 24-element group sits exactly at the default cap: enumeration is
    # admitted (walking all 2^24 masks is exercised on smaller groups above)
    from isoplab.search import _ground_set
    assert len(_ground_set(s4, subset_cap=24, ball_cap=5_000_000)) == 24
    d8 = parse_group("dihedral:8")  # 16 elements: a full 65536-mask walk
    stream = generate_sets(d8, parse_set_descriptor("exhaustive:1..1"), subset_cap=16)
    assert len(list(stream)) == 16


def test_random_uniform_in_ball_is_deterministic_and_in_ball():
    desc = parse_set_descriptor("random:6:42:ball=3")
    first = generate_set(F2, desc)
    second = generate_set(F2, desc)
    assert first.elements == second.elements
    assert len(first) == 6
    inside = set(ball(F2, 3).elements())
    assert set(first.elements) <= inside


def test_random_connected_is_connected_and_deterministic():
    desc = parse_set_descriptor("random:9:5")
    subset = generate_set(F2, desc)
    assert subset.elements == generate_set(F2, desc).elements
    assert len(subset) == 9
    # connectivity: walk from the identity inside the set
    members = set(subset.elements)
    assert F2.identity() in members
    frontier = [F2.identity()]
    reached = {F2.identity()}
    while frontier:
        cur = frontier.pop()
        for s in F2.generating_set.elements:
            nxt = F2.mul(s, cur)
            if nxt in members and nxt not in reached:
                reached.add(nxt)
                frontier.append(nxt)
    assert reached == members


def test_random_size_exceeding_group_is_an_error():
    with pytest.raises(PreconditionViolated):
        generate_set(C8, parse_set_descriptor("random:9:1"))
    with pytest.raises(PreconditionViolated):
        generate_set(C8, parse_set_descriptor("random:9:1:ball=10"))


def test_expand_trials_reseeds_random_descriptors():
    desc = parse_set_descriptor("random:5:77")
    subsets = list(expand_trials(Z, desc, 4))
    assert len(subsets) == 4
    assert len({s.elements for s in subsets}) > 1  # trials differ
    again = list(expand_trials(Z, desc, 4))
    assert [s.elements for s in again] == [s.elements for s in subsets]
    # non-random descriptors ignore the trial count
    assert len(list(expand_trials(Z, parse_set_descriptor("ball:2"), 4))) == 1


# ------------------------------------------------------------------- gray scan

@pytest.mark.parametrize("spec", ["cyclic:8", "dihedral:4"])
def test_gray_scan_matches_direct_recomputation(spec):
    group = parse_group(spec)
    ground = enumerate_group(group)
    for mask, size, boundary in gray_subset_steps(group):
        members = {ground[i] for i in range(len(ground)) if mask >> i & 1}
        assert size == len(members)
        assert boundary == len(naive_outer_boundary(group, members))


# --------------------------------------------------------------------- profile

def test_profile_cyclic8_frozen_values():
    rows = exhaustive_profile(C8, range(1, 4))
    assert [(row.size, row.min_boundary) for row in rows] == [(1, 2), (2, 2), (3, 2)]
    # canonically least witnesses are the intervals at 0
    assert rows[0].witness.elements == (0,)
    assert rows[1].witness.elements == (0, 1)
    assert rows[2].witness.elements == (0, 1, 2)
    for row in rows:
        assert Fraction(row.min_boundary) > row.bound
        assert row.gap == Fraction(row.min_boundary) - row.bound


def test_profile_matches_brute_force_on_dihedral4():
    group = parse_group("dihedral:4")
    ground = enumerate_group(group)
    rows = exhaustive_profile(group, range(1, 4))
    for row in rows:
        best = None
        for combo in combinations(ground, row.size):
            boundary = len(naive_outer_boundary(group, set(combo)))
            key = (boundary, tuple(group.sort_key(e) for e in sorted(combo, key=group.sort_key)))
            if best is None or key < best[0]:
                best = (key, combo)
        assert row.min_boundary == best[0][0]
        assert set(row.witness.elements) == set(best[1])


def test_profile_minimum_respects_strict_bound():
    for spec in ("cyclic:8", "cyclic:12", "dihedral:4"):
        group = parse_group(spec)
        top = (group.order() - 1) // 2
        rows = exhaustive_profile(group, range(1, min(top, 5) + 1))
        for row in rows:
            assert Fraction(row.min_boundary, row.size) > Fraction(
                1, 2 * phi(group, 2 * row.size)
            )


def test_profile_singleton_minimum_is_generating_set_size():
    for spec in ("cyclic:8", "cyclic:12", "dihedral:4", "dihedral:6"):
        group = parse_group(spec)
        rows = exhaustive_profile(group, [1])
        assert rows[0].min_boundary == len(group.generating_set)


def test_profile_preconditions():
    with pytest.raises(PreconditionViolated):
        exhaustive_profile(C8, range(1, 5))  # 4 is not < 8/2
    with pytest.raises(PreconditionViolated):
        exhaustive_profile(Z, [1])


# ------------------------------------------------------------------- sharpness

def test_interval_sharpness_is_exactly_four():
    summary = sharpness_of_subsets(Z, interval_subsets(Z, 50))
    assert all(f == Fraction(4) for _, f in summary.entries)
    assert summary.min_factor == Fraction(4)
    assert summary.median_factor == Fraction(4)
    assert len(summary.entries) == 50


def test_sharpness_on_z2_balls_exceeds_one():
    z2 = parse_group("zd:2")
    balls = [
        generate_set(z2, parse_set_descriptor(f"ball:{r}")) for r in range(1, 6)
    ]
    summary = sharpness_of_subsets(z2, balls)
    assert all(f > 1 for _, f in summary.entries)
    assert all(r.verdict for r in summary.reports)


def test_sharpness_scan_over_descriptors():
    summary = sharpness_scan(Z, [parse_set_descriptor("random:5:9")], trials=5)
    assert len(summary.entries) == 5
    assert all(f > 1 for _, f in summary.entries)
    payload = summary.to_json_dict()
    assert payload["min_num"] / payload["min_den"] <= payload["median_num"] / payload["median_den"]


def test_interval_subsets_only_on_z():
    with pytest.raises(PreconditionViolated):
        interval_subsets(parse_group("zd:2"), 3)


# ------------------------------------------------------------------ provenance

def test_finite_subset_provenance_is_stable():
    a = FiniteSubset.from_iterable(Z, [(0,), (1,)])
    b = FiniteSubset.from_iterable(Z, [(1,), (0,)])
    assert a.provenance == b.provenance == "explicit:0,1"
    big = FiniteSubset.from_iterable(Z, [(i,) for i in range(40)])
    assert big.provenance.startswith("set:n=40:sha1=")
