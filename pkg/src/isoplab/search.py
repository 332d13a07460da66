"""Set generation, exhaustive isoperimetric profiles, and sharpness scans.

Random sets come from the documented SplitMix64 stream, so a descriptor
plus seed reproduces the identical set on any machine.  Exhaustive
enumeration encodes subsets of a (small) finite group as bitmasks over the
canonically sorted element list and walks them in binary-reflected
Gray-code order, updating the outer-boundary size incrementally on each
single-bit flip.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, replace
from fractions import Fraction
from statistics import median
from typing import Iterable, Iterator, Optional, Sequence

from .errors import BudgetExceeded, ParseError, PreconditionViolated
from .groups import Element, Group, ZGroup
from .isoperimetry import FiniteSubset, VerificationReport, verify_theorem
from .metric import DEFAULT_BALL_CAP, ball, enumerate_group, phi, _grow
from .rng import SplitMix64

DEFAULT_SUBSET_CAP = 24

_RANDOM_RE = re.compile(r"random:([0-9]+):([0-9]+)(?::(connected|ball=[0-9]+))?")
_RANGE_RE = re.compile(r"([0-9]+)(?:\.\.([0-9]+))?")


def split_top_level(text: str, sep: str = ",") -> list[str]:
    """Split on sep outside (...) and [...] nesting."""
    parts = []
    depth = 0
    current = []
    for ch in text:
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
            if depth < 0:
                raise ParseError(f"unbalanced brackets in {text!r}")
        if ch == sep and depth == 0:
            parts.append("".join(current))
            current = []
        else:
            current.append(ch)
    if depth != 0:
        raise ParseError(f"unbalanced brackets in {text!r}")
    parts.append("".join(current))
    return parts


@dataclass(frozen=True)
class SetDescriptor:
    """How to build a finite subset; identical descriptor + seed gives the
    identical set."""

    text: str
    kind: str  # ball | random | explicit | exhaustive
    radius: Optional[int] = None
    size: Optional[int] = None
    seed: Optional[int] = None
    mode: Optional[str] = None  # uniform_in_ball | bfs_connected
    mode_radius: Optional[int] = None
    element_texts: tuple[str, ...] = ()
    size_lo: Optional[int] = None
    size_hi: Optional[int] = None

    def reseeded(self, seed: int, label: str) -> "SetDescriptor":
        return replace(self, seed=seed, text=f"{self.text}#{label}")


def parse_set_descriptor(text: str) -> SetDescriptor:
    t = text.strip()
    if t.startswith("ball:"):
        body = t[len("ball:"):]
        if not body.isdigit():
            raise ParseError(f"bad ball descriptor {text!r}")
        return SetDescriptor(text=t, kind="ball", radius=int(body))
    if t.startswith("random:"):
        m = _RANDOM_RE.fullmatch(t)
        if m is None:
            raise ParseError(
                f"bad random descriptor {text!r} "
                "(expected random:<size>:<seed>[:connected|:ball=<R>])"
            )
        size, seed = int(m.group(1)), int(m.group(2))
        if size < 1:
            raise ParseError("random size must be >= 1")
        suffix = m.group(3)
        if suffix is None or suffix == "connected":
            # connected growth is the default sampling mode
            return SetDescriptor(text=t, kind="random", size=size, seed=seed, mode="bfs_connected")
        return SetDescriptor(
            text=t,
            kind="random",
            size=size,
            seed=seed,
            mode="uniform_in_ball",
            mode_radius=int(suffix[len("ball="):]),
        )
    if t.startswith("explicit:"):
        body = t[len("explicit:"):]
        parts = [p.strip() for p in split_top_level(body) if p.strip()]
        if not parts:
            raise ParseError(f"empty explicit descriptor {text!r}")
        return SetDescriptor(text=t, kind="explicit", element_texts=tuple(parts))
    if t.startswith("exhaustive:"):
        body = t[len("exhaustive:"):]
        m = _RANGE_RE.fullmatch(body)
        if m is None:
            raise ParseError(f"bad exhaustive descriptor {text!r}")
        lo = int(m.group(1))
        hi = int(m.group(2)) if m.group(2) is not None else lo
        if lo < 1 or hi < lo:
            raise ParseError(f"bad size range in {text!r}")
        return SetDescriptor(text=t, kind="exhaustive", size_lo=lo, size_hi=hi)
    raise ParseError(f"unrecognized set descriptor {text!r}")


def parse_size_range(text: str) -> tuple[int, int]:
    m = _RANGE_RE.fullmatch(text.strip())
    if m is None:
        raise ParseError(f"bad size range {text!r} (expected lo..hi)")
    lo = int(m.group(1))
    hi = int(m.group(2)) if m.group(2) is not None else lo
    if lo < 1 or hi < lo:
        raise ParseError(f"bad size range {text!r}")
    return lo, hi


def default_uniform_radius(group: Group, size: int, ball_cap: int) -> int:
    """Smallest R with gamma(R) >= 2*size (the whole group once saturated)."""
    layers, _, depth, ok, saturated = _grow(
        group, until_count=2 * size - 1, ball_cap=ball_cap
    )
    if not ok and saturated:
        if len(depth) < size:
            raise PreconditionViolated(
                f"random size {size} exceeds group size {len(depth)}"
            )
        return len(layers) - 1
    return len(layers) - 1


def _sample_uniform_in_ball(group: Group, desc: SetDescriptor, *, ball_cap: int) -> FiniteSubset:
    radius = desc.mode_radius
    if radius is None:
        radius = default_uniform_radius(group, desc.size, ball_cap)
    table = ball(group, radius, ball_cap=ball_cap)
    pool = list(table.elements())
    if desc.size > len(pool):
        raise PreconditionViolated(
            f"random size {desc.size} exceeds ball size {len(pool)} at radius {radius}"
        )
    rng = SplitMix64(desc.seed)
    chosen: set = set()
    while len(chosen) < desc.size:
        chosen.add(pool[rng.below(len(pool))])
    return FiniteSubset.from_iterable(group, chosen, provenance=desc.text)


def _sample_connected(group: Group, desc: SetDescriptor, *, ball_cap: int) -> FiniteSubset:
    mul = group.mul
    gens = group.generating_set.elements
    rng = SplitMix64(desc.seed)
    members = {group.identity()}
    frontier = sorted(
        {mul(s, group.identity()) for s in gens} - members, key=group.sort_key
    )
    while len(members) < desc.size:
        if not frontier:
            raise PreconditionViolated(
                f"random size {desc.size} exceeds group size {len(members)}"
            )
        pick = frontier[rng.below(len(frontier))]
        members.add(pick)
        grown = {mul(s, pick) for s in gens}
        frontier = sorted(
            (set(frontier) | grown) - members, key=group.sort_key
        )
        if len(members) + len(frontier) > ball_cap:
            raise BudgetExceeded(
                f"{group.name}: connected sample outgrew cap {ball_cap}",
                size=len(members) + len(frontier),
                cap=ball_cap,
            )
    return FiniteSubset.from_iterable(group, members, provenance=desc.text)


def generate_sets(
    group: Group,
    desc: SetDescriptor,
    *,
    ball_cap: int = DEFAULT_BALL_CAP,
    subset_cap: int = DEFAULT_SUBSET_CAP,
) -> Iterator[FiniteSubset]:
    """Stream the subsets a descriptor denotes (a single one except for
    exhaustive descriptors)."""
    if desc.kind == "ball":
        table = ball(group, desc.radius, ball_cap=ball_cap)
        yield FiniteSubset.from_iterable(group, table.elements(), provenance=desc.text)
        return
    if desc.kind == "explicit":
        elems = [group.parse(t) for t in desc.element_texts]
        yield FiniteSubset.from_iterable(group, elems, provenance=desc.text)
        return
    if desc.kind == "random":
        if desc.seed is None:
            raise ParseError("random descriptor needs a seed")
        if desc.mode == "uniform_in_ball":
            yield _sample_uniform_in_ball(group, desc, ball_cap=ball_cap)
        else:
            yield _sample_connected(group, desc, ball_cap=ball_cap)
        return
    if desc.kind == "exhaustive":
        ground = _ground_set(group, subset_cap=subset_cap, ball_cap=ball_cap)
        for mask, size, _ in gray_subset_steps(group, ground=ground, ball_cap=ball_cap):
            if desc.size_lo <= size <= desc.size_hi:
                elems = [ground[i] for i in range(len(ground)) if mask >> i & 1]
                yield FiniteSubset.from_iterable(
                    group, elems, provenance=f"{desc.text}:mask={mask}"
                )
        return
    raise ParseError(f"unknown descriptor kind {desc.kind!r}")


def generate_set(
    group: Group,
    desc: SetDescriptor,
    *,
    ball_cap: int = DEFAULT_BALL_CAP,
    subset_cap: int = DEFAULT_SUBSET_CAP,
) -> FiniteSubset:
    if desc.kind == "exhaustive":
        raise ParseError("exhaustive descriptors denote a stream; use generate_sets")
    return next(generate_sets(group, desc, ball_cap=ball_cap, subset_cap=subset_cap))


def _ground_set(group: Group, *, subset_cap: int, ball_cap: int) -> list[Element]:
    order = group.order()
    if order is None:
        raise PreconditionViolated(f"{group.name} is infinite; exhaustive search needs a finite group")
    if order > subset_cap:
        raise BudgetExceeded(
            f"{group.name} has {order} elements, above the exhaustive cap {subset_cap}",
            size=order,
            cap=subset_cap,
        )
    return enumerate_group(group, ball_cap=ball_cap)


def gray_subset_steps(
    group: Group,
    *,
    ground: Optional[list[Element]] = None,
    subset_cap: int = DEFAULT_SUBSET_CAP,
    ball_cap: int = DEFAULT_BALL_CAP,
) -> Iterator[tuple[int, int, int]]:
    """Walk all subsets of a finite group in Gray-code order.

    Yields (mask, size, outer_boundary_size) for every visited subset,
    starting from the empty set.  Bit i of the mask refers to position i in
    the canonically sorted element list; each step flips exactly one bit
    and updates the boundary size incrementally via per-element counts of
    covering neighbors.
    """
    if ground is None:
        ground = _ground_set(group, subset_cap=subset_cap, ball_cap=ball_cap)
    n = len(ground)
    index = {e: i for i, e in enumerate(ground)}
    gens = group.generating_set.elements
    mul = group.mul
    neighbors = [[index[mul(s, e)] for s in gens] for e in ground]

    covered = [0] * n  # covered[z] = number of members y of D with z = s*y
    in_d = [False] * n
    size = 0
    boundary = 0
    yield (0, 0, 0)
    for i in range(1, 1 << n):
        bit = ((i ^ (i >> 1)) ^ ((i - 1) ^ ((i - 1) >> 1))).bit_length() - 1
        if in_d[bit]:
            in_d[bit] = False
            size -= 1
            if covered[bit] > 0:
                boundary += 1
            for z in neighbors[bit]:
                covered[z] -= 1
                if covered[z] == 0 and not in_d[z]:
                    boundary -= 1
        else:
            in_d[bit] = True
            size += 1
            if covered[bit] > 0:
                boundary -= 1
            for z in neighbors[bit]:
                if covered[z] == 0 and not in_d[z]:
                    boundary += 1
                covered[z] += 1
        yield (i ^ (i >> 1), size, boundary)


@dataclass(frozen=True, eq=False)
class ProfileRow:
    """Minimum outer-boundary size over all subsets of one cardinality."""

    size: int
    min_boundary: int
    witness: FiniteSubset
    bound: Fraction  # size / (2 * phi(2 * size)): strict lower bound
    gap: Fraction

    def to_json_dict(self) -> dict:
        return {
            "n": self.size,
            "min_boundary": self.min_boundary,
            "bound_num": self.bound.numerator,
            "bound_den": self.bound.denominator,
            "witness": "{" + ";".join(
                self.witness.group.format(e) for e in self.witness.elements
            ) + "}",
        }


def _mask_positions(mask: int) -> tuple[int, ...]:
    positions = []
    i = 0
    while mask:
        if mask & 1:
            positions.append(i)
        mask >>= 1
        i += 1
    return tuple(positions)


def exhaustive_profile(
    group: Group,
    sizes: Iterable[int],
    *,
    subset_cap: int = DEFAULT_SUBSET_CAP,
    ball_cap: int = DEFAULT_BALL_CAP,
) -> list[ProfileRow]:
    """Minimum boundary over ALL subsets of each requested size, with a
    canonically least witness."""
    wanted = sorted(set(sizes))
    if not wanted or wanted[0] < 1:
        raise PreconditionViolated("profile sizes must be >= 1")
    order = group.order()
    if order is None:
        raise PreconditionViolated(f"{group.name} is infinite; profile needs a finite group")
    if 2 * wanted[-1] >= order:
        raise PreconditionViolated(
            f"profile sizes must satisfy n < Card(group)/2 = {order}/2, got n = {wanted[-1]}"
        )
    ground = _ground_set(group, subset_cap=subset_cap, ball_cap=ball_cap)
    wanted_set = set(wanted)
    best: dict[int, tuple[int, int]] = {}
    for mask, size, boundary in gray_subset_steps(group, ground=ground, ball_cap=ball_cap):
        if size not in wanted_set:
            continue
        cur = best.get(size)
        if cur is None or boundary < cur[0] or (
            boundary == cur[0] and _mask_positions(mask) < _mask_positions(cur[1])
        ):
            best[size] = (boundary, mask)
    rows = []
    for n in wanted:
        boundary, mask = best[n]
        witness = FiniteSubset.from_iterable(
            group,
            [ground[i] for i in _mask_positions(mask)],
            provenance=f"profile:{group.name}:n={n}",
        )
        bound = Fraction(n, 2 * phi(group, 2 * n, ball_cap=ball_cap))
        rows.append(
            ProfileRow(
                size=n,
                min_boundary=boundary,
                witness=witness,
                bound=bound,
                gap=Fraction(boundary) - bound,
            )
        )
    return rows


@dataclass(frozen=True, eq=False)
class SharpnessSummary:
    """Per-set sharpness factors (lhs/rhs of the strict bound) and their
    minimum and median, all exact."""

    entries: tuple[tuple[str, Fraction], ...]
    reports: tuple[VerificationReport, ...]

    @property
    def min_factor(self) -> Fraction:
        return min(f for _, f in self.entries)

    @property
    def median_factor(self) -> Fraction:
        return median(f for _, f in self.entries)

    def to_json_dict(self) -> dict:
        mn, md = self.min_factor, self.median_factor
        return {
            "trials": [
                {"set": name, "factor_num": f.numerator, "factor_den": f.denominator}
                for name, f in self.entries
            ],
            "min_num": mn.numerator,
            "min_den": mn.denominator,
            "median_num": md.numerator,
            "median_den": md.denominator,
        }


def expand_trials(
    group: Group,
    desc: SetDescriptor,
    trials: int = 1,
    *,
    ball_cap: int = DEFAULT_BALL_CAP,
    subset_cap: int = DEFAULT_SUBSET_CAP,
) -> Iterator[FiniteSubset]:
    """Expand a descriptor into the subsets of a run.

    Random descriptors run `trials` independent draws, trial t seeded with
    child t of the descriptor seed; deterministic descriptors ignore the
    trial count (exhaustive ones stream every subset once).
    """
    if desc.kind == "random" and trials > 1:
        rng = SplitMix64(desc.seed)
        for t in range(trials):
            child = desc.reseeded(rng.child_seed(t), f"trial={t}")
            yield generate_set(group, child, ball_cap=ball_cap, subset_cap=subset_cap)
        return
    yield from generate_sets(group, desc, ball_cap=ball_cap, subset_cap=subset_cap)


def sharpness_of_subsets(
    group: Group,
    subsets: Iterable[FiniteSubset],
    *,
    ball_cap: int = DEFAULT_BALL_CAP,
) -> SharpnessSummary:
    """Exact sharpness factor of the strict bound on each given set."""
    entries = []
    reports = []
    for subset in subsets:
        report = verify_theorem(group, subset, ball_cap=ball_cap)
        reports.append(report)
        entries.append((subset.provenance, report.sharpness))
    if not entries:
        raise PreconditionViolated("sharpness scan needs at least one set")
    return SharpnessSummary(entries=tuple(entries), reports=tuple(reports))


def sharpness_scan(
    group: Group,
    descriptors: Sequence[SetDescriptor],
    trials: int = 1,
    *,
    ball_cap: int = DEFAULT_BALL_CAP,
    subset_cap: int = DEFAULT_SUBSET_CAP,
) -> SharpnessSummary:
    """Sharpness factors over the sets the descriptors denote."""
    subsets = []
    for desc in descriptors:
        subsets.extend(
            expand_trials(group, desc, trials, ball_cap=ball_cap, subset_cap=subset_cap)
        )
    return sharpness_of_subsets(group, subsets, ball_cap=ball_cap)


def interval_subsets(group: Group, n_max: int) -> list[FiniteSubset]:
    """The intervals {0, ..., n-1} in the rank-1 integer lattice."""
    if not (isinstance(group, ZGroup) and group.rank == 1):
        raise PreconditionViolated("interval family is defined on the group z only")
    if n_max < 1:
        raise PreconditionViolated("n_max must be >= 1")
    return [
        FiniteSubset.from_iterable(
            group, [(i,) for i in range(n)], provenance=f"interval:{n}"
        )
        for n in range(1, n_max + 1)
    ]
