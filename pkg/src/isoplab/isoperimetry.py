"""Boundaries, translation displacement, ball smoothing, and exact verifiers.

Every check in this module is exact: counts are integers, ratios are
`fractions.Fraction`, and verdicts are decided by integer or rational
comparison only.  Floating point never touches a verdict path, because the
headline inequality is strict and a rounding error could flip it.

Boundary conventions.  The word metric is right-invariant, so its unit
steps are left multiplications by generators:

    outer boundary        (S*D) \\ D   =  {a : dist(a, D) = 1}
    inner boundary, right {x in D : some x*s outside D}
    inner boundary, left  {x in D : some s*x outside D}

The right inner boundary is the one appearing in the classical volume
lower bound; the left one is the one that trivially dominates the outer
boundary.  boundary_comparison computes and reports both rather than
guessing which convention a consumer wants.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from typing import Iterable, Optional

from .errors import InternalContradiction, PreconditionViolated
from .groups import Element, Group
from .metric import DEFAULT_BALL_CAP, BallTable, ball, geodesic_word, minimal_d, phi, word_length

REPORT_KINDS = (
    "lemma31",
    "half_mass",
    "preimage_bound",
    "displacement_bound",
    "theorem",
    "csc",
    "boundary_cmp",
)


@dataclass(frozen=True, eq=False)
class FiniteSubset:
    """A finite set D of canonical elements, sorted and duplicate-free."""

    group: Group
    elements: tuple[Element, ...]
    provenance: str

    @classmethod
    def from_iterable(
        cls, group: Group, elems: Iterable[Element], provenance: Optional[str] = None
    ) -> "FiniteSubset":
        unique = sorted(set(elems), key=group.sort_key)
        for e in unique:
            group.validate(e)
        if provenance is None:
            formatted = [group.format(e) for e in unique]
            if len(formatted) <= 12:
                provenance = "explicit:" + ",".join(formatted)
            else:
                digest = hashlib.sha1(";".join(formatted).encode()).hexdigest()[:12]
                provenance = f"set:n={len(formatted)}:sha1={digest}"
        return cls(group=group, elements=tuple(unique), provenance=provenance)

    @cached_property
    def member_set(self) -> frozenset:
        return frozenset(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, e: Element) -> bool:
        return e in self.member_set


@dataclass(frozen=True, eq=False)
class VerificationReport:
    """Exact record of one check: both sides, the verdict, and enough extra
    integers to recompute the verdict from the report alone."""

    kind: str
    group: str
    set_descriptor: str
    lhs: Fraction
    rhs: Fraction
    verdict: bool
    strict: bool
    d: Optional[int] = None
    gamma0: Optional[str] = None
    extra: dict = field(default_factory=dict)

    @property
    def sharpness(self) -> Optional[Fraction]:
        if self.rhs == 0:
            return None
        return self.lhs / self.rhs

    def to_json_dict(self) -> dict:
        sharp = self.sharpness
        out = {
            "kind": self.kind,
            "group": self.group,
            "set_descriptor": self.set_descriptor,
            "lhs_num": self.lhs.numerator,
            "lhs_den": self.lhs.denominator,
            "rhs_num": self.rhs.numerator,
            "rhs_den": self.rhs.denominator,
            "verdict": "holds" if self.verdict else "fails",
            "strict": self.strict,
            "sharpness_num": None if sharp is None else sharp.numerator,
            "sharpness_den": None if sharp is None else sharp.denominator,
        }
        if self.d is not None:
            out["d"] = self.d
        if self.gamma0 is not None:
            out["gamma0"] = self.gamma0
        if self.extra:
            out["extra"] = dict(sorted(self.extra.items()))
        return out

    def to_json_line(self) -> str:
        return json.dumps(self.to_json_dict(), sort_keys=True, separators=(",", ":"))


@dataclass(frozen=True)
class TransportWitness:
    """A translation x in B(e, d) moving more than half of D out of itself."""

    d: int
    x: Element
    displacement: int
    threshold: Fraction


@dataclass(frozen=True)
class TransportEntry:
    """One moved point x with its origin in D and its boundary image."""

    moved: Element      # x in gD \ D
    origin: Element     # g^-1 * x, a point of D
    hit_index: int      # maximal n in 1..k with s_n...s_1*origin on the boundary
    image: Element      # f(x) = s_{hit_index}...s_1*origin


@dataclass(frozen=True, eq=False)
class TransportMapRecord:
    """The geodesic transport map f : gD \\ D -> outer boundary of D."""

    group: Group
    gamma0: Element
    word: tuple[int, ...]
    subset: FiniteSubset
    entries: tuple[TransportEntry, ...]
    preimage_counts: dict

    @property
    def length(self) -> int:
        return len(self.word)

    def max_preimage(self) -> int:
        return max(self.preimage_counts.values(), default=0)


def _require_non_empty(D: FiniteSubset) -> None:
    if not D.elements:
        raise PreconditionViolated("D must be non-empty")


def _require_admissible(group: Group, D: FiniteSubset) -> None:
    _require_non_empty(D)
    order = group.order()
    if order is not None and 2 * len(D) >= order:
        raise PreconditionViolated(
            f"need Card(D) < Card(group)/2: Card(D)={len(D)}, Card(group)={order}"
        )


def outer_boundary(group: Group, D: FiniteSubset) -> FiniteSubset:
    """(S*D) \\ D: the elements at distance exactly 1 from D."""
    _require_non_empty(D)
    mul = group.mul
    members = D.member_set
    out = set()
    for s in group.generating_set.elements:
        for x in D.elements:
            h = mul(s, x)
            if h not in members:
                out.add(h)
    return FiniteSubset.from_iterable(group, out, provenance=f"outer({D.provenance})")


def inner_boundary_right(group: Group, D: FiniteSubset) -> FiniteSubset:
    """{x in D : some x*s lies outside D}."""
    _require_non_empty(D)
    mul = group.mul
    members = D.member_set
    gens = group.generating_set.elements
    out = [x for x in D.elements if any(mul(x, s) not in members for s in gens)]
    return FiniteSubset.from_iterable(group, out, provenance=f"inner_r({D.provenance})")


def inner_boundary_left(group: Group, D: FiniteSubset) -> FiniteSubset:
    """{x in D : some s*x lies outside D}."""
    _require_non_empty(D)
    mul = group.mul
    members = D.member_set
    gens = group.generating_set.elements
    out = [x for x in D.elements if any(mul(s, x) not in members for s in gens)]
    return FiniteSubset.from_iterable(group, out, provenance=f"inner_l({D.provenance})")


def translate(group: Group, x: Element, D: FiniteSubset) -> FiniteSubset:
    """Left translate xD = {x*d : d in D}."""
    group.validate(x)
    mul = group.mul
    return FiniteSubset.from_iterable(
        group,
        (mul(x, d) for d in D.elements),
        provenance=f"{group.format(x)}*({D.provenance})",
    )


def displacement(group: Group, x: Element, D: FiniteSubset) -> int:
    """Card(xD \\ D): how much of D the left translation by x moves out."""
    mul = group.mul
    members = D.member_set
    return sum(1 for d in D.elements if mul(x, d) not in members)


class SmoothedDensity:
    """Ball-average of the indicator of D: value(y) = |D n B(y, d)| / |B(e, d)|.

    B(y, d) is enumerated as {x*y : x in B(e, d)} (right-invariance of the
    metric); the averaging kernel vanishes outside the ball, so restricting
    the defining sum to B(y, d) is an identity, not an approximation.
    """

    def __init__(
        self,
        group: Group,
        D: FiniteSubset,
        d: int,
        *,
        ball_cap: int = DEFAULT_BALL_CAP,
        table: Optional[BallTable] = None,
    ):
        if d < 0:
            raise ValueError("smoothing radius must be non-negative")
        self.group = group
        self.D = D
        self.d = d
        self.table = table if table is not None and table.radius == d else ball(group, d, ball_cap=ball_cap)
        self.ball_size = self.table.size
        self.values: dict = {}

    def value(self, y: Element) -> Fraction:
        if y not in self.values:
            mul = self.group.mul
            members = self.D.member_set
            count = sum(1 for x in self.table.elements() if mul(x, y) in members)
            self.values[y] = Fraction(count, self.ball_size)
        return self.values[y]


def smoothed_density(
    group: Group, D: FiniteSubset, d: int, y: Element, *, ball_cap: int = DEFAULT_BALL_CAP
) -> Fraction:
    _require_non_empty(D)
    group.validate(y)
    return SmoothedDensity(group, D, d, ball_cap=ball_cap).value(y)


def lemma31_check(
    group: Group, D: FiniteSubset, d: int, *, ball_cap: int = DEFAULT_BALL_CAP
) -> VerificationReport:
    """Exact three-way identity behind the smoothing argument.

    Computes, by three separate routes,

        A = |B(e,d)| * sum over y in D of (1 - value of the smoothed density at y)
        B = sum over y in D of |B(y,d) \\ D|
        C = sum over x in B(e,d) of |xD \\ D|

    and reports whether A = B = C as integers.
    """
    _require_non_empty(D)
    if d < 0:
        raise ValueError("d must be non-negative")
    table = ball(group, d, ball_cap=ball_cap)
    mul = group.mul
    members = D.member_set

    density = SmoothedDensity(group, D, d, table=table)
    a_frac = sum((1 - density.value(y) for y in D.elements), start=Fraction(0)) * table.size
    if a_frac.denominator != 1:
        raise InternalContradiction("scaled smoothing deficit is not an integer")
    a_value = int(a_frac)

    b_value = sum(
        sum(1 for x in table.elements() if mul(x, y) not in members) for y in D.elements
    )

    c_value = sum(displacement(group, x, D) for x in table.elements())

    return VerificationReport(
        kind="lemma31",
        group=group.name,
        set_descriptor=D.provenance,
        lhs=Fraction(a_value),
        rhs=Fraction(c_value),
        verdict=(a_value == b_value == c_value),
        strict=False,
        d=d,
        extra={"mid_b": b_value, "ball_size": table.size, "set_size": len(D)},
    )


def half_mass_witness(
    group: Group, D: FiniteSubset, *, ball_cap: int = DEFAULT_BALL_CAP
) -> tuple[TransportWitness, VerificationReport]:
    """Find x in B(e, d) with Card(xD \\ D) > Card(D)/2, for the least d with
    gamma(d) > 2 Card(D).

    Scans the whole ball; the witness maximizes displacement, with ties
    broken by minimal word length and then minimal canonical order (the
    scan order makes that automatic).  Averaging guarantees a strict
    witness exists whenever Card(D) < Card(group)/2.
    """
    _require_admissible(group, D)
    n = len(D)
    d, table = minimal_d(group, 2 * n, ball_cap=ball_cap)
    best_x = None
    best_disp = -1
    for x in table.elements():  # layer order, canonical within each layer
        disp = displacement(group, x, D)
        if disp > best_disp:
            best_disp = disp
            best_x = x
    threshold = Fraction(n, 2)
    witness = TransportWitness(d=d, x=best_x, displacement=best_disp, threshold=threshold)
    report = VerificationReport(
        kind="half_mass",
        group=group.name,
        set_descriptor=D.provenance,
        lhs=Fraction(best_disp),
        rhs=threshold,
        verdict=Fraction(best_disp) > threshold,
        strict=True,
        d=d,
        extra={
            "witness": group.format(best_x),
            "witness_length": table.layer_of(best_x),
            "ball_size": table.size,
            "set_size": n,
        },
    )
    return witness, report


def transport_map(
    group: Group, gamma0: Element, D: FiniteSubset, *, ball_cap: int = DEFAULT_BALL_CAP
) -> TransportMapRecord:
    """Map every moved point x in gamma0*D \\ D to the first outer-boundary
    point on the geodesic path from x back to its origin in D.

    The path points are p_n = s_n...s_1*origin for a fixed geodesic word
    (s_1, ..., s_k) of gamma0; the hit index is the maximal n with p_n on
    the outer boundary, found by scanning n = k down to 1.  Totality (some
    p_n lies on the boundary) is asserted, not assumed.
    """
    group.validate(gamma0)
    _require_non_empty(D)
    if gamma0 == group.identity():
        raise PreconditionViolated("gamma0 must have word length >= 1")
    word = geodesic_word(group, gamma0, ball_cap=ball_cap)
    k = len(word)
    gens = group.generating_set.elements
    mul = group.mul
    members = D.member_set
    boundary = outer_boundary(group, D).member_set

    gamma0_inv = group.inv(gamma0)
    moved = sorted(
        (h for h in (mul(gamma0, x) for x in D.elements) if h not in members),
        key=group.sort_key,
    )
    entries = []
    counts: dict = {}
    for x in moved:
        origin = mul(gamma0_inv, x)
        if origin not in members:
            raise InternalContradiction("moved point does not come from D")
        path = []
        p = origin
        for i in word:
            p = mul(gens[i], p)
            path.append(p)
        if path[-1] != x:
            raise InternalContradiction("geodesic word does not reproduce gamma0")
        hit = 0
        for n in range(k, 0, -1):
            if path[n - 1] in boundary:
                hit = n
                break
        if hit == 0:
            raise InternalContradiction(
                f"no path point from {group.format(x)} lies on the outer boundary"
            )
        image = path[hit - 1]
        entries.append(TransportEntry(moved=x, origin=origin, hit_index=hit, image=image))
        counts[image] = counts.get(image, 0) + 1
    return TransportMapRecord(
        group=group,
        gamma0=gamma0,
        word=word,
        subset=D,
        entries=tuple(entries),
        preimage_counts=counts,
    )


def preimage_bound_check(record: TransportMapRecord, d: int) -> VerificationReport:
    """Every boundary point absorbs at most d preimages (and at most k)."""
    k = record.length
    if k > d:
        raise PreconditionViolated(f"need ||gamma0|| <= d, got {k} > {d}")
    max_count = record.max_preimage()
    group = record.group
    return VerificationReport(
        kind="preimage_bound",
        group=group.name,
        set_descriptor=record.subset.provenance,
        lhs=Fraction(max_count),
        rhs=Fraction(d),
        verdict=max_count <= d,
        strict=False,
        d=d,
        gamma0=group.format(record.gamma0),
        extra={
            "word_length": k,
            "max_le_word_length": max_count <= k,
            "moved_count": len(record.entries),
        },
    )


def displacement_bound_check(
    group: Group, gamma0: Element, D: FiniteSubset, d: int, *, ball_cap: int = DEFAULT_BALL_CAP
) -> VerificationReport:
    """Card(gamma0*D \\ D) <= d * Card(outer boundary), plus the sharper
    bound with d replaced by ||gamma0||."""
    group.validate(gamma0)
    _require_non_empty(D)
    k = word_length(group, gamma0, ball_cap=ball_cap)
    if k > d:
        raise PreconditionViolated(f"need ||gamma0|| <= d, got {k} > {d}")
    moved = displacement(group, gamma0, D)
    boundary_size = len(outer_boundary(group, D))
    return VerificationReport(
        kind="displacement_bound",
        group=group.name,
        set_descriptor=D.provenance,
        lhs=Fraction(moved),
        rhs=Fraction(d * boundary_size),
        verdict=moved <= d * boundary_size,
        strict=False,
        d=d,
        gamma0=group.format(gamma0),
        extra={
            "word_length": k,
            "boundary_size": boundary_size,
            "k_times_boundary": k * boundary_size,
            "holds_at_word_length": moved <= k * boundary_size,
        },
    )


def verify_theorem(
    group: Group, D: FiniteSubset, *, ball_cap: int = DEFAULT_BALL_CAP
) -> VerificationReport:
    """Strict boundary-to-volume bound:

        Card(outer boundary) / Card(D)  >  1 / (2 * phi(2 * Card(D))).
    """
    _require_admissible(group, D)
    n = len(D)
    boundary_size = len(outer_boundary(group, D))
    radius = phi(group, 2 * n, ball_cap=ball_cap)
    lhs = Fraction(boundary_size, n)
    rhs = Fraction(1, 2 * radius)
    return VerificationReport(
        kind="theorem",
        group=group.name,
        set_descriptor=D.provenance,
        lhs=lhs,
        rhs=rhs,
        verdict=lhs > rhs,
        strict=True,
        extra={"phi": radius, "boundary_size": boundary_size, "set_size": n},
    )


def verify_csc(
    group: Group, D: FiniteSubset, *, ball_cap: int = DEFAULT_BALL_CAP
) -> VerificationReport:
    """Classical non-strict volume bound for the right inner boundary:

        Card(inner_r) / Card(D)  >=  1 / (4 * Card(S) * phi(2 * Card(D))).
    """
    _require_admissible(group, D)
    n = len(D)
    inner_size = len(inner_boundary_right(group, D))
    card_s = len(group.generating_set)
    radius = phi(group, 2 * n, ball_cap=ball_cap)
    lhs = Fraction(inner_size, n)
    rhs = Fraction(1, 4 * card_s * radius)
    return VerificationReport(
        kind="csc",
        group=group.name,
        set_descriptor=D.provenance,
        lhs=lhs,
        rhs=rhs,
        verdict=lhs >= rhs,
        strict=False,
        extra={"phi": radius, "inner_right_size": inner_size, "card_s": card_s, "set_size": n},
    )


def boundary_comparison(group: Group, D: FiniteSubset) -> VerificationReport:
    """Compare the outer boundary against Card(S) times each inner boundary.

    The primary verdict is the left-convention comparison
    Card(outer) <= Card(S) * Card(inner_l), which holds unconditionally;
    the right-convention comparison is recorded in extra so violations can
    be surfaced as findings without failing a run.
    """
    _require_non_empty(D)
    outer_size = len(outer_boundary(group, D))
    left_size = len(inner_boundary_left(group, D))
    right_size = len(inner_boundary_right(group, D))
    card_s = len(group.generating_set)
    lhs = Fraction(outer_size)
    rhs = Fraction(card_s * left_size)
    return VerificationReport(
        kind="boundary_cmp",
        group=group.name,
        set_descriptor=D.provenance,
        lhs=lhs,
        rhs=rhs,
        verdict=outer_size <= card_s * left_size,
        strict=False,
        extra={
            "card_s": card_s,
            "outer_size": outer_size,
            "inner_left_size": left_size,
            "inner_right_size": right_size,
            "rhs_right": card_s * right_size,
            "right_holds": outer_size <= card_s * right_size,
        },
    )
