"""Runnable acceptance suite shared by the CLI scorecard and the test suite.

Each criterion is a deterministic function of the master seed.  Randomized
criteria derive per-instance sub-seeds through the documented SplitMix64
split rule, so the whole run (including every report line) is reproducible
byte for byte.  Quick mode reduces instance counts but keeps every
criterion and every tolerance identical; tolerances are all zero, since
every comparison is exact.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import InternalContradiction
from .groups import Element, Group, parse_group
from .isoperimetry import (
    FiniteSubset,
    VerificationReport,
    boundary_comparison,
    displacement_bound_check,
    half_mass_witness,
    lemma31_check,
    outer_boundary,
    preimage_bound_check,
    transport_map,
    verify_csc,
    verify_theorem,
)
from .metric import DEFAULT_BALL_CAP, ball, growth, word_length
from .rng import SplitMix64
from .search import (
    default_uniform_radius,
    generate_set,
    generate_sets,
    interval_subsets,
    parse_set_descriptor,
)

FAMILIES = ("z", "zd:2", "free:2", "cyclic:12", "dihedral:6", "heisenberg")
DEFAULT_SEED = 0


@dataclass(frozen=True)
class Instance:
    group: Group
    subset: FiniteSubset
    d: int


@dataclass
class CriterionResult:
    index: int
    name: str
    passed: bool
    detail: str
    findings: tuple[str, ...] = ()

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"criterion {self.index} [{self.name}]: {status} ({self.detail})"


@dataclass
class AcceptanceOutcome:
    seed: int
    quick: bool
    results: list[CriterionResult]
    reports: list[VerificationReport]

    @property
    def all_passed(self) -> bool:
        return all(r.passed for r in self.results)


def _random_subset_descriptor(group, size, seed_value, uniform, ball_cap):
    if uniform:
        radius = default_uniform_radius(group, size, ball_cap)
        text = f"random:{size}:{seed_value}:ball={radius}"
    else:
        text = f"random:{size}:{seed_value}"
    return parse_set_descriptor(text)


def acceptance_instances(seed: int, quick: bool, *, ball_cap: int = DEFAULT_BALL_CAP):
    """The shared randomized instance pool: (group, D, d) triples spanning
    all six families, sizes 1..60 (or up to the group order), d in 0..4."""
    per_family = 10 if quick else 84
    master = SplitMix64(seed)
    instances = []
    seq = 0
    for fam in FAMILIES:
        group = parse_group(fam)
        order = group.order()
        for j in range(per_family):
            rng = master.child(seq)
            seq += 1
            size_cap = 60 if order is None else order
            size = 1 + rng.below(size_cap)
            d = rng.below(5)
            desc = _random_subset_descriptor(
                group, size, rng.child_seed(1), uniform=(j % 2 == 1), ball_cap=ball_cap
            )
            subset = generate_set(group, desc, ball_cap=ball_cap)
            instances.append(Instance(group=group, subset=subset, d=d))
    return instances


def _admissible(ins: Instance) -> bool:
    order = ins.group.order()
    return order is None or 2 * len(ins.subset) < order


def _criterion_lemma31(instances, reports, quick, ball_cap) -> CriterionResult:
    failures = 0
    for ins in instances:
        rep = lemma31_check(ins.group, ins.subset, ins.d, ball_cap=ball_cap)
        reports.append(rep)
        if not rep.verdict:
            failures += 1
    families = len({ins.group.name for ins in instances})
    enough = quick or len(instances) >= 500
    detail = (
        f"{len(instances)} instances across {families} families, "
        f"exact integer identity, {failures} failures"
    )
    return CriterionResult(1, "smoothing identity exactness", failures == 0 and enough, detail)


def _criterion_half_mass(instances, reports, ball_cap) -> CriterionResult:
    checked = 0
    failures = 0
    for ins in instances:
        if not _admissible(ins):
            continue
        witness, rep = half_mass_witness(ins.group, ins.subset, ball_cap=ball_cap)
        reports.append(rep)
        checked += 1
        if not (rep.verdict and Fraction(witness.displacement) > witness.threshold):
            failures += 1
    detail = f"{checked} admissible instances, strict witness failures: {failures}"
    return CriterionResult(2, "half-mass witness", checked > 0 and failures == 0, detail)


def _criterion_transport(seed, quick, reports, ball_cap) -> CriterionResult:
    per_family = 5 if quick else 34
    master = SplitMix64(seed)
    failures = []
    checked = 0
    for fi, fam in enumerate(FAMILIES):
        group = parse_group(fam)
        order = group.order()
        table = ball(group, 5, ball_cap=ball_cap)
        candidates = [g for layer in table.layers[1:] for g in layer]
        for j in range(per_family):
            rng = master.child(10_000 + fi * 1000 + j)
            size_cap = 40 if order is None else min(40, order)
            size = 1 + rng.below(size_cap)
            desc = _random_subset_descriptor(
                group, size, rng.child_seed(1), uniform=(j % 2 == 1), ball_cap=ball_cap
            )
            subset = generate_set(group, desc, ball_cap=ball_cap)
            gamma0 = candidates[rng.below(len(candidates))]
            try:
                record = transport_map(group, gamma0, subset, ball_cap=ball_cap)
            except InternalContradiction as exc:
                failures.append(f"{fam}: transport construction failed: {exc}")
                continue
            boundary = outer_boundary(group, subset).member_set
            k = record.length
            if not all(
                e.image in boundary and e.origin in subset and 1 <= e.hit_index <= k
                for e in record.entries
            ):
                failures.append(f"{fam}: image/origin invariant failed on {subset.provenance}")
            pre = preimage_bound_check(record, 5)
            reports.append(pre)
            if not (pre.verdict and pre.extra["max_le_word_length"]):
                failures.append(f"{fam}: preimage bound failed on {subset.provenance}")
            disp = displacement_bound_check(group, gamma0, subset, 5, ball_cap=ball_cap)
            reports.append(disp)
            if not (disp.verdict and disp.extra["holds_at_word_length"]):
                failures.append(f"{fam}: displacement bound failed on {subset.provenance}")
            checked += 1
    enough = quick or checked >= 200
    detail = f"{checked} transport instances, failures: {len(failures)}"
    if failures:
        detail += "; first: " + failures[0]
    return CriterionResult(3, "geodesic transport map", enough and not failures, detail)


def _criterion_theorem_exhaustive(reports, ball_cap) -> CriterionResult:
    expected = 1585  # sum of C(12, n) for n = 1..5
    failures = 0
    counts = {}
    for fam in ("cyclic:12", "dihedral:6"):
        group = parse_group(fam)
        count = 0
        for subset in generate_sets(group, parse_set_descriptor("exhaustive:1..5"), ball_cap=ball_cap):
            rep = verify_theorem(group, subset, ball_cap=ball_cap)
            reports.append(rep)
            if not rep.verdict:
                failures += 1
            count += 1
        counts[fam] = count
    complete = all(c == expected for c in counts.values())
    detail = (
        f"every subset of size 1..5 in cyclic:12 and dihedral:6 "
        f"({counts}), strict failures: {failures}"
    )
    return CriterionResult(4, "strict bound, exhaustive sweep", failures == 0 and complete, detail)


def _criterion_interval_sharpness(reports, ball_cap) -> CriterionResult:
    group = parse_group("z")
    bad = []
    for subset in interval_subsets(group, 50):
        rep = verify_theorem(group, subset, ball_cap=ball_cap)
        reports.append(rep)
        n = len(subset)
        exact = (
            rep.verdict
            and rep.lhs == Fraction(2, n)
            and rep.rhs == Fraction(1, 2 * n)
            and rep.sharpness == Fraction(4)
        )
        if not exact:
            bad.append(n)
    detail = f"intervals n=1..50 on z, factor exactly 4 everywhere; deviations: {bad}"
    return CriterionResult(5, "factor-4 sharpness on z intervals", not bad, detail)


def _criterion_csc_boundary(instances, reports, ball_cap) -> CriterionResult:
    failures = []
    findings = []
    csc_checked = 0
    for ins in instances:
        cmp_rep = boundary_comparison(ins.group, ins.subset)
        reports.append(cmp_rep)
        if not cmp_rep.verdict:
            failures.append(
                f"left comparison failed on {ins.group.name} {ins.subset.provenance}"
            )
        if not cmp_rep.extra["right_holds"]:
            findings.append(
                f"right-convention comparison exceeded on {ins.group.name} "
                f"{ins.subset.provenance}: outer={cmp_rep.extra['outer_size']} > "
                f"{cmp_rep.extra['rhs_right']}"
            )
        if _admissible(ins):
            csc_rep = verify_csc(ins.group, ins.subset, ball_cap=ball_cap)
            reports.append(csc_rep)
            csc_checked += 1
            if not csc_rep.verdict:
                failures.append(
                    f"classical bound failed on {ins.group.name} {ins.subset.provenance}"
                )
    detail = (
        f"{len(instances)} boundary comparisons, {csc_checked} classical-bound checks, "
        f"failures: {len(failures)}, right-convention findings: {len(findings)}"
    )
    return CriterionResult(
        6, "classical bound and boundary comparison", not failures, detail, tuple(findings)
    )


def _oracle_word_length(group: Group, g: Element, max_depth: int) -> Optional[int]:
    """Minimal word length by brute enumeration of generator words, wholly
    independent of the BFS tables."""
    if g == group.identity():
        return 0
    gens = group.generating_set.elements
    mul = group.mul

    def reaches(cur, remaining):
        if remaining == 0:
            return cur == g
        return any(reaches(mul(s, cur), remaining - 1) for s in gens)

    for n in range(1, max_depth + 1):
        if reaches(group.identity(), n):
            return n
    return None


def _distance_one_oracle(group: Group, subset: FiniteSubset, b2) -> frozenset:
    """{a : dist(a, D) = 1} by per-element distance queries against a radius-2
    ball table, independent of the S*D construction."""
    mul, inv = group.mul, group.inv
    region = set()
    for x in b2.elements():
        for delta in subset.elements:
            region.add(mul(x, delta))
    out = set()
    for a in region:
        dist = min(b2.depth.get(mul(a, inv(delta)), 3) for delta in subset.elements)
        if dist == 1:
            out.add(a)
    return frozenset(out)


_ORACLE_RADII = {"z": 12, "zd:2": 6, "free:2": 5, "cyclic:12": 6, "dihedral:6": 6, "heisenberg": 4}


def _criterion_oracles(seed, quick, ball_cap) -> CriterionResult:
    failures = []
    master = SplitMix64(seed)

    # outer boundary vs per-element distance oracle
    per_family_a = 3 if quick else 17
    checked_a = 0
    for fi, fam in enumerate(FAMILIES):
        group = parse_group(fam)
        order = group.order()
        b2 = ball(group, 2, ball_cap=ball_cap)
        for j in range(per_family_a):
            rng = master.child(20_000 + fi * 1000 + j)
            size_cap = 12 if order is None else min(12, order)
            size = 1 + rng.below(size_cap)
            desc = _random_subset_descriptor(
                group, size, rng.child_seed(1), uniform=(j % 2 == 1), ball_cap=ball_cap
            )
            subset = generate_set(group, desc, ball_cap=ball_cap)
            lib = outer_boundary(group, subset).member_set
            oracle = _distance_one_oracle(group, subset, b2)
            if lib != oracle:
                failures.append(f"{fam}: boundary oracle mismatch on {subset.provenance}")
            checked_a += 1

    # ball layers vs independent word-length searches
    per_family_b = 25 if quick else 167
    checked_b = 0
    for fi, fam in enumerate(FAMILIES):
        group = parse_group(fam)
        radius = _ORACLE_RADII[fam]
        table = ball(group, radius, ball_cap=ball_cap)
        pool = list(table.elements())
        rng = master.child(30_000 + fi)
        for _ in range(per_family_b):
            g = pool[rng.below(len(pool))]
            expected = table.layer_of(g)
            if word_length(group, g, ball_cap=ball_cap) != expected:
                failures.append(f"{fam}: BFS word length disagrees with layer of {group.format(g)}")
            if _oracle_word_length(group, g, radius) != expected:
                failures.append(f"{fam}: word enumeration disagrees with layer of {group.format(g)}")
            checked_b += 1

    # growth closed forms for r <= 8
    z_vals = growth(parse_group("z"), 8, ball_cap=ball_cap).values
    z2_vals = growth(parse_group("zd:2"), 8, ball_cap=ball_cap).values
    f2_vals = growth(parse_group("free:2"), 8, ball_cap=ball_cap).values
    if z_vals != tuple(2 * r + 1 for r in range(9)):
        failures.append("z growth differs from 2r+1")
    if z2_vals != tuple(2 * r * r + 2 * r + 1 for r in range(9)):
        failures.append("zd:2 growth differs from 2r^2+2r+1")
    if f2_vals != tuple(2 * 3**r - 1 for r in range(9)):
        failures.append("free:2 growth differs from 2*3^r-1")

    enough = quick or (checked_a >= 100 and checked_b >= 1000)
    detail = (
        f"{checked_a} boundary oracles, {checked_b} word-length queries, "
        f"3 closed growth forms; failures: {len(failures)}"
    )
    if failures:
        detail += "; first: " + failures[0]
    return CriterionResult(7, "independent oracle agreement", enough and not failures, detail)


def _run_criteria(seed, quick, ball_cap):
    reports: list[VerificationReport] = []
    instances = acceptance_instances(seed, quick, ball_cap=ball_cap)
    results = [
        _criterion_lemma31(instances, reports, quick, ball_cap),
        _criterion_half_mass(instances, reports, ball_cap),
        _criterion_transport(seed, quick, reports, ball_cap),
        _criterion_theorem_exhaustive(reports, ball_cap),
        _criterion_interval_sharpness(reports, ball_cap),
        _criterion_csc_boundary(instances, reports, ball_cap),
        _criterion_oracles(seed, quick, ball_cap),
    ]
    return results, reports


def serialize_run(results, reports) -> bytes:
    """Canonical machine serialization of a run, used for the determinism
    criterion and by the CLI."""
    lines = [rep.to_json_line() for rep in reports]
    for res in results:
        lines.append(
            json.dumps(
                {
                    "criterion": res.index,
                    "name": res.name,
                    "passed": res.passed,
                    "detail": res.detail,
                    "findings": list(res.findings),
                },
                sort_keys=True,
                separators=(",", ":"),
            )
        )
    return ("\n".join(lines) + "\n").encode()


def run_acceptance(
    seed: int = DEFAULT_SEED,
    quick: bool = False,
    *,
    check_determinism: bool = True,
    ball_cap: int = DEFAULT_BALL_CAP,
) -> AcceptanceOutcome:
    results, reports = _run_criteria(seed, quick, ball_cap)
    if check_determinism:
        results2, reports2 = _run_criteria(seed, quick, ball_cap)
        identical = serialize_run(results, reports) == serialize_run(results2, reports2)
        detail = (
            "re-running the pipeline with the same seed reproduced the machine "
            "report stream byte for byte"
            if identical
            else "second run with the same seed produced a different report stream"
        )
        results.append(CriterionResult(8, "determinism", identical, detail))
    return AcceptanceOutcome(seed=seed, quick=quick, results=results, reports=reports)
