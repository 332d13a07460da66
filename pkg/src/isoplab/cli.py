"""Command-line front end.

Exit codes: 0 success (all verdicts hold), 1 a verdict failed, 2 parse or
usage error, 3 budget exceeded, 4 precondition violated.  Machine formats
carry the exact rationals; the human format prints the same fractions
unrounded.  Every report line echoes the resolved run configuration.
"""

from __future__ import annotations

import argparse
import csv as _csv
import io
import json
import re
import sys
from dataclasses import asdict, dataclass
from typing import Optional, Sequence

from .acceptance import DEFAULT_SEED, run_acceptance
from .errors import (
    BudgetExceeded,
    InternalContradiction,
    ParseError,
    PreconditionViolated,
    Unattainable,
)
from .groups import (
    CyclicGroup,
    DihedralGroup,
    Element,
    FreeGroup,
    Group,
    HeisenbergGroup,
    SymmetricGroup,
    ZGroup,
    parse_group,
)
from .isoperimetry import (
    boundary_comparison,
    displacement_bound_check,
    half_mass_witness,
    lemma31_check,
    preimage_bound_check,
    transport_map,
    verify_csc,
    verify_theorem,
)
from .metric import DEFAULT_BALL_CAP, growth, phi, word_length
from .search import (
    exhaustive_profile,
    expand_trials,
    interval_subsets,
    parse_set_descriptor,
    parse_size_range,
    sharpness_of_subsets,
)

EXIT_OK = 0
EXIT_FAILED_VERDICT = 1
EXIT_PARSE = 2
EXIT_BUDGET = 3
EXIT_PRECONDITION = 4

_RELATION = {
    "lemma31": "=",
    "half_mass": ">",
    "theorem": ">",
    "csc": ">=",
    "preimage_bound": "<=",
    "displacement_bound": "<=",
    "boundary_cmp": "<=",
}


@dataclass
class RunConfig:
    """Everything that determines a run; echoed into every report."""

    command: str
    group: Optional[str] = None
    set: Optional[str] = None
    d: Optional[int] = None
    gamma0: Optional[str] = None
    trials: Optional[int] = None
    seed: Optional[int] = None
    sizes: Optional[str] = None
    max_radius: Optional[int] = None
    phi: Optional[int] = None
    family: Optional[str] = None
    max_n: Optional[int] = None
    format: str = "human"
    out: Optional[str] = None
    ball_cap: int = DEFAULT_BALL_CAP
    quick: Optional[bool] = None

    def to_dict(self) -> dict:
        return {k: v for k, v in asdict(self).items() if v is not None}

    def json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def parse_generator_word(group: Group, text: str) -> Element:
    """A word in per-family generator tokens, multiplied left to right.

    Tokens: +i/-i for the lattice families and cyclic groups, letters for
    free groups (identity "e"), r/R/s for dihedral, x/X/y/Y for the
    unitriangular family, t1..t(n-1) for symmetric groups.
    """
    t = text.strip()
    if not t:
        raise ParseError("empty generator word")
    if isinstance(group, FreeGroup):
        return group.parse(t)
    acc = group.identity()
    if isinstance(group, (ZGroup, CyclicGroup)):
        pos = 0
        for m in re.finditer(r"([+-])([0-9]+)", t):
            if m.start() != pos:
                raise ParseError(f"bad generator word {text!r}")
            pos = m.end()
            index = int(m.group(2))
            rank = group.rank if isinstance(group, ZGroup) else 1
            if not 1 <= index <= rank:
                raise ParseError(f"generator index {index} out of range 1..{rank}")
            if isinstance(group, ZGroup):
                step = [0] * group.rank
                step[index - 1] = 1 if m.group(1) == "+" else -1
                acc = group.mul(acc, tuple(step))
            else:
                acc = group.mul(acc, 1 if m.group(1) == "+" else group.n - 1)
        if pos != len(t):
            raise ParseError(f"bad generator word {text!r}")
        return acc
    if isinstance(group, DihedralGroup):
        table = {"r": (1, 0), "R": (group.n - 1, 0), "s": (0, 1)}
        for ch in t:
            if ch not in table:
                raise ParseError(f"bad dihedral token {ch!r} (expected r, R, or s)")
            acc = group.mul(acc, table[ch])
        return acc
    if isinstance(group, HeisenbergGroup):
        x = group.parse("(1,0,0)")
        y = group.parse("(0,1,0)")
        table = {"x": x, "X": group.inv(x), "y": y, "Y": group.inv(y)}
        for ch in t:
            if ch not in table:
                raise ParseError(f"bad token {ch!r} (expected x, X, y, or Y)")
            acc = group.mul(acc, table[ch])
        return acc
    if isinstance(group, SymmetricGroup):
        pos = 0
        for m in re.finditer(r"t([0-9]+)", t):
            if m.start() != pos:
                raise ParseError(f"bad generator word {text!r}")
            pos = m.end()
            i = int(m.group(1))
            if not 1 <= i <= group.n - 1:
                raise ParseError(f"transposition index {i} out of range 1..{group.n - 1}")
            acc = group.mul(acc, group.generating_set.elements[i - 1])
        if pos != len(t):
            raise ParseError(f"bad generator word {text!r}")
        return acc
    raise ParseError(f"no generator word grammar for {group.name}")


def _csv_lines(header: list[str], rows: list[list]) -> list[str]:
    buf = io.StringIO()
    writer = _csv.writer(buf, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buf.getvalue().splitlines()


def _emit(lines: list[str], out_path: Optional[str]) -> None:
    text = "\n".join(lines) + ("\n" if lines else "")
    if out_path:
        with open(out_path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _report_lines(reports, config: RunConfig) -> list[str]:
    fmt = config.format
    if fmt == "jsonl":
        return [
            json.dumps(
                {**r.to_json_dict(), "run_config": config.to_dict()},
                sort_keys=True,
                separators=(",", ":"),
            )
            for r in reports
        ]
    if fmt == "csv":
        header = [
            "kind", "group", "set_descriptor", "d", "gamma0",
            "lhs_num", "lhs_den", "rhs_num", "rhs_den",
            "verdict", "sharpness_num", "sharpness_den",
        ]
        rows = []
        for r in reports:
            sharp = r.sharpness
            rows.append([
                r.kind, r.group, r.set_descriptor,
                "" if r.d is None else r.d, r.gamma0 or "",
                r.lhs.numerator, r.lhs.denominator,
                r.rhs.numerator, r.rhs.denominator,
                "holds" if r.verdict else "fails",
                "" if sharp is None else sharp.numerator,
                "" if sharp is None else sharp.denominator,
            ])
        return [f"# config: {config.json()}"] + _csv_lines(header, rows)
    lines = [f"config: {config.json()}"]
    for r in reports:
        rel = _RELATION.get(r.kind, "?")
        parts = [f"{r.kind} group={r.group} set={r.set_descriptor}"]
        if r.d is not None:
            parts.append(f"d={r.d}")
        if r.gamma0 is not None:
            parts.append(f"gamma0={r.gamma0}")
        verdict = "holds" if r.verdict else "FAILS"
        line = " ".join(parts) + f": {r.lhs} {rel} {r.rhs} -> {verdict}"
        if r.sharpness is not None and r.kind in ("theorem", "half_mass", "csc"):
            line += f" (sharpness {r.sharpness})"
        lines.append(line)
    return lines


def _cmd_growth(config: RunConfig) -> int:
    if config.group is None:
        raise ParseError("growth needs --group")
    group = parse_group(config.group)
    if config.phi is not None:
        value = phi(group, config.phi, ball_cap=config.ball_cap)
        if config.format == "jsonl":
            lines = [json.dumps(
                {"v": config.phi, "phi": value, "run_config": config.to_dict()},
                sort_keys=True, separators=(",", ":"),
            )]
        elif config.format == "csv":
            lines = [f"# config: {config.json()}"] + _csv_lines(["v", "phi"], [[config.phi, value]])
        else:
            lines = [f"config: {config.json()}", f"phi({config.phi}) = {value}"]
        _emit(lines, config.out)
        return EXIT_OK
    if config.max_radius is None:
        raise ParseError("growth needs --max-radius or --phi")
    table = growth(group, config.max_radius, ball_cap=config.ball_cap)
    if config.format == "jsonl":
        lines = [
            json.dumps(
                {"r": r, "gamma": v, "run_config": config.to_dict()},
                sort_keys=True, separators=(",", ":"),
            )
            for r, v in table.csv_rows()
        ]
    elif config.format == "csv":
        lines = [f"# config: {config.json()}"] + _csv_lines(
            ["r", "gamma"], [[r, v] for r, v in table.csv_rows()]
        )
    else:
        lines = [f"config: {config.json()}"]
        lines += [f"gamma({r}) = {v}" for r, v in table.csv_rows()]
    _emit(lines, config.out)
    return EXIT_OK


def _cmd_verify(config: RunConfig, check: str) -> int:
    if config.group is None or config.set is None:
        raise ParseError("verify needs --group and --set")
    group = parse_group(config.group)
    desc = parse_set_descriptor(config.set)
    trials = config.trials if config.trials is not None else 1
    reports = []
    for subset in expand_trials(group, desc, trials, ball_cap=config.ball_cap):
        if check == "lemma31":
            if config.d is None:
                raise ParseError("verify lemma31 needs --d")
            reports.append(lemma31_check(group, subset, config.d, ball_cap=config.ball_cap))
        elif check == "halfmass":
            _, rep = half_mass_witness(group, subset, ball_cap=config.ball_cap)
            reports.append(rep)
        elif check == "transport":
            if config.gamma0 is None:
                raise ParseError("verify transport needs --gamma0")
            gamma0 = parse_generator_word(group, config.gamma0)
            d = config.d if config.d is not None else word_length(group, gamma0, ball_cap=config.ball_cap)
            record = transport_map(group, gamma0, subset, ball_cap=config.ball_cap)
            reports.append(preimage_bound_check(record, d))
            reports.append(displacement_bound_check(group, gamma0, subset, d, ball_cap=config.ball_cap))
        elif check == "theorem":
            reports.append(verify_theorem(group, subset, ball_cap=config.ball_cap))
        elif check == "csc":
            reports.append(verify_csc(group, subset, ball_cap=config.ball_cap))
        elif check == "boundary-cmp":
            reports.append(boundary_comparison(group, subset))
        else:
            raise ParseError(f"unknown verify check {check!r}")
    _emit(_report_lines(reports, config), config.out)
    return EXIT_OK if all(r.verdict for r in reports) else EXIT_FAILED_VERDICT


def _cmd_profile(config: RunConfig) -> int:
    if config.group is None or config.sizes is None:
        raise ParseError("profile needs --group and --sizes")
    group = parse_group(config.group)
    lo, hi = parse_size_range(config.sizes)
    rows = exhaustive_profile(group, range(lo, hi + 1), ball_cap=config.ball_cap)
    if config.format == "jsonl":
        lines = [
            json.dumps(
                {**row.to_json_dict(), "run_config": config.to_dict()},
                sort_keys=True, separators=(",", ":"),
            )
            for row in rows
        ]
    elif config.format == "csv":
        header = ["n", "min_boundary", "bound_num", "bound_den", "witness"]
        body = []
        for row in rows:
            d = row.to_json_dict()
            body.append([d["n"], d["min_boundary"], d["bound_num"], d["bound_den"], d["witness"]])
        lines = [f"# config: {config.json()}"] + _csv_lines(header, body)
    else:
        lines = [f"config: {config.json()}"]
        for row in rows:
            d = row.to_json_dict()
            lines.append(
                f"n={d['n']}: min boundary {d['min_boundary']} "
                f"(strict bound {row.bound}, gap {row.gap}) witness {d['witness']}"
            )
    _emit(lines, config.out)
    return EXIT_OK


def _cmd_sharpness(config: RunConfig) -> int:
    if config.group is None:
        raise ParseError("sharpness needs --group")
    group = parse_group(config.group)
    if config.family is not None:
        if config.family != "intervals":
            raise ParseError(f"unknown sharpness family {config.family!r}")
        subsets = interval_subsets(group, config.max_n if config.max_n is not None else 50)
        summary = sharpness_of_subsets(group, subsets, ball_cap=config.ball_cap)
    elif config.set is not None:
        desc = parse_set_descriptor(config.set)
        trials = config.trials if config.trials is not None else 1
        subsets = list(expand_trials(group, desc, trials, ball_cap=config.ball_cap))
        summary = sharpness_of_subsets(group, subsets, ball_cap=config.ball_cap)
    else:
        raise ParseError("sharpness needs --family intervals or --set")
    if config.format == "jsonl":
        lines = [json.dumps(
            {**summary.to_json_dict(), "run_config": config.to_dict()},
            sort_keys=True, separators=(",", ":"),
        )]
    elif config.format == "csv":
        header = ["set", "factor_num", "factor_den"]
        rows = [[name, f.numerator, f.denominator] for name, f in summary.entries]
        lines = [f"# config: {config.json()}"] + _csv_lines(header, rows)
    else:
        lines = [f"config: {config.json()}"]
        for name, f in summary.entries:
            lines.append(f"{name}: factor {f}")
        lines.append(f"min factor {summary.min_factor}, median factor {summary.median_factor}")
    _emit(lines, config.out)
    return EXIT_OK if all(r.verdict for r in summary.reports) else EXIT_FAILED_VERDICT


def _cmd_accept(config: RunConfig) -> int:
    seed = config.seed if config.seed is not None else DEFAULT_SEED
    outcome = run_acceptance(
        seed, bool(config.quick), check_determinism=True, ball_cap=config.ball_cap
    )
    if config.format == "jsonl":
        lines = [
            json.dumps(
                {**r.to_json_dict(), "run_config": config.to_dict()},
                sort_keys=True, separators=(",", ":"),
            )
            for r in outcome.reports
        ]
        for res in outcome.results:
            lines.append(json.dumps(
                {
                    "criterion": res.index,
                    "name": res.name,
                    "passed": res.passed,
                    "detail": res.detail,
                    "findings": list(res.findings),
                    "run_config": config.to_dict(),
                },
                sort_keys=True, separators=(",", ":"),
            ))
        lines.append(json.dumps(
            {"all_passed": outcome.all_passed, "run_config": config.to_dict()},
            sort_keys=True, separators=(",", ":"),
        ))
    elif config.format == "csv":
        header = ["criterion", "name", "passed", "detail"]
        rows = [[r.index, r.name, "pass" if r.passed else "fail", r.detail] for r in outcome.results]
        lines = [f"# config: {config.json()}"] + _csv_lines(header, rows)
    else:
        lines = [f"config: {config.json()}"]
        for res in outcome.results:
            lines.append(res.line())
            for finding in res.findings:
                lines.append(f"  finding: {finding}")
        passed = sum(1 for r in outcome.results if r.passed)
        status = "ALL PASS" if outcome.all_passed else "FAILED"
        lines.append(f"acceptance: {status} ({passed}/{len(outcome.results)} criteria)")
    _emit(lines, config.out)
    return EXIT_OK if outcome.all_passed else EXIT_FAILED_VERDICT


_CONFIG_INT_KEYS = {"d", "trials", "seed", "max_radius", "phi", "max_n", "ball_cap"}
_CONFIG_BOOL_KEYS = {"quick"}


def _load_config_file(path: str) -> dict:
    values = {}
    try:
        with open(path, "r", encoding="utf-8") as fh:
            for raw in fh:
                line = raw.strip()
                if not line or line.startswith("#"):
                    continue
                if "=" not in line:
                    raise ParseError(f"bad config line {line!r} (expected key=value)")
                key, _, value = line.partition("=")
                values[key.strip().replace("-", "_")] = value.strip()
    except OSError as exc:
        raise ParseError(f"cannot read config file {path}: {exc}") from None
    return values


def _resolve_config(args: argparse.Namespace) -> RunConfig:
    file_values = _load_config_file(args.config_path) if getattr(args, "config_path", None) else {}

    def pick(key: str, default=None):
        flag = getattr(args, key, None)
        if flag is not None:
            return flag
        if key in file_values:
            raw = file_values[key]
            if key in _CONFIG_INT_KEYS:
                try:
                    return int(raw)
                except ValueError:
                    raise ParseError(f"config key {key} needs an integer, got {raw!r}") from None
            if key in _CONFIG_BOOL_KEYS:
                return raw.lower() in ("1", "true", "yes", "on")
            return raw
        return default

    fmt = pick("format", "human")
    if fmt not in ("jsonl", "csv", "human"):
        raise ParseError(f"unknown format {fmt!r}")
    return RunConfig(
        command=args.command,
        group=pick("group"),
        set=pick("set"),
        d=pick("d"),
        gamma0=pick("gamma0"),
        trials=pick("trials"),
        seed=pick("seed"),
        sizes=pick("sizes"),
        max_radius=pick("max_radius"),
        phi=pick("phi"),
        family=pick("family"),
        max_n=pick("max_n"),
        format=fmt,
        out=pick("out"),
        ball_cap=pick("ball_cap", DEFAULT_BALL_CAP),
        quick=pick("quick"),
    )


def _add_common(sp: argparse.ArgumentParser) -> None:
    sp.add_argument("--format", choices=["jsonl", "csv", "human"], default=None)
    sp.add_argument("--out", default=None)
    sp.add_argument("--ball-cap", dest="ball_cap", type=int, default=None)
    sp.add_argument("--config", dest="config_path", default=None,
                    help="flat key=value config file; flags take precedence")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isoplab",
        description="Exact word metrics, boundaries, and isoperimetric verification "
                    "on Cayley graphs of concrete finitely generated groups.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    growth_p = sub.add_parser("growth", help="growth table or inverse growth value")
    growth_p.add_argument("--group")
    growth_p.add_argument("--max-radius", dest="max_radius", type=int, default=None)
    growth_p.add_argument("--phi", dest="phi", type=int, default=None,
                          help="emit the least r with gamma(r) > v instead of a table")
    _add_common(growth_p)

    verify_p = sub.add_parser("verify", help="run one verifier over generated sets")
    verify_p.add_argument("check", choices=[
        "lemma31", "halfmass", "transport", "theorem", "csc", "boundary-cmp",
    ])
    verify_p.add_argument("--group")
    verify_p.add_argument("--set", dest="set")
    verify_p.add_argument("--d", type=int, default=None)
    verify_p.add_argument("--gamma0", default=None)
    verify_p.add_argument("--trials", type=int, default=None)
    verify_p.add_argument("--seed", type=int, default=None)
    _add_common(verify_p)

    profile_p = sub.add_parser("profile", help="exhaustive isoperimetric profile")
    profile_p.add_argument("--group")
    profile_p.add_argument("--sizes")
    _add_common(profile_p)

    sharp_p = sub.add_parser("sharpness", help="sharpness factors of the strict bound")
    sharp_p.add_argument("--group")
    sharp_p.add_argument("--family", choices=["intervals"], default=None)
    sharp_p.add_argument("--max-n", dest="max_n", type=int, default=None)
    sharp_p.add_argument("--set", dest="set")
    sharp_p.add_argument("--trials", type=int, default=None)
    sharp_p.add_argument("--seed", type=int, default=None)
    _add_common(sharp_p)

    accept_p = sub.add_parser("accept", help="run the acceptance suite and print a scorecard")
    accept_p.add_argument("--quick", action="store_true", default=None)
    accept_p.add_argument("--seed", type=int, default=None)
    _add_common(accept_p)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else EXIT_OK
    try:
        config = _resolve_config(args)
        if args.command == "growth":
            return _cmd_growth(config)
        if args.command == "verify":
            return _cmd_verify(config, args.check)
        if args.command == "profile":
            return _cmd_profile(config)
        if args.command == "sharpness":
            return _cmd_sharpness(config)
        if args.command == "accept":
            return _cmd_accept(config)
        raise ParseError(f"unknown command {args.command!r}")
    except ParseError as exc:
        print(f"isoplab: error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except BudgetExceeded as exc:
        print(f"isoplab: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (PreconditionViolated, Unattainable) as exc:
        print(f"isoplab: precondition violated: {exc}", file=sys.stderr)
        return EXIT_PRECONDITION
    except InternalContradiction as exc:
        print(f"isoplab: falsified construction: {exc}", file=sys.stderr)
        return EXIT_FAILED_VERDICT


if __name__ == "__main__":
    sys.exit(main())
