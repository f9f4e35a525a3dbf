"""Batch interface: the algebra file format, subcommands for checking,
deriving, quotienting, model generation and counterexample search, and a
deterministic report format.

Exit statuses: 0 all verdicts hold, 1 a checked property fails (witness in
the report), 2 usage or parse error, 3 internal inconsistency (a verified
theorem failed, meaning a workbench bug).  Reports are byte-identical
across runs and across ``--jobs`` settings.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from . import models
from .core import Algebra, greens, make_algebra, pullback_check, quotient
from .errors import (
    BadConstant,
    BadPoset,
    InconsistencyDetected,
    MalformedTable,
    NoTop,
    NotCoStronglyDistributive,
    ParseError,
    PreconditionFailed,
    SkewbenchError,
    TooLarge,
)
from .identities import CheckResult
from .models import Poset, SurjectionModel, build_instance, search_family
from .properties import PropertyReport, check_costrong_equivalence, classify
from .skew_heyting import (
    check_arrow_congruences,
    check_imp_or,
    check_sh_axioms,
    check_sha,
    check_lifting,
    derive_arrow,
    special_case_arrows,
)

VERSION = "skewbench 0.1.0"

_EXIT_PASS, _EXIT_FAIL, _EXIT_USAGE, _EXIT_INCONSISTENT = 0, 1, 2, 3


# ---------------------------------------------------------------------------
# Algebra and poset documents


def _significant_lines(text: str):
    for lineno, raw in enumerate(text.splitlines(), start=1):
        stripped = raw.strip()
        if not stripped or stripped.startswith("#"):
            continue
        yield lineno, raw


def parse_algebra_file(text: str) -> Algebra:
    """Parse the sectioned algebra document: ``elements:``, ``meet:``,
    ``join:``, then optional ``arrow:``, ``top:``, ``bottom:``."""
    lines = list(_significant_lines(text))
    pos = 0

    def take(expected: str, inline: bool):
        nonlocal pos
        if pos >= len(lines):
            last = lines[-1][0] if lines else 1
            raise ParseError(last, 1, f"missing section {expected!r}")
        lineno, raw = lines[pos]
        head, _, rest = raw.partition(":")
        if head.strip() != expected.rstrip(":"):
            raise ParseError(lineno, 1, f"expected section {expected!r}, found {head.strip()!r}")
        pos += 1
        if inline:
            return lineno, rest.split()
        return lineno, rest.strip()

    def peek() -> str | None:
        if pos >= len(lines):
            return None
        return lines[pos][1].partition(":")[0].strip()

    _, names = take("elements:", inline=True)
    if not names:
        raise ParseError(lines[0][0], 1, "no elements declared")
    n = len(names)
    lookup = {name: i for i, name in enumerate(names)}

    def table(section: str):
        nonlocal pos
        lineno, rest = take(section, inline=False)
        if rest:
            raise ParseError(lineno, 1, f"{section} rows must start on the following line")
        rows = []
        for _ in range(n):
            if pos >= len(lines):
                raise ParseError(lines[-1][0], 1, f"{section} table is missing rows")
            rowno, raw = lines[pos]
            cells = raw.split()
            if len(cells) != n:
                raise ParseError(rowno, 1, f"row has {len(cells)} entries, expected {n}")
            for cell in cells:
                if cell not in lookup:
                    col = raw.index(cell) + 1
                    raise ParseError(rowno, col, f"unknown element {cell!r}")
            rows.append([lookup[c] for c in cells])
            pos += 1
        return rows

    meet = table("meet:")
    join = table("join:")
    arrow = table("arrow:") if peek() == "arrow" else None

    def constant(section: str):
        lineno, rest = take(section, inline=True)
        if len(rest) != 1:
            raise ParseError(lineno, 1, f"{section} wants exactly one element name")
        if rest[0] not in lookup:
            raise ParseError(lineno, 1, f"unknown element {rest[0]!r}")
        return rest[0]

    top = constant("top:") if peek() == "top" else None
    bottom = constant("bottom:") if peek() == "bottom" else None
    if pos < len(lines):
        lineno, raw = lines[pos]
        raise ParseError(lineno, 1, f"unexpected content {raw.strip()!r}")
    return make_algebra(names, meet, join, top=top, bottom=bottom, arrow=arrow)


def emit_algebra_file(A: Algebra) -> str:
    out = ["elements: " + " ".join(A.names)]

    def block(label: str, table: np.ndarray):
        out.append(label)
        for row in table:
            out.append(" ".join(A.names[int(v)] for v in row))

    block("meet:", A.meet)
    block("join:", A.join)
    if A.arrow is not None:
        block("arrow:", A.arrow)
    if A.top is not None:
        out.append(f"top: {A.names[A.top]}")
    if A.bottom is not None:
        out.append(f"bottom: {A.names[A.bottom]}")
    return "\n".join(out) + "\n"


def parse_poset_file(text: str) -> Poset:
    """Parse ``points:`` followed by ``leq:`` rows of 0/1."""
    lines = list(_significant_lines(text))
    if not lines:
        raise ParseError(1, 1, "empty poset document")
    lineno, raw = lines[0]
    head, _, rest = raw.partition(":")
    if head.strip() != "points":
        raise ParseError(lineno, 1, "expected 'points:' section")
    points = rest.split()
    if not points:
        raise ParseError(lineno, 1, "no points declared")
    if len(lines) < 2 or lines[1][1].partition(":")[0].strip() != "leq":
        raise ParseError(lineno, 1, "expected 'leq:' section")
    rows = []
    k = len(points)
    if len(lines) != 2 + k:
        raise ParseError(lines[-1][0], 1, f"expected {k} relation rows")
    for rowno, raw in lines[2:]:
        cells = raw.split()
        if len(cells) != k or any(c not in ("0", "1") for c in cells):
            raise ParseError(rowno, 1, f"expected {k} entries of 0/1")
        rows.append([c == "1" for c in cells])
    return Poset(tuple(points), np.array(rows, dtype=bool))


# ---------------------------------------------------------------------------
# Reports


@dataclass
class ReportEntry:
    name: str
    verdict: str
    witness: tuple[str, ...] = ()
    checked: int | None = None
    lhs: str | None = None
    rhs: str | None = None
    detail: str = ""


@dataclass
class Report:
    """Deterministic, diffable record of one command run."""

    command: str
    input_digest: str
    entries: list[ReportEntry] = field(default_factory=list)
    payload: str = ""
    overall: str = "PASS"

    def add(self, entry: ReportEntry) -> None:
        self.entries.append(entry)

    def settle(self, gating: set[str] | None = None) -> None:
        """Compute the overall verdict; with ``gating`` only those entries
        decide, everything else is informational classification."""
        relevant = [
            e for e in self.entries if (gating is None or e.name in gating) and e.verdict != "skipped"
        ]
        if any(e.verdict == "fails" for e in relevant):
            self.overall = "FAIL"


def _entry_tokens(e: ReportEntry) -> list[str]:
    parts = [f"name={e.name}", f"verdict={e.verdict}"]
    if e.checked is not None:
        parts.append(f"checked={e.checked}")
    if e.witness:
        parts.append("witness=" + ",".join(e.witness))
    if e.lhs is not None:
        parts.append(f"lhs={e.lhs}")
    if e.rhs is not None:
        parts.append(f"rhs={e.rhs}")
    if e.detail:
        parts.append(f"detail={e.detail.replace(' ', '_')}")
    return parts


def emit_report(report: Report, fmt: str = "text") -> bytes:
    lines: list[str] = []
    if fmt == "machine":
        lines.append(f"ARTIFACT: {VERSION}")
        lines.append(f"COMMAND: {report.command}")
        lines.append(f"INPUT: {report.input_digest}")
        for e in report.entries:
            lines.append("CHECK: " + " ".join(_entry_tokens(e)))
        if report.payload:
            for payload_line in report.payload.rstrip("\n").split("\n"):
                lines.append("OUT: " + payload_line)
        lines.append(f"VERDICT: {report.overall}")
    else:
        lines.append(VERSION)
        lines.append(f"command: {report.command}")
        lines.append(f"input: {report.input_digest}")
        mark = {"holds": "ok", "fails": "XX", "skipped": "--", "info": "  ", "error": "!!"}
        for e in report.entries:
            extra = []
            if e.witness:
                extra.append("witness " + ",".join(e.witness))
            if e.lhs is not None:
                extra.append(f"lhs={e.lhs} rhs={e.rhs}")
            if e.detail:
                extra.append(e.detail)
            if e.checked:
                extra.append(f"{e.checked} tuples")
            suffix = ("  [" + "; ".join(extra) + "]") if extra else ""
            lines.append(f"  [{mark.get(e.verdict, '??')}] {e.name}{suffix}")
        if report.payload:
            lines.append(report.payload.rstrip("\n"))
        lines.append(f"VERDICT: {report.overall}")
    return ("\n".join(lines) + "\n").encode()


def _digest(data: bytes) -> str:
    return "sha256:" + hashlib.sha256(data).hexdigest()


def _witness_names(names, witness) -> tuple[str, ...]:
    out = []
    for w in witness or ():
        if isinstance(w, (int, np.integer)):
            out.append(names[int(w)])
        else:
            out.append(str(w))
    return tuple(out)


def _value_name(names, value) -> str | None:
    if value is None:
        return None
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, (int, np.integer)):
        return names[int(value)]
    return str(value)


def _entry_from_check(res: CheckResult, names) -> ReportEntry:
    return ReportEntry(
        name=res.name,
        verdict=res.verdict,
        witness=_witness_names(names, res.witness),
        checked=res.checked or None,
        lhs=_value_name(names, res.lhs_value),
        rhs=_value_name(names, res.rhs_value),
        detail=res.detail,
    )


def _add_property_report(report: Report, prop: PropertyReport) -> None:
    for res in prop.entries:
        report.add(_entry_from_check(res, prop.names))


def _add_outcome(report: Report, name: str, outcome, names) -> None:
    report.add(
        ReportEntry(
            name=name,
            verdict="holds" if outcome.ok else "fails",
            witness=_witness_names(names, outcome.witness),
            detail=outcome.detail,
        )
    )


# ---------------------------------------------------------------------------
# Commands


def _cmd_check(args, report: Report) -> None:
    A = parse_algebra_file(_read(args.file, report))
    prop = classify(A)
    _add_property_report(report, prop)
    if prop.holds("skew-lattice"):
        check_costrong_equivalence(A)
        report.add(ReportEntry("costrong-equivalence", "holds"))
    else:
        report.add(ReportEntry("costrong-equivalence", "skipped", detail="not a skew lattice"))
    report.settle(gating={"skew-lattice", "costrong-equivalence"})


def _arrow_payload(A: Algebra, table: np.ndarray) -> str:
    lines = ["arrow:"]
    for row in table:
        lines.append(" ".join(A.names[int(v)] for v in row))
    return "\n".join(lines) + "\n"


def _cmd_derive(args, report: Report) -> None:
    A = parse_algebra_file(_read(args.file, report))
    try:
        derived = derive_arrow(A.drop_arrow())
    except (NoTop, NotCoStronglyDistributive, PreconditionFailed) as exc:
        report.add(
            ReportEntry(
                "arrow-derivable", "fails", witness=_witness_names(A.names, exc.witness), detail=str(exc)
            )
        )
        report.settle()
        return
    if not derived:
        report.add(
            ReportEntry(
                "arrow-derivable",
                "fails",
                witness=_witness_names(A.names, (derived.offending_upset,)),
                detail="upset is not a Heyting algebra",
            )
        )
        report.settle()
        return
    report.add(ReportEntry("arrow-derivable", "holds"))
    _add_property_report(report, check_sh_axioms(A, derived.table))
    if A.arrow is not None:
        same = bool(np.array_equal(A.arrow, derived.table))
        report.add(ReportEntry("declared-arrow-matches", "holds" if same else "fails"))
    report.payload = _arrow_payload(A, derived.table)
    report.settle()


def _cmd_quotient(args, report: Report) -> None:
    A = parse_algebra_file(_read(args.file, report))
    D, L, R = greens(A)
    part = {"D": D, "L": L, "R": R}[args.rel]
    Q, _ = quotient(A, part)
    report.payload = emit_algebra_file(Q)
    report.settle()


def _cmd_model(args, report: Report) -> None:
    bound = args.bound
    if args.kind == "pfn":
        A = models.partial_function_algebra(args.x, args.y, bound=bound)
    elif args.kind == "sections":
        fibers = [int(v) for v in args.fibers.split(",")]
        base = models.default_point_names(args.base)
        model = SurjectionModel.from_fiber_sizes(base, fibers)
        A = models.sections_algebra(model, bound=bound)
    elif args.kind == "poset-sections":
        P = parse_poset_file(_read(args.posetfile, report))
        fibers = [int(v) for v in args.fibers.split(",")]
        model = SurjectionModel.from_fiber_sizes(P, fibers)
        A = models.poset_sections_algebra(model, bound=bound)
    else:  # upsets
        P = parse_poset_file(_read(args.posetfile, report))
        A = models.upset_heyting(P)
    report.payload = emit_algebra_file(A)
    report.settle()


def _cmd_verify(args, report: Report) -> None:
    A = parse_algebra_file(_read(args.file, report))
    prop = classify(A)
    for name in ("skew-lattice", "co-strongly-distributive", "symmetric", "conormal", "quasi-distributive"):
        report.add(_entry_from_check(prop[name], prop.names))
    if not prop.holds("skew-lattice"):
        report.settle()
        return
    check_costrong_equivalence(A)
    report.add(ReportEntry("costrong-equivalence", "holds"))
    if A.top is None or not prop.holds("co-strongly-distributive"):
        report.add(
            ReportEntry(
                "arrow-derivable",
                "fails",
                detail="needs a co-strongly distributive skew lattice with top",
            )
        )
        report.settle()
        return

    derived = derive_arrow(A.drop_arrow())
    if not derived:
        report.add(
            ReportEntry(
                "arrow-derivable",
                "fails",
                witness=_witness_names(A.names, (derived.offending_upset,)),
                detail="upset is not a Heyting algebra",
            )
        )
        report.settle()
        return
    report.add(ReportEntry("arrow-derivable", "holds"))
    arrow = derived.table
    if A.arrow is not None:
        same = bool(np.array_equal(A.arrow, arrow))
        report.add(ReportEntry("declared-arrow-matches", "holds" if same else "fails"))
    _add_property_report(report, check_sh_axioms(A, arrow))
    _add_outcome(report, "SHA", check_sha(A, arrow), A.names)
    _add_outcome(report, "imp-or", check_imp_or(A, arrow), A.names)
    _add_outcome(report, "lifting", check_lifting(A), A.names)
    _add_outcome(report, "arrow-congruences", check_arrow_congruences(A, arrow), A.names)
    _add_property_report(report, special_case_arrows(A, arrow))
    _add_outcome(report, "pullback", pullback_check(A), A.names)
    report.settle()


def _property_result(A: Algebra, prop_name: str) -> CheckResult:
    rep = classify(A)
    return rep[prop_name]


def _search_eval(task):
    index, desc, prop_name, negate = task
    alg = build_instance(desc).drop_arrow()
    res = _property_result(alg, prop_name)
    hit = (not res.holds) if negate else res.holds
    return index, hit, res.witness, res.detail, alg.names


def _cmd_search(args, report: Report) -> None:
    from .properties import PROPERTY_NAMES

    if args.property not in PROPERTY_NAMES:
        raise argparse.ArgumentTypeError(
            f"unknown property {args.property!r}; choose from {', '.join(PROPERTY_NAMES)}"
        )
    stream = search_family(args.family, args.max_size)
    tasks = [(i, desc, args.property, args.negate) for i, (label, desc) in enumerate(stream)]
    found = None
    if args.jobs > 1 and len(tasks) > 1:
        with ProcessPoolExecutor(max_workers=args.jobs) as pool:
            for result in pool.map(_search_eval, tasks, chunksize=4):
                if result[1]:
                    found = result
                    break
    else:
        for task in tasks:
            result = _search_eval(task)
            if result[1]:
                found = result
                break
    target = f"not:{args.property}" if args.negate else args.property
    if found is None:
        report.add(
            ReportEntry(
                "search",
                "holds",
                checked=len(tasks),
                detail=f"family={args.family} target={target} exhausted",
            )
        )
    else:
        index, _, witness, detail, names = found
        label = stream[index][0]
        report.add(
            ReportEntry(
                "search",
                "fails",
                witness=(label,),
                checked=index + 1,
                detail=f"family={args.family} target={target}",
            )
        )
        report.add(
            ReportEntry(
                args.property,
                "fails" if args.negate else "holds",
                witness=_witness_names(names, witness),
                detail=detail or f"on instance {label}",
            )
        )
    report.settle(gating={"search"})


def _read(path: str, report: Report) -> str:
    try:
        with open(path, "rb") as fh:
            data = fh.read()
    except OSError as exc:
        raise ParseError(0, 0, f"cannot read {path}: {exc.strerror}")
    report.input_digest = _digest(data)
    return data.decode()


# ---------------------------------------------------------------------------
# Driver


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="skewbench", add_help=True)
    parser.add_argument("--format", choices=("text", "machine"), default="text")
    parser.add_argument("--bound", type=int, default=10000, help="global size bound for models")
    parser.add_argument("--jobs", type=int, default=1, help="parallelism degree for search")
    sub = parser.add_subparsers(dest="command")

    p = sub.add_parser("check", help="classify an algebra file")
    p.add_argument("file")

    p = sub.add_parser("derive", help="derive the implication table")
    p.add_argument("file")

    p = sub.add_parser("quotient", help="quotient by a Green's relation")
    p.add_argument("file")
    p.add_argument("--rel", choices=("D", "L", "R"), required=True)

    p = sub.add_parser("model", help="emit a generated model as an algebra file")
    msub = p.add_subparsers(dest="kind", required=True)
    m = msub.add_parser("pfn")
    m.add_argument("--x", type=int, required=True)
    m.add_argument("--y", type=int, required=True)
    m = msub.add_parser("sections")
    m.add_argument("--base", type=int, required=True)
    m.add_argument("--fibers", required=True, help="comma separated fiber sizes")
    m = msub.add_parser("poset-sections")
    m.add_argument("posetfile")
    m.add_argument("--fibers", required=True)
    m = msub.add_parser("upsets")
    m.add_argument("posetfile")

    p = sub.add_parser("verify", help="run the full theorem suite")
    p.add_argument("file")

    p = sub.add_parser("search", help="scan a family for instances matching a property")
    p.add_argument("--family", choices=("pfn", "sections", "enum"), required=True)
    p.add_argument("--max-size", type=int, required=True)
    p.add_argument("--property", required=True)
    p.add_argument("--negate", action="store_true", help="hunt instances where the property fails")
    return parser


_HANDLERS = {
    "check": _cmd_check,
    "derive": _cmd_derive,
    "quotient": _cmd_quotient,
    "model": _cmd_model,
    "verify": _cmd_verify,
    "search": _cmd_search,
}


def run_command(argv) -> tuple[int, bytes]:
    """Execute one CLI invocation; returns (exit status, report bytes)."""
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        if exc.code in (0, None):  # --help
            return _EXIT_PASS, b""
        return _EXIT_USAGE, b"VERDICT: USAGE\n"
    if args.command is None:
        return _EXIT_USAGE, parser.format_usage().encode() + b"VERDICT: USAGE\n"

    report = Report(command=args.command, input_digest="sha256:-")
    if args.command == "model":
        seed = f"model {args.kind} {sorted(vars(args).items())!r}".encode()
        report.input_digest = _digest(seed)
    if args.command == "search":
        seed = f"search {args.family} {args.max_size} {args.property} {args.negate}".encode()
        report.input_digest = _digest(seed)

    try:
        _HANDLERS[args.command](args, report)
    except (ParseError, MalformedTable, BadConstant, BadPoset, TooLarge, argparse.ArgumentTypeError) as exc:
        report.entries = [ReportEntry("input", "error", detail=str(exc))]
        report.overall = "USAGE"
        return _EXIT_USAGE, emit_report(report, args.format)
    except InconsistencyDetected as exc:
        report.add(ReportEntry("inconsistency", "error", detail=str(exc)))
        report.overall = "INCONSISTENT"
        return _EXIT_INCONSISTENT, emit_report(report, args.format)
    except SkewbenchError as exc:
        report.add(
            ReportEntry(type(exc).__name__, "fails", detail=str(exc))
        )
        report.overall = "FAIL"
        return _EXIT_FAIL, emit_report(report, args.format)

    status = _EXIT_PASS if report.overall == "PASS" else _EXIT_FAIL
    if args.command in ("model", "quotient") and report.overall == "PASS":
        # artifact-producing commands emit a bare, re-parseable algebra file
        return status, report.payload.encode()
    return status, emit_report(report, args.format)


def main() -> int:
    status, out = run_command(sys.argv[1:])
    sys.stdout.buffer.write(out)
    return status


if __name__ == "__main__":
    raise SystemExit(main())
