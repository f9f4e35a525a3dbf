"""Vectorized evaluation of quantified identities over operation tables.

Terms are nested tuples over variable indices: an ``int`` is a variable,
``("c", e)`` a constant element, ``(op, s, t)`` applies a binary table
(``"m"``, ``"j"``, ``"r"``) or a boolean relation (``"leq"``, ``"pre"``),
and ``("eq", s, t)`` compares two value terms.  A check compares its two
sides over the full tuple space; witnesses are the lexicographically first
failing tuple, independent of any evaluation chunking.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

_CHUNK_LIMIT = 2_000_000
_BOOL_OPS = ("leq", "pre")


@dataclass(frozen=True)
class Check:
    """A single universally quantified (in)equation."""

    name: str
    arity: int
    lhs: object
    rhs: object


@dataclass(frozen=True)
class CheckResult:
    name: str
    holds: bool
    witness: tuple[int, ...] | None
    checked: int
    lhs_value: object = None
    rhs_value: object = None
    detail: str = ""
    skipped: bool = False

    @property
    def verdict(self) -> str:
        if self.skipped:
            return "skipped"
        return "holds" if self.holds else "fails"


def skipped_result(name: str, detail: str = "") -> CheckResult:
    """Placeholder entry for a check that does not apply to the instance."""
    return CheckResult(name, True, None, 0, detail=detail, skipped=True)


def _eval(term, tables, rels, varr):
    if isinstance(term, int):
        return varr[term]
    op = term[0]
    if op == "c":
        return term[1]
    a = _eval(term[1], tables, rels, varr)
    b = _eval(term[2], tables, rels, varr)
    if op == "eq":
        return a == b
    if op in _BOOL_OPS:
        return rels[op][a, b]
    return tables[op][a, b]


def _axes(n: int, start: int, count: int, total: int):
    out = []
    for i in range(count):
        shape = [1] * total
        shape[i] = n
        out.append(np.arange(n, dtype=np.intp).reshape(shape))
    return out


def _scalar_eval(check, tables, rels, point):
    lhs = _eval(check.lhs, tables, rels, point)
    rhs = _eval(check.rhs, tables, rels, point)
    return lhs, rhs


def run_check(check: Check, tables, rels=None) -> CheckResult:
    """Evaluate a check exhaustively; chunks over the first variable when the
    tuple space is large so memory stays bounded."""
    rels = rels or {}
    n = next(iter(tables.values())).shape[0]
    k = check.arity
    total = n**k

    def finish(witness):
        if witness is None:
            return CheckResult(check.name, True, None, total)
        lhs, rhs = _scalar_eval(check, tables, rels, witness)
        return CheckResult(check.name, False, witness, total, _plain(lhs), _plain(rhs))

    if k == 0:
        lhs, rhs = _scalar_eval(check, tables, rels, ())
        ok = bool(np.all(lhs == rhs))
        return CheckResult(check.name, ok, None if ok else (), 1, _plain(lhs), _plain(rhs))

    if total <= _CHUNK_LIMIT or k == 1:
        varr = _axes(n, 0, k, k)
        lhs = _eval(check.lhs, tables, rels, varr)
        rhs = _eval(check.rhs, tables, rels, varr)
        mask = np.broadcast_to(lhs != rhs, (n,) * k)
        if not mask.any():
            return finish(None)
        flat = int(np.argmax(mask))
        return finish(tuple(int(v) for v in np.unravel_index(flat, (n,) * k)))

    tail = _axes(n, 1, k - 1, k - 1)
    for x0 in range(n):
        varr = [x0] + tail
        lhs = _eval(check.lhs, tables, rels, varr)
        rhs = _eval(check.rhs, tables, rels, varr)
        mask = np.broadcast_to(lhs != rhs, (n,) * (k - 1))
        if mask.any():
            flat = int(np.argmax(mask))
            rest = np.unravel_index(flat, (n,) * (k - 1))
            return finish((x0, *(int(v) for v in rest)))
    return finish(None)


def run_group(name: str, checks, tables, rels=None) -> CheckResult:
    """Run several checks as one named property; the first failure wins and
    its sub-check name is recorded in the detail field."""
    checked = 0
    for chk in checks:
        res = run_check(chk, tables, rels)
        checked += res.checked
        if not res.holds:
            return CheckResult(
                name, False, res.witness, checked, res.lhs_value, res.rhs_value, detail=chk.name
            )
    return CheckResult(name, True, None, checked)


def _plain(value):
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    return value
