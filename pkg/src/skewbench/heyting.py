"""Heyting and generalized Heyting structure on finite commutative lattices.

The candidate-set construction in :func:`heyting_arrow` is THE oracle: every
other arrow computation in the workbench must agree with it wherever both
are defined.  Maximum detection computes all maximal elements of the
candidate set so that a failed pair yields counterexample data for free.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import Algebra, leq_matrix, subalgebra
from .errors import AmbiguousDiff, InconsistencyDetected
from .identities import Check, run_check, skipped_result
from .properties import PropertyReport


def _m(a, b):
    return ("m", a, b)


def _j(a, b):
    return ("j", a, b)


def _r(a, b):
    return ("r", a, b)


@dataclass(frozen=True)
class ArrowResult:
    """Arrow table, or absence with the offending pair and its maximal
    candidates (two or more incomparable maxima witness non-distributivity)."""

    table: np.ndarray | None
    offending: tuple[int, int] | None = None
    maximal: tuple[int, ...] = ()

    def __bool__(self) -> bool:
        return self.table is not None


@dataclass(frozen=True)
class DiffResult:
    """Dual difference table, or absence with the first unsolvable pair."""

    table: np.ndarray | None
    offending: tuple[int, int] | None = None

    def __bool__(self) -> bool:
        return self.table is not None


def _arrow_by_candidates(L: Algebra) -> ArrowResult:
    n = L.n
    M = L.meet
    leq = leq_matrix(L)
    lt = leq & ~np.eye(n, dtype=bool)
    table = np.zeros((n, n), dtype=np.int16)
    for y in range(n):
        cand_by_z = leq[M[:, y], :]  # [x, z] iff x∧y ≤ z
        for z in range(n):
            cand = np.flatnonzero(cand_by_z[:, z])
            maximal = [int(c) for c in cand if not lt[c, cand].any()]
            if len(maximal) != 1:
                return ArrowResult(None, (y, z), tuple(maximal))
            table[y, z] = maximal[0]
    table.setflags(write=False)
    return ArrowResult(table)


def heyting_arrow(L: Algebra) -> ArrowResult:
    """Relative pseudocomplement table: y→z is the maximum of {x : x∧y ≤ z}.

    Absence (some candidate set has no maximum) is a value, not an error,
    and pinpoints where distributivity fails.
    """
    return _arrow_by_candidates(L)


def generalized_heyting_arrow(L: Algebra) -> ArrowResult:
    """Arrow on a distributive lattice with top but possibly no bottom.

    Beyond the candidate-set construction this verifies that every upset u↑
    forms a Heyting algebra, which is the structural reason the arrow exists.
    """
    res = _arrow_by_candidates(L)
    if not res:
        return res
    leq = leq_matrix(L)
    for u in range(L.n):
        members = [int(x) for x in np.flatnonzero(leq[u])]
        sub, _ = subalgebra(L, members, bottom=members.index(u))
        sub_arrow = _arrow_by_candidates(sub)
        if not sub_arrow:
            raise InconsistencyDetected(
                f"global arrow exists but upset at {L.names[u]} is not a Heyting algebra",
                witness=(u,) + (sub_arrow.offending or ()),
            )
    return res


def check_heyting_axioms(L: Algebra, arrow) -> PropertyReport:
    """Verdicts for the Heyting axioms, the adjunction and the reduction
    x→y = (x∨y)→y, each quantified exhaustively."""
    R = np.asarray(arrow)
    tables = {"m": L.meet, "j": L.join, "r": R}
    rels = {"leq": leq_matrix(L)}
    entries = []
    if L.top is not None:
        entries.append(run_check(Check("H1", 1, _r(0, 0), ("c", L.top)), tables))
    else:
        entries.append(skipped_result("H1", "no top declared"))
    entries.append(run_check(Check("H2", 2, _m(0, _r(0, 1)), _m(0, 1)), tables))
    entries.append(run_check(Check("H3", 2, _m(1, _r(0, 1)), 1), tables))
    entries.append(run_check(Check("H4", 3, _r(0, _m(1, 2)), _m(_r(0, 1), _r(0, 2))), tables))
    entries.append(run_check(Check("HA", 3, ("leq", _m(0, 1), 2), ("leq", 0, _r(1, 2))), tables, rels))
    entries.append(run_check(Check("arrow-join-reduction", 2, _r(0, 1), _r(_j(0, 1), 1)), tables))
    return PropertyReport(tuple(entries), L.names)


def dual_gb_diff(L: Algebra) -> DiffResult:
    """Solve the dual difference entrywise from its defining identities:
    (y∨x∨y)∨(y∖∖x) = 1 = (y∖∖x)∨(y∨x∨y) and (y∨x∨y)∧(y∖∖x) = y = the
    reverse.  On commutative carriers the sandwich collapses to y∨x.

    Exactly one candidate per pair gives the table; none gives absence; two
    or more raise AmbiguousDiff, which signals non-distributivity.
    """
    n = L.n
    M, J, top = L.meet, L.join, L.top
    if top is None:
        return DiffResult(None, (0, 0))
    table = np.zeros((n, n), dtype=np.int16)
    for y in range(n):
        for x in range(n):
            s = int(J[J[y, x], y])
            cond = (J[s, :] == top) & (J[:, s] == top) & (M[s, :] == y) & (M[:, s] == y)
            cands = np.flatnonzero(cond)
            if len(cands) == 0:
                return DiffResult(None, (y, x))
            if len(cands) > 1:
                raise AmbiguousDiff(
                    f"two dual-difference candidates for ({L.names[y]} ∖∖ {L.names[x]}): "
                    f"{[L.names[int(c)] for c in cands]}",
                    witness=(y, x) + tuple(int(c) for c in cands),
                )
            table[y, x] = int(cands[0])
    table.setflags(write=False)
    return DiffResult(table)
