"""Finite double-band algebras as operation tables.

Elements are dense integer indices; display names ride along as a sidecar
tuple.  Operation tables are the single source of truth: orders, Green's
relations and everything derived from them are always recomputed from the
tables, never stored authoritatively.  Algebra values are immutable after
construction and every function here is pure, so values may be shared
freely between threads.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .errors import (
    BadConstant,
    CostaMismatch,
    MalformedTable,
    NotACongruence,
    NotComposable,
    TooLarge,
)

_DTYPE = np.int16


def _freeze(arr: np.ndarray) -> np.ndarray:
    out = np.ascontiguousarray(arr, dtype=_DTYPE)
    out.setflags(write=False)
    return out


@dataclass(frozen=True)
class CheckOutcome:
    """Boolean verdict with an optional witness tuple and free-form detail."""

    ok: bool
    witness: tuple = ()
    detail: str = ""

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True, eq=False)
class Algebra:
    """A finite algebra with total meet and join tables, an optional arrow
    table, and optional distinguished top and bottom elements.

    Tables are read-only numpy arrays indexed ``table[x, y] == x op y``.
    Construct through :func:`make_algebra`, which validates shape, closure
    and the constant laws (algebraic laws such as associativity are opt-in
    classifications, so that non-examples can be held and dissected).
    """

    names: tuple[str, ...]
    meet: np.ndarray
    join: np.ndarray
    arrow: np.ndarray | None = None
    top: int | None = None
    bottom: int | None = None

    @property
    def n(self) -> int:
        return len(self.names)

    def index(self, name: str) -> int:
        return self.names.index(name)

    def name_tuple(self, indices) -> tuple[str, ...]:
        return tuple(self.names[int(i)] for i in indices)

    def tables(self) -> dict[str, np.ndarray]:
        ops = {"m": self.meet, "j": self.join}
        if self.arrow is not None:
            ops["r"] = self.arrow
        return ops

    def with_arrow(self, arrow) -> "Algebra":
        table = _coerce_table(arrow, self.names, "arrow")
        return Algebra(self.names, self.meet, self.join, table, self.top, self.bottom)

    def drop_arrow(self) -> "Algebra":
        if self.arrow is None:
            return self
        return Algebra(self.names, self.meet, self.join, None, self.top, self.bottom)

    def __eq__(self, other) -> bool:
        if not isinstance(other, Algebra):
            return NotImplemented
        if self.names != other.names or self.top != other.top or self.bottom != other.bottom:
            return False
        if (self.arrow is None) != (other.arrow is None):
            return False
        same = np.array_equal(self.meet, other.meet) and np.array_equal(self.join, other.join)
        if same and self.arrow is not None:
            same = np.array_equal(self.arrow, other.arrow)
        return same

    def __repr__(self) -> str:
        consts = []
        if self.top is not None:
            consts.append(f"top={self.names[self.top]}")
        if self.bottom is not None:
            consts.append(f"bottom={self.names[self.bottom]}")
        arrow = ", arrow" if self.arrow is not None else ""
        extra = (", " + ", ".join(consts)) if consts else ""
        return f"Algebra(n={self.n}{arrow}{extra})"


def _coerce_table(table, names: tuple[str, ...], label: str) -> np.ndarray:
    n = len(names)
    lookup = {name: i for i, name in enumerate(names)}
    rows = list(table)
    if len(rows) != n:
        raise MalformedTable(f"{label} table has {len(rows)} rows, expected {n}")
    out = np.empty((n, n), dtype=_DTYPE)
    for i, row in enumerate(rows):
        cells = list(row)
        if len(cells) != n:
            raise MalformedTable(f"{label} table row {i} has {len(cells)} entries, expected {n}")
        for k, cell in enumerate(cells):
            if isinstance(cell, str):
                if cell not in lookup:
                    raise MalformedTable(f"{label}[{i}][{k}]: unknown element {cell!r}")
                out[i, k] = lookup[cell]
            else:
                v = int(cell)
                if not 0 <= v < n:
                    raise MalformedTable(f"{label}[{i}][{k}]: index {v} out of range")
                out[i, k] = v
    return _freeze(out)


def _coerce_element(value, names: tuple[str, ...], label: str) -> int:
    if isinstance(value, str):
        if value not in names:
            raise MalformedTable(f"{label}: unknown element {value!r}")
        return names.index(value)
    v = int(value)
    if not 0 <= v < len(names):
        raise MalformedTable(f"{label}: index {v} out of range")
    return v


def make_algebra(names, meet, join, top=None, bottom=None, arrow=None) -> Algebra:
    """Build a validated :class:`Algebra` from element names and tables.

    Table entries may be element names or indices.  Validation covers shape,
    closure and the top/bottom absorption laws only.
    """
    names = tuple(str(x) for x in names)
    if not names:
        raise MalformedTable("carrier is empty")
    if len(set(names)) != len(names):
        raise MalformedTable("element names are not unique")
    for name in names:
        if not name or any(ch.isspace() for ch in name) or name.startswith("#"):
            raise MalformedTable(f"invalid element name {name!r}")
    meet_t = _coerce_table(meet, names, "meet")
    join_t = _coerce_table(join, names, "join")
    arrow_t = _coerce_table(arrow, names, "arrow") if arrow is not None else None
    top_i = _coerce_element(top, names, "top") if top is not None else None
    bottom_i = _coerce_element(bottom, names, "bottom") if bottom is not None else None

    n = len(names)
    idx = np.arange(n)
    if top_i is not None:
        t = top_i
        if not ((join_t[:, t] == t).all() and (join_t[t, :] == t).all()):
            raise BadConstant(f"top {names[t]!r} fails x∨top = top = top∨x")
        if not ((meet_t[:, t] == idx).all() and (meet_t[t, :] == idx).all()):
            raise BadConstant(f"top {names[t]!r} fails x∧top = x = top∧x")
    if bottom_i is not None:
        b = bottom_i
        if not ((meet_t[:, b] == b).all() and (meet_t[b, :] == b).all()):
            raise BadConstant(f"bottom {names[b]!r} fails x∧bot = bot = bot∧x")
        if not ((join_t[:, b] == idx).all() and (join_t[b, :] == idx).all()):
            raise BadConstant(f"bottom {names[b]!r} fails x∨bot = x = bot∨x")
    return Algebra(names, meet_t, join_t, arrow_t, top_i, bottom_i)


def subalgebra(A: Algebra, elements, top=None, bottom=None) -> tuple[Algebra, dict[int, int]]:
    """Restrict ``A`` to a subset closed under its operations.

    Returns the sub-algebra together with the global-to-local index map.
    Declared constants are inherited when they fall inside the subset unless
    overridden explicitly.
    """
    members = sorted(int(e) for e in elements)
    local = {g: i for i, g in enumerate(members)}
    sel = np.array(members)
    for label, table in A.tables().items():
        sub = table[np.ix_(sel, sel)]
        outside = [v for v in np.unique(sub) if int(v) not in local]
        if outside:
            raise MalformedTable(f"subset not closed under {label}: reaches {A.names[int(outside[0])]}")
    names = A.name_tuple(members)
    remap = np.full(A.n, -1, dtype=_DTYPE)
    remap[sel] = np.arange(len(members), dtype=_DTYPE)
    meet = remap[A.meet[np.ix_(sel, sel)]]
    join = remap[A.join[np.ix_(sel, sel)]]
    arrow = remap[A.arrow[np.ix_(sel, sel)]] if A.arrow is not None else None
    if top is None and A.top is not None and A.top in local:
        top = local[A.top]
    if bottom is None and A.bottom is not None and A.bottom in local:
        bottom = local[A.bottom]
    return make_algebra(names, meet, join, top=top, bottom=bottom, arrow=arrow), local


# ---------------------------------------------------------------------------
# Derived orders


def leq_matrix(A: Algebra) -> np.ndarray:
    """Natural partial order: x ≤ y iff x∨y = y = y∨x."""
    J = A.join
    col = np.arange(A.n)[None, :]
    return np.asarray((J == col) & (J.T == col))


def preceq_matrix(A: Algebra) -> np.ndarray:
    """Natural preorder: x ⪯ y iff y∨x∨y = y."""
    J = A.join
    col = np.arange(A.n)[None, :]
    yxy = J[J.T, np.broadcast_to(col, J.shape)]
    return np.asarray(yxy == col)


def natural_orders(A: Algebra) -> tuple[np.ndarray, np.ndarray]:
    """Return (≤, ⪯) as boolean matrices, cross-checking the three
    equivalent characterizations of ≤ (join form, x∨y∨x = y, y∧x∧y = x).
    """
    n = A.n
    row = np.arange(n)[:, None]
    col = np.arange(n)[None, :]
    leq = leq_matrix(A)
    form2 = A.join[A.join, np.broadcast_to(row, (n, n))] == col
    form3 = A.meet[A.meet.T, np.broadcast_to(col, (n, n))] == row
    bad = (leq != form2) | (leq != form3)
    if bad.any():
        x, y = np.unravel_index(int(np.argmax(bad)), bad.shape)
        raise CostaMismatch(
            f"order characterizations disagree at ({A.names[x]}, {A.names[y]}); "
            "input is not a skew lattice",
            witness=(int(x), int(y)),
        )
    return leq, preceq_matrix(A)


# ---------------------------------------------------------------------------
# Partitions and Green's relations


@dataclass(frozen=True)
class Partition:
    """Equivalence partition of a carrier; blocks are sorted by least member."""

    blocks: tuple[tuple[int, ...], ...]
    block_of: tuple[int, ...]

    @property
    def n(self) -> int:
        return len(self.block_of)

    @property
    def num_blocks(self) -> int:
        return len(self.blocks)

    @classmethod
    def from_blocks(cls, blocks, n: int) -> "Partition":
        norm = sorted(tuple(sorted(int(x) for x in blk)) for blk in blocks)
        seen: list[int] = []
        for blk in norm:
            if not blk:
                raise ValueError("empty block")
            seen.extend(blk)
        if sorted(seen) != list(range(n)):
            raise ValueError("blocks do not partition the carrier")
        block_of = [0] * n
        for i, blk in enumerate(norm):
            for x in blk:
                block_of[x] = i
        return cls(tuple(norm), tuple(block_of))

    @classmethod
    def from_relation(cls, rel: np.ndarray) -> "Partition":
        n = rel.shape[0]
        if not rel.diagonal().all():
            x = int(np.argmin(rel.diagonal()))
            raise ValueError(f"relation not reflexive at {x}")
        if not np.array_equal(rel, rel.T):
            raise ValueError("relation not symmetric")
        comp = (rel.astype(np.uint8) @ rel.astype(np.uint8)) > 0
        if (comp & ~rel).any():
            x, y = np.unravel_index(int(np.argmax(comp & ~rel)), rel.shape)
            raise ValueError(f"relation not transitive at ({x}, {y})")
        blocks = []
        done = set()
        for x in range(n):
            if x in done:
                continue
            blk = tuple(int(v) for v in np.flatnonzero(rel[x]))
            done.update(blk)
            blocks.append(blk)
        return cls.from_blocks(blocks, n)

    @classmethod
    def singletons(cls, n: int) -> "Partition":
        return cls.from_blocks([(i,) for i in range(n)], n)

    def same(self, x: int, y: int) -> bool:
        return self.block_of[x] == self.block_of[y]


def _bool_compose(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    return (a.astype(np.uint8) @ b.astype(np.uint8)) > 0


def greens(A: Algebra) -> tuple[Partition, Partition, Partition]:
    """Green's relations (D, L, R) as partitions.

    Verifies on the instance that the meet and join characterizations of L
    and R agree and that L∘R = R∘L = D; a failure signals that the input is
    not a skew lattice.
    """
    M, J = A.meet, A.join
    n = A.n
    row = np.arange(n)[:, None]
    col = np.arange(n)[None, :]

    p1 = M == row  # x∧y = x
    Lrel = p1 & p1.T
    q1 = J == col  # x∨y = y
    Lor = q1 & q1.T
    s1 = M == col  # x∧y = y
    Rrel = s1 & s1.T
    t1 = J == row  # x∨y = x
    Ror = t1 & t1.T
    for label, a, b in (("L", Lrel, Lor), ("R", Rrel, Ror)):
        if not np.array_equal(a, b):
            x, y = np.unravel_index(int(np.argmax(a != b)), a.shape)
            raise NotComposable(
                f"meet and join forms of {label} disagree at ({A.names[x]}, {A.names[y]})",
                witness=(int(x), int(y)),
            )

    pre = preceq_matrix(A)
    Drel = pre & pre.T
    lr = _bool_compose(Lrel, Rrel)
    rl = _bool_compose(Rrel, Lrel)
    if not (np.array_equal(lr, Drel) and np.array_equal(rl, Drel)):
        bad = (lr != Drel) | (rl != Drel)
        x, y = np.unravel_index(int(np.argmax(bad)), bad.shape)
        raise NotComposable(
            f"L∘R = R∘L = D fails at ({A.names[x]}, {A.names[y]})",
            witness=(int(x), int(y)),
        )
    try:
        D = Partition.from_relation(Drel)
        L = Partition.from_relation(Lrel)
        R = Partition.from_relation(Rrel)
    except ValueError as exc:
        raise NotComposable(f"Green's relation is not an equivalence: {exc}") from exc
    return D, L, R


def is_congruence(A: Algebra, partition: Partition) -> CheckOutcome:
    """Check that a partition respects every operation table present.

    A failing outcome carries a witness ``(op, a, b, c, d)`` with a ≈ c and
    b ≈ d but op(a,b) not ≈ op(c,d); the pair (a, b) is the lexicographically
    first violation against block representatives.
    """
    bof = np.array(partition.block_of)
    reps = np.array([blk[0] for blk in partition.blocks])
    for label, table in A.tables().items():
        classes = bof[table]
        expected = classes[np.ix_(reps, reps)][np.ix_(bof, bof)]
        bad = classes != expected
        if bad.any():
            a, b = np.unravel_index(int(np.argmax(bad)), bad.shape)
            c, d = int(reps[bof[a]]), int(reps[bof[b]])
            name = {"m": "meet", "j": "join", "r": "arrow"}[label]
            return CheckOutcome(False, witness=(name, int(a), int(b), c, d))
    return CheckOutcome(True)


@dataclass(frozen=True, eq=False)
class HomMap:
    """Total map between algebras that preserves the shared operations and
    any constants declared on both sides; validated at construction."""

    source: Algebra
    target: Algebra
    mapping: tuple[int, ...]

    def __post_init__(self):
        src, tgt = self.source, self.target
        if len(self.mapping) != src.n:
            raise ValueError("mapping length does not match source carrier")
        mp = np.array(self.mapping)
        if mp.size and not (0 <= mp.min() and mp.max() < tgt.n):
            raise ValueError("mapping hits elements outside the target carrier")
        pairs = [("meet", src.meet, tgt.meet), ("join", src.join, tgt.join)]
        if src.arrow is not None and tgt.arrow is not None:
            pairs.append(("arrow", src.arrow, tgt.arrow))
        for label, ts, tt in pairs:
            if not np.array_equal(mp[ts], tt[np.ix_(mp, mp)]):
                bad = mp[ts] != tt[np.ix_(mp, mp)]
                x, y = np.unravel_index(int(np.argmax(bad)), bad.shape)
                raise ValueError(f"map does not preserve {label} at ({x}, {y})")
        if src.top is not None and tgt.top is not None and self.mapping[src.top] != tgt.top:
            raise ValueError("map does not preserve top")
        if src.bottom is not None and tgt.bottom is not None and self.mapping[src.bottom] != tgt.bottom:
            raise ValueError("map does not preserve bottom")

    def __call__(self, i: int) -> int:
        return self.mapping[i]

    def is_bijective(self) -> bool:
        return self.source.n == self.target.n and len(set(self.mapping)) == self.source.n


def quotient(A: Algebra, partition: Partition) -> tuple[Algebra, HomMap]:
    """Quotient by a congruence; returns the block algebra and the projection.

    Blocks are named by their members and ordered by least member index so
    that output is deterministic.  When the partition is Green's D the result
    is verified commutative; failure signals a non-skew-lattice input.
    """
    cong = is_congruence(A, partition)
    if not cong:
        op, a, b, c, d = cong.witness
        raise NotACongruence(
            f"not a congruence: {op}({A.names[a]},{A.names[b]}) and "
            f"{op}({A.names[c]},{A.names[d]}) land in different blocks",
            witness=cong.witness,
        )
    bof = np.array(partition.block_of)
    reps = np.array([blk[0] for blk in partition.blocks])
    qnames = tuple("{" + ",".join(A.names[x] for x in blk) + "}" for blk in partition.blocks)
    qmeet = bof[A.meet[np.ix_(reps, reps)]]
    qjoin = bof[A.join[np.ix_(reps, reps)]]
    qarrow = bof[A.arrow[np.ix_(reps, reps)]] if A.arrow is not None else None
    qtop = int(bof[A.top]) if A.top is not None else None
    qbottom = int(bof[A.bottom]) if A.bottom is not None else None
    Q = make_algebra(qnames, qmeet, qjoin, top=qtop, bottom=qbottom, arrow=qarrow)

    pre = preceq_matrix(A)
    try:
        is_d = Partition.from_relation(pre & pre.T) == partition
    except ValueError:
        is_d = False
    if is_d:
        if not (np.array_equal(Q.meet, Q.meet.T) and np.array_equal(Q.join, Q.join.T)):
            raise NotComposable("quotient by D is not commutative; input is not a skew lattice")
    return Q, HomMap(A, Q, tuple(int(v) for v in bof))


def pullback_check(A: Algebra) -> CheckOutcome:
    """Check that A is the pullback of A/R and A/L over A/D.

    The canonical map a ↦ (R-class, L-class) is a homomorphism by
    construction, so only bijectivity onto the fibered product is tested.
    """
    D, L, R = greens(A)
    image = {}
    for a in range(A.n):
        key = (R.block_of[a], L.block_of[a])
        if key in image:
            return CheckOutcome(False, witness=(image[key], a), detail="canonical map not injective")
        image[key] = a
    d_of_r = [D.block_of[blk[0]] for blk in R.blocks]
    d_of_l = [D.block_of[blk[0]] for blk in L.blocks]
    for i, j in itertools.product(range(R.num_blocks), range(L.num_blocks)):
        if d_of_r[i] == d_of_l[j] and (i, j) not in image:
            return CheckOutcome(False, witness=(i, j), detail="fiber element not hit")
    return CheckOutcome(True)


def vertical_dual(A: Algebra) -> Algebra:
    """Interchange meet and join (and top with bottom); drops any arrow."""
    return Algebra(A.names, A.join, A.meet, None, top=A.bottom, bottom=A.top)


def direct_product(A: Algebra, B: Algebra) -> Algebra:
    """Componentwise product; constants are present iff both factors have them."""
    names = tuple(f"({a},{b})" for a in A.names for b in B.names)
    m = B.n

    def combine(ta, tb):
        big = ta.astype(np.int64)[:, None, :, None] * m + tb.astype(np.int64)[None, :, None, :]
        return big.reshape(A.n * m, A.n * m)

    meet = combine(A.meet, B.meet)
    join = combine(A.join, B.join)
    arrow = combine(A.arrow, B.arrow) if A.arrow is not None and B.arrow is not None else None
    top = A.top * m + B.top if A.top is not None and B.top is not None else None
    bottom = A.bottom * m + B.bottom if A.bottom is not None and B.bottom is not None else None
    return make_algebra(names, meet, join, top=top, bottom=bottom, arrow=arrow)


def _profiles(A: Algebra, shared_arrow: bool) -> list[tuple]:
    idx = np.arange(A.n)
    tables = [A.meet, A.join] + ([A.arrow] if shared_arrow else [])
    out = []
    for i in range(A.n):
        sig = []
        for T in tables:
            sig.append(
                (
                    int((T[i, :] == i).sum()),
                    int((T[:, i] == i).sum()),
                    int((T[i, :] == idx).sum()),
                    int((T[:, i] == idx).sum()),
                    int(T[i, i] == i),
                )
            )
        out.append(tuple(sig))
    return out


def find_isomorphism(A: Algebra, B: Algebra, bound: int = 12) -> HomMap | None:
    """Backtracking search for an isomorphism respecting all shared operation
    tables and shared constants.  Intended for desk-scale carriers; raises
    TooLarge beyond ``bound``.
    """
    if A.n > bound or B.n > bound:
        raise TooLarge(f"isomorphism search bound {bound} exceeded ({A.n} vs {B.n} elements)")
    if A.n != B.n:
        return None
    shared_arrow = A.arrow is not None and B.arrow is not None
    tables = [(A.meet, B.meet), (A.join, B.join)]
    if shared_arrow:
        tables.append((A.arrow, B.arrow))

    prof_a = _profiles(A, shared_arrow)
    prof_b = _profiles(B, shared_arrow)
    if sorted(prof_a) != sorted(prof_b):
        return None

    n = A.n
    fwd: dict[int, int] = {}
    rev: dict[int, int] = {}
    if A.top is not None and B.top is not None:
        fwd[A.top], rev[B.top] = B.top, A.top
    if A.bottom is not None and B.bottom is not None:
        if A.bottom in fwd and fwd[A.bottom] != B.bottom:
            return None
        fwd[A.bottom], rev[B.bottom] = B.bottom, A.bottom

    def consistent(a: int) -> bool:
        fa = fwd[a]
        for x in fwd:
            fx = fwd[x]
            for ta, tb in tables:
                for (p, q), (fp, fq) in (((a, x), (fa, fx)), ((x, a), (fx, fa))):
                    r = int(ta[p, q])
                    img = int(tb[fp, fq])
                    if r in fwd:
                        if fwd[r] != img:
                            return False
                    elif img in rev:
                        return False
        return True

    order = sorted(set(range(n)) - set(fwd), key=lambda i: (prof_a[i], i))

    def full_check() -> bool:
        mp = np.array([fwd[i] for i in range(n)])
        return all(np.array_equal(mp[ta], tb[np.ix_(mp, mp)]) for ta, tb in tables)

    def extend(k: int) -> bool:
        if k == len(order):
            return full_check()
        a = order[k]
        for b in range(n):
            if b in rev or prof_b[b] != prof_a[a]:
                continue
            fwd[a], rev[b] = b, a
            if consistent(a) and extend(k + 1):
                return True
            del fwd[a], rev[b]
        return False

    if not extend(0):
        return None
    return HomMap(A, B, tuple(fwd[i] for i in range(n)))
