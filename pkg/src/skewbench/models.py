"""Concrete algebra families used as oracles and counterexample fodder:
partial-function algebras, section algebras over plain sets and over finite
posets, upset lattices with the complement-of-downset implication, algebras
induced by skew Boolean structure, and brute-force enumeration of tiny skew
lattices up to isomorphism.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .core import Algebra, make_algebra, vertical_dual
from .errors import BadPoset, InconsistencyDetected, EsakiaFormulaMismatch, PreconditionFailed, TooLarge
from .heyting import heyting_arrow
from .identities import CheckResult
from .properties import PropertyReport, check_skew_boolean
from .skew_heyting import check_sh_axioms, derive_arrow

_POINT_NAMES = "pqrstuvwxyz"


def default_point_names(k: int) -> tuple[str, ...]:
    if k <= len(_POINT_NAMES):
        return tuple(_POINT_NAMES[:k])
    return tuple(f"x{i}" for i in range(k))


# ---------------------------------------------------------------------------
# Domain types


@dataclass(frozen=True)
class PartialMap:
    """Partial function as a sorted tuple of (point, value) index pairs."""

    entries: tuple[tuple[int, int], ...]

    @classmethod
    def of(cls, mapping: dict[int, int]) -> "PartialMap":
        return cls(tuple(sorted(mapping.items())))

    @property
    def domain(self) -> frozenset[int]:
        return frozenset(p for p, _ in self.entries)

    def as_dict(self) -> dict[int, int]:
        return dict(self.entries)

    def name(self, xnames, ynames) -> str:
        return "{" + ",".join(f"{xnames[p]}:{ynames[v]}" for p, v in self.entries) + "}"


def pm_override(f: PartialMap, g: PartialMap) -> PartialMap:
    """f together with g off the domain of f; f wins on the overlap."""
    out = g.as_dict()
    out.update(f.as_dict())
    return PartialMap.of(out)


def pm_common(f: PartialMap, g: PartialMap) -> PartialMap:
    """g restricted to the common domain (g's values survive)."""
    fd = f.domain
    return PartialMap.of({p: v for p, v in g.entries if p in fd})


def pm_residue(f: PartialMap, g: PartialMap) -> PartialMap:
    """g restricted to the part of its domain that f does not cover."""
    fd = f.domain
    return PartialMap.of({p: v for p, v in g.entries if p not in fd})


@dataclass(frozen=True, eq=False)
class Poset:
    """Finite poset; the relation matrix is validated at construction."""

    points: tuple[str, ...]
    leq: np.ndarray

    def __post_init__(self):
        n = len(self.points)
        rel = np.ascontiguousarray(self.leq, dtype=bool)
        rel.setflags(write=False)
        object.__setattr__(self, "leq", rel)
        if rel.shape != (n, n):
            raise BadPoset(f"relation shape {rel.shape} does not match {n} points")
        if not rel.diagonal().all():
            raise BadPoset("relation is not reflexive")
        if (rel & rel.T & ~np.eye(n, dtype=bool)).any():
            raise BadPoset("relation is not antisymmetric")
        closed = (rel.astype(np.uint8) @ rel.astype(np.uint8)) > 0
        if (closed & ~rel).any():
            raise BadPoset("relation is not transitive")

    @property
    def n(self) -> int:
        return len(self.points)

    def __eq__(self, other):
        return (
            isinstance(other, Poset)
            and self.points == other.points
            and np.array_equal(self.leq, other.leq)
        )

    @cached_property
    def _up_of_point(self) -> tuple[int, ...]:
        return tuple(int(sum(1 << j for j in np.flatnonzero(self.leq[i]))) for i in range(self.n))

    @cached_property
    def _down_of_point(self) -> tuple[int, ...]:
        return tuple(int(sum(1 << j for j in np.flatnonzero(self.leq[:, i]))) for i in range(self.n))

    def up(self, mask: int) -> int:
        out = 0
        for i in range(self.n):
            if mask >> i & 1:
                out |= self._up_of_point[i]
        return out

    def down(self, mask: int) -> int:
        out = 0
        for i in range(self.n):
            if mask >> i & 1:
                out |= self._down_of_point[i]
        return out

    @cached_property
    def upset_masks(self) -> tuple[int, ...]:
        return tuple(m for m in range(1 << self.n) if self.up(m) == m)

    @cached_property
    def downset_masks(self) -> tuple[int, ...]:
        return tuple(m for m in range(1 << self.n) if self.down(m) == m)

    def subset_name(self, mask: int) -> str:
        return "{" + ",".join(self.points[i] for i in range(self.n) if mask >> i & 1) + "}"

    @classmethod
    def chain(cls, n: int, names=None) -> "Poset":
        names = tuple(names) if names else tuple(_POINT_NAMES[i] for i in range(n))
        leq = np.fromfunction(lambda i, j: i <= j, (n, n))
        return cls(names, leq)

    @classmethod
    def antichain(cls, n: int, names=None) -> "Poset":
        names = tuple(names) if names else tuple(_POINT_NAMES[i] for i in range(n))
        return cls(names, np.eye(n, dtype=bool))

    def canonical_key(self) -> tuple:
        n = self.n
        best = None
        for perm in itertools.permutations(range(n)):
            flat = tuple(bool(self.leq[perm[i], perm[j]]) for i in range(n) for j in range(n))
            if best is None or flat < best:
                best = flat
        return best


def all_posets(n: int) -> list[Poset]:
    """All posets with exactly n points, one per isomorphism class, in a
    deterministic order.  Built by repeatedly adjoining a maximal point
    above a downset; practical through n = 6 or so."""
    if n < 1:
        raise ValueError("need at least one point")
    if n == 1:
        return [Poset.antichain(1)]
    seen: dict[tuple, Poset] = {}
    for P in all_posets(n - 1):
        for ideal in P.downset_masks:
            leq = np.eye(n, dtype=bool)
            leq[: n - 1, : n - 1] = P.leq
            for i in range(n - 1):
                if ideal >> i & 1:
                    leq[i, n - 1] = True
            Q = Poset(tuple(_POINT_NAMES[i] for i in range(n)), leq)
            key = Q.canonical_key()
            if key not in seen:
                seen[key] = Q
    return [seen[k] for k in sorted(seen)]


@dataclass(frozen=True)
class SurjectionModel:
    """A surjection from a finite total space onto a plain set or a poset;
    sections of it form the algebras below."""

    total: tuple[str, ...]
    base: tuple[str, ...] | Poset
    proj: tuple[int, ...]

    def __post_init__(self):
        if len(self.proj) != len(self.total):
            raise PreconditionFailed("projection length does not match total space")
        hit = set(self.proj)
        if hit != set(range(self.base_size)):
            raise PreconditionFailed("projection is not surjective")

    @property
    def base_size(self) -> int:
        return self.base.n if isinstance(self.base, Poset) else len(self.base)

    @property
    def base_names(self) -> tuple[str, ...]:
        return self.base.points if isinstance(self.base, Poset) else self.base

    def fiber(self, b: int) -> tuple[int, ...]:
        return tuple(e for e, p in enumerate(self.proj) if p == b)

    @classmethod
    def from_fiber_sizes(cls, base, sizes) -> "SurjectionModel":
        names = base.points if isinstance(base, Poset) else tuple(base)
        sizes = tuple(int(s) for s in sizes)
        if len(sizes) != len(names):
            raise PreconditionFailed("one fiber size per base point required")
        if any(s < 1 for s in sizes):
            raise PreconditionFailed("fibers must be nonempty")
        total, proj = [], []
        for b, (name, size) in enumerate(zip(names, sizes)):
            for i in range(size):
                total.append(f"{name}{i}")
                proj.append(b)
        return cls(tuple(total), base if isinstance(base, Poset) else names, tuple(proj))

    @classmethod
    def coordinate_projection(cls, xnames, ynames) -> "SurjectionModel":
        xnames, ynames = tuple(xnames), tuple(ynames)
        total = tuple(f"{x}.{y}" for x in xnames for y in ynames)
        proj = tuple(i for i in range(len(xnames)) for _ in ynames)
        return cls(total, xnames, proj)


# ---------------------------------------------------------------------------
# Partial maps and sections


def _resolve_points(x, default_prefix="x") -> tuple[str, ...]:
    if isinstance(x, int):
        if x <= len(_POINT_NAMES):
            return tuple(_POINT_NAMES[:x])
        return tuple(f"{default_prefix}{i}" for i in range(x))
    return tuple(str(v) for v in x)


def _resolve_values(y) -> tuple[str, ...]:
    if isinstance(y, int):
        return tuple(str(i) for i in range(y))
    return tuple(str(v) for v in y)


def _maps_for_domains(domain_masks, k_points, fiber_sizes) -> list[PartialMap]:
    """All choice functions over the listed domains, in (mask asc, values
    lexicographic) order so that the empty map comes first."""
    out = []
    for mask in domain_masks:
        points = [i for i in range(k_points) if mask >> i & 1]
        for combo in itertools.product(*(range(fiber_sizes[p]) for p in points)):
            out.append(PartialMap(tuple(zip(points, combo))))
    return out


def _algebra_from_maps(maps, name_of, with_arrow: bool = True) -> Algebra:
    index = {f: i for i, f in enumerate(maps)}
    n = len(maps)
    meet = [[0] * n for _ in range(n)]
    join = [[0] * n for _ in range(n)]
    arrow = [[0] * n for _ in range(n)] if with_arrow else None
    for i, f in enumerate(maps):
        for k, g in enumerate(maps):
            meet[i][k] = index[pm_override(f, g)]
            join[i][k] = index[pm_common(f, g)]
            if with_arrow:
                # the residue g off dom f: the closed form of the implication
                # over antichain bases; poset bases derive it instead
                arrow[i][k] = index[pm_residue(f, g)]
    names = tuple(name_of(f) for f in maps)
    return make_algebra(names, meet, join, top=index[PartialMap(())], arrow=arrow)


def partial_function_algebra(x, y, bound: int = 10000) -> Algebra:
    """The algebra of all partial functions X → Y with override meet,
    common-restriction join, residue arrow and the empty map on top."""
    xnames = _resolve_points(x)
    ynames = _resolve_values(y)
    if not xnames or not ynames:
        raise PreconditionFailed("X and Y must be nonempty")
    size = (len(ynames) + 1) ** len(xnames)
    if size > bound:
        raise TooLarge(f"partial function algebra has {size} elements, bound is {bound}")
    masks = range(1 << len(xnames))
    maps = _maps_for_domains(masks, len(xnames), [len(ynames)] * len(xnames))
    return _algebra_from_maps(maps, lambda f: f.name(xnames, ynames))


def partial_function_boolean(x, y, bound: int = 10000) -> tuple[Algebra, np.ndarray]:
    """The vertical dual of the partial-function algebra (a skew Boolean
    algebra with the empty map at the bottom) together with its difference
    table f∖g = f off the domain of g."""
    pf = partial_function_algebra(x, y, bound)
    xnames = _resolve_points(x)
    ynames = _resolve_values(y)
    maps = _maps_for_domains(range(1 << len(xnames)), len(xnames), [len(ynames)] * len(xnames))
    index = {f: i for i, f in enumerate(maps)}
    n = len(maps)
    diff = np.zeros((n, n), dtype=np.int16)
    for i, f in enumerate(maps):
        for k, g in enumerate(maps):
            diff[i, k] = index[pm_residue(g, f)]  # f restricted off dom g
    diff.setflags(write=False)
    return vertical_dual(pf), diff


def _section_maps(model: SurjectionModel, domain_masks) -> list[PartialMap]:
    k = model.base_size
    fibers = [model.fiber(b) for b in range(k)]
    out = []
    for mask in domain_masks:
        points = [i for i in range(k) if mask >> i & 1]
        for combo in itertools.product(*(fibers[p] for p in points)):
            out.append(PartialMap(tuple(zip(points, combo))))
    return out


def _section_name(model: SurjectionModel):
    base, total = model.base_names, model.total

    def name_of(f: PartialMap) -> str:
        return "{" + ",".join(f"{base[p]}:{total[v]}" for p, v in f.entries) + "}"

    return name_of


def sections_algebra(model: SurjectionModel, bound: int = 10000) -> Algebra:
    """Sections of a surjection over all subsets of a plain base, under the
    partial-function operations."""
    if isinstance(model.base, Poset):
        raise PreconditionFailed("use poset_sections_algebra for poset bases")
    k = model.base_size
    sizes = [len(model.fiber(b)) + 1 for b in range(k)]
    size = int(np.prod(sizes))
    if size > bound:
        raise TooLarge(f"section algebra has {size} elements, bound is {bound}")
    maps = _section_maps(model, range(1 << k))
    return _algebra_from_maps(maps, _section_name(model))


def poset_sections_algebra(model: SurjectionModel, bound: int = 10000) -> Algebra:
    """Sections over the upsets of a poset base: join restricts to the
    common domain, meet overrides, the top is the empty section, and the
    arrow is derived from the upset structure (the printed closed forms are
    compared against it separately, see section_arrow_resolution)."""
    if not isinstance(model.base, Poset):
        raise PreconditionFailed("poset_sections_algebra needs a poset base")
    P = model.base
    maps = _section_maps(model, P.upset_masks)
    if len(maps) > bound:
        raise TooLarge(f"section algebra has {len(maps)} elements, bound is {bound}")
    base = _algebra_from_maps(maps, _section_name(model), with_arrow=False)
    derived = derive_arrow(base)
    if not derived:
        raise InconsistencyDetected(
            "poset sections failed to admit an arrow, contradicting the section theorem",
            witness=(derived.offending_upset,),
        )
    return base.with_arrow(derived.table)


def _mask_of(f: PartialMap, k: int) -> int:
    return sum(1 << p for p, _ in f.entries)


def section_arrow_resolution(model: SurjectionModel, bound: int = 10000) -> PropertyReport:
    """Compare candidate closed forms of the section implication against the
    derived arrow.

    Candidates: restricting the first argument to the up-closure of
    dom s ∖ dom r (as printed in the duality literature), restricting the
    second argument to that up-closure, and both variants without the
    up-closure.  A candidate whose domain is not an upset cannot be a
    section and is recorded as failing on that pair.
    """
    A = poset_sections_algebra(model, bound)
    P = model.base
    k = P.n
    maps = _section_maps(model, P.upset_masks)
    index = {f: i for i, f in enumerate(maps)}
    oracle = A.arrow

    def restrict(f: PartialMap, mask: int) -> PartialMap:
        return PartialMap.of({p: v for p, v in f.entries if mask >> p & 1})

    candidates = {
        "printed-first-arg-upclosed": lambda r, s: restrict(r, P.up(_mask_of(s, k) & ~_mask_of(r, k))),
        "second-arg-upclosed": lambda r, s: restrict(s, P.up(_mask_of(s, k) & ~_mask_of(r, k))),
        "first-arg-plain": lambda r, s: restrict(r, _mask_of(s, k) & ~_mask_of(r, k)),
        "second-arg-plain": lambda r, s: restrict(s, _mask_of(s, k) & ~_mask_of(r, k)),
    }
    entries = []
    total = len(maps) ** 2
    for name, fn in candidates.items():
        witness = None
        detail = ""
        for (i, r), (kk, s) in itertools.product(enumerate(maps), enumerate(maps)):
            value = fn(r, s)
            got = index.get(value)
            if got is None:
                witness, detail = (i, kk), "formula leaves the section carrier"
                break
            if got != int(oracle[i, kk]):
                witness, detail = (i, kk), "disagrees with derived arrow"
                break
        if witness is None:
            entries.append(CheckResult(name, True, None, total))
        else:
            entries.append(CheckResult(name, False, witness, total, detail=detail))
    return PropertyReport(tuple(entries), A.names)


# ---------------------------------------------------------------------------
# Upset lattices over finite posets


def upset_heyting(P: Poset) -> Algebra:
    """The lattice of all upsets of a finite poset with intersection,
    union, and the implication U→V = X ∖ ↓(U∖V), verified entrywise against
    the candidate-set oracle."""
    if P.n > 12:
        raise TooLarge("upset lattices are bounded at 12 poset points")
    masks = P.upset_masks
    index = {m: i for i, m in enumerate(masks)}
    full = (1 << P.n) - 1
    n = len(masks)
    meet = [[index[a & b] for b in masks] for a in masks]
    join = [[index[a | b] for b in masks] for a in masks]
    arrow = [[index[full & ~P.down(a & ~b)] for b in masks] for a in masks]
    names = tuple(P.subset_name(m) for m in masks)
    L = make_algebra(names, meet, join, top=index[full], bottom=index[0], arrow=arrow)
    oracle = heyting_arrow(L.drop_arrow())
    if not oracle or not np.array_equal(oracle.table, L.arrow):
        if oracle:
            u, v = np.unravel_index(int(np.argmax(oracle.table != L.arrow)), (n, n))
            raise EsakiaFormulaMismatch(
                f"complement-of-downset arrow disagrees with the oracle at "
                f"({names[u]}, {names[v]})",
                witness=(int(u), int(v)),
            )
        raise EsakiaFormulaMismatch(
            f"upset lattice has no Heyting arrow at {oracle.offending}",
            witness=oracle.offending or (),
        )
    return L


# ---------------------------------------------------------------------------
# Skew Boolean induced algebras


def from_skew_boolean(A_sba: Algebra, diff_table) -> Algebra:
    """Turn a skew Boolean algebra upside down and read the implication off
    the difference: x→y = y∖x with the old bottom as the new top.

    The result is verified to satisfy the skew Heyting axioms and to agree
    with the derived arrow.
    """
    outcome = check_skew_boolean(A_sba, diff_table)
    if not outcome:
        raise PreconditionFailed(f"not a skew Boolean algebra: {outcome.detail}", outcome.witness)
    diff = np.asarray(diff_table)
    dual = vertical_dual(A_sba)
    arrow = np.ascontiguousarray(diff.T, dtype=np.int16)
    result = dual.with_arrow(arrow)
    axioms = check_sh_axioms(result, arrow)
    derived = derive_arrow(dual)
    if not axioms.all_hold() or not derived or not np.array_equal(derived.table, arrow):
        raise InconsistencyDetected(
            "difference-induced arrow fails the axioms or differs from the derived arrow"
        )
    return result


# ---------------------------------------------------------------------------
# Brute-force enumeration


def _idempotent_associative_tables(n: int) -> list[tuple[tuple[int, ...], ...]]:
    cells = [(i, j) for i in range(n) for j in range(n) if i != j]
    found = []
    for combo in itertools.product(range(n), repeat=len(cells)):
        table = [[i] * n for i in range(n)]
        for (i, j), v in zip(cells, combo):
            table[i][j] = v
        ok = True
        for a in range(n):
            if not ok:
                break
            for b in range(n):
                tab = table[a][b]
                if any(table[tab][c] != table[a][table[b][c]] for c in range(n)):
                    ok = False
                    break
        if ok:
            found.append(tuple(tuple(row) for row in table))
    return found


def _relabel(table, perm):
    n = len(table)
    out = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            out[perm[i]][perm[j]] = perm[table[i][j]]
    return tuple(tuple(row) for row in out)


def _canonical_pair(meet, join, n):
    best = None
    for perm in itertools.permutations(range(n)):
        key = (_relabel(meet, perm), _relabel(join, perm))
        if best is None or key < best:
            best = key
    return best


def enumerate_skew_lattices(n: int):
    """All skew lattices on an n-element carrier up to isomorphism, by raw
    table enumeration; a generator in canonical order.  Bounded at n = 3,
    beyond which the model constructors, products and duals are the search
    substrate."""
    if n < 1:
        raise TooLarge("carrier must be nonempty")
    if n > 3:
        raise TooLarge("raw table enumeration is bounded at 3 elements")
    names = tuple("abc"[:n])
    bands = _idempotent_associative_tables(n)
    seen = set()
    for meet in bands:
        for join in bands:
            ok = all(
                meet[x][join[x][y]] == x
                and join[x][meet[x][y]] == x
                and join[meet[x][y]][y] == y
                and meet[join[x][y]][y] == y
                for x in range(n)
                for y in range(n)
            )
            if not ok:
                continue
            seen.add(_canonical_pair(meet, join, n))
    for meet, join in sorted(seen):
        yield make_algebra(names, meet, join)


# ---------------------------------------------------------------------------
# Search substrate: deterministic streams of (label, descriptor) per family.
# Descriptors are plain tuples so instances can be rebuilt inside worker
# processes; build_instance is the single constructor for all of them.


def build_instance(desc) -> Algebra:
    from .core import direct_product

    kind = desc[0]
    if kind == "pfn":
        return partial_function_algebra(desc[1], desc[2])
    if kind == "enum":
        return list(enumerate_skew_lattices(desc[1]))[desc[2]]
    if kind == "sections":
        _, pts, base_idx, fibers = desc
        base = all_posets(pts)[base_idx]
        return poset_sections_algebra(SurjectionModel.from_fiber_sizes(base, fibers))
    if kind == "dual":
        return vertical_dual(build_instance(desc[1]))
    if kind == "product":
        return direct_product(build_instance(desc[1]), build_instance(desc[2]))
    raise ValueError(f"unknown instance descriptor {desc!r}")


def instance_label(desc) -> str:
    kind = desc[0]
    if kind == "pfn":
        return f"pfn({desc[1]},{desc[2]})"
    if kind == "enum":
        return f"enum{desc[1]}#{desc[2]}"
    if kind == "sections":
        return f"sections(P{desc[1]}#{desc[2]};{','.join(map(str, desc[3]))})"
    if kind == "dual":
        return f"dual({instance_label(desc[1])})"
    if kind == "product":
        return f"prod({instance_label(desc[1])},{instance_label(desc[2])})"
    return repr(desc)


def _pfn_descriptors(max_size: int, min_size: int = 2):
    out = []
    for nx in range(1, max_size.bit_length() + 1):
        for ny in itertools.count(1):
            size = (ny + 1) ** nx
            if size > max_size:
                break
            if size >= min_size:
                out.append((size, ("pfn", nx, ny)))
    return out


def _section_model_size(base: Poset, fibers) -> int:
    return sum(
        int(np.prod([fibers[p] for p in range(base.n) if mask >> p & 1] or [1]))
        for mask in base.upset_masks
    )


def _section_descriptors(max_size: int):
    out = []
    for pts in range(1, 4):
        for base_idx, base in enumerate(all_posets(pts)):
            for fibers in itertools.product((1, 2), repeat=pts):
                size = _section_model_size(base, fibers)
                if size <= max_size:
                    out.append((size, ("sections", pts, base_idx, fibers)))
    return out


def _enum_descriptors(max_size: int):
    raw = []
    for n in range(1, min(3, max_size) + 1):
        for i, _ in enumerate(enumerate_skew_lattices(n)):
            raw.append((n, ("enum", n, i)))
    pool = list(raw)
    for (sa, da), (sb, db) in itertools.product(raw, raw):
        if 1 < sa * sb <= max_size and sa > 1 and sb > 1:
            pool.append((sa * sb, ("product", da, db)))
    pool.extend(_pfn_descriptors(max_size, min_size=4))
    pool.extend((s, ("dual", d)) for s, d in list(pool))
    return pool


def search_family(family: str, max_size: int) -> list[tuple[str, tuple]]:
    """Ordered (label, descriptor) stream for a search family; the 'enum'
    family is deduplicated up to isomorphism at desk scale."""
    if family == "pfn":
        pool = _pfn_descriptors(max_size)
    elif family == "sections":
        pool = _section_descriptors(max_size)
    elif family == "enum":
        pool = _enum_descriptors(max_size)
    else:
        raise ValueError(f"unknown family {family!r}")
    pool.sort(key=lambda item: (item[0], instance_label(item[1])))
    if family != "enum":
        return [(instance_label(d), d) for _, d in pool]

    from .core import find_isomorphism

    kept: list[tuple[int, tuple, Algebra]] = []
    out = []
    for size, desc in pool:
        alg = build_instance(desc).drop_arrow()
        duplicate = False
        if size <= 12:
            for ks, _, kept_alg in kept:
                if ks == size and find_isomorphism(alg, kept_alg) is not None:
                    duplicate = True
                    break
        if not duplicate:
            kept.append((size, desc, alg))
            out.append((instance_label(desc), desc))
    return out
