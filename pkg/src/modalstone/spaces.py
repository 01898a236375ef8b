"""Finite relational spaces: an explicit topology plus a binary relation.

The open family is given outright and only checked, never completed.
Points get indices and subsets live as bitmasks; the public functions take
and return sets of point names.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .order import StructureError, bits


class NotATopology(StructureError):
    pass


class UnknownPoint(StructureError):
    pass


class NotContinuous(StructureError):
    pass


class RelationalSpace:
    """Validated points / opens / relation with mask-level accessors."""

    def __init__(self, points, opens, succ):
        self.points = tuple(points)
        self.n = len(self.points)
        self.index = {x: i for i, x in enumerate(self.points)}
        self.opens = tuple(opens)            # masks, sorted by (size, mask)
        self.open_set = frozenset(self.opens)
        self.succ = tuple(succ)              # succ[i] = mask of R-successors
        self.full = (1 << self.n) - 1

    def require(self, x: str) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise UnknownPoint(f"unknown point {x!r}") from None

    def mask_of(self, names: Iterable[str]) -> int:
        m = 0
        for x in names:
            m |= 1 << self.require(x)
        return m

    def names_of(self, mask: int) -> frozenset[str]:
        return frozenset(self.points[i] for i in bits(mask))

    @property
    def open_families(self) -> tuple[frozenset[str], ...]:
        return tuple(self.names_of(m) for m in self.opens)

    @property
    def relation(self) -> frozenset[tuple[str, str]]:
        return frozenset((self.points[i], self.points[j])
                         for i in range(self.n) for j in bits(self.succ[i]))

    # -- mask-level operators --------------------------------------------

    def box_mask(self, mask: int) -> int:
        out = 0
        for i in range(self.n):
            if self.succ[i] & ~mask == 0:
                out |= 1 << i
        return out

    def dia_mask(self, mask: int) -> int:
        out = 0
        for i in range(self.n):
            if self.succ[i] & mask:
                out |= 1 << i
        return out

    def interior_mask(self, mask: int) -> int:
        out = 0
        for u in self.opens:
            if u & ~mask == 0:
                out |= u
        return out

    def closure_mask(self, mask: int) -> int:
        # complement of the union of opens missing the set
        out = self.full
        for u in self.opens:
            if not u & mask:
                out &= ~u
        return out

    def saturation_mask(self, mask: int) -> int:
        out = self.full
        for u in self.opens:
            if mask & ~u == 0:
                out &= u
        return out

    def __eq__(self, other):
        return (isinstance(other, RelationalSpace) and self.points == other.points
                and self.opens == other.opens and self.succ == other.succ)

    def __hash__(self):
        return hash((self.points, self.opens, self.succ))

    def __repr__(self):
        return f"RelationalSpace({self.n} points, {len(self.opens)} opens)"


def validate_space(points, opens, relation) -> RelationalSpace:
    """Check the family is a topology (empty, full, binary unions and
    intersections present) and the relation mentions known points."""
    pts = tuple(points)
    seen = set()
    for x in pts:
        if x in seen:
            raise StructureError(f"duplicate point id {x!r}")
        seen.add(x)
    index = {x: i for i, x in enumerate(pts)}
    n = len(pts)
    full = (1 << n) - 1
    masks = set()
    for fam in opens:
        m = 0
        for x in fam:
            if x not in index:
                raise UnknownPoint(f"open set mentions unknown point {x!r}")
            m |= 1 << index[x]
        masks.add(m)
    if 0 not in masks:
        raise NotATopology("the empty set is missing")
    if full not in masks:
        raise NotATopology("the full set is missing")
    ordered = sorted(masks)
    for a in ordered:
        for b in ordered:
            for m, word in ((a | b, "union"), (a & b, "intersection")):
                if m not in masks:
                    wa = sorted(pts[i] for i in bits(a))
                    wb = sorted(pts[i] for i in bits(b))
                    raise NotATopology(f"{word} of opens {wa} and {wb} is not open")
    succ = [0] * n
    for x, y in relation:
        for z in (x, y):
            if z not in index:
                raise UnknownPoint(f"relation mentions unknown point {z!r}")
        succ[index[x]] |= 1 << index[y]
    return RelationalSpace(pts, sorted(masks, key=lambda m: (m.bit_count(), m)), succ)


def generate_topology(points, basis) -> list[frozenset[str]]:
    """Close a family under unions and intersections (fixture helper)."""
    pts = tuple(points)
    index = {x: i for i, x in enumerate(pts)}
    masks = {0, (1 << len(pts)) - 1}
    for fam in basis:
        masks.add(sum(1 << index[x] for x in set(fam)))
    while True:
        extra = {a | b for a in masks for b in masks} | {a & b for a in masks for b in masks}
        if extra <= masks:
            break
        masks |= extra
    return [frozenset(pts[i] for i in bits(m)) for m in sorted(masks)]


# -- name-level wrappers --------------------------------------------------

def _as_mask(space: RelationalSpace, subset: Iterable[str]) -> int:
    return space.mask_of(subset)


def box_class(space: RelationalSpace, subset: Iterable[str]) -> frozenset[str]:
    """Points whose successors all lie in the subset."""
    return space.names_of(space.box_mask(_as_mask(space, subset)))


def dia_class(space: RelationalSpace, subset: Iterable[str]) -> frozenset[str]:
    """Points with at least one successor in the subset."""
    return space.names_of(space.dia_mask(_as_mask(space, subset)))


def interior(space: RelationalSpace, subset: Iterable[str]) -> frozenset[str]:
    return space.names_of(space.interior_mask(_as_mask(space, subset)))


def closure(space: RelationalSpace, subset: Iterable[str]) -> frozenset[str]:
    return space.names_of(space.closure_mask(_as_mask(space, subset)))


def is_open(space: RelationalSpace, subset: Iterable[str]) -> bool:
    return _as_mask(space, subset) in space.open_set


def is_closed(space: RelationalSpace, subset: Iterable[str]) -> bool:
    return (space.full & ~_as_mask(space, subset)) in space.open_set


def is_saturated(space: RelationalSpace, subset: Iterable[str]) -> bool:
    """Equal to the intersection of the opens containing it."""
    m = _as_mask(space, subset)
    return space.saturation_mask(m) == m


def is_lens(space: RelationalSpace, subset: Iterable[str]) -> bool:
    """An intersection of a closed and a saturated set.  It suffices to
    test the canonical candidate closure(U) & saturation(U)."""
    m = _as_mask(space, subset)
    return space.closure_mask(m) & space.saturation_mask(m) == m


def specialization_leq(space: RelationalSpace, x: str, y: str) -> bool:
    """x below y when every open containing x contains y."""
    i, j = space.require(x), space.require(y)
    return all(u >> j & 1 for u in space.opens if u >> i & 1)


@dataclass(frozen=True)
class SpaceClass:
    usc: bool
    lsc: bool
    continuous: bool
    serial: bool
    reflexive: bool
    symmetric: bool
    transitive: bool
    equivalence_space: bool

    def as_json(self) -> dict:
        return {"usc": self.usc, "lsc": self.lsc, "continuous": self.continuous,
                "serial": self.serial, "reflexive": self.reflexive,
                "symmetric": self.symmetric, "transitive": self.transitive,
                "equivalence_space": self.equivalence_space}


def classify_space(space: RelationalSpace) -> SpaceClass:
    usc = all(space.box_mask(u) in space.open_set for u in space.opens)
    lsc = all(space.dia_mask(u) in space.open_set for u in space.opens)
    serial = all(space.succ[i] for i in range(space.n))
    refl = all(space.succ[i] >> i & 1 for i in range(space.n))
    sym = all(not (space.succ[i] >> j & 1) or (space.succ[j] >> i & 1)
              for i in range(space.n) for j in range(space.n))
    trans = True
    for i in range(space.n):
        reach = 0
        for j in bits(space.succ[i]):
            reach |= space.succ[j]
        if reach & ~space.succ[i]:
            trans = False
            break
    continuous = usc and lsc
    return SpaceClass(usc=usc, lsc=lsc, continuous=continuous, serial=serial,
                      reflexive=refl, symmetric=sym, transitive=trans,
                      equivalence_space=continuous and refl and sym and trans)


# -- morphisms ------------------------------------------------------------

class SpaceMorphism:
    """A point map between spaces; classify before trusting it."""

    def __init__(self, source: RelationalSpace, target: RelationalSpace,
                 mapping: Mapping[str, str]):
        self.source = source
        self.target = target
        try:
            self.map_i = tuple(target.require(mapping[x]) for x in source.points)
        except KeyError as missing:
            raise StructureError(f"morphism table misses point {missing.args[0]!r}") from None

    def apply(self, x: str) -> str:
        return self.target.points[self.map_i[self.source.require(x)]]

    @property
    def table(self) -> dict[str, str]:
        return {self.source.points[i]: self.target.points[j]
                for i, j in enumerate(self.map_i)}

    def preimage_mask(self, mask: int) -> int:
        out = 0
        for i, j in enumerate(self.map_i):
            if mask >> j & 1:
                out |= 1 << i
        return out

    def image_mask(self, mask: int) -> int:
        out = 0
        for i in bits(mask):
            out |= 1 << self.map_i[i]
        return out

    def then(self, other: "SpaceMorphism") -> "SpaceMorphism":
        if other.source != self.target:
            raise StructureError("morphisms do not compose: target/source mismatch")
        out = SpaceMorphism.__new__(SpaceMorphism)
        out.source, out.target = self.source, other.target
        out.map_i = tuple(other.map_i[j] for j in self.map_i)
        return out

    def __eq__(self, other):
        return (isinstance(other, SpaceMorphism) and self.source == other.source
                and self.target == other.target and self.map_i == other.map_i)

    def __hash__(self):
        return hash((self.source, self.target, self.map_i))

    def __repr__(self):
        return f"SpaceMorphism({self.table})"


@dataclass(frozen=True)
class SpaceMorphismClass:
    """Each condition is reported on its own; ``level`` is the usual
    cumulative reading (continuity, relation preservation, then the forth
    conditions for opens and for their complements)."""

    level: str          # not_continuous | continuous | relational | p_morphism | pq_morphism
    open_map: bool
    continuous: bool
    preserves_relation: bool
    p_condition: bool
    q_condition: bool
    witnesses: dict[str, str]

    def as_json(self) -> dict:
        return {"level": self.level, "open_map": self.open_map,
                "continuous": self.continuous,
                "preserves_relation": self.preserves_relation,
                "p_condition": self.p_condition, "q_condition": self.q_condition,
                "witnesses": dict(self.witnesses)}


def classify_space_morphism(f: SpaceMorphism) -> SpaceMorphismClass:
    X, Y = f.source, f.target
    open_map = all(f.image_mask(u) in Y.open_set for u in X.opens)
    witnesses: dict[str, str] = {}

    continuous = True
    for v in Y.opens:
        if f.preimage_mask(v) not in X.open_set:
            continuous = False
            witnesses["continuity"] = f"preimage of open {sorted(Y.names_of(v))} is not open"
            break
    rel = True
    for i in range(X.n):
        if not rel:
            break
        for j in bits(X.succ[i]):
            if not Y.succ[f.map_i[i]] >> f.map_i[j] & 1:
                rel = False
                witnesses["relation"] = (
                    f"{X.points[i]!r} R {X.points[j]!r} not carried to the target")
                break
    p_cond = q_cond = True
    for i in range(X.n):
        ti = Y.succ[f.map_i[i]]
        for v in Y.opens:
            pre = f.preimage_mask(v)
            # a target successor inside the open asks for one through the preimage
            if p_cond and ti & v and not X.succ[i] & pre:
                p_cond = False
                witnesses["p"] = (f"{X.points[i]!r} has no successor in the preimage of "
                                  f"{sorted(Y.names_of(v))}")
            # a target successor outside it asks for one outside the preimage
            if q_cond and ti & ~v and not X.succ[i] & ~pre:
                q_cond = False
                witnesses["q"] = (f"{X.points[i]!r} has no successor outside the preimage "
                                  f"of {sorted(Y.names_of(v))}")
        if not (p_cond or q_cond):
            break
    if not continuous:
        level = "not_continuous"
    elif not rel:
        level = "continuous"
    elif not p_cond:
        level = "relational"
    elif not q_cond:
        level = "p_morphism"
    else:
        level = "pq_morphism"
    return SpaceMorphismClass(level, open_map, continuous, rel, p_cond, q_cond, witnesses)


_LEVEL_RANK = {"not_continuous": 0, "continuous": 1, "relational": 2,
               "p_morphism": 3, "pq_morphism": 4}


def space_morphism_in_category(cls: SpaceMorphismClass, kind: str) -> bool:
    """``kind`` is ``p`` (continuous relational p-maps) or ``pq`` (those
    plus the complement condition)."""
    need = {"p": "p_morphism", "pq": "pq_morphism"}[kind]
    return _LEVEL_RANK[cls.level] >= _LEVEL_RANK[need]
