"""Modal frames: finite distributive lattices carrying box and diamond.

A valid frame satisfies the four core laws (top preserved by box, box
distributes over meets laxly, the mixed meet law, diamond kills bottom)
plus monotonicity of both operators.  Everything beyond that is a grading
reported by :func:`classify_frame`.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from . import kernels
from .order import (Character, FiniteLattice, PrincipalFilter, StructureError,
                    bits, compacts, validate_lattice)

# Descriptions double as report text; keys are stable identifiers.
AXIOMS = {
    "box_top": "box preserves the top element",
    "box_meet": "box a & box b <= box (a & b)",
    "box_dia_meet": "box a & dia b <= dia (a & b)",
    "dia_bot": "dia preserves the bottom element",
    "dia_join": "dia (a | b) <= dia a | dia b",
    "box_join_split": "box (a | b) <= box a | dia b",
    "serial": "box a <= dia a",
    "box_deflationary": "box a <= a",
    "dia_inflationary": "a <= dia a",
    "box_transitive": "box a <= box box a",
    "dia_transitive": "dia dia a <= dia a",
    "dia_box_deflationary": "dia box a <= a",
    "box_dia_inflationary": "a <= box dia a",
}
CORE_AXIOMS = ("box_top", "box_meet", "box_dia_meet", "dia_bot")
EQUIVALENCE_AXIOMS = ("box_deflationary", "dia_inflationary", "box_transitive",
                      "dia_transitive", "dia_box_deflationary", "box_dia_inflationary")


class NotMonotone(StructureError):
    pass


class AxiomViolation(StructureError):
    def __init__(self, axiom: str, message: str):
        super().__init__(message)
        self.axiom = axiom


class ModalFrame:
    """A validated lattice plus index tables for the two operators.

    Construct through :func:`validate_modal_frame`; sweep code that has
    already checked the core laws through the kernel may call the
    constructor directly.
    """

    def __init__(self, lattice: FiniteLattice, box_i, dia_i):
        self.lattice = lattice
        self.box_i = tuple(box_i)
        self.dia_i = tuple(dia_i)

    def box(self, a: str) -> str:
        return self.lattice.names[self.box_i[self.lattice.require(a)]]

    def dia(self, a: str) -> str:
        return self.lattice.names[self.dia_i[self.lattice.require(a)]]

    @property
    def box_table(self) -> dict[str, str]:
        names = self.lattice.names
        return {names[i]: names[j] for i, j in enumerate(self.box_i)}

    @property
    def dia_table(self) -> dict[str, str]:
        names = self.lattice.names
        return {names[i]: names[j] for i, j in enumerate(self.dia_i)}

    def __eq__(self, other):
        return (isinstance(other, ModalFrame) and self.lattice == other.lattice
                and self.box_i == other.box_i and self.dia_i == other.dia_i)

    def __hash__(self):
        return hash((self.lattice, self.box_i, self.dia_i))

    def __repr__(self):
        return f"ModalFrame({self.lattice.n} elements)"


def _table_to_indices(lattice: FiniteLattice, table: Mapping[str, str], op: str) -> list[int]:
    out = []
    for a in lattice.names:
        if a not in table:
            raise StructureError(f"{op} table misses element {a!r}")
        out.append(lattice.require(table[a]))
    extra = set(table) - set(lattice.names)
    if extra:
        raise StructureError(f"{op} table mentions unknown element {sorted(extra)[0]!r}")
    return out


def validate_modal_frame(lattice: FiniteLattice, box: Mapping[str, str],
                         dia: Mapping[str, str]) -> ModalFrame:
    """Check totality, monotonicity and the core laws, with witnesses."""
    names = lattice.names
    n = lattice.n
    box_i = _table_to_indices(lattice, box, "box")
    dia_i = _table_to_indices(lattice, dia, "dia")
    for op, t in (("box", box_i), ("dia", dia_i)):
        for a in range(n):
            for b in bits(lattice.up[a] & ~(1 << a)):
                if not lattice.leq_i(t[a], t[b]):
                    raise NotMonotone(
                        f"{op} not monotone: {names[a]!r} <= {names[b]!r} but "
                        f"{op}({names[a]!r}) = {names[t[a]]!r} is not below "
                        f"{op}({names[b]!r}) = {names[t[b]]!r}")
    if box_i[lattice.top_i] != lattice.top_i:
        raise AxiomViolation("box_top", f"box(top) = {names[box_i[lattice.top_i]]!r} != top")
    if dia_i[lattice.bot_i] != lattice.bot_i:
        raise AxiomViolation("dia_bot", f"dia(bottom) = {names[dia_i[lattice.bot_i]]!r} != bottom")
    meet_t, join_t = lattice.meet_t, lattice.join_t
    for a in range(n):
        for b in range(n):
            if not lattice.leq_i(meet_t[box_i[a]][box_i[b]], box_i[meet_t[a][b]]):
                raise AxiomViolation("box_meet", (
                    f"box({names[a]!r}) & box({names[b]!r}) is not below "
                    f"box({names[a]!r} & {names[b]!r})"))
            if not lattice.leq_i(meet_t[box_i[a]][dia_i[b]], dia_i[meet_t[a][b]]):
                raise AxiomViolation("box_dia_meet", (
                    f"box({names[a]!r}) & dia({names[b]!r}) is not below "
                    f"dia({names[a]!r} & {names[b]!r})"))
    return ModalFrame(lattice, box_i, dia_i)


def core_violation_report(lattice: FiniteLattice, box: Mapping[str, str],
                          dia: Mapping[str, str]) -> list[dict]:
    """Every monotonicity/core-law violation, not just the first.

    :func:`validate_modal_frame` stops at the first witness; command-line
    validation wants the full list for fixing hand-written tables.
    """
    names = lattice.names
    n = lattice.n
    box_i = _table_to_indices(lattice, box, "box")
    dia_i = _table_to_indices(lattice, dia, "dia")
    out: list[dict] = []
    for op, t in (("box", box_i), ("dia", dia_i)):
        for a in range(n):
            for b in bits(lattice.up[a] & ~(1 << a)):
                if not lattice.leq_i(t[a], t[b]):
                    out.append({"law": f"mono_{op}", "at": [names[a], names[b]],
                                "detail": f"{op}({names[a]}) = {names[t[a]]} is not "
                                          f"below {op}({names[b]}) = {names[t[b]]}"})
    if box_i[lattice.top_i] != lattice.top_i:
        out.append({"law": "box_top", "at": [names[lattice.top_i]],
                    "detail": f"box(top) = {names[box_i[lattice.top_i]]}"})
    if dia_i[lattice.bot_i] != lattice.bot_i:
        out.append({"law": "dia_bot", "at": [names[lattice.bot_i]],
                    "detail": f"dia(bottom) = {names[dia_i[lattice.bot_i]]}"})
    meet_t = lattice.meet_t
    for a in range(n):
        for b in range(n):
            if not lattice.leq_i(meet_t[box_i[a]][box_i[b]], box_i[meet_t[a][b]]):
                out.append({"law": "box_meet", "at": [names[a], names[b]],
                            "detail": f"box({names[a]}) & box({names[b]}) is not "
                                      f"below box({names[a]} & {names[b]})"})
            if not lattice.leq_i(meet_t[box_i[a]][dia_i[b]], dia_i[meet_t[a][b]]):
                out.append({"law": "box_dia_meet", "at": [names[a], names[b]],
                            "detail": f"box({names[a]}) & dia({names[b]}) is not "
                                      f"below dia({names[a]} & {names[b]})"})
    return out


@dataclass(frozen=True)
class FrameClass:
    """Per-axiom outcomes plus the named classes built from them.

    ``modally_spectral`` is None when the caller skipped that (relatively
    expensive) determination.
    """

    axioms: dict[str, bool]
    modal: bool
    lower: bool
    convex: bool
    serial: bool
    equivalence: bool
    modally_spectral: bool | None

    def as_json(self) -> dict:
        out = {"axioms": dict(self.axioms), "modal": self.modal, "lower": self.lower,
               "convex": self.convex, "serial": self.serial,
               "equivalence": self.equivalence}
        if self.modally_spectral is not None:
            out["modally_spectral"] = self.modally_spectral
        return out


def axiom_bits_of(frame: ModalFrame) -> int:
    packed = kernels.packed_lattice(frame.lattice)
    return kernels.frame_axiom_bits(packed, frame.box_i, frame.dia_i)

_BIT = {key: kernels.AXIOM_ORDER.index(key) for key in kernels.AXIOM_ORDER}


def frame_class_from_bits(flags: int, modally_spectral: bool | None) -> FrameClass:
    ax = {key: bool(flags >> _BIT[key] & 1) for key in AXIOMS}
    modal = all(ax[k] for k in CORE_AXIOMS) and (flags & 0b11) == 0b11
    lower = modal and ax["dia_join"]
    convex = lower and ax["box_join_split"]
    equivalence = modal and all(ax[k] for k in EQUIVALENCE_AXIOMS)
    return FrameClass(axioms=ax, modal=modal, lower=lower, convex=convex,
                      serial=modal and ax["serial"], equivalence=equivalence,
                      modally_spectral=modally_spectral)


def is_modally_spectral(frame: ModalFrame) -> bool:
    """Spectral lattice with compact, directed-join-preserving operators.

    Every finite frame passes; the clauses are still checked one by one so
    the report has something honest to say.
    """
    lat = frame.lattice
    kset = compacts(lat)
    kmask = lat.mask_of(kset)
    # top compact, compacts closed under meets
    if not kmask >> lat.top_i & 1:
        return False
    for i in bits(kmask):
        for j in bits(kmask):
            if not kmask >> lat.meet_t[i][j] & 1:
                return False
    # every element a join of compacts below it
    for a in range(lat.n):
        if lat.join_mask(kmask & lat.down[a]) != a:
            return False
    # operators preserve compactness and directed joins
    for table in (frame.box_i, frame.dia_i):
        for i in bits(kmask):
            if not kmask >> table[i] & 1:
                return False
        if not _preserves_directed_joins(lat, table):
            return False
    return True


def _preserves_directed_joins(lat: FiniteLattice, table) -> bool:
    from .order import DIRECTED_SCAN_LIMIT, _directed_masks
    if lat.n > DIRECTED_SCAN_LIMIT:
        # finite directed sets attain their join; monotone tables got us here
        return True
    for mask in _directed_masks(lat):
        image = 0
        for i in bits(mask):
            image |= 1 << table[i]
        if table[lat.join_mask(mask)] != lat.join_mask(image):
            return False
    return True


def classify_frame(frame: ModalFrame, *, with_spectral: bool = True) -> FrameClass:
    spectral = is_modally_spectral(frame) if with_spectral else None
    return frame_class_from_bits(axiom_bits_of(frame), spectral)


# -- canonical data attached to a character -------------------------------

def canonical_filter(frame: ModalFrame, p: Character) -> PrincipalFilter:
    """The filter of elements whose box the character accepts."""
    lat = frame.lattice
    truth = p.truth_mask
    mask = 0
    for c in range(lat.n):
        if truth >> frame.box_i[c] & 1:
            mask |= 1 << c
    return PrincipalFilter(lat, lat.names[lat.meet_mask(mask)])


def canonical_element(frame: ModalFrame, p: Character) -> str:
    """Join of the elements whose diamond the character rejects."""
    lat = frame.lattice
    truth = p.truth_mask
    mask = 0
    for c in range(lat.n):
        if not truth >> frame.dia_i[c] & 1:
            mask |= 1 << c
    return lat.names[lat.join_mask(mask)]


def is_replete(frame: ModalFrame, p: Character) -> bool:
    """Does the character also reject the diamond of its canonical element?"""
    a = frame.lattice.require(canonical_element(frame, p))
    return not p.truth_mask >> frame.dia_i[a] & 1


def frame_is_replete(frame: ModalFrame) -> bool:
    from .order import characters
    return all(is_replete(frame, p) for p in characters(frame.lattice))


# -- morphisms ------------------------------------------------------------

class ModalFrameMorphism:
    """An element map between frames; classify before trusting it."""

    def __init__(self, source: ModalFrame, target: ModalFrame, mapping: Mapping[str, str]):
        self.source = source
        self.target = target
        self.map_i = tuple(target.lattice.require(mapping[a]) if a in mapping
                           else _missing(a) for a in source.lattice.names)

    def apply(self, a: str) -> str:
        return self.target.lattice.names[self.map_i[self.source.lattice.require(a)]]

    @property
    def table(self) -> dict[str, str]:
        src, tgt = self.source.lattice.names, self.target.lattice.names
        return {src[i]: tgt[j] for i, j in enumerate(self.map_i)}

    def then(self, other: "ModalFrameMorphism") -> "ModalFrameMorphism":
        if other.source is not self.target and other.source != self.target:
            raise StructureError("morphisms do not compose: target/source mismatch")
        out = ModalFrameMorphism.__new__(ModalFrameMorphism)
        out.source, out.target = self.source, other.target
        out.map_i = tuple(other.map_i[j] for j in self.map_i)
        return out

    def __eq__(self, other):
        return (isinstance(other, ModalFrameMorphism) and self.source == other.source
                and self.target == other.target and self.map_i == other.map_i)

    def __hash__(self):
        return hash((self.source, self.target, self.map_i))

    def __repr__(self):
        return f"ModalFrameMorphism({self.table})"


def _missing(a):
    raise StructureError(f"morphism table misses element {a!r}")


@dataclass(frozen=True)
class MorphismClass:
    level: str               # not_morphism | lax | box_strict | diamond_strict | strict
    box_strict: bool
    dia_strict: bool
    witness: str | None = None

    def as_json(self) -> dict:
        return {"level": self.level, "box_strict": self.box_strict,
                "dia_strict": self.dia_strict, "witness": self.witness}


def classify_morphism(m: ModalFrameMorphism) -> MorphismClass:
    """Frame-morphism laws (finite meets, all joins), then the two lax
    operator conditions, graded by which hold as equalities."""
    A, B = m.source.lattice, m.target.lattice
    f = m.map_i

    def fail(why):
        return MorphismClass("not_morphism", False, False, witness=why)

    if f[A.top_i] != B.top_i:
        return fail("top not preserved")
    if f[A.bot_i] != B.bot_i:
        return fail("bottom (empty join) not preserved")
    for a in range(A.n):
        for b in range(a, A.n):
            if f[A.meet_t[a][b]] != B.meet_t[f[a]][f[b]]:
                return fail(f"meet of {A.names[a]!r}, {A.names[b]!r} not preserved")
            if f[A.join_t[a][b]] != B.join_t[f[a]][f[b]]:
                return fail(f"join of {A.names[a]!r}, {A.names[b]!r} not preserved")
    box_ok = dia_ok = True
    for a in range(A.n):
        if not B.leq_i(f[m.source.box_i[a]], m.target.box_i[f[a]]):
            return fail(f"image of box {A.names[a]!r} not below box of image")
        if not B.leq_i(f[m.source.dia_i[a]], m.target.dia_i[f[a]]):
            return fail(f"image of dia {A.names[a]!r} not below dia of image")
        box_ok = box_ok and f[m.source.box_i[a]] == m.target.box_i[f[a]]
        dia_ok = dia_ok and f[m.source.dia_i[a]] == m.target.dia_i[f[a]]
    level = ("strict" if box_ok and dia_ok else
             "box_strict" if box_ok else
             "diamond_strict" if dia_ok else "lax")
    return MorphismClass(level, box_ok, dia_ok)


def morphism_in_category(cls: MorphismClass, strictness: str) -> bool:
    """Is a morphism of this class in the category demanding ``strictness``
    (one of plain/box/diamond/strict)?"""
    if cls.level == "not_morphism":
        return False
    if strictness == "plain":
        return True
    if strictness == "box":
        return cls.box_strict
    if strictness == "diamond":
        return cls.dia_strict
    if strictness == "strict":
        return cls.box_strict and cls.dia_strict
    raise ValueError(f"unknown strictness {strictness!r}")


# -- ideal completion and compacts ---------------------------------------

@dataclass(frozen=True)
class IdealCompletion:
    frame: ModalFrame
    unit: ModalFrameMorphism


def ideal_completion(frame: ModalFrame) -> IdealCompletion:
    """The frame of ideals, operators applied memberwise then down-closed,
    with the principal-ideal unit.

    For the finite inputs handled here the unit is an isomorphism; tests
    and the CLI report verify that rather than assume it.
    """
    lat = frame.lattice
    names = [f"v({a})" for a in lat.names]
    pairs = []
    for i in range(lat.n):
        for j in bits(lat.up[i]):
            pairs.append((names[i], names[j]))
    ideal_lat = validate_lattice(names, pairs)
    box_t, dia_t = {}, {}
    for g in range(lat.n):
        for table, out in ((frame.box_i, box_t), (frame.dia_i, dia_t)):
            members = 0
            for a in bits(lat.down[g]):
                members |= lat.down[table[a]]
            out[names[g]] = names[lat.join_mask(members)]
    ideal_frame = validate_modal_frame(ideal_lat, box_t, dia_t)
    unit = ModalFrameMorphism(frame, ideal_frame, {a: f"v({a})" for a in lat.names})
    return IdealCompletion(ideal_frame, unit)


@dataclass(frozen=True)
class CompactsReflection:
    compact_elements: frozenset[str]
    frame: ModalFrame                       # operators restricted to compacts
    iso_with_completion: bool
    axiom_transfer: dict[str, tuple[bool, bool]]


def compacts_reflection(frame: ModalFrame) -> CompactsReflection:
    """Restrict the frame to its compacts, compare graded axioms on both
    sides, and test whether completing the restriction gives the frame
    back."""
    lat = frame.lattice
    kset = compacts(lat)
    knames = [a for a in lat.names if a in kset]
    kidx = [lat.require(a) for a in knames]
    in_k = set(kidx)
    for t in (frame.box_i, frame.dia_i):
        for i in kidx:
            if t[i] not in in_k:
                raise StructureError(
                    f"operators do not restrict to compacts at {lat.names[i]!r}")
    pairs = [(lat.names[i], lat.names[j]) for i in kidx for j in kidx if lat.leq_i(i, j)]
    klat = validate_lattice(knames, pairs)
    kframe = validate_modal_frame(
        klat,
        {lat.names[i]: lat.names[frame.box_i[i]] for i in kidx},
        {lat.names[i]: lat.names[frame.dia_i[i]] for i in kidx})
    completion = ideal_completion(kframe)
    iso = False
    if completion.frame.lattice.n == lat.n:
        table = {}
        principal = True
        for a in lat.names:
            members = lat.names_of(lat.down[lat.require(a)]) & kset
            kmask = klat.mask_of(members)
            g = klat.join_mask(kmask)
            if klat.down[g] != kmask:
                principal = False     # the trace of a is not an ideal of K
                break
            table[a] = f"v({klat.names[g]})"
        if principal:
            candidate = ModalFrameMorphism(frame, completion.frame, table)
            cls = classify_morphism(candidate)
            iso = cls.level == "strict" and len(set(candidate.map_i)) == lat.n
    full = classify_frame(frame).axioms
    restricted = classify_frame(kframe).axioms
    transfer = {key: (full[key], restricted[key]) for key in AXIOMS}
    return CompactsReflection(frozenset(kset), kframe, iso, transfer)
