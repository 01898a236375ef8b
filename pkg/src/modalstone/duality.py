"""Executable verdicts for the frame/space correspondence: spatiality,
sobriety, the triangle identities, and the adjunction bijection."""

from __future__ import annotations

from dataclasses import dataclass, field
from itertools import permutations, product
from typing import Mapping

from .order import bits
from .frames import (ModalFrame, ModalFrameMorphism, classify_frame,
                     classify_morphism, morphism_in_category)
from .spaces import (RelationalSpace, SpaceMorphism, classify_space,
                     classify_space_morphism, space_morphism_in_category)
from .omega import omega_data, omega_morphism
from .points import (A_MAXIMAL, FILTER_BELOW, MODES, ConstructionMode,
                     ImageNotAPoint, ModeMismatch, build_point_space, f_sharp,
                     frame_in_mode_objects, get_mode,
                     point_functor_on_morphism, psi, space_in_mode_objects)


@dataclass(frozen=True)
class Verdict:
    """Outcome of one check: named sub-checks plus witness details."""

    subject: str
    mode: str
    passed: bool
    checks: dict[str, bool]
    details: dict = field(default_factory=dict)

    def as_json(self) -> dict:
        return {"subject": self.subject, "mode": self.mode,
                "passed": self.passed, "checks": dict(self.checks),
                "details": dict(self.details)}


def _mode(mode: ConstructionMode | str) -> ConstructionMode:
    return get_mode(mode) if isinstance(mode, str) else mode


def _categories(mode: ConstructionMode) -> dict:
    """Which morphism categories a verdict was computed in."""
    return {"frame_morphisms": mode.frame_morphisms,
            "space_morphisms": mode.space_morphisms}


# -- spatiality -----------------------------------------------------------

def spatiality_guaranteed(frame: ModalFrame, mode: ConstructionMode | str) -> bool:
    """Whether the comparison map into the opens of the point space is
    promised to be an isomorphism for this frame in this mode, without
    running the check."""
    mode = _mode(mode)
    if mode.name in ("relsp", "relspq"):
        return True
    if mode.name in ("relspq_l", "relspq_u"):
        return False
    cls = classify_frame(frame, with_spectral=False)
    if mode.name in ("relsp_l", "relspq_c"):
        return cls.convex
    if mode.name == "eqspq":
        return cls.convex and cls.equivalence
    return False


def check_spatial(frame: ModalFrame, mode: ConstructionMode | str) -> Verdict:
    """Build the point space and test whether the comparison map is an
    isomorphism: injective, onto the opens, and strict on both operators."""
    mode = _mode(mode)
    if not frame_in_mode_objects(frame, mode):
        raise ModeMismatch(
            f"frame is not a {mode.frame_objects} frame, required by {mode.name}")
    ps = build_point_space(frame, mode)
    phi = ps.phi_morphism()
    cls = classify_morphism(phi)
    lat = frame.lattice
    details: dict = {"points": list(ps.labels), **_categories(mode)}

    injective = True
    seen: dict[int, int] = {}
    for i, m in enumerate(ps.phi_masks):
        if m in seen:
            injective = False
            details["injectivity"] = (
                f"{lat.names[seen[m]]!r} and {lat.names[i]!r} have the same image")
            break
        seen[m] = i
    surjective = set(ps.phi_masks) == set(ps.space().opens)
    if not surjective:
        details["surjectivity"] = "an open of the point space is not an image"
    if cls.witness:
        details["morphism"] = cls.witness
    if not cls.box_strict or not cls.dia_strict:
        details["strictness"] = _strictness_witness(phi, cls)

    checks = {"frame_morphism": cls.level != "not_morphism",
              "injective": injective,
              "surjective": surjective,
              "box_strict": cls.box_strict,
              "diamond_strict": cls.dia_strict}
    return Verdict("spatial", mode.name, all(checks.values()), checks, details)


def _strictness_witness(phi: ModalFrameMorphism, cls) -> str:
    A, B = phi.source, phi.target
    for i, name in enumerate(A.lattice.names):
        if not cls.box_strict and phi.map_i[A.box_i[i]] != B.box_i[phi.map_i[i]]:
            return f"box of {name!r} is not preserved exactly"
        if not cls.dia_strict and phi.map_i[A.dia_i[i]] != B.dia_i[phi.map_i[i]]:
            return f"dia of {name!r} is not preserved exactly"
    return "strictness failure without witness"  # pragma: no cover


# -- sobriety -------------------------------------------------------------

def check_sober(space: RelationalSpace, mode: ConstructionMode | str) -> Verdict:
    """Test whether the unit into the points of the opens is an isomorphism
    of relational spaces: a relation-preserving homeomorphism whose inverse
    also preserves the relation."""
    mode = _mode(mode)
    unit = psi(space, mode)
    tgt = unit.target
    ucls = classify_space_morphism(unit)
    details: dict = {"unit": unit.table, **_categories(mode)}

    injective = len(set(unit.map_i)) == space.n
    surjective = len(set(unit.map_i)) == tgt.n
    if not injective:
        firsts: dict[int, str] = {}
        for x, j in zip(space.points, unit.map_i):
            if j in firsts:
                details["injectivity"] = (
                    f"{firsts[j]!r} and {x!r} have the same unit image")
                break
            firsts[j] = x
    if not surjective:
        missed = next(j for j in range(tgt.n) if j not in set(unit.map_i))
        details["surjectivity"] = f"point {tgt.points[missed]!r} is not a unit image"

    # the inverse direction: related images must come from related points
    reflects = True
    for x in range(space.n):
        for y in range(space.n):
            if (tgt.succ[unit.map_i[x]] >> unit.map_i[y] & 1
                    and not space.succ[x] >> y & 1):
                reflects = False
                details["reflection"] = (
                    f"images of {space.points[x]!r}, {space.points[y]!r} are "
                    "related but the points are not")
                break
        if not reflects:
            break

    checks = {"injective": injective,
              "surjective": surjective,
              "continuous": ucls.continuous,
              "open_map": ucls.open_map,
              "preserves_relation": ucls.preserves_relation,
              "reflects_relation": reflects}
    return Verdict("sober", mode.name, all(checks.values()), checks, details)


# -- triangle identities --------------------------------------------------

def check_triangles(obj: ModalFrame | RelationalSpace,
                    mode: ConstructionMode | str) -> Verdict:
    """Compose the unit with the functor image of the comparison map and
    test the identity on the nose.  A frame is tested on its point space,
    a space on its frame of opens."""
    mode = _mode(mode)
    if isinstance(obj, ModalFrame):
        return _triangle_frame(obj, mode)
    if isinstance(obj, RelationalSpace):
        return _triangle_space(obj, mode)
    raise TypeError(f"expected a frame or a space, got {type(obj).__name__}")


def _triangle_frame(frame: ModalFrame, mode: ConstructionMode) -> Verdict:
    if not frame_in_mode_objects(frame, mode):
        raise ModeMismatch(
            f"frame is not a {mode.frame_objects} frame, required by {mode.name}")
    ps = build_point_space(frame, mode)
    sp = ps.space()
    comp = psi(sp, mode).then(point_functor_on_morphism(ps.phi_morphism(), mode))
    identity = comp.source == comp.target and all(
        comp.apply(x) == x for x in sp.points)
    details: dict = {"side": "points", **_categories(mode)}
    if not identity:
        details["composite"] = comp.table
    return Verdict("triangles", mode.name, identity,
                   {"identity_on_the_nose": identity}, details)


def _triangle_space(space: RelationalSpace, mode: ConstructionMode) -> Verdict:
    unit = psi(space, mode)
    od = omega_data(space)
    phi = build_point_space(od.frame, mode).phi_morphism()
    comp = phi.then(omega_morphism(unit))
    identity = comp.source == comp.target and all(
        comp.apply(u) == u for u in od.frame.lattice.names)
    details: dict = {"side": "opens", **_categories(mode)}
    if not identity:
        details["composite"] = comp.table
    return Verdict("triangles", mode.name, identity,
                   {"identity_on_the_nose": identity}, details)


# -- hom-set enumeration and the adjunction bijection ---------------------

def enumerate_frame_homs(source: ModalFrame, target: ModalFrame,
                         strictness: str = "plain") -> list[ModalFrameMorphism]:
    """Every morphism of the given strictness between two frames.

    A join-preserving map is fixed by its values on join-irreducible
    elements, so only those assignments are tried; each extension is then
    screened by the full morphism laws.
    """
    A, B = source.lattice, target.lattice
    gens = [A.require(g) for g in A.join_irreducibles()]
    below = [tuple(k for k, g in enumerate(gens) if A.leq_i(g, a))
             for a in range(A.n)]
    seen: set[tuple[int, ...]] = set()
    out = []
    for assign in product(range(B.n), repeat=len(gens)):
        masks = [0] * A.n
        for a, ks in enumerate(below):
            for k in ks:
                masks[a] |= 1 << assign[k]
        table = tuple(B.join_mask(m) for m in masks)
        if table in seen:
            continue
        seen.add(table)
        m = ModalFrameMorphism(source, target,
                               {A.names[a]: B.names[table[a]] for a in range(A.n)})
        if morphism_in_category(classify_morphism(m), strictness):
            out.append(m)
    return out


def enumerate_space_homs(source: RelationalSpace, target: RelationalSpace,
                         kind: str = "p") -> list[SpaceMorphism]:
    """Every map of the given kind (``p`` or ``pq``) between two spaces,
    by exhausting the function space."""
    if source.n == 0:
        return [SpaceMorphism(source, target, {})]
    out = []
    for assign in product(target.points, repeat=source.n):
        m = SpaceMorphism(source, target, dict(zip(source.points, assign)))
        if space_morphism_in_category(classify_space_morphism(m), kind):
            out.append(m)
    return out


# The lower pair mode admits plain morphisms into its construction, but
# the mate of a map that is not diamond-strict need not land on a point
# (its dead-element join can fall short of the maximal one).  The
# adjunction therefore lives in the diamond-strict subcategory, and the
# verdict surfaces how many wider morphisms were left out.
_ADJUNCTION_FRAME_CATEGORY = {"relsp_l": "diamond"}


def check_adjunction_bijection(frame: ModalFrame, space: RelationalSpace,
                               mode: ConstructionMode | str) -> Verdict:
    """Enumerate both hom-sets and verify that taking mates is a bijection
    between them, inverse to composing with the comparison map."""
    mode = _mode(mode)
    if not frame_in_mode_objects(frame, mode):
        raise ModeMismatch(
            f"frame is not a {mode.frame_objects} frame, required by {mode.name}")
    if not space_in_mode_objects(space, mode):
        raise ModeMismatch(
            f"space does not satisfy {mode.space_objects}, required by {mode.name}")
    od = omega_data(space)
    ps = build_point_space(frame, mode)
    phi = ps.phi_morphism()
    strictness = _ADJUNCTION_FRAME_CATEGORY.get(mode.name, mode.frame_morphisms)
    frame_homs = enumerate_frame_homs(frame, od.frame, strictness)
    space_homs = enumerate_space_homs(space, ps.space(), mode.space_morphisms)
    details: dict = {"frame_homs": len(frame_homs),
                     "space_homs": len(space_homs), **_categories(mode)}
    if strictness != mode.frame_morphisms:
        wider = enumerate_frame_homs(frame, od.frame, mode.frame_morphisms)
        details["frame_morphisms"] = strictness
        details["construction_morphisms"] = mode.frame_morphisms
        details["wider_source_homs"] = len(wider)
        details["note"] = ("bijection taken in the diamond-strict frame "
                           "category; the construction admits "
                           f"{len(wider) - len(frame_homs)} more morphisms "
                           "whose mates need not be points")

    mates_land = frame_round = True
    for f in frame_homs:
        try:
            g = f_sharp(f, space, mode, verify=False)
        except ImageNotAPoint as err:
            mates_land = frame_round = False
            details["mate_escapes"] = f.table
            details["mate_failure"] = str(err)
            continue
        if g not in space_homs:
            mates_land = False
            details["mate_escapes"] = f.table
        if phi.then(omega_morphism(g)) != f:
            frame_round = False
            details["frame_round_trip"] = f.table
    transposes_land = space_round = True
    for g in space_homs:
        f = phi.then(omega_morphism(g))
        if f not in frame_homs:
            transposes_land = False
            details["transpose_escapes"] = g.table
        if f_sharp(f, space, mode, verify=False) != g:
            space_round = False
            details["space_round_trip"] = g.table

    checks = {"mates_land": mates_land,
              "transposes_land": transposes_land,
              "frame_round_trip": frame_round,
              "space_round_trip": space_round,
              "counts_equal": len(frame_homs) == len(space_homs)}
    return Verdict("adjunction", mode.name, all(checks.values()), checks, details)


# -- isomorphism search ---------------------------------------------------

def spaces_isomorphic(a: RelationalSpace, b: RelationalSpace):
    """Search for a relation-preserving homeomorphism with relation-
    reflecting inverse; returns ``(True, mapping)`` or ``(False, None)``.

    There is no canonical form to compare, so bijections are tried
    directly, screened first by cheap per-point invariants.
    """
    if a.n != b.n or len(a.opens) != len(b.opens):
        return False, None

    def profile(sp, x):
        return (sp.succ[x].bit_count(),
                sum(1 << x & u != 0 for u in sp.opens),
                sum(sp.succ[y] >> x & 1 for y in range(sp.n)))

    pa = [profile(a, x) for x in range(a.n)]
    pb = [profile(b, x) for x in range(b.n)]
    if sorted(pa) != sorted(pb):
        return False, None
    for perm in permutations(range(b.n)):
        if any(pa[x] != pb[perm[x]] for x in range(a.n)):
            continue
        if any(a.succ[x] >> y & 1 != b.succ[perm[x]] >> perm[y] & 1
               for x in range(a.n) for y in range(a.n)):
            continue
        images = {sum(1 << perm[x] for x in bits(u)) for u in a.opens}
        if images == set(b.opens):
            return True, {a.points[x]: b.points[perm[x]] for x in range(a.n)}
    return False, None


# -- aggregate reports ----------------------------------------------------

def duality_report(frames: Mapping[str, ModalFrame],
                   spaces: Mapping[str, RelationalSpace],
                   modes=None) -> dict:
    """Spatiality of every frame and sobriety of every space, in every
    listed mode that accepts it.  ``passed`` means no promised spatiality
    failed; unpromised failures are reported but do not fail the run."""
    if modes is None:
        modes = list(MODES)
    elif isinstance(modes, str):
        modes = [modes]
    modes = [_mode(m) for m in modes]
    report: dict = {"frames": {}, "spaces": {}}
    passed = True
    for name, fr in frames.items():
        per = {}
        for mode in modes:
            if not frame_in_mode_objects(fr, mode):
                continue
            v = check_spatial(fr, mode)
            entry = v.as_json()
            entry["guaranteed"] = spatiality_guaranteed(fr, mode)
            if entry["guaranteed"] and not v.passed:
                passed = False
            per[mode.name] = entry
        report["frames"][name] = per
    for name, sp in spaces.items():
        per = {}
        for mode in modes:
            if not space_in_mode_objects(sp, mode):
                continue
            per[mode.name] = check_sober(sp, mode).as_json()
        report["spaces"][name] = per
    report["passed"] = passed
    return report


_AXIOMS_FOR = (("reflexive", ("box_deflationary", "dia_inflationary")),
               ("symmetric", ("dia_box_deflationary", "box_dia_inflationary")),
               ("transitive", ("box_transitive", "dia_transitive")),
               ("serial", ("serial",)))


def correspondence_report(obj: ModalFrame | RelationalSpace,
                          mode: ConstructionMode | str = "relspq_c") -> dict:
    """Axiom pairs against the matching relational property.

    For a frame: does each satisfied axiom pair force the property on the
    constructed relation?  Guaranteed only in modes that pin the rejected
    element and bound the filter.  For a space: the direction through the
    opens; guaranteed for seriality always, for the rest only on
    equivalence relations.  ``passed`` covers the guaranteed rows.
    """
    if isinstance(obj, ModalFrame):
        return _correspondence_frame(obj, _mode(mode))
    if isinstance(obj, RelationalSpace):
        return _correspondence_space(obj)
    raise TypeError(f"expected a frame or a space, got {type(obj).__name__}")


def _correspondence_frame(frame: ModalFrame, mode: ConstructionMode) -> dict:
    if not frame_in_mode_objects(frame, mode):
        raise ModeMismatch(
            f"frame is not a {mode.frame_objects} frame, required by {mode.name}")
    guaranteed = (A_MAXIMAL in mode.prepoint_conditions
                  and FILTER_BELOW in mode.prepoint_conditions)
    fcls = classify_frame(frame, with_spectral=False)
    scls = classify_space(build_point_space(frame, mode).space())
    have = {"reflexive": scls.reflexive, "symmetric": scls.symmetric,
            "transitive": scls.transitive, "serial": scls.serial}
    rows = []
    passed = True
    for prop, axioms in _AXIOMS_FOR:
        assumed = all(fcls.axioms[a] for a in axioms)
        holds = not assumed or have[prop]
        if guaranteed and not holds:
            passed = False
        rows.append({"property": prop, "axioms": list(axioms),
                     "axioms_hold": assumed, "relation_has_property": have[prop],
                     "holds": holds, "guaranteed": guaranteed})
    return {"subject": "correspondence", "side": "frame", "mode": mode.name,
            "rows": rows, "passed": passed}


def _correspondence_space(space: RelationalSpace) -> dict:
    scls = classify_space(space)
    fcls = classify_frame(omega_data(space).frame, with_spectral=False)
    equivalence = scls.reflexive and scls.symmetric and scls.transitive
    rows = []
    passed = True
    for prop, axioms in _AXIOMS_FOR:
        assumed = getattr(scls, prop)
        consequent = all(fcls.axioms[a] for a in axioms)
        holds = not assumed or consequent
        guaranteed = prop == "serial" or equivalence
        if guaranteed and not holds:
            passed = False
        rows.append({"property": prop, "axioms": list(axioms),
                     "relation_has_property": assumed, "axioms_hold": consequent,
                     "holds": holds, "guaranteed": guaranteed})
    return {"subject": "correspondence", "side": "space", "mode": None,
            "rows": rows, "passed": passed}
