"""From spaces to frames: opens under inclusion with interior-clipped
operators, contravariant on morphisms.

Every claim the construction is entitled to (the result is a valid modal
frame, semicontinuity begets the graded axioms, morphism classes beget
strictness) is checked and reported, never assumed.
"""

from __future__ import annotations

from dataclasses import dataclass

from .frames import (ModalFrame, ModalFrameMorphism, classify_frame,
                     classify_morphism, validate_modal_frame)
from .order import FiniteLattice, bits
from .spaces import (NotContinuous, RelationalSpace, SpaceMorphism,
                     classify_space, classify_space_morphism)


def open_name(space: RelationalSpace, mask: int) -> str:
    """Canonical element id for an open: its points in point order."""
    return "{" + ",".join(space.points[i] for i in bits(mask)) + "}"


@dataclass(frozen=True)
class OmegaFrame:
    """The frame of opens plus the element/open correspondence."""

    space: RelationalSpace
    frame: ModalFrame
    opens: tuple[int, ...]               # opens[i] is the mask of element i

    def element_of(self, mask: int) -> str:
        return self.frame.lattice.names[self.opens.index(mask)]

    def mask_of_element(self, name: str) -> int:
        return self.opens[self.frame.lattice.require(name)]


def omega_data(space: RelationalSpace) -> OmegaFrame:
    masks = space.opens                   # already in canonical order
    names = [open_name(space, m) for m in masks]
    lattice = FiniteLattice(*_lattice_tables(names, masks))
    box, dia = {}, {}
    for i, m in enumerate(masks):
        box[names[i]] = open_name(space, space.interior_mask(space.box_mask(m)))
        dia[names[i]] = open_name(space, space.interior_mask(space.dia_mask(m)))
    frame = validate_modal_frame(lattice, box, dia)
    return OmegaFrame(space, frame, tuple(masks))


def _lattice_tables(names, masks):
    # inclusion order of the opens; meets/joins are set operations because
    # the family is closed under both
    n = len(masks)
    pos = {m: i for i, m in enumerate(masks)}
    up = [sum(1 << j for j, mm in enumerate(masks) if masks[i] & ~mm == 0)
          for i in range(n)]
    meet_t = [[pos[masks[i] & masks[j]] for j in range(n)] for i in range(n)]
    join_t = [[pos[masks[i] | masks[j]] for j in range(n)] for i in range(n)]
    return names, up, meet_t, join_t


def omega_space(space: RelationalSpace) -> ModalFrame:
    """The modal frame of opens of a valid space."""
    return omega_data(space).frame


def omega_morphism(f: SpaceMorphism) -> ModalFrameMorphism:
    """Preimage, as a map from the opens of the target to those of the
    source.  Raises :class:`NotContinuous` when a preimage escapes."""
    cls = classify_space_morphism(f)
    if not cls.continuous:
        raise NotContinuous(cls.witnesses.get("continuity", "map is not continuous"))
    src = omega_data(f.target)
    tgt = omega_data(f.source)
    table = {open_name(f.target, v): open_name(f.source, f.preimage_mask(v))
             for v in f.target.opens}
    return ModalFrameMorphism(src.frame, tgt.frame, table)


def omega_class_report(space: RelationalSpace) -> dict:
    """Space classes on one side, frame axioms on the other, and the
    entitled implications checked between them."""
    scls = classify_space(space)
    fcls = classify_frame(omega_space(space), with_spectral=False)
    implications = [
        ("any space gives a modal frame", True, fcls.modal),
        ("lower semicontinuous gives a lower frame", scls.lsc, fcls.lower),
        ("continuous gives a convex frame", scls.continuous, fcls.convex),
        ("serial relation gives a serial frame", scls.serial, fcls.serial),
        ("equivalence space gives an equivalence frame",
         scls.equivalence_space, fcls.equivalence),
    ]
    entries = [{"name": name, "premise": pre, "conclusion": conc,
                "holds": (not pre) or conc}
               for name, pre, conc in implications]
    coincidences = [e["name"] for e in entries if e["conclusion"] and not e["premise"]]
    return {"space": scls.as_json(), "frame": fcls.as_json(),
            "implications": entries,
            "unforced_conclusions": coincidences,
            "pass": all(e["holds"] for e in entries)}


def omega_morphism_report(f: SpaceMorphism) -> dict:
    """Morphism-side counterpart: which strictness the preimage map earns
    from the class of the point map."""
    scls = classify_space_morphism(f)
    m = omega_morphism(f)
    mcls = classify_morphism(m)
    target_cls = classify_space(f.target)
    implications = [
        ("p-morphisms give modal frame morphisms",
         scls.continuous and scls.preserves_relation and scls.p_condition,
         mcls.level != "not_morphism"),
        ("relation preservation into an lsc target gives diamond strictness",
         scls.continuous and scls.preserves_relation and target_cls.lsc,
         mcls.dia_strict),
        ("the complement condition into a usc target gives box strictness",
         scls.continuous and scls.q_condition and target_cls.usc,
         mcls.box_strict),
    ]
    entries = [{"name": name, "premise": pre, "conclusion": conc,
                "holds": (not pre) or conc}
               for name, pre, conc in implications]
    return {"map": scls.as_json(), "preimage_map": mcls.as_json(),
            "implications": entries,
            "pass": all(e["holds"] for e in entries)}
