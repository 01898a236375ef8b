"""Aggregate verification over exhaustively enumerated instances: the
opens-side soundness sweep and the frame-side duality sweep."""

from __future__ import annotations

from .order import StructureError
from .frames import ModalFrame, frame_class_from_bits
from .omega import omega_class_report
from .points import MODES, build_point_space
from .duality import check_sober, check_spatial, correspondence_report
from .enumerate import all_distributive_lattices, all_spaces, modal_operator_pairs

MAX_SPACE_POINTS = 4
MAX_LATTICE_ELEMENTS = 8
DEFAULT_SPACE_POINTS = 3
DEFAULT_LATTICE_ELEMENTS = 5


class BoundTooLarge(StructureError):
    pass


def _space_tag(space) -> dict:
    return {"points": list(space.points),
            "opens": [sorted(space.names_of(u)) for u in space.opens],
            "relation": sorted(space.relation)}


def _frame_tag(frame: ModalFrame) -> dict:
    return {"elements": list(frame.lattice.names),
            "box": frame.box_table, "dia": frame.dia_table}


def omega_soundness_sweep(max_points: int = DEFAULT_SPACE_POINTS, *,
                          up_to_iso: bool = False) -> dict:
    """Run the opens-construction implications over every space with at
    most ``max_points`` points."""
    if max_points > MAX_SPACE_POINTS:
        raise BoundTooLarge(
            f"at most {MAX_SPACE_POINTS} points (asked for {max_points})")
    checked = 0
    violations = []
    for n in range(max_points + 1):
        for space in all_spaces(n, up_to_iso=up_to_iso):
            report = omega_class_report(space)
            checked += 1
            if not report["pass"]:
                violations.append({**_space_tag(space), "report": report})
    return {"subject": "omega-soundness", "max_points": max_points,
            "spaces_checked": checked, "violations": violations,
            "passed": not violations}


def frame_duality_sweep(max_elements: int = DEFAULT_LATTICE_ELEMENTS,
                        modes: tuple[str, ...] = ("relsp", "relspq", "relspq_c")
                        ) -> dict:
    """Walk every modal operator pair over every distributive lattice up
    to the bound and, per applicable mode, check spatiality, sobriety of
    the point space, axiom/relation correspondence, and the shape of the
    successor images (closed sets for pair points, lenses for triples)."""
    if max_elements > MAX_LATTICE_ELEMENTS:
        raise BoundTooLarge(
            f"at most {MAX_LATTICE_ELEMENTS} elements (asked for {max_elements})")
    stages = {name: {"checked": 0, "violations": []}
              for name in ("spatial", "sober", "correspondence", "images")}
    lattices = all_distributive_lattices(max_elements)
    frames = 0

    def offend(stage: str, frame: ModalFrame, mode_name: str, detail):
        stages[stage]["violations"].append(
            {**_frame_tag(frame), "mode": mode_name, "detail": detail})

    for lattice in lattices:
        for box, dia, flags in modal_operator_pairs(lattice):
            frame = ModalFrame(lattice, box, dia)
            fcls = frame_class_from_bits(flags, None)
            frames += 1
            for mode_name in modes:
                mode = MODES[mode_name]
                if mode.frame_objects == "convex" and not fcls.convex:
                    continue
                if mode.frame_objects == "equivalence" and not fcls.equivalence:
                    continue
                try:
                    verdict = check_spatial(frame, mode)
                    stages["spatial"]["checked"] += 1
                    if not verdict.passed:
                        offend("spatial", frame, mode_name, verdict.as_json())
                    ps = build_point_space(frame, mode)
                    sober = check_sober(ps.space(), mode)
                    stages["sober"]["checked"] += 1
                    if not sober.passed:
                        offend("sober", frame, mode_name, sober.as_json())
                    _check_images(frame, mode, ps, stages, offend)
                    if mode.name == "relspq_c":
                        corr = correspondence_report(frame, mode)
                        stages["correspondence"]["checked"] += 1
                        if not corr["passed"]:
                            offend("correspondence", frame, mode_name, corr)
                except StructureError as err:
                    offend("spatial", frame, mode_name,
                           f"{type(err).__name__}: {err}")
    passed = all(not st["violations"] for st in stages.values())
    return {"subject": "frame-duality", "max_elements": max_elements,
            "modes": list(modes), "lattices": len(lattices),
            "frames_checked": frames, "stages": stages, "passed": passed}


def _check_images(frame, mode, ps, stages, offend):
    # successor-image shape is asserted for the two base modes only
    if mode.name not in ("relsp", "relspq"):
        return
    sp = ps.space()
    stages["images"]["checked"] += 1
    for i, label in enumerate(sp.points):
        succ = sp.succ[i]
        if mode.name == "relsp":
            if sp.closure_mask(succ) != succ:
                lens = sp.closure_mask(succ) & sp.saturation_mask(succ) == succ
                extra = " (the set is still a lens)" if lens else ""
                offend("images", frame, mode.name,
                       f"successors of {label} are not closed{extra}")
                return
        elif sp.closure_mask(succ) & sp.saturation_mask(succ) != succ:
            offend("images", frame, mode.name,
                   f"successors of {label} are not a lens")
            return


def run_sweeps(max_points: int = DEFAULT_SPACE_POINTS,
               max_elements: int = DEFAULT_LATTICE_ELEMENTS, *,
               up_to_iso: bool = False,
               modes: tuple[str, ...] = ("relsp", "relspq", "relspq_c")) -> dict:
    """Both sweeps with one aggregate verdict."""
    omega = omega_soundness_sweep(max_points, up_to_iso=up_to_iso)
    duality = frame_duality_sweep(max_elements, modes=modes)
    return {"subject": "sweep", "omega": omega, "duality": duality,
            "passed": omega["passed"] and duality["passed"]}
