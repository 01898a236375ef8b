"""Command-line surface over the whole package.

Verdicts go to stdout as canonical JSON (``--human`` for prose).  Exit codes:
0 the check passed, 1 it ran and failed, 2 the input could not be used.
"""

from __future__ import annotations

import argparse
import dataclasses
import sys

from . import __version__, jsonio
from .order import StructureError
from .frames import (classify_frame, classify_morphism, core_violation_report,
                     ideal_completion, is_modally_spectral)
from .spaces import classify_space
from .omega import omega_data, omega_class_report
from .points import (MODES, PreconditionViolated, SelfCheckFailed,
                     build_point_space)
from .duality import (check_adjunction_bijection, check_sober, check_spatial,
                      check_triangles, correspondence_report, duality_report)
from .formulas import Model, evaluate_mask, parse, to_text
from .formulas import bisim_invariance_check
from .sweep import (DEFAULT_LATTICE_ELEMENTS, DEFAULT_SPACE_POINTS,
                    run_sweeps)
from .kernels import IMPLEMENTATION

PASS, FAIL, INVALID = 0, 1, 2


# -- rendering ------------------------------------------------------------

def _human_lines(value, key=None, indent=0):
    pad = "  " * indent
    label = f"{key}: " if key is not None else ""
    if isinstance(value, bool):
        yield f"{pad}{label}{'yes' if value else 'no'}"
    elif isinstance(value, dict):
        if key is not None:
            yield f"{pad}{key}:"
        for k in value:
            yield from _human_lines(value[k], k, indent + (key is not None))
    elif isinstance(value, (list, tuple)):
        if all(not isinstance(v, (dict, list, tuple)) for v in value):
            yield f"{pad}{label}{', '.join(str(v) for v in value) or '(none)'}"
        else:
            yield f"{pad}{label}"
            for v in value:
                yield from _human_lines(v, None, indent + 1)
    else:
        yield f"{pad}{label}{value}"


def _emit(args, code: int, result: dict) -> int:
    if args.human:
        head = {PASS: "pass", FAIL: "FAIL", INVALID: "invalid input"}[code]
        print(head)
        for line in _human_lines(result):
            print(line)
    else:
        sys.stdout.write(jsonio.dumps(result))
    return code


# -- commands -------------------------------------------------------------

def cmd_validate(args) -> tuple[int, dict]:
    kind, doc = jsonio.read_document(args.file)
    result = {"command": "validate", "kind": kind, "file": args.file}
    if kind in ("morphism", "frame-morphism", "space-morphism",
                "valuation", "valuation-pair"):
        result["valid"] = True
        result["note"] = "schema check only; this document needs endpoints"
        return PASS, result
    try:
        obj = jsonio.object_from_doc(kind, doc)
    except StructureError as err:
        result["valid"] = False
        result["error"] = str(err)
        if kind == "frame":
            try:
                lat = jsonio.lattice_from_doc(doc["lattice"])
                result["violations"] = core_violation_report(
                    lat, doc["box"], doc["dia"])
            except StructureError:
                pass
        return FAIL, result
    result["valid"] = True
    if kind == "lattice":
        result["elements"] = len(obj.names)
    elif kind == "frame":
        result["class"] = classify_frame(obj).as_json()
    elif kind == "space":
        result["class"] = classify_space(obj).as_json()
    return PASS, result


def cmd_omega(args) -> tuple[int, dict]:
    space = jsonio.space_from_doc(jsonio.read_document(args.file)[1])
    report = omega_class_report(space)
    result = {"command": "omega", "frame": jsonio.frame_to_doc(omega_data(space).frame),
              "report": report}
    return (PASS if report["pass"] else FAIL), result


def cmd_points(args) -> tuple[int, dict]:
    frame = jsonio.frame_from_doc(jsonio.read_document(args.file)[1])
    trace: list | None = [] if args.trace_pruning else None
    ps = build_point_space(frame, args.mode, trace)
    space = ps.space()
    result = {"command": "points", "mode": args.mode,
              "count": space.n, "points": list(space.points),
              "space": jsonio.space_to_doc(space)}
    if trace is not None:
        result["trace"] = trace
    if args.emit:
        with open(args.emit, "w", encoding="utf-8") as fh:
            fh.write(jsonio.dumps(result["space"]))
        result["emitted"] = args.emit
    return PASS, result


def _load_object(path):
    kind, doc = jsonio.read_document(path)
    return kind, jsonio.object_from_doc(kind, doc)


def cmd_check(args) -> tuple[int, dict]:
    if args.subject == "spatial":
        frame = jsonio.frame_from_doc(jsonio.read_document(args.file)[1])
        verdict = check_spatial(frame, args.mode)
    elif args.subject == "sober":
        space = jsonio.space_from_doc(jsonio.read_document(args.file)[1])
        verdict = check_sober(space, args.mode)
    elif args.subject == "triangles":
        verdict = check_triangles(_load_object(args.file)[1], args.mode)
    elif args.subject == "adjunction":
        frame = jsonio.frame_from_doc(jsonio.read_document(args.frame)[1])
        space = jsonio.space_from_doc(jsonio.read_document(args.space)[1])
        verdict = check_adjunction_bijection(frame, space, args.mode)
    elif args.subject == "correspondence":
        report = correspondence_report(_load_object(args.file)[1], args.mode)
        return (PASS if report["passed"] else FAIL), report
    else:  # duality
        frames, spaces = {}, {}
        for path in args.files:
            kind, obj = _load_object(path)
            stem = path.rsplit("/", 1)[-1].split(".")[0]
            if kind == "frame":
                frames[stem] = obj
            elif kind == "space":
                spaces[stem] = obj
            else:
                raise jsonio.InvalidDocument(
                    f"{path}: duality wants frame/space documents, got {kind}")
        modes = tuple(args.modes.split(","))
        report = duality_report(frames, spaces, modes)
        return (PASS if report["passed"] else FAIL), report
    result = verdict.as_json()
    return (PASS if verdict.passed else FAIL), result


def cmd_modelcheck(args) -> tuple[int, dict]:
    space = jsonio.space_from_doc(jsonio.read_document(args.file)[1])
    valuation = jsonio.valuation_from_doc(jsonio.read_document(args.valuation)[1])
    formula = parse(args.formula, allow_imp=not args.no_imp)
    model = Model(space, valuation)
    mask = evaluate_mask(model, formula)
    holds = sorted(space.names_of(mask))
    result = {"command": "modelcheck", "formula": to_text(formula),
              "holds_at": holds, "valid": mask == space.full}
    if args.point is not None:
        sat = bool(mask >> space.require(args.point) & 1)
        result["point"] = args.point
        result["satisfied"] = sat
        return (PASS if sat else FAIL), result
    return (PASS if result["valid"] else FAIL), result


def cmd_bisim(args) -> tuple[int, dict]:
    source = jsonio.space_from_doc(jsonio.read_document(args.source)[1])
    target = jsonio.space_from_doc(jsonio.read_document(args.target)[1])
    mapping = jsonio.space_morphism_from_doc(
        jsonio.read_document(args.map)[1], source, target)
    v_source, v_target = jsonio.valuation_pair_from_doc(
        jsonio.read_document(args.valuations)[1])
    try:
        verdict = bisim_invariance_check(mapping, v_source, v_target,
                                         depth=args.depth,
                                         with_imp=not args.no_imp)
    except SelfCheckFailed as err:
        return FAIL, {"command": "bisim", "passed": False,
                      "counterexample": str(err)}
    result = {"command": "bisim", **dataclasses.asdict(verdict)}
    return PASS, result


def cmd_idl(args) -> tuple[int, dict]:
    frame = jsonio.frame_from_doc(jsonio.read_document(args.file)[1])
    completion = ideal_completion(frame)
    unit_cls = classify_morphism(completion.unit)
    bijective = (len(set(completion.unit.map_i)) == frame.lattice.n
                 == completion.frame.lattice.n)
    result = {"command": "idl",
              "ideal_elements": completion.frame.lattice.n,
              "modally_spectral": is_modally_spectral(completion.frame),
              "unit_level": unit_cls.level,
              "unit_bijective": bijective}
    ok = result["modally_spectral"] and bijective and unit_cls.level == "strict"
    return (PASS if ok else FAIL), result


def cmd_sweep(args) -> tuple[int, dict]:
    report = run_sweeps(args.max_points, args.max_elements,
                        up_to_iso=args.up_to_iso,
                        modes=tuple(args.modes.split(",")))
    return (PASS if report["passed"] else FAIL), report


# -- argument surface -----------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--human", action="store_true",
                        help="prose output instead of JSON")

    parser = argparse.ArgumentParser(
        prog="modalstone",
        description="Validate, construct, and cross-check modal frames "
                    "and relational spaces.")
    parser.add_argument("--version", action="version",
                        version=f"modalstone {__version__} ({IMPLEMENTATION} kernel)")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("validate", parents=[common],
                       help="schema + structural validation of one document")
    p.add_argument("file")
    p.set_defaults(handler=cmd_validate)

    p = sub.add_parser("omega", parents=[common],
                       help="frame of opens of a space, with the class report")
    p.add_argument("file")
    p.set_defaults(handler=cmd_omega)

    p = sub.add_parser("points", parents=[common],
                       help="point space of a frame in a construction mode")
    p.add_argument("file")
    p.add_argument("--mode", required=True, choices=sorted(MODES))
    p.add_argument("--emit", metavar="PATH",
                   help="also write the space document to PATH")
    p.add_argument("--trace-pruning", action="store_true",
                   help="record every deleted pre-point with its failing "
                        "condition and element")
    p.set_defaults(handler=cmd_points)

    p = sub.add_parser("check", help="duality checks")
    csub = p.add_subparsers(dest="subject", required=True)
    for subject in ("spatial", "sober", "triangles"):
        q = csub.add_parser(subject, parents=[common])
        q.add_argument("file")
        q.add_argument("--mode", required=True, choices=sorted(MODES))
        q.set_defaults(handler=cmd_check, subject=subject)
    q = csub.add_parser("adjunction", parents=[common])
    q.add_argument("frame")
    q.add_argument("space")
    q.add_argument("--mode", required=True, choices=sorted(MODES))
    q.set_defaults(handler=cmd_check, subject="adjunction")
    q = csub.add_parser("correspondence", parents=[common])
    q.add_argument("file")
    q.add_argument("--mode", default="relspq_c", choices=sorted(MODES))
    q.set_defaults(handler=cmd_check, subject="correspondence")
    q = csub.add_parser("duality", parents=[common])
    q.add_argument("files", nargs="+")
    q.add_argument("--modes", default="relsp,relspq,relspq_c",
                   help="comma-separated construction modes")
    q.set_defaults(handler=cmd_check, subject="duality")

    p = sub.add_parser("modelcheck", parents=[common],
                       help="evaluate a formula over a space")
    p.add_argument("file")
    p.add_argument("--valuation", required=True)
    p.add_argument("--formula", required=True)
    p.add_argument("--point", help="judge at this point instead of validity")
    p.add_argument("--no-imp", action="store_true",
                   help="reject -> in the formula")
    p.set_defaults(handler=cmd_modelcheck)

    p = sub.add_parser("bisim", parents=[common],
                       help="depth-bounded invariance across an open pq-map")
    p.add_argument("source")
    p.add_argument("target")
    p.add_argument("--map", required=True)
    p.add_argument("--valuations", required=True)
    p.add_argument("--depth", type=int, default=3)
    p.add_argument("--no-imp", action="store_true")
    p.set_defaults(handler=cmd_bisim)

    p = sub.add_parser("idl", parents=[common],
                       help="ideal completion and its unit")
    p.add_argument("file")
    p.set_defaults(handler=cmd_idl)

    p = sub.add_parser("sweep", parents=[common],
                       help="exhaustive small-instance verification")
    p.add_argument("--max-points", type=int, default=DEFAULT_SPACE_POINTS)
    p.add_argument("--max-elements", type=int, default=DEFAULT_LATTICE_ELEMENTS)
    p.add_argument("--modes", default="relsp,relspq,relspq_c")
    p.add_argument("--up-to-iso", action="store_true",
                   help="deduplicate spaces up to isomorphism first")
    p.set_defaults(handler=cmd_sweep)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        code, result = args.handler(args)
    except SelfCheckFailed as err:
        return _emit(args, FAIL, {"error": "self-check failed", "detail": str(err)})
    except PreconditionViolated as err:
        return _emit(args, INVALID,
                     {"error": "precondition violated", "detail": str(err)})
    except StructureError as err:
        return _emit(args, INVALID,
                     {"error": type(err).__name__, "detail": str(err)})
    return _emit(args, code, result)


if __name__ == "__main__":
    sys.exit(main())
