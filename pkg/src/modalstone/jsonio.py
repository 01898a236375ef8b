"""JSON document formats, schema validation, and the bundled fixture corpus.

Document shapes (schemas ship under ``modalstone/schemas/``):

    lattice         {"elements": [...], "leq": [[a, b], ...]}
    frame           {"lattice": {...}, "box": {a: b, ...}, "dia": {a: b, ...}}
    space           {"points": [...], "opens": [[...], ...], "relation": [[x, y], ...]}
    morphism        {"map": {a: b, ...}}          (endpoints supplied separately)
    valuation       {"valuation": {atom: [points], ...}}
    valuation-pair  {"source": {...}, "target": {...}}

``leq`` may be any generating set; the loader takes its closure.  Opens are
explicit — no basis completion happens on load.  Fixture files are named
``<name>.<kind>.json`` and the kind token is cross-checked against the
document shape.
"""

from __future__ import annotations

import json
from functools import lru_cache
from importlib import resources

from jsonschema import Draft202012Validator
from jsonschema.exceptions import best_match
from referencing import Registry, Resource

from .order import FiniteLattice, StructureError, validate_lattice
from .frames import ModalFrame, ModalFrameMorphism, validate_modal_frame
from .spaces import RelationalSpace, SpaceMorphism, validate_space


class InvalidDocument(StructureError):
    """The file is not valid JSON or does not match its schema."""


SCHEMA_KINDS = ("lattice", "frame", "space", "frame-morphism",
                "space-morphism", "valuation", "valuation-pair")

# a bare {"map": ...} cannot say which side it lives on; both schemas accept it
_SCHEMA_FOR_KIND = {"morphism": "frame-morphism"}


def load_schema(kind: str) -> dict:
    kind = _SCHEMA_FOR_KIND.get(kind, kind)
    if kind not in SCHEMA_KINDS:
        raise InvalidDocument(f"no schema for document kind {kind!r}")
    path = resources.files("modalstone") / "schemas" / f"{kind}.schema.json"
    return json.loads(path.read_text())


@lru_cache(maxsize=None)
def _validator(kind: str) -> Draft202012Validator:
    registry = Registry().with_resources(
        (f"modalstone:schema:{k}:v1",
         Resource.from_contents(load_schema(k))) for k in SCHEMA_KINDS)
    return Draft202012Validator(load_schema(kind), registry=registry)


def validate_document(doc, kind: str) -> None:
    """Schema-check only; semantic laws are the loaders' business."""
    err = best_match(_validator(_SCHEMA_FOR_KIND.get(kind, kind)).iter_errors(doc))
    if err is not None:
        where = "/".join(str(p) for p in err.absolute_path) or "(root)"
        raise InvalidDocument(f"{kind} document invalid at {where}: {err.message}")


def detect_kind(doc) -> str:
    if not isinstance(doc, dict):
        raise InvalidDocument("document root must be a JSON object")
    keys = set(doc)
    if {"elements", "leq"} <= keys:
        return "lattice"
    if {"lattice", "box", "dia"} <= keys:
        return "frame"
    if {"points", "opens", "relation"} <= keys:
        return "space"
    if keys == {"map"}:
        return "morphism"
    if "valuation" in keys:
        return "valuation"
    if {"source", "target"} <= keys:
        return "valuation-pair"
    raise InvalidDocument(f"cannot tell what kind of document this is "
                          f"(top-level keys {sorted(keys)})")


# -- documents -> objects -------------------------------------------------

def lattice_from_doc(doc) -> FiniteLattice:
    validate_document(doc, "lattice")
    return validate_lattice(doc["elements"], [tuple(p) for p in doc["leq"]])


def frame_from_doc(doc) -> ModalFrame:
    validate_document(doc, "frame")
    lat = lattice_from_doc(doc["lattice"])
    return validate_modal_frame(lat, doc["box"], doc["dia"])


def space_from_doc(doc) -> RelationalSpace:
    validate_document(doc, "space")
    return validate_space(doc["points"], doc["opens"],
                          [tuple(p) for p in doc["relation"]])


def frame_morphism_from_doc(doc, source: ModalFrame,
                            target: ModalFrame) -> ModalFrameMorphism:
    validate_document(doc, "frame-morphism")
    return ModalFrameMorphism(source, target, doc["map"])


def space_morphism_from_doc(doc, source: RelationalSpace,
                            target: RelationalSpace) -> SpaceMorphism:
    validate_document(doc, "space-morphism")
    return SpaceMorphism(source, target, doc["map"])


def valuation_from_doc(doc) -> dict[str, list[str]]:
    validate_document(doc, "valuation")
    return {var: list(points) for var, points in doc["valuation"].items()}


def valuation_pair_from_doc(doc) -> tuple[dict, dict]:
    validate_document(doc, "valuation-pair")
    return ({var: list(pts) for var, pts in doc["source"].items()},
            {var: list(pts) for var, pts in doc["target"].items()})


def object_from_doc(kind: str, doc):
    """Build the standalone kinds; morphisms/valuations need context."""
    builders = {"lattice": lattice_from_doc, "frame": frame_from_doc,
                "space": space_from_doc}
    if kind not in builders:
        raise InvalidDocument(f"{kind} documents need endpoints to interpret; "
                              "load them next to their source and target")
    return builders[kind](doc)


# -- objects -> documents -------------------------------------------------

def lattice_to_doc(lat: FiniteLattice) -> dict:
    from .order import bits
    pairs = sorted([lat.names[i], lat.names[j]]
                   for i in range(lat.n) for j in bits(lat.up[i]) if i != j)
    return {"elements": list(lat.names), "leq": pairs}


def frame_to_doc(frame: ModalFrame) -> dict:
    return {"lattice": lattice_to_doc(frame.lattice),
            "box": frame.box_table, "dia": frame.dia_table}


def space_to_doc(space: RelationalSpace) -> dict:
    from .order import bits
    return {"points": list(space.points),
            "opens": [[space.points[i] for i in bits(u)] for u in space.opens],
            "relation": sorted(list(p) for p in space.relation)}


def morphism_to_doc(m: ModalFrameMorphism | SpaceMorphism) -> dict:
    return {"map": m.table}


def valuation_to_doc(valuation) -> dict:
    return {"valuation": {var: sorted(points) for var, points in valuation.items()}}


def dumps(doc) -> str:
    """Canonical rendering: sorted keys, two-space indent, trailing newline."""
    return json.dumps(doc, indent=2, sort_keys=True) + "\n"


# -- files ----------------------------------------------------------------

def _kind_from_filename(name: str) -> str | None:
    parts = name.split(".")
    if len(parts) >= 3 and parts[-1] == "json":
        token = parts[-2]
        if token in SCHEMA_KINDS:
            return token
    return None


def read_document(path) -> tuple[str, dict]:
    """Parse, sniff the kind, schema-check, cross-check the filename."""
    import os
    try:
        with open(path, encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as err:
        raise InvalidDocument(f"cannot read {path}: {err.strerror}") from None
    except json.JSONDecodeError as err:
        raise InvalidDocument(f"{path} is not JSON: {err}") from None
    kind = detect_kind(doc)
    named = _kind_from_filename(os.path.basename(str(path)))
    if named is not None:
        agrees = named == kind or (kind == "morphism"
                                   and named.endswith("-morphism"))
        if not agrees:
            raise InvalidDocument(
                f"{path} is named a {named} document but looks like {kind}")
        kind = named
    validate_document(doc, kind)
    return kind, doc


# -- bundled fixtures -----------------------------------------------------

def fixture_names() -> list[str]:
    root = resources.files("modalstone") / "fixtures"
    return sorted(entry.name for entry in root.iterdir()
                  if entry.name.endswith(".json"))


def fixture_doc(name: str) -> tuple[str, dict]:
    path = resources.files("modalstone") / "fixtures" / name
    if not path.is_file():
        raise InvalidDocument(f"no bundled fixture named {name!r}")
    doc = json.loads(path.read_text())
    kind = _kind_from_filename(name) or detect_kind(doc)
    validate_document(doc, kind)
    return kind, doc


def fixture_object(name: str):
    kind, doc = fixture_doc(name)
    return object_from_doc(kind, doc)
