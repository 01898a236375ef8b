"""Modal frame validation, classification, morphisms, and completions."""

import pytest

from modalstone.frames import (
    AXIOMS,
    AxiomViolation,
    ModalFrameMorphism,
    NotMonotone,
    canonical_element,
    canonical_filter,
    classify_frame,
    classify_morphism,
    compacts_reflection,
    core_violation_report,
    frame_is_replete,
    ideal_completion,
    is_modally_spectral,
    morphism_in_category,
    validate_modal_frame,
)
from modalstone.order import characters, validate_lattice


def chain3():
    return validate_lattice(["a", "b", "c"], [("a", "b"), ("b", "c")])


def frame(box, dia, lat=None):
    return validate_modal_frame(lat or chain3(), box, dia)


IDENT = {"a": "a", "b": "b", "c": "c"}


# -- validation -----------------------------------------------------------

def test_identity_operators_validate():
    fr = frame(IDENT, IDENT)
    assert fr.box("b") == "b" and fr.dia("c") == "c"
    assert fr.box_table == IDENT


def test_monotonicity_is_enforced():
    with pytest.raises(NotMonotone):
        frame({"a": "c", "b": "a", "c": "c"}, IDENT)


def test_box_top_and_dia_bot():
    with pytest.raises(AxiomViolation) as err:
        frame({"a": "a", "b": "b", "c": "b"}, IDENT)
    assert err.value.axiom == "box_top"
    with pytest.raises(AxiomViolation) as err:
        frame(IDENT, {"a": "b", "b": "b", "c": "c"})
    assert err.value.axiom == "dia_bot"


def test_box_meet_violation():
    b2 = validate_lattice(["a", "b", "c", "d"],
                          [("a", "b"), ("a", "c"), ("b", "d"), ("c", "d")])
    with pytest.raises(AxiomViolation) as err:
        frame({"a": "a", "b": "d", "c": "d", "d": "d"},
              {"a": "a", "b": "b", "c": "c", "d": "d"}, b2)
    assert err.value.axiom == "box_meet"


def test_box_dia_meet_violation():
    """Constant-top box with identity diamond: dia top & box bot escapes
    dia bot.  (This pair is why the 2-chain admits 3 operator pairs, not 4.)"""
    two = validate_lattice(["a", "b"], [("a", "b")])
    with pytest.raises(AxiomViolation) as err:
        validate_modal_frame(two, {"a": "b", "b": "b"}, {"a": "a", "b": "b"})
    assert err.value.axiom == "box_dia_meet"


def test_violation_report_collects_everything():
    lat = chain3()
    box = {"a": "c", "b": "a", "c": "a"}
    dia = {"a": "c", "b": "c", "c": "c"}
    report = core_violation_report(lat, box, dia)
    laws = {entry["law"] for entry in report}
    assert {"mono_box", "box_top", "dia_bot"} <= laws
    assert len(report) >= 3
    for entry in report:
        assert entry["at"] and entry["detail"]


# -- classification -------------------------------------------------------

def test_fixture_frame_classes(corpus_frames):
    got = {name: classify_frame(fr, with_spectral=False)
           for name, fr in corpus_frames.items()}
    assert got["chain3-id"].equivalence
    assert got["chain3-id"].convex and got["chain3-id"].serial
    assert got["chain3-top"].convex and not got["chain3-top"].equivalence
    assert not got["chain3-top"].axioms["box_deflationary"]
    assert got["convex"].convex and not got["convex"].equivalence
    assert not got["convex"].axioms["box_dia_inflationary"]
    assert got["serial"].serial and not got["serial"].lower
    for cls in got.values():
        assert cls.modal
        assert set(cls.axioms) == set(AXIOMS)


def test_spectrality_and_report_shape(corpus_frames):
    for fr in corpus_frames.values():
        assert is_modally_spectral(fr)
        with_it = classify_frame(fr).as_json()
        without = classify_frame(fr, with_spectral=False).as_json()
        assert with_it["modally_spectral"] is True
        assert "modally_spectral" not in without


# -- canonical data -------------------------------------------------------

def test_canonical_data_on_identity_chain(corpus_frames):
    fr = corpus_frames["chain3-id"]
    data = {p.prime: (canonical_element(fr, p), canonical_filter(fr, p).generator)
            for p in characters(fr.lattice)}
    assert data == {"a": ("a", "b"), "b": ("b", "c")}
    assert frame_is_replete(fr)


def test_serial_fixture_is_not_replete(corpus_frames):
    assert not frame_is_replete(corpus_frames["serial"])


# -- morphisms ------------------------------------------------------------

def test_identity_morphism_is_strict(corpus_frames):
    fr = corpus_frames["chain3-id"]
    cls = classify_morphism(ModalFrameMorphism(fr, fr, IDENT))
    assert cls.level == "strict" and cls.box_strict and cls.dia_strict


def test_collapse_fixture_is_strict(corpus_frames):
    fr = corpus_frames["chain3-id"]
    m = ModalFrameMorphism(fr, fr, {"a": "a", "b": "c", "c": "c"})
    assert classify_morphism(m).level == "strict"


def test_meet_breaking_map_is_not_a_morphism(corpus_frames):
    fr = corpus_frames["chain3-id"]
    cls = classify_morphism(ModalFrameMorphism(fr, fr, {"a": "a", "b": "c", "c": "b"}))
    assert cls.level == "not_morphism"
    assert "not preserved" in cls.witness


def test_lax_levels(corpus_frames):
    ident, top = corpus_frames["chain3-id"], corpus_frames["chain3-top"]
    # both operators grow: lax on both sides
    cls = classify_morphism(ModalFrameMorphism(ident, top, IDENT))
    assert cls.level == "lax" and not cls.box_strict and not cls.dia_strict
    # convex fixture has identity diamond but a smaller box
    cls = classify_morphism(ModalFrameMorphism(corpus_frames["convex"], ident, IDENT))
    assert cls.level == "diamond_strict" and cls.dia_strict and not cls.box_strict
    # identity box with a bigger diamond on the target: box side strict only
    grown_dia = validate_modal_frame(chain3(), IDENT, {"a": "a", "b": "c", "c": "c"})
    cls = classify_morphism(ModalFrameMorphism(ident, grown_dia, IDENT))
    assert cls.level == "box_strict" and cls.box_strict and not cls.dia_strict
    # the other lax direction fails outright
    cls = classify_morphism(ModalFrameMorphism(ident, corpus_frames["convex"], IDENT))
    assert cls.level == "not_morphism"


def test_morphism_category_table(corpus_frames):
    ident, top = corpus_frames["chain3-id"], corpus_frames["chain3-top"]
    lax = classify_morphism(ModalFrameMorphism(ident, top, IDENT))
    strict = classify_morphism(ModalFrameMorphism(ident, ident, IDENT))
    dia_only = classify_morphism(
        ModalFrameMorphism(corpus_frames["convex"], ident, IDENT))
    assert morphism_in_category(lax, "plain")
    assert not morphism_in_category(lax, "box")
    assert not morphism_in_category(lax, "strict")
    assert morphism_in_category(dia_only, "diamond")
    assert not morphism_in_category(dia_only, "box")
    assert all(morphism_in_category(strict, cat)
               for cat in ("plain", "box", "diamond", "strict"))
    with pytest.raises(ValueError):
        morphism_in_category(strict, "weird")


def test_morphism_composition(corpus_frames):
    fr = corpus_frames["chain3-id"]
    collapse = ModalFrameMorphism(fr, fr, {"a": "a", "b": "c", "c": "c"})
    drop = ModalFrameMorphism(fr, fr, {"a": "a", "b": "a", "c": "c"})
    composed = collapse.then(drop)
    assert composed.table == {"a": "a", "b": "c", "c": "c"}


# -- completions ----------------------------------------------------------

def test_ideal_completion_unit_is_iso(corpus_frames):
    for name, fr in corpus_frames.items():
        completion = ideal_completion(fr)
        assert completion.frame.lattice.n == fr.lattice.n, name
        cls = classify_morphism(completion.unit)
        assert cls.level == "strict", name
        assert len(set(completion.unit.map_i)) == fr.lattice.n, name
        assert is_modally_spectral(completion.frame), name


def test_ideal_completion_names_principal_ideals(corpus_frames):
    completion = ideal_completion(corpus_frames["chain3-id"])
    assert list(completion.frame.lattice.names) == ["v(a)", "v(b)", "v(c)"]


def test_compacts_reflection(corpus_frames):
    for name, fr in corpus_frames.items():
        refl = compacts_reflection(fr)
        assert refl.compact_elements == frozenset(fr.lattice.names), name
        assert refl.iso_with_completion, name
        for axiom, (before, after) in refl.axiom_transfer.items():
            assert before == after, (name, axiom)
