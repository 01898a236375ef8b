"""Exit codes, JSON output, and determinism of the command-line surface."""

import json
from importlib import resources

import pytest

from modalstone.cli import main

FIX = resources.files("modalstone") / "fixtures"


def fx(name: str) -> str:
    return str(FIX / name)


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def run_json(capsys, *argv):
    code, out = run(capsys, *argv)
    return code, json.loads(out)


# -- validate -------------------------------------------------------------

def test_validate_space(capsys):
    code, doc = run_json(capsys, "validate", fx("s1.space.json"))
    assert code == 0
    assert doc["kind"] == "space" and doc["valid"]
    assert doc["class"]["serial"] is True


def test_validate_rejects_non_distributive(capsys):
    code, doc = run_json(capsys, "validate", fx("m3.lattice.json"))
    assert code == 1
    assert not doc["valid"]
    assert doc["error"] == "'p' & ('q' | 'r') != ('p' & 'q') | ('p' & 'r')"


def test_validate_frame_reports_core_violations(capsys, tmp_path):
    bad = tmp_path / "bad.frame.json"
    bad.write_text(json.dumps({
        "lattice": {"elements": ["a", "b"], "leq": [["a", "b"]]},
        "box": {"a": "a", "b": "a"},            # box of top is not top
        "dia": {"a": "a", "b": "b"}}))
    code, doc = run_json(capsys, "validate", str(bad))
    assert code == 1
    assert {v["law"] for v in doc["violations"]} == {"box_top"}


def test_validate_morphism_is_schema_only(capsys):
    code, doc = run_json(capsys, "validate", fx("collapse.frame-morphism.json"))
    assert code == 0 and "needs endpoints" in doc["note"]


def test_validate_missing_file(capsys):
    code, doc = run_json(capsys, "validate", "/nonexistent/x.space.json")
    assert code == 2 and "error" in doc


def test_validate_broken_json(capsys, tmp_path):
    bad = tmp_path / "bad.lattice.json"
    bad.write_text("{,")
    code, doc = run_json(capsys, "validate", str(bad))
    assert code == 2 and "line" in doc["detail"]


def test_validate_filename_kind_mismatch(capsys, tmp_path):
    target = tmp_path / "sneaky.frame.json"
    target.write_text((FIX / "s1.space.json").read_text())
    code, doc = run_json(capsys, "validate", str(target))
    assert code == 2


# -- omega / points -------------------------------------------------------

def test_omega(capsys):
    code, doc = run_json(capsys, "omega", fx("s1.space.json"))
    assert code == 0 and doc["report"]["pass"]
    assert doc["frame"]["lattice"]["elements"] == ["{}", "{y}", "{x,y}"]


def test_points_and_emit(capsys, tmp_path):
    out = tmp_path / "pts.space.json"
    code, doc = run_json(capsys, "points", fx("chain3-id.frame.json"),
                         "--mode", "relspq_c", "--emit", str(out))
    assert code == 0
    assert doc["count"] == 2 and doc["points"] == ["(a;a;b)", "(b;b;c)"]
    emitted = json.loads(out.read_text())
    assert emitted == doc["space"]


def test_points_pruning_trace(capsys):
    code, doc = run_json(capsys, "points", fx("convex.frame.json"),
                         "--mode", "relspq_l", "--trace-pruning")
    assert code == 0
    assert len(doc["trace"]) == 3
    assert {t["condition"] for t in doc["trace"]} == {"diamond_witness"}


# -- check ----------------------------------------------------------------

def test_check_spatial(capsys):
    code, doc = run_json(capsys, "check", "spatial", fx("chain3-id.frame.json"),
                         "--mode", "relspq")
    assert code == 0 and doc["passed"]


def test_check_sober_failure(capsys):
    code, doc = run_json(capsys, "check", "sober", fx("doubled.space.json"),
                         "--mode", "relspq")
    assert code == 1
    assert not doc["checks"]["injective"]


def test_check_triangles(capsys):
    code, doc = run_json(capsys, "check", "triangles", fx("s1.space.json"),
                         "--mode", "relspq")
    assert code == 0 and doc["checks"]["identity_on_the_nose"]


def test_check_adjunction(capsys):
    code, doc = run_json(capsys, "check", "adjunction",
                         fx("chain3-id.frame.json"), fx("s1.space.json"),
                         "--mode", "relspq")
    assert code == 0 and doc["details"]["frame_homs"] == 3


def test_check_correspondence_default_mode(capsys):
    code, doc = run_json(capsys, "check", "correspondence",
                         fx("chain3-id.frame.json"))
    assert code == 0 and doc["mode"] == "relspq_c"


def test_check_correspondence_mode_mismatch(capsys):
    code, doc = run_json(capsys, "check", "correspondence",
                         fx("serial.frame.json"), "--mode", "relspq_c")
    assert code == 2 and "convex" in doc["detail"]


def test_check_duality(capsys):
    code, doc = run_json(capsys, "check", "duality",
                         fx("chain3-id.frame.json"), fx("s1.space.json"))
    assert code == 0 and doc["passed"]
    assert set(doc["frames"]) == {"chain3-id"} and set(doc["spaces"]) == {"s1"}


def test_check_duality_rejects_other_kinds(capsys):
    code, doc = run_json(capsys, "check", "duality",
                         fx("collapse.frame-morphism.json"))
    assert code == 2


# -- modelcheck / bisim ---------------------------------------------------

def test_modelcheck_validity(capsys):
    code, doc = run_json(capsys, "modelcheck", fx("s1.space.json"),
                         "--valuation", fx("s1-p.valuation.json"),
                         "--formula", "box p")
    assert code == 0 and doc["valid"] and doc["holds_at"] == ["x", "y"]


def test_modelcheck_at_a_point(capsys):
    code, doc = run_json(capsys, "modelcheck", fx("s1.space.json"),
                         "--valuation", fx("s1-p.valuation.json"),
                         "--formula", "p", "--point", "x")
    assert code == 1 and doc["satisfied"] is False
    code, doc = run_json(capsys, "modelcheck", fx("s1.space.json"),
                         "--valuation", fx("s1-p.valuation.json"),
                         "--formula", "p", "--point", "y")
    assert code == 0 and doc["satisfied"] is True


def test_modelcheck_rejects_disabled_implication(capsys):
    code, doc = run_json(capsys, "modelcheck", fx("s1.space.json"),
                         "--valuation", fx("s1-p.valuation.json"),
                         "--formula", "p -> p", "--no-imp")
    assert code == 2 and "disabled" in doc["detail"]


def test_modelcheck_undeclared_variable(capsys):
    code, doc = run_json(capsys, "modelcheck", fx("s1.space.json"),
                         "--valuation", fx("s1-p.valuation.json"),
                         "--formula", "q")
    assert code == 2 and "no valuation" in doc["detail"]


def test_bisim_fold(capsys):
    code, doc = run_json(capsys, "bisim", fx("doubled.space.json"),
                         fx("s1.space.json"),
                         "--map", fx("fold.space-morphism.json"),
                         "--valuations", fx("fold.valuation-pair.json"),
                         "--depth", "4")
    assert code == 0 and doc["passed"]
    assert doc["formulas_checked"] == 3 and doc["points_checked"] == 3


def test_bisim_precondition(capsys, tmp_path):
    crush = tmp_path / "crush.space-morphism.json"
    crush.write_text(json.dumps({"map": {"x": "x", "y": "x"}}))
    code, doc = run_json(capsys, "bisim", fx("s1.space.json"),
                         fx("s1.space.json"), "--map", str(crush),
                         "--valuations", fx("collapse.valuation-pair.json"))
    assert code == 2 and doc["error"] == "precondition violated"


# -- idl / sweep ----------------------------------------------------------

def test_idl(capsys):
    code, doc = run_json(capsys, "idl", fx("chain3-id.frame.json"))
    assert code == 0
    assert doc["modally_spectral"] and doc["unit_level"] == "strict"
    assert doc["unit_bijective"] and doc["ideal_elements"] == 3


def test_small_sweep_catches_unclosed_images(capsys):
    """At three elements the pair construction already produces an open,
    non-closed successor set, which the sweep reports honestly."""
    code, doc = run_json(capsys, "sweep", "--max-points", "2",
                         "--max-elements", "3", "--modes", "relsp,relspq")
    assert code == 1 and not doc["passed"]
    assert doc["omega"]["passed"]
    stages = doc["duality"]["stages"]
    assert all(not stages[s]["violations"]
               for s in ("spatial", "sober", "correspondence"))
    images = stages["images"]["violations"]
    assert images and all(v["mode"] == "relsp" for v in images)
    assert all("still a lens" in v["detail"] for v in images)


# -- output conventions ---------------------------------------------------

def test_output_is_deterministic(capsys):
    _, first = run(capsys, "points", fx("serial.frame.json"), "--mode", "relsp")
    _, second = run(capsys, "points", fx("serial.frame.json"), "--mode", "relsp")
    assert first == second
    assert first.endswith("\n")


def test_human_rendering(capsys):
    code, out = run(capsys, "check", "sober", fx("doubled.space.json"),
                    "--mode", "relspq", "--human")
    assert code == 1
    lines = out.splitlines()
    assert lines[0] == "FAIL"
    assert any("injective: no" in line for line in lines)
    code, out = run(capsys, "validate", fx("s1.space.json"), "--human")
    assert code == 0 and out.splitlines()[0] == "pass"


def test_version(capsys):
    with pytest.raises(SystemExit) as e:
        main(["--version"])
    assert e.value.code == 0
    assert "modalstone" in capsys.readouterr().out
