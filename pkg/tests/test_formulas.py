"""Formula parsing, semantics on both sides, and bisimulation invariance."""

import pytest

from modalstone.formulas import (
    And,
    BisimVerdict,
    Bot,
    Box,
    Dia,
    FormulaSyntaxError,
    Imp,
    Model,
    Or,
    Top,
    UndeclaredVariable,
    Var,
    bisim_invariance_check,
    depth,
    evaluate,
    evaluate_in_frame,
    evaluate_mask,
    formula_closure,
    parse,
    satisfies,
    to_text,
)
from modalstone.omega import omega_data
from modalstone.order import StructureError
from modalstone.points import PreconditionViolated
from modalstone.spaces import SpaceMorphism


# -- parsing --------------------------------------------------------------

def test_precedence():
    assert parse("p & q | r -> s") == Imp(Or(And(Var("p"), Var("q")),
                                             Var("r")), Var("s"))
    assert parse("p -> q -> r") == Imp(Var("p"), Imp(Var("q"), Var("r")))
    assert parse("box p & q") == And(Box(Var("p")), Var("q"))
    assert parse("box (p & q)") == Box(And(Var("p"), Var("q")))
    assert parse("dia dia p") == Dia(Dia(Var("p")))
    assert parse("true | false") == Or(Top(), Bot())


def test_keywords_and_identifiers():
    assert parse("boxer") == Var("boxer")       # not the keyword 'box'
    assert parse("box boxer") == Box(Var("boxer"))


def test_round_trip():
    for text in ("p", "box (p | q) & dia r", "p -> (q -> p)",
                 "true & false | p", "box box p"):
        f = parse(text)
        assert parse(to_text(f)) == f


def test_syntax_errors_carry_position():
    with pytest.raises(FormulaSyntaxError) as e:
        parse("p &")
    assert (e.value.line, e.value.col) == (1, 4)
    with pytest.raises(FormulaSyntaxError) as e:
        parse("(p | q")
    assert "')'" in str(e.value)
    with pytest.raises(FormulaSyntaxError) as e:
        parse("p $ q")
    assert (e.value.line, e.value.col) == (1, 3)
    with pytest.raises(FormulaSyntaxError) as e:
        parse("p &\n& q")
    assert e.value.line == 2


def test_implication_can_be_disabled():
    assert parse("p -> q", allow_imp=True) == Imp(Var("p"), Var("q"))
    with pytest.raises(FormulaSyntaxError) as e:
        parse("p -> q", allow_imp=False)
    assert "disabled" in str(e.value)
    assert parse("p | q", allow_imp=False) == Or(Var("p"), Var("q"))


def test_depth():
    assert depth(parse("p")) == 0
    assert depth(parse("box p & q")) == 2
    assert depth(parse("box box p")) == 2
    assert depth(parse("true")) == 0


# -- semantics on a space -------------------------------------------------

def test_evaluation_on_flow_space(s1):
    model = Model(s1, {"p": ["y"]})
    assert evaluate(model, parse("p")) == frozenset({"y"})
    assert evaluate(model, parse("box p")) == frozenset({"x", "y"})
    assert evaluate(model, parse("dia p")) == frozenset({"x", "y"})
    assert evaluate(model, parse("box false")) == frozenset()
    assert evaluate(model, parse("p -> false")) == frozenset()
    assert satisfies(model, "x", parse("box p"))
    assert not satisfies(model, "x", parse("p"))


def test_valuations_must_be_open(s1):
    with pytest.raises(StructureError):
        Model(s1, {"p": ["x"]})
    with pytest.raises(UndeclaredVariable):
        evaluate(Model(s1, {"p": ["y"]}), parse("q"))


# -- semantics on a frame -------------------------------------------------

def test_evaluation_on_frame(chain3_id):
    val = {"p": "b"}
    assert evaluate_in_frame(chain3_id, val, parse("box p")) == "b"
    assert evaluate_in_frame(chain3_id, val, parse("p -> false")) == "a"
    assert evaluate_in_frame(chain3_id, val, parse("p | dia p")) == "b"
    assert evaluate_in_frame(chain3_id, val, parse("false -> p")) == "c"


def test_frame_and_space_semantics_agree(s1):
    """Every depth-three formula denotes the same open whether read in the
    space or in its frame of opens."""
    od = omega_data(s1)
    model = Model(s1, {"p": ["y"]})
    frame_val = {"p": od.element_of(model.masks["p"])}
    for formula, (mask,) in formula_closure([model], 3):
        name = evaluate_in_frame(od.frame, frame_val, formula)
        assert od.mask_of_element(name) == mask, to_text(formula)


# -- closure under semantic distinctness ----------------------------------

def test_formula_closure_reaches_every_open(s1):
    model = Model(s1, {"p": ["y"]})
    reps = formula_closure([model], 3)
    masks = [key[0] for _, key in reps]
    assert len(masks) == len(set(masks)) == 3
    assert set(masks) == set(s1.opens)


def test_formula_closure_without_implication(s1):
    model = Model(s1, {"p": ["y"]})
    reps = formula_closure([model], 2, with_imp=False)

    def has_imp(f):
        if isinstance(f, Imp):
            return True
        if isinstance(f, (Box, Dia)):
            return has_imp(f.body)
        if isinstance(f, (And, Or)):
            return has_imp(f.left) or has_imp(f.right)
        return False

    assert not any(has_imp(f) for f, _ in reps)
    with pytest.raises(ValueError):
        formula_closure([], 2)


# -- bisimulation invariance ----------------------------------------------

def test_fold_is_invariant(doubled, s1, corpus_space_morphisms):
    fold = corpus_space_morphisms["fold"]
    v = bisim_invariance_check(fold, {"p": ["y1", "y2"]}, {"p": ["y"]},
                               depth=4)
    assert v.passed and v.depth == 4
    assert v.points_checked == 3 and v.formulas_checked >= 3
    assert v.as_json()["formulas_checked"] == v.formulas_checked


def test_collapse_is_invariant(s1, corpus_space_morphisms):
    collapse = corpus_space_morphisms["s1-collapse"]
    v = bisim_invariance_check(collapse, {"p": ["x", "y"]}, {"p": ["y"]})
    assert v.passed and isinstance(v, BisimVerdict)


def test_bisim_preconditions(s1, discrete2, corpus_space_morphisms):
    fold = corpus_space_morphisms["fold"]
    with pytest.raises(PreconditionViolated, match="pull back"):
        bisim_invariance_check(fold, {"p": []}, {"p": ["y"]})
    with pytest.raises(PreconditionViolated, match="different variables"):
        bisim_invariance_check(fold, {"p": ["y1", "y2"]}, {"q": ["y"]})
    crush = SpaceMorphism(s1, s1, {"x": "x", "y": "x"})
    with pytest.raises(PreconditionViolated, match="not open"):
        bisim_invariance_check(crush, {}, {})
    skew = SpaceMorphism(s1, discrete2, {"x": "x", "y": "y"})
    with pytest.raises(PreconditionViolated, match="only"):
        bisim_invariance_check(skew, {}, {})
