"""Propositional modal formulas: parsing, open-set semantics over a
relational space, lattice semantics over a frame, and the invariance
check along functional bisimulations."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .order import FiniteLattice, StructureError
from .frames import ModalFrame
from .spaces import RelationalSpace, SpaceMorphism, classify_space_morphism
from .points import PreconditionViolated, SelfCheckFailed


class UndeclaredVariable(StructureError):
    pass


class FormulaSyntaxError(StructureError):
    """Parse failure with position and expectation."""

    def __init__(self, line: int, col: int, expected: str, found: str):
        self.line = line
        self.col = col
        self.expected = expected
        super().__init__(
            f"line {line}, column {col}: expected {expected}, found {found}")


# -- syntax ---------------------------------------------------------------

class Formula:
    __slots__ = ()


@dataclass(frozen=True)
class Var(Formula):
    name: str


@dataclass(frozen=True)
class Top(Formula):
    pass


@dataclass(frozen=True)
class Bot(Formula):
    pass


@dataclass(frozen=True)
class And(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Or(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Imp(Formula):
    left: Formula
    right: Formula


@dataclass(frozen=True)
class Box(Formula):
    body: Formula


@dataclass(frozen=True)
class Dia(Formula):
    body: Formula


def depth(formula: Formula) -> int:
    """Connectives and modalities each add one level; atoms are depth 0."""
    if isinstance(formula, (Var, Top, Bot)):
        return 0
    if isinstance(formula, (Box, Dia)):
        return 1 + depth(formula.body)
    return 1 + max(depth(formula.left), depth(formula.right))


_IMP, _OR, _AND, _UNARY = 1, 2, 3, 4


def to_text(formula: Formula) -> str:
    return _render(formula, _IMP)


def _render(f: Formula, context: int) -> str:
    if isinstance(f, Var):
        return f.name
    if isinstance(f, Top):
        return "true"
    if isinstance(f, Bot):
        return "false"
    if isinstance(f, Box):
        return f"box {_render(f.body, _UNARY)}"
    if isinstance(f, Dia):
        return f"dia {_render(f.body, _UNARY)}"
    if isinstance(f, And):
        text, level = f"{_render(f.left, _AND)} & {_render(f.right, _UNARY)}", _AND
    elif isinstance(f, Or):
        text, level = f"{_render(f.left, _OR)} | {_render(f.right, _AND)}", _OR
    else:
        text, level = f"{_render(f.left, _OR)} -> {_render(f.right, _IMP)}", _IMP
    return f"({text})" if level < context else text


_TOKEN = re.compile(r"(?P<ws>[ \t\r]+)|(?P<id>[a-z][a-z0-9_]*)|(?P<imp>->)"
                    r"|(?P<and>&)|(?P<or>\|)|(?P<lp>\()|(?P<rp>\))|(?P<bad>.)")
_KEYWORDS = {"true", "false", "box", "dia"}


def _tokenize(text: str):
    tokens = []
    for lineno, line in enumerate(text.split("\n"), start=1):
        pos = 0
        while pos < len(line):
            m = _TOKEN.match(line, pos)
            kind = m.lastgroup
            if kind == "bad":
                raise FormulaSyntaxError(lineno, pos + 1, "a token",
                                         repr(m.group()))
            if kind != "ws":
                word = m.group()
                tokens.append((word if kind == "id" and word in _KEYWORDS
                               else kind, word, lineno, pos + 1))
            pos = m.end()
    tokens.append(("end", "end of formula", len(text.split("\n")),
                   len(text.split("\n")[-1]) + 1))
    return tokens


class _Parser:
    def __init__(self, tokens, allow_imp):
        self.tokens = tokens
        self.pos = 0
        self.allow_imp = allow_imp

    def peek(self):
        return self.tokens[self.pos][0]

    def take(self):
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def fail(self, expected):
        _, word, line, col = self.tokens[self.pos]
        raise FormulaSyntaxError(line, col, expected, repr(word))

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek() == "imp":
            if not self.allow_imp:
                self.fail("no '->' (implication is disabled)")
            self.take()
            return Imp(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek() == "or":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek() == "and":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind = self.peek()
        if kind == "box":
            self.take()
            return Box(self.unary())
        if kind == "dia":
            self.take()
            return Dia(self.unary())
        return self.atom()

    def atom(self) -> Formula:
        kind, word, _, _ = self.tokens[self.pos]
        if kind == "true":
            self.take()
            return Top()
        if kind == "false":
            self.take()
            return Bot()
        if kind == "id":
            self.take()
            return Var(word)
        if kind == "lp":
            self.take()
            f = self.implication()
            if self.peek() != "rp":
                self.fail("')'")
            self.take()
            return f
        self.fail("a variable, 'true', 'false', 'box', 'dia', or '('")


def parse(text: str, *, allow_imp: bool = True) -> Formula:
    """Parse a formula; ``&`` binds tighter than ``|`` which binds tighter
    than the right-associative ``->``; ``box``/``dia`` are prefixes."""
    parser = _Parser(_tokenize(text), allow_imp)
    f = parser.implication()
    if parser.peek() != "end":
        parser.fail("end of formula")
    return f


# -- semantics over a space -----------------------------------------------

class Model:
    """A relational space with one open set per propositional variable."""

    def __init__(self, space: RelationalSpace,
                 valuation: Mapping[str, Iterable[str]]):
        self.space = space
        self.masks: dict[str, int] = {}
        for var, members in valuation.items():
            m = members if isinstance(members, int) else space.mask_of(members)
            if m not in space.open_set:
                raise StructureError(
                    f"valuation of {var!r} is not an open set")
            self.masks[var] = m

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(self.masks)


def evaluate_mask(model: Model, formula: Formula) -> int:
    sp = model.space
    if isinstance(formula, Var):
        try:
            return model.masks[formula.name]
        except KeyError:
            raise UndeclaredVariable(
                f"variable {formula.name!r} has no valuation") from None
    if isinstance(formula, Top):
        return sp.full
    if isinstance(formula, Bot):
        return 0
    if isinstance(formula, And):
        return evaluate_mask(model, formula.left) & evaluate_mask(model, formula.right)
    if isinstance(formula, Or):
        return evaluate_mask(model, formula.left) | evaluate_mask(model, formula.right)
    if isinstance(formula, Imp):
        a, b = evaluate_mask(model, formula.left), evaluate_mask(model, formula.right)
        return sp.interior_mask((sp.full & ~a) | b)
    if isinstance(formula, Box):
        return sp.interior_mask(sp.box_mask(evaluate_mask(model, formula.body)))
    if isinstance(formula, Dia):
        return sp.interior_mask(sp.dia_mask(evaluate_mask(model, formula.body)))
    raise TypeError(f"not a formula: {formula!r}")


def evaluate(model: Model, formula: Formula) -> frozenset[str]:
    """The open set of points where the formula holds."""
    return model.space.names_of(evaluate_mask(model, formula))


def satisfies(model: Model, point: str, formula: Formula) -> bool:
    return evaluate_mask(model, formula) >> model.space.require(point) & 1 == 1


# -- semantics over a frame -----------------------------------------------

def evaluate_in_frame(frame: ModalFrame, valuation: Mapping[str, str],
                      formula: Formula) -> str:
    """Lattice-side value of a formula; implication is the relative
    pseudocomplement, which the distributivity of the lattice provides."""
    lat = frame.lattice
    masks = {var: lat.require(a) for var, a in valuation.items()}

    def go(f: Formula) -> int:
        if isinstance(f, Var):
            try:
                return masks[f.name]
            except KeyError:
                raise UndeclaredVariable(
                    f"variable {f.name!r} has no valuation") from None
        if isinstance(f, Top):
            return lat.top_i
        if isinstance(f, Bot):
            return lat.bot_i
        if isinstance(f, And):
            return lat.meet_t[go(f.left)][go(f.right)]
        if isinstance(f, Or):
            return lat.join_t[go(f.left)][go(f.right)]
        if isinstance(f, Imp):
            return _pseudocomplement(lat, go(f.left), go(f.right))
        if isinstance(f, Box):
            return frame.box_i[go(f.body)]
        if isinstance(f, Dia):
            return frame.dia_i[go(f.body)]
        raise TypeError(f"not a formula: {f!r}")

    return lat.names[go(formula)]


def _pseudocomplement(lat: FiniteLattice, a: int, b: int) -> int:
    mask = 0
    for c in range(lat.n):
        if lat.leq_i(lat.meet_t[a][c], b):
            mask |= 1 << c
    return lat.join_mask(mask)


# -- enumeration up to depth ----------------------------------------------

def formula_closure(models: Sequence[Model], depth: int,
                    variables: Sequence[str] | None = None, *,
                    with_imp: bool = True) -> list[tuple[Formula, tuple[int, ...]]]:
    """One representative formula per distinct tuple of denotations across
    the given models, up to the given connective depth.

    Substituting a subformula with the same denotations everywhere never
    changes a denotation, so closing over representatives reaches every
    value tuple any depth-bounded formula can take.
    """
    if not models:
        raise ValueError("at least one model is required")
    if variables is None:
        variables = sorted(models[0].variables)
    seen: dict[tuple[int, ...], Formula] = {}
    levels: list[list[tuple[Formula, tuple[int, ...]]]] = [[] for _ in range(depth + 1)]

    def add(f: Formula, d: int):
        key = tuple(evaluate_mask(m, f) for m in models)
        if key not in seen:
            seen[key] = f
            levels[d].append((f, key))

    for f in (Top(), Bot(), *(Var(v) for v in variables)):
        add(f, 0)
    for d in range(1, depth + 1):
        prior = [f for lv in levels[:d] for f, _ in lv]
        for f, _ in list(levels[d - 1]):
            add(Box(f), d)
            add(Dia(f), d)
            for g in prior:
                add(And(f, g), d)
                add(Or(f, g), d)
                if with_imp:
                    add(Imp(f, g), d)
                    add(Imp(g, f), d)
    return [pair for lv in levels for pair in lv]


# -- invariance along functional bisimulations ----------------------------

@dataclass(frozen=True)
class BisimVerdict:
    passed: bool
    depth: int
    formulas_checked: int
    points_checked: int

    def as_json(self) -> dict:
        return {"passed": self.passed, "depth": self.depth,
                "formulas_checked": self.formulas_checked,
                "points_checked": self.points_checked}


def bisim_invariance_check(f: SpaceMorphism, v_source, v_target,
                           depth: int = 3, *, with_imp: bool = True) -> BisimVerdict:
    """Open pq-morphisms with matching valuations preserve and reflect
    satisfaction pointwise; this checks it over every semantically
    distinct formula up to the given depth.

    A counterexample would contradict the classification, so one raises
    rather than returning a failed verdict.
    """
    cls = classify_space_morphism(f)
    if not cls.open_map:
        raise PreconditionViolated("the image of some open set is not open")
    if cls.level != "pq_morphism":
        extra = "; ".join(cls.witnesses.values())
        raise PreconditionViolated(
            f"map is only {cls.level}" + (f" ({extra})" if extra else ""))
    src = v_source if isinstance(v_source, Model) else Model(f.source, v_source)
    tgt = v_target if isinstance(v_target, Model) else Model(f.target, v_target)
    if src.space != f.source or tgt.space != f.target:
        raise PreconditionViolated("valuation models do not match the map's spaces")
    if src.variables != tgt.variables:
        raise PreconditionViolated("the two valuations declare different variables")
    for var, tm in tgt.masks.items():
        if f.preimage_mask(tm) != src.masks[var]:
            raise PreconditionViolated(
                f"valuation of {var!r} does not pull back along the map")

    reps = formula_closure([src, tgt], depth, with_imp=with_imp)
    for formula, (sm, tm) in reps:
        for x in range(f.source.n):
            if sm >> x & 1 != tm >> f.map_i[x] & 1:
                raise SelfCheckFailed(
                    f"satisfaction of {to_text(formula)!r} differs at "
                    f"{f.source.points[x]!r} although the map classified as "
                    "an open pq-morphism")
    return BisimVerdict(True, depth, len(reps), f.source.n)
