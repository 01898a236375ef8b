"""From frames back to spaces: characters paired with an element (and in
the richer modes a filter), pruned to the largest set where every modal
demand has a witness.

A pre-point couples a character ``p`` with an element ``a`` it rejects
through diamond, and optionally a filter ``F`` extending the canonical
filter of ``p``.  The surviving points carry the relation tested by
:func:`relation_holds` and the opens are the images of ``phi``.  Pruning
is a greatest fixed point, so the scan order cannot matter; the kernel in
:mod:`modalstone.kernels` does the inner loop.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from . import kernels
from .frames import (ModalFrame, ModalFrameMorphism, canonical_element,
                     canonical_filter, classify_frame, classify_morphism,
                     is_replete, morphism_in_category)
from .omega import OmegaFrame, omega_data, open_name
from .order import (Character, PrincipalFilter, StructureError, bits,
                    characters)
from .spaces import (RelationalSpace, SpaceMorphism, classify_space,
                     classify_space_morphism, space_morphism_in_category,
                     validate_space)


class NoWitness(StructureError):
    pass


class ImageNotAPoint(StructureError):
    pass


class NotAMorphismOfMode(StructureError):
    pass


class ModeMismatch(StructureError):
    pass


class PreconditionViolated(StructureError):
    pass


class SelfCheckFailed(StructureError):
    """A property the construction is entitled to did not hold; this is a
    bug, not bad input."""


# Pre-point conditions (selection) and point conditions (survival).
DIA_ZERO = "dia_zero"                        # p rejects dia a
A_MAXIMAL = "a_maximal"                      # a is the largest rejected element
FILTER_ABOVE = "filter_above_canonical"      # F contains the canonical filter
FILTER_BELOW = "filter_below_canonical"      # F sits inside the canonical filter
DIAMOND_WITNESS = "diamond_witness"          # c above a needs a successor making c true
BOX_WITNESS = "box_witness"                  # c outside F needs a successor making c false


@dataclass(frozen=True)
class ConstructionMode:
    name: str
    form: str                                # pair | triple
    prepoint_conditions: tuple[str, ...]
    point_conditions: tuple[str, ...]
    frame_objects: str                       # modal | convex | equivalence
    frame_morphisms: str                     # plain | box | diamond | strict
    space_objects: str                       # any | lsc | usc | continuous | equivalence
    space_morphisms: str                     # p | pq

    @property
    def triple(self) -> bool:
        return self.form == "triple"


MODES: dict[str, ConstructionMode] = {m.name: m for m in (
    ConstructionMode("relsp", "pair", (DIA_ZERO,), (DIAMOND_WITNESS,),
                     "modal", "plain", "any", "p"),
    ConstructionMode("relsp_l", "pair", (DIA_ZERO, A_MAXIMAL), (DIAMOND_WITNESS,),
                     "modal", "plain", "lsc", "p"),
    ConstructionMode("relspq", "triple", (DIA_ZERO, FILTER_ABOVE),
                     (DIAMOND_WITNESS, BOX_WITNESS), "modal", "plain", "any", "pq"),
    ConstructionMode("relspq_l", "triple", (DIA_ZERO, A_MAXIMAL, FILTER_ABOVE),
                     (DIAMOND_WITNESS, BOX_WITNESS), "modal", "diamond", "lsc", "pq"),
    ConstructionMode("relspq_u", "triple", (DIA_ZERO, FILTER_ABOVE, FILTER_BELOW),
                     (DIAMOND_WITNESS, BOX_WITNESS), "modal", "box", "usc", "pq"),
    ConstructionMode("relspq_c", "triple",
                     (DIA_ZERO, A_MAXIMAL, FILTER_ABOVE, FILTER_BELOW),
                     (DIAMOND_WITNESS, BOX_WITNESS), "convex", "strict", "continuous", "pq"),
    ConstructionMode("eqspq", "triple",
                     (DIA_ZERO, A_MAXIMAL, FILTER_ABOVE, FILTER_BELOW),
                     (DIAMOND_WITNESS, BOX_WITNESS), "equivalence", "strict",
                     "equivalence", "pq"),
)}


def get_mode(name: str) -> ConstructionMode:
    try:
        return MODES[name]
    except KeyError:
        raise StructureError(
            f"unknown mode {name!r}; choose from {', '.join(sorted(MODES))}") from None


def frame_in_mode_objects(frame: ModalFrame, mode: ConstructionMode) -> bool:
    cls = classify_frame(frame, with_spectral=False)
    return {"modal": cls.modal, "convex": cls.convex,
            "equivalence": cls.equivalence}[mode.frame_objects]


def space_in_mode_objects(space: RelationalSpace, mode: ConstructionMode) -> bool:
    cls = classify_space(space)
    return {"any": True, "lsc": cls.lsc, "usc": cls.usc,
            "continuous": cls.continuous,
            "equivalence": cls.equivalence_space}[mode.space_objects]


@dataclass(frozen=True)
class PrePoint:
    character: Character
    element: str
    filter: PrincipalFilter | None

    @property
    def label(self) -> str:
        head = f"{self.character.prime};{self.element}"
        if self.filter is None:
            return f"({head})"
        return f"({head};{self.filter.generator})"

    def __repr__(self):
        return f"PrePoint{self.label}"


class _FrameContext:
    """Per-frame data shared by every mode: characters with their truth
    masks, canonical filters and elements."""

    def __init__(self, frame: ModalFrame):
        lat = frame.lattice
        self.chars = characters(lat)
        self.truth = [p.truth_mask for p in self.chars]
        self.fgen = [lat.require(canonical_filter(frame, p).generator) for p in self.chars]
        self.a_p = [lat.require(canonical_element(frame, p)) for p in self.chars]
        self.replete = [not t >> frame.dia_i[a] & 1
                        for t, a in zip(self.truth, self.a_p)]


def _context(frame: ModalFrame) -> _FrameContext:
    ctx = getattr(frame, "_point_ctx", None)
    if ctx is None:
        ctx = _FrameContext(frame)
        frame._point_ctx = ctx
    return ctx


def _candidates(frame: ModalFrame, mode: ConstructionMode):
    """Index triples (char, element, filter generator or -1) satisfying the
    mode's pre-point conditions, in deterministic order."""
    lat = frame.lattice
    ctx = _context(frame)
    conds = mode.prepoint_conditions
    out = []
    for k in range(len(ctx.chars)):
        truth = ctx.truth[k]
        if A_MAXIMAL in conds:
            elems = [ctx.a_p[k]] if ctx.replete[k] else []
        else:
            elems = [a for a in range(lat.n) if not truth >> frame.dia_i[a] & 1]
        if not mode.triple:
            out.extend((k, a, -1) for a in elems)
            continue
        gens = range(lat.n)
        if FILTER_ABOVE in conds and FILTER_BELOW in conds:
            gens = [ctx.fgen[k]]
        elif FILTER_ABOVE in conds:
            gens = [g for g in range(lat.n) if lat.leq_i(g, ctx.fgen[k])]
        elif FILTER_BELOW in conds:
            gens = [g for g in range(lat.n) if lat.leq_i(ctx.fgen[k], g)]
        out.extend((k, a, g) for a in elems for g in gens)
    return out


def _prepoint(frame: ModalFrame, cand) -> PrePoint:
    lat = frame.lattice
    k, a, g = cand
    ctx = _context(frame)
    filt = None if g < 0 else PrincipalFilter(lat, lat.names[g])
    return PrePoint(ctx.chars[k], lat.names[a], filt)


def enumerate_prepoints(frame: ModalFrame, mode: ConstructionMode | str) -> list[PrePoint]:
    """All pre-points of the mode, before any survival pruning."""
    mode = get_mode(mode) if isinstance(mode, str) else mode
    return [_prepoint(frame, c) for c in _candidates(frame, mode)]


def relation_holds(frame: ModalFrame, mode: ConstructionMode | str,
                   u: PrePoint, v: PrePoint) -> bool:
    """The target character must reject the source element, and the source
    filter (canonical one for pairs) must land inside the target truth
    set."""
    mode = get_mode(mode) if isinstance(mode, str) else mode
    lat = frame.lattice
    ctx = _context(frame)
    qt = v.character.truth_mask
    if qt >> lat.require(u.element) & 1:
        return False
    if mode.triple:
        gen = lat.require(u.filter.generator)
    else:
        gen = ctx.fgen[ctx.chars.index(u.character)]
    return bool(qt >> gen & 1)


def _relation_masks(frame: ModalFrame, cands):
    ctx = _context(frame)
    n = len(cands)
    succ = [0] * n
    for i, (ku, au, gu) in enumerate(cands):
        gen = gu if gu >= 0 else ctx.fgen[ku]
        row = 0
        for j, (kv, _, _) in enumerate(cands):
            t = ctx.truth[kv]
            if not t >> au & 1 and t >> gen & 1:
                row |= 1 << j
        succ[i] = row
    return succ


class PointSpace:
    """Survivors of the pruning with their relation and the image topology."""

    def __init__(self, frame, mode, prepoints, succ, phi_masks):
        self.frame = frame
        self.mode = mode
        self.prepoints: tuple[PrePoint, ...] = tuple(prepoints)
        self.labels = tuple(p.label for p in self.prepoints)
        self.succ = tuple(succ)
        self.phi_masks = tuple(phi_masks)    # one mask per lattice element
        self._space = None
        self._omega = None
        self._phi = None

    @property
    def relation(self) -> frozenset[tuple[str, str]]:
        return frozenset((self.labels[i], self.labels[j])
                         for i in range(len(self.labels)) for j in bits(self.succ[i]))

    def phi_mask(self, c: str) -> int:
        return self.phi_masks[self.frame.lattice.require(c)]

    def phi(self, c: str) -> frozenset[PrePoint]:
        return frozenset(self.prepoints[i] for i in bits(self.phi_mask(c)))

    def phi_labels(self, c: str) -> frozenset[str]:
        return frozenset(self.labels[i] for i in bits(self.phi_mask(c)))

    def find(self, point: PrePoint):
        try:
            return self.prepoints.index(point)
        except ValueError:
            return None

    def space(self) -> RelationalSpace:
        if self._space is None:
            opens = [[self.labels[i] for i in bits(m)] for m in set(self.phi_masks)]
            rel = [(self.labels[i], self.labels[j])
                   for i in range(len(self.labels)) for j in bits(self.succ[i])]
            self._space = validate_space(self.labels, opens, rel)
        return self._space

    def omega(self) -> OmegaFrame:
        if self._omega is None:
            self._omega = omega_data(self.space())
        return self._omega

    def phi_morphism(self) -> ModalFrameMorphism:
        """phi as a frame map into the opens of the constructed space."""
        if self._phi is None:
            sp = self.space()
            table = {c: open_name(sp, sp.mask_of(self.phi_labels(c)))
                     for c in self.frame.lattice.names}
            self._phi = ModalFrameMorphism(self.frame, self.omega().frame, table)
        return self._phi


def prune_points(frame: ModalFrame, mode: ConstructionMode | str,
                 candidates: list[PrePoint] | None = None,
                 trace: list | None = None):
    """Delete candidates until every surviving demand has a surviving
    witness; returns (surviving pre-points, relation pairs on them).

    The result is the largest such set.  Passing ``trace`` records each
    deletion with the unwitnessed element and its condition.
    """
    mode = get_mode(mode) if isinstance(mode, str) else mode
    cands = (_candidates(frame, mode) if candidates is None
             else [_index_triple(frame, p) for p in candidates])
    survivors, succ, _ = _prune(frame, mode, cands, trace)
    points = [_prepoint(frame, cands[i]) for i in survivors]
    rel = set()
    for new_i, old_i in enumerate(survivors):
        for new_j in bits(succ[new_i]):
            rel.add((points[new_i], points[new_j]))
    return points, rel


def _index_triple(frame: ModalFrame, p: PrePoint):
    lat = frame.lattice
    ctx = _context(frame)
    k = next(i for i, c in enumerate(ctx.chars) if c == p.character)
    g = -1 if p.filter is None else lat.require(p.filter.generator)
    return (k, lat.require(p.element), g)


def _prune(frame: ModalFrame, mode: ConstructionMode, cands, trace=None):
    """Shared core: returns (survivor old-indices, reindexed succ masks,
    per-element truth masks over the survivors)."""
    lat = frame.lattice
    ctx = _context(frame)
    n = len(cands)
    # which candidates' characters accept each lattice element
    accept = [0] * lat.n
    for j, (kv, _, _) in enumerate(cands):
        t = ctx.truth[kv]
        for c in range(lat.n):
            if t >> c & 1:
                accept[c] |= 1 << j
    succ = _relation_masks(frame, cands)
    full = (1 << n) - 1
    wit: list[list[int]] = []
    meta: list[list[tuple[str, int]]] = []
    want_box = BOX_WITNESS in mode.point_conditions
    for i, (k, a, g) in enumerate(cands):
        reqs, reqmeta = [], []
        for c in range(lat.n):
            if not lat.leq_i(c, a):
                reqs.append(succ[i] & accept[c])
                reqmeta.append((DIAMOND_WITNESS, c))
        if want_box:
            gen = g if g >= 0 else ctx.fgen[k]
            for c in range(lat.n):
                if not lat.leq_i(gen, c):
                    reqs.append(succ[i] & ~accept[c] & full)
                    reqmeta.append((BOX_WITNESS, c))
        wit.append(reqs)
        meta.append(reqmeta)
    pred = [0] * n
    for i in range(n):
        for j in bits(succ[i]):
            pred[j] |= 1 << i
    if trace is not None:
        alive, deletions = kernels.prune_gfp_trace(n, wit, pred)
        for u, k_req in deletions:
            cond, c = meta[u][k_req]
            trace.append({"point": _prepoint(frame, cands[u]).label,
                          "condition": cond, "element": lat.names[c]})
    else:
        alive = kernels.prune_gfp(n, wit, pred)
    survivors = [i for i in range(n) if alive >> i & 1]
    renumber = {old: new for new, old in enumerate(survivors)}
    new_succ = []
    for old in survivors:
        row = 0
        for j in bits(succ[old] & alive):
            row |= 1 << renumber[j]
        new_succ.append(row)
    new_accept = []
    for c in range(lat.n):
        row = 0
        for old in bits(accept[c] & alive):
            row |= 1 << renumber[old]
        new_accept.append(row)
    return survivors, new_succ, new_accept


def build_point_space(frame: ModalFrame, mode: ConstructionMode | str,
                      trace: list | None = None) -> PointSpace:
    """Enumerate, prune, and package the survivors with their topology,
    then check everything the construction promises about phi.

    Results are memoized per frame and mode (except when tracing)."""
    mode = get_mode(mode) if isinstance(mode, str) else mode
    cache = frame.__dict__.setdefault("_point_spaces", {})
    if trace is None and mode.name in cache:
        return cache[mode.name]
    cands = _candidates(frame, mode)
    survivors, succ, accept = _prune(frame, mode, cands, trace)
    ps = PointSpace(frame, mode, [_prepoint(frame, cands[i]) for i in survivors],
                    succ, accept)
    _self_check(ps)
    cache[mode.name] = ps
    return ps


def _self_check(ps: PointSpace):
    cls = classify_morphism(ps.phi_morphism())
    if cls.level == "not_morphism":
        raise SelfCheckFailed(f"phi is not a modal frame morphism: {cls.witness}")
    conds = ps.mode.prepoint_conditions
    if A_MAXIMAL in conds and not cls.dia_strict:
        raise SelfCheckFailed("phi should commute with diamond in this mode")
    if FILTER_BELOW in conds and BOX_WITNESS in ps.mode.point_conditions \
            and not cls.box_strict:
        raise SelfCheckFailed("phi should commute with box in this mode")


def phi(frame: ModalFrame, mode: ConstructionMode | str, c: str) -> frozenset[PrePoint]:
    """The points whose character accepts ``c`` (builds the space)."""
    return build_point_space(frame, mode).phi(c)


@dataclass(frozen=True)
class TripmotCheck:
    """Two readings of membership: order-theoretic on the left,
    relational on the right; a valid construction makes them agree."""

    below_element: bool            # c <= a
    no_successor_accepts: bool     # no related point accepts c
    in_filter: bool | None         # c in F (triple modes)
    all_successors_accept: bool | None

    @property
    def ok(self) -> bool:
        first = self.below_element == self.no_successor_accepts
        if self.in_filter is None:
            return first
        return first and self.in_filter == self.all_successors_accept


def tripmot_check(ps: PointSpace, point: PrePoint | int | str, c: str) -> TripmotCheck:
    if isinstance(point, PrePoint):
        idx = ps.find(point)
        if idx is None:
            raise StructureError(f"{point!r} is not a surviving point")
    elif isinstance(point, str):
        idx = ps.labels.index(point)
    else:
        idx = point
    lat = ps.frame.lattice
    pp = ps.prepoints[idx]
    cm = ps.phi_mask(c)
    below = lat.leq(c, pp.element)
    none_accept = not ps.succ[idx] & cm
    if pp.filter is None:
        return TripmotCheck(below, none_accept, None, None)
    return TripmotCheck(below, none_accept, pp.filter.contains(c),
                        ps.succ[idx] & ~cm == 0)


# -- canonical maps -------------------------------------------------------

def _char_from_truth(lat, truth_mask: int) -> Character:
    prime = lat.names[lat.join_mask(((1 << lat.n) - 1) & ~truth_mask)]
    p = Character(lat, prime)
    if p.truth_mask != truth_mask:
        raise SelfCheckFailed("truth set is not a character")
    return p


def _prepoint_of_behavior(frame: ModalFrame, mode: ConstructionMode,
                          truth_mask: int, dead_mask: int, req_mask: int) -> PrePoint:
    """Assemble the pre-point with the given character truth set, set of
    elements with no relational support (for ``a``), and set of elements
    required everywhere (for ``F``)."""
    lat = frame.lattice
    p = _char_from_truth(lat, truth_mask)
    a = lat.names[lat.join_mask(dead_mask)]
    if not mode.triple:
        return PrePoint(p, a, None)
    gen = lat.names[lat.meet_mask(req_mask)]
    return PrePoint(p, a, PrincipalFilter(lat, gen))


def f_sharp(f: ModalFrameMorphism, space: RelationalSpace,
            mode: ConstructionMode | str, verify: bool = True) -> SpaceMorphism:
    """The mate of a frame map into the opens of a space: each point goes
    to the pre-point describing its behaviour through ``f``.

    With ``verify`` on (the default) the landing, the morphism class, the
    factorisation through phi, and uniqueness among mode morphisms are all
    checked rather than trusted.
    """
    mode = get_mode(mode) if isinstance(mode, str) else mode
    od = omega_data(space)
    if f.target != od.frame:
        raise StructureError("the morphism target is not the frame of opens of the space")
    cls = classify_morphism(f)
    if not morphism_in_category(cls, mode.frame_morphisms):
        raise NotAMorphismOfMode(
            f"map is {cls.level}, mode {mode.name} needs {mode.frame_morphisms}")
    if not frame_in_mode_objects(f.source, mode):
        raise ModeMismatch(f"source frame is not a {mode.frame_objects} frame")
    if not space_in_mode_objects(space, mode):
        raise ModeMismatch(f"space does not satisfy {mode.space_objects}")
    A = f.source
    lat = A.lattice
    ps = build_point_space(A, mode)
    f_masks = [od.opens[j] for j in f.map_i]      # open mask of f(b) per element b
    mapping = {}
    for x in range(space.n):
        truth = dead = req = 0
        rx = space.succ[x]
        for b in range(lat.n):
            if f_masks[b] >> x & 1:
                truth |= 1 << b
            if not rx & f_masks[b]:
                dead |= 1 << b
            if rx & ~f_masks[b] == 0:
                req |= 1 << b
        pp = _prepoint_of_behavior(A, mode, truth, dead, req)
        idx = ps.find(pp)
        if idx is None:
            raise ImageNotAPoint(
                f"image of point {space.points[x]!r} is {pp.label}, which is "
                f"not a surviving point in mode {mode.name}")
        mapping[space.points[x]] = ps.labels[idx]
    g = SpaceMorphism(space, ps.space(), mapping)
    if verify:
        gcls = classify_space_morphism(g)
        if not space_morphism_in_category(gcls, mode.space_morphisms):
            raise SelfCheckFailed(
                f"mate is only {gcls.level}; mode {mode.name} promises "
                f"{mode.space_morphisms}")
        _check_factorisation(f, g, ps, od)
        _check_unique(f, g, ps, od, mode)
    return g


def _check_factorisation(f, g, ps: PointSpace, od: OmegaFrame):
    sp = ps.space()
    for c_i, c in enumerate(ps.frame.lattice.names):
        phi_space_mask = sp.mask_of(ps.phi_labels(c))
        if g.preimage_mask(phi_space_mask) != od.opens[f.map_i[c_i]]:
            raise SelfCheckFailed(f"preimage of phi({c}) disagrees with f({c})")


def _check_unique(f, g, ps: PointSpace, od: OmegaFrame, mode,
                  search_cap: int = 1_000_000):
    """Any mode morphism with the same factorisation must be ``g``; the
    factorisation pins each image to a point with the same character, so
    only those assignments are searched."""
    sp = ps.space()
    space = g.source
    slots = []
    for x in range(space.n):
        truth = 0
        for b in range(len(od.opens)):
            if od.opens[f.map_i[b]] >> x & 1:
                truth |= 1 << b
        options = [i for i, pp in enumerate(ps.prepoints)
                   if pp.character.truth_mask == truth]
        slots.append(options)
    total = 1
    for s in slots:
        total *= len(s)
        if total > search_cap:
            raise StructureError("uniqueness search space too large")
    for combo in itertools.product(*slots):
        cand = SpaceMorphism(space, sp, {space.points[x]: ps.labels[i]
                                         for x, i in enumerate(combo)})
        if cand == g:
            continue
        if not space_morphism_in_category(classify_space_morphism(cand),
                                          mode.space_morphisms):
            continue
        ok = all(cand.preimage_mask(sp.mask_of(ps.phi_labels(c))) == od.opens[f.map_i[ci]]
                 for ci, c in enumerate(ps.frame.lattice.names))
        if ok:
            raise SelfCheckFailed("mate is not unique for its factorisation")


def psi(space: RelationalSpace, mode: ConstructionMode | str) -> SpaceMorphism:
    """The unit: a point becomes the pre-point remembering which opens it
    inhabits, which opens miss its successors, and which contain them."""
    mode = get_mode(mode) if isinstance(mode, str) else mode
    if not space_in_mode_objects(space, mode):
        raise ModeMismatch(
            f"space does not satisfy {mode.space_objects}, required by {mode.name}")
    od = omega_data(space)
    ps = build_point_space(od.frame, mode)
    return _psi(space, od, ps)


def _psi(space: RelationalSpace, od: OmegaFrame, ps: PointSpace) -> SpaceMorphism:
    mode = ps.mode
    mapping = {}
    for x in range(space.n):
        truth = dead = req = 0
        rx = space.succ[x]
        for b, u in enumerate(od.opens):
            if u >> x & 1:
                truth |= 1 << b
            if not rx & u:
                dead |= 1 << b
            if rx & ~u == 0:
                req |= 1 << b
        pp = _prepoint_of_behavior(od.frame, mode, truth, dead, req)
        idx = ps.find(pp)
        if idx is None:
            raise SelfCheckFailed(
                f"unit image of {space.points[x]!r} is {pp.label}, not a surviving point")
        mapping[space.points[x]] = ps.labels[idx]
    g = SpaceMorphism(space, ps.space(), mapping)
    cls = classify_space_morphism(g)
    if not space_morphism_in_category(cls, mode.space_morphisms):
        raise SelfCheckFailed(f"unit is only {cls.level} in mode {mode.name}")
    return g


def point_functor_on_morphism(f: ModalFrameMorphism,
                              mode: ConstructionMode | str) -> SpaceMorphism:
    """Contravariant action: precompose characters, push the element down
    through ``f``, pull the filter back."""
    mode = get_mode(mode) if isinstance(mode, str) else mode
    cls = classify_morphism(f)
    if not morphism_in_category(cls, mode.frame_morphisms):
        raise NotAMorphismOfMode(
            f"map is {cls.level}, mode {mode.name} needs {mode.frame_morphisms}")
    A, B = f.source, f.target
    ps_b = build_point_space(B, mode)
    ps_a = build_point_space(A, mode)
    lat_a, lat_b = A.lattice, B.lattice
    mapping = {}
    for i, pp in enumerate(ps_b.prepoints):
        q_truth = pp.character.truth_mask
        truth = dead = req = 0
        b_el = lat_b.require(pp.element)
        gen = None if pp.filter is None else lat_b.require(pp.filter.generator)
        for c in range(lat_a.n):
            fc = f.map_i[c]
            if q_truth >> fc & 1:
                truth |= 1 << c
            if lat_b.leq_i(fc, b_el):
                dead |= 1 << c
            if gen is not None and lat_b.leq_i(gen, fc):
                req |= 1 << c
        image = _prepoint_of_behavior(A, mode, truth, dead, req)
        idx = ps_a.find(image)
        if idx is None:
            raise ImageNotAPoint(
                f"image of {pp.label} is {image.label}, not a surviving point")
        mapping[ps_b.labels[i]] = ps_a.labels[idx]
    g = SpaceMorphism(ps_b.space(), ps_a.space(), mapping)
    gcls = classify_space_morphism(g)
    if not space_morphism_in_category(gcls, mode.space_morphisms):
        raise SelfCheckFailed(
            f"functor image is only {gcls.level} in mode {mode.name}")
    return g


def related_character(frame: ModalFrame, p: Character, a: str, b: str) -> Character:
    """A character rejecting ``a``, accepting ``b``, and absorbing the
    boxes ``p`` accepts; exists whenever ``p`` rejects dia a but not
    dia b."""
    lat = frame.lattice
    if p.truth_mask >> frame.dia_i[lat.require(a)] & 1:
        raise PreconditionViolated(f"character accepts dia {a!r}")
    if not p.truth_mask >> frame.dia_i[lat.require(b)] & 1:
        raise PreconditionViolated(f"character rejects dia {b!r}")
    ctx = _context(frame)
    k = ctx.chars.index(p)
    ai, bi = lat.require(a), lat.require(b)
    for q in ctx.chars:
        t = q.truth_mask
        if not t >> ai & 1 and t >> bi & 1 and t >> ctx.fgen[k] & 1:
            return q
    raise NoWitness(f"no character rejects {a!r}, accepts {b!r} and extends the boxes")


def extend_to_point(frame: ModalFrame, p: Character, a: str,
                    mode: ConstructionMode | str) -> PrePoint:
    """A surviving point over ``p`` whose element dominates ``a``,
    preferring larger elements, then smaller filters, then input order."""
    mode = get_mode(mode) if isinstance(mode, str) else mode
    lat = frame.lattice
    if p.truth_mask >> frame.dia_i[lat.require(a)] & 1:
        raise PreconditionViolated(f"character accepts dia {a!r}")
    ps = build_point_space(frame, mode)
    best = None
    for pp in ps.prepoints:
        if pp.character != p or not lat.leq(a, pp.element):
            continue
        if best is None:
            best = pp
            continue
        if lat.leq(best.element, pp.element) and pp.element != best.element:
            best = pp
        elif pp.element == best.element and pp.filter is not None \
                and lat.leq(pp.filter.generator, best.filter.generator) \
                and pp.filter.generator != best.filter.generator:
            best = pp
    if best is None:
        raise NoWitness(f"no surviving point over the character extends {a!r}")
    return best


def brute_force_points(frame: ModalFrame, mode: ConstructionMode | str,
                       limit: int = 20):
    """Largest closed candidate set by scanning all subsets (the union of
    closed sets is closed, so the maximum is the union of all of them).
    Exponential; only for cross-checking small instances."""
    mode = get_mode(mode) if isinstance(mode, str) else mode
    cands = _candidates(frame, mode)
    n = len(cands)
    if n > limit:
        raise StructureError(f"{n} pre-points exceed the brute-force limit {limit}")
    lat = frame.lattice
    ctx = _context(frame)
    accept = [0] * lat.n
    for j, (kv, _, _) in enumerate(cands):
        for c in bits(ctx.truth[kv]):
            accept[c] |= 1 << j
    succ = _relation_masks(frame, cands)
    want_box = BOX_WITNESS in mode.point_conditions
    union = 0
    for sub in range(1 << n):
        ok = True
        for i in bits(sub):
            k, a, g = cands[i]
            live = succ[i] & sub
            for c in range(lat.n):
                if not lat.leq_i(c, a) and not live & accept[c]:
                    ok = False
                    break
            if ok and want_box:
                gen = g if g >= 0 else ctx.fgen[k]
                for c in range(lat.n):
                    if not lat.leq_i(gen, c) and not live & ~accept[c] & ((1 << n) - 1):
                        ok = False
                        break
            if not ok:
                break
        if ok:
            union |= sub
    points = [_prepoint(frame, cands[i]) for i in bits(union)]
    rel = {(points[i], points[j])
           for i, oi in enumerate(bits(union))
           for j, oj in enumerate(bits(union)) if succ[oi] >> oj & 1}
    return points, rel
