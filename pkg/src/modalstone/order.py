"""Finite posets, distributive lattices, characters, filters and ideals.

Elements are opaque string ids.  Internally every element gets an index
``0..n-1`` and the order is kept as one bitmask row per element after
reflexive-transitive closure, so order queries are O(1) word operations.
All public functions speak element names; the index-level tables (``up``,
``down``, ``meet_t``, ``join_t``) are part of the supported surface for
code that iterates over whole lattices.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import reduce
from typing import Iterable, Sequence

# Above this size the literal directed-subset scans (compacts, Scott-open)
# switch to the structural shortcut: in a finite poset every directed set
# contains its own join, so the scan is decided without enumeration.
DIRECTED_SCAN_LIMIT = 12


class StructureError(Exception):
    """A finite structure failed validation."""


class NotAPartialOrder(StructureError):
    pass


class MissingMeetOrJoin(StructureError):
    pass


class NotDistributive(StructureError):
    pass


class UnknownElement(StructureError):
    pass


class NotPrincipal(StructureError):
    pass


def bits(mask: int):
    """Yield the indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class FiniteLattice:
    """A finite (bounded, distributive) lattice with O(1) order queries.

    Construct through :func:`validate_lattice`; the constructor trusts its
    arguments.
    """

    def __init__(self, names: Sequence[str], up: Sequence[int],
                 meet_t: Sequence[Sequence[int]], join_t: Sequence[Sequence[int]]):
        self.names = tuple(names)
        self.n = len(self.names)
        self.index = {a: i for i, a in enumerate(self.names)}
        self.up = tuple(up)                       # up[i] = {j : i <= j}
        full = (1 << self.n) - 1
        down = [0] * self.n
        for i in range(self.n):
            for j in bits(self.up[i]):
                down[j] |= 1 << i
        self.down = tuple(down)                   # down[i] = {j : j <= i}
        self.meet_t = tuple(tuple(row) for row in meet_t)
        self.join_t = tuple(tuple(row) for row in join_t)
        self.bot_i = next(i for i in range(self.n) if self.up[i] == full)
        self.top_i = next(i for i in range(self.n) if self.down[i] == full)

    # -- identity ---------------------------------------------------------

    def __eq__(self, other):
        return (isinstance(other, FiniteLattice)
                and self.names == other.names and self.up == other.up)

    def __hash__(self):
        return hash((self.names, self.up))

    def __repr__(self):
        return f"FiniteLattice({self.n} elements)"

    # -- name-level queries ------------------------------------------------

    def require(self, a: str) -> int:
        try:
            return self.index[a]
        except KeyError:
            raise UnknownElement(f"unknown lattice element {a!r}") from None

    @property
    def elements(self) -> tuple[str, ...]:
        return self.names

    @property
    def top(self) -> str:
        return self.names[self.top_i]

    @property
    def bottom(self) -> str:
        return self.names[self.bot_i]

    def leq(self, a: str, b: str) -> bool:
        return bool(self.up[self.require(a)] >> self.require(b) & 1)

    def meet(self, a: str, b: str) -> str:
        return self.names[self.meet_t[self.require(a)][self.require(b)]]

    def join(self, a: str, b: str) -> str:
        return self.names[self.join_t[self.require(a)][self.require(b)]]

    def big_meet(self, items: Iterable[str]) -> str:
        i = reduce(lambda x, y: self.meet_t[x][y], map(self.require, items), self.top_i)
        return self.names[i]

    def big_join(self, items: Iterable[str]) -> str:
        i = reduce(lambda x, y: self.join_t[x][y], map(self.require, items), self.bot_i)
        return self.names[i]

    # -- index-level helpers ----------------------------------------------

    def leq_i(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def join_mask(self, mask: int) -> int:
        """Index of the join of the elements in ``mask``."""
        i = self.bot_i
        for j in bits(mask):
            i = self.join_t[i][j]
        return i

    def meet_mask(self, mask: int) -> int:
        i = self.top_i
        for j in bits(mask):
            i = self.meet_t[i][j]
        return i

    def mask_of(self, items: Iterable[str]) -> int:
        m = 0
        for a in items:
            m |= 1 << self.require(a)
        return m

    def names_of(self, mask: int) -> frozenset[str]:
        return frozenset(self.names[i] for i in bits(mask))

    # -- derived order data -----------------------------------------------

    def primes(self) -> list[str]:
        """Elements p != top with a&b <= p implying a <= p or b <= p."""
        out = []
        for p in range(self.n):
            if p == self.top_i:
                continue
            dp = self.down[p]
            ok = True
            for a in range(self.n):
                if not ok:
                    break
                if dp >> a & 1:
                    continue
                for b in range(a, self.n):
                    if dp >> b & 1:
                        continue
                    if dp >> self.meet_t[a][b] & 1:
                        ok = False
                        break
            if ok:
                out.append(self.names[p])
        return out

    def join_irreducibles(self) -> list[str]:
        """Elements other than bottom that are not the join of everything
        strictly below them."""
        out = []
        for j in range(self.n):
            if j == self.bot_i:
                continue
            if self.join_mask(self.down[j] & ~(1 << j)) != j:
                out.append(self.names[j])
        return out


def validate_lattice(elements: Sequence[str], leq: Iterable[tuple[str, str]]) -> FiniteLattice:
    """Check a finite presentation and return the lattice.

    ``leq`` lists generating pairs; the reflexive-transitive closure is taken
    first, then antisymmetry, binary meets/joins, bounds and distributivity
    are verified.  Raises a :class:`StructureError` subclass naming a witness
    on the first failure.
    """
    names = tuple(elements)
    if not names:
        raise StructureError("a lattice needs at least one element")
    seen = set()
    for a in names:
        if a in seen:
            raise StructureError(f"duplicate element id {a!r}")
        seen.add(a)
    index = {a: i for i, a in enumerate(names)}
    n = len(names)
    up = [1 << i for i in range(n)]
    for a, b in leq:
        for x in (a, b):
            if x not in index:
                raise UnknownElement(f"leq mentions unknown element {x!r}")
        up[index[a]] |= 1 << index[b]
    # reflexive-transitive closure, then antisymmetry
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = up[i]
            for j in bits(acc):
                acc |= up[j]
            if acc != up[i]:
                up[i] = acc
                changed = True
    for i in range(n):
        for j in bits(up[i]):
            if i != j and up[j] >> i & 1:
                raise NotAPartialOrder(
                    f"{names[i]!r} <= {names[j]!r} <= {names[i]!r} with distinct elements")
    down = [0] * n
    for i in range(n):
        for j in bits(up[i]):
            down[j] |= 1 << i
    # binary meets and joins must exist and be unique
    meet_t = [[0] * n for _ in range(n)]
    join_t = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(i, n):
            lower = down[i] & down[j]
            g = [k for k in bits(lower) if lower & ~down[k] == 0]
            if len(g) != 1:
                raise MissingMeetOrJoin(
                    f"{names[i]!r} and {names[j]!r} have no greatest lower bound")
            meet_t[i][j] = meet_t[j][i] = g[0]
            upper = up[i] & up[j]
            l = [k for k in bits(upper) if upper & ~up[k] == 0]
            if len(l) != 1:
                raise MissingMeetOrJoin(
                    f"{names[i]!r} and {names[j]!r} have no least upper bound")
            join_t[i][j] = join_t[j][i] = l[0]
    full = (1 << n) - 1
    if not any(up[i] == full for i in range(n)):
        raise MissingMeetOrJoin("no bottom element")
    if not any(down[i] == full for i in range(n)):
        raise MissingMeetOrJoin("no top element")
    # distributivity, all triples
    for a in range(n):
        for b in range(n):
            for c in range(n):
                left = meet_t[a][join_t[b][c]]
                right = join_t[meet_t[a][b]][meet_t[a][c]]
                if left != right:
                    raise NotDistributive(
                        f"{names[a]!r} & ({names[b]!r} | {names[c]!r}) != "
                        f"({names[a]!r} & {names[b]!r}) | ({names[a]!r} & {names[c]!r})")
    return FiniteLattice(names, up, meet_t, join_t)


@dataclass(frozen=True)
class Character:
    """A lattice map to {0,1} preserving finite meets and all joins.

    In a finite distributive lattice these correspond exactly to the prime
    elements: ``value(a) = 1`` iff ``a`` is not below ``prime``.
    """

    lattice: FiniteLattice
    prime: str

    def value(self, a: str) -> int:
        return 0 if self.lattice.leq(a, self.prime) else 1

    @property
    def truth_mask(self) -> int:
        lat = self.lattice
        return ((1 << lat.n) - 1) & ~lat.down[lat.require(self.prime)]

    def members(self) -> frozenset[str]:
        """The elements sent to 1 (a completely prime filter)."""
        return self.lattice.names_of(self.truth_mask)

    def __repr__(self):
        return f"Character(prime={self.prime!r})"


def characters(lattice: FiniteLattice) -> list[Character]:
    """All characters, one per prime element, in element order."""
    return [Character(lattice, p) for p in lattice.primes()]


@dataclass(frozen=True)
class PrincipalFilter:
    """An up-set closed under meets, stored by its least element."""

    lattice: FiniteLattice
    generator: str

    @property
    def member_mask(self) -> int:
        return self.lattice.up[self.lattice.require(self.generator)]

    def members(self) -> frozenset[str]:
        return self.lattice.names_of(self.member_mask)

    def contains(self, a: str) -> bool:
        return self.lattice.leq(self.generator, a)

    def __repr__(self):
        return f"PrincipalFilter(^{self.generator})"


@dataclass(frozen=True)
class PrincipalIdeal:
    """A down-set closed under joins, stored by its greatest element."""

    lattice: FiniteLattice
    generator: str

    @property
    def member_mask(self) -> int:
        return self.lattice.down[self.lattice.require(self.generator)]

    def members(self) -> frozenset[str]:
        return self.lattice.names_of(self.member_mask)

    def contains(self, a: str) -> bool:
        return self.lattice.leq(a, self.generator)

    def __repr__(self):
        return f"PrincipalIdeal(v{self.generator})"


def is_filter(lattice: FiniteLattice, members: Iterable[str]) -> bool:
    """Nonempty, upward closed and closed under binary meets."""
    mask = lattice.mask_of(members)
    if mask == 0:
        return False
    for i in bits(mask):
        if lattice.up[i] & ~mask:
            return False
        for j in bits(mask):
            if not mask >> lattice.meet_t[i][j] & 1:
                return False
    return True


def as_principal_filter(lattice: FiniteLattice, members: Iterable[str]) -> PrincipalFilter:
    """Fit an explicit member set into a :class:`PrincipalFilter`.

    Raises :class:`NotPrincipal` naming two members whose meet escapes the
    set, and :class:`StructureError` when the set is empty or not an up-set.
    """
    mask = lattice.mask_of(members)
    if mask == 0:
        raise StructureError("a filter cannot be empty")
    for i in bits(mask):
        for j in bits(mask):
            if not mask >> lattice.meet_t[i][j] & 1:
                raise NotPrincipal(
                    f"meet of {lattice.names[i]!r} and {lattice.names[j]!r} "
                    f"is outside the candidate filter")
    g = lattice.meet_mask(mask)
    if lattice.up[g] != mask:
        extra = next(bits(mask & ~lattice.up[g]), None)
        raise StructureError(
            f"candidate filter is not upward closed near {lattice.names[g]!r}"
            + (f" (contains {lattice.names[extra]!r})" if extra is not None else ""))
    return PrincipalFilter(lattice, lattice.names[g])


def as_principal_ideal(lattice: FiniteLattice, members: Iterable[str]) -> PrincipalIdeal:
    mask = lattice.mask_of(members)
    if mask == 0:
        raise StructureError("an ideal cannot be empty")
    for i in bits(mask):
        for j in bits(mask):
            if not mask >> lattice.join_t[i][j] & 1:
                raise NotPrincipal(
                    f"join of {lattice.names[i]!r} and {lattice.names[j]!r} "
                    f"is outside the candidate ideal")
    g = lattice.join_mask(mask)
    if lattice.down[g] != mask:
        raise StructureError(f"candidate ideal is not downward closed near {lattice.names[g]!r}")
    return PrincipalIdeal(lattice, lattice.names[g])


def all_ideals(lattice: FiniteLattice) -> list[PrincipalIdeal]:
    """Every ideal, i.e. every nonempty join-closed down-set.

    In a finite lattice each such set contains its own join, so the ideals
    are exactly the principal ones, one per element.
    """
    return [PrincipalIdeal(lattice, a) for a in lattice.names]


def _directed_masks(lattice: FiniteLattice) -> list[int]:
    """The nonempty directed subsets as masks, cached on the lattice
    (small lattices only)."""
    cached = getattr(lattice, "_directed", None)
    if cached is not None:
        return cached
    n = lattice.n
    out = []
    for mask in range(1, 1 << n):
        ok = True
        for i in bits(mask):
            for j in bits(mask):
                if j > i and not lattice.up[i] & lattice.up[j] & mask:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(mask)
    lattice._directed = out
    return out


def compacts(lattice: FiniteLattice) -> frozenset[str]:
    """Elements c such that c <= join(S) for directed S forces c <= s for
    some s in S.

    Checked literally over all directed subsets up to
    ``DIRECTED_SCAN_LIMIT`` elements; beyond that the scan is decided
    structurally (a finite directed set contains its join), making every
    element compact.
    """
    cached = getattr(lattice, "_compacts", None)
    if cached is not None:
        return cached
    n = lattice.n
    if n > DIRECTED_SCAN_LIMIT:
        result = frozenset(lattice.names)
    else:
        out = []
        for c in range(n):
            compact = True
            for mask in _directed_masks(lattice):
                if lattice.leq_i(c, lattice.join_mask(mask)):
                    if not any(lattice.leq_i(c, s) for s in bits(mask)):
                        compact = False
                        break
            if compact:
                out.append(lattice.names[c])
        result = frozenset(out)
    lattice._compacts = result
    return result


def is_scott_open(lattice: FiniteLattice, members: Iterable[str]) -> bool:
    """Upward closed, and every directed set whose join lands in the set
    already meets it."""
    mask = lattice.mask_of(members)
    for i in bits(mask):
        if lattice.up[i] & ~mask:
            return False
    if lattice.n > DIRECTED_SCAN_LIMIT:
        # a finite directed set attains its join, which then lies in the set
        return True
    for dmask in _directed_masks(lattice):
        if mask >> lattice.join_mask(dmask) & 1 and not dmask & mask:
            return False
    return True
