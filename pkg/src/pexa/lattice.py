"""Finite lattices with join-preserving maps.

Only finite lattices are handled, so every element is compact and the
algebraic-lattice conditions hold automatically.  Subobjects are principal
ideals ``{y <= x}``; the quotient by such an ideal is the upper interval
``[x, top]`` with projection ``y -> y v x``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import combinations

from . import search, smod
from .search import Sig, bits, mask_of, singleton_table
from .smod import BiCartesianSquare, FiniteModule
from .tables import BOOLEAN, StructureError, check_size

ISO = "iso"
MONO = "normal_mono"
EPI = "normal_epi"
NEITHER = "neither"


class NotAPartialOrder(StructureError):
    pass


class NotALattice(StructureError):
    def __init__(self, msg, pair=None):
        super().__init__(msg)
        self.pair = pair


@dataclass(frozen=True)
class FiniteLattice:
    leq: tuple
    labels: tuple = field(default=(), compare=False)

    def __post_init__(self):
        n = len(self.leq)
        if n == 0:
            raise StructureError("a lattice needs at least one element")
        check_size(n, "lattice")
        leq = tuple(tuple(bool(v) for v in row) for row in self.leq)
        if any(len(r) != n for r in leq):
            raise StructureError(f"leq relation must be {n}x{n}")
        for a in range(n):
            if not leq[a][a]:
                raise NotAPartialOrder(f"not reflexive at {a}")
            for b in range(n):
                if a != b and leq[a][b] and leq[b][a]:
                    raise NotAPartialOrder(f"not antisymmetric at ({a}, {b})")
                if leq[a][b] and any(leq[b][c] and not leq[a][c] for c in range(n)):
                    raise NotAPartialOrder(f"not transitive at ({a}, {b})")
        object.__setattr__(self, "leq", leq)
        object.__setattr__(self, "labels", tuple(self.labels))
        join = [[-1] * n for _ in range(n)]
        meet = [[-1] * n for _ in range(n)]
        for a in range(n):
            for b in range(a, n):
                ub = [c for c in range(n) if leq[a][c] and leq[b][c]]
                least = [c for c in ub if all(leq[c][d] for d in ub)]
                lb = [c for c in range(n) if leq[c][a] and leq[c][b]]
                great = [c for c in lb if all(leq[d][c] for d in lb)]
                if not least:
                    raise NotALattice(f"elements {a} and {b} have no join", (a, b))
                if not great:
                    raise NotALattice(f"elements {a} and {b} have no meet", (a, b))
                join[a][b] = join[b][a] = least[0]
                meet[a][b] = meet[b][a] = great[0]
        object.__setattr__(self, "join", tuple(map(tuple, join)))
        object.__setattr__(self, "meet", tuple(map(tuple, meet)))

    @property
    def size(self) -> int:
        return len(self.leq)

    @cached_property
    def bottom(self) -> int:
        return next(a for a in range(self.size) if all(self.leq[a]))

    @cached_property
    def top(self) -> int:
        return next(a for a in range(self.size) if all(r[a] for r in self.leq))

    @cached_property
    def sig(self) -> Sig:
        return Sig(self.size, (singleton_table(self.join),), (), zero=self.bottom)

    def join_all(self, elements) -> int:
        out = self.bottom
        for e in elements:
            out = self.join[out][e]
        return out

    def down(self, x: int) -> int:
        return mask_of(a for a in range(self.size) if self.leq[a][x])

    def up(self, x: int) -> int:
        return mask_of(a for a in range(self.size) if self.leq[x][a])

    @cached_property
    def covers(self) -> tuple:
        """``covers[a]``: elements covering ``a``."""
        n, le = self.size, self.leq
        out = []
        for a in range(n):
            above = [b for b in range(n) if b != a and le[a][b]]
            out.append(tuple(b for b in above
                             if not any(c != b and le[c][b] for c in above)))
        return tuple(out)

    @cached_property
    def atoms(self) -> tuple:
        return self.covers[self.bottom]

    @cached_property
    def height(self) -> tuple:
        """Length of a longest chain from bottom to each element."""
        h = [-1] * self.size
        for a in sorted(range(self.size), key=lambda x: bin(self.down(x)).count("1")):
            below = [b for b in range(self.size) if a in self.covers[b]]
            h[a] = 1 + max((h[b] for b in below), default=-1)
        return tuple(h)


@dataclass(frozen=True)
class LatticeMorphism:
    source: FiniteLattice
    target: FiniteLattice
    map: tuple

    def __post_init__(self):
        m = tuple(int(v) for v in self.map)
        if len(m) != self.source.size or any(not 0 <= v < self.target.size for v in m):
            raise ValueError("map table does not fit source/target")
        object.__setattr__(self, "map", m)

    def __call__(self, x):
        return self.map[x]

    def then(self, g: "LatticeMorphism") -> "LatticeMorphism":
        return LatticeMorphism(self.source, g.target, tuple(g.map[v] for v in self.map))

    @property
    def injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    @property
    def surjective(self) -> bool:
        return len(set(self.map)) == self.target.size

    def image(self, mask: int | None = None) -> int:
        src = range(self.source.size) if mask is None else bits(mask)
        return mask_of(self.map[x] for x in src)

    def preimage(self, mask: int) -> int:
        return mask_of(x for x, v in enumerate(self.map) if mask >> v & 1)

    def kernel(self) -> int:
        return self.preimage(1 << self.target.bottom)

    def is_valid(self) -> bool:
        s, t, f = self.source, self.target, self.map
        if f[s.bottom] != t.bottom:
            return False
        return all(f[s.join[a][b]] == t.join[f[a]][f[b]]
                   for a in range(s.size) for b in range(s.size))


@dataclass(frozen=True)
class GeometricReport:
    jordan_dedekind: bool
    semimodular: bool
    atomistic: bool
    witnesses: dict = field(default_factory=dict)

    @property
    def geometric(self) -> bool:
        return self.jordan_dedekind and self.semimodular and self.atomistic


# -- builders ---------------------------------------------------------------

def lattice_from_poset(leq, labels=()) -> FiniteLattice:
    return FiniteLattice(leq, labels)


def from_order(n: int, le, labels=()) -> FiniteLattice:
    return FiniteLattice([[le(a, b) for b in range(n)] for a in range(n)], labels)


def chain_lattice(k: int) -> FiniteLattice:
    return from_order(k, lambda a, b: a <= b)


def boolean_lattice(n: int) -> FiniteLattice:
    return from_order(1 << n, lambda a, b: a & b == a)


def ln_lattice(n: int) -> FiniteLattice:
    """``{0, a_1, ..., a_n, 1}`` with pairwise incomparable atoms; M_3 is ``ln_lattice(3)``."""
    top = n + 1
    return from_order(n + 2, lambda a, b: a == b or a == 0 or b == top,
                      labels=("0",) + tuple(f"a{i}" for i in range(1, n + 1)) + ("1",))


def pentagon() -> FiniteLattice:
    """N_5: ``0 < a < b < 1`` and ``0 < c < 1``."""
    rel = {(0, 1), (0, 2), (0, 3), (0, 4), (1, 2), (1, 4), (2, 4), (3, 4)}
    return from_order(5, lambda a, b: a == b or (a, b) in rel, labels=("0", "a", "b", "c", "1"))


# -- morphisms --------------------------------------------------------------

def is_normal_mono(f: LatticeMorphism) -> bool:
    if not f.injective:
        return False
    img = f.image()
    return all(f.target.down(y) & ~img == 0 for y in bits(img))


def normal_epi_base(f: LatticeMorphism) -> int | None:
    """The element ``x0`` when ``f`` is join with ``x0`` followed by an iso, else None."""
    s = f.source
    x0 = s.join_all(bits(f.kernel()))
    if len({f.map[y] for y in bits(s.up(x0))}) != f.target.size:
        return None
    if s.up(x0).bit_count() != f.target.size:
        return None
    return x0


def classify_lattice_morphism(f: LatticeMorphism) -> str:
    if not f.is_valid():
        raise ValueError("map does not preserve joins")
    mono, epi = is_normal_mono(f), normal_epi_base(f) is not None
    if mono and epi:
        return ISO
    return MONO if mono else EPI if epi else NEITHER


def enumerate_lattice_homs(a: FiniteLattice, b: FiniteLattice) -> list[LatticeMorphism]:
    return [LatticeMorphism(a, b, f) for f in sorted(search.iter_maps(a.sig, b.sig))]


def find_lattice_isomorphism(a: FiniteLattice, b: FiniteLattice) -> LatticeMorphism | None:
    f = search.find_isomorphism(a.sig, b.sig)
    return None if f is None else LatticeMorphism(a, b, f)


def lattice_automorphisms(a: FiniteLattice) -> list[LatticeMorphism]:
    return [LatticeMorphism(a, a, f) for f in sorted(search.iter_isomorphisms(a.sig, a.sig))]


def _restrict(lat: FiniteLattice, mask: int) -> tuple[FiniteLattice, tuple]:
    els = bits(mask)
    labels = tuple(lat.labels[e] for e in els) if lat.labels else ()
    sub = FiniteLattice([[lat.leq[a][b] for b in els] for a in els], labels)
    return sub, tuple(els)


def sublattice_object(lat: FiniteLattice, x: int) -> tuple[FiniteLattice, LatticeMorphism]:
    """The ideal below ``x`` and its inclusion."""
    sub, els = _restrict(lat, lat.down(x))
    return sub, LatticeMorphism(sub, lat, els)


def ideal_top(lat: FiniteLattice, mask: int) -> int:
    """Generator of an admissible sublattice given as a mask; raises if not principal."""
    if not mask >> lat.bottom & 1:
        raise ValueError("sublattice must contain bottom")
    x = lat.join_all(bits(mask))
    if lat.down(x) != mask:
        raise ValueError("sublattice is not downward closed and join closed")
    return x


def quotient_lattice(lat: FiniteLattice, k_mask: int) -> tuple[FiniteLattice, LatticeMorphism]:
    """``L/K`` for an admissible sublattice K given as a mask."""
    return interval_quotient(lat, ideal_top(lat, k_mask))


def interval_quotient(lat: FiniteLattice, x: int) -> tuple[FiniteLattice, LatticeMorphism]:
    """The interval above ``x`` with projection ``y -> y v x``."""
    q, els = _restrict(lat, lat.up(x))
    pos = {e: i for i, e in enumerate(els)}
    return q, LatticeMorphism(lat, q, tuple(pos[lat.join[y][x]] for y in range(lat.size)))


# -- the equivalence with B-modules -----------------------------------------

def _require_boolean(m: FiniteModule) -> None:
    if m.ring != BOOLEAN:
        raise ValueError("the base semiring must be B")


def saturated_submodule_lattice(m: FiniteModule) -> FiniteLattice:
    """S(M): saturated submodules ordered by inclusion; labels are the masks."""
    _require_boolean(m)
    masks = smod.enumerate_submodules(m, saturated_only=True)
    return FiniteLattice([[a & ~b == 0 for b in masks] for a in masks], tuple(masks))


def s_on_morphism(f: smod.ModuleMorphism, source: FiniteLattice | None = None,
                  target: FiniteLattice | None = None) -> LatticeMorphism:
    """S(f): a saturated submodule L goes to the saturation of f(L)."""
    _require_boolean(f.source)
    if not f.is_valid():
        raise smod.InvalidMorphism("map is not a module homomorphism")
    s = source or saturated_submodule_lattice(f.source)
    t = target or saturated_submodule_lattice(f.target)
    pos = {mask: i for i, mask in enumerate(t.labels)}
    return LatticeMorphism(s, t, tuple(pos[smod.saturation_closure(f.target, f.image(mask))]
                                       for mask in s.labels))


def compact_elements_module(lat: FiniteLattice) -> FiniteModule:
    """L^c as a B-module: addition is join, zero is bottom.

    Element ``i`` of the module is element ``order[i]`` of the lattice where
    ``order`` lists bottom first and then the rest by index.
    """
    order = element_order(lat)
    pos = {e: i for i, e in enumerate(order)}
    add = [[pos[lat.join[a][b]] for b in order] for a in order]
    return smod.b_module(add)


def element_order(lat: FiniteLattice) -> list[int]:
    return [lat.bottom] + [a for a in range(lat.size) if a != lat.bottom]


def module_lattice(m: FiniteModule) -> FiniteLattice:
    """The canonical order of a B-module (``a <= b iff a + b = b``)."""
    _require_boolean(m)
    return from_order(m.size, m.leq)


# -- geometric lattices -----------------------------------------------------

def is_geometric(lat: FiniteLattice) -> GeometricReport:
    n, le, join, meet = lat.size, lat.leq, lat.join, lat.meet
    lengths: dict[tuple[int, int], frozenset] = {}

    def chain_lengths(x, y):
        key = (x, y)
        if key not in lengths:
            if x == y:
                lengths[key] = frozenset({0})
            else:
                out = set()
                for c in lat.covers[x]:
                    if le[c][y]:
                        out.update(1 + v for v in chain_lengths(c, y))
                lengths[key] = frozenset(out)
        return lengths[key]

    witnesses = {}
    jd = True
    for x in range(n):
        for y in range(n):
            if le[x][y] and len(chain_lengths(x, y)) > 1:
                jd = False
                witnesses["jordan_dedekind"] = (x, y, tuple(sorted(chain_lengths(x, y))))
                break
        if not jd:
            break
    h = lat.height
    semi = True
    for x, y in combinations(range(n), 2):
        if h[x] + h[y] < h[join[x][y]] + h[meet[x][y]]:
            semi = False
            witnesses["semimodular"] = (x, y)
            break
    atoms = lat.atoms
    atomistic = True
    for x in range(n):
        if lat.join_all(a for a in atoms if le[a][x]) != x:
            atomistic = False
            witnesses["atomistic"] = (x,)
            break
    return GeometricReport(jd, semi, atomistic, witnesses)


# -- square completion ------------------------------------------------------

def complete_lattice_pullback(i2: LatticeMorphism, j2: LatticeMorphism) -> BiCartesianSquare:
    if i2.target != j2.target:
        raise ValueError("i2 and j2 must share their target")
    if not is_normal_mono(i2) or normal_epi_base(j2) is None:
        raise ValueError("pullback completion needs a normal mono and a normal epi")
    b = j2.source
    a_top = b.join_all(bits(j2.preimage(i2.image())))
    a, i = sublattice_object(b, a_top)
    inv = {v: x for x, v in enumerate(i2.map)}
    j = LatticeMorphism(a, i2.source, tuple(inv[j2.map[x]] for x in i.map))
    return BiCartesianSquare(i, j, i2, j2)


def complete_lattice_pushout(i: LatticeMorphism, j: LatticeMorphism) -> BiCartesianSquare:
    if i.source != j.source:
        raise ValueError("i and j must share their source")
    x0 = normal_epi_base(j)
    if not is_normal_mono(i) or x0 is None:
        raise ValueError("pushout completion needs a normal mono and a normal epi")
    b2, j2 = interval_quotient(i.target, i.map[x0])
    i2 = [-1] * j.target.size
    for a in range(i.source.size):
        i2[j.map[a]] = j2.map[i.map[a]]
    return BiCartesianSquare(i, j, LatticeMorphism(j.target, b2, tuple(i2)), j2)


def lattice_product(a: FiniteLattice, b: FiniteLattice) -> FiniteLattice:
    q = b.size
    return from_order(a.size * q, lambda x, y: a.leq[x // q][y // q] and b.leq[x % q][y % q])
