"""Finite modules over finite semirings.

Submodules, saturation, quotients by the congruence ``x ~ y iff x+n = y+n'``,
classification of admissible morphisms and constructive completion of
bi-Cartesian squares.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from itertools import product

from . import search
from .search import Sig, bits, mask_of, singleton_table
from .tables import (BOOLEAN, AxiomReport, SemiringTable, StructureError, _Collector,
                     check_size)

ISO = "iso"
MONO = "admissible_mono"
EPI = "admissible_epi"
NEITHER = "neither"

BRUTE_FORCE_LIMIT = 12


class InvalidMorphism(ValueError):
    pass


@dataclass(frozen=True)
class FiniteModule:
    ring: SemiringTable
    add: tuple
    act: tuple  # act[r][m]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = len(self.add)
        if n == 0:
            raise StructureError("a module needs at least one element")
        check_size(n, "module")
        add = tuple(tuple(int(v) for v in row) for row in self.add)
        act = tuple(tuple(int(v) for v in row) for row in self.act)
        if any(len(r) != n for r in add):
            raise StructureError(f"add table must be {n}x{n}")
        if len(act) != self.ring.size or any(len(r) != n for r in act):
            raise StructureError(f"act table must be {self.ring.size}x{n}")
        if any(not 0 <= v < n for r in add + act for v in r):
            raise StructureError("table entry out of range")
        object.__setattr__(self, "add", add)
        object.__setattr__(self, "act", act)

    @property
    def size(self) -> int:
        return len(self.add)

    @cached_property
    def sig(self) -> Sig:
        return Sig(self.size, (singleton_table(self.add),), self.act)

    def leq(self, a: int, b: int) -> bool:
        """Canonical order ``a <= b iff a + b = b`` (meaningful over idempotent rings)."""
        return self.add[a][b] == b

    @property
    def full(self) -> int:
        return (1 << self.size) - 1


@dataclass(frozen=True)
class ModuleMorphism:
    source: FiniteModule
    target: FiniteModule
    map: tuple

    def __post_init__(self):
        m = tuple(int(v) for v in self.map)
        if len(m) != self.source.size or any(not 0 <= v < self.target.size for v in m):
            raise InvalidMorphism("map table does not fit source/target")
        object.__setattr__(self, "map", m)

    def __call__(self, x: int) -> int:
        return self.map[x]

    def then(self, g: "ModuleMorphism") -> "ModuleMorphism":
        return type(self)(self.source, g.target, tuple(g.map[v] for v in self.map))

    @property
    def injective(self) -> bool:
        return len(set(self.map)) == len(self.map)

    @property
    def surjective(self) -> bool:
        return len(set(self.map)) == self.target.size

    def image(self, mask: int | None = None) -> int:
        if mask is None:
            return mask_of(self.map)
        return mask_of(self.map[x] for x in bits(mask))

    def preimage(self, mask: int) -> int:
        return mask_of(x for x, v in enumerate(self.map) if mask >> v & 1)

    def kernel(self) -> int:
        return self.preimage(1)

    def is_valid(self) -> bool:
        s, t, f = self.source, self.target, self.map
        if s.ring != t.ring or f[0] != 0:
            return False
        if any(f[s.add[a][b]] != t.add[f[a]][f[b]] for a in range(s.size) for b in range(s.size)):
            return False
        return all(f[s.act[r][m]] == t.act[r][f[m]]
                   for r in range(s.ring.size) for m in range(s.size))


@dataclass(frozen=True)
class QuotientResult:
    quotient: FiniteModule
    projection: ModuleMorphism
    class_of: tuple


@dataclass(frozen=True)
class BiCartesianSquare:
    """Square ``i: A->B``, ``j: A->A2``, ``i2: A2->B2``, ``j2: B->B2``."""

    i: object
    j: object
    i2: object
    j2: object

    @property
    def corners(self):
        return self.i.source, self.i.target, self.i2.source, self.i2.target

    def commutes(self) -> bool:
        return self.i.then(self.j2).map == self.j.then(self.i2).map


# -- constructors -----------------------------------------------------------

def regular_module(ring: SemiringTable) -> FiniteModule:
    return FiniteModule(ring, ring.add, ring.mul, name=ring.name)


def zero_module(ring: SemiringTable = BOOLEAN) -> FiniteModule:
    return FiniteModule(ring, ((0,),), tuple((0,) for _ in range(ring.size)), name="0")


def b_module(add, name: str = "") -> FiniteModule:
    """A module over the Boolean semifield; the action is forced (0m = 0, 1m = m)."""
    n = len(add)
    return FiniteModule(BOOLEAN, add, ((0,) * n, tuple(range(n))), name=name)


def chain_module(k: int) -> FiniteModule:
    return b_module([[max(a, b) for b in range(k)] for a in range(k)], name=f"chain{k}")


def direct_product(m: FiniteModule, n: FiniteModule) -> FiniteModule:
    if m.ring != n.ring:
        raise ValueError("modules over different semirings")
    p, q = m.size, n.size
    idx = [(a, b) for a in range(p) for b in range(q)]
    add = [[m.add[a][c] * q + n.add[b][d] for (c, d) in idx] for (a, b) in idx]
    act = [[m.act[r][a] * q + n.act[r][b] for (a, b) in idx] for r in range(m.ring.size)]
    name = f"{m.name}x{n.name}" if m.name and n.name else ""
    return FiniteModule(m.ring, add, act, name=name)


# -- axioms -----------------------------------------------------------------

def check_module_axioms(ring: SemiringTable, m: FiniteModule) -> AxiomReport:
    if m.ring.size != ring.size or len(m.act) != ring.size:
        raise StructureError("action table does not match the semiring")
    n, add, act = m.size, m.add, m.act
    radd, rmul = ring.add, ring.mul
    R = range(ring.size)
    E = range(n)
    col = _Collector()
    col.first("add_identity", ((0, a) for a in E if add[0][a] != a or add[a][0] != a))
    col.first("add_commutative", ((a, b) for a in E for b in E if add[a][b] != add[b][a]))
    col.first("add_associative", ((a, b, c) for a in E for b in E for c in E
                                  if add[add[a][b]][c] != add[a][add[b][c]]))
    col.first("act_one", ((a,) for a in E if act[ring.one][a] != a))
    col.first("act_zero", ((a,) for a in E if act[0][a] != 0))
    col.first("act_associative", ((x, y, a) for x in R for y in R for a in E
                                  if act[rmul[x][y]][a] != act[x][act[y][a]]))
    col.first("act_distributes_over_module", ((x, a, b) for x in R for a in E for b in E
                                              if act[x][add[a][b]] != add[act[x][a]][act[x][b]]))
    col.first("act_distributes_over_ring", ((x, y, a) for x in R for y in R for a in E
                                            if act[radd[x][y]][a] != add[act[x][a]][act[y][a]]))
    return col.report()


# -- submodules and saturation ----------------------------------------------

def is_submodule(m: FiniteModule, mask: int) -> bool:
    if not mask & 1:
        return False
    els = bits(mask)
    if any(not mask >> m.add[a][b] & 1 for a in els for b in els):
        return False
    return all(mask >> row[a] & 1 for row in m.act for a in els)


def is_saturated(m: FiniteModule, mask: int) -> bool:
    if not is_submodule(m, mask):
        return False
    return all(mask >> y & 1 for x in bits(mask) for y in range(m.size) if mask >> m.add[x][y] & 1)


def generated_submodule(m: FiniteModule, mask: int) -> int:
    out = mask | 1
    frontier = bits(out)
    while frontier:
        new = 0
        els = bits(out)
        for a in frontier:
            for row in m.act:
                new |= 1 << row[a]
            for b in els:
                new |= 1 << m.add[a][b]
        new &= ~out
        out |= new
        frontier = bits(new)
    return out


def saturation_closure(m: FiniteModule, mask: int) -> int:
    """Smallest saturated submodule containing ``mask``.

    One pass suffices once the input is closed to a submodule N:
    the result is ``{x : x + a = b for some a, b in N}``.
    """
    n_mask = generated_submodule(m, mask)
    els = bits(n_mask)
    return mask_of(x for x in range(m.size)
                   if any(n_mask >> m.add[x][a] & 1 for a in els))


def enumerate_submodules(m: FiniteModule, saturated_only: bool = False,
                         strategy: str = "auto") -> list[int]:
    """All (saturated) submodules as sorted bitmasks.

    ``strategy`` is ``brute`` (test every subset containing 0), ``closure``
    (grow from {0} by adjoining one element and closing) or ``auto``.
    """
    if strategy == "auto":
        strategy = "brute" if m.size <= BRUTE_FORCE_LIMIT else "closure"
    test = is_saturated if saturated_only else is_submodule
    if strategy == "brute":
        return [mask for mask in range(1, 1 << m.size, 2) if test(m, mask)]
    close = saturation_closure if saturated_only else generated_submodule
    start = close(m, 1)
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for s in frontier:
            for x in range(m.size):
                if not s >> x & 1:
                    t = close(m, s | 1 << x)
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
        frontier = nxt
    return sorted(seen)


def submodule_object(m: FiniteModule, mask: int) -> tuple[FiniteModule, ModuleMorphism]:
    """The submodule on ``mask`` (elements relabelled in increasing order) and its inclusion."""
    if not is_submodule(m, mask):
        raise ValueError("not a submodule")
    els = bits(mask)
    pos = {e: i for i, e in enumerate(els)}
    add = [[pos[m.add[a][b]] for b in els] for a in els]
    act = [[pos[row[a]] for a in els] for row in m.act]
    sub = FiniteModule(m.ring, add, act)
    return sub, ModuleMorphism(sub, m, tuple(els))


def _classes(n: int, relate) -> tuple[int, ...]:
    """Union-find over ``relate`` pairs; labels: class of 0 first, then by least element."""
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in relate:
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    label: dict[int, int] = {}
    out = []
    for x in range(n):
        r = find(x)
        if r not in label:
            label[r] = len(label)
        out.append(label[r])
    return tuple(out)


def congruence_classes(m: FiniteModule, mask: int) -> tuple[int, ...]:
    """Class labels of ``x ~ y iff x + a = y + b for some a, b in mask``."""
    owner: dict[int, int] = {}
    pairs = []
    for x in range(m.size):
        for a in bits(mask):
            t = m.add[x][a]
            if t in owner:
                pairs.append((owner[t], x))
            else:
                owner[t] = x
    return _classes(m.size, pairs)


def quotient_by_classes(m: FiniteModule, class_of) -> QuotientResult:
    k = max(class_of) + 1
    rep = [class_of.index(c) for c in range(k)]
    add = [[class_of[m.add[rep[a]][rep[b]]] for b in range(k)] for a in range(k)]
    act = [[class_of[row[rep[a]]] for a in range(k)] for row in m.act]
    q = FiniteModule(m.ring, add, act)
    proj = ModuleMorphism(m, q, tuple(class_of))
    if not proj.is_valid():
        raise ValueError("relation is not a congruence")
    return QuotientResult(q, proj, tuple(class_of))


def quotient_module(m: FiniteModule, mask: int) -> QuotientResult:
    if not is_submodule(m, mask):
        raise ValueError("quotient requires a submodule")
    return quotient_by_classes(m, congruence_classes(m, mask))


# -- morphisms --------------------------------------------------------------

def _require_valid(f: ModuleMorphism) -> None:
    if not f.is_valid():
        raise InvalidMorphism("map is not a module homomorphism")


def is_admissible_mono(f: ModuleMorphism) -> bool:
    return f.injective and is_saturated(f.target, f.image())


def is_admissible_epi(f: ModuleMorphism) -> bool:
    if not f.surjective:
        return False
    cls = congruence_classes(f.source, f.kernel())
    seen: dict[int, int] = {}
    for x, v in enumerate(f.map):
        if seen.setdefault(v, cls[x]) != cls[x]:
            return False
    return True


def classify_morphism(f: ModuleMorphism) -> str:
    _require_valid(f)
    mono, epi = is_admissible_mono(f), is_admissible_epi(f)
    if mono and epi:
        return ISO
    return MONO if mono else EPI if epi else NEITHER


def enumerate_homs(m: FiniteModule, n: FiniteModule) -> list[ModuleMorphism]:
    if m.ring != n.ring:
        raise ValueError("modules over different semirings")
    return [ModuleMorphism(m, n, f) for f in sorted(search.iter_maps(m.sig, n.sig))]


def find_isomorphism(m: FiniteModule, n: FiniteModule) -> ModuleMorphism | None:
    if m.ring != n.ring:
        return None
    f = search.find_isomorphism(m.sig, n.sig)
    return None if f is None else ModuleMorphism(m, n, f)


def automorphisms(m: FiniteModule) -> list[ModuleMorphism]:
    return [ModuleMorphism(m, m, f) for f in sorted(search.iter_isomorphisms(m.sig, m.sig))]


def check_third_iso(m: FiniteModule, n_mask: int, k_mask: int) -> ModuleMorphism:
    """Witness ``M / pi^-1(K) -> (M/N) / K``, ``class of m -> class of pi(m)``."""
    if not is_saturated(m, n_mask):
        raise ValueError("N must be saturated in M")
    first = quotient_module(m, n_mask)
    if not is_saturated(first.quotient, k_mask):
        raise ValueError("K must be saturated in M/N")
    pi = first.projection
    left = quotient_module(m, pi.preimage(k_mask))
    right = quotient_module(first.quotient, k_mask)
    phi = [-1] * left.quotient.size
    for x in range(m.size):
        c, v = left.class_of[x], right.class_of[pi.map[x]]
        if phi[c] not in (-1, v):
            raise AssertionError("induced map is not well defined")
        phi[c] = v
    iso = ModuleMorphism(left.quotient, right.quotient, tuple(phi))
    if not (iso.is_valid() and iso.injective and iso.surjective):
        raise AssertionError("induced map is not an isomorphism")
    return iso


# -- square completion ------------------------------------------------------

def complete_pullback(i2: ModuleMorphism, j2: ModuleMorphism) -> BiCartesianSquare:
    """Complete ``A2 -i2-> B2 <-j2- B`` with ``A = j2^-1(i2(A2))``."""
    if i2.target != j2.target:
        raise ValueError("i2 and j2 must share their target")
    if not (is_admissible_mono(i2) and is_admissible_epi(j2)):
        raise ValueError("pullback completion needs an admissible mono and an admissible epi")
    a_mask = j2.preimage(i2.image())
    a, i = submodule_object(j2.source, a_mask)
    inv = {v: x for x, v in enumerate(i2.map)}
    j = ModuleMorphism(a, i2.source, tuple(inv[j2.map[b]] for b in i.map))
    return BiCartesianSquare(i, j, i2, j2)


def complete_pushout(i: ModuleMorphism, j: ModuleMorphism) -> BiCartesianSquare:
    """Complete ``A2 <-j- A -i-> B`` with ``B2 = B / i(ker j)``."""
    if i.source != j.source:
        raise ValueError("i and j must share their source")
    if not (is_admissible_mono(i) and is_admissible_epi(j)):
        raise ValueError("pushout completion needs an admissible mono and an admissible epi")
    q = quotient_module(i.target, i.image(j.kernel()))
    j2 = q.projection
    i2 = [-1] * j.target.size
    for a in range(i.source.size):
        v = j2.map[i.map[a]]
        if i2[j.map[a]] not in (-1, v):
            raise AssertionError("induced map is not well defined")
        i2[j.map[a]] = v
    return BiCartesianSquare(i, j, ModuleMorphism(j.target, q.quotient, tuple(i2)), j2)


def complete_square(f: ModuleMorphism, g: ModuleMorphism, direction: str) -> BiCartesianSquare:
    if direction == "pullback":
        return complete_pullback(f, g)
    if direction == "pushout":
        return complete_pushout(f, g)
    raise ValueError(f"unknown direction {direction!r}")


def all_maps(m: FiniteModule, n: FiniteModule):
    """Every zero-preserving function, for brute-force oracles."""
    for rest in product(range(n.size), repeat=m.size - 1):
        yield (0,) + rest
