"""Finite modules over finite hyperrings.

Hyperaddition is set valued: ``hyperadd[a][b]`` is a bitmask.  Morphisms
satisfy ``f(a+b) <= f(a)+f(b)``; strict ones satisfy equality.  The
admissible monos and epis are the strict injections and strict surjections.
Submodules always carry the ambient hyperaddition restricted to them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

from . import search
from .search import Sig, bits, mask_of
from .smod import ISO, MONO, EPI, NEITHER, BRUTE_FORCE_LIMIT, BiCartesianSquare, _classes
from .tables import (HyperTable, KRASNER, AxiomReport, StructureError, _Collector,
                     _square, check_size, hypergroup_violations)


@dataclass(frozen=True)
class HModule:
    ring: HyperTable
    hyperadd: tuple
    act: tuple  # act[r][m]
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = len(self.hyperadd)
        if n == 0:
            raise StructureError("a module needs at least one element")
        check_size(n, "module")
        object.__setattr__(self, "hyperadd", _square(self.hyperadd, n, "hyperadd", masks=True))
        act = tuple(tuple(int(v) for v in row) for row in self.act)
        if len(act) != self.ring.size or any(len(r) != n for r in act):
            raise StructureError(f"act table must be {self.ring.size}x{n}")
        if any(not 0 <= v < n for r in act for v in r):
            raise StructureError("act entry out of range")
        object.__setattr__(self, "act", act)

    @property
    def size(self) -> int:
        return len(self.hyperadd)

    @cached_property
    def sig(self) -> Sig:
        return Sig(self.size, (self.hyperadd,), self.act)

    def add_sets(self, x: int, y: int) -> int:
        out = 0
        for a in bits(x):
            row = self.hyperadd[a]
            for b in bits(y):
                out |= row[b]
        return out

    def scale(self, r: int, mask: int) -> int:
        row = self.act[r]
        return mask_of(row[m] for m in bits(mask))


@dataclass(frozen=True)
class HMorphism:
    source: HModule
    target: HModule
    map: tuple

    def __post_init__(self):
        m = tuple(int(v) for v in self.map)
        if len(m) != self.source.size or any(not 0 <= v < self.target.size for v in m):
            raise ValueError("map table does not fit source/target")
        object.__setattr__(self, "map", m)

    def __call__(self, x):
        return self.map[x]

    def then(self, g: "HMorphism") -> "HMorphism":
        return HMorphism(self.source, g.target, tuple(g.map[v] for v in self.map))

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
        return self.preimage(1)

    def is_valid(self) -> bool:
        s, t, f = self.source, self.target, self.map
        if s.ring != t.ring or f[0] != 0:
            return False
        if any(f[s.act[r][m]] != t.act[r][f[m]]
               for r in range(s.ring.size) for m in range(s.size)):
            return False
        return all(self.image(s.hyperadd[a][b]) & ~t.hyperadd[f[a]][f[b]] == 0
                   for a in range(s.size) for b in range(s.size))

    def strict_witness(self):
        """First pair ``(a, b)`` with ``f(a+b) != f(a)+f(b)``, or None."""
        s, t, f = self.source, self.target, self.map
        for a in range(s.size):
            for b in range(s.size):
                if self.image(s.hyperadd[a][b]) != t.hyperadd[f[a]][f[b]]:
                    return (a, b)
        return None

    @cached_property
    def strict(self) -> bool:
        return self.strict_witness() is None


@dataclass(frozen=True)
class HQuotientResult:
    quotient: HModule
    projection: HMorphism
    class_of: tuple


# -- axioms -----------------------------------------------------------------

def check_hmodule_axioms(ring: HyperTable, m: HModule) -> AxiomReport:
    if len(m.act) != ring.size:
        raise StructureError("action table does not match the hyperring")
    n, hadd, act = m.size, m.hyperadd, m.act
    R, E = range(ring.size), range(n)
    col = _Collector()
    hypergroup_violations(n, hadd, col)
    col.first("act_one", ((a,) for a in E if act[ring.one][a] != a))
    col.first("act_zero", ((a,) for a in E if act[0][a] != 0))
    col.first("act_associative", ((x, y, a) for x in R for y in R for a in E
                                  if act[ring.mul[x][y]][a] != act[x][act[y][a]]))
    col.first("act_distributes_over_module", ((x, a, b) for x in R for a in E for b in E
                                              if m.scale(x, hadd[a][b]) != hadd[act[x][a]][act[x][b]]))
    col.first("act_distributes_over_ring",
              ((x, y, a) for x in R for y in R for a in E
               if mask_of(act[z][a] for z in bits(ring.hyperadd[x][y]))
               != hadd[act[x][a]][act[y][a]]))
    return col.report()


def regular_hmodule(ring: HyperTable) -> HModule:
    return HModule(ring, ring.hyperadd, ring.mul, name=ring.name)


def zero_hmodule(ring: HyperTable = KRASNER) -> HModule:
    return HModule(ring, ((1,),), tuple((0,) for _ in range(ring.size)), name="0")


def direct_product_h(m: HModule, n: HModule) -> HModule:
    """Componentwise hyperaddition: ``(a,b)+(c,d) = (a+c) x (b+d)``; index ``a*|N|+b``."""
    if m.ring != n.ring:
        raise ValueError("modules over different hyperrings")
    q = n.size
    idx = [(a, b) for a in range(m.size) for b in range(q)]
    hadd = [[mask_of(x * q + y for x in bits(m.hyperadd[a][c]) for y in bits(n.hyperadd[b][d]))
             for (c, d) in idx] for (a, b) in idx]
    act = [[m.act[r][a] * q + n.act[r][b] for (a, b) in idx] for r in range(m.ring.size)]
    name = f"{m.name}x{n.name}" if m.name and n.name else ""
    return HModule(m.ring, hadd, act, name=name)


# -- submodules and quotients -----------------------------------------------

def is_hsubmodule(m: HModule, mask: int) -> bool:
    if not mask & 1:
        return False
    els = bits(mask)
    if any(m.hyperadd[a][b] & ~mask for a in els for b in els):
        return False
    return all(mask >> row[a] & 1 for row in m.act for a in els)


def generated_hsubmodule(m: HModule, mask: int) -> int:
    out = mask | 1
    while True:
        els = bits(out)
        new = out
        for a in els:
            for row in m.act:
                new |= 1 << row[a]
            for b in els:
                new |= m.hyperadd[a][b]
        if new == out:
            return out
        out = new


def enumerate_hsubmodules(m: HModule, strategy: str = "auto") -> list[int]:
    if strategy == "auto":
        strategy = "brute" if m.size <= BRUTE_FORCE_LIMIT else "closure"
    if strategy == "brute":
        return [mask for mask in range(1, 1 << m.size, 2) if is_hsubmodule(m, mask)]
    start = generated_hsubmodule(m, 1)
    seen, frontier = {start}, [start]
    while frontier:
        nxt = []
        for s in frontier:
            for x in range(m.size):
                if not s >> x & 1:
                    t = generated_hsubmodule(m, s | 1 << x)
                    if t not in seen:
                        seen.add(t)
                        nxt.append(t)
        frontier = nxt
    return sorted(seen)


def hsubmodule_object(m: HModule, mask: int) -> tuple[HModule, HMorphism]:
    if not is_hsubmodule(m, mask):
        raise ValueError("not a submodule")
    els = bits(mask)
    pos = {e: i for i, e in enumerate(els)}
    hadd = [[mask_of(pos[c] for c in bits(m.hyperadd[a][b])) for b in els] for a in els]
    act = [[pos[row[a]] for a in els] for row in m.act]
    sub = HModule(m.ring, hadd, act)
    return sub, HMorphism(sub, m, tuple(els))


def coset_classes(m: HModule, mask: int) -> tuple[int, ...]:
    """Labels of ``b1 ~ b2 iff b1 + A = b2 + A``; class of 0 first, then by least element."""
    key = [m.add_sets(1 << b, mask) for b in range(m.size)]
    first: dict[int, int] = {}
    pairs = []
    for b, k in enumerate(key):
        if k in first:
            pairs.append((first[k], b))
        else:
            first[k] = b
    return _classes(m.size, pairs)


def quotient_hmodule(m: HModule, mask: int) -> HQuotientResult:
    if not is_hsubmodule(m, mask):
        raise ValueError("quotient requires a submodule")
    cls = coset_classes(m, mask)
    k = max(cls) + 1
    members = [[x for x in range(m.size) if cls[x] == c] for c in range(k)]
    hadd = [[mask_of(cls[z] for x in members[a] for y in members[b]
                     for z in bits(m.hyperadd[x][y]))
             for b in range(k)] for a in range(k)]
    act = []
    for row in m.act:
        out = []
        for c in range(k):
            imgs = {cls[row[x]] for x in members[c]}
            if len(imgs) != 1:
                raise ValueError("scalar action is not compatible with the congruence")
            out.append(imgs.pop())
        act.append(out)
    q = HModule(m.ring, hadd, act)
    return HQuotientResult(q, HMorphism(m, q, cls), cls)


# -- morphisms --------------------------------------------------------------

def classify_hmorphism(f: HMorphism) -> str:
    if not f.is_valid():
        raise ValueError("map is not a hypermodule homomorphism")
    if not f.strict:
        return NEITHER
    if f.injective and f.surjective:
        return ISO
    return MONO if f.injective else EPI if f.surjective else NEITHER


def is_admissible_hmono(f: HMorphism) -> bool:
    return f.injective and f.strict


def is_admissible_hepi(f: HMorphism) -> bool:
    return f.surjective and f.strict


def enumerate_hhoms(m: HModule, n: HModule, strict_only: bool = False) -> list[HMorphism]:
    if m.ring != n.ring:
        raise ValueError("modules over different hyperrings")
    return [HMorphism(m, n, f)
            for f in sorted(search.iter_maps(m.sig, n.sig, strict=strict_only))]


def find_h_isomorphism(m: HModule, n: HModule) -> HMorphism | None:
    if m.ring != n.ring:
        return None
    f = search.find_isomorphism(m.sig, n.sig)
    return None if f is None else HMorphism(m, n, f)


def h_automorphisms(m: HModule) -> list[HMorphism]:
    return [HMorphism(m, m, f) for f in sorted(search.iter_isomorphisms(m.sig, m.sig))]


# -- square completion ------------------------------------------------------

def complete_h_pullback(i2: HMorphism, j2: HMorphism) -> BiCartesianSquare:
    """``A = j2^-1(i2(A2))`` with its inclusion and the induced strict surjection onto A2."""
    if i2.target != j2.target:
        raise ValueError("i2 and j2 must share their target")
    if not (is_admissible_hmono(i2) and is_admissible_hepi(j2)):
        raise ValueError("pullback completion needs a strict injection and a strict surjection")
    a, i = hsubmodule_object(j2.source, j2.preimage(i2.image()))
    inv = {v: x for x, v in enumerate(i2.map)}
    j = HMorphism(a, i2.source, tuple(inv[j2.map[b]] for b in i.map))
    return BiCartesianSquare(i, j, i2, j2)


def complete_h_pushout(i: HMorphism, j: HMorphism) -> BiCartesianSquare:
    """``B2 = B / i(ker j)`` with the projection and the induced strict injection."""
    if i.source != j.source:
        raise ValueError("i and j must share their source")
    if not (is_admissible_hmono(i) and is_admissible_hepi(j)):
        raise ValueError("pushout completion needs a strict injection and a strict surjection")
    q = quotient_hmodule(i.target, i.image(j.kernel()))
    j2 = q.projection
    i2 = [-1] * j.target.size
    for a in range(i.source.size):
        v = j2.map[i.map[a]]
        if i2[j.map[a]] not in (-1, v):
            raise AssertionError("induced map is not well defined")
        i2[j.map[a]] = v
    return BiCartesianSquare(i, j, HMorphism(j.target, q.quotient, tuple(i2)), j2)


def complete_square_h(f: HMorphism, g: HMorphism, direction: str) -> BiCartesianSquare:
    if direction == "pullback":
        return complete_h_pullback(f, g)
    if direction == "pushout":
        return complete_h_pushout(f, g)
    raise ValueError(f"unknown direction {direction!r}")
