"""Short exact sequences, Ext classes, Hall numbers and proto-exact axiom checks.

Everything here is written against a small backend interface so the same
code runs over semiring modules, finite lattices and hypermodules.  The
categories are not finitary, so every enumeration is relative to a finite
universe of objects (a size bound or an explicit corpus).
"""
from __future__ import annotations

import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import partial

from . import corpus, hmod, lattice, search, smod
from .search import bits
from .smod import BiCartesianSquare
from .tables import BOOLEAN, KRASNER, AxiomReport, BoundExceeded

# generated middles grow fast: there are 1078 lattices with 9 elements and 5994 with 10
DEFAULT_EXT_MAX_SIZE = 10


def ext_max_size() -> int:
    return int(os.environ.get("PEXA_EXT_MAX_SIZE", DEFAULT_EXT_MAX_SIZE))


# -- backends ---------------------------------------------------------------

class Backend:
    """Uniform facade over one of the concrete categories."""

    name = "abstract"

    def __init__(self):
        self._homs: dict = {}

    def __getstate__(self):
        state = dict(self.__dict__)
        state["_homs"] = {}
        return state

    # construction hooks, overridden below
    def morphism(self, src, dst, f):
        raise NotImplementedError

    def _iter_homs(self, a, b, *, strict=True, injective=False):
        raise NotImplementedError

    def size(self, obj) -> int:
        return obj.size

    def sig(self, obj):
        return obj.sig

    def homs(self, a, b) -> list:
        """All morphisms of the category ``a -> b`` (cached)."""
        key = (a, b)
        if key not in self._homs:
            self._homs[key] = [self.morphism(a, b, f)
                               for f in sorted(self._iter_homs(a, b, strict=self.hom_strict))]
        return self._homs[key]

    hom_strict = True

    def hom_maps(self, a, b) -> frozenset:
        key = ("maps", a, b)
        if key not in self._homs:
            self._homs[key] = frozenset(f.map for f in self.homs(a, b))
        return self._homs[key]

    def monos(self, a, b) -> list:
        """Admissible monos ``a -> b`` (cached)."""
        key = ("mono", a, b)
        if key not in self._homs:
            maps = sorted(self._iter_homs(a, b, strict=True, injective=True))
            self._homs[key] = [f for f in (self.morphism(a, b, m) for m in maps)
                               if self.is_mono(f)]
        return self._homs[key]

    def epis(self, a, b) -> list:
        """Admissible epis ``a -> b`` (cached)."""
        key = ("epi", a, b)
        if key not in self._homs:
            out = []
            if self.size(a) >= self.size(b):
                maps = sorted(self._iter_homs(a, b, strict=True))
                out = [f for f in (self.morphism(a, b, m) for m in maps) if self.is_epi(f)]
            self._homs[key] = out
        return self._homs[key]

    def identity(self, a):
        return self.morphism(a, a, tuple(range(self.size(a))))

    def zero_map(self, a, b):
        z = self.zero_element(b)
        return self.morphism(a, b, (z,) * self.size(a))

    def zero_element(self, obj) -> int:
        return 0

    def is_zero_map(self, f) -> bool:
        z = self.zero_element(f.target)
        return all(v == z for v in f.map)

    def isomorphism(self, a, b):
        f = search.find_isomorphism(self.sig(a), self.sig(b))
        return None if f is None else self.morphism(a, b, f)

    def automorphisms(self, a) -> list:
        return [self.morphism(a, a, f)
                for f in sorted(search.iter_isomorphisms(self.sig(a), self.sig(a)))]

    def is_iso(self, f) -> bool:
        return self.is_mono(f) and self.is_epi(f)

    def complete(self, f, g, direction: str) -> BiCartesianSquare:
        if direction == "pullback":
            return self.pullback(f, g)
        if direction == "pushout":
            return self.pushout(f, g)
        raise ValueError(f"unknown direction {direction!r}")


class SemiringModules(Backend):
    name = "smod"

    def __init__(self, ring=BOOLEAN):
        super().__init__()
        self.ring = ring

    def morphism(self, src, dst, f):
        return smod.ModuleMorphism(src, dst, f)

    def _iter_homs(self, a, b, *, strict=True, injective=False):
        return search.iter_maps(a.sig, b.sig, injective=injective)

    def zero(self):
        return smod.zero_module(self.ring)

    def subobjects(self, obj) -> list[int]:
        return smod.enumerate_submodules(obj, saturated_only=True)

    def subobject(self, obj, mask):
        return smod.submodule_object(obj, mask)

    def quotient(self, obj, mask):
        q = smod.quotient_module(obj, mask)
        return q.quotient, q.projection

    def is_mono(self, f) -> bool:
        return smod.is_admissible_mono(f)

    def is_epi(self, f) -> bool:
        return smod.is_admissible_epi(f)

    def classify(self, f) -> str:
        return smod.classify_morphism(f)

    def pullback(self, i2, j2):
        return smod.complete_pullback(i2, j2)

    def pushout(self, i, j):
        return smod.complete_pushout(i, j)

    def product(self, a, b):
        return smod.direct_product(a, b)

    def generate(self, max_size: int) -> list:
        if self.ring != BOOLEAN:
            raise ValueError("exhaustive generation is implemented for B-modules only")
        return corpus.bmodules(max_size)

    def check(self, obj) -> AxiomReport:
        return smod.check_module_axioms(self.ring, obj)


class Lattices(Backend):
    name = "lattice"

    def morphism(self, src, dst, f):
        return lattice.LatticeMorphism(src, dst, f)

    def _iter_homs(self, a, b, *, strict=True, injective=False):
        return search.iter_maps(a.sig, b.sig, injective=injective)

    def zero_element(self, obj) -> int:
        return obj.bottom

    def zero(self):
        return lattice.chain_lattice(1)

    def subobjects(self, obj) -> list[int]:
        return sorted(obj.down(x) for x in range(obj.size))

    def subobject(self, obj, mask):
        return lattice.sublattice_object(obj, lattice.ideal_top(obj, mask))

    def quotient(self, obj, mask):
        return lattice.quotient_lattice(obj, mask)

    def is_mono(self, f) -> bool:
        return lattice.is_normal_mono(f)

    def is_epi(self, f) -> bool:
        return lattice.normal_epi_base(f) is not None

    def classify(self, f) -> str:
        return lattice.classify_lattice_morphism(f)

    def pullback(self, i2, j2):
        return lattice.complete_lattice_pullback(i2, j2)

    def pushout(self, i, j):
        return lattice.complete_lattice_pushout(i, j)

    def product(self, a, b):
        return lattice.lattice_product(a, b)

    def generate(self, max_size: int) -> list:
        return corpus.lattices(max_size)

    def check(self, obj) -> AxiomReport:
        return AxiomReport()


class HyperModules(Backend):
    name = "hmod"
    hom_strict = False

    def __init__(self, ring=KRASNER):
        super().__init__()
        self.ring = ring

    def morphism(self, src, dst, f):
        return hmod.HMorphism(src, dst, f)

    def _iter_homs(self, a, b, *, strict=True, injective=False):
        return search.iter_maps(a.sig, b.sig, strict=strict, injective=injective)

    def zero(self):
        return hmod.zero_hmodule(self.ring)

    def subobjects(self, obj) -> list[int]:
        return hmod.enumerate_hsubmodules(obj)

    def subobject(self, obj, mask):
        return hmod.hsubmodule_object(obj, mask)

    def quotient(self, obj, mask):
        q = hmod.quotient_hmodule(obj, mask)
        return q.quotient, q.projection

    def is_mono(self, f) -> bool:
        return hmod.is_admissible_hmono(f)

    def is_epi(self, f) -> bool:
        return hmod.is_admissible_hepi(f)

    def classify(self, f) -> str:
        return hmod.classify_hmorphism(f)

    def pullback(self, i2, j2):
        return hmod.complete_h_pullback(i2, j2)

    def pushout(self, i, j):
        return hmod.complete_h_pushout(i, j)

    def product(self, a, b):
        return hmod.direct_product_h(a, b)

    def generate(self, max_size: int) -> list:
        if self.ring != KRASNER:
            raise ValueError("exhaustive generation is implemented for K-modules only")
        return corpus.kmodules(max_size)

    def check(self, obj) -> AxiomReport:
        return hmod.check_hmodule_axioms(self.ring, obj)


BACKENDS = {"bmod": SemiringModules, "smod": SemiringModules, "lattice": Lattices,
            "kmod": HyperModules, "hmod": HyperModules}


def backend_for(obj) -> Backend:
    if isinstance(obj, smod.FiniteModule):
        return SemiringModules(obj.ring)
    if isinstance(obj, hmod.HModule):
        return HyperModules(obj.ring)
    if isinstance(obj, lattice.FiniteLattice):
        return Lattices()
    raise TypeError(f"no backend for {type(obj).__name__}")


def parallel_map(fn, items, workers: int = 1) -> list:
    """``list(map(fn, items))``, optionally across processes; order is preserved."""
    items = list(items)
    if workers <= 1 or len(items) <= 1:
        return [fn(x) for x in items]
    with ProcessPoolExecutor(max_workers=workers) as ex:
        return list(ex.map(fn, items))


# -- short exact sequences --------------------------------------------------

@dataclass(frozen=True)
class ShortExactSequence:
    i: object  # A -> B
    j: object  # B -> C

    @property
    def a(self):
        return self.i.source

    @property
    def b(self):
        return self.i.target

    @property
    def c(self):
        return self.j.target


def is_short_exact(seq: ShortExactSequence, backend: Backend | None = None) -> tuple[bool, str]:
    """Check ``i`` admissible mono, ``j`` admissible epi, ``ji = 0`` and ``B/i(A) = C``."""
    bk = backend or backend_for(seq.b)
    i, j = seq.i, seq.j
    if i.target != j.source:
        raise TypeError("i and j are not composable")
    if not bk.is_mono(i):
        return False, "i is not an admissible mono"
    if not bk.is_epi(j):
        return False, "j is not an admissible epi"
    if not bk.is_zero_map(i.then(j)):
        return False, "j after i is not zero"
    img = i.image()
    if isinstance(seq.b, lattice.FiniteLattice):
        img = seq.b.down(seq.b.join_all(bits(img)))
    q, proj = bk.quotient(seq.b, img)
    phi = [-1] * bk.size(q)
    for x in range(bk.size(seq.b)):
        c, v = proj.map[x], j.map[x]
        if phi[c] not in (-1, v):
            return False, "j does not factor through B/i(A)"
        phi[c] = v
    if not bk.is_iso(bk.morphism(q, seq.c, tuple(phi))):
        return False, "induced map B/i(A) -> C is not an isomorphism"
    return True, "exact"


@dataclass(frozen=True)
class ExtClass:
    """One equivalence class of extensions; ``members`` lists the ``(i, j)`` map pairs of every sequence in it."""

    representative: ShortExactSequence
    middle_index: int
    members: tuple = field(compare=False)

    @property
    def middle(self):
        return self.representative.b


def equivalence_witness(p1, p2, backend: Backend):
    """An automorphism g of the middle with ``g i1 = i2`` and ``j2 g = j1``, or None."""
    (i1, j1), (i2, j2) = p1, p2
    b = i1.target
    n = backend.size(b)
    cand = [0] * n
    for x in range(n):
        cand[x] = sum(1 << y for y in range(n) if j2.map[y] == j1.map[x])
    for a, x in enumerate(i1.map):
        cand[x] &= 1 << i2.map[a]
    sig = backend.sig(b)
    g = next(search.iter_maps(sig, sig, strict=True, injective=True, candidates=cand), None)
    return None if g is None else backend.morphism(b, b, g)


def _ext_for_middle(args, c, a, backend: Backend):
    idx, b = args
    pairs = []
    for i in backend.monos(a, b):
        for j in backend.epis(b, c):
            if is_short_exact(ShortExactSequence(i, j), backend)[0]:
                pairs.append((i, j))
    classes: list[list] = []
    for p in pairs:
        for members in classes:
            if equivalence_witness(members[0], p, backend) is not None:
                members.append(p)
                break
        else:
            classes.append([p])
    return [ExtClass(ShortExactSequence(*members[0]), idx,
                     tuple((i.map, j.map) for i, j in members))
            for members in classes]


def ext_enumerate(c, a, max_middle_size: int, backend: Backend | None = None,
                  workers: int = 1, middles: list | None = None) -> list[ExtClass]:
    """Extensions ``A >-> B ->> C`` with ``|B| <= max_middle_size``, up to equivalence.

    Middles are generated exhaustively up to isomorphism (or taken from
    ``middles``).  Two sequences on the same middle are equivalent when an
    automorphism of B carries one to the other fixing A and C; sequences on
    non-isomorphic middles are never equivalent.
    """
    bk = backend or backend_for(a)
    if middles is None and max_middle_size > ext_max_size():
        raise BoundExceeded(f"middle size bound {max_middle_size} is above the Ext cap "
                            f"{ext_max_size()} (set PEXA_EXT_MAX_SIZE to raise it)")
    pool = middles if middles is not None else bk.generate(max_middle_size)
    lo = max(bk.size(a), bk.size(c))
    cands = [(k, b) for k, b in enumerate(pool) if lo <= bk.size(b) <= max_middle_size]
    parts = parallel_map(partial(_ext_for_middle, c=c, a=a, backend=bk), cands, workers)
    return [cls for part in parts for cls in part]


# -- Hall numbers -----------------------------------------------------------

@dataclass(frozen=True)
class HallResult:
    count: int
    witnesses: tuple

    def __post_init__(self):
        if self.count != len(self.witnesses):
            raise ValueError("count must equal the number of witnesses")


def hall_constant(e, a, b, backend: Backend | None = None) -> HallResult:
    """``#{D <= E : D ~ B and E/D ~ A}`` over admissible subobjects D."""
    bk = backend or backend_for(e)
    for x in (a, b):
        if type(x) is not type(e):
            raise TypeError("E, A and B must live in the same category")
    wit = []
    for mask in bk.subobjects(e):
        if mask.bit_count() != bk.size(b):
            continue
        d, _ = bk.subobject(e, mask)
        if bk.isomorphism(d, b) is None:
            continue
        q, _ = bk.quotient(e, mask)
        if bk.isomorphism(q, a) is not None:
            wit.append(mask)
    return HallResult(len(wit), tuple(wit))


# -- proto-exact axioms -----------------------------------------------------

@dataclass
class ProtoExactReport:
    checks: dict = field(default_factory=dict)     # axiom -> number of instances checked
    failures: list = field(default_factory=list)   # (axiom, description)
    objects: int = 0

    @property
    def passed(self) -> bool:
        return not self.failures

    def axiom_passed(self, axiom: str) -> bool:
        return not any(f[0] == axiom for f in self.failures)


def _dedupe(objs, bk):
    return search.dedupe(objs, bk.sig)


def working_set(objs, bk: Backend) -> list:
    """Close a corpus under admissible subobjects and quotients, up to isomorphism."""
    out = _dedupe(list(objs), bk)
    frontier = list(out)
    while frontier:
        new = []
        for x in frontier:
            for mask in bk.subobjects(x):
                new.append(bk.subobject(x, mask)[0])
                new.append(bk.quotient(x, mask)[0])
        before = len(out)
        out = _dedupe(out + new, bk)
        frontier = out[before:]
    return sorted(out, key=bk.size)


def _inverse(f) -> dict:
    return {v: x for x, v in enumerate(f.map)}


def _factor_through_surjection(e, p) -> tuple | None:
    """The map ``w`` with ``w(e(x)) = p(x)``, or None when ``p`` is not constant on fibres."""
    w = [-1] * len(set(e.map))
    for x, y in enumerate(e.map):
        if w[y] not in (-1, p[x]):
            return None
        w[y] = p[x]
    return tuple(w)


def is_pullback(sq: BiCartesianSquare, apexes, bk: Backend) -> bool:
    """Bounded universal property: every cone from an apex factors uniquely through A.

    The monos ``i`` and ``i2`` are injective, so a cone ``(u, v)`` is determined
    by ``u`` and its factorization, if any, is ``i^-1 u``; uniqueness is automatic.
    """
    a, b, a2, _ = sq.corners
    inv_i, inv_i2 = _inverse(sq.i), _inverse(sq.i2)
    for t in apexes:
        hom_ta = bk.hom_maps(t, a)
        hom_ta2 = bk.hom_maps(t, a2)
        for u in bk.homs(t, b):
            ju = [sq.j2.map[x] for x in u.map]
            if any(y not in inv_i2 for y in ju):
                continue
            v = tuple(inv_i2[y] for y in ju)
            if v not in hom_ta2:
                continue
            if any(y not in inv_i for y in u.map):
                return False
            w = tuple(inv_i[y] for y in u.map)
            if w not in hom_ta or tuple(sq.j.map[x] for x in w) != v:
                return False
    return True


def is_pushout(sq: BiCartesianSquare, apexes, bk: Backend) -> bool:
    """Bounded universal property: every cocone to an apex factors uniquely through B2.

    The epis ``j`` and ``j2`` are surjective, so a cocone ``(p, q)`` is determined
    by ``p`` and its factorization, if any, is forced on each fibre of ``j2``.
    """
    _, b, a2, b2 = sq.corners
    for t in apexes:
        hom_a2t = bk.hom_maps(a2, t)
        hom_b2t = bk.hom_maps(b2, t)
        for p in bk.homs(b, t):
            q = _factor_through_surjection(sq.j, [p.map[y] for y in sq.i.map])
            if q is None or q not in hom_a2t:
                continue
            w = _factor_through_surjection(sq.j2, p.map)
            if w is None or w not in hom_b2t:
                return False
            if tuple(w[y] for y in sq.i2.map) != q:
                return False
    return True


def _check_object(x, objs, bk: Backend):
    """All axiom instances whose first corner is ``x``; returns (checks, failures)."""
    checks: dict[str, int] = {}
    fails: list = []

    def tick(ax, ok, desc):
        checks[ax] = checks.get(ax, 0) + 1
        if not ok:
            fails.append((ax, desc))

    zero = bk.zero()
    nm = getattr(x, "name", "") or f"object of size {bk.size(x)}"
    tick("1", bk.is_mono(bk.zero_map(zero, x)), f"0 -> {nm} is not an admissible mono")
    tick("1", bk.is_epi(bk.zero_map(x, zero)), f"{nm} -> 0 is not an admissible epi")
    for g in bk.automorphisms(x):
        tick("2", bk.is_mono(g) and bk.is_epi(g), f"automorphism {g.map} of {nm} is not admissible")
    monos_from = {y: bk.monos(x, y) for y in objs}
    epis_from = {y: bk.epis(x, y) for y in objs}
    for y in objs:
        for z in objs:
            for f in monos_from[y]:
                for g in bk.monos(y, z):
                    tick("2", bk.is_mono(f.then(g)), f"composite of monos {f.map}, {g.map} not admissible")
            for f in epis_from[y]:
                for g in bk.epis(y, z):
                    tick("2", bk.is_epi(f.then(g)), f"composite of epis {f.map}, {g.map} not admissible")
    # (5): spans A2 <<- x >-> B
    for b in objs:
        for i in monos_from[b]:
            for a2 in objs:
                for j in epis_from[a2]:
                    sq = bk.pushout(i, j)
                    ok = (sq.commutes() and bk.is_mono(sq.i2) and bk.is_epi(sq.j2)
                          and is_pullback(sq, objs, bk) and is_pushout(sq, objs, bk))
                    tick("5", ok, f"pushout completion of i={i.map}, j={j.map} on {nm}")
    # (4): cospans A2 >-> B2 <<- x, with x playing B
    for b2 in objs:
        for j2 in epis_from[b2]:
            for a2 in objs:
                for i2 in bk.monos(a2, b2):
                    sq = bk.pullback(i2, j2)
                    ok = (sq.commutes() and bk.is_mono(sq.i) and bk.is_epi(sq.j)
                          and is_pullback(sq, objs, bk) and is_pushout(sq, objs, bk))
                    tick("4", ok, f"pullback completion of i2={i2.map}, j2={j2.map} on {nm}")
    # (3): every commuting square A >-> B, A ->> A2, A2 >-> B2, B ->> B2 with A = x
    for b in objs:
        for i in monos_from[b]:
            for a2 in objs:
                for j in epis_from[a2]:
                    for b2 in objs:
                        for j2 in bk.epis(b, b2):
                            ij2 = i.then(j2).map
                            for i2 in bk.monos(a2, b2):
                                if j.then(i2).map != ij2:
                                    continue
                                sq = BiCartesianSquare(i, j, i2, j2)
                                pb = is_pullback(sq, objs, bk)
                                po = is_pushout(sq, objs, bk)
                                tick("3", pb == po,
                                     f"square i={i.map} j={j.map} i2={i2.map} j2={j2.map}: "
                                     f"pullback={pb} pushout={po}")
    return checks, fails


def verify_proto_exact_axioms(objs, backend: Backend | None = None,
                              workers: int = 1) -> ProtoExactReport:
    """Check the five proto-exact axioms over a corpus, bounded to the corpus.

    The corpus is first closed under subobjects and quotients (up to
    isomorphism); it then serves as the universe of objects for every
    instance enumeration and as the set of test apexes for the universal
    properties of completed squares.
    """
    objs = list(objs)
    bk = backend or (backend_for(objs[0]) if objs else SemiringModules())
    ws = working_set(objs + [bk.zero()], bk)
    report = ProtoExactReport(objects=len(ws))
    for checks, fails in parallel_map(partial(_check_object, objs=ws, bk=bk), ws, workers):
        for k, v in checks.items():
            report.checks[k] = report.checks.get(k, 0) + v
        report.failures.extend(fails)
    report.checks = dict(sorted(report.checks.items()))
    return report
