"""Finite semirings, rings and hyperstructures given by explicit operation tables.

Conventions used throughout the package: element 0 is the additive identity,
element 1 the multiplicative identity (when there are at least two elements),
and subsets of elements are bitmasks over element indices.
"""
from __future__ import annotations

import os
import re
from dataclasses import dataclass, field
from functools import cached_property

from .search import Sig, bits, mask_of, singleton_table

DEFAULT_MAX_SIZE = 64


class StructureError(ValueError):
    """A table is malformed: wrong shape, out-of-range entry or empty cell."""


class BoundExceeded(RuntimeError):
    """A structure or search exceeds a configured size bound."""


def max_size() -> int:
    return int(os.environ.get("PEXA_MAX_SIZE", DEFAULT_MAX_SIZE))


def check_size(n: int, what: str = "structure") -> None:
    if n > max_size():
        raise BoundExceeded(f"{what} has {n} elements, above the size cap {max_size()}")


def _square(table, n: int, name: str, *, masks: bool = False) -> tuple:
    rows = tuple(tuple(int(v) for v in row) for row in table)
    if len(rows) != n or any(len(r) != n for r in rows):
        raise StructureError(f"{name} table must be {n}x{n}")
    for a, row in enumerate(rows):
        for b, v in enumerate(row):
            if masks:
                if v <= 0:
                    raise StructureError(f"{name}[{a}][{b}] is empty")
                if v >> n:
                    raise StructureError(f"{name}[{a}][{b}] has an out-of-range element")
            elif not 0 <= v < n:
                raise StructureError(f"{name}[{a}][{b}] = {v} out of range")
    return rows


@dataclass(frozen=True)
class AxiomReport:
    """Result of an exhaustive axiom check: one first-witness per failed axiom."""

    violations: tuple = ()

    @property
    def valid(self) -> bool:
        return not self.violations

    def __bool__(self) -> bool:
        return self.valid

    def names(self) -> list[str]:
        return [name for name, _ in self.violations]

    def witness(self, name: str):
        for n, w in self.violations:
            if n == name:
                return w
        return None


class _Collector:
    def __init__(self):
        self.out: list[tuple[str, tuple]] = []

    def first(self, name: str, witnesses) -> None:
        for w in witnesses:
            self.out.append((name, tuple(w)))
            return

    def report(self) -> AxiomReport:
        return AxiomReport(tuple(self.out))


@dataclass(frozen=True)
class SemiringTable:
    add: tuple
    mul: tuple
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = len(self.add)
        if n == 0:
            raise StructureError("a semiring needs at least one element")
        object.__setattr__(self, "add", _square(self.add, n, "add"))
        object.__setattr__(self, "mul", _square(self.mul, n, "mul"))

    @property
    def size(self) -> int:
        return len(self.add)

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1 if self.size >= 2 else 0

    @cached_property
    def idempotent(self) -> bool:
        return all(self.add[a][a] == a for a in range(self.size))

    @cached_property
    def sig(self) -> Sig:
        return Sig(self.size, (singleton_table(self.add), singleton_table(self.mul)), ())


@dataclass(frozen=True)
class RingTable(SemiringTable):
    @cached_property
    def neg(self) -> tuple:
        out = []
        for a in range(self.size):
            inv = [b for b in range(self.size) if self.add[a][b] == 0]
            out.append(inv[0] if inv else -1)
        return tuple(out)

    @cached_property
    def units(self) -> int:
        return mask_of(a for a in range(self.size)
                       if any(self.mul[a][b] == self.one for b in range(self.size)))


HYPER_KINDS = ("hypergroup", "hyperring", "hyperfield")


@dataclass(frozen=True)
class HyperTable:
    hyperadd: tuple  # masks
    mul: tuple
    kind: str = "hyperring"
    name: str = field(default="", compare=False)

    def __post_init__(self):
        n = len(self.hyperadd)
        if n == 0:
            raise StructureError("a hyperstructure needs at least one element")
        if self.kind not in HYPER_KINDS:
            raise StructureError(f"unknown hyperstructure kind {self.kind!r}")
        object.__setattr__(self, "hyperadd", _square(self.hyperadd, n, "hyperadd", masks=True))
        object.__setattr__(self, "mul", _square(self.mul, n, "mul"))

    @property
    def size(self) -> int:
        return len(self.hyperadd)

    @property
    def zero(self) -> int:
        return 0

    @property
    def one(self) -> int:
        return 1 if self.size >= 2 else 0

    def add_sets(self, x: int, y: int) -> int:
        """Hypersum of two subsets (as masks)."""
        out = 0
        for a in bits(x):
            row = self.hyperadd[a]
            for b in bits(y):
                out |= row[b]
        return out

    @cached_property
    def sig(self) -> Sig:
        return Sig(self.size, (self.hyperadd, singleton_table(self.mul)), ())


# -- axiom checkers ---------------------------------------------------------

def _triples(n):
    r = range(n)
    return ((a, b, c) for a in r for b in r for c in r)


def _pairs(n):
    r = range(n)
    return ((a, b) for a in r for b in r)


def check_semiring_axioms(tbl: SemiringTable) -> AxiomReport:
    n, add, mul = tbl.size, tbl.add, tbl.mul
    z, one = tbl.zero, tbl.one
    col = _Collector()
    col.first("add_identity", ((z, a) for a in range(n) if add[z][a] != a or add[a][z] != a))
    col.first("add_commutative", ((a, b) for a, b in _pairs(n) if add[a][b] != add[b][a]))
    col.first("add_associative", ((a, b, c) for a, b, c in _triples(n)
                                  if add[add[a][b]][c] != add[a][add[b][c]]))
    col.first("mul_identity", ((one, a) for a in range(n)
                               if mul[one][a] != a or mul[a][one] != a))
    col.first("mul_commutative", ((a, b) for a, b in _pairs(n) if mul[a][b] != mul[b][a]))
    col.first("mul_associative", ((a, b, c) for a, b, c in _triples(n)
                                  if mul[mul[a][b]][c] != mul[a][mul[b][c]]))
    col.first("zero_absorbing", ((z, a) for a in range(n)
                                 if mul[z][a] != z or mul[a][z] != z))
    col.first("distributive", ((a, b, c) for a, b, c in _triples(n)
                               if mul[a][add[b][c]] != add[mul[a][b]][mul[a][c]]))
    if isinstance(tbl, RingTable):
        col.first("additive_inverse", ((a,) for a in range(n) if tbl.neg[a] < 0))
    return col.report()


def hypergroup_violations(n: int, hadd, col: _Collector) -> None:
    """Hypergroup axioms for a set-valued addition table (masks), zero at index 0."""
    def sum_sets(x, y):
        out = 0
        for a in bits(x):
            row = hadd[a]
            for b in bits(y):
                out |= row[b]
        return out

    col.first("add_commutative", ((a, b) for a, b in _pairs(n) if hadd[a][b] != hadd[b][a]))
    col.first("add_associative", ((a, b, c) for a, b, c in _triples(n)
                                  if sum_sets(hadd[a][b], 1 << c) != sum_sets(1 << a, hadd[b][c])))
    col.first("zero_identity", ((a,) for a in range(n)
                                if hadd[a][0] != 1 << a or hadd[0][a] != 1 << a))
    col.first("unique_zero", ((e,) for e in range(1, n)
                              if all(hadd[a][e] == 1 << a for a in range(n))))
    negs = []
    for a in range(n):
        cands = [b for b in range(n) if hadd[a][b] & 1]
        negs.append(cands[0] if len(cands) == 1 else -1)
    col.first("unique_negative", ((a,) for a in range(n) if negs[a] < 0))
    col.first("reversibility", ((a, b, c) for a, b, c in _triples(n)
                                if negs[b] >= 0 and hadd[b][c] >> a & 1
                                and not hadd[a][negs[b]] >> c & 1))


def check_hyperstructure_axioms(tbl: HyperTable) -> AxiomReport:
    n, hadd, mul = tbl.size, tbl.hyperadd, tbl.mul
    col = _Collector()
    hypergroup_violations(n, hadd, col)
    if tbl.kind in ("hyperring", "hyperfield"):
        one = tbl.one

        def scale(a, mask):
            return mask_of(mul[a][x] for x in bits(mask))

        col.first("mul_identity", ((one, a) for a in range(n)
                                   if mul[one][a] != a or mul[a][one] != a))
        col.first("mul_commutative", ((a, b) for a, b in _pairs(n) if mul[a][b] != mul[b][a]))
        col.first("mul_associative", ((a, b, c) for a, b, c in _triples(n)
                                      if mul[mul[a][b]][c] != mul[a][mul[b][c]]))
        col.first("zero_absorbing", ((0, a) for a in range(n)
                                     if mul[0][a] != 0 or mul[a][0] != 0))
        col.first("distributive", ((a, b, c) for a, b, c in _triples(n)
                                   if scale(a, hadd[b][c]) != hadd[mul[a][b]][mul[a][c]]))
    if tbl.kind == "hyperfield":
        col.first("nonzero_closed", ((a, b) for a, b in _pairs(n)
                                     if a and b and mul[a][b] == 0))
        col.first("nonzero_inverse", ((a,) for a in range(1, n)
                                      if not any(mul[a][b] == tbl.one for b in range(n))))
    return col.report()


# -- builtins ---------------------------------------------------------------

def prime_field(p: int) -> RingTable:
    if p < 2 or any(p % d == 0 for d in range(2, int(p ** 0.5) + 1)):
        raise ValueError(f"{p} is not prime")
    add = [[(a + b) % p for b in range(p)] for a in range(p)]
    mul = [[(a * b) % p for b in range(p)] for a in range(p)]
    return RingTable(add, mul, name=f"F{p}")


def chain_semiring(k: int) -> SemiringTable:
    """Truncated max-plus chain {-inf, 0, 1, ..., k-2}: index i stands for i-1, index 0 for -inf."""
    if k < 2:
        raise ValueError("chain semiring needs k >= 2")
    add = [[max(a, b) for b in range(k)] for a in range(k)]
    mul = [[0 if a == 0 or b == 0 else min(a + b - 1, k - 1) for b in range(k)]
           for a in range(k)]
    return SemiringTable(add, mul, name=f"chain_{k}")


def as_hypertable(ring: SemiringTable) -> HyperTable:
    return HyperTable(singleton_table(ring.add), ring.mul, kind="hyperring", name=ring.name)


BOOLEAN = SemiringTable(((0, 1), (1, 1)), ((0, 0), (0, 1)), name="B")
KRASNER = HyperTable(((0b01, 0b10), (0b10, 0b11)), ((0, 0), (0, 1)),
                     kind="hyperfield", name="K")
# element order (0, 1, -1)
SIGN = HyperTable(((0b001, 0b010, 0b100),
                   (0b010, 0b010, 0b111),
                   (0b100, 0b111, 0b100)),
                  ((0, 0, 0), (0, 1, 2), (0, 2, 1)), kind="hyperfield", name="S")
ZERO_SEMIRING = SemiringTable(((0,),), ((0,),), name="zero")


def builtin(name: str):
    """Return a built-in structure: ``B``, ``K``, ``S``, ``zero``, ``chain_k`` or ``F<p>``."""
    if name == "B":
        return BOOLEAN
    if name == "K":
        return KRASNER
    if name == "S":
        return SIGN
    if name == "zero":
        return ZERO_SEMIRING
    m = re.fullmatch(r"chain_?(\d+)", name)
    if m:
        return chain_semiring(int(m.group(1)))
    m = re.fullmatch(r"F_?(\d+)", name)
    if m:
        return prime_field(int(m.group(1)))
    raise KeyError(f"unknown builtin {name!r}")


# -- quotient hyperrings ----------------------------------------------------

def quotient_hyperring(ring: RingTable, group) -> HyperTable:
    """The hyperring ring/G of orbits of a subgroup G of the unit group."""
    g = sorted(set(group) if not isinstance(group, int) else bits(group))
    n = ring.size
    if not g or any(not (ring.units >> x & 1) for x in g):
        raise ValueError("G must be a nonempty set of units")
    gm = mask_of(g)
    if not gm >> ring.one & 1 or any(not gm >> ring.mul[x][y] & 1 for x in g for y in g):
        raise ValueError("G is not a multiplicative subgroup")
    orbit_of = [-1] * n
    reps: list[int] = []
    for a in [0, ring.one] + list(range(n)):
        if orbit_of[a] >= 0:
            continue
        idx = len(reps)
        reps.append(a)
        for x in g:
            orbit_of[ring.mul[x][a]] = idx
    k = len(reps)
    hadd = [[mask_of(orbit_of[ring.add[ring.mul[g1][reps[i]]][ring.mul[g2][reps[j]]]]
                     for g1 in g for g2 in g)
             for j in range(k)] for i in range(k)]
    mul = [[orbit_of[ring.mul[reps[i]][reps[j]]] for j in range(k)] for i in range(k)]
    is_field = all(any(mul[i][j] == 1 for j in range(k)) for i in range(1, k))
    return HyperTable(hadd, mul, kind="hyperfield" if is_field and k >= 2 else "hyperring",
                      name=f"{ring.name}/G")
