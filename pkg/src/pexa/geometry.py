"""Modules over the Krasner hyperfield as projective incidence geometries.

A K-module ``E`` satisfies ``x + x = {0, x}`` for every nonzero ``x``.  Its
points are the nonzero elements and the line through ``x != y`` is
``(x + y) | {x, y}``.  Conversely a linear space whose lines all have at
least three points defines a K-module via ``x + y = line(x, y) - {x, y}``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from itertools import combinations, product

from .hmod import HModule, check_hmodule_axioms, quotient_hmodule
from .search import bits, mask_of
from .tables import KRASNER, check_size, prime_field


class NotAKModule(ValueError):
    pass


@dataclass(frozen=True)
class IncidenceGeometry:
    points: tuple   # element indices of the module
    lines: tuple    # sorted tuples of points, sorted

    @property
    def min_line_size(self) -> int:
        return min((len(l) for l in self.lines), default=0)

    @property
    def cc_bound(self) -> bool:
        """Every line has at least four points."""
        return all(len(l) >= 4 for l in self.lines)

    @cached_property
    def incidence(self) -> tuple:
        return tuple(tuple(p in l for l in self.lines) for p in self.points)

    def flags(self) -> list[tuple[int, int]]:
        return [(p, k) for p, row in zip(self.points, self.incidence)
                for k, inc in enumerate(row) if inc]


def is_kmodule(m: HModule) -> bool:
    if m.ring != KRASNER:
        raise NotAKModule("the base hyperring must be K")
    return all(m.hyperadd[x][x] == (1 | 1 << x) for x in range(1, m.size))


def _require_k(m: HModule) -> None:
    if not is_kmodule(m):
        raise NotAKModule("x + x = {0, x} fails for some nonzero x")


def projective_geometry(m: HModule) -> IncidenceGeometry:
    _require_k(m)
    pts = tuple(range(1, m.size))
    lines = {tuple(bits(m.hyperadd[x][y] | 1 << x | 1 << y))
             for x, y in combinations(pts, 2)}
    return IncidenceGeometry(pts, tuple(sorted(lines)))


def flag_count(m: HModule) -> int:
    return len(projective_geometry(m).flags())


def quotient_geometry(m: HModule, x: int) -> IncidenceGeometry:
    if x == 0:
        raise ValueError("x must be a nonzero element")
    _require_k(m)
    return projective_geometry(quotient_hmodule(m, 1 | 1 << x).quotient)


def _validated(m: HModule) -> HModule:
    rep = check_hmodule_axioms(KRASNER, m)
    if not rep.valid:
        name, wit = rep.violations[0]
        raise ValueError(f"construction fails {name} at {wit}")
    return m


def _k_action(n: int) -> tuple:
    return ((0,) * n, tuple(range(n)))


def kmodule_from_lines(npoints: int, lines, name: str = "", validate: bool = True) -> HModule:
    """K-module on ``0`` plus points ``1..npoints`` from a linear space.

    ``lines`` are collections of point labels in ``1..npoints``; every pair of
    points must lie on exactly one line and every line needs three points.
    """
    n = npoints + 1
    hadd = [[0] * n for _ in range(n)]
    for a in range(n):
        hadd[0][a] = hadd[a][0] = 1 << a
    for a in range(1, n):
        hadd[a][a] = 1 | 1 << a
    for line in lines:
        lm = mask_of(line)
        if len(set(line)) < 3:
            raise ValueError("every line needs at least three points")
        for x, y in combinations(sorted(set(line)), 2):
            if hadd[x][y]:
                raise ValueError(f"points {x} and {y} lie on two lines")
            hadd[x][y] = hadd[y][x] = lm & ~(1 << x | 1 << y)
    if any(hadd[x][y] == 0 for x in range(n) for y in range(n)):
        raise ValueError("some pair of points lies on no line")
    m = HModule(KRASNER, hadd, _k_action(n), name=name)
    return _validated(m) if validate else m


def en_table(n: int) -> HModule:
    """The table ``a_i + a_i = {0, a_i}``, ``a_i + a_j = {a_k : k != i, j}`` without validation."""
    size = n + 1
    hadd = [[0] * size for _ in range(size)]
    pts = mask_of(range(1, size))
    for a in range(size):
        hadd[0][a] = hadd[a][0] = 1 << a
        for b in range(1, size):
            if a:
                hadd[a][b] = (1 | 1 << a) if a == b else pts & ~(1 << a | 1 << b)
    return HModule(KRASNER, hadd, _k_action(size), name=f"E{n}")


def en_module(n: int) -> HModule:
    if n < 4:
        detail = ""
        if n == 3:
            rep = check_hmodule_axioms(KRASNER, en_table(3))
            detail = f": {rep.violations[0][0]} fails at {rep.violations[0][1]}"
        raise ValueError(f"E_n needs n >= 4{detail}")
    return _validated(en_table(n))


def normalized_vectors(p: int, dim: int) -> list[tuple[int, ...]]:
    """Nonzero vectors of F_p^dim whose first nonzero coordinate is 1, in lexicographic order."""
    out = []
    for v in product(range(p), repeat=dim):
        nz = next((c for c in v if c), 0)
        if nz == 1:
            out.append(v)
    return out


def projective_space_kmodule(p: int, d: int) -> HModule:
    """The K-module of F_p^(d+1) modulo F_p^x: zero plus the points of P^d(F_p)."""
    field = prime_field(p)
    if p == 2:
        raise ValueError("p = 2 gives x + x = {0}, not {0, x}")
    if d < 0:
        raise ValueError("d must be nonnegative")
    dim = d + 1
    reps = normalized_vectors(p, dim)
    check_size(len(reps) + 1, "projective space module")
    inv = {a: next(b for b in range(1, p) if field.mul[a][b] == 1) for a in range(1, p)}
    index = {v: i + 1 for i, v in enumerate(reps)}

    def cls(v):
        nz = next((c for c in v if c), 0)
        if nz == 0:
            return 0
        s = inv[nz]
        return index[tuple(c * s % p for c in v)]

    size = len(reps) + 1
    vecs = [(0,) * dim] + reps
    hadd = [[mask_of(cls(tuple((g1 * a + g2 * b) % p for a, b in zip(u, v)))
                     for g1 in range(1, p) for g2 in range(1, p))
             for v in vecs] for u in vecs]
    for a in range(size):
        hadd[0][a] = hadd[a][0] = 1 << a
    name = f"P{d}F{p}"
    return _validated(HModule(KRASNER, hadd, _k_action(size), name=name))
