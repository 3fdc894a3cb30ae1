"""Exhaustive generation of small structures up to isomorphism.

Finite B-modules are the same thing as finite lattices (join as addition,
bottom as zero).  Lattices with ``n+1`` elements are generated from lattices
with ``n`` elements by inserting a join-irreducible element; this reaches
every lattice because deleting a join-irreducible element from a finite
lattice leaves a lattice.

Finite K-modules are linear spaces (every two points on exactly one line)
whose lines have at least three points; candidates are generated as linear
spaces and then filtered through the module axiom checker.
"""
from __future__ import annotations

from functools import lru_cache
from itertools import combinations

from . import search
from .geometry import kmodule_from_lines
from .hmod import HModule, check_hmodule_axioms
from .lattice import FiniteLattice, NotALattice, compact_elements_module
from .search import bits
from .smod import FiniteModule
from .tables import KRASNER


def _extensions(lat: FiniteLattice):
    n, le = lat.size, lat.leq
    for c in range(n):
        above = [u for u in range(n) if u != c and le[c][u]]
        for r in range(len(above) + 1):
            for up in combinations(above, r):
                ups = set(up)
                if any(le[u][v] and v not in ups for u in ups for v in range(n)):
                    continue
                rows = [list(row) + [False] for row in le]
                new = [False] * (n + 1)
                new[n] = True
                for u in ups:
                    new[u] = True
                for x in range(n):
                    rows[x][n] = le[x][c]
                rows.append(new)
                try:
                    yield FiniteLattice(rows)
                except NotALattice:
                    continue


@lru_cache(maxsize=None)
def lattices_of_size(n: int) -> tuple[FiniteLattice, ...]:
    """All lattices with exactly ``n`` elements, one per isomorphism class."""
    if n < 1:
        return ()
    if n == 1:
        return (FiniteLattice(((True,),)),)
    cands = [ext for lat in lattices_of_size(n - 1) for ext in _extensions(lat)]
    return tuple(search.dedupe(cands, lambda l: l.sig))


def lattices(max_size: int) -> list[FiniteLattice]:
    return [l for n in range(1, max_size + 1) for l in lattices_of_size(n)]


def bmodules(max_size: int) -> list[FiniteModule]:
    """All B-modules with at most ``max_size`` elements up to isomorphism."""
    out = []
    for n in range(1, max_size + 1):
        for k, lat in enumerate(lattices_of_size(n)):
            m = compact_elements_module(lat)
            out.append(FiniteModule(m.ring, m.add, m.act, name=f"L{n}_{k}"))
    return out


def linear_spaces(npoints: int, min_line: int = 3):
    """Every linear space on points ``1..npoints`` with lines of at least ``min_line`` points."""
    pts = list(range(1, npoints + 1))
    covered: set[tuple[int, int]] = set()
    lines: list[tuple[int, ...]] = []

    def rec():
        pair = next(((x, y) for x, y in combinations(pts, 2) if (x, y) not in covered), None)
        if pair is None:
            yield tuple(lines)
            return
        x, y = pair
        free = [z for z in pts if z not in pair
                and (min(x, z), max(x, z)) not in covered
                and (min(y, z), max(y, z)) not in covered]
        for r in range(max(0, min_line - 2), len(free) + 1):
            for extra in combinations(free, r):
                line = tuple(sorted(pair + extra))
                pairs = list(combinations(line, 2))
                if any(p in covered for p in pairs):
                    continue
                covered.update(pairs)
                lines.append(line)
                yield from rec()
                lines.pop()
                covered.difference_update(pairs)

    yield from rec()


@lru_cache(maxsize=None)
def kmodules_of_size(n: int) -> tuple[HModule, ...]:
    """All K-modules with exactly ``n`` elements, one per isomorphism class."""
    if n < 1:
        return ()
    cands = []
    for lines in linear_spaces(n - 1):
        m = kmodule_from_lines(n - 1, lines, validate=False)
        if check_hmodule_axioms(KRASNER, m).valid:
            cands.append(m)
    out = search.dedupe(cands, lambda m: m.sig)
    return tuple(HModule(m.ring, m.hyperadd, m.act, name=f"K{n}_{k}") for k, m in enumerate(out))


def kmodules(max_size: int) -> list[HModule]:
    return [m for n in range(1, max_size + 1) for m in kmodules_of_size(n)]


def points_of(mask: int) -> list[int]:
    return bits(mask)
