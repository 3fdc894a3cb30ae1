"""Backtracking search for structure-preserving maps between finite tables.

Every structure in the package is reduced to a :class:`Sig`: a number of
elements, a zero element, some binary operations whose values are bitmasks
(single-valued operations use one-bit masks) and some unary operations
(scalar actions).  A map ``f`` is accepted when ``f(zero) = zero``, it commutes
with every unary operation, and for every binary operation

    f(a * b) == f(a) * f(b)      (strict)
    f(a * b) <= f(a) * f(b)      (weak, hyperstructure morphisms)

where ``f`` is applied elementwise to masks.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Iterator, Sequence


def bits(mask: int) -> list[int]:
    out = []
    i = 0
    while mask:
        if mask & 1:
            out.append(i)
        mask >>= 1
        i += 1
    return out


def mask_of(elements) -> int:
    m = 0
    for e in elements:
        m |= 1 << e
    return m


def image_mask(f: Sequence[int], mask: int) -> int:
    out = 0
    for e in bits(mask):
        out |= 1 << f[e]
    return out


@dataclass(frozen=True)
class Sig:
    n: int
    binops: tuple  # tuple of n x n tables of masks
    unops: tuple   # tuple of length-n tuples of element indices
    zero: int = 0


def singleton_table(table) -> tuple:
    return tuple(tuple(1 << v for v in row) for row in table)


# -- colour refinement ------------------------------------------------------

def _initial_colours(sig: Sig) -> list[int]:
    cols = []
    for a in range(sig.n):
        parts = [a == sig.zero]
        for op in sig.binops:
            row = op[a]
            parts.append(tuple(sorted(r.bit_count() for r in row)))
            parts.append(tuple(sorted(op[b][a].bit_count() for b in range(sig.n))))
            parts.append(bool(row[a] >> a & 1))
            parts.append(bool(row[a] >> sig.zero & 1))
            parts.append(sum(row[b] >> a & 1 for b in range(sig.n)))
            parts.append(sum(row[b] >> b & 1 for b in range(sig.n)))
        for u in sig.unops:
            parts.append((u[a] == a, u[a] == sig.zero))
        cols.append(hash(tuple(parts)))
    return cols


def _refine(sig: Sig, cols: list[int]) -> list[int]:
    new = []
    for a in range(sig.n):
        parts = [cols[a]]
        for op in sig.binops:
            row = op[a]
            parts.append(tuple(sorted(
                (cols[b], tuple(sorted(cols[c] for c in bits(row[b]))),
                 row[b] >> a & 1, row[b] >> b & 1)
                for b in range(sig.n))))
        for u in sig.unops:
            parts.append(cols[u[a]])
        new.append(hash(tuple(parts)))
    return new


def colours(sig: Sig, rounds: int | None = None) -> list[int]:
    """Isomorphism-invariant element colours (hash-based, comparable across structures)."""
    cols = _initial_colours(sig)
    classes = len(set(cols))
    for _ in range(sig.n if rounds is None else rounds):
        new = _refine(sig, cols)
        k = len(set(new))
        cols = new
        if rounds is None and k == classes:
            break
        classes = k
    return cols


def _joint_colours(s1: Sig, s2: Sig) -> tuple[list[int], list[int]]:
    c1, c2 = _initial_colours(s1), _initial_colours(s2)
    k1, k2 = len(set(c1)), len(set(c2))
    for _ in range(max(s1.n, s2.n)):
        c1, c2 = _refine(s1, c1), _refine(s2, c2)
        n1, n2 = len(set(c1)), len(set(c2))
        if (n1, n2) == (k1, k2):
            break
        k1, k2 = n1, n2
    return c1, c2


def invariant(sig: Sig) -> tuple:
    return (sig.n, len(sig.binops), len(sig.unops), tuple(sorted(colours(sig))))


# -- map search -------------------------------------------------------------

class _State:
    def __init__(self, src: Sig, dst: Sig, strict: bool, injective: bool, cand):
        self.src, self.dst = src, dst
        self.strict, self.injective = strict, injective
        self.cand = cand
        n = src.n
        self.f = [-1] * n
        self.g = [-1] * dst.n  # partial inverse, maintained only when injective
        self.trail: list[int] = []
        # pairs (op index, a, b) whose source value contains element c
        self.contains: list[list[tuple[int, int, int]]] = [[] for _ in range(n)]
        for k, op in enumerate(src.binops):
            for a in range(n):
                for b in range(n):
                    for c in bits(op[a][b]):
                        self.contains[c].append((k, a, b))
        self.dcontains = None
        if injective and strict:
            self.dcontains = [[] for _ in range(dst.n)]
            for k, op in enumerate(dst.binops):
                for a in range(dst.n):
                    for b in range(dst.n):
                        for c in bits(op[a][b]):
                            self.dcontains[c].append((k, a, b))
        self.unpre = [[[] for _ in range(n)] for _ in src.unops]
        for u, op in enumerate(src.unops):
            for a in range(n):
                self.unpre[u][op[a]].append(a)

    def assign(self, a: int, b: int, queue: list[int]) -> bool:
        fa = self.f[a]
        if fa != -1:
            return fa == b
        if not (self.cand[a] >> b & 1):
            return False
        if self.injective:
            if self.g[b] != -1:
                return False
            self.g[b] = a
        self.f[a] = b
        self.trail.append(a)
        queue.append(a)
        return True

    def undo(self, mark: int) -> None:
        while len(self.trail) > mark:
            a = self.trail.pop()
            if self.injective:
                self.g[self.f[a]] = -1
            self.f[a] = -1

    def check_pair(self, k: int, a: int, b: int, queue: list[int]) -> bool:
        f = self.f
        s = self.src.binops[k][a][b]
        t = self.dst.binops[k][f[a]][f[b]]
        if self.strict and self.injective and s.bit_count() != t.bit_count():
            return False
        if self.strict and s & (s - 1) == 0 and t & (t - 1):
            return False
        unassigned = 0
        for c in bits(s):
            fc = f[c]
            if fc == -1:
                unassigned += 1
                if s & (s - 1) == 0 and t & (t - 1) == 0:
                    if not self.assign(c, t.bit_length() - 1, queue):
                        return False
                    unassigned -= 1
            elif not (t >> fc & 1):
                return False
        if self.strict:
            if self.injective:
                g = self.g
                for d in bits(t):
                    if g[d] != -1 and not (s >> g[d] & 1):
                        return False
            elif unassigned == 0:
                img = 0
                for c in bits(s):
                    img |= 1 << f[c]
                if img != t:
                    return False
        return True

    def propagate(self, queue: list[int]) -> bool:
        f = self.f
        while queue:
            a = queue.pop()
            for u, op in enumerate(self.src.unops):
                if not self.assign(op[a], self.dst.unops[u][f[a]], queue):
                    return False
                for p in self.unpre[u][a]:
                    if f[p] != -1 and self.dst.unops[u][f[p]] != f[a]:
                        return False
            assigned = [x for x in range(self.src.n) if f[x] != -1]
            for k in range(len(self.src.binops)):
                for x in assigned:
                    if not self.check_pair(k, a, x, queue):
                        return False
                    if x != a and not self.check_pair(k, x, a, queue):
                        return False
            for k, x, y in self.contains[a]:
                if f[x] != -1 and f[y] != -1 and not self.check_pair(k, x, y, queue):
                    return False
            if self.dcontains is not None:
                for k, x, y in self.dcontains[f[a]]:
                    gx, gy = self.g[x], self.g[y]
                    if gx != -1 and gy != -1 and not self.check_pair(k, gx, gy, queue):
                        return False
        return True


def _verify(src: Sig, dst: Sig, f: Sequence[int], strict: bool) -> bool:
    if f[src.zero] != dst.zero:
        return False
    for u, op in enumerate(src.unops):
        dop = dst.unops[u]
        if any(f[op[a]] != dop[f[a]] for a in range(src.n)):
            return False
    for k, op in enumerate(src.binops):
        dop = dst.binops[k]
        for a in range(src.n):
            for b in range(src.n):
                img = image_mask(f, op[a][b])
                t = dop[f[a]][f[b]]
                if strict and img != t:
                    return False
                if not strict and img & ~t:
                    return False
    return True


def iter_maps(src: Sig, dst: Sig, *, strict: bool = True, injective: bool = False,
              candidates: Sequence[int] | None = None,
              order: Sequence[int] | None = None) -> Iterator[tuple[int, ...]]:
    """Yield every admissible map ``src -> dst`` (deterministic DFS order).

    ``candidates[a]`` is a bitmask of allowed images of ``a``.
    """
    if len(src.binops) != len(dst.binops) or len(src.unops) != len(dst.unops):
        raise ValueError("signatures have different shapes")
    full = (1 << dst.n) - 1
    cand = list(candidates) if candidates is not None else [full] * src.n
    if injective and src.n > dst.n:
        return
    st = _State(src, dst, strict, injective, cand)
    queue: list[int] = []
    if not st.assign(src.zero, dst.zero, queue) or not st.propagate(queue):
        return
    order = list(order) if order is not None else list(range(src.n))

    def rec():
        a = next((x for x in order if st.f[x] == -1), None)
        if a is None:
            f = tuple(st.f)
            if _verify(src, dst, f, strict):
                yield f
            return
        for b in bits(st.cand[a]):
            mark = len(st.trail)
            q: list[int] = []
            if st.assign(a, b, q) and st.propagate(q):
                yield from rec()
            st.undo(mark)

    yield from rec()


def _iso_setup(s1: Sig, s2: Sig):
    if s1.n != s2.n or len(s1.binops) != len(s2.binops) or len(s1.unops) != len(s2.unops):
        return None
    c1, c2 = _joint_colours(s1, s2)
    if sorted(c1) != sorted(c2):
        return None
    by_col: dict[int, int] = {}
    for b, c in enumerate(c2):
        by_col[c] = by_col.get(c, 0) | 1 << b
    cand = [by_col[c] for c in c1]
    # rare colours first, ties by index
    order = sorted(range(s1.n), key=lambda a: (cand[a].bit_count(), a))
    return cand, order


def find_isomorphism(s1: Sig, s2: Sig) -> tuple[int, ...] | None:
    setup = _iso_setup(s1, s2)
    if setup is None:
        return None
    cand, order = setup
    return next(iter_maps(s1, s2, strict=True, injective=True,
                          candidates=cand, order=order), None)


def iter_isomorphisms(s1: Sig, s2: Sig) -> Iterator[tuple[int, ...]]:
    setup = _iso_setup(s1, s2)
    if setup is None:
        return iter(())
    cand, order = setup
    return iter_maps(s1, s2, strict=True, injective=True, candidates=cand, order=order)


def dedupe(objs, sig_of) -> list:
    """Keep the first member of each isomorphism class, preserving input order."""
    buckets: dict[tuple, list] = {}
    out = []
    for o in objs:
        s = sig_of(o)
        key = invariant(s)
        reps = buckets.setdefault(key, [])
        if any(find_isomorphism(s, sig_of(r)) is not None for r in reps):
            continue
        reps.append(o)
        out.append(o)
    return out
