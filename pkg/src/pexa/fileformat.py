"""Line-oriented text format for finite structures.

::

    # the Boolean semifield
    semiring B 2
    labels 0 1
    add
    0 1
    1 1
    mul
    0 0
    0 1

The header is ``kind name size [variant]`` with kind one of ``semiring``,
``ring``, ``hyperring`` (variant ``hypergroup``/``hyperring``/``hyperfield``),
``module``, ``hmodule``, ``lattice`` or ``morphism``.  Tables follow an
``add``/``mul``/``act``/``leq`` heading, one row per line; hyperaddition cells
are brace sets such as ``{0,1}``.  Inside a table section a line of the form
``x+y = z`` (or ``x*y = z``) sets one cell and its mirror, and any cell left
unset in an ``add`` table in row or column 0 defaults to the identity.  Elements
are named by index or by label.  Modules and morphisms refer to other
structures with ``base``/``source``/``target`` followed by a builtin name or
``@path`` (relative to the file).  The ``act`` table of a module over a
two-element base may be omitted since the action is forced.

On parsing, elements are reordered so that zero comes first and one second.
"""
from __future__ import annotations

import hashlib
import re
from dataclasses import dataclass, field
from pathlib import Path

from .hmod import HModule, check_hmodule_axioms, regular_hmodule
from .lattice import FiniteLattice, LatticeMorphism
from .search import bits, mask_of
from .smod import FiniteModule, ModuleMorphism, check_module_axioms, regular_module
from .hmod import HMorphism
from .tables import (HyperTable, RingTable, SemiringTable, StructureError, builtin,
                     check_hyperstructure_axioms, check_semiring_axioms)

KINDS = ("semiring", "ring", "hyperring", "module", "hmodule", "lattice", "morphism")
_KIND_ALIASES = {"hyperfield": ("hyperring", "hyperfield"),
                 "hypergroup": ("hyperring", "hypergroup")}


class ParseError(ValueError):
    def __init__(self, msg: str, line: int = 0, col: int = 0, path: str = ""):
        self.line, self.col, self.path, self.msg = line, col, path, msg
        where = f"{path or '<input>'}:{line}:{col}" if line else (path or "<input>")
        super().__init__(f"{where}: {msg}")


class AxiomFailure(ValueError):
    def __init__(self, report, what: str):
        self.report = report
        name, wit = report.violations[0]
        super().__init__(f"{what} fails {name} at {wit}")


@dataclass
class StructureFile:
    kind: str
    name: str
    obj: object
    labels: tuple = ()
    variant: str = ""
    perm: tuple = ()   # perm[new index] = index in the file
    refs: dict = field(default_factory=dict)


_TOKEN = re.compile(r"\{[^}]*\}|\S+")
_EQUATION = re.compile(r"^\s*([^\s+*=]+)\s*([+*])\s*([^\s+*=]+)\s*=\s*(.+?)\s*$")


def _lines(text: str):
    for no, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        if line.strip():
            yield no, line


class _Parser:
    def __init__(self, text: str, path: str = "", base_dir: Path | None = None):
        self.path = path
        self.base_dir = base_dir or Path(".")
        self.lines = list(_lines(text))
        self.pos = 0

    def error(self, msg, line=0, col=0):
        raise ParseError(msg, line, col, self.path)

    def element(self, tok: str, labels, size: int, line: int, col: int) -> int:
        if tok in labels:
            return labels.index(tok)
        try:
            v = int(tok)
        except ValueError:
            self.error(f"unknown element {tok!r}", line, col)
        if not 0 <= v < size:
            self.error(f"element {v} out of range 0..{size - 1}", line, col)
        return v

    def cell(self, tok: str, labels, size: int, line: int, col: int, braces: bool):
        if braces:
            if not (tok.startswith("{") and tok.endswith("}")):
                self.error(f"expected a brace set, got {tok!r}", line, col)
            inner = [t.strip() for t in tok[1:-1].split(",") if t.strip()]
            if not inner:
                self.error("empty hypersum", line, col)
            return mask_of(self.element(t, labels, size, line, col) for t in inner)
        return self.element(tok, labels, size, line, col)

    def table(self, heading: str, head_line: int, rows: int, cols: int, labels, braces: bool,
              sym_default: bool, boolean: bool = False):
        vlabels, vrange = ((), 2) if boolean else (labels, cols)
        grid: list[list] = [[None] * cols for _ in range(rows)]
        row = 0
        while self.pos < len(self.lines):
            no, line = self.lines[self.pos]
            eq = _EQUATION.match(line)
            if eq:
                a = self.element(eq.group(1), labels, rows, no, eq.start(1) + 1)
                b = self.element(eq.group(3), labels, cols, no, eq.start(3) + 1)
                v = self.cell(eq.group(4), vlabels, vrange, no, eq.start(4) + 1, braces)
                grid[a][b] = v
                if a < cols and b < rows:
                    grid[b][a] = v
                self.pos += 1
                continue
            toks = [(m.group(), m.start() + 1) for m in _TOKEN.finditer(line)]
            if toks[0][0] in _KEYWORDS or row >= rows:
                break
            if len(toks) != cols:
                self.error(f"{heading} row {row} has {len(toks)} entries, expected {cols}",
                           no, toks[0][1])
            grid[row] = [self.cell(t, vlabels, vrange, no, c, braces) for t, c in toks]
            row += 1
            self.pos += 1
        if sym_default:
            for a in range(rows):
                for b in range(cols):
                    if grid[a][b] is None and (a == 0 or b == 0):
                        e = b if a == 0 else a
                        grid[a][b] = (1 << e) if braces else e
        missing = [(a, b) for a in range(rows) for b in range(cols) if grid[a][b] is None]
        if missing:
            a, b = missing[0]
            last = self.lines[self.pos - 1][0] if self.pos else head_line
            self.error(f"{heading} table is missing row {a}" if row <= a
                       else f"{heading} table is missing cell ({a}, {b})", last, 1)
        return grid

    def reference(self, tok: str, line: int, want: str):
        if tok.startswith("@"):
            p = (self.base_dir / tok[1:]).resolve()
            try:
                text = p.read_text()
            except OSError as exc:
                self.error(f"cannot read {tok[1:]}: {exc.strerror}", line, 1)
            return parse_structure(text, path=str(p), base_dir=p.parent).obj
        try:
            ring = builtin(tok)
        except KeyError:
            self.error(f"unknown builtin {tok!r}", line, 1)
        if want == "ring":
            return ring
        return regular_hmodule(ring) if isinstance(ring, HyperTable) else regular_module(ring)

    def parse(self) -> StructureFile:
        if not self.lines:
            self.error("empty input")
        no, line = self.lines[0]
        head = line.split()
        if len(head) < 3:
            self.error("header must be 'kind name size'", no, 1)
        kind, name, size_tok = head[:3]
        variant = head[3] if len(head) > 3 else ""
        if kind in _KIND_ALIASES:
            kind, variant = _KIND_ALIASES[kind]
        if kind not in KINDS:
            self.error(f"unknown kind {kind!r}", no, 1)
        try:
            size = int(size_tok)
        except ValueError:
            self.error(f"size must be an integer, got {size_tok!r}", no, line.index(size_tok) + 1)
        if size < 1:
            self.error("size must be positive", no, line.index(size_tok) + 1)
        self.pos = 1
        labels: tuple = ()
        tables: dict = {}
        refs: dict = {}
        fmap = None
        while self.pos < len(self.lines):
            no, line = self.lines[self.pos]
            toks = line.split()
            key = toks[0]
            if key == "labels":
                labels = tuple(toks[1:])
                if len(labels) != size:
                    self.error(f"expected {size} labels, got {len(labels)}", no, 1)
                self.pos += 1
            elif key in ("base", "source", "target"):
                if len(toks) != 2:
                    self.error(f"'{key}' takes one argument", no, 1)
                refs[key] = (toks[1], self.reference(toks[1], no, "ring" if key == "base" else "obj"))
                self.pos += 1
            elif key == "map":
                fmap = [self.element(t, (), 10 ** 9, no, 1) for t in toks[1:]]
                if len(fmap) != size:
                    self.error(f"map has {len(fmap)} entries, expected {size}", no, 1)
                self.pos += 1
            elif key in ("add", "mul", "act", "leq"):
                self.pos += 1
                if key in tables:
                    self.error(f"duplicate {key} table", no, 1)
                braces = key == "add" and kind in ("hyperring", "hmodule")
                rows = size
                if key == "act":
                    if "base" not in refs:
                        self.error("act table needs a preceding base line", no, 1)
                    rows = refs["base"][1].size
                tables[key] = (no, self.table(key, no, rows, size, labels, braces, key == "add",
                                                key == "leq"))
            else:
                self.error(f"unexpected line starting with {key!r}", no, 1)
        return _build(self, kind, name, size, variant, labels, tables, refs, fmap)


_KEYWORDS = {"labels", "base", "source", "target", "map", "add", "mul", "act", "leq"}


def _need(p: _Parser, tables, key):
    if key not in tables:
        p.error(f"missing {key} table")
    return tables[key][1]


def _permute_table(t, perm, masks=False):
    inv = {old: new for new, old in enumerate(perm)}
    if masks:
        return [[mask_of(inv[e] for e in bits(t[a][b])) for b in perm] for a in perm]
    return [[inv[t[a][b]] for b in perm] for a in perm]


def _identity_perm(n):
    return tuple(range(n))


def _canonical_perm(p, n, zero, one=None):
    if zero is None:
        p.error("no additive identity element")
    order = [zero]
    if one is not None and one != zero:
        order.append(one)
    order += [x for x in range(n) if x not in order]
    return tuple(order)


def _find(n, pred):
    return next((x for x in range(n) if pred(x)), None)


def _build(p, kind, name, size, variant, labels, tables, refs, fmap) -> StructureFile:
    n = size
    if kind in ("semiring", "ring"):
        add, mul = _need(p, tables, "add"), _need(p, tables, "mul")
        zero = _find(n, lambda z: all(add[z][a] == a for a in range(n)))
        one = _find(n, lambda o: all(mul[o][a] == a for a in range(n))) if n > 1 else None
        perm = _canonical_perm(p, n, zero, one)
        cls = RingTable if kind == "ring" else SemiringTable
        obj = cls(_permute_table(add, perm), _permute_table(mul, perm), name=name)
    elif kind == "hyperring":
        hadd, mul = _need(p, tables, "add"), _need(p, tables, "mul")
        zero = _find(n, lambda z: all(hadd[z][a] == 1 << a for a in range(n)))
        one = _find(n, lambda o: all(mul[o][a] == a for a in range(n))) if n > 1 else None
        perm = _canonical_perm(p, n, zero, one)
        obj = HyperTable(_permute_table(hadd, perm, masks=True), _permute_table(mul, perm),
                         kind=variant or "hyperring", name=name)
        variant = obj.kind
    elif kind in ("module", "hmodule"):
        if "base" not in refs:
            p.error("a module needs a base line")
        ring = refs["base"][1]
        add = _need(p, tables, "add")
        hyper = kind == "hmodule"
        if hyper != isinstance(ring, HyperTable):
            p.error("hmodule needs a hyperring base; module needs a semiring base")
        zero = _find(n, lambda z: all(add[z][a] == ((1 << a) if hyper else a) for a in range(n)))
        perm = _canonical_perm(p, n, zero)
        if "act" in tables:
            act = tables["act"][1]
        elif ring.size == 2:
            act = [[zero] * n, list(range(n))]
        elif ring.size == 1:
            act = [[zero] * n]
        else:
            p.error("missing act table")
        inv = {old: new for new, old in enumerate(perm)}
        act = [[inv[row[a]] for a in perm] for row in act]
        cls = HModule if hyper else FiniteModule
        obj = cls(ring, _permute_table(add, perm, masks=hyper), act, name=name)
    elif kind == "lattice":
        perm = _identity_perm(n)
        obj = FiniteLattice(_need(p, tables, "leq"), labels)
    else:  # morphism
        for key in ("source", "target"):
            if key not in refs:
                p.error(f"a morphism needs a {key} line")
        if fmap is None:
            p.error("a morphism needs a map line")
        src, dst = refs["source"][1], refs["target"][1]
        if src.size != n:
            p.error(f"source has {src.size} elements, header says {n}")
        if any(v >= dst.size for v in fmap):
            p.error("map entry out of range for the target")
        perm = _identity_perm(n)
        cls = (ModuleMorphism if isinstance(src, FiniteModule)
               else HMorphism if isinstance(src, HModule) else LatticeMorphism)
        obj = cls(src, dst, tuple(fmap))
    if labels and kind != "lattice":
        labels = tuple(labels[i] for i in perm)
    return StructureFile(kind, name, obj, labels, variant, perm,
                         {k: v[0] for k, v in refs.items()})


def parse_structure(text: str, path: str = "", base_dir: Path | None = None,
                    check: bool = False) -> StructureFile:
    """Parse one structure; with ``check`` the axioms are verified too."""
    try:
        sf = _Parser(text, path, base_dir).parse()
    except StructureError as exc:
        raise ParseError(str(exc), path=path) from exc
    if check:
        rep = axiom_report(sf.obj)
        if rep is not None and not rep.valid:
            raise AxiomFailure(rep, sf.kind)
    return sf


def load(path, check: bool = False) -> StructureFile:
    p = Path(path)
    try:
        text = p.read_text()
    except OSError as exc:
        raise ParseError(f"cannot read file: {exc.strerror}", path=str(path)) from exc
    return parse_structure(text, path=str(path), base_dir=p.parent, check=check)


def axiom_report(obj):
    if isinstance(obj, HyperTable):
        return check_hyperstructure_axioms(obj)
    if isinstance(obj, SemiringTable):
        return check_semiring_axioms(obj)
    if isinstance(obj, FiniteModule):
        return check_module_axioms(obj.ring, obj)
    if isinstance(obj, HModule):
        return check_hmodule_axioms(obj.ring, obj)
    return None


# -- rendering --------------------------------------------------------------

def _fmt_set(mask: int) -> str:
    return "{" + ",".join(str(e) for e in bits(mask)) + "}"


def _rows(table, fmt=str) -> list[str]:
    return [" ".join(fmt(v) for v in row) for row in table]


def _base_name(ring) -> str:
    try:
        if builtin(ring.name) == ring:
            return ring.name
    except KeyError:
        pass
    raise ValueError("only modules over builtin bases can be rendered standalone")


def kind_of(obj) -> str:
    if isinstance(obj, RingTable):
        return "ring"
    if isinstance(obj, SemiringTable):
        return "semiring"
    if isinstance(obj, HyperTable):
        return "hyperring"
    if isinstance(obj, FiniteModule):
        return "module"
    if isinstance(obj, HModule):
        return "hmodule"
    if isinstance(obj, FiniteLattice):
        return "lattice"
    raise TypeError(f"cannot render {type(obj).__name__}")


def render(obj, name: str | None = None, labels=()) -> str:
    """Canonical text form (ASCII, LF line endings)."""
    kind = kind_of(obj)
    name = name or getattr(obj, "name", "") or "X"
    name = re.sub(r"\s+", "_", name)
    head = f"{kind} {name} {obj.size}"
    if kind == "hyperring":
        head += f" {obj.kind}"
    out = [head]
    if not labels and kind == "lattice":
        labels = obj.labels
    if labels:
        out.append("labels " + " ".join(str(l) for l in labels))
    if kind in ("semiring", "ring"):
        out += ["add"] + _rows(obj.add) + ["mul"] + _rows(obj.mul)
    elif kind == "hyperring":
        out += ["add"] + _rows(obj.hyperadd, _fmt_set) + ["mul"] + _rows(obj.mul)
    elif kind in ("module", "hmodule"):
        out.append(f"base {_base_name(obj.ring)}")
        if kind == "module":
            out += ["add"] + _rows(obj.add)
        else:
            out += ["add"] + _rows(obj.hyperadd, _fmt_set)
        forced = obj.ring.size == 2 and obj.act == ((0,) * obj.size, tuple(range(obj.size)))
        if not forced:
            out += ["act"] + _rows(obj.act)
    else:
        out += ["leq"] + _rows(obj.leq, lambda v: str(int(v)))
    return "\n".join(out) + "\n"


def digest(obj) -> str:
    try:
        text = render(obj, name="X")
    except (ValueError, TypeError):
        text = repr(obj)
    return hashlib.sha256(text.encode("ascii")).hexdigest()
