"""Command line front end: ``pexa <command> ...``.

Exit codes: 0 success, 1 invalid input, 2 property or axiom failure,
3 size bound exceeded.  Output is plain text, or one JSON document with
``--json``; either way identical inputs give byte-identical output.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import corpus, exactness, geometry, hmod, lattice, smod
from .fileformat import (AxiomFailure, ParseError, axiom_report, digest, load, render)
from .search import bits, mask_of
from .tables import BoundExceeded, HyperTable, SemiringTable, builtin

EXTENSIONS = {"semiring": "sr", "ring": "ring", "hyperring": "hr", "module": "mod",
              "hmodule": "hmod", "lattice": "lat"}


class PropertyFailure(Exception):
    """The input is well formed but fails the property being tested."""


class Report:
    def __init__(self, command: str):
        self.command = command
        self.lines: list[str] = []
        self.digests: dict[str, str] = {}
        self.result: dict = {}
        self.witnesses: list = []

    def say(self, line: str = "") -> None:
        self.lines.append(line)

    def emit(self, as_json: bool, out) -> None:
        if as_json:
            doc = {"command": self.command, "input_digests": self.digests,
                   "result": self.result, "witnesses": self.witnesses}
            out.write(json.dumps(doc, sort_keys=True, indent=2) + "\n")
        else:
            out.write("\n".join(self.lines) + ("\n" if self.lines else ""))


def fmt_set(mask: int) -> str:
    return "{" + ",".join(str(e) for e in bits(mask)) + "}"


def parse_subset(text: str, labels=()) -> int:
    toks = [t.strip() for t in text.strip().strip("{}").split(",") if t.strip()]
    out = 0
    for t in toks:
        if t in labels:
            out |= 1 << labels.index(t)
        else:
            try:
                out |= 1 << int(t)
            except ValueError:
                raise ParseError(f"bad subset element {t!r}") from None
    return out


class Context:
    def __init__(self, args, report: Report):
        self.args, self.report = args, report

    def load(self, ref: str, key: str | None = None):
        """A structure from a file path or a builtin name (builtin rings give regular modules)."""
        p = Path(ref)
        if not p.exists():
            try:
                ring = builtin(ref)
            except KeyError:
                raise ParseError(f"no such file or builtin: {ref}") from None
            obj = hmod.regular_hmodule(ring) if isinstance(ring, HyperTable) \
                else smod.regular_module(ring)
            self.report.digests[key or ref] = digest(obj)
            return obj, ()
        sf = load(p)
        if not self.args.skip_check:
            rep = axiom_report(sf.obj)
            if rep is not None and not rep.valid:
                raise AxiomFailure(rep, sf.kind)
        self.report.digests[key or ref] = digest(sf.obj)
        obj = sf.obj
        if isinstance(obj, HyperTable):
            obj = hmod.regular_hmodule(obj)
        elif isinstance(obj, SemiringTable):
            obj = smod.regular_module(obj)
        return obj, sf.labels


# -- commands ---------------------------------------------------------------

def _kind_word(obj) -> str:
    if isinstance(obj, HyperTable):
        return obj.kind
    if isinstance(obj, SemiringTable):
        return "ring" if type(obj).__name__ == "RingTable" else "semiring"
    if isinstance(obj, smod.FiniteModule):
        return f"module over {obj.ring.name or 'R'}"
    if isinstance(obj, hmod.HModule):
        return f"hypermodule over {obj.ring.name or 'H'}"
    if isinstance(obj, lattice.FiniteLattice):
        return "lattice"
    return "morphism"


def cmd_check(ctx: Context):
    args, r = ctx.args, ctx.report
    sf = load(args.file)
    r.digests[args.file] = digest(sf.obj)
    obj = sf.obj
    rep = axiom_report(obj)
    word = _kind_word(obj)
    if isinstance(obj, (smod.ModuleMorphism, hmod.HMorphism, lattice.LatticeMorphism)):
        ok = obj.is_valid()
        r.result = {"valid": ok, "kind": "morphism"}
        r.say("valid morphism" if ok else "invalid morphism")
        return 0 if ok else 2
    if rep is None or rep.valid:
        extra = ""
        if isinstance(obj, SemiringTable) and obj.idempotent:
            extra = " (idempotent)"
        r.result = {"valid": True, "kind": word, "size": obj.size}
        r.say(f"valid {word}{extra}")
        return 0
    r.result = {"valid": False, "kind": word, "size": obj.size}
    r.witnesses = [[name, list(w)] for name, w in rep.violations]
    r.say(f"invalid {word}")
    for name, w in rep.violations:
        r.say(f"  {name}: witness {tuple(w)}")
    return 2


def cmd_submodules(ctx: Context):
    obj, _ = ctx.load(ctx.args.file)
    if isinstance(obj, smod.FiniteModule):
        masks = smod.enumerate_submodules(obj, saturated_only=ctx.args.saturated)
    elif isinstance(obj, hmod.HModule):
        masks = hmod.enumerate_hsubmodules(obj)
    else:
        raise ParseError("submodules needs a module or hmodule")
    what = "saturated submodules" if ctx.args.saturated and isinstance(obj, smod.FiniteModule) \
        else "submodules"
    ctx.report.result = {"count": len(masks), "submodules": masks}
    ctx.report.say(f"{len(masks)} {what}")
    for m in masks:
        ctx.report.say(f"  {fmt_set(m)}")
    return 0


def cmd_quotient(ctx: Context):
    obj, labels = ctx.load(ctx.args.file)
    mask = parse_subset(ctx.args.by, labels)
    if isinstance(obj, smod.FiniteModule):
        if not smod.is_submodule(obj, mask):
            raise PropertyFailure(f"{fmt_set(mask)} is not a submodule")
        q = smod.quotient_module(obj, mask)
    elif isinstance(obj, hmod.HModule):
        if not hmod.is_hsubmodule(obj, mask):
            raise PropertyFailure(f"{fmt_set(mask)} is not a submodule")
        q = hmod.quotient_hmodule(obj, mask)
    else:
        raise ParseError("quotient needs a module or hmodule")
    text = render(q.quotient, name="Q")
    ctx.report.result = {"class_of": list(q.class_of), "size": q.quotient.size, "quotient": text}
    ctx.report.say("class_of " + " ".join(map(str, q.class_of)))
    ctx.report.say(text.rstrip("\n"))
    return 0


def _classify(f) -> str:
    if isinstance(f, smod.ModuleMorphism):
        return smod.classify_morphism(f)
    if isinstance(f, hmod.HMorphism):
        return hmod.classify_hmorphism(f)
    return lattice.classify_lattice_morphism(f)


def _load_morphism(ctx: Context, ref: str, key: str):
    f, _ = ctx.load(ref, key)
    if not isinstance(f, (smod.ModuleMorphism, hmod.HMorphism, lattice.LatticeMorphism)):
        raise ParseError(f"{ref} is not a morphism file")
    if not f.is_valid():
        raise PropertyFailure(f"{ref}: map is not a homomorphism")
    return f


def cmd_classify(ctx: Context):
    f = _load_morphism(ctx, ctx.args.hom, "hom")
    cls = _classify(f)
    ctx.report.result = {"classification": cls}
    ctx.report.say(cls)
    if isinstance(f, hmod.HMorphism):
        w = f.strict_witness()
        ctx.report.result["strict"] = w is None
        ctx.report.say("strict" if w is None else f"not strict: witness {w}")
        if w is not None:
            ctx.report.witnesses = [list(w)]
    return 0


def cmd_complete(ctx: Context):
    f = _load_morphism(ctx, ctx.args.f, "f")
    g = _load_morphism(ctx, ctx.args.g, "g")
    bk = exactness.backend_for(f.source)
    try:
        sq = bk.complete(f, g, ctx.args.direction)
    except ValueError as exc:
        raise PropertyFailure(str(exc)) from None
    if ctx.args.direction == "pullback":
        corner, edges = sq.i.source, {"i": sq.i.map, "j": sq.j.map}
    else:
        corner, edges = sq.i2.target, {"i2": sq.i2.map, "j2": sq.j2.map}
    text = render(corner, name="X")
    ok = sq.commutes()
    ctx.report.result = {"commutes": ok, "corner": text,
                         "maps": {k: list(v) for k, v in edges.items()}}
    ctx.report.say(f"{ctx.args.direction} corner ({corner.size} elements):")
    ctx.report.say(text.rstrip("\n"))
    for k, v in edges.items():
        ctx.report.say(f"{k} " + " ".join(map(str, v)))
    ctx.report.say("square commutes" if ok else "square does not commute")
    return 0 if ok else 2


def cmd_exact(ctx: Context):
    i = _load_morphism(ctx, ctx.args.i, "i")
    j = _load_morphism(ctx, ctx.args.j, "j")
    ok, why = exactness.is_short_exact(exactness.ShortExactSequence(i, j))
    ctx.report.result = {"exact": ok, "diagnosis": why}
    ctx.report.say(why if ok else f"not exact: {why}")
    return 0 if ok else 2


def _backend(cat: str | None, obj):
    if cat is None:
        return exactness.backend_for(obj)
    if cat in ("bmod", "smod"):
        return exactness.SemiringModules(getattr(obj, "ring", None) or builtin("B"))
    if cat in ("kmod", "hmod"):
        return exactness.HyperModules(getattr(obj, "ring", None) or builtin("K"))
    return exactness.Lattices()


def _as_category(obj, bk):
    if isinstance(bk, exactness.Lattices) and isinstance(obj, smod.FiniteModule):
        return lattice.module_lattice(obj)
    return obj


def cmd_ext(ctx: Context):
    a, _ = ctx.load(ctx.args.A, "A")
    c, _ = ctx.load(ctx.args.C, "C")
    bk = _backend(ctx.args.cat, a)
    a, c = _as_category(a, bk), _as_category(c, bk)
    classes = exactness.ext_enumerate(c, a, ctx.args.max_size, bk, workers=ctx.args.workers)
    r = ctx.report
    r.result = {"count": len(classes), "classes": [
        {"middle_size": bk.size(e.middle), "middle": getattr(e.middle, "name", ""),
         "i": list(e.representative.i.map), "j": list(e.representative.j.map),
         "sequences": len(e.members)} for e in classes]}
    r.say(f"{len(classes)} extension classes with middle of size <= {ctx.args.max_size}")
    for k, e in enumerate(classes):
        r.say(f"  [{k}] middle {getattr(e.middle, 'name', '') or '-'} size {bk.size(e.middle)}"
              f"  i={list(e.representative.i.map)} j={list(e.representative.j.map)}"
              f"  sequences={len(e.members)}")
    if not classes:
        r.say("  (no middle within the size bound)")
    return 0


def cmd_hall(ctx: Context):
    e, _ = ctx.load(ctx.args.E, "E")
    a, _ = ctx.load(ctx.args.A, "A")
    b, _ = ctx.load(ctx.args.B, "B")
    res = exactness.hall_constant(e, a, b)
    ctx.report.result = {"count": res.count}
    ctx.report.witnesses = list(res.witnesses)
    ctx.report.say(str(res.count))
    for w in res.witnesses:
        ctx.report.say(f"  {fmt_set(w)}")
    if isinstance(e, hmod.HModule) and geometry.is_kmodule(e):
        flags = geometry.flag_count(e)
        ctx.report.result["flag_count"] = flags
        ctx.report.say(f"flags of the associated geometry: {flags}")
    return 0


def cmd_lattice_of(ctx: Context):
    m, _ = ctx.load(ctx.args.file)
    if not isinstance(m, smod.FiniteModule):
        raise ParseError("lattice-of needs a B-module")
    s = lattice.saturated_submodule_lattice(m)
    text = render(s, name=f"S_{getattr(m, 'name', '') or 'M'}",
                  labels=tuple(fmt_set(x) for x in s.labels))
    ctx.report.result = {"size": s.size, "lattice": text}
    ctx.report.say(text.rstrip("\n"))
    return 0


def cmd_module_of(ctx: Context):
    lat, _ = ctx.load(ctx.args.file)
    if not isinstance(lat, lattice.FiniteLattice):
        raise ParseError("module-of needs a lattice")
    m = lattice.compact_elements_module(lat)
    text = render(m, name="Lc")
    ctx.report.result = {"size": m.size, "module": text}
    ctx.report.say(text.rstrip("\n"))
    return 0


def cmd_geometric(ctx: Context):
    lat, _ = ctx.load(ctx.args.file)
    if isinstance(lat, smod.FiniteModule):
        lat = lattice.module_lattice(lat)
    if not isinstance(lat, lattice.FiniteLattice):
        raise ParseError("geometric needs a lattice")
    rep = lattice.is_geometric(lat)
    ctx.report.result = {"geometric": rep.geometric, "jordan_dedekind": rep.jordan_dedekind,
                         "semimodular": rep.semimodular, "atomistic": rep.atomistic}
    ctx.report.witnesses = [[k, list(v)] for k, v in sorted(rep.witnesses.items())]
    ctx.report.say("geometric" if rep.geometric else "not geometric")
    for k in ("jordan_dedekind", "semimodular", "atomistic"):
        ok = getattr(rep, k)
        wit = "" if ok else f" (witness {rep.witnesses[k]})"
        ctx.report.say(f"  {k}: {'yes' if ok else 'no'}{wit}")
    return 0


def _kmodule(ctx: Context):
    m, _ = ctx.load(ctx.args.file)
    try:
        ok = isinstance(m, hmod.HModule) and geometry.is_kmodule(m)
    except geometry.NotAKModule:
        ok = False
    if not ok:
        raise PropertyFailure("input is not a K-module")
    return m


def cmd_geometry(ctx: Context):
    m = _kmodule(ctx)
    g = geometry.projective_geometry(m)
    ctx.report.result = {"points": len(g.points), "lines": [list(l) for l in g.lines],
                         "min_line_size": g.min_line_size, "four_point_lines": g.cc_bound}
    ctx.report.say(f"{len(g.points)} points, {len(g.lines)} lines, "
                   f"min line size {g.min_line_size}")
    ctx.report.say(f"every line has at least four points: {'yes' if g.cc_bound else 'no'}")
    for l in g.lines:
        ctx.report.say("  line " + " ".join(map(str, l)))
    return 0


def cmd_flags(ctx: Context):
    m = _kmodule(ctx)
    n = geometry.flag_count(m)
    ctx.report.result = {"flags": n}
    ctx.report.say(str(n))
    return 0


def _family(name: str, args) -> list:
    if name == "bmod":
        return corpus.bmodules(args.max_size)
    if name == "kmod":
        return corpus.kmodules(args.max_size)
    if name == "lattice":
        return corpus.lattices(args.max_size)
    if name == "en":
        return [geometry.en_module(args.n)]
    if name == "proj":
        return [geometry.projective_space_kmodule(args.p, args.d)]
    raise ParseError(f"unknown family {name!r}")


def cmd_axioms(ctx: Context):
    args = ctx.args
    if args.corpus:
        d = Path(args.corpus)
        if not d.is_dir():
            raise ParseError(f"not a directory: {args.corpus}")
        objs = []
        for p in sorted(d.iterdir()):
            if p.suffix.lstrip(".") in EXTENSIONS.values():
                obj, _ = ctx.load(str(p), p.name)
                if args.max_size is None or obj.size <= args.max_size:
                    objs.append(obj)
    else:
        if args.max_size is None:
            raise ParseError("--family needs --max-size")
        objs = _family(args.family, args)
    if not objs:
        raise ParseError("empty corpus")
    bk = _backend(args.cat, objs[0])
    objs = [_as_category(o, bk) for o in objs]
    rep = exactness.verify_proto_exact_axioms(objs, bk, workers=args.workers)
    ctx.report.result = {"passed": rep.passed, "objects": rep.objects,
                         "checks": rep.checks,
                         "axioms": {k: rep.axiom_passed(k) for k in "12345"}}
    ctx.report.witnesses = [list(f) for f in rep.failures]
    ctx.report.say(f"{len(objs)} corpus objects, working set of {rep.objects}")
    for k in "12345":
        ctx.report.say(f"axiom {k}: {'pass' if rep.axiom_passed(k) else 'FAIL'} "
                       f"({rep.checks.get(k, 0)} instances)")
    for ax, desc in rep.failures[:20]:
        ctx.report.say(f"  axiom {ax}: {desc}")
    return 0 if rep.passed else 2


def cmd_gen(ctx: Context):
    args = ctx.args
    if args.family in ("bmod", "kmod", "lattice") and args.max_size is None:
        raise ParseError("--family bmod/kmod/lattice needs --max-size")
    if args.family == "en" and args.n is None:
        raise ParseError("--family en needs --n")
    if args.family == "proj" and (args.p is None or args.d is None):
        raise ParseError("--family proj needs --p and --d")
    objs = _family(args.family, args)
    texts = []
    for k, obj in enumerate(objs):
        name = getattr(obj, "name", "") or f"{args.family}{k}"
        texts.append((name, obj, render(obj, name=name)))
    ctx.report.result = {"count": len(texts), "names": [t[0] for t in texts]}
    if args.out:
        out = Path(args.out)
        out.mkdir(parents=True, exist_ok=True)
        from .fileformat import kind_of
        for name, obj, text in texts:
            (out / f"{name}.{EXTENSIONS[kind_of(obj)]}").write_text(text)
        ctx.report.say(f"wrote {len(texts)} structures to {args.out}")
    else:
        ctx.report.say("\n".join(t[2] for t in texts).rstrip("\n"))
    return 0


# -- argument parsing -------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="emit one JSON document")
    common.add_argument("--workers", type=int, default=1, help="worker processes")
    common.add_argument("--skip-check", action="store_true",
                        help="do not verify axioms of input structures")

    p = argparse.ArgumentParser(prog="pexa", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    def add(name, fn, help_):
        sp = sub.add_parser(name, parents=[common], help=help_)
        sp.set_defaults(fn=fn)
        return sp

    add("check", cmd_check, "verify the axioms of a structure file").add_argument("file")
    sp = add("submodules", cmd_submodules, "list submodules")
    sp.add_argument("file")
    sp.add_argument("--saturated", action="store_true")
    sp = add("quotient", cmd_quotient, "quotient by a submodule")
    sp.add_argument("file")
    sp.add_argument("--by", required=True, help="subset such as 0,1 or {0,1}")
    add("classify", cmd_classify, "classify a morphism").add_argument("--hom", required=True)
    sp = add("complete", cmd_complete, "complete a square")
    sp.add_argument("--direction", choices=("pullback", "pushout"), required=True)
    sp.add_argument("--f", required=True, help="mono (i2 for pullback, i for pushout)")
    sp.add_argument("--g", required=True, help="epi (j2 for pullback, j for pushout)")
    sp = add("exact", cmd_exact, "test a short exact sequence")
    sp.add_argument("--i", required=True)
    sp.add_argument("--j", required=True)
    sp = add("ext", cmd_ext, "enumerate extension classes")
    sp.add_argument("--A", required=True)
    sp.add_argument("--C", required=True)
    sp.add_argument("--max-size", type=int, required=True)
    sp.add_argument("--cat", choices=("bmod", "kmod", "lattice"))
    sp = add("hall", cmd_hall, "Hall number of E over (A, B)")
    for k in ("E", "A", "B"):
        sp.add_argument(f"--{k}", required=True)
    add("lattice-of", cmd_lattice_of, "lattice of saturated submodules").add_argument("file")
    add("module-of", cmd_module_of, "B-module of a lattice").add_argument("file")
    add("geometric", cmd_geometric, "geometric lattice test").add_argument("file")
    add("geometry", cmd_geometry, "incidence geometry of a K-module").add_argument("file")
    add("flags", cmd_flags, "count flags of a K-module").add_argument("file")
    sp = add("axioms", cmd_axioms, "verify the proto-exact axioms over a corpus")
    src = sp.add_mutually_exclusive_group(required=True)
    src.add_argument("--corpus", help="directory of structure files")
    src.add_argument("--family", choices=("bmod", "kmod", "lattice"))
    sp.add_argument("--max-size", type=int)
    sp.add_argument("--cat", choices=("bmod", "kmod", "lattice"))
    sp = add("gen", cmd_gen, "generate structures")
    sp.add_argument("--family", choices=("bmod", "kmod", "lattice", "en", "proj"), required=True)
    sp.add_argument("--max-size", type=int)
    sp.add_argument("--n", type=int)
    sp.add_argument("--p", type=int)
    sp.add_argument("--d", type=int)
    sp.add_argument("--out")
    return p


def run_command(argv, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code else 0
    report = Report(args.command)
    ctx = Context(args, report)
    try:
        code = args.fn(ctx)
    except ParseError as exc:
        err.write(f"error: {exc}\n")
        return 1
    except AxiomFailure as exc:
        err.write(f"axiom failure: {exc}\n")
        return 2
    except PropertyFailure as exc:
        err.write(f"property failure: {exc}\n")
        return 2
    except BoundExceeded as exc:
        err.write(f"bound exceeded: {exc}\n")
        return 3
    except (TypeError, ValueError) as exc:
        err.write(f"error: {exc}\n")
        return 1
    report.emit(args.json, out)
    return code


def main(argv=None) -> int:
    return run_command(sys.argv[1:] if argv is None else argv)


if __name__ == "__main__":
    sys.exit(main())
