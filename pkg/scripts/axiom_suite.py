"""Run the five-axiom suite over generated corpora and report instance counts.

    python3 scripts/axiom_suite.py --bmod 4 --lattice 4 --kmod 5 --workers 4
"""
import argparse
import time
from dataclasses import dataclass

from pexa import corpus
from pexa.exactness import HyperModules, Lattices, SemiringModules, verify_proto_exact_axioms


@dataclass
class Config:
    bmod: int = 4
    lattice: int = 4
    kmod: int = 5
    workers: int = 1


def main(cfg: Config) -> int:
    runs = [("B-modules", corpus.bmodules(cfg.bmod), SemiringModules()),
            ("lattices", corpus.lattices(cfg.lattice), Lattices()),
            ("K-modules", corpus.kmodules(cfg.kmod), HyperModules())]
    bad = 0
    for name, objs, bk in runs:
        t0 = time.perf_counter()
        rep = verify_proto_exact_axioms(objs, bk, workers=cfg.workers)
        status = "pass" if rep.passed else "FAIL"
        print(f"{name:<10} {len(objs):>3} objects, working set {rep.objects:>3}: {status}  "
              f"{rep.checks}  [{time.perf_counter() - t0:.1f}s]")
        for ax, desc in rep.failures[:5]:
            print(f"    axiom {ax}: {desc}")
        bad += not rep.passed
    return 1 if bad else 0


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    for k in ("bmod", "lattice", "kmod", "workers"):
        ap.add_argument(f"--{k}", type=int, default=getattr(Config, k))
    raise SystemExit(main(Config(**vars(ap.parse_args()))))
