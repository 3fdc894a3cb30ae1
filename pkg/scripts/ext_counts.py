"""Count extension classes of B by B and K by K as the middle grows.

    python3 scripts/ext_counts.py --max-b 8 --max-k 9
"""
import argparse
import time
from dataclasses import dataclass

from pexa.exactness import ext_enumerate
from pexa.hmod import regular_hmodule
from pexa.smod import regular_module
from pexa.tables import BOOLEAN, KRASNER


@dataclass
class Config:
    max_b: int = 8
    max_k: int = 9
    workers: int = 1


def main(cfg: Config) -> None:
    b, k = regular_module(BOOLEAN), regular_hmodule(KRASNER)
    for name, obj, top in (("B", b, cfg.max_b), ("K", k, cfg.max_k)):
        print(f"Ext({name},{name}) by middle size bound")
        prev = None
        for bound in range(obj.size, top + 1):
            t0 = time.perf_counter()
            classes = ext_enumerate(obj, obj, bound, workers=cfg.workers)
            sizes = sorted(c.middle.size for c in classes)
            new = sum(1 for s in sizes if s == bound)
            grew = "" if prev is None else ("  (+%d)" % (len(classes) - prev))
            print(f"  <= {bound}: {len(classes):4d} classes, {new} with middle of size "
                  f"{bound}{grew}  [{time.perf_counter() - t0:.2f}s]")
            prev = len(classes)


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-b", type=int, default=Config.max_b)
    ap.add_argument("--max-k", type=int, default=Config.max_k)
    ap.add_argument("--workers", type=int, default=Config.workers)
    main(Config(**vars(ap.parse_args())))
