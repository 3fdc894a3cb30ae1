"""Finite lattices up to isomorphism, with how many are geometric.

    python3 scripts/lattice_census.py --max-size 8
"""
import argparse
import time
from dataclasses import dataclass

from pexa import corpus
from pexa.lattice import is_geometric


@dataclass
class Config:
    max_size: int = 8


def main(cfg: Config) -> None:
    print(f"{'n':>2} {'lattices':>8} {'geometric':>9} {'JD':>4}  time")
    for n in range(1, cfg.max_size + 1):
        t0 = time.perf_counter()
        lats = corpus.lattices_of_size(n)
        reps = [is_geometric(l) for l in lats]
        geo = sum(r.geometric for r in reps)
        jd = sum(r.jordan_dedekind for r in reps)
        print(f"{n:>2} {len(lats):>8} {geo:>9} {jd:>4}  {time.perf_counter() - t0:.2f}s")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--max-size", type=int, default=Config.max_size)
    main(Config(**vars(ap.parse_args())))
