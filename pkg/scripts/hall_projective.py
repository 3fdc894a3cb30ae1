"""Hall numbers and flag counts for projective planes over small prime fields.

    python3 scripts/hall_projective.py --primes 3 5
"""
import argparse
from dataclasses import dataclass, field

from pexa.exactness import hall_constant
from pexa.geometry import flag_count, projective_geometry, projective_space_kmodule
from pexa.hmod import regular_hmodule
from pexa.tables import KRASNER


@dataclass
class Config:
    primes: list = field(default_factory=lambda: [3, 5])


def main(cfg: Config) -> None:
    k = regular_hmodule(KRASNER)
    print(f"{'p':>3} {'size':>5} {'points':>6} {'lines':>5} {'line':>4} {'hall':>5} {'flags':>6}")
    for p in cfg.primes:
        plane, line = projective_space_kmodule(p, 2), projective_space_kmodule(p, 1)
        g = projective_geometry(plane)
        h = hall_constant(plane, line, k).count
        flags = flag_count(plane)
        assert flags == h * g.min_line_size
        print(f"{p:>3} {plane.size:>5} {len(g.points):>6} {len(g.lines):>5} "
              f"{g.min_line_size:>4} {h:>5} {flags:>6}")
    print("hall counts points D with D ~ K and plane/D ~ line; flags count point-line pairs")


if __name__ == "__main__":
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--primes", type=int, nargs="+", default=[3, 5])
    main(Config(**vars(ap.parse_args())))
