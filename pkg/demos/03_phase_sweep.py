"""DFF count versus phase count over the bundled benchmarks.

    python3 demos/03_phase_sweep.py [circuit ...]

Each circuit is mapped at n = 1, 2, 4, 7; the last column set is the DFF
count normalized to single-phase clocking, and the footer gives its
geometric mean over circuits that need DFFs at n = 1.
"""

import math
import sys
import time

from sfqmap import MappingConfig, benchmarks, map_network

PHASES = (1, 2, 4, 7)


def main(names: list[str]) -> None:
    names = names or benchmarks.names()
    ratios = {n: [] for n in PHASES}
    head = "".join(f"{'n=' + str(n):>8}" for n in PHASES)
    print(f"{'circuit':<10}{head}   normalized            time")
    for name in names:
        net = benchmarks.load(name)
        memo: dict = {}
        t0 = time.perf_counter()
        counts = {n: map_network(net, MappingConfig(n=n), memo=memo).dff_count for n in PHASES}
        dt = time.perf_counter() - t0
        norm = ""
        if counts[1]:
            for n in PHASES:
                ratios[n].append(counts[n] / counts[1])
            norm = " ".join(f"{counts[n] / counts[1]:.2f}" for n in PHASES)
        print(f"{name:<10}" + "".join(f"{counts[n]:>8}" for n in PHASES) + f"   {norm:<20} {dt:6.1f}s")
    geo = []
    for n in PHASES:
        r = ratios[n]
        geo.append(math.exp(sum(map(math.log, r)) / len(r)) if r and min(r) > 0 else 0.0)
    print(f"{'geomean':<10}{'':32}   " + " ".join(f"{g:.2f}" for g in geo))


if __name__ == "__main__":
    main(sys.argv[1:])
