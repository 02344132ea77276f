"""How many DFFs does one clocked-to-clocked edge of length q need with n phases?

Each DFF may sit at most n stages after the previous clocked element, so k
DFFs cover a gap of at most n*(k+1). The table compares that closed form with
the exhaustive oracle and the constraint model.

    python3 demos/02_straight_line.py
"""

import math

from sfqmap.dff import brute_force_min_dffs, solve_path, straight_path

Q_MAX, N_MAX = 16, 8


def main() -> None:
    print("rows: gap q, columns: phases n; entries: DFFs (solver = oracle = closed form)")
    print("q\\n " + "".join(f"{n:>4}" for n in range(1, N_MAX + 1)))
    for q in range(1, Q_MAX + 1):
        row = []
        for n in range(1, N_MAX + 1):
            path = straight_path(q)
            got = solve_path(path, n).dff_count
            assert got == brute_force_min_dffs(path, n) == math.ceil(q / n) - 1
            row.append(got)
        print(f"{q:>3} " + "".join(f"{k:>4}" for k in row))
    print("\nfloor(q/n) would overcount whenever n divides q: q=8, n=4 needs one DFF, not two.")


if __name__ == "__main__":
    main()
