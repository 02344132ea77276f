"""Map a six-gate circuit one step at a time and show what each step does.

    python3 demos/01_walkthrough.py [n]
"""

import sys

from sfqmap import (
    MappingConfig,
    assign_stages,
    decompose,
    emit_dot,
    extract_paths,
    insert_splitter_trees,
    parse_blif,
    verify_timing,
)
from sfqmap.dff import brute_force_min_dffs, solve_path
from sfqmap.pipeline import balance

BLIF = """\
.model walk
.inputs a b c
.outputs y z
.names a b t
11 1
.names t u
0 1
.names u c y
01 1
10 1
.names c v
0 1
.names v w
0 1
.names t w z
1- 1
-1 1
.end
"""


def show(sfq, stages, title):
    print(f"\n{title}")
    for v, node in enumerate(sfq.net.nodes):
        fi = ",".join(str(f) for f in node.fanins) or "-"
        print(f"  {v:>2} {node.kind.value:<8} {sfq.category[v].value:<2} "
              f"fanins={fi:<6} stage={stages.sigma[v]} "
              f"(epoch {stages.epoch(v)}, phase {stages.phase(v)})")


def main(n: int = 4) -> None:
    cfg = MappingConfig(n=n)
    net = parse_blif(BLIF)
    sfq = decompose(net, cfg)
    print(f"{net.name}: {len(net.inputs)} inputs, {len(net.outputs)} outputs, n={n}")
    print("OR becomes a merger (AA); AND waits for simultaneous inputs (SA);")
    print("NOT and XOR are clocked (AS) and each costs at least one stage.")

    stages, status, sol = assign_stages(sfq, cfg)
    show(sfq, stages, f"stage assignment ({status.value}, objective {sol.objective_value}):")

    base, base_stages, plans = insert_splitter_trees(sfq, stages)
    for p in plans:
        print(f"  driver {p.driver} fans out through splitters {list(p.splitters)} "
              f"at stages {list(p.stages)}")

    paths = extract_paths(base, base_stages)
    busy = [p for p in paths if not p.trivial]
    print(f"\n{len(paths)} independent paths, {len(busy)} with asynchronous gates")
    for p in busy:
        got = solve_path(p, n).dff_count
        print(f"  path {p.index}: sources {p.sources} sinks {p.sinks} -> {got} DFF(s), "
              f"oracle {brute_force_min_dffs(p, n)}")

    mapped, final, stats = balance(base, base_stages, cfg)
    show(mapped, final, f"after DFF insertion and compaction ({stats.dff_count} DFFs):")
    print("\nverifier:", verify_timing(mapped, final))
    print("\nDOT (pipe into `dot -Tsvg`):\n")
    print(emit_dot(mapped, final))


if __name__ == "__main__":
    main(int(sys.argv[1]) if len(sys.argv) > 1 else 4)
