"""Independent timing verification, JJ accounting and artifact emission.

The checker classifies gates from their kinds alone and walks the network
with its own propagation; it does not reuse the phase model, the site ranges
or the path extraction used to build a mapping.
"""

from __future__ import annotations

import json
import os
from dataclasses import asdict, dataclass, field
from importlib import resources
from typing import Mapping

from .decompose import GateCategory, SfqNetwork
from .netlist import (
    GateKind,
    Network,
    NetlistError,
    ValidationReport,
    network_to_dict,
    parse_json_netlist,
    topological_order,
    validate,
)
from .phase import StageAssignment

_ASYNC = {GateKind.SPLITTER, GateKind.MERGER}
_CLOCKED = {GateKind.NOT, GateKind.XOR, GateKind.DFF}
_SYNC_IN = {GateKind.AND, GateKind.OR}


def _is_source(kind: GateKind) -> bool:
    """Elements that release a pulse at their own stage."""
    return kind in _CLOCKED or kind in _SYNC_IN or kind == GateKind.PI


def _is_sink(kind: GateKind) -> bool:
    return kind in _CLOCKED or kind in _SYNC_IN or kind == GateKind.PO


def verify_timing(sfq: SfqNetwork | Network, stages: StageAssignment,
                  n: int | None = None) -> ValidationReport:
    net = sfq.net if isinstance(sfq, SfqNetwork) else sfq
    n = stages.n if n is None else n
    report = validate(net)
    if len(stages.sigma) != len(net):
        report.add("stages", None, f"{len(stages.sigma)} stages for {len(net)} nodes")
        return report
    if not report.ok:
        return report
    sg = stages.sigma
    kinds = [node.kind for node in net.nodes]
    for v, k in enumerate(kinds):
        if k not in _ASYNC | _CLOCKED | _SYNC_IN | {GateKind.PI, GateKind.PO}:
            report.add("kind", v, f"{k.value} is not an SFQ primitive")
        if sg[v] < 0:
            report.add("negative", v, f"stage {sg[v]} is negative")

    # (1) edge ordering
    for u, v, _pin in net.edges():
        strict = kinds[v] in _CLOCKED and kinds[u] not in _ASYNC
        if sg[v] < sg[u] + strict:
            rel = "<" if strict else "<="
            report.add("edge", v, f"needs stage({u})={sg[u]} {rel} stage({v})={sg[v]}")

    # (6) fanout legality
    for v, outs in enumerate(net.fanouts):
        if kinds[v] == GateKind.SPLITTER:
            if len(outs) != 2:
                report.add("fanout", v, f"splitter drives {len(outs)} pins, expected 2")
        elif len(outs) > 1:
            report.add("fanout", v, f"{kinds[v].value} drives {len(outs)} pins")

    # (2)+(7) spacing between consecutive clocked elements through async logic:
    # lowest/highest stage of the clocked elements reaching each node's output
    low = [0] * len(net)
    high = [0] * len(net)
    for v in topological_order(net):
        k = kinds[v]
        if _is_source(k):
            low[v] = high[v] = sg[v]
            reach_lo = [low[f] for f in net.nodes[v].fanins]
            reach_hi = [high[f] for f in net.nodes[v].fanins]
        elif k in _ASYNC:
            low[v] = min(low[f] for f in net.nodes[v].fanins)
            high[v] = max(high[f] for f in net.nodes[v].fanins)
            continue
        else:  # PO
            reach_lo = [low[f] for f in net.nodes[v].fanins]
            reach_hi = [high[f] for f in net.nodes[v].fanins]
        if not _is_sink(k) or not reach_lo:
            continue
        if sg[v] - min(reach_lo) > n:
            report.add("spacing", v, f"stage {sg[v]} is more than {n} after a clocked "
                       f"predecessor at {min(reach_lo)}")
        if k in _CLOCKED and sg[v] - max(reach_hi) < 1:
            report.add("order", v, f"stage {sg[v]} does not follow a clocked predecessor "
                       f"at {max(reach_hi)}")

    # (3) SA gates and POs are fed directly by clocked elements at their stage
    for v, k in enumerate(kinds):
        if k in _SYNC_IN:
            for f in net.nodes[v].fanins:
                ok = (kinds[f] in _CLOCKED or kinds[f] == GateKind.PI) and sg[f] == sg[v]
                if not ok:
                    report.add("SA predecessor", v, f"fanin {f} ({kinds[f].value}@{sg[f]}) is not "
                               f"a clocked element at stage {sg[v]}")
        elif k == GateKind.PO:
            f = net.nodes[v].fanins[0]
            if not (_is_source(kinds[f]) and sg[f] == sg[v]):
                report.add("PO predecessor", v, f"driver {f} ({kinds[f].value}@{sg[f]}) is not "
                           f"a clocked element at stage {sg[v]}")

    # (4) PI epoch, (5) PO epoch
    for i in net.inputs:
        if not 0 <= sg[i] <= n - 1:
            report.add("pi-epoch", i, f"PI stage {sg[i]} outside epoch 0")
    epochs = sorted({sg[o] // n for o in net.outputs})
    if len(epochs) > 1:
        report.add("po-epoch", None, f"PO epochs differ: {epochs}")
    return report


# ---------------------------------------------------------------------------
# costs


class CostTableError(KeyError):
    pass


CostTable = Mapping[str, int]
COST_TABLE_ENV = "SFQMAP_COST_TABLE"


def load_cost_table(path: str | os.PathLike | None = None) -> dict[str, int]:
    """Read ``{kind: jj}``; keys starting with ``_`` are comments.

    Without a path, ``$SFQMAP_COST_TABLE`` is consulted, then the bundled
    placeholder table.
    """
    path = path or os.environ.get(COST_TABLE_ENV)
    if path:
        with open(path, encoding="utf-8") as fh:
            raw = json.load(fh)
    else:
        raw = json.loads(resources.files("sfqmap.data").joinpath("default_costs.json").read_text())
    table = {}
    for key, val in raw.items():
        if key.startswith("_"):
            continue
        kind = GateKind(key.upper()).value
        if not isinstance(val, int) or isinstance(val, bool) or val < 0:
            raise ValueError(f"cost of {key} must be a non-negative integer")
        table[kind] = val
    return table


def count_jjs(sfq: SfqNetwork | Network, costs: CostTable) -> int:
    net = sfq.net if isinstance(sfq, SfqNetwork) else sfq
    total = 0
    for node in net.nodes:
        key = node.kind.value
        if key not in costs:
            raise CostTableError(f"cost table has no entry for {key}")
        total += costs[key]
    return total


# ---------------------------------------------------------------------------
# report


@dataclass
class MappingReport:
    circuit: str
    n: int
    gate_counts: dict[str, int]
    dff_count: int
    splitter_count: int
    jj_count: int
    epoch_depth: int
    phase_status: str
    dff_status: str
    seed: int
    objective_mode: str = "gate-max"
    or_style: str = "merger"
    phase_objective: int | None = None
    verified: bool = True
    violations: int = 0
    paths: int = 0
    dff_sites: int = 0
    timings: dict[str, float] = field(default_factory=dict)

    @property
    def throughput_factor(self) -> str:
        return f"1/{self.n}"

    def to_dict(self) -> dict:
        d = asdict(self)
        d.pop("timings")
        d["throughput_factor"] = self.throughput_factor
        return d


def build_report(sfq: SfqNetwork, stages: StageAssignment, costs: CostTable, **fields
                 ) -> MappingReport:
    counts = sfq.net.count_kinds()
    depth = max((stages.sigma[o] // stages.n for o in sfq.net.outputs), default=0)
    return MappingReport(
        circuit=sfq.net.name,
        n=stages.n,
        gate_counts=counts,
        dff_count=counts.get(GateKind.DFF.value, 0),
        splitter_count=counts.get(GateKind.SPLITTER.value, 0),
        jj_count=count_jjs(sfq, costs),
        epoch_depth=depth,
        **fields,
    )


def emit_report_json(report: MappingReport) -> str:
    """Canonical JSON: sorted keys, integers and strings only."""
    return json.dumps(report.to_dict(), sort_keys=True, indent=2) + "\n"


# ---------------------------------------------------------------------------
# DOT


_SHAPES = {
    GateCategory.AS: "box",
    GateCategory.SA: "box, style=rounded",
    GateCategory.AA: "ellipse",
    GateCategory.IO: "plaintext",
}


def emit_dot(sfq: SfqNetwork, stages: StageAssignment) -> str:
    net, n = sfq.net, stages.n
    lines = [f'digraph "{net.name}" {{', "  rankdir=LR;"]
    by_stage: dict[int, list[int]] = {}
    for v in range(len(net)):
        by_stage.setdefault(stages.sigma[v], []).append(v)
    for v, node in enumerate(net.nodes):
        s = stages.sigma[v]
        label = f"{node.kind.value}@{s} ({s // n}.{s % n})"
        lines.append(f'  n{v} [label="{label}", shape={_SHAPES[sfq.category[v]]}];')
    for s in sorted(by_stage):
        members = " ".join(f"n{v};" for v in by_stage[s])
        lines.append(f"  {{ rank=same; {members} }}")
    for u, v, _pin in net.edges():
        lines.append(f"  n{u} -> n{v};")
    lines.append("}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# annotated netlist


def emit_netlist(sfq: SfqNetwork, stages: StageAssignment) -> str:
    doc = network_to_dict(sfq.net, stages, {"or_style": sfq.or_style})
    return json.dumps(doc, sort_keys=True, indent=1) + "\n"


def parse_annotated(text: str) -> tuple[SfqNetwork, StageAssignment]:
    """Inverse of :func:`emit_netlist`; every gate must carry its stage."""
    net, doc = parse_json_netlist(text)
    if "phases" not in doc:
        raise NetlistError("netlist carries no phase count ('phases')")
    n = int(doc["phases"])
    if n < 1:
        raise NetlistError("phase count must be >= 1")
    by_id = {g["id"]: g for g in doc["gates"]}
    sigma = []
    for v in range(len(net)):
        g = by_id[v]
        if "stage" not in g:
            raise NetlistError(f"gate {v} has no stage annotation")
        sigma.append(int(g["stage"]))
    for node in net.nodes:
        if node.kind == GateKind.BUF:
            raise NetlistError(f"gate {node.id}: BUF is not an SFQ primitive")
    sfq = SfqNetwork.from_network(net, doc.get("or_style", "merger"))
    return sfq, StageAssignment(n, tuple(sigma))
