"""Map a generic network onto SFQ primitives and classify every gate."""

from __future__ import annotations

import enum
from dataclasses import dataclass, field

from .netlist import GateKind, Network, NetworkBuilder, topological_order


class GateCategory(str, enum.Enum):
    AA = "AA"  # asynchronous in, asynchronous out
    AS = "AS"  # asynchronous in, synchronous (clocked) out
    SA = "SA"  # synchronous in, asynchronous out
    IO = "IO"

    def __str__(self) -> str:
        return self.value


OR_STYLES = ("merger", "sa-or")
OBJECTIVE_MODES = ("gate-max", "edge")


@dataclass(frozen=True)
class MappingConfig:
    n: int = 1
    objective_mode: str = "gate-max"
    or_style: str = "merger"
    time_limit: float = 10.0
    node_limit: int | None = 2_000
    seed: int = 0
    cost_table: dict | None = None
    workers: int = 1
    spacing: str = "window"

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError(f"phase count must be an integer >= 1, got {self.n!r}")
        if self.time_limit is not None and not self.time_limit > 0:
            raise ValueError("time limit must be positive")
        if self.objective_mode not in OBJECTIVE_MODES:
            raise ValueError(f"objective mode must be one of {OBJECTIVE_MODES}")
        if self.or_style not in OR_STYLES:
            raise ValueError(f"or_style must be one of {OR_STYLES}")
        if self.spacing not in ("window", "literal"):
            raise ValueError("spacing must be 'window' or 'literal'")


_FIXED = {
    GateKind.PI: GateCategory.IO,
    GateKind.PO: GateCategory.IO,
    GateKind.SPLITTER: GateCategory.AA,
    GateKind.MERGER: GateCategory.AA,
    GateKind.NOT: GateCategory.AS,
    GateKind.XOR: GateCategory.AS,
    GateKind.DFF: GateCategory.AS,
    GateKind.AND: GateCategory.SA,
}


def classify(kind: GateKind, cfg: MappingConfig | None = None) -> GateCategory:
    kind = GateKind(kind)
    if kind == GateKind.OR:
        style = cfg.or_style if cfg is not None else "sa-or"
        return GateCategory.AA if style == "merger" else GateCategory.SA
    try:
        return _FIXED[kind]
    except KeyError:
        raise ValueError(f"{kind.value} is not an SFQ primitive") from None


@dataclass(frozen=True)
class SfqNetwork:
    net: Network
    category: tuple[GateCategory, ...]
    or_style: str = "merger"

    @classmethod
    def from_network(cls, net: Network, or_style: str = "merger") -> "SfqNetwork":
        """Categorize an already-primitive network (OR nodes read as SA-OR)."""
        cats = tuple(
            GateCategory.SA if node.kind == GateKind.OR else classify(node.kind)
            for node in net.nodes
        )
        return cls(net, cats, or_style)

    def __len__(self) -> int:
        return len(self.net)

    def is_clocked(self, v: int) -> bool:
        return self.category[v] == GateCategory.AS

    def by_category(self) -> dict[str, list[int]]:
        groups: dict[str, list[int]] = {c.value: [] for c in GateCategory}
        for v, c in enumerate(self.category):
            groups[c.value].append(v)
        return groups


@dataclass
class _Rewire:
    rep: dict[int, int] = field(default_factory=dict)

    def find(self, v: int) -> int:
        while v in self.rep:
            v = self.rep[v]
        return v


def decompose(net: Network, cfg: MappingConfig | None = None) -> SfqNetwork:
    """Strip DFF/BUF/SPLITTER nodes and choose SFQ primitive kinds.

    Dissolved nodes are bypassed by reconnecting their readers to their fanin.
    Fanout is left multi-valued; splitter trees come after phase assignment.
    """
    cfg = cfg or MappingConfig()
    dissolve = {GateKind.DFF, GateKind.BUF, GateKind.SPLITTER}
    rw = _Rewire()
    for v in topological_order(net):
        node = net.nodes[v]
        if node.kind in dissolve:
            rw.rep[v] = node.fanins[0]
    keep = [v for v in range(len(net)) if v not in rw.rep]
    new_id = {v: i for i, v in enumerate(keep)}
    b = NetworkBuilder(net.name)
    cats = []
    for v in keep:
        node = net.nodes[v]
        kind = node.kind
        if kind == GateKind.OR and cfg.or_style == "merger":
            kind = GateKind.MERGER
        cats.append(classify(kind, cfg))
        b.add(kind, [new_id[rw.find(f)] for f in node.fanins], node.name)
    built = b.build()
    # keep the caller's PI/PO order
    built = Network(
        built.nodes,
        tuple(new_id[i] for i in net.inputs),
        tuple(new_id[o] for o in net.outputs),
        built.name,
    )
    return SfqNetwork(built, tuple(cats), cfg.or_style)
