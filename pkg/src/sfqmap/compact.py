"""Lower every movable node to the earliest stage its neighbours allow.

After DFFs are placed, nodes often sit later than they need to. Pulling
them down never invalidates a mapping (each move respects every local
timing rule) and leaves each node pinned by some constraint, so the result
contains no slack that a single-stage change could absorb.

SA gates, POs and the clocked elements feeding them directly are pinned by
their equal-stage requirement and never move.

Lowering nodes can leave a DFF with nothing to bridge; ``prune_dffs`` drops
such DFFs and ``settle`` alternates the two passes until neither changes
anything.
"""

from __future__ import annotations

from .decompose import GateCategory, SfqNetwork
from .netlist import GateKind, Network, Node, topological_order
from .phase import StageAssignment


def _downstream_sinks(sfq: SfqNetwork) -> list[list[int]]:
    """For each node, the clocked sinks its output reaches through AA gates only."""
    net, cat = sfq.net, sfq.category
    order = topological_order(net)
    reach: list[frozenset[int]] = [frozenset()] * len(net)
    for v in reversed(order):
        acc: set[int] = set()
        for w, _pin in net.fanouts[v]:
            if cat[w] == GateCategory.AA:
                acc |= reach[w]
            else:
                acc.add(w)
        reach[v] = frozenset(acc)
    return [sorted(r) for r in reach]


def compact_stages(sfq: SfqNetwork, stages: StageAssignment, max_passes: int = 1000
                   ) -> StageAssignment:
    net, cat, n = sfq.net, sfq.category, stages.n
    sg = list(stages.sigma)
    order = topological_order(net)
    kinds = [node.kind for node in net.nodes]
    is_src = [cat[v] in (GateCategory.AS, GateCategory.SA) or kinds[v] == GateKind.PI
              for v in range(len(net))]
    pinned = [False] * len(net)
    for v in range(len(net)):
        if cat[v] == GateCategory.SA or kinds[v] == GateKind.PO:
            pinned[v] = True
            for f in net.nodes[v].fanins:
                pinned[f] = True
    sinks = _downstream_sinks(sfq)
    high = [0] * len(net)  # latest clocked source reaching a node's output

    for _ in range(max_passes):
        changed = False
        for v in order:
            fanins = net.nodes[v].fanins
            if not pinned[v]:
                lb = 0
                clocked_v = cat[v] == GateCategory.AS
                for f in fanins:
                    lb = max(lb, sg[f] + (clocked_v and cat[f] != GateCategory.AA))
                    if clocked_v:
                        lb = max(lb, (sg[f] if is_src[f] else high[f]) + 1)
                if is_src[v]:
                    for t in sinks[v]:
                        lb = max(lb, sg[t] - n)
                if lb < sg[v]:
                    sg[v] = lb
                    changed = True
            if is_src[v]:
                high[v] = sg[v]
            elif fanins:
                high[v] = max(sg[f] if is_src[f] else high[f] for f in fanins)
        if not changed:
            break
    return StageAssignment(n, tuple(sg))


def prune_dffs(sfq: SfqNetwork, stages: StageAssignment
               ) -> tuple[SfqNetwork, StageAssignment, int]:
    """Bypass every DFF whose reader can take the DFF's fanin directly.

    DFFs are visited in topological order. Removing one only lowers the
    earliest clocked source seen downstream, so a DFF kept by this pass stays
    necessary after later removals and one pass suffices.
    """
    net, cat, n = sfq.net, sfq.category, stages.n
    sg = stages.sigma
    kinds = [node.kind for node in net.nodes]
    is_src = [cat[v] in (GateCategory.AS, GateCategory.SA) or kinds[v] == GateKind.PI
              for v in range(len(net))]
    sinks = _downstream_sinks(sfq)
    rep: dict[int, int] = {}
    low = [0] * len(net)  # earliest clocked source reaching a node's output

    def find(v: int) -> int:
        while v in rep:
            v = rep[v]
        return v

    for v in topological_order(net):
        fanins = [find(f) for f in net.nodes[v].fanins]
        if kinds[v] == GateKind.DFF and _bypassable(v, fanins[0], net, cat, kinds, sg,
                                                    low, sinks[v], n):
            rep[v] = fanins[0]
            continue
        if is_src[v]:
            low[v] = sg[v]
        elif fanins:
            low[v] = min(low[f] for f in fanins)
    if not rep:
        return sfq, stages, 0
    keep = [v for v in range(len(net)) if v not in rep]
    new_id = {v: i for i, v in enumerate(keep)}
    nodes = tuple(Node(new_id[v], kinds[v], tuple(new_id[find(f)] for f in net.nodes[v].fanins),
                       net.nodes[v].name) for v in keep)
    out = Network(nodes, tuple(new_id[i] for i in net.inputs),
                  tuple(new_id[o] for o in net.outputs), net.name)
    return (SfqNetwork(out, tuple(cat[v] for v in keep), sfq.or_style),
            StageAssignment(n, tuple(sg[v] for v in keep)), len(rep))


def _bypassable(d, u, net, cat, kinds, sg, low, sinks, n) -> bool:
    (w, _pin), = net.fanouts[d]
    if sg[w] < sg[u] + (cat[w] == GateCategory.AS and cat[u] != GateCategory.AA):
        return False
    if cat[w] == GateCategory.SA:
        if not (cat[u] == GateCategory.AS or kinds[u] == GateKind.PI) or sg[u] != sg[w]:
            return False
    elif kinds[w] == GateKind.PO:
        if cat[u] == GateCategory.AA or sg[u] != sg[w]:
            return False
    reach = sg[u] if cat[u] != GateCategory.AA else low[u]
    return all(sg[t] - reach <= n for t in sinks)


def settle(sfq: SfqNetwork, stages: StageAssignment, max_rounds: int = 100
           ) -> tuple[SfqNetwork, StageAssignment, int]:
    """Compact and prune until stable; returns the number of DFFs removed."""
    removed = 0
    for _ in range(max_rounds):
        stages = compact_stages(sfq, stages)
        sfq, stages, k = prune_dffs(sfq, stages)
        removed += k
        if not k:
            break
    return sfq, stages, removed
