"""Fanout legalization with late-placed splitter chains."""

from __future__ import annotations

from dataclasses import dataclass

from .decompose import GateCategory, SfqNetwork
from .netlist import GateKind, Network, Node
from .phase import StageAssignment


@dataclass(frozen=True)
class SplitterPlan:
    driver: int
    fanouts: tuple[tuple[int, int], ...]  # (reader, pin), sorted by stage then id
    splitters: tuple[int, ...]
    stages: tuple[int, ...]


def plan_order(fanouts, stages: StageAssignment) -> list[tuple[int, int]]:
    return sorted(fanouts, key=lambda rp: (stages.sigma[rp[0]], rp[0], rp[1]))


def insert_splitter_trees(
    sfq: SfqNetwork, stages: StageAssignment
) -> tuple[SfqNetwork, StageAssignment, list[SplitterPlan]]:
    """Replace every multi-fanout connection by a splitter chain.

    Fanouts ``a_0..a_k`` are sorted by stage; splitter ``s_i`` sits at the
    stage of ``a_i`` and drives ``a_i`` and ``s_(i+1)``, the last one driving
    the final two fanouts.
    """
    net = sfq.net
    fanins = [list(node.fanins) for node in net.nodes]
    kinds = [node.kind for node in net.nodes]
    names = [node.name for node in net.nodes]
    cats = list(sfq.category)
    sigma = list(stages.sigma)
    plans = []
    for g in range(len(net)):
        outs = net.fanouts[g]
        if len(outs) < 2:
            continue
        order = plan_order(outs, stages)
        k = len(order) - 1
        chain = []
        for i in range(k):
            s = len(kinds)
            kinds.append(GateKind.SPLITTER)
            fanins.append([g if i == 0 else chain[-1]])
            names.append(f"{names[g]}$spl{i}")
            cats.append(GateCategory.AA)
            sigma.append(stages.sigma[order[i][0]])
            chain.append(s)
        for i, (reader, pin) in enumerate(order):
            fanins[reader][pin] = chain[min(i, k - 1)]
        plans.append(SplitterPlan(g, tuple(order), tuple(chain), tuple(sigma[s] for s in chain)))
    nodes = tuple(Node(v, kinds[v], tuple(fanins[v]), names[v]) for v in range(len(kinds)))
    out = Network(nodes, net.inputs, net.outputs, net.name)
    return SfqNetwork(out, tuple(cats), sfq.or_style), StageAssignment(stages.n, tuple(sigma)), plans
