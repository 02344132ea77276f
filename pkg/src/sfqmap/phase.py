"""Stage assignment: bounds, the phase model, and its solution.

A stage is ``sigma = n * epoch + phase``. Constraints between stages are all
of the difference form ``sigma(v) >= sigma(u) + w`` plus the PI epoch window
and the shared PO epoch, which keeps both the ASAP/ALAP passes and the
constraint model simple.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

from .decompose import GateCategory, MappingConfig, SfqNetwork
from .netlist import GateKind, topological_order
from .solver import ConstraintModel, Solution, SolverBudget, Status, solve


class PhaseAssignmentError(RuntimeError):
    pass


@dataclass(frozen=True)
class StageAssignment:
    n: int
    sigma: tuple[int, ...]

    def __post_init__(self):
        if self.n < 1:
            raise ValueError("phase count must be >= 1")

    def __len__(self) -> int:
        return len(self.sigma)

    def __getitem__(self, v: int) -> int:
        return self.sigma[v]

    def epoch(self, v: int) -> int:
        return self.sigma[v] // self.n

    def phase(self, v: int) -> int:
        return self.sigma[v] % self.n

    def replace(self, updates: dict[int, int]) -> "StageAssignment":
        sigma = list(self.sigma)
        for v, s in updates.items():
            sigma[v] = s
        return StageAssignment(self.n, tuple(sigma))

    def extend(self, extra: Sequence[int]) -> "StageAssignment":
        return StageAssignment(self.n, self.sigma + tuple(extra))

    def scaled(self, factor: int) -> "StageAssignment":
        """Embed into ``n * factor`` phases by stretching every stage."""
        return StageAssignment(self.n * factor, tuple(s * factor for s in self.sigma))


@dataclass(frozen=True)
class StageBounds:
    asap: tuple[int, ...]
    alap: tuple[int, ...]
    sigma_max: int
    epoch_min: int
    epoch_max: int

    @property
    def feasible(self) -> bool:
        return all(a <= b for a, b in zip(self.asap, self.alap))


# ---------------------------------------------------------------------------
# the difference constraints


def _single_fanout(sfq: SfqNetwork, v: int) -> bool:
    return len(sfq.net.fanouts[v]) == 1


def stage_constraints(sfq: SfqNetwork) -> list[tuple[int, int, int]]:
    """All ``(u, v, w)`` meaning ``sigma(v) >= sigma(u) + w``, one per edge.

    Into an AS gate the step is 1. Into an SA gate it is 0 only when the
    fanin can sit directly in front of it at the same stage: an AS gate or
    PI with no other fanout (otherwise a splitter intervenes). A PO behaves
    like an SA sink whose admissible direct feeders also include SA gates.
    Everything else is a non-strict step.
    """
    net, cat = sfq.net, sfq.category
    out = []
    for u, v, _pin in net.edges():
        kind_u = net.nodes[u].kind
        kind_v = net.nodes[v].kind
        if cat[v] == GateCategory.AS:
            w = 1
        elif cat[v] == GateCategory.SA:
            direct = (cat[u] == GateCategory.AS or kind_u == GateKind.PI) and _single_fanout(sfq, u)
            w = 0 if direct else 1
        elif kind_v == GateKind.PO:
            direct = (
                cat[u] in (GateCategory.AS, GateCategory.SA) or kind_u == GateKind.PI
            ) and _single_fanout(sfq, u)
            w = 0 if direct else 1
        else:
            w = 0
        out.append((u, v, w))
    return out


def clocked_depth(sfq: SfqNetwork) -> int:
    """Largest number of AS plus SA gates on any PI to PO path."""
    depth = [0] * len(sfq.net)
    for v in topological_order(sfq.net):
        node = sfq.net.nodes[v]
        base = max((depth[f] for f in node.fanins), default=0)
        depth[v] = base + (sfq.category[v] in (GateCategory.AS, GateCategory.SA))
    return max((depth[o] for o in sfq.net.outputs), default=0)


def build_stage_bounds(sfq: SfqNetwork, n: int) -> StageBounds:
    net = sfq.net
    cons = stage_constraints(sfq)
    order = topological_order(net)
    into: list[list[tuple[int, int]]] = [[] for _ in net.nodes]
    outof: list[list[tuple[int, int]]] = [[] for _ in net.nodes]
    for u, v, w in cons:
        into[v].append((u, w))
        outof[u].append((v, w))

    asap = [0] * len(net)
    for v in order:
        asap[v] = max((asap[u] + w for u, w in into[v]), default=0)
    epoch_min = max((asap[o] // n for o in net.outputs), default=0)
    # gates that reach no PO are bounded only by their own asap
    top = max(clocked_depth(sfq), epoch_min, max(asap, default=0) // n)
    sigma_max = n * (top + 1) - 1
    # POs can all move up to a common epoch; bring their asap to it
    for o in net.outputs:
        asap[o] = max(asap[o], n * epoch_min)

    alap = [sigma_max] * len(net)
    for v in reversed(order):
        hi = min((alap[w_] - w for w_, w in outof[v]), default=sigma_max)
        if net.nodes[v].kind == GateKind.PI:
            hi = min(hi, n - 1)
        alap[v] = hi
    return StageBounds(tuple(asap), tuple(alap), sigma_max, epoch_min, top)


# ---------------------------------------------------------------------------
# model


def _sa_bump(sfq: SfqNetwork, v: int) -> int:
    return 1 if sfq.category[v] == GateCategory.SA else 0


def build_phase_model(
    sfq: SfqNetwork, n: int, mode: str = "gate-max", bounds: StageBounds | None = None
) -> ConstraintModel:
    """Stage variables ``s<v>``, shared PO epoch ``E``, floor counters ``b*``.

    Each objective term ``floor(D / n)`` becomes an integer ``b`` with
    ``n*b <= D <= n*b + n - 1``. In ``edge`` mode there is one term per edge
    with ``D = sigma(j) - sigma(i) + [j in SA]``. In ``gate-max`` mode there
    is one term per driving gate with ``D = m_g - sigma(g)`` where ``m_g``
    bounds every fanout's adjusted stage from above; gates with one fanout
    use that fanout directly.
    """
    net = sfq.net
    bounds = bounds or build_stage_bounds(sfq, n)
    if not bounds.feasible:
        bad = next(v for v in range(len(net)) if bounds.asap[v] > bounds.alap[v])
        raise PhaseAssignmentError(
            f"empty stage range for node {bad}: [{bounds.asap[bad]}, {bounds.alap[bad]}]"
        )
    m = ConstraintModel(f"phase:{net.name}:n={n}:{mode}")
    s = [f"s{v}" for v in range(len(net))]
    if net.outputs:
        m.int_var("E", bounds.epoch_min, bounds.epoch_max)
    for v in topological_order(net):
        m.int_var(s[v], bounds.asap[v], bounds.alap[v])
    for u, v, w in stage_constraints(sfq):
        m.add_linear([(1, s[v]), (-1, s[u])], ">=", w)
    for o in net.outputs:
        m.add_linear([(1, s[o]), (-n, "E")], ">=", 0)
        m.add_linear([(1, s[o]), (-n, "E")], "<=", n - 1)

    # objective terms: (D as linear terms, constant, upper bound of D)
    terms: list[tuple[str, list[tuple[int, str]], int, int]] = []
    if mode == "edge":
        for u, v, _pin in net.edges():
            c = _sa_bump(sfq, v)
            hi = bounds.alap[v] - bounds.asap[u] + c
            terms.append((f"b{u}_{v}", [(1, s[v]), (-1, s[u])], c, hi))
    elif mode == "gate-max":
        maxes = []
        for g in range(len(net)):
            fo = [a for a, _pin in net.fanouts[g]]
            if not fo:
                continue
            hi = max(bounds.alap[a] + _sa_bump(sfq, a) for a in fo) - bounds.asap[g]
            if len(fo) == 1:
                a = fo[0]
                terms.append((f"b{g}", [(1, s[a]), (-1, s[g])], _sa_bump(sfq, a), hi))
                continue
            lo_m = max(bounds.asap[a] + _sa_bump(sfq, a) for a in fo)
            hi_m = max(bounds.alap[a] + _sa_bump(sfq, a) for a in fo)
            maxes.append((g, fo, lo_m, hi_m))
            terms.append((f"b{g}", [(1, f"m{g}"), (-1, s[g])], 0, hi))
        for g, fo, lo_m, hi_m in maxes:
            m.int_var(f"m{g}", lo_m, hi_m)
            for a in dict.fromkeys(fo):
                m.add_linear([(1, f"m{g}"), (-1, s[a])], ">=", _sa_bump(sfq, a))
    else:
        raise ValueError(f"unknown objective mode {mode!r}")

    objective = []
    for name, d_terms, const, d_hi in terms:
        m.int_var(name, 0, max(0, d_hi) // n)
        # n*b <= D  and  D <= n*b + n - 1, with D = sum(d_terms) + const
        m.add_linear(d_terms + [(-n, name)], ">=", -const)
        m.add_linear(d_terms + [(-n, name)], "<=", n - 1 - const)
        objective.append((1, name))
    m.minimize(objective)
    return m


def asap_hint(sfq: SfqNetwork, n: int, mode: str, bounds: StageBounds) -> dict[str, int]:
    """A complete assignment of the phase model with every stage at ASAP.

    ASAP satisfies all difference constraints, places PIs at stage 0 and the
    POs in the common epoch ``epoch_min``; the auxiliary variables follow.
    """
    net, sg = sfq.net, bounds.asap
    hint = {f"s{v}": sg[v] for v in range(len(net))}
    if net.outputs:
        hint["E"] = bounds.epoch_min
    if mode == "edge":
        for u, v, _pin in net.edges():
            hint[f"b{u}_{v}"] = (sg[v] - sg[u] + _sa_bump(sfq, v)) // n
        return hint
    for g, outs in enumerate(net.fanouts):
        if not outs:
            continue
        top = max(sg[a] + _sa_bump(sfq, a) for a, _pin in outs)
        if len(outs) > 1:
            hint[f"m{g}"] = top
        hint[f"b{g}"] = (top - sg[g]) // n
    return hint


def assign_stages(
    sfq: SfqNetwork, cfg: MappingConfig
) -> tuple[StageAssignment, Status, Solution]:
    bounds = build_stage_bounds(sfq, cfg.n)
    model = build_phase_model(sfq, cfg.n, cfg.objective_mode, bounds)
    hint = asap_hint(sfq, cfg.n, cfg.objective_mode, bounds)
    sol = solve(model, SolverBudget(cfg.time_limit, cfg.node_limit), cfg.seed, hint)
    if sol.status == Status.INFEASIBLE:
        raise PhaseAssignmentError("phase model is infeasible")
    if not sol.status.has_solution:
        raise PhaseAssignmentError("no stage assignment found within the solver budget")
    sigma = tuple(sol.assignment[f"s{v}"] for v in range(len(sfq.net)))
    return StageAssignment(cfg.n, sigma), sol.status, sol


# ---------------------------------------------------------------------------
# objective re-evaluation from stages


def edge_objective(sfq: SfqNetwork, stages: StageAssignment) -> int:
    n, sg = stages.n, stages.sigma
    return sum((sg[v] - sg[u] + _sa_bump(sfq, v)) // n for u, v, _p in sfq.net.edges())


def gate_max_objective(sfq: SfqNetwork, stages: StageAssignment) -> int:
    n, sg = stages.n, stages.sigma
    total = 0
    for g, outs in enumerate(sfq.net.fanouts):
        if outs:
            total += (max(sg[a] + _sa_bump(sfq, a) for a, _p in outs) - sg[g]) // n
    return total


def baseline_objective(net_edges, stages: StageAssignment) -> int:
    """Sum of ``floor((sigma(j) - sigma(i)) / n)`` over the given edges."""
    n, sg = stages.n, stages.sigma
    return sum((sg[v] - sg[u]) // n for u, v, *_ in net_edges)


def check_stage_invariants(sfq: SfqNetwork, stages: StageAssignment) -> list[str]:
    """Problems with a pre-splitter stage assignment; empty when it is legal."""
    problems = []
    sg, n = stages.sigma, stages.n
    for u, v, w in stage_constraints(sfq):
        if sg[v] < sg[u] + w:
            problems.append(f"edge {u}->{v}: {sg[v]} < {sg[u]} + {w}")
    for v in range(len(sg)):
        if sg[v] < 0:
            problems.append(f"node {v} has negative stage")
    for i in sfq.net.inputs:
        if sg[i] // n != 0:
            problems.append(f"PI {i} not in epoch 0")
    epochs = {sg[o] // n for o in sfq.net.outputs}
    if len(epochs) > 1:
        problems.append(f"PO epochs differ: {sorted(epochs)}")
    return problems
