"""Test oracles that share no code with the implementation under test."""

from __future__ import annotations

import itertools
import random

import numpy as np

from sfqmap.solver import ConstraintModel


def random_small_model(rng: random.Random, max_bools: int = 12, max_ints: int = 6,
                       max_domain: int = 8, enum_cap: int = 1 << 21) -> ConstraintModel:
    """Random model within the small-instance bounds with a bounded search space."""
    while True:
        nb = rng.randint(0, max_bools)
        ni = rng.randint(0 if nb else 1, max_ints)
        doms = []
        for _ in range(ni):
            lo = rng.randint(-3, 3)
            doms.append((lo, lo + rng.randint(0, max_domain - 1)))
        size = 2 ** nb
        for lo, hi in doms:
            size *= hi - lo + 1
        if size <= enum_cap:
            break
    m = ConstraintModel("random")
    ints = [m.int_var(f"x{i}", lo, hi) for i, (lo, hi) in enumerate(doms)]
    bools = [m.bool_var(f"b{i}") for i in range(nb)]
    allv = ints + bools
    for _ in range(rng.randint(0, 6)):
        k = rng.randint(1, min(4, len(allv)))
        vs = rng.sample(allv, k)
        terms = [(rng.choice([-3, -2, -1, 1, 2, 3]), v) for v in vs]
        op = rng.choice(["<=", ">=", "=="])
        bound = rng.randint(-6, 8) if op != "==" else rng.randint(-2, 4)
        m.add_linear(terms, op, bound)
    if bools:
        for _ in range(rng.randint(0, 6)):
            k = rng.randint(1, min(3, len(bools)))
            m.add_clause([rng.choice(["", "~"]) + b for b in rng.sample(bools, k)])
        if rng.random() < 0.3:
            m.force(rng.choice(["", "~"]) + rng.choice(bools))
    m.minimize([(rng.randint(-4, 5), v) for v in allv if rng.random() < 0.8],
               offset=rng.randint(-3, 3))
    return m


def enumerate_minimum(model: ConstraintModel) -> int | None:
    """Exhaustive minimum via numpy over the full Cartesian product."""
    names = list(model.order)
    axes = [np.arange(model.domain(v)[0], model.domain(v)[1] + 1, dtype=np.int64) for v in names]
    if not names:
        return model.objective_offset
    grids = np.meshgrid(*axes, indexing="ij", sparse=False)
    cols = {v: g.ravel() for v, g in zip(names, grids)}
    total = len(next(iter(cols.values())))
    ok = np.ones(total, dtype=bool)
    for con in model.linear_constraints:
        lhs = np.zeros(total, dtype=np.int64)
        for c, v in con.terms:
            lhs += c * cols[v]
        if con.op == "<=":
            ok &= lhs <= con.bound
        elif con.op == ">=":
            ok &= lhs >= con.bound
        else:
            ok &= lhs == con.bound
    for clause in model.clauses:
        sat = np.zeros(total, dtype=bool)
        for lit in clause:
            sat |= (cols[lit.var] == 1) if lit.positive else (cols[lit.var] == 0)
        ok &= sat
    for lit in model.forced_literals:
        ok &= (cols[lit.var] == 1) if lit.positive else (cols[lit.var] == 0)
    if not ok.any():
        return None
    obj = np.full(total, model.objective_offset, dtype=np.int64)
    for c, v in model.objective:
        obj += c * cols[v]
    return int(obj[ok].min())


def straight_line_minimum(q: int, n: int) -> int:
    """Fewest DFFs splitting a q-stage AS-to-AS gap into steps of 1..n stages."""
    for k in itertools.count():
        # k DFFs make k+1 steps; feasible iff k+1 <= q <= n*(k+1)
        if k + 1 <= q <= n * (k + 1):
            return k


def delete_dff(sfq, stages, v):
    """Bypass DFF ``v`` (its reader takes its fanin) and drop it from the network."""
    from sfqmap.decompose import SfqNetwork
    from sfqmap.netlist import Network, Node
    from sfqmap.phase import StageAssignment

    net = sfq.net
    src = net.nodes[v].fanins[0]
    keep = [u for u in range(len(net)) if u != v]
    new_id = {u: i for i, u in enumerate(keep)}
    nodes = []
    for u in keep:
        node = net.nodes[u]
        fanins = tuple(new_id[src if f == v else f] for f in node.fanins)
        nodes.append(Node(new_id[u], node.kind, fanins, node.name))
    out = Network(tuple(nodes), tuple(new_id[i] for i in net.inputs),
                  tuple(new_id[o] for o in net.outputs), net.name)
    return (SfqNetwork(out, tuple(sfq.category[u] for u in keep), sfq.or_style),
            StageAssignment(stages.n, tuple(stages.sigma[u] for u in keep)))


def mutations(sfq, stages):
    """Every single-DFF deletion and every single-node stage decrement."""
    from sfqmap.netlist import GateKind

    for v, node in enumerate(sfq.net.nodes):
        if node.kind == GateKind.DFF:
            yield f"delete DFF {v}", *delete_dff(sfq, stages, v)
    for v in range(len(sfq.net)):
        yield f"decrement node {v}", sfq, stages.replace({v: stages.sigma[v] - 1})


def sampled_mutations(sfq, stages, rng: random.Random, k: int):
    """``k`` mutations drawn uniformly from those :func:`mutations` would yield."""
    from sfqmap.netlist import GateKind

    dffs = [v for v, node in enumerate(sfq.net.nodes) if node.kind == GateKind.DFF]
    total = len(dffs) + len(sfq.net)
    for i in sorted(rng.sample(range(total), min(k, total))):
        if i < len(dffs):
            yield f"delete DFF {dffs[i]}", *delete_dff(sfq, stages, dffs[i])
        else:
            v = i - len(dffs)
            yield f"decrement node {v}", sfq, stages.replace({v: stages.sigma[v] - 1})
