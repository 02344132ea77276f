"""Independent datapaths and minimum path-balancing DFF insertion.

An independent path is a connected region of AA gates together with the
clocked gates (or PI/PO pseudo-gates) that bound it; an edge joining two
clocked gates directly forms a path of its own. DFF placement inside one
path never interacts with placement inside another, so each path is solved
as its own small model.

Timing semantics used throughout (and checked independently by the
verifier): along every source-to-sink traversal the clocked elements
(source, inserted DFFs, sink) must advance by at most ``n`` stages per step
and by at least one when the later element is AS; an SA gate or PO must be
fed directly by a clocked element at its own stage.
"""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

from .decompose import GateCategory, MappingConfig, SfqNetwork
from .netlist import GateKind, Network, Node
from .phase import StageAssignment
from .solver import ConstraintModel, SolverBudget, Status, solve

TRAVERSAL_CAP = 10_000
BRUTE_FORCE_LIMIT = 20


class InfeasiblePathError(RuntimeError):
    pass


@dataclass(frozen=True)
class IndependentPath:
    index: int
    sources: tuple[int, ...]
    internal: tuple[int, ...]
    sinks: tuple[int, ...]
    edges: tuple[tuple[int, int, int], ...]  # (u, v, pin)
    stage: dict[int, int]
    kind: dict[int, GateKind]
    category: dict[int, GateCategory]

    @property
    def trivial(self) -> bool:
        return not self.internal

    def signature(self) -> tuple:
        nodes = sorted(self.stage)
        return (
            self.edges,
            tuple((v, self.stage[v], self.kind[v].value, self.category[v].value) for v in nodes),
        )

    def is_internal(self, v: int) -> bool:
        return self.category[v] == GateCategory.AA


@dataclass(frozen=True)
class DffSite:
    index: int
    fanin: int
    fanout: int
    pin: int
    stage: int
    forced: bool = False

    @property
    def edge(self) -> tuple[int, int, int]:
        return (self.fanin, self.fanout, self.pin)


@dataclass(frozen=True)
class ChainWindow:
    """Sites on one traversal whose stages fall in ``[first, last]``."""

    sites: tuple[int, ...]
    first: int
    last: int

    @property
    def span(self) -> int:
        return self.last - self.first


@dataclass
class PathResult:
    index: int
    sites: int
    dffs: list[tuple[tuple[int, int, int], int]]  # (edge, stage)
    status: Status
    nodes: int = 0
    traversals: int = 0
    encoding: str = "traversal"

    @property
    def dff_count(self) -> int:
        return len(self.dffs)


# ---------------------------------------------------------------------------
# extraction


def extract_paths(sfq: SfqNetwork, stages: StageAssignment) -> list[IndependentPath]:
    net, cat = sfq.net, sfq.category
    parent = list(range(len(net)))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    aa = [c == GateCategory.AA for c in cat]
    for u, v, _pin in net.edges():
        if aa[u] and aa[v]:
            ru, rv = find(u), find(v)
            if ru != rv:
                parent[max(ru, rv)] = min(ru, rv)

    groups: dict[tuple, list[tuple[int, int, int]]] = defaultdict(list)
    for u, v, pin in net.edges():
        if aa[u]:
            key = ("region", find(u))
        elif aa[v]:
            key = ("region", find(v))
        else:
            key = ("edge", u, v, pin)
        groups[key].append((u, v, pin))

    raw = []
    for edges in groups.values():
        edges.sort()
        internal = sorted({x for e in edges for x in e[:2] if aa[x]})
        sources = sorted({u for u, _v, _p in edges if not aa[u]})
        sinks = sorted({v for _u, v, _p in edges if not aa[v]})
        members = set(internal) | set(sources) | set(sinks)
        raw.append((min(members), tuple(edges), internal, sources, sinks, members))
    raw.sort(key=lambda r: (r[0], r[1]))
    paths = []
    for idx, (_m, edges, internal, sources, sinks, members) in enumerate(raw):
        paths.append(
            IndependentPath(
                idx,
                tuple(sources),
                tuple(internal),
                tuple(sinks),
                edges,
                {v: stages.sigma[v] for v in sorted(members)},
                {v: net.nodes[v].kind for v in sorted(members)},
                {v: cat[v] for v in sorted(members)},
            )
        )
    return paths


# ---------------------------------------------------------------------------
# sites


def _path_order(path: IndependentPath) -> list[int]:
    """Internal nodes in dependency order (Kahn over internal edges)."""
    indeg = {v: 0 for v in path.internal}
    succ = defaultdict(list)
    for u, v, _p in path.edges:
        if path.is_internal(u) and path.is_internal(v):
            indeg[v] += 1
            succ[u].append(v)
    ready = sorted(v for v, d in indeg.items() if d == 0)
    order = []
    while ready:
        v = ready.pop(0)
        order.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                ready.append(w)
        ready.sort()
    return order


def _range_helpers(path: IndependentPath) -> tuple[dict[int, int], dict[int, int]]:
    """Latest clocked source feeding each internal node, and the latest stage a
    DFF may occupy in front of each node without crowding an AS sink."""
    st = path.stage
    order = _path_order(path)
    ins = defaultdict(list)
    outs = defaultdict(list)
    for u, v, _p in path.edges:
        ins[v].append(u)
        outs[u].append(v)
    up: dict[int, int] = {}
    for v in order:
        up[v] = max(st[u] if not path.is_internal(u) else up[u] for u in ins[v])
    cap: dict[int, int] = {}
    for v in path.sinks:
        cap[v] = st[v] - 1 if path.category[v] == GateCategory.AS else st[v]
    for v in reversed(order):
        cap[v] = min([st[v]] + [cap[w] for w in outs[v]])
    return up, cap


def _direct_ok(path: IndependentPath, u: int, v: int) -> bool:
    """Whether source ``u`` may feed SA/PO sink ``v`` with no DFF in between."""
    if path.is_internal(u) or path.stage[u] != path.stage[v]:
        return False
    if path.kind[u] == GateKind.PI or path.category[u] == GateCategory.AS:
        return True
    return path.kind[v] == GateKind.PO and path.category[u] == GateCategory.SA


def enumerate_sites(path: IndependentPath, n: int) -> list[DffSite]:
    st = path.stage
    up, cap = _range_helpers(path)
    sites = []
    for u, v, pin in path.edges:
        lo = st[u] + 1 if not path.is_internal(u) else max(st[u], up[u] + 1)
        hi = cap[v]
        forced = None
        needs_feeder = path.category[v] == GateCategory.SA or path.kind[v] == GateKind.PO
        if needs_feeder and not _direct_ok(path, u, v):
            forced = st[v]
            if not lo <= forced <= hi:
                raise InfeasiblePathError(
                    f"edge {u}->{v}: required DFF at stage {forced} lies outside [{lo}, {hi}]"
                )
        for d in range(lo, hi + 1):
            sites.append((d, (u, v, pin), d == forced))
    sites.sort(key=lambda s: (s[0], s[1]))
    return [DffSite(i, e[0], e[1], e[2], d, f) for i, (d, e, f) in enumerate(sites)]


def traversals(path: IndependentPath, cap: int | None = TRAVERSAL_CAP):
    """Source-to-sink edge sequences. Returns None if more than ``cap`` exist."""
    outs = defaultdict(list)
    for e in path.edges:
        outs[e[0]].append(e)
    found = []
    for s in path.sources:
        stack = [(s, [])]
        while stack:
            x, trail = stack.pop()
            for e in reversed(outs[x]):
                if path.is_internal(e[1]):
                    stack.append((e[1], trail + [e]))
                else:
                    found.append((s, e[1], tuple(trail + [e])))
                    if cap is not None and len(found) > cap:
                        return None
    return found


# ---------------------------------------------------------------------------
# model


def build_insertion_model(
    path: IndependentPath,
    sites: list[DffSite],
    n: int,
    spacing: str = "window",
    cap: int | None = TRAVERSAL_CAP,
) -> tuple[ConstraintModel, str, int]:
    """Boolean ``d<i>`` per site; returns ``(model, encoding, traversal_count)``.

    With few enough traversals the constraints are stated per traversal:
    at most one DFF per stage and at least one in every window of ``n``
    consecutive stages strictly between the traversal's source and sink.
    Otherwise an equivalent reachability encoding is used.
    """
    m = ConstraintModel(f"dff:path{path.index}:n={n}")
    var = [m.bool_var(f"d{s.index}") for s in sites]
    by_edge: dict[tuple, list[DffSite]] = defaultdict(list)
    for s in sites:
        by_edge[s.edge].append(s)
        if s.forced:
            m.force(var[s.index])
    m.minimize([(1, v) for v in var])
    trav = traversals(path, cap)
    if trav is None:
        if spacing != "window":
            raise ValueError("the literal spacing reading is only available per traversal")
        _reach_encoding(m, path, sites, by_edge, var, n)
        return m, "reach", -1

    seen_amo: set[tuple[int, ...]] = set()
    seen_win: set[tuple[int, ...]] = set()
    st = path.stage
    for s, t, edges in trav:
        on = [x for e in edges for x in by_edge.get(e, ())]
        per_stage = defaultdict(list)
        for x in on:
            per_stage[x.stage].append(x.index)
        for group in per_stage.values():
            if len(group) > 1:
                key = tuple(sorted(group))
                if key not in seen_amo:
                    seen_amo.add(key)
                    m.add_linear([(1, var[i]) for i in key], "<=", 1)
        for w in _windows(st[s], st[t], n, per_stage, spacing):
            key = tuple(sorted(i for d in range(w.first, w.last + 1) for i in per_stage.get(d, ())))
            if not key:
                raise InfeasiblePathError(
                    f"no DFF site in stages [{w.first}, {w.last}] between {s} and {t}"
                )
            if key not in seen_win:
                seen_win.add(key)
                m.add_clause([var[i] for i in key])
    return m, "traversal", len(trav)


def _windows(src: int, dst: int, n: int, per_stage, spacing: str):
    if spacing == "window":
        for k in range(src + 1, dst - n + 1):
            yield ChainWindow((), k, k + n - 1)
    else:
        # chains whose end sites are exactly n stages apart
        stages = sorted(per_stage)
        present = set(stages)
        for k in stages:
            if k + n in present:
                yield ChainWindow((), k, k + n)


def _reach_encoding(m, path, sites, by_edge, var, n) -> None:
    st = path.stage
    # node copies: ("in", v) for sinks, ("out", v) for sources, ("a", v) internal
    def head(v):
        return ("a", v) if path.is_internal(v) else ("in", v)

    def tail(u):
        return ("a", u) if path.is_internal(u) else ("out", u)

    succ = defaultdict(list)
    pred = defaultdict(list)
    for e in path.edges:
        succ[tail(e[0])].append((e, head(e[1])))
        pred[head(e[1])].append((e, tail(e[0])))

    def closure(starts, nbrs):
        seen = set(starts)
        stack = list(starts)
        while stack:
            x = stack.pop()
            for _e, y in nbrs[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        return seen

    # at most one DFF per stage on any traversal: exclude comparable pairs
    edge_after: dict[tuple, set] = {}
    for e in path.edges:
        reach = closure([head(e[1])], succ)
        edge_after[e] = {f for x in reach for f, _y in succ[x]}
    stage_sites = defaultdict(list)
    for s in sites:
        stage_sites[s.stage].append(s)
    seen = set()
    for group in stage_sites.values():
        for a, b in itertools.combinations(group, 2):
            if b.edge in edge_after[a.edge] or a.edge in edge_after[b.edge]:
                key = (a.index, b.index)
                if key not in seen:
                    seen.add(key)
                    m.add_clause(["~" + var[a.index], "~" + var[b.index]])

    lo = min(st[s] for s in path.sources) + 1
    hi = max(st[t] for t in path.sinks) - n
    for k in range(lo, hi + 1):
        top = k + n - 1
        starts = [("out", s) for s in path.sources if st[s] < k]
        goals = [("in", t) for t in path.sinks if st[t] > top]
        if not starts or not goals:
            continue
        live = closure(starts, succ) & closure(goals, pred)
        if not any(g in live for g in goals):
            continue
        r = {x: m.bool_var(f"r{k}_{x[0]}{x[1]}") for x in sorted(live, key=lambda x: (x[1], x[0]))}
        for x in starts:
            if x in r:
                m.force(r[x])
        for x in goals:
            if x in r:
                m.force("~" + r[x])
        for e in path.edges:
            a, b = tail(e[0]), head(e[1])
            if a in r and b in r:
                cut = [var[s.index] for s in by_edge.get(e, ()) if k <= s.stage <= top]
                m.add_clause(["~" + r[a], *cut, r[b]])


# ---------------------------------------------------------------------------
# solving and materialization


def solve_path(path: IndependentPath, n: int, budget: SolverBudget | None = None,
               spacing: str = "window", seed: int = 0,
               cap: int | None = TRAVERSAL_CAP) -> PathResult:
    try:
        sites = enumerate_sites(path, n)
        if not sites:
            return PathResult(path.index, 0, [], Status.OPTIMAL)
        model, encoding, ntrav = build_insertion_model(path, sites, n, spacing, cap)
    except InfeasiblePathError:
        return PathResult(path.index, 0, [], Status.INFEASIBLE)
    sol = solve(model, budget, seed)
    if not sol.status.has_solution:
        return PathResult(path.index, len(sites), [], sol.status, sol.stats.nodes, ntrav, encoding)
    chosen = [(s.edge, s.stage) for s in sites if sol.assignment[f"d{s.index}"]]
    return PathResult(path.index, len(sites), chosen, sol.status, sol.stats.nodes, ntrav, encoding)


def _solve_job(args):
    path, n, budget, spacing, seed = args
    return solve_path(path, n, budget, spacing, seed)


@dataclass
class InsertionStats:
    paths: list[PathResult] = field(default_factory=list)
    pruned: int = 0  # DFFs later found redundant and removed

    @property
    def dff_count(self) -> int:
        return sum(p.dff_count for p in self.paths) - self.pruned

    @property
    def site_count(self) -> int:
        return sum(p.sites for p in self.paths)

    @property
    def status(self) -> Status:
        worst = Status.OPTIMAL
        for p in self.paths:
            if p.status == Status.INFEASIBLE:
                return Status.INFEASIBLE
            if p.status == Status.TIMEOUT:
                worst = Status.TIMEOUT
            elif p.status == Status.FEASIBLE and worst == Status.OPTIMAL:
                worst = Status.FEASIBLE
        return worst


def solve_paths(paths, cfg: MappingConfig, cache: dict | None = None) -> list[PathResult]:
    budget = SolverBudget(cfg.time_limit, cfg.node_limit)
    results: list[PathResult | None] = [None] * len(paths)
    todo = []
    for i, p in enumerate(paths):
        key = (p.signature(), cfg.n, cfg.spacing) if cache is not None else None
        if key is not None and key in cache:
            hit = cache[key]
            results[i] = PathResult(p.index, hit.sites, hit.dffs, hit.status, 0, hit.traversals,
                                    hit.encoding)
        elif not p.trivial or _direct_needs_work(p, cfg.n):
            todo.append((i, key))
        else:
            results[i] = PathResult(p.index, 0, [], Status.OPTIMAL)
    jobs = [(paths[i], cfg.n, budget, cfg.spacing, cfg.seed) for i, _k in todo]
    if cfg.workers > 1 and len(jobs) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as pool:
            solved = list(pool.map(_solve_job, jobs, chunksize=8))
    else:
        solved = [_solve_job(j) for j in jobs]
    for (i, key), res in zip(todo, solved):
        results[i] = res
        if key is not None:
            cache[key] = res
    return results  # type: ignore[return-value]


def _direct_needs_work(path: IndependentPath, n: int) -> bool:
    """A direct clocked-to-clocked edge with nothing to balance is skipped."""
    (u, v, _pin), = path.edges
    st = path.stage
    if path.category[v] == GateCategory.AS:
        return not 1 <= st[v] - st[u] <= n
    return not _direct_ok(path, u, v)


def materialize(sfq: SfqNetwork, stages: StageAssignment, results: list[PathResult]
                ) -> tuple[SfqNetwork, StageAssignment]:
    net = sfq.net
    fanins = [list(node.fanins) for node in net.nodes]
    kinds = [node.kind for node in net.nodes]
    names = [node.name for node in net.nodes]
    cats = list(sfq.category)
    sigma = list(stages.sigma)
    for res in results:
        per_edge = defaultdict(list)
        for edge, d in res.dffs:
            per_edge[edge].append(d)
        for (u, v, pin) in sorted(per_edge):
            prev = u
            for d in sorted(per_edge[(u, v, pin)]):
                x = len(kinds)
                kinds.append(GateKind.DFF)
                fanins.append([prev])
                names.append(f"dff{x}")
                cats.append(GateCategory.AS)
                sigma.append(d)
                prev = x
            fanins[v][pin] = prev
    nodes = tuple(Node(v, kinds[v], tuple(fanins[v]), names[v]) for v in range(len(kinds)))
    out = Network(nodes, net.inputs, net.outputs, net.name)
    return SfqNetwork(out, tuple(cats), sfq.or_style), StageAssignment(stages.n, tuple(sigma))


def insert_dffs(sfq: SfqNetwork, stages: StageAssignment, cfg: MappingConfig,
                cache: dict | None = None) -> tuple[SfqNetwork, StageAssignment, InsertionStats]:
    paths = extract_paths(sfq, stages)
    results = solve_paths(paths, cfg, cache)
    stats = InsertionStats(results)
    if stats.status == Status.INFEASIBLE:
        bad = next(r.index for r in results if r.status == Status.INFEASIBLE)
        raise InfeasiblePathError(f"path {bad} admits no legal DFF placement")
    out, st = materialize(sfq, stages, results)
    return out, st, stats


def strip_dffs(sfq: SfqNetwork, stages: StageAssignment) -> tuple[SfqNetwork, StageAssignment]:
    """Remove DFF nodes appended after ``len`` non-DFF nodes (inverse of materialize)."""
    net = sfq.net
    keep = [v for v in range(len(net)) if net.nodes[v].kind != GateKind.DFF]
    new_id = {v: i for i, v in enumerate(keep)}

    def through(f: int) -> int:
        while net.nodes[f].kind == GateKind.DFF:
            f = net.nodes[f].fanins[0]
        return new_id[f]

    nodes = tuple(
        Node(new_id[v], net.nodes[v].kind, tuple(through(f) for f in net.nodes[v].fanins),
             net.nodes[v].name)
        for v in keep
    )
    out = Network(nodes, tuple(new_id[i] for i in net.inputs),
                  tuple(new_id[o] for o in net.outputs), net.name)
    return (SfqNetwork(out, tuple(sfq.category[v] for v in keep), sfq.or_style),
            StageAssignment(stages.n, tuple(stages.sigma[v] for v in keep)))


# ---------------------------------------------------------------------------
# brute-force oracle (shares nothing with the site ranges or the model)


def _oracle_traversals(path: IndependentPath):
    outs = defaultdict(list)
    for e in path.edges:
        outs[e[0]].append(e)
    result = []

    def walk(src, x, trail):
        for e in outs[x]:
            if path.category[e[1]] == GateCategory.AA:
                walk(src, e[1], trail + [e])
            else:
                result.append((src, e[1], trail + [e]))

    for s in path.sources:
        walk(s, s, [])
    return result


def oracle_positions(path: IndependentPath) -> list[tuple[tuple[int, int, int], int]]:
    """Every (edge, stage) a DFF could occupy judging by edge ordering alone."""
    st = path.stage
    pos = []
    for u, v, pin in path.edges:
        lo = st[u] + (path.category[u] != GateCategory.AA)
        hi = st[v] - (path.category[v] == GateCategory.AS)
        pos.extend(((u, v, pin), d) for d in range(lo, hi + 1))
    return pos


def placement_valid(path: IndependentPath, n: int, chosen) -> bool:
    st = path.stage
    on_edge = defaultdict(list)
    for e, d in chosen:
        on_edge[e].append(d)
    for e in on_edge:
        on_edge[e].sort()
    for s, t, trail in _oracle_traversals(path):
        seq = [st[s]]
        for e in trail:
            seq.extend(on_edge.get(e, ()))
        for a, b in zip(seq, seq[1:]):
            if not 1 <= b - a <= n:
                return False
        last_edge = trail[-1]
        if path.category[t] == GateCategory.AS:
            if not 1 <= st[t] - seq[-1] <= n:
                return False
            continue
        # SA gates and POs need a clocked feeder at their own stage
        if on_edge.get(last_edge):
            if on_edge[last_edge][-1] != st[t]:
                return False
        else:
            if len(trail) != 1 or st[s] != st[t]:
                return False
            allowed = (path.kind[s] == GateKind.PI or path.category[s] == GateCategory.AS
                       or (path.kind[t] == GateKind.PO and path.category[s] == GateCategory.SA))
            if not allowed:
                return False
    return True


def brute_force_min_dffs(path: IndependentPath, n: int) -> int | None:
    """Smallest feasible DFF count by exhaustive enumeration; None if none works."""
    pos = oracle_positions(path)
    if len(pos) > BRUTE_FORCE_LIMIT:
        raise ValueError(f"{len(pos)} candidate positions exceed the oracle limit")
    for k in range(len(pos) + 1):
        for combo in itertools.combinations(pos, k):
            if placement_valid(path, n, combo):
                return k
    return None


# ---------------------------------------------------------------------------
# instance generators for tests and demos


def straight_path(q: int, sink: str = "AS", source: str = "AS", base: int = 0) -> IndependentPath:
    """Direct edge from a clocked source at ``base`` to a sink ``q`` stages later."""
    kinds = {"AS": GateKind.NOT, "PI": GateKind.PI, "SA": GateKind.AND, "PO": GateKind.PO}
    cats = {"AS": GateCategory.AS, "PI": GateCategory.IO, "SA": GateCategory.SA,
            "PO": GateCategory.IO}
    return IndependentPath(
        0, (0,), (), (1,), ((0, 1, 0),), {0: base, 1: base + q},
        {0: kinds[source], 1: kinds[sink]}, {0: cats[source], 1: cats[sink]},
    )


def random_path(rng: random.Random, n: int, max_internal: int = 4) -> IndependentPath:
    """A small random AA region with clocked boundary and consistent stages."""
    src_kinds = [(GateKind.NOT, GateCategory.AS), (GateKind.PI, GateCategory.IO),
                 (GateKind.AND, GateCategory.SA), (GateKind.XOR, GateCategory.AS)]
    snk_kinds = [(GateKind.NOT, GateCategory.AS), (GateKind.AND, GateCategory.SA),
                 (GateKind.PO, GateCategory.IO), (GateKind.XOR, GateCategory.AS)]
    kind, cat, stage = {}, {}, {}
    edges = []
    nid = itertools.count()
    wires = []  # (driver, latest clocked source stage upstream)
    for _ in range(rng.randint(1, 3)):
        v = next(nid)
        kind[v], cat[v] = rng.choice(src_kinds)
        stage[v] = rng.randint(0, 2)
        wires.append((v, stage[v]))
    internal = []
    for _ in range(rng.randint(0, max_internal)):
        if len(wires) >= 2 and rng.random() < 0.45:
            (a, ua), (b, ub) = [wires.pop(rng.randrange(len(wires))) for _ in range(2)]
            v = next(nid)
            kind[v], cat[v] = GateKind.MERGER, GateCategory.AA
            stage[v] = max(stage[a], stage[b]) + rng.randint(0, 2)
            edges += [(a, v, 0), (b, v, 1)]
            wires.append((v, max(ua, ub)))
        else:
            a, ua = wires.pop(rng.randrange(len(wires)))
            v = next(nid)
            kind[v], cat[v] = GateKind.SPLITTER, GateCategory.AA
            stage[v] = stage[a] + rng.randint(0, 2)
            edges.append((a, v, 0))
            wires += [(v, ua), (v, ua)]
        internal.append(v)
    for a, ua in wires:
        v = next(nid)
        kind[v], cat[v] = rng.choice(snk_kinds)
        floor_ = max(stage[a], ua + 1)
        direct = cat[a] == GateCategory.AS or kind[a] == GateKind.PI or (
            kind[v] == GateKind.PO and cat[a] == GateCategory.SA)
        if cat[v] != GateCategory.AS and direct and rng.random() < 0.3:
            floor_ = stage[a]  # direct feed at equal stage (needs no DFF if allowed)
        stage[v] = floor_ + rng.randint(0, 2 * n)
        edges.append((a, v, 0))
    sources = tuple(sorted(v for v in kind if cat[v] != GateCategory.AA and
                           any(e[0] == v for e in edges)))
    sinks = tuple(sorted(v for v in kind if cat[v] != GateCategory.AA and
                         any(e[1] == v for e in edges)))
    return IndependentPath(0, sources, tuple(internal), sinks, tuple(sorted(edges)),
                           stage, kind, cat)
