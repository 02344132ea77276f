"""End-to-end mapping: decompose, assign stages, split, balance, verify."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from .compact import settle
from .decompose import MappingConfig, SfqNetwork, decompose
from .dff import InsertionStats, insert_dffs, strip_dffs
from .netlist import Network, NetlistError, ValidationReport, equivalent, validate
from .phase import StageAssignment, assign_stages
from .solver import Status
from .splitters import SplitterPlan, insert_splitter_trees
from .verify import MappingReport, build_report, load_cost_table, verify_timing

BALANCE_ROUNDS = 1  # re-solving after compaction rarely pays for itself


@dataclass
class MappingResult:
    sfq: SfqNetwork
    stages: StageAssignment
    phase_status: Status
    phase_objective: int | None
    insertion: InsertionStats
    verification: ValidationReport
    equivalent: bool
    plans: list[SplitterPlan] = field(default_factory=list)
    report: MappingReport | None = None
    timings: dict[str, float] = field(default_factory=dict)
    source: str = "direct"  # or "embedded:<m>" when a scaled smaller-n mapping won

    @property
    def dff_count(self) -> int:
        return self.insertion.dff_count

    @property
    def ok(self) -> bool:
        return (self.verification.ok and self.equivalent
                and self.phase_status.has_solution and self.insertion.status.has_solution)

    @property
    def status(self) -> Status:
        if not (self.phase_status.has_solution and self.insertion.status.has_solution):
            return Status.TIMEOUT
        if self.phase_status == Status.OPTIMAL and self.insertion.status == Status.OPTIMAL:
            return Status.OPTIMAL
        return Status.FEASIBLE


def balance(base: SfqNetwork, stages: StageAssignment, cfg: MappingConfig,
            cache: dict | None = None, rounds: int | None = None
            ) -> tuple[SfqNetwork, StageAssignment, InsertionStats]:
    """Insert DFFs, then compact and prune so no node keeps removable slack
    and no single DFF can be dropped.

    With ``rounds > 1`` the DFFs are re-solved against the compacted stages
    while that moves non-DFF nodes and does not raise the count.
    """
    cache = {} if cache is None else cache
    best = None
    for _ in range(rounds or BALANCE_ROUNDS):
        mapped, st, stats = insert_dffs(base, stages, cfg, cache)
        mapped, st, stats.pruned = settle(mapped, st)
        if best is not None and stats.dff_count > best[2].dff_count:
            break
        best = (mapped, st, stats)
        settled = st.sigma[: len(base.net)]
        if settled == stages.sigma:
            break
        stages = StageAssignment(cfg.n, settled)
    return best


def _largest_divisor(n: int) -> int:
    return max(d for d in range(1, n) if n % d == 0)


def map_network(net: Network, cfg: MappingConfig, costs: dict | None = None,
                memo: dict | None = None, embed: bool = True,
                check_equivalence: bool = True) -> MappingResult:
    """Map ``net`` at ``cfg.n`` phases.

    With ``embed`` (the default) and ``n > 1``, the mapping found for the
    largest proper divisor ``m`` of ``n`` is stretched by ``n/m`` and
    re-balanced as a second candidate when it beats the direct mapping. A
    stretched mapping is always legal, so the DFF count never increases
    along divisor chains.
    ``memo`` (keyed by ``n``) lets a sweep reuse the smaller mappings.
    """
    report = validate(net)
    if not report.ok:
        raise NetlistError(str(report))
    costs = costs if costs is not None else load_cost_table()
    memo = {} if memo is None else memo
    if cfg.n in memo:
        return memo[cfg.n]
    timings: dict[str, float] = {}
    clock = time.perf_counter

    t0 = clock()
    sfq0 = decompose(net, cfg)
    timings["decompose"] = clock() - t0

    t0 = clock()
    stages0, phase_status, sol = assign_stages(sfq0, cfg)
    timings["phase"] = clock() - t0

    t0 = clock()
    base, base_stages, plans = insert_splitter_trees(sfq0, stages0)
    timings["splitters"] = clock() - t0

    t0 = clock()
    cache: dict = {}
    mapped, stages, stats = balance(base, base_stages, cfg, cache)
    source = "direct"
    phase_obj = sol.objective_value
    if embed and cfg.n > 1:
        m = _largest_divisor(cfg.n)
        sub_cfg = MappingConfig(**{**cfg.__dict__, "n": m})
        sub = map_network(net, sub_cfg, costs, memo, embed, check_equivalence)
        if sub.ok and sub.dff_count < stats.dff_count:
            # the stretched mapping is legal as is; re-balancing may improve it
            sub_base, sub_stages = strip_dffs(sub.sfq, sub.stages)
            alt = balance(sub_base, sub_stages.scaled(cfg.n // m), cfg, cache)
            if alt[2].dff_count > sub.dff_count:
                sfq2, st2, k = settle(sub.sfq, sub.stages.scaled(cfg.n // m))
                alt = (sfq2, st2, InsertionStats(sub.insertion.paths, sub.insertion.pruned + k))
            mapped, stages, stats = alt
            source = f"embedded:{m}"
            phase_status, phase_obj = sub.phase_status, None
    timings["dff"] = clock() - t0

    t0 = clock()
    verification = verify_timing(mapped, stages, cfg.n)
    eq = equivalent(net, mapped.net, seed=cfg.seed) if check_equivalence else True
    timings["verify"] = clock() - t0

    result = MappingResult(mapped, stages, phase_status, phase_obj, stats, verification, eq,
                           plans, None, timings, source)
    result.report = build_report(
        mapped, stages, costs,
        phase_status=phase_status.value,
        dff_status=stats.status.value,
        seed=cfg.seed,
        objective_mode=cfg.objective_mode,
        or_style=cfg.or_style,
        phase_objective=phase_obj,
        verified=verification.ok,
        violations=len(verification.violations),
        paths=len(stats.paths),
        dff_sites=stats.site_count,
        timings=timings,
    )
    memo[cfg.n] = result
    return result
