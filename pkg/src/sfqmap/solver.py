"""Exact branch-and-bound solver for bounded-integer/boolean linear models.

Search is depth-first over variables in declaration order, trying values in
ascending order. Linear constraints are propagated to bounds consistency,
clauses by unit propagation, and the incumbent objective is posted as a
cutoff constraint. Everything is exact integer arithmetic.

Results are reproducible for a given model and node limit. A wall-clock
limit can stop the search at a machine-dependent point, so runs that must be
reproducible should bound the search with ``node_limit`` only (or run to
completion).
"""

from __future__ import annotations

import enum
import time
from dataclasses import dataclass, field
from typing import Iterable, Mapping, NamedTuple


class ModelError(ValueError):
    pass


class Status(str, enum.Enum):
    OPTIMAL = "optimal"
    FEASIBLE = "feasible"
    INFEASIBLE = "infeasible"
    TIMEOUT = "timeout-no-solution"

    def __str__(self) -> str:
        return self.value

    @property
    def has_solution(self) -> bool:
        return self in (Status.OPTIMAL, Status.FEASIBLE)


class Lit(NamedTuple):
    var: str
    positive: bool = True

    def __invert__(self) -> "Lit":
        return Lit(self.var, not self.positive)

    def __str__(self) -> str:
        return self.var if self.positive else "~" + self.var


def lit(spec: str | Lit) -> Lit:
    """Accept ``"x"`` / ``"~x"`` shorthand as well as :class:`Lit`."""
    if isinstance(spec, Lit):
        return spec
    if spec.startswith("~"):
        return Lit(spec[1:], False)
    return Lit(spec, True)


@dataclass(frozen=True)
class LinearConstraint:
    terms: tuple[tuple[int, str], ...]
    op: str
    bound: int

    def evaluate(self, assignment: Mapping[str, int]) -> bool:
        total = sum(c * assignment[v] for c, v in self.terms)
        if self.op == "<=":
            return total <= self.bound
        if self.op == ">=":
            return total >= self.bound
        return total == self.bound

    def __str__(self) -> str:
        lhs = " ".join(f"{c:+d}*{v}" for c, v in self.terms) or "0"
        return f"{lhs} {self.op} {self.bound}"


class ConstraintModel:
    """Bounded integer and boolean variables, linear constraints, clauses."""

    def __init__(self, name: str = "model"):
        self.name = name
        self.int_vars: list[tuple[str, int, int]] = []
        self.bool_vars: list[str] = []
        self.linear_constraints: list[LinearConstraint] = []
        self.clauses: list[tuple[Lit, ...]] = []
        self.forced_literals: list[Lit] = []
        self.objective: list[tuple[int, str]] = []
        self.objective_offset = 0
        self.order: list[str] = []
        self._domain: dict[str, tuple[int, int]] = {}
        self._bools: set[str] = set()

    # -- declaration -------------------------------------------------------

    def _declare(self, name: str, lo: int, hi: int) -> None:
        if name in self._domain:
            raise ModelError(f"variable {name!r} declared twice")
        self._domain[name] = (lo, hi)
        self.order.append(name)

    def int_var(self, name: str, lo: int, hi: int) -> str:
        if not (isinstance(lo, int) and isinstance(hi, int)):
            raise ModelError(f"bounds of {name!r} must be integers")
        if lo > hi:
            raise ModelError(f"empty domain for {name!r}: [{lo}, {hi}]")
        self._declare(name, lo, hi)
        self.int_vars.append((name, lo, hi))
        return name

    def bool_var(self, name: str) -> str:
        self._declare(name, 0, 1)
        self.bool_vars.append(name)
        self._bools.add(name)
        return name

    def add_linear(self, terms: Iterable[tuple[int, str]], op: str, bound: int) -> LinearConstraint:
        if op not in ("<=", ">=", "=="):
            raise ModelError(f"unknown comparison {op!r}")
        merged: dict[str, int] = {}
        for c, v in terms:
            if not isinstance(c, int):
                raise ModelError(f"non-integer coefficient {c!r}")
            if v not in self._domain:
                raise ModelError(f"undeclared variable {v!r} in constraint")
            merged[v] = merged.get(v, 0) + c
        con = LinearConstraint(tuple((c, v) for v, c in merged.items() if c != 0), op, int(bound))
        self.linear_constraints.append(con)
        return con

    def add_clause(self, lits: Iterable[str | Lit]) -> tuple[Lit, ...]:
        clause = tuple(dict.fromkeys(self._bool_lit(x) for x in lits))
        self.clauses.append(clause)
        return clause

    def force(self, literal: str | Lit) -> None:
        self.forced_literals.append(self._bool_lit(literal))

    def _bool_lit(self, x: str | Lit) -> Lit:
        x = lit(x)
        if x.var not in self._bools:
            raise ModelError(f"literal {x} does not name a boolean variable")
        return x

    def minimize(self, terms: Iterable[tuple[int, str]], offset: int = 0) -> None:
        merged: dict[str, int] = {}
        for c, v in terms:
            if v not in self._domain:
                raise ModelError(f"undeclared objective variable {v!r}")
            merged[v] = merged.get(v, 0) + c
        self.objective = [(c, v) for v, c in merged.items() if c != 0]
        self.objective_offset = offset

    # -- inspection --------------------------------------------------------

    def domain(self, name: str) -> tuple[int, int]:
        return self._domain[name]

    def is_bool(self, name: str) -> bool:
        return name in self._domain and name in set(self.bool_vars)

    def check(self) -> None:
        """Raise :class:`ModelError` unless every reference is declared."""
        bools = set(self.bool_vars)
        for con in self.linear_constraints:
            for _c, v in con.terms:
                if v not in self._domain:
                    raise ModelError(f"undeclared variable {v!r} in constraint")
        for clause in self.clauses:
            for x in clause:
                if x.var not in bools:
                    raise ModelError(f"clause literal {x} is not a boolean variable")
        for x in self.forced_literals:
            if x.var not in bools:
                raise ModelError(f"forced literal {x} is not a boolean variable")
        for _c, v in self.objective:
            if v not in self._domain:
                raise ModelError(f"undeclared objective variable {v!r}")

    def objective_value(self, assignment: Mapping[str, int]) -> int:
        return self.objective_offset + sum(c * assignment[v] for c, v in self.objective)

    def dump(self) -> str:
        """One line per item; a debugging aid, not a stable interchange format."""
        lines = [f"# model {self.name}"]
        bools = set(self.bool_vars)
        for v in self.order:
            if v in bools:
                lines.append(f"bool {v}")
            else:
                lo, hi = self._domain[v]
                lines.append(f"int {v} {lo} {hi}")
        lines.extend(f"lin {con}" for con in self.linear_constraints)
        lines.extend("clause " + " ".join(map(str, cl)) for cl in self.clauses)
        lines.extend(f"force {x}" for x in self.forced_literals)
        obj = " ".join(f"{c:+d}*{v}" for c, v in self.objective) or "0"
        lines.append(f"min {obj} {self.objective_offset:+d}")
        return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class SolverBudget:
    time_limit: float | None = None
    node_limit: int | None = None


@dataclass
class SolveStats:
    nodes: int = 0
    solutions: int = 0
    wall_time: float = field(default=0.0, compare=False)


@dataclass
class Solution:
    status: Status
    assignment: dict[str, int] = field(default_factory=dict)
    objective_value: int | None = None
    stats: SolveStats = field(default_factory=SolveStats)


def verify_solution(model: ConstraintModel, assignment: Mapping[str, int]) -> bool:
    """Re-evaluate every bound, constraint, clause and forced literal."""
    for v in model.order:
        if v not in assignment:
            raise KeyError(f"assignment lacks variable {v!r}")
    for name, lo, hi in model.int_vars:
        if not lo <= assignment[name] <= hi:
            return False
    for name in model.bool_vars:
        if assignment[name] not in (0, 1):
            return False
    for con in model.linear_constraints:
        if not con.evaluate(assignment):
            return False
    for clause in model.clauses:
        if not any((assignment[x.var] == 1) == x.positive for x in clause):
            return False
    for x in model.forced_literals:
        if (assignment[x.var] == 1) != x.positive:
            return False
    return True


# Objective-cutoff bound tightening scans every objective variable; beyond
# this many terms only the cutoff check itself is applied.
OBJECTIVE_TIGHTEN_LIMIT = 4000


class _Search:
    def __init__(self, model: ConstraintModel):
        model.check()
        self.names = list(model.order)
        index = {v: i for i, v in enumerate(self.names)}
        self.lo = [model.domain(v)[0] for v in self.names]
        self.hi = [model.domain(v)[1] for v in self.names]
        nv = len(self.names)
        self.lin: list[tuple[list[int], list[int], int]] = []
        for con in model.linear_constraints:
            coefs = [c for c, _ in con.terms]
            vars_ = [index[v] for _, v in con.terms]
            if con.op in ("<=", "=="):
                self.lin.append((coefs, vars_, con.bound))
            if con.op in (">=", "=="):
                self.lin.append(([-c for c in coefs], vars_, -con.bound))
        self.clauses = [[(index[x.var], x.positive) for x in cl] for cl in model.clauses]
        self.forced = [(index[x.var], x.positive) for x in model.forced_literals]
        # A lower-bound change can only tighten constraints in which the
        # variable has a positive coefficient (and vice versa), and only
        # clauses where the corresponding literal became false.
        self.watch_lo: list[list[int]] = [[] for _ in range(nv)]
        self.watch_hi: list[list[int]] = [[] for _ in range(nv)]
        for ci, (coefs, vars_, _b) in enumerate(self.lin):
            for a, x in zip(coefs, vars_):
                (self.watch_lo if a > 0 else self.watch_hi)[x].append(ci)
        for w in self.watch_lo + self.watch_hi:
            w[:] = sorted(set(w))
        self.cl_false_if_one: list[list[int]] = [[] for _ in range(nv)]
        self.cl_false_if_zero: list[list[int]] = [[] for _ in range(nv)]
        for ci, cl in enumerate(self.clauses):
            for x, pos in cl:
                (self.cl_false_if_zero if pos else self.cl_false_if_one)[x].append(ci)
        self.oc = [0] * nv
        for c, v in model.objective:
            self.oc[index[v]] += c
        self.obj_vars = [i for i in range(nv) if self.oc[i]]
        self.offset = model.objective_offset
        self.obj_min = sum(
            self.oc[i] * (self.lo[i] if self.oc[i] > 0 else self.hi[i]) for i in self.obj_vars
        )
        # domains only shrink, so no objective term can ever span more than this
        self.obj_span = max((abs(self.oc[i]) * (self.hi[i] - self.lo[i]) for i in self.obj_vars),
                            default=0)
        self.best: int | None = None
        self.trail: list[tuple[int, int, int]] = []
        self.lin_q: list[int] = []
        self.cl_q: list[int] = []
        self.lin_in = [False] * len(self.lin)
        self.cl_in = [False] * len(self.clauses)

    # -- bound updates ---------------------------------------------------

    def _wake_all(self, x: int) -> None:
        for group in (self.watch_lo[x], self.watch_hi[x]):
            for c in group:
                if not self.lin_in[c]:
                    self.lin_in[c] = True
                    self.lin_q.append(c)
        for group in (self.cl_false_if_one[x], self.cl_false_if_zero[x]):
            for c in group:
                if not self.cl_in[c]:
                    self.cl_in[c] = True
                    self.cl_q.append(c)

    def set_lo(self, x: int, val: int) -> bool:
        lo = self.lo[x]
        if val <= lo:
            return True
        if val > self.hi[x]:
            return False
        self.trail.append((x, lo, self.hi[x]))
        c = self.oc[x]
        if c > 0:
            self.obj_min += c * (val - lo)
        self.lo[x] = val
        lin_in = self.lin_in
        for ci in self.watch_lo[x]:
            if not lin_in[ci]:
                lin_in[ci] = True
                self.lin_q.append(ci)
        cl_in = self.cl_in
        for ci in self.cl_false_if_one[x]:
            if not cl_in[ci]:
                cl_in[ci] = True
                self.cl_q.append(ci)
        return True

    def set_hi(self, x: int, val: int) -> bool:
        hi = self.hi[x]
        if val >= hi:
            return True
        if val < self.lo[x]:
            return False
        self.trail.append((x, self.lo[x], hi))
        c = self.oc[x]
        if c < 0:
            self.obj_min += c * (val - hi)
        self.hi[x] = val
        lin_in = self.lin_in
        for ci in self.watch_hi[x]:
            if not lin_in[ci]:
                lin_in[ci] = True
                self.lin_q.append(ci)
        cl_in = self.cl_in
        for ci in self.cl_false_if_zero[x]:
            if not cl_in[ci]:
                cl_in[ci] = True
                self.cl_q.append(ci)
        return True

    def undo(self, mark: int) -> None:
        trail, lo, hi, oc = self.trail, self.lo, self.hi, self.oc
        while len(trail) > mark:
            x, old_lo, old_hi = trail.pop()
            c = oc[x]
            if c > 0:
                self.obj_min -= c * (lo[x] - old_lo)
            elif c < 0:
                self.obj_min -= c * (hi[x] - old_hi)
            lo[x] = old_lo
            hi[x] = old_hi

    def _clear_queues(self) -> None:
        for c in self.lin_q:
            self.lin_in[c] = False
        for c in self.cl_q:
            self.cl_in[c] = False
        self.lin_q.clear()
        self.cl_q.clear()

    # -- propagation -----------------------------------------------------

    def propagate(self) -> bool:
        lo, hi = self.lo, self.hi
        lin, clauses = self.lin, self.clauses
        lin_q, cl_q, lin_in, cl_in = self.lin_q, self.cl_q, self.lin_in, self.cl_in
        while True:
            while cl_q or lin_q:
                if cl_q:
                    ci = cl_q.pop()
                    cl_in[ci] = False
                    free = None
                    nfree = 0
                    sat = False
                    for x, pos in clauses[ci]:
                        if lo[x] == hi[x]:
                            if (lo[x] == 1) == pos:
                                sat = True
                                break
                        else:
                            nfree += 1
                            if nfree > 1:
                                break
                            free = (x, pos)
                    if sat or nfree > 1:
                        continue
                    if nfree == 0:
                        self._clear_queues()
                        return False
                    x, pos = free
                    ok = self.set_lo(x, 1) if pos else self.set_hi(x, 0)
                    if not ok:
                        self._clear_queues()
                        return False
                    continue
                ci = lin_q.pop()
                lin_in[ci] = False
                coefs, vars_, bound = lin[ci]
                minsum = 0
                for a, x in zip(coefs, vars_):
                    minsum += a * lo[x] if a > 0 else a * hi[x]
                slack = bound - minsum
                if slack < 0:
                    self._clear_queues()
                    return False
                for a, x in zip(coefs, vars_):
                    if a > 0:
                        if a * (hi[x] - lo[x]) > slack:
                            if not self.set_hi(x, lo[x] + slack // a):
                                self._clear_queues()
                                return False
                    else:
                        if -a * (hi[x] - lo[x]) > slack:
                            if not self.set_lo(x, hi[x] - slack // (-a)):
                                self._clear_queues()
                                return False
            if self.best is None:
                return True
            slack = self.best - 1 - self.offset - self.obj_min
            if slack < 0:
                return False
            if slack >= self.obj_span or len(self.obj_vars) > OBJECTIVE_TIGHTEN_LIMIT:
                return True
            oc = self.oc
            for x in self.obj_vars:
                a = oc[x]
                if a > 0:
                    if a * (hi[x] - lo[x]) > slack:
                        self.set_hi(x, lo[x] + slack // a)
                elif -a * (hi[x] - lo[x]) > slack:
                    self.set_lo(x, hi[x] - slack // (-a))
            if not (lin_q or cl_q):
                return True

    # -- search ----------------------------------------------------------

    def run(self, budget: SolverBudget, hint: list[int] | None = None) -> Solution:
        start = time.perf_counter()
        stats = SolveStats()
        best_assign: list[int] | None = None
        if hint is not None:
            self.best = self.offset + sum(self.oc[x] * hint[x] for x in self.obj_vars)
            best_assign = list(hint)
        nv = len(self.names)
        lo, hi = self.lo, self.hi
        deadline = start + budget.time_limit if budget.time_limit is not None else None
        node_limit = budget.node_limit
        stopped = False

        ok = True
        for x, pos in self.forced:
            ok = ok and (self.set_lo(x, 1) if pos else self.set_hi(x, 0))
        for x in range(nv):
            self._wake_all(x)
        if not ok:
            self._clear_queues()

        # stack entries: (trail mark, variable, value tried, scan position)
        stack: list[tuple[int, int, int, int]] = []
        pos = 0
        backtrack = not ok
        while True:
            if not backtrack:
                if self.propagate():
                    while pos < nv and lo[pos] == hi[pos]:
                        pos += 1
                    if pos == nv:
                        value = self.offset + sum(self.oc[x] * lo[x] for x in self.obj_vars)
                        if self.best is None or value < self.best:
                            self.best = value
                            best_assign = list(lo)
                            stats.solutions += 1
                        backtrack = True
                    else:
                        if node_limit is not None and stats.nodes >= node_limit:
                            stopped = True
                            break
                        if deadline is not None and stats.nodes % 64 == 0 and time.perf_counter() > deadline:
                            stopped = True
                            break
                        stats.nodes += 1
                        v = lo[pos]
                        stack.append((len(self.trail), pos, v, pos))
                        self.set_hi(pos, v)
                        continue
                else:
                    backtrack = True
            # backtrack to the most recent decision with an untried right branch
            while True:
                if not stack:
                    break
                mark, x, v, p = stack.pop()
                self.undo(mark)
                self._clear_queues()
                pos = p
                if self.best is not None and self.offset + self.obj_min >= self.best:
                    continue
                if self.set_lo(x, v + 1):
                    backtrack = False
                    break
            if backtrack:
                break

        stats.wall_time = time.perf_counter() - start
        if best_assign is None:
            status = Status.TIMEOUT if stopped else Status.INFEASIBLE
            return Solution(status, {}, None, stats)
        status = Status.FEASIBLE if stopped else Status.OPTIMAL
        assignment = {name: best_assign[i] for i, name in enumerate(self.names)}
        return Solution(status, assignment, self.best, stats)


def solve(model: ConstraintModel, budget: SolverBudget | None = None, seed: int = 0,
          hint: Mapping[str, int] | None = None) -> Solution:
    """Minimize the model objective.

    ``hint`` is a complete assignment used as the starting incumbent when it
    satisfies the model (it is ignored otherwise), so a budget-limited search
    never returns worse than the hint. ``seed`` is accepted for interface
    stability; the search order is fixed (declaration order, ascending
    values), so it does not change the result.
    """
    del seed
    start = None
    if hint is not None and all(v in hint for v in model.order):
        try:
            if verify_solution(model, hint):
                start = [hint[v] for v in model.order]
        except KeyError:
            start = None
    search = _Search(model)
    return search.run(budget or SolverBudget(), start)
