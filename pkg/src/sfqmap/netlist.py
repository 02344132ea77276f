"""Gate-level netlist representation, parsing, validation and simulation.

A :class:`Network` is an immutable DAG of typed nodes with dense integer ids.
Two source formats are understood: a pattern-based BLIF subset and a native
JSON netlist (optionally annotated with per-gate stages).
"""

from __future__ import annotations

import enum
import heapq
import json
import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping


class GateKind(str, enum.Enum):
    PI = "PI"
    PO = "PO"
    AND = "AND"
    OR = "OR"
    XOR = "XOR"
    NOT = "NOT"
    BUF = "BUF"
    DFF = "DFF"
    SPLITTER = "SPLITTER"
    MERGER = "MERGER"

    def __str__(self) -> str:
        return self.value


ARITY = {
    GateKind.PI: 0,
    GateKind.PO: 1,
    GateKind.AND: 2,
    GateKind.OR: 2,
    GateKind.XOR: 2,
    GateKind.NOT: 1,
    GateKind.BUF: 1,
    GateKind.DFF: 1,
    GateKind.SPLITTER: 1,
    GateKind.MERGER: 2,
}


class NetlistError(ValueError):
    """Raised for malformed netlist sources. Carries a 1-based line/column."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.message = message
        self.line = line
        self.column = column
        where = f"line {line}, column {column}: " if line is not None else ""
        super().__init__(where + message)


class CycleError(ValueError):
    pass


@dataclass(frozen=True)
class Node:
    id: int
    kind: GateKind
    fanins: tuple[int, ...] = ()
    name: str = ""


@dataclass(frozen=True)
class Network:
    nodes: tuple[Node, ...]
    inputs: tuple[int, ...]
    outputs: tuple[int, ...]
    name: str = "top"

    def __len__(self) -> int:
        return len(self.nodes)

    def kind(self, v: int) -> GateKind:
        return self.nodes[v].kind

    @cached_property
    def fanouts(self) -> tuple[tuple[tuple[int, int], ...], ...]:
        """Per node, the (reader, pin) pairs it drives, in reader-id order."""
        outs: list[list[tuple[int, int]]] = [[] for _ in self.nodes]
        for node in self.nodes:
            for pin, f in enumerate(node.fanins):
                if 0 <= f < len(outs):
                    outs[f].append((node.id, pin))
        return tuple(tuple(o) for o in outs)

    def edges(self) -> Iterable[tuple[int, int, int]]:
        """All (src, dst, pin) triples ordered by dst then pin."""
        for node in self.nodes:
            for pin, f in enumerate(node.fanins):
                yield f, node.id, pin

    def count_kinds(self) -> dict[str, int]:
        counts: dict[str, int] = {}
        for node in self.nodes:
            counts[node.kind.value] = counts.get(node.kind.value, 0) + 1
        return dict(sorted(counts.items()))


@dataclass(frozen=True)
class Violation:
    rule: str
    node: int | None
    message: str


@dataclass
class ValidationReport:
    violations: list[Violation] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def add(self, rule: str, node: int | None, message: str) -> None:
        self.violations.append(Violation(rule, node, message))

    def rules(self) -> set[str]:
        return {v.rule for v in self.violations}

    def __str__(self) -> str:
        if self.ok:
            return "ok"
        return "\n".join(f"[{v.rule}] node {v.node}: {v.message}" for v in self.violations)


# ---------------------------------------------------------------------------
# construction helpers


class NetworkBuilder:
    """Incremental construction with dense ids; used by parsers and passes."""

    def __init__(self, name: str = "top"):
        self.name = name
        self._kinds: list[GateKind] = []
        self._fanins: list[list[int]] = []
        self._names: list[str] = []
        self.inputs: list[int] = []
        self.outputs: list[int] = []

    def add(self, kind: GateKind, fanins: Iterable[int] = (), name: str = "") -> int:
        v = len(self._kinds)
        self._kinds.append(GateKind(kind))
        self._fanins.append(list(fanins))
        self._names.append(name or f"n{v}")
        if kind == GateKind.PI:
            self.inputs.append(v)
        elif kind == GateKind.PO:
            self.outputs.append(v)
        return v

    def set_fanins(self, v: int, fanins: Iterable[int]) -> None:
        self._fanins[v] = list(fanins)

    def __len__(self) -> int:
        return len(self._kinds)

    def build(self) -> Network:
        nodes = tuple(
            Node(v, k, tuple(f), n)
            for v, (k, f, n) in enumerate(zip(self._kinds, self._fanins, self._names))
        )
        return Network(nodes, tuple(self.inputs), tuple(self.outputs), self.name)


def make_network(
    gates: Iterable[tuple[str | GateKind, Iterable[int]] | tuple[str | GateKind, Iterable[int], str]],
    name: str = "top",
) -> Network:
    """Build a network from ``(kind, fanins[, name])`` tuples listed in id order."""
    b = NetworkBuilder(name)
    for g in gates:
        kind, fanins = g[0], g[1]
        b.add(GateKind(kind), fanins, g[2] if len(g) > 2 else "")
    return b.build()


# ---------------------------------------------------------------------------
# validation and traversal


def validate(net: Network) -> ValidationReport:
    report = ValidationReport()
    n = len(net.nodes)
    for v, node in enumerate(net.nodes):
        if node.id != v:
            report.add("ids", v, f"node at position {v} carries id {node.id}")
        for f in node.fanins:
            if not 0 <= f < n:
                report.add("dangling", v, f"fanin {f} does not exist")
        expected = ARITY.get(node.kind)
        if expected is not None and len(node.fanins) != expected:
            report.add(
                "arity", v, f"{node.kind.value} expects {expected} fanins, has {len(node.fanins)}"
            )
    pis = set(net.inputs)
    pos = set(net.outputs)
    for v, node in enumerate(net.nodes):
        if (node.kind == GateKind.PI) != (v in pis):
            report.add("io", v, "PI kind and primary-input list disagree")
        if (node.kind == GateKind.PO) != (v in pos):
            report.add("io", v, "PO kind and primary-output list disagree")
    if not net.outputs:
        report.add("io", None, "no primary outputs")
    for v, outs in enumerate(net.fanouts):
        if net.nodes[v].kind == GateKind.PO and outs:
            report.add("po-fanout", v, "primary output drives other nodes")
    for cyc in _find_cycles(net):
        report.add("cycle", cyc[0], "cycle through nodes " + " -> ".join(map(str, cyc)))
    return report


def _find_cycles(net: Network) -> list[list[int]]:
    """Iterative three-colour DFS; one witness cycle per back edge found."""
    n = len(net.nodes)
    color = [0] * n
    cycles = []
    for root in range(n):
        if color[root]:
            continue
        stack = [(root, iter(net.fanouts[root]))]
        path = [root]
        color[root] = 1
        while stack:
            v, it = stack[-1]
            advanced = False
            for w, _pin in it:
                if color[w] == 0:
                    color[w] = 1
                    stack.append((w, iter(net.fanouts[w])))
                    path.append(w)
                    advanced = True
                    break
                if color[w] == 1:
                    cycles.append(path[path.index(w):] + [w])
            if not advanced:
                color[v] = 2
                stack.pop()
                path.pop()
    return cycles


def topological_order(net: Network) -> list[int]:
    """Kahn's algorithm with ascending-id tie breaking."""
    n = len(net.nodes)
    indeg = [len(node.fanins) for node in net.nodes]
    heap = [v for v in range(n) if indeg[v] == 0]
    heapq.heapify(heap)
    order = []
    while heap:
        v = heapq.heappop(heap)
        order.append(v)
        for w, _pin in net.fanouts[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(order) != n:
        stuck = min(v for v in range(n) if indeg[v] > 0)
        raise CycleError(f"cycle detected (node {stuck} is on or behind a cycle)")
    return order


# ---------------------------------------------------------------------------
# simulation


def _eval(kind: GateKind, a: int, b: int, mask: int) -> int:
    if kind in (GateKind.AND,):
        return a & b
    if kind in (GateKind.OR, GateKind.MERGER):
        return a | b
    if kind == GateKind.XOR:
        return a ^ b
    if kind == GateKind.NOT:
        return a ^ mask
    # BUF, DFF, SPLITTER, PO: identity in the functional view
    return a


def simulate_words(net: Network, words: Mapping[int, int], width: int) -> dict[int, int]:
    """Bit-parallel evaluation: each PI carries a ``width``-bit word."""
    mask = (1 << width) - 1
    value = [0] * len(net.nodes)
    for v in topological_order(net):
        node = net.nodes[v]
        if node.kind == GateKind.PI:
            if v not in words:
                raise KeyError(f"missing input value for PI {v} ({node.name})")
            value[v] = words[v] & mask
            continue
        a = value[node.fanins[0]]
        b = value[node.fanins[1]] if len(node.fanins) > 1 else 0
        value[v] = _eval(node.kind, a, b, mask)
    return {o: value[o] for o in net.outputs}


def simulate(net: Network, inputs: Mapping[int | str, int]) -> dict[int, int]:
    """Evaluate one input vector. Keys may be PI ids or PI names."""
    by_name = {net.nodes[i].name: i for i in net.inputs}
    words = {}
    for key, bit in inputs.items():
        v = by_name[key] if isinstance(key, str) else key
        words[v] = 1 if bit else 0
    for i in net.inputs:
        if i not in words:
            raise KeyError(f"missing input bit for PI {i} ({net.nodes[i].name})")
    return simulate_words(net, words, 1)


def input_words(num_inputs: int, *, exhaustive_limit: int = 16, samples: int = 10_000,
                seed: int = 0) -> tuple[list[int], int]:
    """Packed stimulus: exhaustive when small, else seeded random vectors."""
    if num_inputs <= exhaustive_limit:
        width = 1 << num_inputs
        words = []
        for i in range(num_inputs):
            block = (1 << (1 << i)) - 1  # 2**i ones
            period = 1 << (i + 1)
            word = 0
            for start in range(1 << i, width, period):
                word |= block << start
            words.append(word)
        return words, width
    rng = random.Random(seed)
    return [rng.getrandbits(samples) for _ in range(num_inputs)], samples


def equivalent(a: Network, b: Network, *, seed: int = 0, samples: int = 10_000) -> bool:
    """Functional equivalence, matching PIs and POs by position."""
    if len(a.inputs) != len(b.inputs) or len(a.outputs) != len(b.outputs):
        return False
    words, width = input_words(len(a.inputs), samples=samples, seed=seed)
    ra = simulate_words(a, dict(zip(a.inputs, words)), width)
    rb = simulate_words(b, dict(zip(b.inputs, words)), width)
    return [ra[o] for o in a.outputs] == [rb[o] for o in b.outputs]


# ---------------------------------------------------------------------------
# BLIF subset


def _logical_lines(text: str) -> list[tuple[int, int, list[str]]]:
    """Strip comments, join continuations; yield (line, column, tokens)."""
    out = []
    pending: list[str] = []
    start = None
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].rstrip()
        cont = line.endswith("\\")
        if cont:
            line = line[:-1]
        if line.strip():
            if start is None:
                stripped = line.lstrip()
                start = (lineno, len(line) - len(stripped) + 1)
            pending.extend(line.split())
        if not cont and pending:
            out.append((start[0], start[1], pending))
            pending, start = [], None
    if pending:
        out.append((start[0], start[1], pending))
    return out


def _cover_truth_table(k: int, rows: list[tuple[str, str]], line: int) -> int:
    """Truth table (bit m set iff minterm m is 1) of a single-output cover."""
    if k > 16:
        raise NetlistError(f"too many inputs ({k}) for a pattern-matched .names", line, 1)
    size = 1 << k
    on = 0
    polarity = None
    for cube, out in rows:
        if out not in ("0", "1") or len(cube) != k or any(c not in "01-" for c in cube):
            raise NetlistError(f"malformed cover row '{cube} {out}'", line, 1)
        if polarity is None:
            polarity = out
        elif polarity != out:
            raise NetlistError("mixed on-set/off-set cover", line, 1)
        for m in range(size):
            if all(c == "-" or int(c) == (m >> i) & 1 for i, c in enumerate(cube)):
                on |= 1 << m
    if polarity == "0":
        on ^= (1 << size) - 1
    return on


def _canonical_tables(k: int) -> dict[int, str]:
    size = 1 << k
    full = (1 << size) - 1
    and_t = 1 << (size - 1)
    or_t = full ^ 1
    xor_t = 0
    for m in range(size):
        if bin(m).count("1") % 2:
            xor_t |= 1 << m
    tables = {}
    if k == 1:
        tables[0b10] = "BUF"
        tables[0b01] = "NOT"
        return tables
    # insertion order matters only if tables collide, which they do not for k >= 2
    tables[and_t] = "AND"
    tables[full ^ and_t] = "NAND"
    tables[or_t] = "OR"
    tables[full ^ or_t] = "NOR"
    tables[xor_t] = "XOR"
    tables[full ^ xor_t] = "XNOR"
    return tables


def recognize_cover(k: int, rows: list[tuple[str, str]], line: int = 0) -> str:
    """Name the canonical function a ``.names`` cover implements, or raise."""
    if k == 0:
        raise NetlistError("constant .names are not supported", line, 1)
    table = _cover_truth_table(k, rows, line)
    name = _canonical_tables(k).get(table)
    if name is None:
        raise NetlistError("unsupported truth table pattern", line, 1)
    return name


@dataclass
class _NamesBlock:
    inputs: list[str]
    output: str
    rows: list[tuple[str, str]]
    line: int
    column: int
    function: str = ""


def parse_blif(text: str) -> Network:
    lines = _logical_lines(text)
    model = "top"
    inputs: list[tuple[str, int, int]] = []
    outputs: list[tuple[str, int, int]] = []
    blocks: list[_NamesBlock] = []
    latches: list[tuple[str, str, int, int]] = []
    current: _NamesBlock | None = None
    ended = False
    for lineno, col, toks in lines:
        head = toks[0]
        if ended:
            raise NetlistError(f"content after .end: '{head}'", lineno, col)
        if not head.startswith("."):
            if current is None:
                raise NetlistError(f"unexpected token '{head}'", lineno, col)
            if len(toks) == 1 and not current.inputs:
                current.rows.append(("", toks[0]))
            elif len(toks) == 2:
                current.rows.append((toks[0], toks[1]))
            else:
                raise NetlistError("malformed cover row", lineno, col)
            continue
        current = None
        if head == ".model":
            if len(toks) > 1:
                model = toks[1]
        elif head == ".inputs":
            inputs.extend((t, lineno, col) for t in toks[1:])
        elif head == ".outputs":
            outputs.extend((t, lineno, col) for t in toks[1:])
        elif head == ".names":
            if len(toks) < 2:
                raise NetlistError(".names needs at least an output", lineno, col)
            current = _NamesBlock(toks[1:-1], toks[-1], [], lineno, col)
            blocks.append(current)
        elif head == ".latch":
            if len(toks) < 3:
                raise NetlistError(".latch needs input and output", lineno, col)
            latches.append((toks[1], toks[2], lineno, col))
        elif head == ".end":
            ended = True
        elif head in (".clock",):
            pass
        else:
            raise NetlistError(f"unsupported directive '{head}'", lineno, col)
    if not outputs:
        raise NetlistError("no primary outputs")

    defined: dict[str, tuple[int, int]] = {}

    def define(sig: str, lineno: int, col: int) -> None:
        if sig in defined:
            raise NetlistError(f"duplicate definition of '{sig}'", lineno, col)
        defined[sig] = (lineno, col)

    for sig, lineno, col in inputs:
        define(sig, lineno, col)
    for _src, out, lineno, col in latches:
        define(out, lineno, col)
    for blk in blocks:
        define(blk.output, blk.line, blk.column)
        if not blk.inputs:
            raise NetlistError("constant .names are not supported", blk.line, blk.column)
        blk.function = recognize_cover(len(blk.inputs), blk.rows, blk.line)

    def size(blk: _NamesBlock) -> int:
        k = len(blk.inputs)
        if blk.function in ("BUF", "NOT"):
            return 1
        base = k - 1
        return base + (1 if blk.function in ("NAND", "NOR", "XNOR") else 0)

    # ids: PIs, latch outputs, then each block's nodes; the output signal is
    # the last node of its block so forward references resolve up front
    sig_id: dict[str, int] = {}
    next_id = 0
    for sig, _l, _c in inputs:
        sig_id[sig] = next_id
        next_id += 1
    for _src, out, _l, _c in latches:
        sig_id[out] = next_id
        next_id += 1
    block_base = []
    for blk in blocks:
        block_base.append(next_id)
        next_id += size(blk)
        sig_id[blk.output] = next_id - 1

    b = NetworkBuilder(model)
    for sig, _l, _c in inputs:
        b.add(GateKind.PI, (), sig)
    for _src, out, _l, _c in latches:
        b.add(GateKind.PI, (), out)
    for blk, base in zip(blocks, block_base):
        fan = []
        for s in blk.inputs:
            if s not in sig_id:
                raise NetlistError(f"undeclared signal '{s}'", blk.line, blk.column)
            fan.append(sig_id[s])
        fn = blk.function
        if fn in ("BUF", "NOT"):
            b.add(GateKind(fn), fan, blk.output)
            continue
        op = {"AND": GateKind.AND, "NAND": GateKind.AND, "OR": GateKind.OR,
              "NOR": GateKind.OR, "XOR": GateKind.XOR, "XNOR": GateKind.XOR}[fn]
        inverted = fn in ("NAND", "NOR", "XNOR")
        fan.sort()
        acc = fan[0]
        steps = len(fan) - 1
        for i, f in enumerate(fan[1:]):
            last = i == steps - 1 and not inverted
            acc = b.add(op, (acc, f), blk.output if last else f"{blk.output}${i}")
        if inverted:
            b.add(GateKind.NOT, (acc,), blk.output)
        assert len(b) == base + size(blk)
    po_names = set()
    for sig, lineno, col in outputs:
        if sig not in sig_id:
            raise NetlistError(f"undeclared signal '{sig}'", lineno, col)
        b.add(GateKind.PO, (sig_id[sig],), sig)
        po_names.add(sig)
    for src, _out, lineno, col in latches:
        if src not in sig_id:
            raise NetlistError(f"undeclared signal '{src}'", lineno, col)
        name = src if src not in po_names else f"{src}$latch"
        po_names.add(name)
        b.add(GateKind.PO, (sig_id[src],), name)
    return b.build()


# ---------------------------------------------------------------------------
# native JSON


def network_to_dict(net: Network, stages=None, extra: Mapping | None = None) -> dict:
    gates = []
    for node in net.nodes:
        g = {"id": node.id, "kind": node.kind.value, "name": node.name, "fanins": list(node.fanins)}
        if stages is not None:
            s = stages.sigma[node.id]
            g["stage"] = s
            g["epoch"] = s // stages.n
            g["phase"] = s % stages.n
        gates.append(g)
    doc = {"name": net.name, "inputs": list(net.inputs), "outputs": list(net.outputs), "gates": gates}
    if stages is not None:
        doc["phases"] = stages.n
    if extra:
        doc.update(extra)
    return doc


def parse_json_netlist(text: str | Mapping) -> tuple[Network, dict]:
    """Parse the native JSON form. Returns the network and the raw document."""
    try:
        doc = json.loads(text) if isinstance(text, str) else dict(text)
    except json.JSONDecodeError as exc:
        raise NetlistError(f"invalid JSON: {exc.msg}", exc.lineno, exc.colno) from None
    for key in ("inputs", "outputs", "gates"):
        if key not in doc:
            raise NetlistError(f"JSON netlist lacks '{key}'")
    if not doc["outputs"]:
        raise NetlistError("no primary outputs")
    gates = sorted(doc["gates"], key=lambda g: g["id"])
    ids = [g["id"] for g in gates]
    if ids != list(range(len(gates))):
        raise NetlistError("gate ids must be dense integers 0..N-1 without duplicates")
    b = NetworkBuilder(doc.get("name", "top"))
    for g in gates:
        try:
            kind = GateKind(g["kind"])
        except ValueError:
            raise NetlistError(f"unknown gate kind '{g['kind']}' for id {g['id']}") from None
        b.add(kind, [int(f) for f in g.get("fanins", [])], g.get("name", ""))
    net = b.build()
    if sorted(doc["inputs"]) != list(net.inputs) or sorted(doc["outputs"]) != list(net.outputs):
        raise NetlistError("inputs/outputs lists do not match PI/PO gate kinds")
    net = Network(net.nodes, tuple(doc["inputs"]), tuple(doc["outputs"]), net.name)
    return net, doc


def parse_netlist(text: str) -> Network:
    """Parse BLIF or native JSON, picking the format from the first character."""
    if text.lstrip().startswith("{"):
        return parse_json_netlist(text)[0]
    return parse_blif(text)
