"""Write the bundled BLIF benchmark suite.

Run ``python -m sfqmap.benchmarks.generate [outdir]``. The arithmetic and
control circuits are built structurally; ``c17`` and ``s27`` follow the
public ISCAS netlists; the ``rnd*`` circuits are seeded random
ISCAS-style netlists sized like c432/c880 plus one larger instance.
"""

from __future__ import annotations

import random
import sys
from pathlib import Path

COVERS = {
    "AND": ["11 1"],
    "OR": ["1- 1", "-1 1"],
    "NAND": ["0- 1", "-0 1"],
    "NOR": ["00 1"],
    "XOR": ["01 1", "10 1"],
    "XNOR": ["00 1", "11 1"],
    "NOT": ["0 1"],
    "BUF": ["1 1"],
}


class Blif:
    def __init__(self, name: str):
        self.name = name
        self.inputs: list[str] = []
        self.outputs: list[str] = []
        self.gates: list[tuple[str, list[str], str]] = []
        self.latches: list[tuple[str, str]] = []
        self._k = 0

    def pi(self, name: str) -> str:
        self.inputs.append(name)
        return name

    def gate(self, kind: str, *ins: str, out: str | None = None) -> str:
        if out is None:
            self._k += 1
            out = f"w{self._k}"
        self.gates.append((kind, list(ins), out))
        return out

    def text(self) -> str:
        lines = [f".model {self.name}", ".inputs " + " ".join(self.inputs),
                 ".outputs " + " ".join(self.outputs)]
        for d, q in self.latches:
            lines.append(f".latch {d} {q} 0")
        for kind, ins, out in self.gates:
            lines.append(".names " + " ".join(ins + [out]))
            lines.extend(COVERS[kind])
        lines.append(".end")
        return "\n".join(lines) + "\n"


def c17() -> Blif:
    b = Blif("c17")
    for i in (1, 2, 3, 6, 7):
        b.pi(f"N{i}")
    b.gate("NAND", "N1", "N3", out="N10")
    b.gate("NAND", "N3", "N6", out="N11")
    b.gate("NAND", "N2", "N11", out="N16")
    b.gate("NAND", "N11", "N7", out="N19")
    b.gate("NAND", "N10", "N16", out="N22")
    b.gate("NAND", "N16", "N19", out="N23")
    b.outputs = ["N22", "N23"]
    return b


def s27() -> Blif:
    b = Blif("s27")
    for i in range(4):
        b.pi(f"G{i}")
    b.outputs = ["G17"]
    b.latches = [("G10", "G5"), ("G11", "G6"), ("G13", "G7")]
    b.gate("NOT", "G0", out="G14")
    b.gate("NOT", "G11", out="G17")
    b.gate("AND", "G14", "G6", out="G8")
    b.gate("OR", "G12", "G8", out="G15")
    b.gate("OR", "G3", "G8", out="G16")
    b.gate("NAND", "G16", "G15", out="G9")
    b.gate("NOR", "G14", "G11", out="G10")
    b.gate("NOR", "G5", "G9", out="G11")
    b.gate("NOR", "G1", "G7", out="G12")
    b.gate("NOR", "G2", "G12", out="G13")
    return b


def full_adder(b: Blif, a: str, c: str, cin: str) -> tuple[str, str]:
    t = b.gate("XOR", a, c)
    s = b.gate("XOR", t, cin)
    g = b.gate("AND", a, c)
    p = b.gate("AND", t, cin)
    return s, b.gate("OR", g, p)


def ripple_adder(width: int) -> Blif:
    b = Blif(f"rca{width}")
    xs = [b.pi(f"a{i}") for i in range(width)]
    ys = [b.pi(f"b{i}") for i in range(width)]
    carry = b.pi("cin")
    for i in range(width):
        s, carry = full_adder(b, xs[i], ys[i], carry)
        b.outputs.append(b.gate("BUF", s, out=f"s{i}"))
    b.outputs.append(b.gate("BUF", carry, out="cout"))
    return b


def array_multiplier(width: int) -> Blif:
    b = Blif(f"mult{width}")
    xs = [b.pi(f"x{i}") for i in range(width)]
    ys = [b.pi(f"y{i}") for i in range(width)]
    pp = [[b.gate("AND", xs[i], ys[j]) for i in range(width)] for j in range(width)]
    outs = [pp[0][0]]
    row = pp[0][1:] + [None]  # partial sums aligned with bit 1..width
    for j in range(1, width):
        nxt = []
        carry = None
        for i in range(width):
            a = pp[j][i]
            s_in = row[i]
            if s_in is None and carry is None:
                s, c = a, None
            elif s_in is None:
                s = b.gate("XOR", a, carry)
                c = b.gate("AND", a, carry)
            elif carry is None:
                s = b.gate("XOR", a, s_in)
                c = b.gate("AND", a, s_in)
            else:
                s, c = full_adder(b, a, s_in, carry)
            nxt.append(s)
            carry = c
        outs.append(nxt[0])
        row = nxt[1:] + [carry]
    outs.extend(r for r in row if r is not None)
    for k, sig in enumerate(outs):
        b.outputs.append(b.gate("BUF", sig, out=f"p{k}"))
    return b


def priority_encoder(width: int = 8) -> Blif:
    b = Blif(f"prio{width}")
    req = [b.pi(f"r{i}") for i in range(width)]
    # grant_i = r_i and no higher request
    higher = None
    grants = [None] * width
    for i in reversed(range(width)):
        if higher is None:
            grants[i] = req[i]
            higher = req[i]
        else:
            grants[i] = b.gate("AND", req[i], b.gate("NOT", higher))
            higher = b.gate("OR", higher, req[i])
    bits = (width - 1).bit_length()
    for k in range(bits):
        terms = [grants[i] for i in range(width) if i >> k & 1]
        acc = terms[0]
        for t in terms[1:]:
            acc = b.gate("OR", acc, t)
        b.outputs.append(b.gate("BUF", acc, out=f"y{k}"))
    b.outputs.append(b.gate("BUF", higher, out="valid"))
    return b


def tmr_voter(width: int = 8) -> Blif:
    b = Blif(f"voter{width}")
    a = [b.pi(f"a{i}") for i in range(width)]
    c = [b.pi(f"b{i}") for i in range(width)]
    d = [b.pi(f"c{i}") for i in range(width)]
    for i in range(width):
        ab = b.gate("AND", a[i], c[i])
        ac = b.gate("AND", a[i], d[i])
        bc = b.gate("AND", c[i], d[i])
        b.outputs.append(b.gate("OR", b.gate("OR", ab, ac), bc, out=f"v{i}"))
    # disagreement flag: some replica differs from the vote in some bit
    flags = [b.gate("XOR", b.gate("XOR", a[i], c[i]), d[i]) for i in range(width)]
    acc = flags[0]
    for f in flags[1:]:
        acc = b.gate("OR", acc, f)
    b.outputs.append(b.gate("BUF", acc, out="odd"))
    return b


def parity_tree(width: int = 32) -> Blif:
    b = Blif(f"parity{width}")
    level = [b.pi(f"d{i}") for i in range(width)]
    while len(level) > 1:
        nxt = [b.gate("XOR", level[i], level[i + 1]) for i in range(0, len(level) - 1, 2)]
        if len(level) % 2:
            nxt.append(level[-1])
        level = nxt
    b.outputs.append(b.gate("BUF", level[0], out="parity"))
    return b


def random_iscas(name: str, n_in: int, n_out: int, n_gates: int, seed: int) -> Blif:
    """Levelized random logic with ISCAS-like gate mix and local wiring."""
    rng = random.Random(seed)
    b = Blif(name)
    sigs = [b.pi(f"i{k}") for k in range(n_in)]
    unused = set(sigs)
    mix = ["NAND"] * 5 + ["AND"] * 3 + ["NOR"] * 2 + ["OR"] * 2 + ["XOR"] * 2 + ["NOT"] * 2
    window = max(24, n_in)
    while len(b.gates) < n_gates - n_out:
        kind = rng.choice(mix)
        arity = 1 if kind == "NOT" else 2

        def pick() -> str:
            if unused and rng.random() < 0.5:
                return rng.choice(sorted(unused))
            return sigs[max(0, len(sigs) - 1 - int(rng.expovariate(1 / window)))]

        ins = []
        while len(ins) < arity:
            s = pick()
            if s not in ins:
                ins.append(s)
        out = b.gate(kind, *ins)
        for s in ins:
            unused.discard(s)
        unused.add(out)
        sigs.append(out)
    # fold leftover loose ends together until n_out remain
    loose = sorted(unused, key=sigs.index)
    while len(loose) > n_out:
        x, y = loose.pop(0), loose.pop(0)
        loose.append(b.gate(rng.choice(["XOR", "NAND", "OR"]), x, y))
    while len(loose) < n_out:
        cand = sigs[rng.randrange(n_in, len(sigs))]
        if cand not in loose:
            loose.append(cand)
    for k, s in enumerate(loose):
        b.outputs.append(b.gate("BUF", s, out=f"o{k}"))
    return b


def suite() -> list[Blif]:
    return [
        c17(),
        s27(),
        ripple_adder(4),
        ripple_adder(8),
        priority_encoder(8),
        tmr_voter(8),
        parity_tree(32),
        array_multiplier(8),
        random_iscas("rnd432", 36, 7, 160, seed=432),
        random_iscas("rnd880", 60, 26, 383, seed=880),
        random_iscas("rnd2k", 120, 64, 1400, seed=2000),
    ]


def main(argv: list[str] | None = None) -> None:
    argv = sys.argv[1:] if argv is None else argv
    out = Path(argv[0]) if argv else Path(__file__).parent
    out.mkdir(parents=True, exist_ok=True)
    for b in suite():
        (out / f"{b.name}.blif").write_text(b.text())
        print(f"wrote {b.name}.blif ({len(b.gates)} gates)")


if __name__ == "__main__":
    main()
