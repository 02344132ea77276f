"""Bundled BLIF benchmarks (regenerate with ``python -m sfqmap.benchmarks.generate``)."""

from __future__ import annotations

from importlib import resources

from ..netlist import Network, parse_blif


def names() -> list[str]:
    files = resources.files(__name__).iterdir()
    found = sorted(f.name[:-5] for f in files if f.name.endswith(".blif"))
    # smallest first, which is also the order of the generator
    order = ["c17", "s27", "rca4", "rca8", "prio8", "voter8", "parity32", "mult8",
             "rnd432", "rnd880", "rnd2k"]
    return [n for n in order if n in found] + [n for n in found if n not in order]


def path(name: str):
    return resources.files(__name__).joinpath(f"{name}.blif")


def load(name: str) -> Network:
    return parse_blif(path(name).read_text())
