import pytest

from oracles import mutations
from sfqmap import benchmarks
from sfqmap.decompose import MappingConfig
from sfqmap.netlist import GateKind, NetlistError, equivalent, make_network
from sfqmap.pipeline import map_network
from sfqmap.verify import verify_timing

SMALL = ["c17", "s27", "rca4", "prio8"]


def test_bundled_names_and_sizes():
    names = benchmarks.names()
    assert len(names) >= 8
    for name in names:
        net = benchmarks.load(name)
        gates = sum(1 for node in net.nodes if node.kind not in (GateKind.PI, GateKind.PO))
        assert 10 <= gates <= 2000, (name, gates)


@pytest.mark.parametrize("name", SMALL)
@pytest.mark.parametrize("n", [1, 2, 4, 7])
def test_small_circuits_map_cleanly(name, n):
    net = benchmarks.load(name)
    res = map_network(net, MappingConfig(n=n))
    assert res.ok, str(res.verification)
    assert equivalent(net, res.sfq.net)
    assert res.report.dff_count == res.dff_count
    kinds = {node.kind for node in res.sfq.net.nodes}
    assert GateKind.BUF not in kinds and GateKind.OR not in kinds


def test_single_phase_fills_every_gap():
    res = map_network(benchmarks.load("c17"), MappingConfig(n=1))
    net, sg = res.sfq.net, res.stages.sigma
    for u, v, _p in net.edges():
        # with one phase every clocked element sits exactly one stage after its
        # nearest clocked predecessor
        if net.nodes[v].kind in (GateKind.NOT, GateKind.XOR, GateKind.DFF):
            assert sg[v] - sg[u] <= 1


def test_embedding_never_worse_along_divisors():
    net = benchmarks.load("s27")
    memo = {}
    counts = {n: map_network(net, MappingConfig(n=n), memo=memo).dff_count for n in (1, 2, 4, 8)}
    assert counts[2] <= counts[1] and counts[4] <= counts[2] and counts[8] <= counts[4]


def test_mutations_on_c17_are_caught():
    res = map_network(benchmarks.load("c17"), MappingConfig(n=2))
    assert res.dff_count > 0
    for what, sfq, st in mutations(res.sfq, res.stages):
        assert not verify_timing(sfq, st).ok, what


def test_invalid_network_raises():
    cyc = make_network([("PI", []), ("AND", [0, 2]), ("AND", [0, 1]), ("PO", [2])])
    with pytest.raises(NetlistError, match="cycle"):
        map_network(cyc, MappingConfig(n=2))


def test_or_styles_both_legal():
    net = benchmarks.load("voter8")
    for style in ("merger", "sa-or"):
        res = map_network(net, MappingConfig(n=2, or_style=style))
        assert res.ok
        assert res.report.or_style == style


def test_edge_mode_maps():
    res = map_network(benchmarks.load("rca4"), MappingConfig(n=4, objective_mode="edge"))
    assert res.ok and res.report.objective_mode == "edge"


def test_timings_recorded_but_not_reported():
    res = map_network(benchmarks.load("c17"), MappingConfig(n=2))
    assert set(res.timings) == {"decompose", "phase", "splitters", "dff", "verify"}
    assert "timings" not in res.report.to_dict()
