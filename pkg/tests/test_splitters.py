from sfqmap.decompose import SfqNetwork
from sfqmap.dff import brute_force_min_dffs, extract_paths, insert_dffs
from sfqmap.decompose import MappingConfig
from sfqmap.netlist import GateKind, make_network
from sfqmap.phase import StageAssignment
from sfqmap.splitters import insert_splitter_trees
from sfqmap.verify import verify_timing


def _fan3():
    # g = NOT@2 driving three NOTs at 3, 3, 5
    net = make_network([("PI", []), ("NOT", [0]), ("NOT", [1]), ("NOT", [1]), ("NOT", [1]),
                        ("PO", [2]), ("PO", [3]), ("PO", [4])])
    return SfqNetwork.from_network(net), StageAssignment(8, (0, 2, 3, 3, 5, 3, 3, 5))


def test_chain_order_and_stages():
    sfq, st = _fan3()
    out, st2, plans = insert_splitter_trees(sfq, st)
    (plan,) = plans
    s0, s1 = plan.splitters
    assert plan.stages == (3, 3)
    net = out.net
    assert net.nodes[s0].fanins == (1,)
    assert {r for r, _ in net.fanouts[s0]} == {2, s1}
    assert {r for r, _ in net.fanouts[s1]} == {3, 4}
    assert all(len(net.fanouts[v]) <= 1 for v in range(len(net))
               if net.nodes[v].kind != GateKind.SPLITTER)
    assert st2.sigma[s0] == 3 and st2.sigma[s1] == 3


def test_single_fanout_untouched():
    net = make_network([("PI", []), ("NOT", [0]), ("PO", [1])])
    sfq = SfqNetwork.from_network(net)
    st = StageAssignment(2, (0, 1, 1))
    out, st2, plans = insert_splitter_trees(sfq, st)
    assert out.net == net and st2 == st and plans == []


def test_gap_left_for_dff_insertion():
    # PI@0 drives a merger at stage 0 and a NOT at stage 4, n=4
    net = make_network([("PI", []), ("PI", []), ("MERGER", [0, 1]), ("NOT", [0]),
                        ("NOT", [2]), ("PO", [4]), ("PO", [3])])
    sfq = SfqNetwork.from_network(net)
    st = StageAssignment(4, (0, 0, 0, 4, 1, 1, 4))
    out, st2, plans = insert_splitter_trees(sfq, st)
    (plan,) = plans
    assert len(plan.splitters) == 1 and plan.stages == (0,)
    spl = plan.splitters[0]
    assert {r for r, _ in out.net.fanouts[spl]} == {2, 3}
    (path,) = [p for p in extract_paths(out, st2) if spl in p.internal]
    expected = brute_force_min_dffs(path, 4)
    assert expected == 0
    _, _, stats = insert_dffs(out, st2, MappingConfig(n=4))
    assert stats.dff_count == expected
