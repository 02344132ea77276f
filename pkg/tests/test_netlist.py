import pytest

from sfqmap.netlist import (
    CycleError,
    GateKind,
    NetlistError,
    equivalent,
    make_network,
    network_to_dict,
    parse_blif,
    parse_json_netlist,
    parse_netlist,
    simulate,
    topological_order,
    validate,
)

AND_BLIF = """
.model tiny
.inputs a b
.outputs y
.names a b y
11 1
.end
"""


def test_blif_single_and():
    net = parse_blif(AND_BLIF)
    counts = net.count_kinds()
    assert counts == {"AND": 1, "PI": 2, "PO": 1}
    assert net.name == "tiny"


def test_blif_or_cover_recognized():
    net = parse_blif(".model m\n.inputs a b\n.outputs c\n.names a b c\n1- 1\n-1 1\n.end\n")
    assert net.count_kinds()["OR"] == 1


def test_blif_no_outputs_is_error():
    with pytest.raises(NetlistError, match="no primary outputs"):
        parse_blif(".model empty\n.end\n")


def test_blif_unrecognized_cover_reports_position():
    text = ".model m\n.inputs a b\n.outputs c\n.names a b c\n10 1\n.end\n"
    with pytest.raises(NetlistError) as err:
        parse_blif(text)
    assert err.value.line is not None


@pytest.mark.parametrize("rows,kind", [
    (["0- 1", "-0 1"], "NAND"),
    (["00 1"], "NOR"),
    (["01 1", "10 1"], "XOR"),
    (["00 1", "11 1"], "XNOR"),
])
def test_blif_negated_covers_simulate_correctly(rows, kind):
    text = ".model m\n.inputs a b\n.outputs c\n.names a b c\n" + "\n".join(rows) + "\n.end\n"
    net = parse_blif(text)
    ref = {"NAND": lambda a, b: 1 - (a & b), "NOR": lambda a, b: 1 - (a | b),
           "XOR": lambda a, b: a ^ b, "XNOR": lambda a, b: 1 - (a ^ b)}[kind]
    for a in (0, 1):
        for b in (0, 1):
            (out,) = simulate(net, {"a": a, "b": b}).values()
            assert out == ref(a, b)


def test_blif_wide_and_becomes_two_input_tree():
    net = parse_blif(".model m\n.inputs a b c d\n.outputs y\n.names a b c d y\n1111 1\n.end\n")
    assert net.count_kinds()["AND"] == 3
    assert validate(net).ok


def test_validate_ok_and_arity_and_cycle():
    ok = make_network([("PI", []), ("NOT", [0]), ("PO", [1])])
    assert validate(ok).ok
    bad_arity = make_network([("PI", []), ("PI", []), ("PI", []), ("AND", [0, 1, 2]), ("PO", [3])])
    assert "arity" in validate(bad_arity).rules()
    cyc = make_network([("PI", []), ("AND", [0, 2]), ("AND", [0, 1]), ("PO", [2])])
    assert "cycle" in validate(cyc).rules()


def test_topological_order_chain_and_diamond():
    chain = make_network([("PI", []), ("NOT", [0]), ("PO", [1])])
    assert topological_order(chain) == [0, 1, 2]
    diamond = make_network([("PI", []), ("NOT", [0]), ("NOT", [0]), ("XOR", [1, 2]), ("PO", [3])])
    assert topological_order(diamond) == [0, 1, 2, 3, 4]


def test_topological_order_rejects_cycle():
    cyc = make_network([("PI", []), ("AND", [0, 2]), ("AND", [0, 1]), ("PO", [2])])
    with pytest.raises(CycleError):
        topological_order(cyc)


def test_simulate_primitives():
    xor = make_network([("PI", []), ("PI", []), ("XOR", [0, 1]), ("PO", [2])])
    assert simulate(xor, {0: 1, 1: 1}) == {3: 0}
    merger = make_network([("PI", []), ("PI", []), ("MERGER", [0, 1]), ("PO", [2])])
    assert simulate(merger, {0: 0, 1: 1}) == {3: 1}
    dff = make_network([("PI", []), ("DFF", [0]), ("PO", [1])])
    assert [simulate(dff, {0: x})[2] for x in (0, 1)] == [0, 1]


def test_equivalent_detects_difference():
    a = make_network([("PI", []), ("PI", []), ("AND", [0, 1]), ("PO", [2])])
    b = make_network([("PI", []), ("PI", []), ("OR", [0, 1]), ("PO", [2])])
    assert equivalent(a, a)
    assert not equivalent(a, b)


def test_json_round_trip():
    net = parse_blif(AND_BLIF)
    doc = network_to_dict(net)
    back, raw = parse_json_netlist(doc)
    assert back == net
    assert parse_netlist('{"inputs": [0], "outputs": [1], "gates": ['
                         '{"id": 0, "kind": "PI"}, {"id": 1, "kind": "PO", "fanins": [0]}]}'
                         ).count_kinds() == {"PI": 1, "PO": 1}


def test_json_rejects_unknown_kind():
    with pytest.raises(NetlistError, match="unknown gate kind"):
        parse_json_netlist({"inputs": [], "outputs": [0],
                            "gates": [{"id": 0, "kind": "NAND3", "fanins": []}]})


def test_latches_cut_into_pseudo_io():
    text = (".model s\n.inputs a\n.outputs y\n.latch d q 0\n"
            ".names a q d\n11 1\n.names q y\n1 1\n.end\n")
    net = parse_blif(text)
    assert validate(net).ok
    assert len(net.inputs) == 2 and len(net.outputs) == 2
    assert GateKind.DFF not in {n.kind for n in net.nodes}
