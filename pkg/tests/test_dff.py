import random

import pytest

from sfqmap.decompose import GateCategory, MappingConfig, SfqNetwork
from sfqmap.dff import (
    InfeasiblePathError,
    IndependentPath,
    brute_force_min_dffs,
    build_insertion_model,
    enumerate_sites,
    extract_paths,
    insert_dffs,
    placement_valid,
    random_path,
    solve_path,
    straight_path,
    strip_dffs,
)
from sfqmap.netlist import GateKind, make_network
from sfqmap.phase import StageAssignment
from sfqmap.solver import Status
from sfqmap.verify import verify_timing


def _three_region_net():
    """Clocked sources A,B,C,D,E,F, splitters/mergers 1..6, sinks W,X,Y,Z."""
    g = {}
    spec = [
        ("A", "PI", []), ("B", "PI", []), ("C", "PI", []), ("D", "PI", []),
        ("E", "PI", []), ("F", "PI", []),
        ("1", "SPLITTER", ["A"]), ("2", "MERGER", ["1", "B"]), ("3", "SPLITTER", ["D"]),
        ("4", "MERGER", ["2", "3"]), ("5", "SPLITTER", ["4"]),
        ("6", "MERGER", ["C", "F"]),
        ("W", "XOR", ["5", "E"]), ("X", "NOT", ["1"]), ("Y", "NOT", ["3"]),
        ("Z", "XOR", ["5", "6"]),
        ("oW", "PO", ["W"]), ("oX", "PO", ["X"]), ("oY", "PO", ["Y"]), ("oZ", "PO", ["Z"]),
    ]
    gates = []
    for name, kind, ins in spec:
        g[name] = len(gates)
        gates.append((kind, [g[i] for i in ins], name))
    net = make_network(gates)
    sfq = SfqNetwork.from_network(net)
    return sfq, g


def test_extract_paths_three_regions():
    sfq, g = _three_region_net()
    st = StageAssignment(4, tuple([0] * 12 + [1] * 4 + [1] * 4))
    paths = extract_paths(sfq, st)
    nontrivial = [p for p in paths if p.internal]
    as_sets = sorted(
        (tuple(sorted(sfq.net.nodes[v].name for v in p.sources)),
         tuple(sorted(sfq.net.nodes[v].name for v in p.internal)),
         tuple(sorted(sfq.net.nodes[v].name for v in p.sinks)))
        for p in nontrivial
    )
    assert as_sets == [
        (("A", "B", "D"), ("1", "2", "3", "4", "5"), ("W", "X", "Y", "Z")),
        (("C", "F"), ("6",), ("Z",)),
    ]
    e_paths = [p for p in paths if not p.internal and g["E"] in p.sources]
    assert len(e_paths) == 1 and e_paths[0].sinks == (g["W"],)
    # every edge belongs to exactly one path
    seen = [e for p in paths for e in p.edges]
    assert sorted(seen) == sorted(sfq.net.edges())


def test_balanced_chain_paths_are_trivial():
    net = make_network([("PI", []), ("NOT", [0]), ("NOT", [1]), ("PO", [2])])
    sfq = SfqNetwork.from_network(net)
    paths = extract_paths(sfq, StageAssignment(2, (0, 1, 2, 2)))
    assert all(p.trivial for p in paths) and len(paths) == 3


def test_single_splitter_path():
    net = make_network([("PI", []), ("NOT", [0]), ("SPLITTER", [1]), ("NOT", [2]),
                        ("NOT", [2]), ("PO", [3]), ("PO", [4])])
    sfq = SfqNetwork.from_network(net)
    paths = [p for p in extract_paths(sfq, StageAssignment(2, (0, 1, 1, 2, 2, 2, 2)))
             if p.internal]
    (p,) = paths
    assert p.sources == (1,) and p.internal == (2,) and p.sinks == (3, 4)


def test_sites_straight_as_edge():
    sites = enumerate_sites(straight_path(5), 4)
    assert [s.stage for s in sites] == [1, 2, 3, 4]


def test_direct_sa_feed_has_no_sites():
    path = straight_path(0, sink="SA", base=2)
    assert enumerate_sites(path, 4) == []
    assert solve_path(path, 4).dff_count == 0


def test_splitter_into_sa_forces_site():
    path = IndependentPath(
        0, (0,), (1,), (2,), ((0, 1, 0), (1, 2, 0)), {0: 2, 1: 3, 2: 3},
        {0: GateKind.NOT, 1: GateKind.SPLITTER, 2: GateKind.AND},
        {0: GateCategory.AS, 1: GateCategory.AA, 2: GateCategory.SA},
    )
    sites = enumerate_sites(path, 4)
    forced = [s for s in sites if s.forced]
    assert len(forced) == 1 and forced[0].stage == 3
    assert brute_force_min_dffs(path, 4) == 1
    assert solve_path(path, 4).dff_count == 1


def test_forced_site_out_of_range_is_infeasible():
    path = IndependentPath(
        0, (0,), (), (1,), ((0, 1, 0),), {0: 3, 1: 3},
        {0: GateKind.AND, 1: GateKind.AND},
        {0: GateCategory.SA, 1: GateCategory.SA},
    )
    with pytest.raises(InfeasiblePathError):
        enumerate_sites(path, 2)
    assert solve_path(path, 2).status == Status.INFEASIBLE


@pytest.mark.parametrize("q,n,expected", [(5, 4, 1), (4, 4, 0), (9, 4, 2)])
def test_straight_minimums(q, n, expected):
    path = straight_path(q)
    assert brute_force_min_dffs(path, n) == expected
    assert solve_path(path, n).dff_count == expected


def test_shared_site_before_splitter():
    # NOT@0 -> SPLITTER@3 -> {NOT@6, NOT@6}, n=4: one DFF before the splitter
    # serves both branches, after it two would be needed
    path = IndependentPath(
        0, (0,), (1,), (2, 3), ((0, 1, 0), (1, 2, 0), (1, 3, 0)),
        {0: 0, 1: 3, 2: 6, 3: 6},
        {0: GateKind.NOT, 1: GateKind.SPLITTER, 2: GateKind.NOT, 3: GateKind.NOT},
        {0: GateCategory.AS, 1: GateCategory.AA, 2: GateCategory.AS, 3: GateCategory.AS},
    )
    assert brute_force_min_dffs(path, 4) == 1
    res = solve_path(path, 4)
    assert res.dff_count == 1 and res.dffs[0][0] == (0, 1, 0)
    post = [((1, 2, 0), 4), ((1, 3, 0), 4)]
    assert placement_valid(path, 4, post)
    assert not placement_valid(path, 4, post[:1])


def test_random_ten_site_path_matches_oracle():
    rng = random.Random(10)
    checked = 0
    while checked < 5:
        path = random_path(rng, 3)
        try:
            sites = enumerate_sites(path, 3)
        except InfeasiblePathError:
            continue
        if len(sites) > 12:
            continue
        assert solve_path(path, 3).dff_count == brute_force_min_dffs(path, 3)
        checked += 1


def test_reach_fallback_agrees_with_traversal_model():
    rng = random.Random(3)
    done = 0
    while done < 20:
        path = random_path(rng, 3, max_internal=5)
        try:
            enumerate_sites(path, 3)
        except InfeasiblePathError:
            continue
        a = solve_path(path, 3)
        b = solve_path(path, 3, cap=0)
        assert b.encoding == "reach"
        assert a.dff_count == b.dff_count
        done += 1


def test_literal_spacing_is_weaker_than_window():
    # the literal chain reading only constrains site pairs exactly n apart, so
    # its windows are one stage wider and it never needs more DFFs
    differs = False
    for q in range(1, 12):
        for n in range(1, 5):
            lit = solve_path(straight_path(q), n, spacing="literal").dff_count
            win = solve_path(straight_path(q), n).dff_count
            assert lit <= win
            differs |= lit < win
    assert differs
    assert solve_path(straight_path(5), 4, spacing="literal").dff_count == 0


def test_model_counts_traversals():
    path = straight_path(7)
    sites = enumerate_sites(path, 3)
    model, encoding, ntrav = build_insertion_model(path, sites, 3)
    assert encoding == "traversal" and ntrav == 1
    assert len(model.bool_vars) == len(sites)


def _two_output_early():
    # x branch: PI -> 4 NOTs (stage 4, epoch 2); y branch: PI -> 2 NOTs (stage 2, epoch 1)
    net = make_network([("PI", []), ("PI", []),
                        ("NOT", [0]), ("NOT", [2]), ("NOT", [3]), ("NOT", [4]),
                        ("NOT", [1]), ("NOT", [6]),
                        ("PO", [5]), ("PO", [7])])
    sfq = SfqNetwork.from_network(net)
    return sfq, StageAssignment(2, (0, 0, 1, 2, 3, 4, 1, 2, 4, 4))


def test_early_output_gets_one_dff():
    sfq, st = _two_output_early()
    mapped, st2, stats = insert_dffs(sfq, st, MappingConfig(n=2))
    assert stats.dff_count == 1
    assert verify_timing(mapped, st2).ok
    (dff,) = [v for v in range(len(mapped.net)) if mapped.net.nodes[v].kind == GateKind.DFF]
    assert mapped.net.nodes[dff].fanins == (7,)


def test_balanced_network_unchanged():
    net = make_network([("PI", []), ("NOT", [0]), ("NOT", [1]), ("PO", [2])])
    sfq = SfqNetwork.from_network(net)
    st = StageAssignment(2, (0, 1, 2, 2))
    mapped, st2, stats = insert_dffs(sfq, st, MappingConfig(n=2))
    assert stats.dff_count == 0 and mapped.net == net and st2 == st


def test_strip_inverts_materialize():
    sfq, st = _two_output_early()
    mapped, st2, _ = insert_dffs(sfq, st, MappingConfig(n=2))
    base, st3 = strip_dffs(mapped, st2)
    assert base.net == sfq.net and st3 == st


def test_forced_only_path_oracle():
    path = straight_path(3, sink="SA", base=1)
    assert brute_force_min_dffs(path, 4) == 1
