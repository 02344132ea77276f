import pytest

from sfqmap.decompose import GateCategory, MappingConfig, SfqNetwork, decompose
from sfqmap.netlist import make_network
from sfqmap.phase import (
    StageAssignment,
    asap_hint,
    assign_stages,
    baseline_objective,
    build_phase_model,
    build_stage_bounds,
    check_stage_invariants,
    clocked_depth,
    edge_objective,
    gate_max_objective,
)
from sfqmap.solver import Status, solve, verify_solution


def sfq_of(gates, or_style="merger"):
    return decompose(make_network(gates), MappingConfig(or_style=or_style))


def test_stage_assignment_epoch_phase():
    st = StageAssignment(4, (0, 5, 11))
    assert [st.epoch(v) for v in range(3)] == [0, 1, 2]
    assert [st.phase(v) for v in range(3)] == [0, 1, 3]
    assert st.scaled(3).sigma == (0, 15, 33) and st.scaled(3).n == 12
    with pytest.raises(ValueError):
        StageAssignment(0, ())


def test_asap_as_chain():
    sfq = sfq_of([("PI", []), ("NOT", [0]), ("NOT", [1]), ("PO", [2])])
    b = build_stage_bounds(sfq, 2)
    assert b.asap[1] == 1 and b.asap[2] == 2


def test_asap_merger_fed_by_pis():
    sfq = sfq_of([("PI", []), ("PI", []), ("OR", [0, 1]), ("PO", [2])])
    assert sfq.category[2] == GateCategory.AA
    assert build_stage_bounds(sfq, 4).asap[2] == 0


def test_asap_sa_behind_splitter():
    net = make_network([("PI", []), ("SPLITTER", [0]), ("PI", []), ("AND", [1, 2]),
                        ("NOT", [1]), ("PO", [3]), ("PO", [4])])
    sfq = SfqNetwork.from_network(net)
    b = build_stage_bounds(sfq, 2)
    assert b.asap[3] >= b.asap[1] + 1


def test_asap_sa_behind_multi_fanout_pi():
    # before splitter synthesis a shared fanin implies a splitter in front of the AND
    sfq = sfq_of([("PI", []), ("PI", []), ("AND", [0, 1]), ("NOT", [0]), ("PO", [2]), ("PO", [3])])
    assert build_stage_bounds(sfq, 2).asap[2] == 1


def test_sigma_max_and_pi_window():
    sfq = sfq_of([("PI", []), ("NOT", [0]), ("NOT", [1]), ("PO", [2])])
    b = build_stage_bounds(sfq, 3)
    assert clocked_depth(sfq) == 2
    assert b.sigma_max == 3 * (2 + 1) - 1
    assert b.alap[0] <= 2


def _chain(k):
    gates = [("PI", [])] + [("NOT", [i]) for i in range(k)] + [("PO", [k])]
    return sfq_of(gates)


def _edge_assignment(sfq, n, sigma):
    hint = {f"s{v}": s for v, s in enumerate(sigma)}
    hint["E"] = sigma[sfq.net.outputs[0]] // n
    for u, v, _p in sfq.net.edges():
        bump = 1 if sfq.category[v] == GateCategory.SA else 0
        hint[f"b{u}_{v}"] = (sigma[v] - sigma[u] + bump) // n
    return hint


def test_floor_linearization_edge():
    sfq = _chain(4)  # PI, N1..N4, PO
    model = build_phase_model(sfq, 2, "edge")
    sigma = [0, 1, 6, 7, 8, 8]
    good = _edge_assignment(sfq, 2, sigma)
    assert good["b1_2"] == 2
    assert verify_solution(model, good)
    for wrong in (1, 3):
        assert not verify_solution(model, dict(good, b1_2=wrong))


def test_floor_linearization_sa_same_stage():
    sfq = sfq_of([("PI", []), ("NOT", [0]), ("PI", []), ("AND", [1, 2]), ("PO", [3])])
    model = build_phase_model(sfq, 4, "edge")
    sigma = [0, 1, 1, 1, 1]
    a = _edge_assignment(sfq, 4, sigma)
    assert a["b1_3"] == 0
    assert verify_solution(model, a)


@pytest.mark.parametrize("n", range(2, 9))
def test_pi_not_po_zero_objective(n):
    sfq = _chain(1)
    st, status, sol = assign_stages(sfq, MappingConfig(n=n))
    assert status == Status.OPTIMAL and sol.objective_value == 0
    assert st.epoch(2) == st.sigma[2] // n
    assert check_stage_invariants(sfq, st) == []


def test_pi_not_po_single_phase_counts_the_edge():
    st, status, sol = assign_stages(_chain(1), MappingConfig(n=1))
    assert sol.objective_value == 1  # floor(1/1) on the PI->NOT edge


def test_po_epochs_equalized():
    gates = [("PI", []), ("PI", []),
             ("NOT", [0]), ("NOT", [2]), ("NOT", [3]), ("NOT", [4]),
             ("NOT", [1]), ("NOT", [6]),
             ("PO", [5]), ("PO", [7])]
    sfq = sfq_of(gates)
    b = build_stage_bounds(sfq, 2)
    assert b.asap[5] // 2 == 2 and b.asap[7] // 2 == 1  # unconstrained epochs differ
    st, status, _ = assign_stages(sfq, MappingConfig(n=2))
    assert st.epoch(8) == st.epoch(9)
    assert check_stage_invariants(sfq, st) == []


def test_balanced_tree_needs_nothing():
    gates = [("PI", []) for _ in range(8)]
    gates += [("XOR", [2 * i, 2 * i + 1]) for i in range(4)]
    gates += [("XOR", [8, 9]), ("XOR", [10, 11]), ("XOR", [12, 13]), ("PO", [14])]
    sfq = sfq_of(gates)
    st, status, sol = assign_stages(sfq, MappingConfig(n=4))
    assert status == Status.OPTIMAL and sol.objective_value == 0
    assert gate_max_objective(sfq, st) == 0


@pytest.mark.parametrize("n", [1, 2, 3])
def test_edge_objective_matches_baseline_on_as_only_ladder(n):
    gates = [("PI", []), ("PI", []), ("NOT", [0]), ("XOR", [2, 1]), ("NOT", [2]),
             ("XOR", [3, 4]), ("NOT", [5]), ("PO", [6])]
    sfq = sfq_of(gates)
    assert all(c in (GateCategory.AS, GateCategory.IO) for c in sfq.category)
    st, status, sol = assign_stages(sfq, MappingConfig(n=n, objective_mode="edge"))
    assert status == Status.OPTIMAL
    assert sol.objective_value == edge_objective(sfq, st)
    assert sol.objective_value == baseline_objective(list(sfq.net.edges()), st)


@pytest.mark.parametrize("mode", ["edge", "gate-max"])
def test_asap_hint_is_feasible(mode):
    gates = [("PI", []), ("PI", []), ("AND", [0, 1]), ("NOT", [0]), ("OR", [2, 3]),
             ("XOR", [4, 1]), ("PO", [5]), ("PO", [2])]
    sfq = sfq_of(gates, "sa-or")
    for n in (1, 2, 5):
        bounds = build_stage_bounds(sfq, n)
        model = build_phase_model(sfq, n, mode, bounds)
        assert verify_solution(model, asap_hint(sfq, n, mode, bounds))


def test_unknown_mode():
    with pytest.raises(ValueError):
        build_phase_model(_chain(1), 2, "depth")


def test_gate_reaching_no_output_gets_room():
    # the AND chain off PI 0 is deeper than any PI-to-PO path
    net = make_network([("PI", []), ("AND", [0, 0]), ("AND", [0, 1]), ("AND", [0, 0]),
                        ("PO", [3])])
    sfq = decompose(net, MappingConfig(n=1))
    bounds = build_stage_bounds(sfq, 1)
    assert bounds.feasible and bounds.sigma_max >= 2
    stages, status, _ = assign_stages(sfq, MappingConfig(n=1))
    assert status.has_solution and check_stage_invariants(sfq, stages) == []
