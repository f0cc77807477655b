"""Smoke tests for the _mcf extension module."""

import _mcf


def test_parse_solve_roundtrip():
    inst = _mcf.parse_dimacs("p min 2 1\nn 1 -1\nn 2 1\na 1 2 0 3 5\n")
    assert inst.node_count == 2
    assert inst.arc_count == 1
    rep = _mcf.solve(inst)
    assert rep.solution.status == "OPTIMAL"
    assert rep.solution.objective == 5
    assert rep.solution.flow == [1]
    ok, detail = _mcf.check_solution(inst, rep.solution)
    assert ok, detail
    assert _mcf.write_solution(rep.solution).startswith("s 5\n")


def test_generate_matches_oracle():
    for seed in range(5):
        inst = _mcf.generate(nodes=8, arcs=14, max_cost=8, cost_floor=-3,
                             max_capacity=9, demand_units=6,
                             infinite_probability=0.2, seed=seed)
        ref = _mcf.oracle_solve(inst)
        rep = _mcf.solve(inst, seed=seed)
        assert rep.solution.status == ref.status
        if ref.status == "OPTIMAL":
            assert rep.solution.objective == ref.objective


def test_infeasible_and_unbounded():
    inst = _mcf.ProblemInstance()
    inst.node_count = 2
    inst.arcs = [_mcf.Arc(1, 0)]
    inst.cost = [1]
    inst.capacity = [5]
    inst.demand = [-1, 1]
    assert _mcf.solve(inst).solution.status == "INFEASIBLE"

    cyc = _mcf.ProblemInstance()
    cyc.node_count = 2
    cyc.arcs = [_mcf.Arc(0, 1), _mcf.Arc(1, 0)]
    cyc.cost = [1, -2]
    cyc.capacity = [_mcf.INFINITE_CAPACITY] * 2
    cyc.demand = [0, 0]
    assert _mcf.solve(cyc).solution.status == "UNBOUNDED"


def test_validation_errors():
    try:
        _mcf.parse_dimacs("p min 1 1\n")
        raise AssertionError("expected ParseError")
    except _mcf.ParseError:
        pass


if __name__ == "__main__":
    for name, fn in sorted(globals().items()):
        if name.startswith("test_"):
            fn()
            print(f"{name}: ok")
    print("smoke tests passed")
