import pytest

import pmaxflow


def diamond():
    # s = 0, t = 3; two unit paths plus a cross edge.
    edges = [(0, 1, 1, 1), (0, 2, 1, 1), (1, 3, 1, 1), (2, 3, 1, 1), (1, 2, 1, 1)]
    return pmaxflow.Graph(4, edges, 0, 3)


def test_graph_round_trip():
    g = diamond()
    assert (g.n, g.m, g.source, g.sink) == (4, 5, 0, 3)
    h = pmaxflow.from_dimacs(g.to_dimacs())
    assert h.edges == g.edges


def test_reference_value():
    assert pmaxflow.reference_max_flow(diamond()) == 2


@pytest.mark.parametrize("mode", ["warmup", "weighted"])
def test_solve_matches_oracle(mode):
    g = pmaxflow.generate("unit-random", 6, 9, seed=3)
    rep = pmaxflow.solve(g, mode=mode, oracle_check=True)
    assert rep["oracle_agrees"]
    assert rep["value"] == pmaxflow.reference_max_flow(g)
    assert len(rep["flow"]) == g.m
    assert rep["stats"]["max_rho"] <= 0.1


def test_solve_without_oracle():
    rep = pmaxflow.solve(diamond())
    assert rep["value"] == 2
    assert all(float(x).is_integer() for x in rep["flow"])


def test_errors():
    with pytest.raises(pmaxflow.Error, match="SourceEqualsSink"):
        pmaxflow.Graph(2, [(0, 1, 1, 0)], 0, 0)
    with pytest.raises(pmaxflow.Error):
        pmaxflow.solve(diamond(), p=3)
    with pytest.raises(ValueError):
        pmaxflow.solve(diamond(), speed=2)
