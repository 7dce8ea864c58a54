import numpy as np
import pytest

from rotbeta.sofic import (
    SoficGraph,
    analyze,
    area_check,
    is_primitive,
    is_sft,
    minimize,
    period,
    stationary_density,
    to_csv,
    to_dot,
    to_json,
)

from conftest import example, sofic_build
from tables import FIVEFOLD, THREEFOLD, isomorphic_to_table, table_edges


def _graph(n, edges):
    return SoficGraph(n, edges, [1.0 / n] * n)


def test_full_shift_is_sft():
    g = _graph(1, [(0, "a", 0), (0, "b", 0)])
    ok, info = is_sft(g, direction="forward")
    assert ok and info["memory"] == 0


def test_golden_mean_shift_is_sft():
    # no two consecutive b's
    g = _graph(2, [(0, "a", 0), (0, "b", 1), (1, "a", 0)])
    ok, info = is_sft(g, direction="forward")
    assert ok and info["memory"] == 1
    assert info["synchronizing_word"] is not None


def test_even_shift_is_not_sft():
    # runs of b between a's have even length
    g = _graph(2, [(0, "a", 0), (0, "b", 1), (1, "b", 0)])
    ok, info = is_sft(g, direction="forward")
    assert not ok
    assert "pair_cycle" in info


def test_period_and_primitivity():
    cycle = _graph(2, [(0, "a", 1), (1, "a", 0)])
    assert period(cycle) == 2
    assert not is_primitive(cycle)
    loop = _graph(2, [(0, "a", 1), (1, "a", 0), (0, "b", 0)])
    assert period(loop) == 1 and is_primitive(loop)
    split = _graph(2, [(0, "a", 0), (1, "a", 1)])
    assert period(split) is None


def test_minimize_merges_equivalent_states():
    g = _graph(3, [(0, "a", 1), (0, "b", 2), (1, "a", 1), (2, "a", 2)])
    cls, m = minimize(g)
    assert cls[1] == cls[2] and m.n == 2


def test_minimize_needs_right_resolving():
    with pytest.raises(ValueError):
        minimize(_graph(2, [(0, "a", 0), (0, "a", 1)]))


def test_density_of_full_shift():
    # U = 2x mod 1 on two halves: each half maps onto both
    g = SoficGraph(2, [(0, "a", 0), (0, "a", 1), (1, "b", 0), (1, "b", 1)], [0.5, 0.5])
    h, res, _ = stationary_density(g, 2 ** 0.5)
    assert np.allclose(h, 1.0) and res < 1e-12


@pytest.mark.parametrize("name,table", [("threefold", THREEFOLD), ("fivefold", FIVEFOLD)])
def test_graph_matches_published_table(name, table):
    params = example(name)
    _, arr, g = sofic_build(name)
    assert isomorphic_to_table(g, table)
    assert g.is_left_resolving()
    assert is_primitive(g)
    assert area_check(params, arr, g) == []


def test_table_transcription_is_consistent():
    # every table row is left-resolving too
    for table in (THREEFOLD, FIVEFOLD):
        seen = set()
        for j, d, k in table_edges(table):
            assert (k, d) not in seen
            seen.add((k, d))


def test_threefold_is_not_sft():
    _, _, g = sofic_build("threefold")
    ok, _ = is_sft(g)
    assert not ok


def test_analyze_fivefold():
    params = example("fivefold")
    _, _, g = sofic_build("fivefold")
    info = analyze(g, params.beta)
    assert info["primitive"] and info["left_resolving"]
    assert info["perron_check"] < 1e-12
    assert min(info["density"]) > 0
    assert info["density_residual"] < 1e-12


def test_exports_are_deterministic():
    _, _, g = sofic_build("threefold")
    assert to_csv(g) == to_csv(g)
    assert to_csv(g).count("\n") == len(g.edges) + 1
    assert to_dot(g).startswith("digraph")
    assert '"states": 12' in to_json(g)


def test_sevenfold_partition_is_self_consistent():
    # the exact closure gives 222 segments and 3264 faces; check that this
    # dissection is a genuine Markov partition
    params = example("sevenfold")
    closure, arr, g = sofic_build("sevenfold")
    assert (len(closure.segments), len(arr.faces)) == (222, 3264)
    assert arr.euler() == 2
    assert g.is_left_resolving() and is_primitive(g)
    assert area_check(params, arr, g) == []
