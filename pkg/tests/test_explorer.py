from pathlib import Path

import pytest

from lgmut.explorer import (
    LaurentPhenomenonViolation,
    MutationGraph,
    explore,
    export_graph,
    import_graph,
)
from lgmut.laurent import parse_poly
from lgmut.seeds import LGSeed, canonical_form, catalog, seed_mutate

GOLDEN = Path(__file__).parent / "golden"


def test_depth_zero():
    g = explore(catalog("cp2"), 0)
    assert len(g.nodes) == 1 and g.edges == []


def test_depth_one_reaches_one_new_seed():
    g = explore(catalog("cp2"), 1)
    assert len(g.nodes) == 2 and len(g.edges) == 3
    assert {e.target for e in g.edges} == {1}


@pytest.mark.parametrize("depth,count", [(2, 3), (3, 5), (4, 9)])
def test_markov_counts(depth, count):
    # unordered Markov triples within the given number of moves of (1, 1, 1)
    assert len(explore(catalog("cp2"), depth).nodes) == count


@pytest.mark.parametrize("depth,count", [(2, 4), (3, 8)])
def test_oriented_counts(depth, count):
    assert len(explore(catalog("cp2"), depth, reflections=False).nodes) == count


def test_trivalent():
    g = explore(catalog("cp2"), 3)
    for node in g.nodes[:-2]:
        assert len(node.seed.directions) == 3
    for node in g.nodes:
        if node.depth < 3:
            assert len(g.out_edges(node.id)) == 3


def test_edges_reverse(rng):
    for name in ("cp2", "p1xp1", "bl2"):
        g = explore(catalog(name), 2)
        keys = [canonical_form(n.seed, True).key for n in g.nodes]
        for e in g.edges:
            target = g.nodes[e.target].seed
            back = {canonical_form(seed_mutate(target, j), True).key for j in range(len(target.directions))}
            assert keys[e.source] in back


def test_parallel_runs_agree():
    serial = export_graph(explore(catalog("bl3"), 3), "json")
    parallel = export_graph(explore(catalog("bl3"), 3, workers=3), "json")
    assert serial == parallel


def test_non_laurent_path_reported():
    bad = LGSeed(parse_poly("x + x^-1*y", 2), ((0, 1), (1, 0)))
    with pytest.raises(LaurentPhenomenonViolation) as info:
        explore(bad, 1)
    assert info.value.path == [0]


def test_depth_limit(monkeypatch):
    with pytest.raises(ValueError):
        explore(catalog("cp2"), 9)
    monkeypatch.setenv("LGMUT_MAX_DEPTH", "2")
    with pytest.raises(ValueError):
        explore(catalog("cp2"), 3)
    with pytest.raises(ValueError):
        explore(catalog("cp2"), -1)


def test_json_round_trip():
    g = explore(catalog("bl1"), 2)
    again = import_graph(export_graph(g, "json"))
    assert again == g


def test_depth_zero_dot_has_one_node():
    dot = export_graph(explore(catalog("cp2"), 0), "dot").decode()
    assert dot.count("label=") == 1 and "->" not in dot


def test_dot_matches_golden():
    assert export_graph(explore(catalog("cp2"), 2), "dot") == (GOLDEN / "cp2_depth2.dot").read_bytes()


def test_unknown_format():
    with pytest.raises(ValueError):
        export_graph(MutationGraph(), "svg")


def test_depth_counts():
    assert explore(catalog("cp2"), 3).depth_counts() == {0: 1, 1: 1, 2: 1, 3: 2}
