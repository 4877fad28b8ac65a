import random

import pytest

from popmatch.engine import (
    EngineError,
    Graph,
    ReachSet,
    augment,
    check_reach_properties,
    even_path_from_roots,
    find_augmenting_path,
    gallai_edmonds,
    is_maximum,
    maximum_matching,
    odd_cycle_through_root,
    reachable_set,
    shortest_alt_path_to_root,
)
from popmatch.oracle import brute_gallai_edmonds, brute_max_matching_size

from helpers import random_edge_graph

# odd cycle hanging off an exposed vertex: 0 - 1=2 - 3=4 - 2 (= matched)
FLOWER = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (2, 4)])
FLOWER_M = [-1, 2, 1, 4, 3]

PETERSEN = Graph.from_edges(
    10,
    [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)]
    + [(i, i + 5) for i in range(5)]
    + [(5, 7), (7, 9), (9, 6), (6, 8), (8, 5)],
)


def test_graph_basics():
    g = Graph.from_edges(4, [(0, 1), (1, 0), (2, 1), (3, 0)])
    assert g.neighbors(1) == [0, 2]
    assert g.neighbors(0) == [1, 3]
    assert g.degree(2) == 1 and g.degree(1) == 2
    assert g.has_edge(0, 3) and not g.has_edge(2, 3)
    assert g.edge_count() == 3
    assert list(g.edges()) == [(0, 1), (0, 3), (1, 2)]


def test_graph_rejects_bad_edges():
    with pytest.raises(ValueError, match="self-loop"):
        Graph.from_edges(2, [(1, 1)])
    with pytest.raises(ValueError, match="out of range"):
        Graph.from_edges(2, [(0, 2)])


def test_augmenting_path_plain():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    match = [-1, 2, 1, -1]
    path = find_augmenting_path(g, match)
    assert path == [3, 2, 1, 0]
    augment(match, path)
    assert match == [1, 0, 3, 2]
    assert find_augmenting_path(g, match) is None
    assert is_maximum(g, match)


def test_augmenting_path_through_blossom():
    # two triangles joined by an edge; the bad matching leaves one
    # exposed vertex in each triangle and the fix crosses both cycles
    g = Graph.from_edges(6, [(0, 1), (1, 2), (0, 2), (3, 4), (4, 5), (3, 5), (2, 3)])
    match = [2, -1, 0, 5, -1, 3]
    path = find_augmenting_path(g, match)
    assert path is not None and len(path) == 6
    augment(match, path)
    assert -1 not in match
    assert is_maximum(g, match)


def test_flower_is_maximum():
    assert is_maximum(FLOWER, list(FLOWER_M))


def test_matching_validation_errors():
    g = Graph.from_edges(3, [(0, 1)])
    with pytest.raises(ValueError, match="length"):
        find_augmenting_path(g, [-1, -1])
    with pytest.raises(ValueError, match="involution"):
        find_augmenting_path(g, [1, 2, -1])
    with pytest.raises(ValueError, match="not an edge"):
        find_augmenting_path(g, [-1, 2, 1])


def test_maximum_matching_sizes():
    assert sum(x != -1 for x in maximum_matching(PETERSEN)) == 10
    star = Graph.from_edges(4, [(0, 1), (0, 2), (0, 3)])
    assert sum(x != -1 for x in maximum_matching(star)) == 2
    empty = Graph.from_edges(3, [])
    assert maximum_matching(empty) == [-1, -1, -1]


def test_gallai_edmonds_flower():
    ge = gallai_edmonds(FLOWER, list(FLOWER_M))
    assert ge.d == frozenset({0, 2, 3, 4})
    assert ge.a == frozenset({1})
    assert ge.c == frozenset()
    assert ge.components == (frozenset({0}), frozenset({2, 3, 4}))
    assert ge.roots == (0, 2)


def test_gallai_edmonds_rejects_non_maximum():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    with pytest.raises(ValueError, match="not maximum"):
        gallai_edmonds(g, [-1, 2, 1, -1])


def test_reachable_set_flower():
    reach = reachable_set(FLOWER, list(FLOWER_M), [0])
    assert reach.members == frozenset({0, 1, 2, 3, 4})
    assert reach.even == frozenset({0, 2, 3, 4})
    assert reach.odd == frozenset({1})


def test_even_path_crosses_blossom():
    reach = reachable_set(FLOWER, list(FLOWER_M), [0])
    assert even_path_from_roots(FLOWER, list(FLOWER_M), reach, 3) == [0, 1, 2, 4, 3]
    assert even_path_from_roots(FLOWER, list(FLOWER_M), reach, 1) is None


def test_shortest_alt_path_plain():
    g = Graph.from_edges(4, [(0, 1), (1, 2), (2, 3)])
    match = [-1, 2, 1, -1]
    assert shortest_alt_path_to_root(g, match, [0], 2) == [0, 1, 2]
    with pytest.raises(ValueError, match="not exposed"):
        shortest_alt_path_to_root(g, match, [1], 2)
    with pytest.raises(ValueError, match="not alternately reachable"):
        shortest_alt_path_to_root(g, match, [0], 3)


def test_shortest_alt_path_rejects_nonsimple_walk():
    # reaching 1 through its matched edge must loop around the odd
    # cycle and come back, so the shortest walk repeats a vertex
    with pytest.raises(EngineError, match="not a simple path"):
        shortest_alt_path_to_root(FLOWER, list(FLOWER_M), [0], 1)


def test_odd_cycle_through_root_triangle():
    g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    match = [-1, 2, 1]
    assert odd_cycle_through_root(g, match, {0, 1, 2}, 0) == [0, 2, 1]


def test_odd_cycle_through_root_five_cycle():
    g = Graph.from_edges(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])
    match = [-1, 2, 1, 4, 3]
    cyc = odd_cycle_through_root(g, match, set(range(5)), 0)
    assert cyc[0] == 0 and len(cyc) == 5 and len(set(cyc)) == 5
    for i in range(1, 4, 2):
        assert match[cyc[i]] == cyc[i + 1]
    assert g.has_edge(cyc[0], cyc[1]) and g.has_edge(cyc[-1], cyc[0])


def test_odd_cycle_argument_errors():
    g = Graph.from_edges(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(ValueError, match="outside the component"):
        odd_cycle_through_root(g, [-1, 2, 1], {1, 2}, 0)
    with pytest.raises(ValueError, match="not matched inside"):
        odd_cycle_through_root(g, [-1, 2, 1], {0, 1}, 0)


def test_check_reach_properties():
    reach = reachable_set(FLOWER, list(FLOWER_M), [0])
    ge = gallai_edmonds(FLOWER, list(FLOWER_M))
    check_reach_properties(FLOWER, list(FLOWER_M), reach, ge)
    with pytest.raises(EngineError, match="forbidden"):
        check_reach_properties(FLOWER, list(FLOWER_M), reach, ge, forbidden=0)


def _hand_reach(members):
    return ReachSet(
        members=frozenset(members),
        even=frozenset(members),
        odd=frozenset(),
        label=[],
        p=[],
        root=[],
    )


def test_check_reach_properties_rejects_bad_sets():
    ge = gallai_edmonds(FLOWER, list(FLOWER_M))
    with pytest.raises(EngineError, match="closed under the matched edge"):
        check_reach_properties(FLOWER, list(FLOWER_M), _hand_reach({0, 1}), ge)
    with pytest.raises(EngineError, match="splits a factor-critical"):
        check_reach_properties(FLOWER, list(FLOWER_M), _hand_reach({3, 4}), ge)
    pair = Graph.from_edges(2, [(0, 1)])
    pm = [1, 0]
    with pytest.raises(EngineError, match="perfectly matched part"):
        check_reach_properties(pair, pm, _hand_reach({0, 1}), gallai_edmonds(pair, pm))


def _greedy_on_shuffled(g, rng):
    match = [-1] * g.n
    edges = sorted(g.edges())
    rng.shuffle(edges)
    for u, v in edges:
        if match[u] == -1 and match[v] == -1:
            match[u] = v
            match[v] = u
    return match


def test_maximum_matching_matches_brute():
    rng = random.Random(11)
    for _ in range(120):
        n = rng.randint(1, 9)
        g = Graph.from_edges(n, random_edge_graph(rng, n, rng.choice([0.15, 0.3, 0.6])))
        size = brute_max_matching_size(g)
        match = maximum_matching(g)
        assert sum(x != -1 for x in match) == 2 * size
        sub = _greedy_on_shuffled(g, rng)
        assert is_maximum(g, sub) == (sum(x != -1 for x in sub) == 2 * size)


def test_gallai_edmonds_matches_brute():
    rng = random.Random(12)
    for _ in range(120):
        n = rng.randint(1, 9)
        g = Graph.from_edges(n, random_edge_graph(rng, n, rng.choice([0.2, 0.4, 0.7])))
        match = maximum_matching(g)
        ge = gallai_edmonds(g, match)
        brute = brute_gallai_edmonds(g)
        assert ge.d == brute.d and ge.a == brute.a and ge.c == brute.c
        assert ge.components == brute.components
        for comp, r in zip(ge.components, ge.roots):
            assert r in comp
            assert match[r] == -1 or match[r] in ge.a
