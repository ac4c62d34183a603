from itertools import combinations

import pytest

from generators import gen_pairs, gen_separator_pairs
from graphs.digraph import Digraph, PreconditionError, reachable
from graphs.flow import (
    ExceedsBudget,
    arc_cut_to_vertices,
    covers,
    gap_sets,
    important_separators,
    max_vertex_flow,
    min_separator,
    not_reachable,
    separates,
    separator_layers,
    vertices_to_arc_cut,
)
from oracles import enumerate_min_separators, enumerate_minimal_separators

# s=0, a=1, b=2, t=3
CHAIN = Digraph(4, [(0, 1), (1, 2), (2, 3)])
DIAMOND = Digraph(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
FAN = Digraph(5, [(0, 1), (0, 2), (0, 3), (1, 4), (2, 4), (3, 4)])


def out_boundary(d, x):
    return frozenset(w for v in x for w in d.out_neighbors(v) if w not in x)


def check_chain(d, s, t, chain):
    seen = set()
    for delta in chain.deltas:
        assert delta, "empty layer"
        assert not seen & set(delta)
        seen |= set(delta)
    assert s in chain.x_set(1)
    in_t = set(d.in_neighbors(t))
    for i in range(1, chain.q + 1):
        x = chain.x_set(i)
        assert t not in x and not x & in_t
        assert chain.boundary(i) == out_boundary(d, x)
        assert len(chain.boundary(i)) == chain.lam
        assert reachable(d, [s], set(d.vertices()) - x) == x
        for w in chain.boundary(i):
            assert t in reachable(d, [w], x)
    return frozenset().union(*(chain.boundary(i) for i in range(1, chain.q + 1)))


def test_flow_values():
    assert max_vertex_flow(DIAMOND, 0, 3, 2).value == 2
    assert max_vertex_flow(CHAIN, 0, 3, 3).value == 1
    assert max_vertex_flow(FAN, 0, 4, 3).saturated() == frozenset({1, 2, 3})


def test_direct_arc_is_infinite():
    d = Digraph(3, [(0, 2), (0, 1), (1, 2)])
    out = max_vertex_flow(d, 0, 2, 5)
    assert isinstance(out, ExceedsBudget) and out.infinite
    assert isinstance(min_separator(d, 0, 2, 5), ExceedsBudget)


def test_budget_exceeded_is_finite():
    out = max_vertex_flow(FAN, 0, 4, 2)
    assert out == ExceedsBudget(2, False)


def test_same_terminal_rejected():
    with pytest.raises(PreconditionError):
        max_vertex_flow(CHAIN, 1, 1, 2)


def test_layers_on_a_path():
    chain = separator_layers(CHAIN, 0, 3, 1)
    assert chain.lam == 1 and chain.q == 2
    assert chain.x_set(1) == {0} and chain.boundary(1) == {1}
    assert chain.x_set(2) == {0, 1} and chain.boundary(2) == {2}
    assert chain.closure == (2,)
    assert chain.labels[:3] == (1, 2, 3)
    assert chain.marks[1] == 1 and chain.marks[2] == 2


def test_layers_unique_separator():
    chain = separator_layers(DIAMOND, 0, 3, 2)
    assert chain.q == 1
    assert chain.x_set(1) == {0}
    assert chain.boundary(1) == {1, 2}


def test_layers_disconnected():
    d = Digraph(3, [(0, 1)])
    chain = separator_layers(d, 0, 2, 0)
    assert chain.lam == 0 and chain.q == 1
    assert chain.x_set(1) == {0, 1} and chain.boundary(1) == frozenset()


def test_min_separator_examples():
    assert min_separator(CHAIN, 0, 3, 3) == {1}
    assert min_separator(FAN, 0, 4, 3) == {1, 2, 3}


def test_chain_properties_against_enumeration(seed):
    for d, s, t in gen_pairs(150, 7, seed):
        chain = separator_layers(d, s, t, d.n)
        ref = enumerate_min_separators(d, s, t)
        if isinstance(chain, ExceedsBudget):
            assert ref.lam is None and chain.infinite
            continue
        assert chain.lam == ref.lam
        union = check_chain(d, s, t, chain)
        for sep in ref.separators:
            assert sep <= union
        gaps = gap_sets(chain)
        for sep in enumerate_minimal_separators(d, s, t, chain.lam):
            assert all(not sep & z for z in gaps)


def test_chain_properties_on_connected_pairs(seed):
    deep = 0
    for d, s, t in gen_separator_pairs(120, seed=seed + 40):
        chain = separator_layers(d, s, t, d.n)
        ref = enumerate_min_separators(d, s, t)
        assert chain.lam == ref.lam >= 1
        union = check_chain(d, s, t, chain)
        assert all(sep <= union for sep in ref.separators)
        deep += chain.q >= 2
    assert deep > 0


@pytest.mark.slow
def test_chain_properties_full_sweep(seed):
    deep = 0
    for d, s, t in gen_separator_pairs(1000, seed=seed + 1):
        chain = separator_layers(d, s, t, d.n)
        ref = enumerate_min_separators(d, s, t)
        assert not isinstance(chain, ExceedsBudget)
        assert chain.lam == ref.lam >= 1
        union = check_chain(d, s, t, chain)
        assert all(sep <= union for sep in ref.separators)
        gaps = gap_sets(chain)
        for sep in enumerate_minimal_separators(d, s, t, chain.lam):
            assert all(not sep & z for z in gaps)
        deep += chain.q >= 2
    assert deep >= 100


def test_arc_vertex_correspondence():
    assert arc_cut_to_vertices(vertices_to_arc_cut({1, 4})) == frozenset({1, 4})
    with pytest.raises(PreconditionError):
        arc_cut_to_vertices([(3, 4)])


def test_reachability_helpers():
    assert not_reachable(CHAIN, [0], [2]) == {3}
    assert covers(CHAIN, 0, [1], [2])
    assert not covers(CHAIN, 0, [2], [1])
    assert separates(DIAMOND, [0], [3], [1, 2])
    assert not separates(DIAMOND, [0], [3], [1])


def brute_important(d, sources, sinks, k):
    inner = [v for v in d.vertices() if v not in sources and v not in sinks]
    seps = [
        frozenset(c)
        for size in range(k + 1)
        for c in combinations(inner, size)
        if separates(d, sources, sinks, c)
    ]
    minimal = [x for x in seps if not any(y < x for y in seps)]
    out = []
    for x in minimal:
        rx = reachable(d, sources, x)
        if not any(len(y) <= len(x) and y != x and reachable(d, sources, y) > rx for y in minimal):
            out.append(x)
    return out


def test_important_separators_cover_brute_force(seed):
    checked = 0
    for d, s, t in gen_pairs(120, 6, seed + 2):
        if d.has_arc(s, t):
            continue
        found = important_separators(d, [s], [t], 3)
        for sep in found:
            assert len(sep) <= 3 and separates(d, [s], [t], sep)
            assert s not in sep and t not in sep
        for sep in brute_important(d, [s], [t], 3):
            assert sep in found
        checked += 1
    assert checked > 0


def test_important_separators_on_a_path():
    found = important_separators(CHAIN, [0], [3], 1)
    assert frozenset({2}) in found
    assert all(len(x) == 1 for x in found)
