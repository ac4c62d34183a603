from itertools import combinations

import pytest

from generators import gen_sampled
from graphs.digraph import (
    ACYCLIC,
    Digraph,
    GraphError,
    InvalidVertexError,
    PreconditionError,
    StructureInstance,
    dfvs_family_recognize,
    find_cycle_pair,
    induced,
    is_acyclic,
    is_strongly_connected,
    reachable,
    remove_vertices,
    scc_decompose,
    strip_trivial_components,
)
from oracles import brute_scc


def test_parallel_arcs_merge_and_self_loops_are_flagged():
    d = Digraph(3, [(0, 1), (0, 1), (1, 1), (2, 0)])
    assert d.m == 3
    assert d.self_loops == frozenset({1})
    assert d.arcs == [(0, 1), (1, 1), (2, 0)]
    assert d.size == 6


def test_adjacency_both_directions():
    d = Digraph(4, [(2, 0), (0, 3), (0, 1), (3, 1)])
    assert d.out_neighbors(0) == [1, 3]
    assert d.in_neighbors(1) == [0, 3]
    assert d.out_degree(0) == 2 and d.in_degree(0) == 1
    assert d.has_arc(0, 3) and not d.has_arc(3, 0)


def test_out_of_range_arc_rejected():
    with pytest.raises(InvalidVertexError):
        Digraph(2, [(0, 2)])
    with pytest.raises(ValueError):
        Digraph(2, [(-1, 0)])
    with pytest.raises(GraphError):
        Digraph(-1)


def test_equality_ignores_input_order():
    assert Digraph(3, [(1, 2), (0, 1)]) == Digraph(3, [(0, 1), (1, 2), (0, 1)])
    assert len({Digraph(2, [(0, 1)]), Digraph(2, [(0, 1)])}) == 1


def test_induced_compacts_ids(triangle):
    sub, idmap = induced(triangle, [2, 0])
    assert idmap.old == (0, 2)
    assert sub.arcs == [(1, 0)]
    assert idmap.to_old([0, 1]) == frozenset({0, 2})


def test_acyclicity(triangle, path_dag):
    assert not is_acyclic(triangle)
    assert is_acyclic(path_dag)
    assert not is_acyclic(Digraph(1, [(0, 0)]))
    assert is_acyclic(Digraph(0))


def test_reachable_respects_removed(path_dag):
    assert reachable(path_dag, [0]) == {0, 1, 2, 3}
    assert reachable(path_dag, [0], [1, 3]) == {0}
    assert reachable(path_dag, [1], [1]) == set()


def test_scc_topological_order():
    # 0 <-> 1 -> 2 <-> 3, 4 alone
    d = Digraph(5, [(0, 1), (1, 0), (1, 2), (2, 3), (3, 2)])
    scc = scc_decompose(d)
    pos = {c: i for i, c in enumerate(scc.components)}
    assert pos[(0, 1)] < pos[(2, 3)]
    assert scc.component_of[0] == scc.component_of[1]
    flags = dict(zip(scc.components, scc.nontrivial))
    assert flags[(0, 1)] and flags[(2, 3)] and not flags[(4,)]


def test_scc_matches_networkx(seed):
    for d in gen_sampled(200, 8, 20, seed):
        mine = {frozenset(c) for c in scc_decompose(d).components}
        assert mine == set(brute_scc(d))


def test_strong_connectivity(triangle, path_dag):
    assert is_strongly_connected(triangle)
    assert not is_strongly_connected(path_dag)
    assert not is_strongly_connected(Digraph(0))


def test_find_cycle_pair_returns_reverse_arc(triangle, complete4):
    for d in (triangle, complete4):
        u, v = find_cycle_pair(StructureInstance(d))
        assert u != v
        assert d.has_arc(v, u)


def test_find_cycle_pair_needs_a_real_cycle(path_dag):
    with pytest.raises(PreconditionError):
        find_cycle_pair(StructureInstance(path_dag))
    with pytest.raises(PreconditionError):
        find_cycle_pair(StructureInstance(Digraph(1, [(0, 0)])))


def test_structure_labels_compose():
    q = StructureInstance(Digraph(5, [(0, 1), (1, 0), (3, 4), (4, 3)]))
    sub = q.induced([1, 3, 4]).induced([1, 2])
    assert sub.labels == (3, 4)
    assert sub.digraph.arcs == [(0, 1), (1, 0)]
    assert q.local_ids([4, 9]) == frozenset({4})


def test_structure_relations_follow_induced():
    q = StructureInstance(Digraph(3, [(0, 1)]), relations=(frozenset({(0, 2), (1, 2)}),), epsilon=2)
    sub = q.induced([1, 2])
    assert sub.relations == (frozenset({(0, 1)}),)
    assert q.size() == 3 + 1 + 2 * 2
    with pytest.raises(GraphError):
        StructureInstance(Digraph(3), relations=(frozenset({(0, 1, 2)}),), epsilon=2)


def test_strip_keeps_only_cyclic_components(two_triangles):
    d = Digraph(8, two_triangles.arcs + [(2, 6), (6, 7), (7, 3)])
    q = strip_trivial_components(StructureInstance(d))
    assert sorted(q.labels) == [0, 1, 2, 3, 4, 5]
    assert not ACYCLIC.recognize(q)
    dag = strip_trivial_components(StructureInstance(Digraph(3, [(0, 1), (1, 2)])))
    assert dag.n == 0


def test_family_recognizer(triangle, path_dag):
    assert dfvs_family_recognize(StructureInstance(path_dag))
    assert not dfvs_family_recognize(StructureInstance(triangle))


def test_shared_vertex_cycles_form_one_component():
    d = Digraph(3, [(0, 1), (1, 0), (0, 2), (2, 0)])
    (comp,) = scc_decompose(d).components
    assert set(comp) == {0, 1, 2}


def test_induced_of_induced_matches_direct(seed):
    for d in gen_sampled(100, 8, 20, seed + 30):
        x = [v for v in d.vertices() if v % 3 != 1]
        y = [v for v in x if v % 2 == 0]
        sub, idmap = induced(d, x)
        twice, _ = induced(sub, idmap.to_new(y))
        direct, _ = induced(d, y)
        assert twice == direct


def test_pair_contract_on_small_graphs(seed):
    checked = 0
    for d in gen_sampled(200, 7, 16, seed + 31):
        q = StructureInstance(d)
        if is_acyclic(d):
            continue
        u, v = find_cycle_pair(q)
        rest = [w for w in d.vertices() if w not in (u, v)]
        for size in range(len(rest) + 1):
            for cand in combinations(rest, size):
                if is_acyclic(remove_vertices(d, cand)[0]):
                    assert v not in reachable(d, [u], cand)
                    checked += 1
    assert checked > 0
