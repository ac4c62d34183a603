import pytest

from generators import (
    DEFAULT_SEED,
    SplitMix64,
    bridged_cluster_sample,
    gen_exhaustive_small,
    gen_pairs,
    gen_planted,
    gen_random,
    gen_sampled,
    gen_separator_pairs,
    strongly_connected_sample,
)
from graphs.digraph import (
    Digraph,
    PreconditionError,
    acyclic_after_deletion,
    is_acyclic,
    is_strongly_connected,
    reachable,
)
from oracles import brute_force_dfas, brute_force_dfvs, enumerate_min_separators, min_dfvs_size
from solver.driver import reduce_dfas_to_dfvs


def test_splitmix_is_deterministic():
    a, b = SplitMix64(7), SplitMix64(7)
    assert [a.next_u64() for _ in range(5)] == [b.next_u64() for _ in range(5)]
    assert SplitMix64(7).next_u64() != SplitMix64(8).next_u64()


def test_splitmix_known_value():
    # first output for seed 0
    assert SplitMix64(0).next_u64() == 0xE220A8397B1DCDAF


def test_below_stays_in_range():
    rng = SplitMix64(DEFAULT_SEED)
    draws = [rng.below(6) for _ in range(600)]
    assert set(draws) == set(range(6))
    with pytest.raises(ValueError):
        rng.below(0)


def test_shuffle_is_a_permutation():
    items = list(range(10))
    SplitMix64(3).shuffle(items)
    assert sorted(items) == list(range(10))


def test_exhaustive_counts():
    assert sum(1 for _ in gen_exhaustive_small(2)) == 4
    assert sum(1 for _ in gen_exhaustive_small(3)) == 64
    assert sum(1 for _ in gen_exhaustive_small(2, sample=5)) == 9
    with pytest.raises(PreconditionError):
        list(gen_exhaustive_small(5))


def test_sampled_shapes(seed):
    graphs = list(gen_sampled(50, 8, 20, seed))
    assert len(graphs) == 50
    for d in graphs:
        assert 1 <= d.n <= 8 and d.m <= 20
        assert not d.self_loops
    assert graphs == list(gen_sampled(50, 8, 20, seed))


def test_random_caps_arcs():
    d = gen_random(3, 100, 1)
    assert d.m == 6


def test_pairs_are_distinct(seed):
    for d, s, t in gen_pairs(100, 6, seed):
        assert s != t and 0 <= s < d.n and 0 <= t < d.n


def test_separator_pairs_are_connected(seed):
    pairs = list(gen_separator_pairs(100, seed=seed))
    assert len(pairs) == 100
    for d, s, t in pairs:
        assert 5 <= d.n <= 8 and d.m >= d.n
        assert t in reachable(d, [s])
        assert t not in d.out_neighbors(s)
        assert enumerate_min_separators(d, s, t).lam >= 1
    with pytest.raises(PreconditionError):
        next(gen_separator_pairs(1, n_min=2))


def test_bridged_clusters_are_strong(seed):
    for d, u, v in bridged_cluster_sample(50, seed=seed):
        x = d.n - 2
        assert is_strongly_connected(d)
        assert not is_acyclic(d)
        assert v in d.out_neighbors(x)
        assert v not in reachable(d, [u], {x})


def test_strong_sample(seed):
    for d in strongly_connected_sample(50, 7, seed):
        assert 2 <= d.n <= 7
        assert is_strongly_connected(d)


def test_planted_solution_is_valid(seed):
    inst = gen_planted(40, 120, 3, seed)
    assert len(inst.planted) == 3
    assert acyclic_after_deletion(inst.digraph, inst.planted)
    assert inst.to_json()["planted"] == sorted(inst.planted)
    assert gen_planted(40, 120, 3, seed).digraph == inst.digraph


def test_planted_small_optimum_within_k(seed):
    for offset in range(20):
        inst = gen_planted(8, 16, 2, seed + offset)
        assert min_dfvs_size(inst.digraph) <= 2


def test_planted_rejects_bad_shapes():
    with pytest.raises(PreconditionError):
        gen_planted(3, 10, 4)
    with pytest.raises(PreconditionError):
        gen_planted(10, 5, 2)
    with pytest.raises(PreconditionError):
        gen_planted(10, 20, 2, back_density=1.5)


def test_brute_force_examples(triangle, two_triangles, path_dag):
    assert brute_force_dfvs(triangle, 1) == {0}
    assert brute_force_dfvs(triangle, 0) is None
    assert min_dfvs_size(two_triangles) == 2
    assert brute_force_dfvs(path_dag, 0) == frozenset()
    assert brute_force_dfas(triangle, 1) == {(0, 1)}


def test_dfas_oracle_agrees_with_reduction():
    for d in gen_exhaustive_small(3):
        for k in range(3):
            arcs = brute_force_dfas(d, k)
            red = reduce_dfas_to_dfvs(d, k)
            vertices = brute_force_dfvs(red.digraph, k)
            assert (arcs is None) == (vertices is None)
            if arcs is not None:
                assert len(arcs) == len(vertices)


def test_min_separator_enumeration_examples():
    chain = Digraph(4, [(0, 1), (1, 2), (2, 3)])
    ref = enumerate_min_separators(chain, 0, 3)
    assert ref.lam == 1 and set(ref.separators) == {frozenset({1}), frozenset({2})}
    fork = Digraph(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    assert enumerate_min_separators(fork, 0, 3).separators == (frozenset({1, 2}),)
    direct = enumerate_min_separators(Digraph(2, [(0, 1)]), 0, 1)
    assert direct.lam is None and direct.separators == ()


def test_planted_with_zero_budget_is_a_dag():
    inst = gen_planted(10, 10, 0, 0)
    assert is_acyclic(inst.digraph)
    assert not inst.planted


def test_brute_force_complete4(complete4):
    assert len(brute_force_dfvs(complete4, 3)) == 3
    assert brute_force_dfvs(complete4, 2) is None
