from itertools import combinations

import pytest

from generators import SplitMix64, gen_sampled
from graphs.digraph import Digraph, PreconditionError, acyclic_after_deletion
from graphs.flow import ExceedsBudget, min_separator
from oracles import brute_force_dfvs, min_dfvs_size
from solver.compression import compress, disjoint_dfvs, smart_compress
from solver.skew import SkewCutInstance, skew_separator
from solver.verifier import verify_arc_solution, verify_vertex_solution


def brute_skew(inst):
    pool = [v for v in inst.digraph.vertices() if v not in inst.undeletable]
    for size in range(min(inst.budget, len(pool)) + 1):
        for cand in combinations(pool, size):
            if inst.is_cut(cand):
                return size
    return None


def test_compress_triangle(triangle):
    assert compress(triangle, 1, {0, 1}) == {2}
    assert compress(triangle, 0, {0}) is None


def test_compress_two_triangles(two_triangles):
    assert compress(two_triangles, 1, {0, 3}) is None
    found = compress(two_triangles, 2, {0, 3})
    assert len(found) == 2 and acyclic_after_deletion(two_triangles, found)


def test_compress_preconditions(triangle):
    with pytest.raises(PreconditionError):
        compress(triangle, 0, {0, 1})
    with pytest.raises(PreconditionError):
        compress(triangle, 1, set())
    with pytest.raises(PreconditionError):
        compress(triangle, -1, {0})


def test_compress_records_subsets(triangle):
    trace = []
    compress(triangle, 1, {0, 1}, trace)
    kinds = {entry["type"] for entry in trace}
    assert {"compress-subset", "disjoint"} <= kinds


def test_disjoint_forced_two_cycle(two_cycle):
    assert disjoint_dfvs(two_cycle, 1, {0}) == {1}
    assert disjoint_dfvs(two_cycle, 0, {0}) is None
    assert disjoint_dfvs(two_cycle, 2, {0, 1}) is None


def test_disjoint_cyclic_w_has_no_answer(complete4):
    assert disjoint_dfvs(complete4, 3, {0, 1, 2}) is None


def test_disjoint_matches_brute_force(seed, quick_count):
    rng = SplitMix64(seed + 10)
    checked = 0
    for d in gen_sampled(quick_count, 7, 16, seed + 10):
        if d.self_loops:
            continue
        w = brute_force_dfvs(d, d.n)
        if not w:
            continue
        # grow W a little so that the answer has to avoid extra vertices
        extra = rng.below(d.n)
        w = w | {extra}
        best = None
        others = [v for v in d.vertices() if v not in w]
        for size in range(len(others) + 1):
            for cand in combinations(others, size):
                if acyclic_after_deletion(d, cand):
                    best = size
                    break
            if best is not None:
                break
        got = disjoint_dfvs(d, d.n, w)
        if best is None:
            assert got is None
        else:
            assert got is not None and len(got) == best
            assert not got & w
        checked += 1
    assert checked > 0


def test_single_pair_skew_is_a_min_separator():
    # 0 -> {1, 2} -> 3 -> 4
    d = Digraph(5, [(0, 1), (0, 2), (1, 3), (2, 3), (3, 4)])
    inst = SkewCutInstance(d, ((frozenset({0}), frozenset({4})),), 2)
    assert skew_separator(inst) == {3}
    assert min_separator(d, 0, 4, 2) == {3}


def test_skew_budget_and_validation():
    d = Digraph(4, [(0, 1), (0, 2), (1, 3), (2, 3)])
    pairs = ((frozenset({0}), frozenset({3})),)
    assert skew_separator(SkewCutInstance(d, pairs, 1)) is None
    assert isinstance(min_separator(d, 0, 3, 1), ExceedsBudget)
    with pytest.raises(PreconditionError):
        SkewCutInstance(d, pairs, -1)
    inst = SkewCutInstance(d, pairs, 2)
    assert not inst.is_cut({0})


def test_skew_matches_brute_force(seed):
    rng = SplitMix64(seed + 11)
    checked = 0
    for d in gen_sampled(150, 8, 20, seed + 11):
        if d.n < 4:
            continue
        ids = list(d.vertices())
        rng.shuffle(ids)
        pairs = ((frozenset({ids[0]}), frozenset({ids[1]})), (frozenset({ids[2]}), frozenset({ids[3]})))
        inst = SkewCutInstance(d, pairs, 3)
        got = skew_separator(inst)
        want = brute_skew(inst)
        if want is None:
            assert got is None
        else:
            assert got is not None and inst.is_cut(got) and len(got) == want
        checked += 1
    assert checked > 0


def test_smart_compress_from_all_vertices(seed, quick_count):
    for d in gen_sampled(quick_count // 2, 7, 16, seed + 12):
        opt = min_dfvs_size(d)
        everything = set(d.vertices())
        found = smart_compress(d, opt, everything)
        assert found is not None and len(found) == opt
        assert acyclic_after_deletion(d, found)
        if opt > 0:
            assert smart_compress(d, opt - 1, everything) is None


def test_verifier_notes(triangle):
    assert verify_vertex_solution(triangle, [0]) == {"ok": True, "note": ""}
    assert verify_vertex_solution(triangle, [0, 0])["note"] == "duplicate vertices ignored"
    assert not verify_vertex_solution(triangle, [])["ok"]
    assert not verify_vertex_solution(triangle, [5])["ok"]
    assert not verify_vertex_solution(triangle, [0, 1], k=1)["ok"]
    assert verify_arc_solution(triangle, [(2, 0)], k=1)["ok"]
    assert not verify_arc_solution(triangle, [(0, 2)])["ok"]
    assert not verify_arc_solution(triangle, [])["ok"]


def test_compress_from_solution_plus_one(seed, quick_count):
    rng = SplitMix64(seed + 13)
    checked = 0
    for d in gen_sampled(quick_count // 2, 8, 20, seed + 13):
        best = brute_force_dfvs(d, d.n)
        extra = rng.below(d.n)
        if extra in best:
            continue
        found = compress(d, len(best), best | {extra})
        assert found is not None and len(found) == len(best)
        assert acyclic_after_deletion(d, found)
        if best:
            assert compress(d, len(best) - 1, best) is None
        checked += 1
    assert checked > 0


@pytest.mark.slow
def test_compress_both_directions_sweep(settings, seed):
    corpus = settings["corpus"]
    rng = SplitMix64(seed + 22)
    for d in gen_sampled(corpus["sampled_count"], corpus["n_max"], corpus["m_max"], seed + 22):
        best = brute_force_dfvs(d, d.n)
        if not best:
            continue
        # an optimum solution is never beaten
        assert compress(d, len(best) - 1, best) is None
        outside = [v for v in d.vertices() if v not in best]
        if outside:
            w = best | {outside[rng.below(len(outside))]}
            found = compress(d, len(best), w)
            assert found is not None and len(found) == len(best)
            assert acyclic_after_deletion(d, found)


@pytest.mark.slow
def test_smart_compress_acceptance_sweep(settings, seed):
    corpus = settings["corpus"]
    for d in gen_sampled(corpus["sampled_count"], corpus["n_max"], corpus["m_max"], seed + 21):
        opt = min_dfvs_size(d)
        found = smart_compress(d, opt, set(d.vertices()))
        assert found is not None and len(found) == opt
