"""
Iterative-compression routine for DFVS.

compress() turns a known dfvs W of size at most k + 1 into a minimum dfvs of
size at most k. It guesses the part of W that stays in the solution and hands
the rest to disjoint_dfvs(), which guesses the topological order of the kept W
vertices and solves the resulting skew separator problem.
"""

import logging
from itertools import combinations
from typing import Any, Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Tuple

from graphs.digraph import (
    Digraph,
    PreconditionError,
    induced,
    is_acyclic,
    remove_vertices,
    scc_decompose,
)
from solver.skew import SkewCutInstance, skew_separator
from solver.verifier import ensure_acyclic_after_deletion

logger = logging.getLogger("dfvs.compression")

Trace = Optional[List[Dict[str, Any]]]


def _cyclic_core(d: Digraph) -> Tuple[Digraph, Tuple[int, ...]]:
    """D restricted to its non-trivial SCCs, with the original id of every kept vertex."""
    scc = scc_decompose(d)
    keep = [v for comp, flagged in zip(scc.components, scc.nontrivial) if flagged for v in comp]
    if len(keep) == d.n:
        return d, tuple(d.vertices())
    sub, idmap = induced(d, keep)
    return sub, idmap.old


def _check_input(d: Digraph, k: int, w: FrozenSet[int]) -> None:
    if k < 0:
        raise PreconditionError("budget must be non-negative")
    for v in w:
        d.check_vertex(v)
    if not is_acyclic(remove_vertices(d, w)[0]):
        raise PreconditionError("D - W must be acyclic")


def compress(d: Digraph, k: int, w: Iterable[int], trace: Trace = None) -> Optional[FrozenSet[int]]:
    """Minimum dfvs of size <= k, or None; W must be a dfvs of size <= k + 1."""
    w = frozenset(w)
    _check_input(d, k, w)
    if len(w) > k + 1:
        raise PreconditionError(f"|W| = {len(w)} exceeds k + 1 = {k + 1}")

    core, ids = _cyclic_core(d)
    local = {v: i for i, v in enumerate(ids)}
    cw = sorted(local[v] for v in w if v in local)

    best: Optional[FrozenSet[int]] = None
    budget = k
    for size in range(min(len(cw), budget) + 1):
        if size > budget:
            break
        for kept in combinations(cw, size):
            rest, idmap = remove_vertices(core, kept)
            free = idmap.to_new(v for v in cw if v not in kept)
            found = disjoint_dfvs(rest, budget - size, free, trace)
            if trace is not None:
                trace.append({"type": "compress-subset", "kept": size, "found": found is not None})
            if found is None:
                continue
            best = frozenset(kept) | idmap.to_old(found)
            budget = len(best) - 1
            if size > budget:
                break

    if best is None:
        logger.debug("compress k=%d |W|=%d: no solution", k, len(w))
        return None
    result = frozenset(ids[v] for v in best)
    ensure_acyclic_after_deletion(d, result, "compress")
    logger.debug("compress k=%d |W|=%d -> %d", k, len(w), len(result))
    return result


def _topological_orders(d: Digraph, w: Sequence[int]) -> Iterator[Tuple[int, ...]]:
    """All topological orders of D[W], smallest vertex first at every choice."""
    members = set(w)
    indeg = {v: 0 for v in w}
    for a in w:
        for b in d.out_neighbors(a):
            if b in members:
                indeg[b] += 1
    order: List[int] = []

    def extend() -> Iterator[Tuple[int, ...]]:
        if len(order) == len(w):
            yield tuple(order)
            return
        for v in sorted(x for x in indeg if indeg[x] == 0 and x not in placed):
            placed.add(v)
            order.append(v)
            for b in d.out_neighbors(v):
                if b in members:
                    indeg[b] -= 1
            yield from extend()
            for b in d.out_neighbors(v):
                if b in members:
                    indeg[b] += 1
            order.pop()
            placed.discard(v)

    placed: set = set()
    yield from extend()


def _forced(d: Digraph, w: FrozenSet[int]) -> FrozenSet[int]:
    """Vertices outside W on a self-loop or a 2-cycle with a W vertex."""
    out = set(v for v in d.self_loops if v not in w)
    for x in w:
        for b in d.out_neighbors(x):
            if b not in w and d.has_arc(b, x):
                out.add(b)
    return frozenset(out)


def _skew_graph(d: Digraph, w: Sequence[int]) -> Tuple[Digraph, Dict[int, int], Dict[int, Tuple[int, int]]]:
    """Every W vertex x splits into an out-copy (keeps the out-arcs) and an in-copy (keeps the in-arcs)."""
    members = set(w)
    rest = [v for v in d.vertices() if v not in members]
    compact = {v: i for i, v in enumerate(rest)}
    copies = {x: (len(rest) + 2 * j, len(rest) + 2 * j + 1) for j, x in enumerate(w)}
    arcs = []
    tails, heads = d.arc_arrays()
    for a, b in zip(tails, heads):
        src = copies[a][0] if a in members else compact[a]
        dst = copies[b][1] if b in members else compact[b]
        arcs.append((src, dst))
    return Digraph(len(rest) + 2 * len(w), arcs), compact, copies


def disjoint_dfvs(d: Digraph, k: int, w: Iterable[int], trace: Trace = None) -> Optional[FrozenSet[int]]:
    """Minimum dfvs of size <= k avoiding W, or None; D - W must be acyclic."""
    w = frozenset(w)
    _check_input(d, k, w)
    sub_w, _ = induced(d, w)
    if not is_acyclic(sub_w):
        return None

    forced = _forced(d, w)
    if len(forced) > k:
        return None
    if forced:
        rest, idmap = remove_vertices(d, forced)
        found = disjoint_dfvs(rest, k - len(forced), idmap.to_new(w), trace)
        return None if found is None else forced | idmap.to_old(found)

    if is_acyclic(d):
        return frozenset()

    ws = sorted(w)
    skew, compact, copies = _skew_graph(d, ws)
    back = {i: v for v, i in compact.items()}
    best: Optional[FrozenSet[int]] = None
    explored = 0
    for order in _topological_orders(d, ws):
        budget = k if best is None else len(best) - 1
        if budget < 0:
            break
        explored += 1
        pairs = tuple((frozenset((copies[x][0],)), frozenset((copies[x][1],))) for x in order)
        cut = skew_separator(SkewCutInstance(skew, pairs, budget))
        if cut is not None:
            best = frozenset(back[c] for c in cut)
            if not best:
                break
    if trace is not None:
        trace.append({"type": "disjoint", "w_size": len(ws), "orderings": explored, "found": best is not None})
    if best is not None:
        ensure_acyclic_after_deletion(d, best, "disjoint_dfvs")
    return best


def smart_compress(d: Digraph, k: int, w: Iterable[int], trace: Trace = None) -> Optional[FrozenSet[int]]:
    """Minimum dfvs of size <= k from a dfvs W of any size.

    W is added back one vertex at a time, compressing the previous answer plus
    the new vertex on every step.
    """
    w = frozenset(w)
    _check_input(d, k, w)
    if len(w) <= k + 1:
        return compress(d, k, w, trace)

    order = sorted(w)
    outside = [v for v in d.vertices() if v not in w]
    current: FrozenSet[int] = frozenset(order[: k + 1])
    for i in range(k + 1, len(order) + 1):
        sub, idmap = induced(d, outside + order[:i])
        seed = idmap.to_new(current)
        found = compress(sub, k, seed, trace)
        if found is None:
            logger.debug("smart_compress k=%d: no solution on step %d of %d", k, i, len(order))
            return None
        current = idmap.to_old(found)
        if i < len(order):
            current = current | {order[i]}
    if trace is not None:
        trace.append({"type": "smart-compress", "w_size": len(w), "k": k, "size": len(current)})
    return current
