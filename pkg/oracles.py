"""
Brute-force oracles for the property tests. networkx does the graph work so
that none of the solver's own traversal code is trusted here.
"""

from dataclasses import dataclass
from itertools import combinations
from typing import FrozenSet, List, Optional, Tuple

import networkx as nx

from graphs.digraph import Digraph, StructureInstance


def to_networkx(d: Digraph) -> nx.DiGraph:
    g = nx.DiGraph()
    g.add_nodes_from(range(d.n))
    g.add_edges_from(d.arcs)
    return g


def brute_force_dfvs(d: Digraph, k: int) -> Optional[FrozenSet[int]]:
    """First dfvs of size <= k in (size, lexicographic) order, or None."""
    g = to_networkx(d)
    if nx.is_directed_acyclic_graph(g):
        return frozenset()
    nodes = list(range(d.n))
    for size in range(1, min(k, d.n) + 1):
        for cand in combinations(nodes, size):
            rest = g.subgraph(v for v in nodes if v not in cand)
            if nx.is_directed_acyclic_graph(rest):
                return frozenset(cand)
    return None


def min_dfvs_size(d: Digraph) -> int:
    return len(brute_force_dfvs(d, d.n))


def min_dfvs_size_avoiding(d: Digraph, avoid) -> Optional[int]:
    """Smallest dfvs that keeps every vertex of `avoid`; None when none exists."""
    g = to_networkx(d)
    keep = frozenset(avoid)
    pool = [v for v in range(d.n) if v not in keep]
    for size in range(len(pool) + 1):
        for cand in combinations(pool, size):
            if nx.is_directed_acyclic_graph(g.subgraph(v for v in range(d.n) if v not in cand)):
                return size
    return None


def min_deletion_size(q: StructureInstance) -> int:
    """Oracle callback shape used by crux verification."""
    return min_dfvs_size(q.digraph)


def brute_force_dfas(d: Digraph, k: int) -> Optional[FrozenSet[Tuple[int, int]]]:
    g = to_networkx(d)
    if nx.is_directed_acyclic_graph(g):
        return frozenset()
    arcs = list(d.arcs)
    for size in range(1, min(k, len(arcs)) + 1):
        for cand in combinations(arcs, size):
            h = g.copy()
            h.remove_edges_from(cand)
            if nx.is_directed_acyclic_graph(h):
                return frozenset(cand)
    return None


def _separates(g: nx.DiGraph, s: int, t: int, cand) -> bool:
    h = g.subgraph(v for v in g.nodes if v not in cand)
    return not nx.has_path(h, s, t)


@dataclass(frozen=True)
class MinSeparators:
    """All minimum s-t vertex separators; lam is None when s -> t is an arc."""

    lam: Optional[int]
    separators: Tuple[FrozenSet[int], ...]


def enumerate_min_separators(d: Digraph, s: int, t: int) -> MinSeparators:
    g = to_networkx(d)
    if g.has_edge(s, t):
        return MinSeparators(None, ())
    inner = [v for v in range(d.n) if v not in (s, t)]
    for size in range(len(inner) + 1):
        found = [frozenset(c) for c in combinations(inner, size) if _separates(g, s, t, c)]
        if found:
            return MinSeparators(size, tuple(found))
    return MinSeparators(None, ())


def enumerate_minimal_separators(d: Digraph, s: int, t: int, max_size: int) -> List[FrozenSet[int]]:
    """Inclusion-minimal s-t separators of size <= max_size."""
    g = to_networkx(d)
    if g.has_edge(s, t):
        return []
    inner = [v for v in range(d.n) if v not in (s, t)]
    out: List[FrozenSet[int]] = []
    for size in range(min(max_size, len(inner)) + 1):
        for cand in combinations(inner, size):
            sep = frozenset(cand)
            if any(prev <= sep for prev in out):
                continue
            if _separates(g, s, t, sep):
                out.append(sep)
    return out


def has_small_separator_inside(d: Digraph, s: int, t: int, pool, k: int) -> bool:
    """Whether some s-t separator of size <= k lies inside `pool`."""
    g = to_networkx(d)
    if g.has_edge(s, t):
        return False
    pool = sorted(set(pool) - {s, t})
    for size in range(min(k, len(pool)) + 1):
        for cand in combinations(pool, size):
            if _separates(g, s, t, cand):
                return True
    return False


def brute_scc(d: Digraph) -> List[FrozenSet[int]]:
    return [frozenset(c) for c in nx.strongly_connected_components(to_networkx(d))]
