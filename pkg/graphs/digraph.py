"""
Digraph substrate for the DFVS pipeline.

Vertices are 0-based contiguous ids. Adjacency is stored CSR-style (offsets plus a
flat neighbor array) in both directions; numpy builds the layout once and the
traversal code works on plain Python lists.
"""

import logging
from bisect import bisect_left
from dataclasses import dataclass, field
from functools import cached_property
from typing import Callable, Dict, FrozenSet, Iterable, List, Optional, Protocol, Tuple

import numpy as np

logger = logging.getLogger("dfvs.digraph")


class GraphError(Exception):
    pass


class InvalidVertexError(GraphError, ValueError):
    pass


class PreconditionError(GraphError):
    pass


class SelfCheckError(GraphError):
    pass


class Digraph:
    """Immutable directed graph; parallel arcs are merged, self-loops kept and flagged."""

    def __init__(self, n: int, arcs: Iterable[Tuple[int, int]] = ()):
        if n < 0:
            raise GraphError(f"vertex count must be non-negative, got {n}")
        pairs = np.asarray(list(arcs), dtype=np.int64).reshape(-1, 2)
        if pairs.size and (pairs.min() < 0 or pairs.max() >= n):
            bad = pairs[(pairs < 0).any(axis=1) | (pairs >= n).any(axis=1)][0]
            raise InvalidVertexError(f"arc ({bad[0]}, {bad[1]}) out of range for n={n}")

        if n and pairs.size:
            keys = np.unique(pairs[:, 0] * n + pairs[:, 1])
            tails, heads = keys // n, keys % n
        else:
            tails = heads = np.empty(0, dtype=np.int64)

        out_offsets = np.zeros(n + 1, dtype=np.int64)
        out_offsets[1:] = np.cumsum(np.bincount(tails, minlength=n))
        in_offsets = np.zeros(n + 1, dtype=np.int64)
        in_offsets[1:] = np.cumsum(np.bincount(heads, minlength=n))
        by_head = np.argsort(heads, kind="stable")

        self._n = n
        self._tails: List[int] = tails.tolist()
        self._heads: List[int] = heads.tolist()
        self._out_off: List[int] = out_offsets.tolist()
        self._in_off: List[int] = in_offsets.tolist()
        self._in: List[int] = tails[by_head].tolist()
        self._self_loops = frozenset(tails[tails == heads].tolist())

    @property
    def n(self) -> int:
        return self._n

    @property
    def m(self) -> int:
        return len(self._heads)

    @property
    def size(self) -> int:
        """|Q| of the bare digraph instance: n + m."""
        return self._n + len(self._heads)

    @property
    def self_loops(self) -> FrozenSet[int]:
        return self._self_loops

    @property
    def arcs(self) -> List[Tuple[int, int]]:
        return list(zip(self._tails, self._heads))

    def arc_arrays(self) -> Tuple[List[int], List[int]]:
        return self._tails, self._heads

    def vertices(self) -> range:
        return range(self._n)

    def out_neighbors(self, v: int) -> List[int]:
        return self._heads[self._out_off[v]:self._out_off[v + 1]]

    def in_neighbors(self, v: int) -> List[int]:
        return self._in[self._in_off[v]:self._in_off[v + 1]]

    def out_degree(self, v: int) -> int:
        return self._out_off[v + 1] - self._out_off[v]

    def in_degree(self, v: int) -> int:
        return self._in_off[v + 1] - self._in_off[v]

    def has_arc(self, u: int, v: int) -> bool:
        lo, hi = self._out_off[u], self._out_off[u + 1]
        i = bisect_left(self._heads, v, lo, hi)
        return i < hi and self._heads[i] == v

    def check_vertex(self, v: int) -> None:
        if not 0 <= v < self._n:
            raise InvalidVertexError(f"vertex {v} out of range for n={self._n}")

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Digraph):
            return NotImplemented
        return self._n == other._n and self._tails == other._tails and self._heads == other._heads

    def __hash__(self) -> int:
        return hash((self._n, tuple(self._tails), tuple(self._heads)))

    def __repr__(self) -> str:
        return f"Digraph(n={self._n}, m={self.m})"


@dataclass(frozen=True)
class IdMap:
    """Bijection between compacted ids (positions in `old`) and the parent's ids."""

    old: Tuple[int, ...]
    new: Dict[int, int] = field(compare=False, repr=False)

    def to_old(self, vertices: Iterable[int]) -> FrozenSet[int]:
        return frozenset(self.old[v] for v in vertices)

    def to_new(self, vertices: Iterable[int]) -> FrozenSet[int]:
        return frozenset(self.new[v] for v in vertices if v in self.new)


def induced(d: Digraph, x: Iterable[int]) -> Tuple[Digraph, IdMap]:
    """D[x] with compacted ids (ascending order of the original ids)."""
    old = sorted(set(x))
    for v in old:
        d.check_vertex(v)
    new_of = {v: i for i, v in enumerate(old)}
    arcs = [(i, new_of[b]) for i, a in enumerate(old) for b in d.out_neighbors(a) if b in new_of]
    return Digraph(len(old), arcs), IdMap(tuple(old), new_of)


def remove_vertices(d: Digraph, x: Iterable[int]) -> Tuple[Digraph, IdMap]:
    gone = set(x)
    return induced(d, (v for v in d.vertices() if v not in gone))


def is_acyclic(d: Digraph) -> bool:
    """Kahn's algorithm; a self-loop keeps its vertex's in-degree positive."""
    indeg = [d.in_degree(v) for v in d.vertices()]
    stack = [v for v in d.vertices() if indeg[v] == 0]
    seen = 0
    while stack:
        v = stack.pop()
        seen += 1
        for w in d.out_neighbors(v):
            indeg[w] -= 1
            if indeg[w] == 0:
                stack.append(w)
    return seen == d.n


def acyclic_after_deletion(d: Digraph, x: Iterable[int]) -> bool:
    return is_acyclic(remove_vertices(d, x)[0])


def reachable(d: Digraph, sources: Iterable[int], removed: Iterable[int] = ()) -> set:
    """R(X, S): vertices of D - S reachable from X (sources inside S are dropped)."""
    blocked = set(removed)
    seen = set(v for v in sources if v not in blocked)
    stack = list(seen)
    while stack:
        v = stack.pop()
        for w in d.out_neighbors(v):
            if w not in seen and w not in blocked:
                seen.add(w)
                stack.append(w)
    return seen


def tarjan(num_nodes: int, successors: Callable[[int], Iterable[int]]) -> List[List[int]]:
    """Iterative Tarjan; components come back in topological order of the condensation."""
    index = [-1] * num_nodes
    low = [0] * num_nodes
    on_stack = [False] * num_nodes
    stack: List[int] = []
    components: List[List[int]] = []
    counter = 0
    for root in range(num_nodes):
        if index[root] != -1:
            continue
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack[root] = True
        work = [(root, iter(successors(root)))]
        while work:
            node, it = work[-1]
            descended = False
            for nxt in it:
                if index[nxt] == -1:
                    index[nxt] = low[nxt] = counter
                    counter += 1
                    stack.append(nxt)
                    on_stack[nxt] = True
                    work.append((nxt, iter(successors(nxt))))
                    descended = True
                    break
                if on_stack[nxt] and index[nxt] < low[node]:
                    low[node] = index[nxt]
            if descended:
                continue
            work.pop()
            if work:
                parent = work[-1][0]
                if low[node] < low[parent]:
                    low[parent] = low[node]
            if low[node] == index[node]:
                comp = []
                while True:
                    w = stack.pop()
                    on_stack[w] = False
                    comp.append(w)
                    if w == node:
                        break
                components.append(comp)
    # Tarjan emits sink components first.
    components.reverse()
    return components


@dataclass(frozen=True)
class SccDecomposition:
    component_of: Tuple[int, ...]
    components: Tuple[Tuple[int, ...], ...]
    nontrivial: Tuple[bool, ...]

    @property
    def count(self) -> int:
        return len(self.components)

    def nontrivial_components(self) -> List[Tuple[int, ...]]:
        return [c for c, flag in zip(self.components, self.nontrivial) if flag]


def scc_decompose(d: Digraph) -> SccDecomposition:
    comps = [tuple(sorted(c)) for c in tarjan(d.n, d.out_neighbors)]
    component_of = [0] * d.n
    for i, comp in enumerate(comps):
        for v in comp:
            component_of[v] = i
    loops = d.self_loops
    flags = tuple(len(c) > 1 or c[0] in loops for c in comps)
    return SccDecomposition(tuple(component_of), tuple(comps), flags)


def is_strongly_connected(d: Digraph) -> bool:
    return d.n > 0 and len(tarjan(d.n, d.out_neighbors)) == 1


@dataclass(frozen=True)
class StructureInstance:
    """An epsilon-structure: a digraph plus relations over its vertices.

    `labels` carries the ids the vertices had in the top-level instance, so
    solutions found on substructures can be reported without extra maps.
    """

    digraph: Digraph
    relations: Tuple[FrozenSet[Tuple[int, ...]], ...] = ()
    epsilon: int = 1
    labels: Optional[Tuple[int, ...]] = None

    def __post_init__(self):
        if self.labels is None:
            object.__setattr__(self, "labels", tuple(range(self.digraph.n)))
        elif len(self.labels) != self.digraph.n:
            raise GraphError("labels must name every vertex exactly once")
        object.__setattr__(self, "relations", tuple(frozenset(r) for r in self.relations))
        for rel in self.relations:
            for tup in rel:
                if len(tup) > self.epsilon:
                    raise GraphError(f"tuple {tup} exceeds arity {self.epsilon}")
                for v in tup:
                    self.digraph.check_vertex(v)

    @cached_property
    def _index(self) -> Dict[int, int]:
        return {label: i for i, label in enumerate(self.labels)}

    @property
    def n(self) -> int:
        return self.digraph.n

    def size(self) -> int:
        return self.digraph.n + self.digraph.m + self.epsilon * sum(len(r) for r in self.relations)

    def to_labels(self, local: Iterable[int]) -> FrozenSet[int]:
        return frozenset(self.labels[v] for v in local)

    def local_ids(self, labels: Iterable[int]) -> FrozenSet[int]:
        index = self._index
        return frozenset(index[x] for x in labels if x in index)

    def induced(self, x: Iterable[int]) -> "StructureInstance":
        sub, idmap = induced(self.digraph, x)
        relations = tuple(
            frozenset(tuple(idmap.new[v] for v in tup) for tup in rel if all(v in idmap.new for v in tup))
            for rel in self.relations
        )
        return StructureInstance(sub, relations, self.epsilon, tuple(self.labels[v] for v in idmap.old))

    def remove(self, x: Iterable[int]) -> "StructureInstance":
        gone = set(x)
        return self.induced(v for v in range(self.n) if v not in gone)


class StructureFamily(Protocol):
    """A hereditary, rigid, linear-time recognizable family of structures."""

    name: str

    def recognize(self, q: StructureInstance) -> bool:
        ...

    def size(self, q: StructureInstance) -> int:
        ...


class AcyclicFamily:
    """DFVS instantiation: the family of all directed acyclic graphs (relations ignored)."""

    name = "acyclic"

    def recognize(self, q: StructureInstance) -> bool:
        return is_acyclic(q.digraph)

    def size(self, q: StructureInstance) -> int:
        return q.size()


ACYCLIC = AcyclicFamily()


def dfvs_family_recognize(q: StructureInstance) -> bool:
    return ACYCLIC.recognize(q)


def find_cycle_pair(q: StructureInstance) -> Tuple[int, int]:
    """Pair finder for DFVS: (b, a) for the first DFS back-arc (a, b) in the first non-trivial SCC.

    Every dfvs avoiding both returned vertices must cut all u->v paths, since v->u is an arc.
    """
    d = q.digraph
    scc = scc_decompose(d)
    for comp in scc.components:
        if len(comp) < 2:
            continue
        members = set(comp)
        state = {v: 0 for v in comp}
        root = comp[0]
        state[root] = 1
        work = [(root, iter(d.out_neighbors(root)))]
        while work:
            a, it = work[-1]
            descended = False
            for b in it:
                if b == a or b not in members:
                    continue
                if state[b] == 1:
                    return b, a
                if state[b] == 0:
                    state[b] = 1
                    work.append((b, iter(d.out_neighbors(b))))
                    descended = True
                    break
            if not descended:
                state[a] = 2
                work.pop()
    raise PreconditionError("find_cycle_pair needs a cycle of length at least 2")


def strip_trivial_components(q: StructureInstance, family: StructureFamily = ACYCLIC) -> StructureInstance:
    """Drop every SCC whose induced substructure is already in the family."""
    scc = scc_decompose(q.digraph)
    keep: List[int] = []
    for comp, flagged in zip(scc.components, scc.nontrivial):
        if not flagged:
            continue
        if family.recognize(q.induced(comp)):
            continue
        keep.extend(comp)
    if len(keep) == q.n:
        return q
    logger.debug("stripped %d of %d vertices", q.n - len(keep), q.n)
    return q.induced(keep)
