"""
Unit vertex-capacity max flow on the vertex-split network and the separator
toolkit built on it: separator layers, minimum separators, gap sets and
important separators.

Node ids of the split network: v- = 2v, v+ = 2v + 1. Deletable vertices get a
capacity-1 split arc; undeletable vertices (terminals) and original arcs get
"infinite" capacity budget + 2, which no run of at most budget + 1
augmentations can saturate.
"""

import logging
from collections import deque
from dataclasses import dataclass
from typing import Dict, FrozenSet, Iterable, List, Optional, Set, Tuple, Union

from graphs.digraph import Digraph, PreconditionError, SelfCheckError, reachable, tarjan

logger = logging.getLogger("dfvs.flow")

INF_SLACK = 2


@dataclass(frozen=True)
class ExceedsBudget:
    """lambda(s, t) > budget; `infinite` when no vertex set separates at all."""

    budget: int
    infinite: bool = False


class SplitNetwork:
    """Residual network over the split digraph; edges are stored in (forward, reverse) pairs."""

    def __init__(
        self,
        d: Digraph,
        sources: Iterable[int],
        sinks: Iterable[int],
        budget: int,
        undeletable: Iterable[int] = (),
        removed: Iterable[int] = (),
    ):
        self.digraph = d
        self.budget = budget
        self.sources = frozenset(sources)
        self.sinks = frozenset(sinks)
        self.removed = frozenset(removed)
        self.undeletable = frozenset(undeletable) | self.sources | self.sinks
        inf = budget + INF_SLACK
        nodes = 2 * d.n
        self.head: List[int] = []
        self.cap: List[int] = []
        self.adj: List[List[int]] = [[] for _ in range(nodes)]
        self.split_edge: Dict[int, int] = {}
        for v in d.vertices():
            if v in self.removed:
                continue
            self.split_edge[v] = len(self.head)
            self._add(2 * v, 2 * v + 1, inf if v in self.undeletable else 1)
        tails, heads = d.arc_arrays()
        for a, b in zip(tails, heads):
            if a == b or a in self.removed or b in self.removed:
                continue
            self._add(2 * a + 1, 2 * b, inf)
        self.source_nodes = [2 * x + 1 for x in sorted(self.sources) if x not in self.removed]
        self.sink_nodes = frozenset(2 * y for y in self.sinks if y not in self.removed)
        self.value = 0

    def _add(self, u: int, v: int, c: int) -> None:
        e = len(self.head)
        self.head += (v, u)
        self.cap += (c, 0)
        self.adj[u].append(e)
        self.adj[v].append(e + 1)

    @property
    def num_nodes(self) -> int:
        return len(self.adj)

    def augment(self) -> bool:
        """One BFS augmenting path from any source node to any sink node."""
        head, cap, adj = self.head, self.cap, self.adj
        parent = [-1] * len(adj)
        seen = bytearray(len(adj))
        queue = deque(self.source_nodes)
        for x in self.source_nodes:
            seen[x] = 1
        while queue:
            x = queue.popleft()
            for e in adj[x]:
                if cap[e] <= 0:
                    continue
                y = head[e]
                if seen[y]:
                    continue
                seen[y] = 1
                parent[y] = e
                if y in self.sink_nodes:
                    while parent[y] != -1:
                        pe = parent[y]
                        cap[pe] -= 1
                        cap[pe ^ 1] += 1
                        y = head[pe ^ 1]
                    self.value += 1
                    return True
                queue.append(y)
        return False

    def run(self) -> Optional[int]:
        """At most budget + 1 augmentations; None when the flow exceeds the budget."""
        if self.sources & self.sinks:
            return None
        while self.value <= self.budget:
            if not self.augment():
                return self.value
        return None

    def infinite(self) -> bool:
        """True when sources reach sinks through undeletable vertices only."""
        if self.sources & self.sinks:
            return True
        d = self.digraph
        blocked = {v for v in d.vertices() if v not in self.undeletable} | self.removed
        return bool(reachable(d, self.sources, blocked) & self.sinks)

    def residual_successors(self, x: int) -> List[int]:
        head, cap = self.head, self.cap
        return [head[e] for e in self.adj[x] if cap[e] > 0]

    def network_successors(self, x: int) -> List[int]:
        """Arcs of the split network itself (forward edges have even ids)."""
        head = self.head
        return [head[e] for e in self.adj[x] if not e & 1]

    def coreach_sinks(self) -> bytearray:
        """Nodes that can still reach a sink node in the residual network."""
        head, cap = self.head, self.cap
        mark = bytearray(len(self.adj))
        stack = list(self.sink_nodes)
        for y in stack:
            mark[y] = 1
        while stack:
            y = stack.pop()
            for e in self.adj[y]:
                # e runs y -> x; the residual arc x -> y is its partner
                x = head[e]
                if not mark[x] and cap[e ^ 1] > 0:
                    mark[x] = 1
                    stack.append(x)
        return mark

    def furthest_cut(self) -> Tuple[FrozenSet[int], Set[int]]:
        """Minimum separator closest to the sinks and R(sources, separator); call after run()."""
        mark = self.coreach_sinks()
        d = self.digraph
        separator = frozenset(
            v for v in d.vertices() if v not in self.removed and not mark[2 * v] and mark[2 * v + 1]
        )
        side = reachable(d, self.sources, separator | self.removed)
        return separator, side


@dataclass(frozen=True)
class FlowResult:
    value: int
    network: SplitNetwork

    def saturated(self) -> FrozenSet[int]:
        """Deletable vertices whose split arc carries flow."""
        net = self.network
        return frozenset(v for v, e in net.split_edge.items() if v not in net.undeletable and net.cap[e] == 0)


def _check_terminals(d: Digraph, s: int, t: int) -> None:
    d.check_vertex(s)
    d.check_vertex(t)
    if s == t:
        raise PreconditionError("source and sink must differ")


def max_vertex_flow(d: Digraph, s: int, t: int, k: int) -> Union[FlowResult, ExceedsBudget]:
    _check_terminals(d, s, t)
    net = SplitNetwork(d, [s], [t], k)
    value = net.run()
    if value is None:
        return ExceedsBudget(k, net.infinite())
    return FlowResult(value, net)


def arc_cut_to_vertices(arcs: Iterable[Tuple[int, int]]) -> FrozenSet[int]:
    """Split arcs (v-, v+) back to the vertex separator they encode."""
    out = set()
    for a, b in arcs:
        if a & 1 or b != a + 1:
            raise PreconditionError(f"({a}, {b}) is not a split arc")
        out.add(a // 2)
    return frozenset(out)


def vertices_to_arc_cut(vertices: Iterable[int]) -> FrozenSet[Tuple[int, int]]:
    return frozenset((2 * v, 2 * v + 1) for v in vertices)


@dataclass(frozen=True)
class SeparatorChain:
    """X_1 < ... < X_q with every N+(X_i) a minimum s-t separator.

    `labels[v]` is the index i with v in X_i minus X_{i-1}, q + 1 for the closure
    R(s, {t}) minus X_q, and 0 elsewhere. `marks[v]` is the earliest i with
    v in N+(X_i) (0 if none).
    """

    digraph: Digraph
    s: int
    t: int
    lam: int
    deltas: Tuple[Tuple[int, ...], ...]
    boundaries: Tuple[Tuple[int, ...], ...]
    closure: Tuple[int, ...]
    labels: Tuple[int, ...]
    marks: Tuple[int, ...]

    @property
    def q(self) -> int:
        return len(self.deltas)

    def x_set(self, i: int) -> FrozenSet[int]:
        """X_i as an explicit set (X_0 is empty)."""
        return frozenset(v for delta in self.deltas[:i] for v in delta)

    def boundary(self, i: int) -> FrozenSet[int]:
        return frozenset(self.boundaries[i - 1]) if i >= 1 else frozenset()

    def to_json(self) -> Dict[str, object]:
        return {
            "s": self.s,
            "t": self.t,
            "lambda": self.lam,
            "deltas": [list(delta) for delta in self.deltas],
            "boundaries": [list(b) for b in self.boundaries],
        }


def separator_layers(d: Digraph, s: int, t: int, k: int) -> Union[SeparatorChain, ExceedsBudget]:
    """Separator layers via residual SCCs and a BFS that defers forbidden nodes.

    With the residual SCCs C_1..C_r in topological order and alpha(x) the index
    of x's component, Y_i is the union of C_j for j >= i. For i from alpha(s+)
    down to alpha(t-) + 1 the BFS over the split network is allowed to enter
    only nodes with alpha >= i; deferred nodes wait in a bucket keyed by their
    own alpha and are released when i reaches it. The nodes seen at level i
    form R(Y_i), and X_i collects the vertices whose out-node was seen.
    """
    flow = max_vertex_flow(d, s, t, k)
    if isinstance(flow, ExceedsBudget):
        return flow
    net = flow.network
    n = d.n
    closure_side = reachable(d, [s], [t]) - {t}

    if flow.value == 0:
        members = tuple(sorted(closure_side))
        labels = [0] * n
        for v in members:
            labels[v] = 1
        return SeparatorChain(d, s, t, 0, (members,), ((),), (), tuple(labels), tuple([0] * n))

    comps = tarjan(net.num_nodes, net.residual_successors)
    alpha = [0] * net.num_nodes
    for idx, comp in enumerate(comps):
        for x in comp:
            alpha[x] = idx
    top, bottom = alpha[2 * s + 1], alpha[2 * t]
    if bottom >= top:
        raise SelfCheckError("sink component must precede the source component")

    visited = bytearray(net.num_nodes)
    pending = bytearray(net.num_nodes)
    buckets: Dict[int, List[int]] = {}
    labels = [0] * n
    marks = [0] * n
    cut: Set[int] = set()
    deltas: List[Tuple[int, ...]] = []
    boundaries: List[Tuple[int, ...]] = []

    def visit(x: int, level: int, fresh: List[int]) -> None:
        visited[x] = 1
        v = x >> 1
        if x & 1:
            cut.discard(v)
            fresh.append(v)
        elif not visited[x | 1]:
            cut.add(v)
            if not marks[v]:
                marks[v] = level

    queue: deque = deque()
    first = 2 * s + 1
    for i in range(top, bottom, -1):
        fresh: List[int] = []
        ordinal = len(deltas) + 1
        if i == top:
            visit(first, ordinal, fresh)
            queue.append(first)
        for x in buckets.pop(i, ()):
            if not visited[x]:
                visit(x, ordinal, fresh)
                queue.append(x)
        while queue:
            x = queue.popleft()
            for y in net.network_successors(x):
                if visited[y]:
                    continue
                if alpha[y] >= i:
                    visit(y, ordinal, fresh)
                    queue.append(y)
                elif not pending[y]:
                    pending[y] = 1
                    buckets.setdefault(alpha[y], []).append(y)
        if not fresh:
            continue
        if len(cut) != flow.value:
            raise SelfCheckError(f"layer boundary has {len(cut)} vertices, expected {flow.value}")
        for v in fresh:
            labels[v] = ordinal
        deltas.append(tuple(sorted(fresh)))
        boundaries.append(tuple(sorted(cut)))

    closure = tuple(sorted(v for v in closure_side if not labels[v]))
    q = len(deltas)
    for v in closure:
        labels[v] = q + 1
    logger.debug("separator layers s=%d t=%d lambda=%d q=%d", s, t, flow.value, q)
    return SeparatorChain(
        d, s, t, flow.value, tuple(deltas), tuple(boundaries), closure, tuple(labels), tuple(marks)
    )


def min_separator(d: Digraph, s: int, t: int, k: int) -> Union[FrozenSet[int], ExceedsBudget]:
    chain = separator_layers(d, s, t, k)
    if isinstance(chain, ExceedsBudget):
        return chain
    return chain.boundary(1)


def gap_sets(chain: SeparatorChain) -> List[FrozenSet[int]]:
    """Z_i = X_{i+1} minus N+[X_i] for 0 <= i <= q, with X_0 empty and X_{q+1} = V(D)."""
    d = chain.digraph
    q = chain.q
    out = []
    for i in range(q + 1):
        x_i = chain.x_set(i)
        upper = chain.x_set(i + 1) if i < q else frozenset(d.vertices())
        out.append(frozenset(upper - x_i - chain.boundary(i)))
    return out


def not_reachable(d: Digraph, sources: Iterable[int], removed: Iterable[int]) -> Set[int]:
    """NR(X, S) = V(D) minus (R(X, S) union S)."""
    removed = set(removed)
    seen = reachable(d, sources, removed)
    return {v for v in d.vertices() if v not in seen and v not in removed}


def covers(d: Digraph, u: int, s1: Iterable[int], s2: Iterable[int]) -> bool:
    """S2 covers S1 when R(u, S2) contains R(u, S1)."""
    return reachable(d, [u], s2) >= reachable(d, [u], s1)


def separates(d: Digraph, sources: Iterable[int], sinks: Iterable[int], sep: Iterable[int]) -> bool:
    sep = set(sep)
    return not (reachable(d, sources, sep) & (set(sinks) - sep))


def important_separators(
    d: Digraph,
    sources: Iterable[int],
    sinks: Iterable[int],
    k: int,
    undeletable: Iterable[int] = (),
    removed: Iterable[int] = (),
) -> List[FrozenSet[int]]:
    """All important (sources, sinks)-separators of size <= k, possibly with extra valid ones.

    Push-or-include recursion on a vertex of the furthest minimum separator: either
    the vertex is taken, or it joins the source side and lambda strictly grows.
    """
    found: Set[FrozenSet[int]] = set()
    _important(
        d,
        frozenset(sources),
        frozenset(sinks),
        k,
        frozenset(undeletable),
        frozenset(removed),
        frozenset(),
        found,
    )
    return sorted(found, key=lambda sep: (len(sep), sorted(sep)))


def _important(
    d: Digraph,
    sources: FrozenSet[int],
    sinks: FrozenSet[int],
    k: int,
    undeletable: FrozenSet[int],
    removed: FrozenSet[int],
    chosen: FrozenSet[int],
    found: Set[FrozenSet[int]],
) -> None:
    if k < 0:
        return
    net = SplitNetwork(d, sources, sinks, k, undeletable, removed)
    value = net.run()
    if value is None:
        return
    if value == 0:
        found.add(chosen)
        return
    separator, side = net.furthest_cut()
    v = min(separator)
    _important(d, sources, sinks, k - 1, undeletable, removed | {v}, chosen | {v}, found)
    _important(d, frozenset(side) | {v}, sinks, k, undeletable, removed, chosen, found)
