"""
Tight u-v separator sequences of order k and the two scans the crux cascade
runs over them.

The sequence is built recursively from the separator layers: every layer of
the chain is turned into a local graph whose own tight sequence fills the
room between two consecutive layers. The recursion stops because the local
connectivity is strictly larger than the parent's.
"""

import logging
from dataclasses import dataclass
from typing import Dict, FrozenSet, List, Optional, Tuple, Union

from graphs.digraph import (
    ACYCLIC,
    Digraph,
    PreconditionError,
    StructureFamily,
    StructureInstance,
)
from graphs.flow import ExceedsBudget, SeparatorChain, separator_layers

logger = logging.getLogger("dfvs.tight")

S_LOCAL = 0
T_LOCAL = 1


@dataclass(frozen=True)
class TightSeparatorSequence:
    """Delta-encoded H_1 < ... < H_q with boundaries Z_i = N+(H_i).

    labels[w] is the least i with w in H_i (q + 1 when w is in no H_i);
    marks[w] is the least i with w in Z_i (0 when w is on no boundary).
    """

    digraph: Digraph
    u: int
    v: int
    order: int
    deltas: Tuple[Tuple[int, ...], ...]
    boundaries: Tuple[FrozenSet[int], ...]
    labels: Tuple[int, ...]
    marks: Tuple[int, ...]

    @property
    def q(self) -> int:
        return len(self.deltas)

    def h_set(self, i: int) -> FrozenSet[int]:
        return frozenset(w for delta in self.deltas[:i] for w in delta)

    def boundary(self, i: int) -> FrozenSet[int]:
        return self.boundaries[i - 1]

    def gap(self, i: int) -> FrozenSet[int]:
        """H_{i+1} minus N+[H_i]."""
        z = self.boundaries[i - 1]
        return frozenset(w for w in self.deltas[i] if w not in z)

    def to_json(self) -> Dict[str, object]:
        return {
            "u": self.u,
            "v": self.v,
            "order": self.order,
            "deltas": [list(delta) for delta in self.deltas],
            "boundaries": [sorted(z) for z in self.boundaries],
        }


@dataclass(frozen=True)
class LocalGraph:
    """D_i for one chain layer: P_i contracted to s_i (id 0), Q_i to t_i (id 1)."""

    index: int
    digraph: Digraph
    ids: Tuple[int, ...]
    p: FrozenSet[int]
    q: FrozenSet[int]
    w: FrozenSet[int]
    direct: bool


def _layer(chain: SeparatorChain, i: int) -> Tuple[int, ...]:
    return chain.deltas[i - 1] if i <= chain.q else chain.closure


def build_local_graph(chain: SeparatorChain, i: int, include_w: bool = True) -> LocalGraph:
    """Local graph of layer i, 1 <= i <= q + 1.

    With include_w the W_i vertices are wired s_i -> w -> t_i; the recursion
    works on D_i - W_i and passes include_w=False.
    """
    q = chain.q
    if not 1 <= i <= q + 1:
        raise PreconditionError(f"layer index {i} outside 1..{q + 1}")
    d = chain.digraph
    y = _layer(chain, i)
    prev = chain.boundary(i - 1)
    cur = chain.boundary(i) if i <= q else frozenset((chain.t,))
    p = frozenset((chain.s,)) if i == 1 else frozenset(v for v in y if v in prev)
    q_set = cur - prev
    w = cur & prev

    inner = [v for v in y if v not in p]
    ids: List[int] = [-1, -1] + inner
    if include_w:
        ids += sorted(w)
    index = {v: j for j, v in enumerate(ids) if j > 1}

    arcs: List[Tuple[int, int]] = []
    direct = False
    for a in y:
        src = S_LOCAL if a in p else index[a]
        for b in d.out_neighbors(a):
            if b in q_set:
                if src == S_LOCAL:
                    direct = True
                else:
                    arcs.append((src, T_LOCAL))
            elif b in index and b not in w:
                arcs.append((src, index[b]))
    if direct:
        arcs.append((S_LOCAL, T_LOCAL))
    if include_w:
        for x in w:
            arcs.append((S_LOCAL, index[x]))
            arcs.append((index[x], T_LOCAL))
    return LocalGraph(i, Digraph(len(ids), arcs), tuple(ids), p, q_set, w, direct)


def _tight_deltas(d: Digraph, s: int, t: int, k: int) -> Union[List[List[int]], ExceedsBudget]:
    chain = separator_layers(d, s, t, k)
    if isinstance(chain, ExceedsBudget):
        return chain
    if chain.lam == 0:
        return [list(chain.deltas[0])]
    q = chain.q
    out: List[List[int]] = []
    for i in range(1, q + 2):
        taken: set = set()
        # the local connectivity exceeds lam, so only k > lam leaves room inside a layer
        if k > chain.lam:
            local = build_local_graph(chain, i, include_w=False)
            if not local.direct:
                sub = _tight_deltas(local.digraph, S_LOCAL, T_LOCAL, k - len(local.w))
                if not isinstance(sub, ExceedsBudget):
                    for j, delta in enumerate(sub):
                        mapped = [local.ids[x] for x in delta if x != S_LOCAL]
                        if j == 0:
                            mapped = sorted(local.p) + mapped
                        if mapped:
                            out.append(mapped)
                            taken.update(mapped)
        if i <= q:
            rest = [v for v in chain.deltas[i - 1] if v not in taken]
            if rest:
                out.append(rest)
    return out


def _finalize(d: Digraph, u: int, v: int, k: int, deltas: List[List[int]]) -> TightSeparatorSequence:
    q = len(deltas)
    labels = [q + 1] * d.n
    for i, delta in enumerate(deltas, start=1):
        for w in delta:
            labels[w] = i
    # w sits on Z_i for marks[w] <= i < labels[w]
    marks = [0] * d.n
    for w in d.vertices():
        lw = labels[w]
        lo = min((labels[a] for a in d.in_neighbors(w) if labels[a] < lw), default=0)
        marks[w] = lo
    zs: List[List[int]] = [[] for _ in range(q)]
    for w in d.vertices():
        if marks[w]:
            for i in range(marks[w], min(labels[w], q + 1)):
                zs[i - 1].append(w)
    return TightSeparatorSequence(
        d,
        u,
        v,
        k,
        tuple(tuple(sorted(delta)) for delta in deltas),
        tuple(frozenset(z) for z in zs),
        tuple(labels),
        tuple(marks),
    )


def tight_separator_sequence(d: Digraph, u: int, v: int, k: int) -> Union[TightSeparatorSequence, ExceedsBudget]:
    d.check_vertex(u)
    d.check_vertex(v)
    if u == v:
        raise PreconditionError("u and v must differ")
    deltas = _tight_deltas(d, u, v, k)
    if isinstance(deltas, ExceedsBudget):
        return deltas
    seq = _finalize(d, u, v, k, deltas)
    logger.debug("tight sequence u=%d v=%d k=%d q=%d", u, v, k, seq.q)
    return seq


def _prefix_sizes(q: StructureInstance, seq: TightSeparatorSequence) -> List[int]:
    """sizes[i] = |Q[H_i]| for 0 <= i <= q, from one pass over vertices, arcs and tuples."""
    top = seq.q
    labels = seq.labels
    bump = [0] * (top + 2)
    for w in range(q.n):
        bump[labels[w]] += 1
    tails, heads = q.digraph.arc_arrays()
    for a, b in zip(tails, heads):
        bump[max(labels[a], labels[b])] += 1
    for rel in q.relations:
        for tup in rel:
            bump[max((labels[w] for w in tup), default=0)] += q.epsilon
    sizes = [0] * (top + 1)
    running = bump[0]
    for i in range(1, top + 1):
        running += bump[i]
        sizes[i] = running
    return sizes


def llight_transition(q: StructureInstance, seq: TightSeparatorSequence, k: int) -> Optional[int]:
    """Least i with Z_i l-light and Z_{i+1} not; R(u, Z_i) is exactly H_i."""
    if seq.q < 2:
        return None
    sizes = _prefix_sizes(q, seq)
    total = q.size()
    for i in range(1, seq.q):
        if 2 * sizes[i] <= total < 2 * sizes[i + 1]:
            return i
    return None


def find_bad_gap(
    q: StructureInstance, seq: TightSeparatorSequence, k: int, family: StructureFamily = ACYCLIC
) -> Optional[int]:
    """Least i in 1..q-1 whose gap H_{i+1} minus N+[H_i] induces a structure outside the family."""
    for i in range(1, seq.q):
        gap = seq.gap(i)
        if len(gap) < 2 and not gap & q.digraph.self_loops:
            continue
        if not family.recognize(q.induced(gap)):
            return i
    return None
