"""
Recursive meta algorithm for Q-Deletion and its DFVS / DFAS instantiations.

Every level strips components that are already in the family, then either
splits on strongly connected components or runs the crux cascade on a pair
(u, v) from the pair finder. The set S it gets back decides which of the four
cases recurses. Every case ends with one compression call on a dfvs of at most
5k vertices.
"""

import logging
from dataclasses import dataclass, field
from math import factorial
from typing import Any, Callable, Dict, FrozenSet, List, Optional, Tuple

from graphs.crux import CruxProperty, CruxResult, crux, evaluate_properties
from graphs.digraph import (
    ACYCLIC,
    Digraph,
    PreconditionError,
    SelfCheckError,
    StructureFamily,
    StructureInstance,
    find_cycle_pair,
    is_acyclic,
    remove_vertices,
    scc_decompose,
    strip_trivial_components,
)
from solver.compression import smart_compress
from solver.verifier import ensure_acyclic_after_deletion

logger = logging.getLogger("dfvs.driver")

RUNTIME_DECAY = 4

CompressFn = Callable[[StructureInstance, int, FrozenSet[int], Optional[List[Dict[str, Any]]]], Optional[FrozenSet[int]]]
PairFn = Callable[[StructureInstance], Tuple[int, int]]


def runtime_weight(k: int) -> int:
    """f(k) = 4^k * k! * k^4; f(k - 1) <= f(k) / RUNTIME_DECAY for k >= 1."""
    return 4 ** k * factorial(k) * k ** 4


@dataclass(frozen=True)
class DeletionProblem:
    """One instantiation of the meta algorithm: family, compression routine and pair finder.

    compress gets local ids of the instance and returns local ids; when its
    trace argument is a list it appends its own records there.
    """

    family: StructureFamily
    compress: CompressFn
    find_pair: PairFn


def _dfvs_compress(
    q: StructureInstance, k: int, w: FrozenSet[int], trace: Optional[List[Dict[str, Any]]] = None
) -> Optional[FrozenSet[int]]:
    return smart_compress(q.digraph, k, w, trace)


DFVS_PROBLEM = DeletionProblem(ACYCLIC, _dfvs_compress, find_cycle_pair)


@dataclass(frozen=True)
class Solution:
    kind: str
    elements: Tuple[Any, ...]
    opt_size: int
    trace: Tuple[Dict[str, Any], ...] = field(default=(), compare=False)

    def to_json(self) -> Dict[str, Any]:
        key = "vertices" if self.kind == "vertices" else "arcs"
        return {"kind": self.kind, "size": self.opt_size, key: [e if isinstance(e, int) else list(e) for e in self.elements]}


class MetaSolver:
    """
    Plan-act recursion over a DeletionProblem.
    plan() picks the case for one level, act() runs it; run() returns
    {"answer": label set or None, "trace": [...]} for the top-level call.
    With detail the trace also carries the compression routine's own records.
    """

    def __init__(self, problem: DeletionProblem = DFVS_PROBLEM, detail: bool = False):
        self.problem = problem
        self.detail = detail
        self.trace: List[Dict[str, Any]] = []

    def plan(self, q: StructureInstance, k: int) -> Dict[str, Any]:
        family = self.problem.family
        scc = scc_decompose(q.digraph)
        if scc.count > 1:
            return {"case": "SCC-split", "component": frozenset(scc.components[0])}
        loops = q.digraph.self_loops
        if loops:
            # a looped vertex is in every deletion set
            return {"case": "Case4", "s": frozenset((min(loops),)), "crux": "self-loop"}

        u, v = self.problem.find_pair(q)
        out = crux(q, u, v, k, family)
        if isinstance(out, CruxResult):
            sep, promised = out.separator, out.tag.value
            tag, witness = out.tag, out.witness
        else:
            sep, promised = frozenset((u, v)), "no-separator"
            tag, witness = evaluate_properties(q, sep, family)
        step: Dict[str, Any] = {"s": sep, "u": u, "v": v, "crux": promised}
        if tag is CruxProperty.DELETION_SET:
            step["case"] = "Case1"
        elif tag is CruxProperty.TWO_BAD_COMPONENTS:
            step["case"] = "Case2"
            step["component"] = frozenset(witness["components"][0])
        elif tag is CruxProperty.BALANCED_SPLIT:
            step["case"] = "Case3"
            step["bad"] = frozenset(witness["bad"])
        else:
            step["case"] = "Case4"
        return step

    def _recurse(self, parent: StructureInstance, k: int, sub: StructureInstance, k_sub: int, depth: int):
        if k_sub + sub.size() >= k + parent.size():
            raise SelfCheckError(f"recursion measure did not drop at depth {depth}")
        return self.solve(sub, k_sub, depth + 1)

    def _compress(self, q: StructureInstance, k: int, w_labels: FrozenSet[int], depth: int) -> Optional[FrozenSet[int]]:
        if len(w_labels) > 5 * k:
            raise SelfCheckError(f"compression seed of size {len(w_labels)} exceeds 5k = {5 * k}")
        self.trace.append({"type": "compress", "depth": depth, "w_size": len(w_labels), "k": k})
        detail: Optional[List[Dict[str, Any]]] = [] if self.detail else None
        found = self.problem.compress(q, k, q.local_ids(w_labels), detail)
        if detail:
            self.trace.extend({**entry, "depth": depth} for entry in detail)
        return None if found is None else q.to_labels(found)

    def act(self, q: StructureInstance, k: int, step: Dict[str, Any], depth: int) -> Optional[FrozenSet[int]]:
        case = step["case"]
        if case == "SCC-split":
            comp = step["component"]
            x1 = self._recurse(q, k, q.induced(comp), k - 1, depth)
            if x1 is None:
                return None
            x2 = self._recurse(q, k, q.remove(comp), k - 1, depth)
            if x2 is None:
                return None
            return self._compress(q, k, x1 | x2, depth)

        s_labels = q.to_labels(step["s"])
        if case == "Case1":
            return self._compress(q, k, s_labels, depth)
        if case == "Case2":
            comp = step["component"]
            x1 = self._recurse(q, k, q.induced(comp), k - 1, depth)
            if x1 is None:
                return None
            x2 = self._recurse(q, k, q.remove(comp | step["s"]), k - 1, depth)
            if x2 is None:
                return None
            return self._compress(q, k, x1 | x2 | s_labels, depth)
        if case == "Case3":
            x = self._recurse(q, k, q.induced(step["bad"]), k, depth)
            if x is None:
                return None
            return self._compress(q, k, x | s_labels, depth)
        x = self._recurse(q, k, q.remove(step["s"]), k - 1, depth)
        if x is None:
            return None
        return self._compress(q, k, x | s_labels, depth)

    def solve(self, q: StructureInstance, k: int, depth: int = 0) -> Optional[FrozenSet[int]]:
        q = strip_trivial_components(q, self.problem.family)
        if q.n == 0:
            return frozenset()
        if k <= 0:
            return None
        step = self.plan(q, k)
        self.trace.append(
            {"type": "case", "depth": depth, "case": step["case"], "size": q.size(), "k": k, "crux": step.get("crux")}
        )
        logger.debug("depth=%d case=%s |Q|=%d k=%d", depth, step["case"], q.size(), k)
        return self.act(q, k, step, depth)

    def run(self, q: StructureInstance, k: int) -> Dict[str, Any]:
        if k < 0:
            raise PreconditionError("budget must be non-negative")
        self.trace = []
        answer = self.solve(q, k)
        self.trace.append({"type": "result", "found": answer is not None, "size": None if answer is None else len(answer)})
        return {"answer": answer, "trace": self.trace}


def solve_deletion(
    q: StructureInstance, k: int, problem: DeletionProblem = DFVS_PROBLEM, detail: bool = False
) -> Dict[str, Any]:
    return MetaSolver(problem, detail).run(q, k)


def solve_dfvs(d: Digraph, k: int, detail: bool = False) -> Optional[Solution]:
    """Minimum dfvs of size <= k, or None when every dfvs is larger."""
    if k < 0:
        raise PreconditionError("budget must be non-negative")
    loops = d.self_loops
    if len(loops) > k:
        return None
    rest, idmap = remove_vertices(d, loops)
    out = solve_deletion(StructureInstance(rest), k - len(loops), detail=detail)
    if out["answer"] is None:
        logger.info("solve_dfvs n=%d m=%d k=%d: NO", d.n, d.m, k)
        return None
    chosen = loops | idmap.to_old(out["answer"])
    ensure_acyclic_after_deletion(d, chosen, "solve_dfvs")
    trace = [{"type": "presolve", "self_loops": len(loops)}] + out["trace"]
    logger.info("solve_dfvs n=%d m=%d k=%d: size %d", d.n, d.m, k, len(chosen))
    return Solution("vertices", tuple(sorted(chosen)), len(chosen), tuple(trace))


@dataclass(frozen=True)
class DfasReduction:
    """Subdivided digraph with k + 1 copies per original vertex.

    Copy c of vertex v has id v * (k + 1) + c; the subdivision vertex of the
    e-th arc (in sorted arc order) has id n * (k + 1) + e.
    """

    digraph: Digraph
    original: Digraph
    k: int
    arcs: Tuple[Tuple[int, int], ...]

    @property
    def first_arc_vertex(self) -> int:
        return self.original.n * (self.k + 1)

    def arc_of(self, x: int) -> Tuple[int, int]:
        e = x - self.first_arc_vertex
        if not 0 <= e < len(self.arcs):
            raise SelfCheckError(f"vertex {x} is a vertex copy, not an arc vertex")
        return self.arcs[e]

    def vertex_of_arc(self, arc: Tuple[int, int]) -> int:
        return self.first_arc_vertex + self.arcs.index(tuple(arc))


def reduce_dfas_to_dfvs(d: Digraph, k: int) -> DfasReduction:
    if k < 0:
        raise PreconditionError("budget must be non-negative")
    copies = k + 1
    arcs = tuple(d.arcs)
    base = d.n * copies
    out: List[Tuple[int, int]] = []
    for e, (a, b) in enumerate(arcs):
        x = base + e
        for c in range(copies):
            out.append((a * copies + c, x))
            out.append((x, b * copies + c))
    return DfasReduction(Digraph(base + len(arcs), out), d, k, arcs)


def solve_dfas(d: Digraph, k: int, detail: bool = False) -> Optional[Solution]:
    """Minimum feedback arc set of size <= k, or None."""
    if k < 0:
        raise PreconditionError("budget must be non-negative")
    if is_acyclic(d):
        return Solution("arcs", (), 0)
    red = reduce_dfas_to_dfvs(d, k)
    sol = solve_dfvs(red.digraph, k, detail)
    if sol is None:
        return None
    arcs = tuple(sorted(red.arc_of(x) for x in sol.elements))
    gone = set(arcs)
    if not is_acyclic(Digraph(d.n, [a for a in d.arcs if a not in gone])):
        raise SelfCheckError("solve_dfas: returned arcs leave a cycle")
    trace = ({"type": "dfas-reduction", "n": red.digraph.n, "m": red.digraph.m, "k": k},) + sol.trace
    return Solution("arcs", arcs, len(arcs), trace)

