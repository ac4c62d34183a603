"""
Skew separators: given ordered terminal pairs (X_1, Y_1) .. (X_l, Y_l), find a
minimum vertex set cutting every X_i -> Y_j path with i >= j.

The last source X_l has to be cut from every sink, so some important
(X_l, Y_1 u .. u Y_l)-separator can always be used for it; we branch over those
and recurse on the remaining pairs.
"""

import logging
from dataclasses import dataclass, field
from typing import FrozenSet, Optional, Tuple

from graphs.digraph import Digraph, PreconditionError
from graphs.flow import important_separators, separates

logger = logging.getLogger("dfvs.skew")

Pair = Tuple[FrozenSet[int], FrozenSet[int]]


@dataclass(frozen=True)
class SkewCutInstance:
    digraph: Digraph
    pairs: Tuple[Pair, ...]
    budget: int
    undeletable: FrozenSet[int] = field(default=frozenset())

    def __post_init__(self):
        terminals = frozenset().union(*(x | y for x, y in self.pairs)) if self.pairs else frozenset()
        for v in terminals:
            self.digraph.check_vertex(v)
        object.__setattr__(self, "undeletable", frozenset(self.undeletable) | terminals)
        if self.budget < 0:
            raise PreconditionError("skew cut budget must be non-negative")

    def is_cut(self, cut) -> bool:
        cut = frozenset(cut)
        if cut & self.undeletable:
            return False
        for i, (sources, _) in enumerate(self.pairs):
            sinks = frozenset().union(*(y for _, y in self.pairs[: i + 1]))
            if not separates(self.digraph, sources, sinks, cut):
                return False
        return True


def skew_separator(inst: SkewCutInstance) -> Optional[FrozenSet[int]]:
    """Minimum skew separator of size <= budget, or None."""
    return _solve(inst.digraph, inst.pairs, inst.budget, inst.undeletable, frozenset())


def _solve(
    d: Digraph,
    pairs: Tuple[Pair, ...],
    k: int,
    undeletable: FrozenSet[int],
    removed: FrozenSet[int],
) -> Optional[FrozenSet[int]]:
    if not pairs:
        return frozenset()
    if k < 0:
        return None
    sources = pairs[-1][0]
    sinks = frozenset().union(*(y for _, y in pairs))
    best: Optional[FrozenSet[int]] = None
    for delta in important_separators(d, sources, sinks, k, undeletable, removed):
        limit = (len(best) - 1 if best is not None else k) - len(delta)
        if limit < 0:
            continue
        rest = _solve(d, pairs[:-1], limit, undeletable, removed | delta)
        if rest is not None:
            best = delta | rest
    return best
