"""
Crux cascade: for a strongly connected instance outside the family and a pair
(u, v), either report that no u-v separator of size <= p exists or return a
set S of at most 2p + 2 vertices tagged with the earliest of four properties:

  P1  Q - S is in the family.
  P2  D - S has two SCCs whose substructures are outside the family.
  P3  the bad SCCs of D - S carry at most half of |Q|.
  P4  if Q has a deletion set of size <= p then Q - S has one of size <= p - 1.
"""

import logging
from dataclasses import dataclass, field
from enum import Enum
from itertools import combinations
from typing import Any, Callable, Dict, FrozenSet, Iterable, List, Optional, Tuple, Union

from graphs.digraph import (
    ACYCLIC,
    PreconditionError,
    SelfCheckError,
    StructureFamily,
    StructureInstance,
    is_strongly_connected,
    reachable,
    scc_decompose,
)
from graphs.flow import ExceedsBudget, separates
from graphs.tight_sequence import (
    TightSeparatorSequence,
    find_bad_gap,
    llight_transition,
    tight_separator_sequence,
)

logger = logging.getLogger("dfvs.crux")


class Goodness(str, Enum):
    L_GOOD = "l-good"
    R_GOOD = "r-good"
    DUAL_GOOD = "dual-good"
    COMPLETELY_GOOD = "completely-good"


class CruxProperty(str, Enum):
    DELETION_SET = "P1-DeletionSet"
    TWO_BAD_COMPONENTS = "P2-TwoBadComponents"
    BALANCED_SPLIT = "P3-BalancedSplit"
    BUDGET_DROP = "P4-BudgetDrop"

    @property
    def rank(self) -> int:
        return list(CruxProperty).index(self)


@dataclass(frozen=True)
class SeparatorClass:
    goodness: Goodness
    l_light: bool
    r_light: bool

    @property
    def lightness(self) -> FrozenSet[str]:
        return frozenset(name for name, on in (("l-light", self.l_light), ("r-light", self.r_light)) if on)

    def to_json(self) -> Dict[str, Any]:
        return {"goodness": self.goodness.value, "lightness": sorted(self.lightness)}


@dataclass(frozen=True)
class NoSeparator:
    u: int
    v: int
    p: int
    infinite: bool = False


@dataclass(frozen=True)
class CruxResult:
    u: int
    v: int
    p: int
    separator: FrozenSet[int]
    tag: CruxProperty
    witness: Dict[str, Any] = field(default_factory=dict, compare=False)
    trace: Tuple[Dict[str, Any], ...] = field(default=(), compare=False)


CruxOutcome = Union[NoSeparator, CruxResult]


def _goodness(left_in: bool, right_in: bool) -> Goodness:
    if left_in and right_in:
        return Goodness.COMPLETELY_GOOD
    if left_in:
        return Goodness.L_GOOD
    if right_in:
        return Goodness.R_GOOD
    return Goodness.DUAL_GOOD


def _classify_sides(
    q: StructureInstance, left: Iterable[int], right: Iterable[int], family: StructureFamily
) -> SeparatorClass:
    left_q, right_q = q.induced(left), q.induced(right)
    total = family.size(q)
    l_size, r_size = family.size(left_q), family.size(right_q)
    return SeparatorClass(
        _goodness(family.recognize(left_q), family.recognize(right_q)),
        2 * l_size <= total,
        2 * r_size <= total,
    )


def classify(
    q: StructureInstance,
    u: int,
    sep: Iterable[int],
    v: Optional[int] = None,
    family: StructureFamily = ACYCLIC,
) -> SeparatorClass:
    """Goodness and lightness of a u-v separator from R(u, sep) and NR(u, sep)."""
    d = q.digraph
    sep = frozenset(sep)
    d.check_vertex(u)
    if u in sep or (v is not None and v in sep):
        raise PreconditionError("separator must avoid u and v")
    left = reachable(d, [u], sep)
    if v is not None and v in left:
        raise PreconditionError(f"{sorted(sep)} does not separate {u} from {v}")
    right = [w for w in d.vertices() if w not in left and w not in sep]
    return _classify_sides(q, left, right, family)


def classify_boundary(
    q: StructureInstance, seq: TightSeparatorSequence, i: int, family: StructureFamily = ACYCLIC
) -> SeparatorClass:
    """classify() for Z_i of a tight sequence, using R(u, Z_i) = H_i."""
    z = seq.boundary(i)
    labels = seq.labels
    left = [w for w in range(q.n) if labels[w] <= i]
    right = [w for w in range(q.n) if labels[w] > i and w not in z]
    return _classify_sides(q, left, right, family)


def evaluate_properties(
    q: StructureInstance, sep: Iterable[int], family: StructureFamily = ACYCLIC
) -> Tuple[Optional[CruxProperty], Dict[str, Any]]:
    """Earliest of P1..P3 that `sep` satisfies literally (None when only P4 can apply).

    Witness ids are local ids of q.
    """
    sep = frozenset(sep)
    rest = q.remove(sep)
    scc = scc_decompose(rest.digraph)
    bad: List[FrozenSet[int]] = []
    for comp, flagged in zip(scc.components, scc.nontrivial):
        if flagged and not family.recognize(rest.induced(comp)):
            bad.append(q.local_ids(rest.to_labels(comp)))
    if not bad:
        return CruxProperty.DELETION_SET, {}
    if len(bad) >= 2:
        return CruxProperty.TWO_BAD_COMPONENTS, {"components": [sorted(bad[0]), sorted(bad[1])]}
    union = bad[0]
    if 2 * family.size(q.induced(union)) <= family.size(q):
        good = [w for w in range(q.n) if w not in union and w not in sep]
        return CruxProperty.BALANCED_SPLIT, {"bad": sorted(union), "good": good}
    return None, {}


class _Cascade:
    """One run of the decision cascade; keeps the step log for the trace."""

    def __init__(
        self, q: StructureInstance, seq: TightSeparatorSequence, p: int, family: StructureFamily, check_premise: bool = False
    ):
        self.q = q
        self.seq = seq
        self.p = p
        self.family = family
        self.check_premise = check_premise
        self.steps: List[Dict[str, Any]] = []
        self._classes: Dict[int, SeparatorClass] = {}

    def cls(self, i: int) -> SeparatorClass:
        if i not in self._classes:
            c = classify_boundary(self.q, self.seq, i, self.family)
            self._classes[i] = c
            self.steps.append({"type": "crux", "step": "classify", "boundary": i, **c.to_json()})
        return self._classes[i]

    def short_circuit(self, i: int) -> Optional[Tuple[FrozenSet[int], CruxProperty]]:
        c = self.cls(i)
        if c.goodness is Goodness.DUAL_GOOD:
            return self.seq.boundary(i), CruxProperty.TWO_BAD_COMPONENTS
        if c.goodness is Goodness.COMPLETELY_GOOD:
            return self.seq.boundary(i), CruxProperty.DELETION_SET
        return None

    def split_solution(self, i: int, side: str) -> None:
        entry: Dict[str, Any] = {
            "type": "crux",
            "step": "split-solution",
            "boundary": i,
            "side": side,
            "set": sorted(self.seq.boundary(i)),
        }
        if self.check_premise:
            entry["premise"] = split_solution_applies(
                self.q, self.seq.u, self.seq.v, self.seq.boundary(i), self.p, side, self.family
            )
        self.steps.append(entry)

    def run(self) -> Tuple[FrozenSet[int], CruxProperty, str]:
        seq = self.seq
        u, v = seq.u, seq.v
        uv = frozenset((u, v))
        last = seq.q

        hit = self.short_circuit(1)
        if hit:
            return hit[0], hit[1], "first-boundary"
        if self.cls(1).goodness is Goodness.R_GOOD:
            self.split_solution(1, "right")
            return seq.boundary(1) | uv, CruxProperty.BUDGET_DROP, "first-boundary-r-good"

        hit = self.short_circuit(last)
        if hit:
            return hit[0], hit[1], "last-boundary"
        if self.cls(last).goodness is Goodness.L_GOOD:
            self.split_solution(last, "left")
            return seq.boundary(last) | uv, CruxProperty.BUDGET_DROP, "last-boundary-l-good"

        i = find_bad_gap(self.q, seq, self.p, self.family)
        if i is not None:
            self.steps.append({"type": "crux", "step": "bad-gap", "index": i})
            for j in (i, i + 1):
                hit = self.short_circuit(j)
                if hit:
                    return hit[0], hit[1], "bad-gap-boundary"
            return seq.boundary(i) | seq.boundary(i + 1) | uv, CruxProperty.BUDGET_DROP, "bad-gap"

        if self.cls(1).r_light:
            return seq.boundary(1), CruxProperty.BALANCED_SPLIT, "first-boundary-r-light"
        if self.cls(last).l_light:
            return seq.boundary(last), CruxProperty.BALANCED_SPLIT, "last-boundary-l-light"

        i = llight_transition(self.q, seq, self.p)
        if i is None:
            raise SelfCheckError("no l-light transition although Z_1 is l-light and Z_q is not")
        self.steps.append({"type": "crux", "step": "transition", "index": i})
        for j in (i, i + 1):
            hit = self.short_circuit(j)
            if hit:
                return hit[0], hit[1], "transition-boundary"
        if self.cls(i + 1).goodness is Goodness.L_GOOD:
            return seq.boundary(i + 1) | {v}, CruxProperty.BALANCED_SPLIT, "transition-right"
        if self.cls(i).goodness is Goodness.R_GOOD:
            return seq.boundary(i) | {v}, CruxProperty.BALANCED_SPLIT, "transition-left"
        return seq.boundary(i) | seq.boundary(i + 1) | uv, CruxProperty.DELETION_SET, "transition-pair"


def crux(
    q: StructureInstance,
    u: int,
    v: int,
    p: int,
    family: StructureFamily = ACYCLIC,
    check_premise: bool = False,
) -> CruxOutcome:
    """Run the cascade for the pair (u, v) with budget p.

    With check_premise, every Z_1 r-good or Z_q l-good exit also records in the trace
    whether the split-solution premise holds. That check enumerates separators, so
    it is for debugging on small instances only.
    """
    d = q.digraph
    d.check_vertex(u)
    d.check_vertex(v)
    if u == v:
        raise PreconditionError("u and v must differ")
    if family.recognize(q):
        raise PreconditionError("instance is already in the family")
    if not is_strongly_connected(d):
        raise PreconditionError("crux needs a strongly connected instance")

    seq = tight_separator_sequence(d, u, v, p)
    if isinstance(seq, ExceedsBudget):
        logger.debug("crux u=%d v=%d p=%d: no separator (infinite=%s)", u, v, p, seq.infinite)
        return NoSeparator(u, v, p, seq.infinite)

    cascade = _Cascade(q, seq, p, family, check_premise)
    sep, promised, step = cascade.run()
    tag, witness = evaluate_properties(q, sep, family)
    if tag is None:
        if promised is not CruxProperty.BUDGET_DROP:
            raise SelfCheckError(f"cascade step {step} promised {promised.value} which does not hold")
        tag = CruxProperty.BUDGET_DROP
    elif tag.rank > promised.rank:
        raise SelfCheckError(f"cascade step {step} promised {promised.value}, got {tag.value}")
    if len(sep) > 2 * p + 2:
        raise SelfCheckError(f"crux set of size {len(sep)} exceeds 2p+2 = {2 * p + 2}")
    cascade.steps.append({"type": "crux", "step": step, "tag": tag.value, "size": len(sep)})
    logger.debug("crux u=%d v=%d p=%d -> %s via %s (|S|=%d)", u, v, p, tag.value, step, len(sep))
    return CruxResult(u, v, p, frozenset(sep), tag, witness, tuple(cascade.steps))


Oracle = Callable[[StructureInstance], int]


def verify_outcome(q: StructureInstance, out: CruxOutcome, p: int, oracle: Oracle, family: StructureFamily = ACYCLIC) -> bool:
    """Check a crux outcome; `oracle` returns the exact minimum deletion-set size."""
    d = q.digraph
    if isinstance(out, NoSeparator):
        inner = [w for w in d.vertices() if w not in (out.u, out.v)]
        for size in range(min(p, len(inner)) + 1):
            for cand in combinations(inner, size):
                if separates(d, [out.u], [out.v], cand):
                    return False
        return True
    if len(out.separator) > 2 * p + 2:
        return False
    tag, _ = evaluate_properties(q, out.separator, family)
    if out.tag is CruxProperty.BUDGET_DROP:
        if tag is not None:
            return False
        if oracle(q) <= p:
            return oracle(q.remove(out.separator)) <= p - 1
        return True
    return tag is out.tag


def split_solution_applies(
    q: StructureInstance, u: int, v: int, z: Iterable[int], k: int, side: str, family: StructureFamily = ACYCLIC
) -> bool:
    """Premise under which deleting the u-v separator Z lowers the optimum.

    side="right": Z is r-good and no u-v separator of size <= k lies inside R(u, Z);
    side="left": Z is l-good and none lies inside NR(u, Z). Checked by enumeration,
    so only meant for small instances.
    """
    d = q.digraph
    z = frozenset(z)
    left = reachable(d, [u], z)
    right = [w for w in d.vertices() if w not in left and w not in z]
    c = _classify_sides(q, left, right, family)
    if side == "right":
        if c.goodness is not Goodness.R_GOOD:
            return False
        pool = sorted(left - {u, v})
    elif side == "left":
        if c.goodness is not Goodness.L_GOOD:
            return False
        pool = [w for w in right if w != v]
    else:
        raise ValueError(f"side must be 'left' or 'right', got {side!r}")
    for size in range(min(k, len(pool)) + 1):
        for cand in combinations(pool, size):
            if separates(d, [u], [v], cand):
                return False
    return True
