"""
Seeded instance generators.

All randomness comes from SplitMix64 so a seed gives the same stream on every
platform and Python version:

    state = (state + 0x9E3779B97F4A7C15) mod 2^64
    z = state
    z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) mod 2^64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) mod 2^64
    return z ^ (z >> 31)

below(n) draws from [0, n) by rejection so the result is unbiased.
"""

import logging
from dataclasses import dataclass
from itertools import product
from typing import FrozenSet, Iterator, List, Set, Tuple

from graphs.digraph import Digraph, PreconditionError, reachable

logger = logging.getLogger("dfvs.generators")

MASK64 = (1 << 64) - 1
DEFAULT_SEED = 20240611
DEFAULT_BACK_DENSITY = 0.25


class SplitMix64:
    def __init__(self, seed: int):
        self.state = seed & MASK64

    def next_u64(self) -> int:
        self.state = (self.state + 0x9E3779B97F4A7C15) & MASK64
        z = self.state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & MASK64
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & MASK64
        return z ^ (z >> 31)

    def below(self, n: int) -> int:
        if n <= 0:
            raise ValueError("below() needs a positive bound")
        limit = (1 << 64) - (1 << 64) % n
        while True:
            x = self.next_u64()
            if x < limit:
                return x % n

    def shuffle(self, items: List[int]) -> None:
        for i in range(len(items) - 1, 0, -1):
            j = self.below(i + 1)
            items[i], items[j] = items[j], items[i]


@dataclass(frozen=True)
class PlantedInstance:
    digraph: Digraph
    planted_k: int
    planted: FrozenSet[int]
    seed: int
    n: int
    m: int
    back_density: float

    def to_json(self):
        return {
            "n": self.n,
            "m": self.m,
            "k": self.planted_k,
            "seed": self.seed,
            "back_density": self.back_density,
            "planted": sorted(self.planted),
        }


def gen_planted(n: int, m: int, k: int, seed: int = DEFAULT_SEED, back_density: float = DEFAULT_BACK_DENSITY) -> PlantedInstance:
    """A random DAG on n - k vertices plus k planted vertices wired both ways into it."""
    if k < 0 or n < k:
        raise PreconditionError(f"need 0 <= k <= n, got n={n} k={k}")
    if m < n:
        raise PreconditionError(f"need m >= n, got n={n} m={m}")
    if not 0.0 <= back_density <= 1.0:
        raise PreconditionError("back_density must lie in [0, 1]")
    rng = SplitMix64(seed)
    order = list(range(n))
    rng.shuffle(order)
    dag, planted = order[: n - k], order[n - k:]

    arcs: Set[Tuple[int, int]] = set()
    planted_target = int(round(back_density * m)) if planted else 0
    dag_target = m - planted_target
    attempts = 0
    if len(dag) >= 2:
        while len(arcs) < dag_target and attempts < 20 * m:
            attempts += 1
            i, j = rng.below(len(dag)), rng.below(len(dag))
            if i == j:
                continue
            if i > j:
                i, j = j, i
            arcs.add((dag[i], dag[j]))
    attempts = 0
    while planted and len(arcs) < m and attempts < 20 * m:
        attempts += 1
        x = planted[rng.below(len(planted))]
        y = order[rng.below(n)]
        if x == y:
            continue
        arcs.add((x, y) if rng.below(2) else (y, x))
    d = Digraph(n, sorted(arcs))
    logger.debug("planted n=%d m=%d (asked %d) k=%d seed=%d", n, d.m, m, k, seed)
    return PlantedInstance(d, k, frozenset(planted), seed, n, m, back_density)


def gen_random(n: int, m: int, seed: int = DEFAULT_SEED) -> Digraph:
    """m distinct arcs without self-loops, capped at n(n - 1)."""
    if n < 0 or m < 0:
        raise PreconditionError("n and m must be non-negative")
    rng = SplitMix64(seed)
    m = min(m, n * (n - 1))
    arcs: Set[Tuple[int, int]] = set()
    while len(arcs) < m:
        a, b = rng.below(n), rng.below(n)
        if a != b:
            arcs.add((a, b))
    return Digraph(n, sorted(arcs))


def gen_exhaustive_small(n_max: int, sample: int = 0, seed: int = DEFAULT_SEED) -> Iterator[Digraph]:
    """Every labeled loop-free digraph on n_max vertices, then `sample` random ones with up to 8 vertices."""
    if n_max > 4:
        raise PreconditionError("exhaustive enumeration is limited to n_max <= 4")
    pairs = [(a, b) for a in range(n_max) for b in range(n_max) if a != b]
    for mask in product((False, True), repeat=len(pairs)):
        yield Digraph(n_max, [p for p, on in zip(pairs, mask) if on])
    if sample:
        yield from gen_sampled(sample, 8, 20, seed)


def gen_sampled(count: int = 5000, n_max: int = 8, m_max: int = 20, seed: int = DEFAULT_SEED) -> Iterator[Digraph]:
    rng = SplitMix64(seed)
    for _ in range(count):
        n = 1 + rng.below(n_max)
        m = rng.below(min(m_max, n * (n - 1)) + 1)
        yield gen_random(n, m, rng.next_u64())


def gen_pairs(count: int, n_max: int, seed: int = DEFAULT_SEED) -> Iterator[Tuple[Digraph, int, int]]:
    """Sampled (digraph, s, t) triples with s != t for the separator sweeps."""
    rng = SplitMix64(seed)
    for d in gen_sampled(count, n_max, 3 * n_max, rng.next_u64()):
        if d.n < 2:
            d = Digraph(2, d.arcs)
        s = rng.below(d.n)
        t = (s + 1 + rng.below(d.n - 1)) % d.n
        yield d, s, t


def strongly_connected_sample(count: int, n_max: int, seed: int = DEFAULT_SEED) -> Iterator[Digraph]:
    """Sampled strongly connected digraphs on 2..n_max vertices: a random Hamiltonian cycle plus chords."""
    rng = SplitMix64(seed)
    for _ in range(count):
        n = 2 + rng.below(n_max - 1)
        order = list(range(n))
        rng.shuffle(order)
        arcs = {(order[i], order[(i + 1) % n]) for i in range(n)}
        for _ in range(rng.below(2 * n + 1)):
            a, b = rng.below(n), rng.below(n)
            if a != b:
                arcs.add((a, b))
        yield Digraph(n, sorted(arcs))


def gen_separator_pairs(
    count: int, n_min: int = 5, n_max: int = 8, seed: int = DEFAULT_SEED
) -> Iterator[Tuple[Digraph, int, int]]:
    """Sampled (digraph, s, t) with t reachable from s and no arc s -> t.

    n is drawn from [n_min, n_max] and m from [n, 2n], so the s-t connectivity
    is finite and usually small enough to leave several separators.
    """
    if n_min < 3 or n_max < n_min:
        raise PreconditionError(f"need 3 <= n_min <= n_max, got {n_min}..{n_max}")
    rng = SplitMix64(seed)
    produced = 0
    while produced < count:
        n = n_min + rng.below(n_max - n_min + 1)
        m = n + rng.below(n + 1)
        d = gen_random(n, m, rng.next_u64())
        s = rng.below(n)
        targets = sorted(reachable(d, [s]) - {s} - set(d.out_neighbors(s)))
        if not targets:
            continue
        yield d, s, targets[rng.below(len(targets))]
        produced += 1


def _strong_cluster(rng: SplitMix64, ids: List[int]) -> Set[Tuple[int, int]]:
    """A random Hamiltonian cycle over `ids` plus up to 2|ids| chords."""
    order = list(ids)
    rng.shuffle(order)
    size = len(order)
    arcs = {(order[i], order[(i + 1) % size]) for i in range(size)}
    for _ in range(rng.below(2 * size + 1)):
        a, b = ids[rng.below(size)], ids[rng.below(size)]
        if a != b:
            arcs.add((a, b))
    return arcs


def bridged_cluster_sample(count: int, n_max: int = 4, seed: int = DEFAULT_SEED) -> Iterator[Tuple[Digraph, int, int]]:
    """Two strongly connected clusters A and B joined by A -> x -> B and B -> y -> A.

    Yields (digraph, u, v) with u in A and v the head of the x -> B arc, so {x}
    separates u from v and both sides of it keep a cycle.
    """
    rng = SplitMix64(seed)
    for _ in range(count):
        na, nb = 2 + rng.below(n_max - 1), 2 + rng.below(n_max - 1)
        a_ids, b_ids = list(range(na)), list(range(na, na + nb))
        x, y = na + nb, na + nb + 1
        arcs = _strong_cluster(rng, a_ids) | _strong_cluster(rng, b_ids)
        v = b_ids[rng.below(nb)]
        arcs |= {(a_ids[rng.below(na)], x), (x, v), (b_ids[rng.below(nb)], y), (y, a_ids[rng.below(na)])}
        yield Digraph(na + nb + 2, sorted(arcs)), a_ids[rng.below(na)], v
