"""
Hit probability of a hypergraph: the probability that a random set contains
at least one of its edges, for S a uniform k-subset of [n] or S ~ mu_p.
"""

import itertools
import math
from collections import defaultdict
from dataclasses import dataclass

import numpy as np
from cdislogging import get_logger

from agreetest import stats
from agreetest.config import config
from agreetest.errors import ExactInfeasibleError, ParameterError
from agreetest.sets import sample_mask_matrix_mu, sample_mask_matrix_uniform

logger = get_logger(__name__)

MIN_MC_SAMPLES = 100
# above this many union vertices the full trace table gives way to DNF counting
UNION_TABLE_MAX = 16


@dataclass(frozen=True)
class UniformMode(object):
    """
    S uniform over the k-subsets of [n].
    """

    n: int
    k: int

    name = "uniform"

    def __post_init__(self):
        if not 0 <= self.k <= self.n:
            raise ParameterError(
                "uniform mode needs 0 <= k <= n, got n={} k={}".format(self.n, self.k)
            )

    @property
    def p(self):
        return self.k / self.n if self.n else 0.0

    def prob_contains(self, size, ground=None):
        """
        Pr[S contains a fixed set of the given size].
        """
        n = self.n if ground is None else ground
        if size > self.k:
            return 0.0
        return math.comb(n - size, self.k - size) / math.comb(n, self.k)

    def prob_trace(self, size, union_size):
        """
        Pr[S & V == X] for a fixed V of union_size vertices and X ⊆ V of
        the given size.
        """
        rest = self.k - size
        if rest < 0 or rest > self.n - union_size:
            return 0.0
        return math.comb(self.n - union_size, rest) / math.comb(self.n, self.k)

    def sample_matrix(self, samples, rng):
        return sample_mask_matrix_uniform(self.n, self.k, samples, rng)

    def to_dict(self):
        return {"mode": self.name, "n": self.n, "k": self.k}


@dataclass(frozen=True)
class BiasedMode(object):
    """
    S ~ mu_p on [n]; n is only needed for sampling.
    """

    p: float
    n: int = 0

    name = "biased"

    def __post_init__(self):
        if not 0 <= self.p <= 1:
            raise ParameterError("p must lie in [0, 1], got {}".format(self.p))

    def prob_contains(self, size, ground=None):
        return self.p ** size

    def prob_trace(self, size, union_size):
        return self.p ** size * (1 - self.p) ** (union_size - size)

    def sample_matrix(self, samples, rng):
        return sample_mask_matrix_mu(self.n, self.p, samples, rng)

    def with_ground(self, n):
        return BiasedMode(self.p, n)

    def to_dict(self):
        return {"mode": self.name, "p": self.p, "n": self.n}


def _check_ground(H, mode):
    if isinstance(mode, UniformMode) and mode.n != H.n:
        raise ParameterError(
            "uniform mode over [{}] does not match hypergraph over [{}]".format(
                mode.n, H.n
            )
        )


def _hit_by_union(H, mode):
    # enumerate every trace X = S & V on the union V of the edges
    union = H.vertices().members
    m = len(union)
    local = {v: i for i, v in enumerate(union)}
    edge_masks = np.array(
        [sum(1 << local[v] for v in e) for e in H.edges], dtype=np.int64
    )
    traces = np.arange(1 << m, dtype=np.int64)
    hit = np.zeros(traces.shape, dtype=bool)
    for em in edge_masks:
        hit |= (traces & em) == em
    popcount = np.zeros(traces.shape, dtype=np.int64)
    for b in range(m):
        popcount += (traces >> b) & 1
    weights = np.array([mode.prob_trace(j, m) for j in range(m + 1)])
    return float(weights[popcount[hit]].sum())


def _popcount(mask):
    return bin(mask).count("1")


def _binomial_row(size):
    return np.array([math.comb(size, j) for j in range(size + 1)], dtype=float)


def _minimal_masks(masks):
    kept = []
    for mask in sorted(set(masks), key=_popcount):
        if not any(f & mask == f for f in kept):
            kept.append(mask)
    return frozenset(kept)


class _SplitBudgetExceeded(Exception):
    pass


def _split_priority(edges, vertex):
    sizes = [_popcount(mask) for mask in edges if mask & vertex]
    return -min(sizes), len(sizes)


class _TraceCounter(object):
    """
    Counts, by size, the subsets of a vertex set that contain an edge, by
    splitting on one vertex at a time. Subproblems are memoized on their edge
    set; `max_work` bounds the edge visits spent choosing split vertices.
    """

    def __init__(self, max_work):
        self.max_work = max_work
        self.work = 0
        self.memo = {}

    def counts(self, edges):
        """
        counts[s] is the number of size-s subsets of the support of `edges`
        that contain one of them. `edges` holds non-empty masks.
        """
        if not edges:
            return np.zeros(1)
        if edges in self.memo:
            return self.memo[edges]
        support = 0
        for mask in edges:
            support |= mask
        size = _popcount(support)
        self.work += size * len(edges)
        if self.work > self.max_work:
            raise _SplitBudgetExceeded()
        # split on a vertex of a smallest edge, the one lying in the most edges
        bit = max(
            (1 << b for b in range(support.bit_length()) if support >> b & 1),
            key=lambda vertex: _split_priority(edges, vertex),
        )
        rest = support & ~bit
        inside = frozenset(mask & ~bit for mask in edges)
        outside = frozenset(mask for mask in edges if not mask & bit)
        counts = np.zeros(size + 1)
        counts[1:] += self.counts_over(inside, rest)
        counts[:-1] += self.counts_over(outside, rest)
        self.memo[edges] = counts
        return counts

    def counts_over(self, edges, ground):
        # same counts taken over `ground`, which contains the support of `edges`
        size = _popcount(ground)
        if 0 in edges:
            return _binomial_row(size)
        counts = self.counts(edges)
        return np.convolve(counts, _binomial_row(size - (len(counts) - 1)))


def _hit_by_dnf(H, mode):
    union = H.vertices().members
    m = len(union)
    local = {v: i for i, v in enumerate(union)}
    edges = _minimal_masks(sum(1 << local[v] for v in e) for e in H.edges)
    counter = _TraceCounter(config["HIT_EXACT_MAX_SPLIT_WORK"])
    counts = counter.counts_over(edges, (1 << m) - 1)
    weights = np.array([mode.prob_trace(j, m) for j in range(m + 1)])
    return float(counts @ weights)


def _hit_by_inclusion_exclusion(H, mode):
    # Pr[no edge inside S] = sum over edge subsets J of (-1)^|J| Pr[S ⊇ ∪J]
    terms = {0: 1}
    for edge in H.edges:
        update = defaultdict(int, terms)
        for mask, coef in terms.items():
            update[mask | edge.mask] -= coef
        terms = {mask: coef for mask, coef in update.items() if coef}
    miss = sum(
        coef * mode.prob_contains(bin(mask).count("1")) for mask, coef in terms.items()
    )
    return min(max(1.0 - miss, 0.0), 1.0)


def _hit_by_enumeration(H, mode):
    edges = [e.mask for e in H.edges]
    total = 0
    hits = 0
    for combo in itertools.combinations(range(mode.n), mode.k):
        mask = 0
        for v in combo:
            mask |= 1 << v
        total += 1
        if any(e & mask == e for e in edges):
            hits += 1
    return hits / total


def hit_exact(H, mode):
    """
    Exact hit probability of H.

    The cheapest applicable strategy is used: counting the traces on the
    union of the edges (a full table for small unions, vertex splitting
    within HIT_EXACT_MAX_SPLIT_WORK edge visits above that), inclusion-exclusion
    over the edges, and (uniform mode only) enumeration of all k-subsets.
    Each has a guard in the config.

    Args:
        H (Hypergraph)
        mode (UniformMode or BiasedMode)

    Return:
        float
    """
    _check_ground(H, mode)
    if H.is_empty():
        return 0.0
    if H.has_empty_edge():
        return 1.0
    union_size = len(H.vertices())
    max_union = config["HIT_EXACT_MAX_UNION_VERTICES"]
    if union_size <= min(max_union, UNION_TABLE_MAX):
        return _hit_by_union(H, mode)
    if union_size <= max_union:
        try:
            return _hit_by_dnf(H, mode)
        except _SplitBudgetExceeded:
            logger.debug(
                "vertex splitting over {} union vertices ran out of budget".format(
                    union_size
                )
            )
    if len(H) <= config["HIT_EXACT_MAX_IE_EDGES"]:
        return _hit_by_inclusion_exclusion(H, mode)
    if (
        isinstance(mode, UniformMode)
        and math.comb(mode.n, mode.k) <= config["HIT_EXACT_MAX_ENUMERATION"]
    ):
        return _hit_by_enumeration(H, mode)
    raise ExactInfeasibleError(
        "hit of {} edges over {} vertices".format(len(H), union_size),
        alternative="hit_mc",
    )


def incidence(H, n):
    """
    (n x m) 0/1 incidence matrix of the edges in canonical order, with the
    vector of edge sizes.
    """
    edges = H.sorted_edges()
    matrix = np.zeros((n, len(edges)), dtype=np.int32)
    for j, edge in enumerate(edges):
        matrix[list(edge.members), j] = 1
    return matrix, matrix.sum(axis=0)


def hit_mc(H, mode, samples, rng):
    """
    Monte Carlo hit estimate with a Wilson interval.

    Return:
        stats.Estimate
    """
    if samples < MIN_MC_SAMPLES:
        raise ParameterError(
            "hit_mc needs at least {} samples, got {}".format(MIN_MC_SAMPLES, samples)
        )
    _check_ground(H, mode)
    if H.is_empty():
        return stats.exact(0.0)
    if H.has_empty_edge():
        return stats.exact(1.0)
    if isinstance(mode, BiasedMode):
        n = max(mode.n, H.n)
        mode = mode.with_ground(n)
    else:
        n = mode.n
    matrix, sizes = incidence(H, n)
    hits = 0
    done = 0
    batch = config["MC_BATCH_SIZE"]
    while done < samples:
        size = min(batch, samples - done)
        rows = mode.sample_matrix(size, rng).astype(np.int32)
        hits += int(((rows @ matrix) == sizes).any(axis=1).sum())
        done += size
    return stats.from_counts(hits, samples)


def hit(H, mode, samples=None, rng=None, exact=None):
    """
    Hit probability as an Estimate: exact when affordable, Monte Carlo
    otherwise. `exact=True` forces the exact path, `exact=False` forces MC.
    """
    if exact is not False:
        try:
            return stats.exact(hit_exact(H, mode))
        except ExactInfeasibleError:
            if exact:
                raise
            logger.debug("exact hit infeasible for {} edges, using MC".format(len(H)))
    if rng is None:
        raise ParameterError("Monte Carlo hit estimation needs a random stream")
    samples = samples or config["HIT_ORACLE_MC_SAMPLES"]
    return hit_mc(H, mode, samples, rng)
