"""
Critical-depth decomposition of a d-uniform hypergraph.

With rho = c/p, H_0 = H and for r = 1..d, B_r collects the (d-r)-sets that
have at least rho^r extensions in H_{r-1}, and H_r is H_{r-1} without those
extensions. Either the fully pruned H_d or one of the B_r keeps a
1/(d+1) share of the hit probability of H.
"""

from collections import defaultdict
from dataclasses import dataclass, field
from typing import List, Optional

from cdislogging import get_logger

from agreetest import stats
from agreetest.config import config
from agreetest.errors import ParameterError, PropertyFailure
from agreetest.hypergraph import BiasedMode, Hypergraph, hit
from agreetest.hypergraph.branching import TOLERANCE
from agreetest.sets import derive_stream

logger = get_logger(__name__)

PRUNED = "pruned"
CRITICAL = "critical"


class HitOracle(object):
    """
    Hit probability evaluator used by the pruning routines: exact when
    affordable, Monte Carlo otherwise. Each distinct hypergraph is evaluated
    once; Monte Carlo calls draw from streams derived from the seed and the
    call index, so a run is reproducible.
    """

    def __init__(self, mode, seed=0, samples=None, exact=None):
        self.mode = mode
        self.seed = seed
        self.samples = samples or config["HIT_ORACLE_MC_SAMPLES"]
        self.exact = exact
        self._cache = {}

    def __call__(self, H):
        if H not in self._cache:
            rng = derive_stream(self.seed, "hit", len(self._cache))
            self._cache[H] = hit(
                H, self.mode, samples=self.samples, rng=rng, exact=self.exact
            )
        return self._cache[H]


def default_oracle(cfg, n, seed=0):
    return HitOracle(BiasedMode(cfg.p, n), seed=seed)


@dataclass
class Candidate(object):
    kind: str
    r: int
    hit: stats.Estimate


@dataclass
class CriticalDepthResult(object):
    """
    Pruned: `hypergraph` is H_d. Critical: `I` is B_r (a (d-r)-uniform
    hypergraph) and `H_prev` is H_{r-1}.
    """

    kind: str
    r: int = 0
    hypergraph: Optional[Hypergraph] = None
    I: Optional[Hypergraph] = None
    H_prev: Optional[Hypergraph] = None
    hit_input: Optional[stats.Estimate] = None
    candidates: List[Candidate] = field(default_factory=list)

    @property
    def is_pruned(self):
        return self.kind == PRUNED


def shadow_counts(H, size):
    """
    Number of edges of H containing each `size`-subset of an edge.
    """
    counts = defaultdict(int)
    for edge in H.edges:
        for A in edge.subsets(size):
            counts[A] += 1
    return counts


def check_level_caps(H_r, d, r, rho):
    """
    Every set A with |A| >= d - r has at most rho^(d-|A|) extensions in H_r.
    """
    for size in range(max(d - r, 0), d + 1):
        for A, count in shadow_counts(H_r, size).items():
            if count > rho ** (d - size) + TOLERANCE:
                raise PropertyFailure(
                    "H_{} has {} extensions of {} (cap {:.3f})".format(
                        r, count, A, rho ** (d - size)
                    )
                )


def _eligible(candidate, hit_input, d):
    target = (hit_input.value - hit_input.ci_halfwidth) / (d + 1)
    return candidate.hit.value + candidate.hit.ci_halfwidth >= target - TOLERANCE


def _select(candidates, hit_input, d, rule):
    eligible = [c for c in candidates if _eligible(c, hit_input, d)]
    if not eligible:
        # only possible through Monte Carlo noise
        logger.warning(
            "no candidate reached hit(H)/(d+1) = {:.4f}, taking the best one".format(
                hit_input.value / (d + 1)
            )
        )
        eligible = candidates
    if rule == "first_eligible":
        return eligible[0]
    return min(
        eligible, key=lambda c: (-c.hit.value, 0 if c.kind == PRUNED else 1, c.r)
    )


def critical_depth(H, cfg, hit_oracle=None):
    """
    Run the decomposition at rho = cfg.rho and pick one outcome.

    Args:
        H (Hypergraph): d-uniform input
        cfg (PruneConfig): branching budget and selection rule
        hit_oracle (callable): Hypergraph -> stats.Estimate

    Return:
        CriticalDepthResult
    """
    if H.is_empty():
        return CriticalDepthResult(kind=PRUNED, hypergraph=H)
    d = H.uniformity
    if not H.is_uniform(d):
        raise ParameterError("critical_depth needs a uniform hypergraph")
    rho = cfg.rho
    if rho < 1:
        raise ParameterError("c/p must be >= 1, got {}".format(rho))
    hit_oracle = hit_oracle or default_oracle(cfg, H.n)
    debug_checks = config["PRUNE_DEBUG_CHECKS"]

    levels = []
    removed = []
    current = H
    for r in range(1, d + 1):
        counts = shadow_counts(current, d - r)
        heavy = [A for A, count in counts.items() if count >= rho ** r - TOLERANCE]
        B_r = Hypergraph(H.n, heavy)
        dropped = [e for e in current.edges if any(e.issuperset(A) for A in heavy)]
        levels.append((r, B_r, current))
        nxt = current.difference(dropped)
        removed.append(dropped)
        current = nxt
        if debug_checks:
            check_level_caps(current, d, r, rho)
    H_d = current

    if debug_checks:
        parts = [set(H_d.edges)] + [set(part) for part in removed]
        if sum(len(p) for p in parts) != len(H) or set().union(*parts) != set(H.edges):
            raise PropertyFailure("critical depth levels do not partition H")

    hit_input = hit_oracle(H)
    candidates = [
        Candidate(kind=CRITICAL, r=r, hit=hit_oracle(B_r))
        for r, B_r, _ in levels
        if not B_r.is_empty()
    ]
    candidates.append(Candidate(kind=PRUNED, r=d, hit=hit_oracle(H_d)))
    choice = _select(candidates, hit_input, d, cfg.selection_rule)
    logger.debug(
        "critical depth at rho={:.3f}: {} candidates, chose {} r={} hit={:.4f}".format(
            rho, len(candidates), choice.kind, choice.r, choice.hit.value
        )
    )
    if choice.kind == PRUNED:
        return CriticalDepthResult(
            kind=PRUNED,
            r=d,
            hypergraph=H_d,
            hit_input=hit_input,
            candidates=candidates,
        )
    _, B_r, H_prev = levels[choice.r - 1]
    return CriticalDepthResult(
        kind=CRITICAL,
        r=choice.r,
        I=B_r,
        H_prev=H_prev,
        hit_input=hit_input,
        candidates=candidates,
    )
