"""
Unique-hit probabilities: Pr[H'|_S = {e} | S ⊇ e] for an edge e of H'.

Conditioned on S ⊇ e, S hits another edge e' iff the rest of S contains
e' \\ e, so the quantity is 1 - hit(K) with K = link_delete(H' - {e}, e)
over the complement of e.
"""

import math

from cdislogging import get_logger
from scipy import stats as scipy_stats

from agreetest import stats
from agreetest.errors import ParameterError
from agreetest.hypergraph import BiasedMode, UniformMode, hit
from agreetest.sets import VertexSet

logger = get_logger(__name__)


def _as_edge(e):
    return e if isinstance(e, VertexSet) else VertexSet(e)


def _link(H, e):
    """
    Link of e, or None when another edge of H lies inside e.
    """
    e = _as_edge(e)
    if e not in H:
        raise ParameterError("{} is not an edge of the hypergraph".format(e))
    others = H.without(e)
    if any(f.issubset(e) for f in others.edges):
        return None
    return others.link_delete(e)


def _conditional_mode(mode, n, e):
    if isinstance(mode, UniformMode):
        if len(e) > mode.k:
            raise ParameterError(
                "edge {} is larger than the sample size k={}".format(e, mode.k)
            )
        return UniformMode(n - len(e), mode.k - len(e))
    return BiasedMode(mode.p, n - len(e))


def unique_hit_lower_bound(H, e, mode):
    """
    Correlation lower bound on the unique-hit probability of e.

    Under mu_p the events "e' \\ e inside S" are increasing, so avoiding all
    of them has probability at least prod(1 - p^|e' \\ e|). For uniform
    k-sets the bound is the larger of the mu_p bound transferred through
    the median of the binomial (which at most doubles the failure
    probability) and the union bound.

    Return:
        float
    """
    e = _as_edge(e)
    K = _link(H, e)
    if K is None:
        return 0.0
    if isinstance(mode, BiasedMode):
        return math.prod(1 - mode.p ** len(f) for f in K.edges)
    n, k = H.n - len(e), mode.k - len(e)
    if n <= 0 or k <= 0:
        return 1.0 if K.is_empty() else 0.0
    p = k / n
    biased = math.prod(1 - p ** len(f) for f in K.edges)
    transferred = 1 - 2 * (1 - biased)
    conditional = UniformMode(n, k)
    union = 1 - sum(conditional.prob_contains(len(f)) for f in K.edges)
    return max(transferred, union, 0.0)


def verify_unique_hit(H, e, mode, samples=None, rng=None, exact=None):
    """
    Measure Pr[H|_S = {e} | S ⊇ e].

    Args:
        H (Hypergraph): pruned hypergraph
        e (VertexSet): one of its edges
        mode (UniformMode or BiasedMode): distribution of S
        samples (int): Monte Carlo samples when the exact path is not used
        rng (numpy.random.Generator): stream for the Monte Carlo path
        exact (bool): True forces exact, False forces Monte Carlo

    Return:
        stats.Estimate
    """
    e = _as_edge(e)
    K = _link(H, e)
    if K is None:
        return stats.exact(0.0)
    conditional = _conditional_mode(mode, H.n, e)
    relabeled = K.relabel(e.complement(H.n))
    missed = hit(relabeled, conditional, samples=samples, rng=rng, exact=exact)
    return stats.Estimate(
        value=1.0 - missed.value,
        ci_halfwidth=missed.ci_halfwidth,
        samples=missed.samples,
        exact=missed.exact,
    )


def transfer_bounds(n, k, d):
    """
    The two facts the move from mu_(k/n) to uniform k-sets relies on.

    Return:
        dict: median tail Pr[Bin(n, k/n) >= k] (at least 1/2) and the falling
        factorial ratio k^(d)/n^(d) against its floor (k/(2n))^d
    """
    if not 0 < k <= n:
        raise ParameterError("need 0 < k <= n, got k={} n={}".format(k, n))
    tail = float(scipy_stats.binom.sf(k - 1, n, k / n))
    ratio = math.prod((k - i) / (n - i) for i in range(d))
    floor = (k / (2 * n)) ** d
    return {
        "median_tail": tail,
        "median_ok": tail >= 0.5,
        "falling_ratio": ratio,
        "falling_floor": floor,
        "falling_ok": ratio >= floor,
    }
