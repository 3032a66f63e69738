"""
Agreement probability of an ensemble under nu_(n,k,t) or mu_(p,q).

epsilon_hat is the probability that the two local functions of a random
pair fail the agreement check; eps_j is the probability that they disagree
on exactly j small sets of the intersection.
"""

from collections import Counter
from dataclasses import dataclass, field
from typing import Dict, Optional

from cdislogging import get_logger

from agreetest import stats
from agreetest.agreement.check import disagreement_set
from agreetest.agreement.frames import seed_event
from agreetest.config import config
from agreetest.errors import ExactInfeasibleError, ParameterError
from agreetest.sets import (
    BiasedPairParams,
    count_pairs_nu,
    enumerate_pairs_nu,
    sample_pair_mu,
    sample_pair_nu,
    sample_pair_nu_containing,
)

logger = get_logger(__name__)

EXACT = "exact"
MC = "mc"


@dataclass(frozen=True)
class NuDistribution(object):
    t: int

    def to_dict(self):
        return {"kind": "nu", "t": self.t}


@dataclass(frozen=True)
class MuDistribution(object):
    p: float
    q: float

    @property
    def pair_params(self):
        return BiasedPairParams(self.p, self.q)

    def to_dict(self):
        return {"kind": "mu", "p": self.p, "q": self.q}


@dataclass
class AgreementReport(object):
    epsilon_hat: float
    ci_halfwidth: float
    samples: int
    mode: str
    per_size_breakdown: Optional[Dict[int, float]] = None
    distribution: dict = field(default_factory=dict)

    def to_dict(self):
        return {
            "epsilon_hat": self.epsilon_hat,
            "ci_halfwidth": self.ci_halfwidth,
            "samples": self.samples,
            "mode": self.mode,
            "per_size_breakdown": (
                {str(j): v for j, v in sorted(self.per_size_breakdown.items())}
                if self.per_size_breakdown is not None
                else None
            ),
            "distribution": self.distribution,
        }

    def as_estimate(self):
        return stats.Estimate(
            self.epsilon_hat, self.ci_halfwidth, self.samples, self.mode == EXACT
        )


def _nu_params(E, t):
    params = E.params
    if t is None:
        t = params.t
    if not 0 <= t <= params.k:
        raise ParameterError("t must lie in [0, k={}], got {}".format(params.k, t))
    if params.n < 2 * params.k - t:
        raise ParameterError(
            "nu_(n,k,t) needs n >= 2k-t, got n={} k={} t={}".format(
                params.n, params.k, t
            )
        )
    return E.with_params(t=t).params


def _breakdown(histogram, total):
    return {j: count / total for j, count in sorted(histogram.items()) if j > 0}


def agreement_estimate(E, dist=None, samples=None, rng=None, breakdown=True):
    """
    Monte Carlo agreement test.

    Args:
        E (LocalEnsemble)
        dist (NuDistribution or MuDistribution): nu with the ensemble's t by default
        samples (int): number of pairs, MC_DEFAULT_SAMPLES by default
        rng (numpy.random.Generator)
        breakdown (bool): also report eps_j

    Return:
        AgreementReport
    """
    if rng is None:
        raise ParameterError("agreement_estimate needs a random stream")
    samples = samples or config["MC_DEFAULT_SAMPLES"]
    dist = dist or NuDistribution(E.params.t)
    if isinstance(dist, MuDistribution):
        if not E.is_biased:
            raise ParameterError(
                "the mu_(p,q) test needs an ensemble defined on all subsets"
            )
        pair_params = dist.pair_params

        def draw():
            return sample_pair_mu(E.params.n, pair_params, rng)

    else:
        params = _nu_params(E, dist.t)

        def draw():
            return sample_pair_nu(params, rng)

    histogram = Counter()
    for _ in range(samples):
        S1, S2 = draw()
        histogram[len(disagreement_set(E, S1, S2))] += 1
    failures = samples - histogram[0]
    estimate = stats.from_counts(failures, samples)
    logger.debug(
        "agreement over {} pairs: epsilon_hat={:.5f}".format(samples, estimate.value)
    )
    return AgreementReport(
        epsilon_hat=estimate.value,
        ci_halfwidth=estimate.ci_halfwidth,
        samples=samples,
        mode=MC,
        per_size_breakdown=_breakdown(histogram, samples) if breakdown else None,
        distribution=dist.to_dict(),
    )


def agreement_exact(E, t=None):
    """
    Exact agreement test over the whole support of nu_(n,k,t).
    """
    params = _nu_params(E, t)
    total = count_pairs_nu(params)
    if total > config["AGREEMENT_EXACT_MAX_PAIRS"]:
        raise ExactInfeasibleError(
            "exact agreement over {} pairs".format(total),
            alternative="agreement_estimate",
        )
    histogram = Counter()
    for S1, S2 in enumerate_pairs_nu(params):
        histogram[len(disagreement_set(E, S1, S2))] += 1
    failures = total - histogram[0]
    return AgreementReport(
        epsilon_hat=failures / total,
        ci_halfwidth=0.0,
        samples=total,
        mode=EXACT,
        per_size_breakdown=_breakdown(histogram, total),
        distribution=NuDistribution(params.t).to_dict(),
    )


def conditional_disagreement(E, T, A=None, samples=None, rng=None, exact=None):
    """
    Seed disagreement of the ensemble around T.

    With A None this is eps_T(∅): the probability, over nu pairs with
    S1 & S2 ⊇ T, that the pair disagrees on a set inside T. With A it is
    eps_(T,A): over pairs with S1 & S2 ⊇ T ∪ A, agreement on T^(|A|-1)
    together with disagreement on T^(A).

    |T| is t-d in dimension d, t-1 for d = 1; any |T| with |T ∪ A| <= t is
    accepted.

    Args:
        E (LocalEnsemble)
        T (VertexSet)
        A (VertexSet): disjoint from T, |A| <= d
        samples (int): Monte Carlo pairs
        rng (numpy.random.Generator): required for Monte Carlo
        exact (bool): exact enumeration; by default exact only without rng

    Return:
        stats.Estimate
    """
    params = _nu_params(E, None)
    W = T if A is None else T | A
    if A is not None:
        if not A.isdisjoint(T):
            raise ParameterError("A={} meets T={}".format(A, T))
        if len(A) > params.d:
            raise ParameterError("|A|={} exceeds d={}".format(len(A), params.d))
    if len(W) > params.t:
        raise ParameterError(
            "T ∪ A has {} elements, more than t={}".format(len(W), params.t)
        )
    if len(T) != params.t - params.d:
        logger.debug(
            "seed set of size {} (t-d = {})".format(len(T), params.t - params.d)
        )
    if exact is None:
        exact = rng is None
    if exact:
        total = count_pairs_nu(params, W)
        if total > config["AGREEMENT_EXACT_MAX_PAIRS"]:
            raise ExactInfeasibleError(
                "exact seed disagreement over {} pairs".format(total),
                alternative="Monte Carlo with a random stream",
            )
        hits = sum(
            1
            for S1, S2 in enumerate_pairs_nu(params, W)
            if seed_event(disagreement_set(E, S1, S2), T, A)
        )
        return stats.exact(hits / total, samples=total)
    if rng is None:
        raise ParameterError("Monte Carlo seed disagreement needs a random stream")
    samples = samples or config["MC_DEFAULT_SAMPLES"]
    hits = 0
    for _ in range(samples):
        S1, S2 = sample_pair_nu_containing(params, W, rng)
        if seed_event(disagreement_set(E, S1, S2), T, A):
            hits += 1
    return stats.from_counts(hits, samples)
