"""
Seed disagreement averaged over the seed: E_T[eps_T(∅)] and, for a level
i >= 1, E_(T,A)[eps_(T,A)] over |T| = t-d and |A| = i disjoint from T.

Drawing T uniformly, then A uniformly outside T, then a nu pair with
S1 & S2 ⊇ T ∪ A gives the same joint law as drawing a nu pair and then
T and A uniformly inside U = S1 & S2, which is how both estimators work.
"""

import itertools

from cdislogging import get_logger

from agreetest import stats
from agreetest.agreement.check import disagreement_set
from agreetest.agreement.frames import seed_event
from agreetest.config import config
from agreetest.errors import ExactInfeasibleError, ParameterError
from agreetest.sets import (
    VertexSet,
    count_pairs_nu,
    enumerate_pairs_nu,
    sample_pair_nu,
)

logger = get_logger(__name__)


def _check_level(params, level):
    if not 0 <= level <= params.d:
        raise ParameterError("level must lie in [0, d={}], got {}".format(params.d, level))
    if params.t < params.d:
        raise ParameterError(
            "seeds of size t-d need t >= d, got t={} d={}".format(params.t, params.d)
        )


def _seed_average(disagreements, U, seed_size, level):
    """
    Fraction of (T, A) inside U for which the seed event holds.
    """
    members = U.members
    total = 0
    hits = 0
    for T_members in itertools.combinations(members, seed_size):
        T = VertexSet(T_members)
        rest = [v for v in members if v not in T_members]
        choices = (
            [None]
            if level == 0
            else [VertexSet(a) for a in itertools.combinations(rest, level)]
        )
        for A in choices:
            total += 1
            if disagreements and seed_event(disagreements, T, A):
                hits += 1
    return hits / total


def expected_seed_disagreement(E, level=0, samples=None, rng=None, exact=None):
    """
    Average seed disagreement at a level.

    Args:
        E (LocalEnsemble)
        level (int): 0 for eps_T(∅), i >= 1 for eps_(T,A) with |A| = i
        samples (int): Monte Carlo pairs, one (T, A) per pair
        rng (numpy.random.Generator): required for Monte Carlo
        exact (bool): exact enumeration; by default exact only without rng

    Return:
        stats.Estimate
    """
    params = E.params
    _check_level(params, level)
    seed_size = params.t - params.d
    if exact is None:
        exact = rng is None
    if exact:
        total = count_pairs_nu(params)
        if total > config["AGREEMENT_EXACT_MAX_PAIRS"]:
            raise ExactInfeasibleError(
                "exact seed average over {} pairs".format(total),
                alternative="Monte Carlo with a random stream",
            )
        acc = 0.0
        for S1, S2 in enumerate_pairs_nu(params):
            acc += _seed_average(
                disagreement_set(E, S1, S2), S1 & S2, seed_size, level
            )
        return stats.exact(acc / total, samples=total)
    if rng is None:
        raise ParameterError("Monte Carlo seed average needs a random stream")
    samples = samples or config["MC_DEFAULT_SAMPLES"]
    hits = 0
    for _ in range(samples):
        S1, S2 = sample_pair_nu(params, rng)
        U = (S1 & S2).members
        picked = rng.permutation(len(U))
        T = VertexSet(U[j] for j in picked[:seed_size])
        A = None
        if level:
            A = VertexSet(U[j] for j in picked[seed_size : seed_size + level])
        if seed_event(disagreement_set(E, S1, S2), T, A):
            hits += 1
    return stats.from_counts(hits, samples)


def seed_disagreement_prediction(report, t):
    """
    Dimension 1 identities relating the seed averages to the eps_j breakdown:
    E_T[eps_T(∅)] = (1 - 1/t) eps_1 + sum_(j>1) eps_j and
    E_(T,i)[eps_T(i)] = eps_1 / t.

    Args:
        report (AgreementReport): with per_size_breakdown
        t (int): intersection size

    Return:
        dict: {"seed_empty", "seed_point", "epsilon"}
    """
    if report.per_size_breakdown is None:
        raise ParameterError("the agreement report carries no eps_j breakdown")
    if t < 1:
        raise ParameterError("t must be >= 1, got {}".format(t))
    eps = report.per_size_breakdown
    eps_1 = eps.get(1, 0.0)
    rest = sum(v for j, v in eps.items() if j > 1)
    return {
        "seed_empty": (1 - 1 / t) * eps_1 + rest,
        "seed_point": eps_1 / t,
        "epsilon": report.epsilon_hat,
    }
