"""
Plurality decoding: G(A) is the most common value of f_S(A) over the sets
S containing A (uniform k-sets, or S ~ mu_p in the biased regime).
"""

from collections import defaultdict

from cdislogging import get_logger

from agreetest.config import config
from agreetest.ensemble import GlobalFunction
from agreetest.ensemble.corruption import keyed_symbol
from agreetest.errors import ParameterError, StructuralError
from agreetest.sets import VertexSet, enumerate_small_subsets, sample_mu, sample_superset

logger = get_logger(__name__)

# relative slack under which weighted vote totals count as tied
TIE_TOLERANCE = 1e-12


def most_popular(votes, tie_seed=None, key=None):
    """
    Symbol with the largest vote total. Ties go to the smallest symbol, or
    with tie_seed to a keyed choice among the tied symbols.

    Args:
        votes (dict): symbol -> total
        tie_seed (int): optional seed for tie breaking
        key (VertexSet): the set being decoded, keys the tie choice

    Return:
        int
    """
    best = max(votes.values())
    tied = sorted(
        s for s, v in votes.items() if v >= best - TIE_TOLERANCE * max(best, 1.0)
    )
    if tie_seed is None or len(tied) == 1:
        return tied[0]
    return tied[keyed_symbol(tie_seed, "tie", key, None, len(tied))]


def _exact_votes(E, domain):
    votes = {A: defaultdict(float) for A in domain}
    bias = E.bias
    n = E.params.n
    for S in E.sets():
        weight = 1.0
        if bias is not None:
            weight = bias.p ** len(S) * (1 - bias.p) ** (n - len(S))
            if weight == 0:
                continue
        for A in E.domain(S):
            votes[A][E.value(S, A)] += weight
    return votes


def _mc_votes(E, domain, samples_per_set, rng):
    votes = {}
    n, k = E.params.n, E.params.k
    for A in domain:
        tally = defaultdict(float)
        for _ in range(samples_per_set):
            if E.bias is not None:
                S = sample_mu(n, E.bias.p, rng, containing=A)
            else:
                S = sample_superset(n, k, A, rng)
            tally[E.value(S, A)] += 1
        votes[A] = tally
    return votes


def plurality_decode(E, exact=None, samples_per_set=None, rng=None, tie_seed=None):
    """
    Decode a global function from an ensemble by plurality vote.

    Args:
        E (LocalEnsemble)
        exact (bool): vote over every set; by default exact only without rng
        samples_per_set (int): Monte Carlo voters per small set A
        rng (numpy.random.Generator): required for Monte Carlo
        tie_seed (int): explore other tie choices instead of the smallest symbol

    Return:
        GlobalFunction
    """
    params = E.params
    if E.bias is None and params.k < params.d:
        raise StructuralError(
            "no {}-set contains a set of size d={}".format(params.k, params.d)
        )
    domain = list(
        enumerate_small_subsets(VertexSet(range(params.n)), params.d, E.include_empty)
    )
    if exact is None:
        exact = rng is None
    if exact:
        votes = _exact_votes(E, domain)
    else:
        if rng is None:
            raise ParameterError("Monte Carlo plurality decoding needs a random stream")
        samples_per_set = samples_per_set or config["DECODE_MC_SAMPLES_PER_SET"]
        votes = _mc_votes(E, domain, samples_per_set, rng)
    values = {}
    for A in domain:
        if not votes[A]:
            raise StructuralError("no local function votes on {}".format(A))
        values[A] = most_popular(votes[A], tie_seed=tie_seed, key=A)
    logger.debug(
        "plurality decoded {} sets ({})".format(len(domain), "exact" if exact else "mc")
    )
    return GlobalFunction(
        params.n, params.d, params.alphabet_size, values, include_empty=E.include_empty
    )
