import itertools
import math
from dataclasses import dataclass
from typing import Dict, Optional

from cdislogging import get_logger

from agreetest import stats
from agreetest.config import config
from agreetest.decode.restricted import restricted_decode
from agreetest.errors import ExactInfeasibleError, ParameterError
from agreetest.sets import (
    VertexSet,
    sample_k_subset,
    sample_mu,
    sample_superset,
)

logger = get_logger(__name__)


@dataclass
class DisagreementReport(object):
    rate: stats.Estimate
    per_level: Optional[Dict[int, stats.Estimate]] = None

    @property
    def value(self):
        return self.rate.value

    @property
    def ci_halfwidth(self):
        return self.rate.ci_halfwidth

    def to_dict(self):
        out = {"rate": self.rate.to_dict(), "per_level": None}
        if self.per_level is not None:
            out["per_level"] = {
                str(i): est.to_dict() for i, est in sorted(self.per_level.items())
            }
        return out


def _first_difference(E, G, S):
    """
    Size of the smallest set of S's domain where f_S and G differ, or None.
    """
    for A in E.domain(S):
        if E.value(S, A) != G[A]:
            return len(A)
    return None


def _check(E, G):
    if (G.n, G.d) != (E.params.n, E.params.d) or G.include_empty != E.include_empty:
        raise ParameterError("global function does not match the ensemble domain")


def disagreement_rate(E, G, exact=None, samples=None, rng=None, per_level=False):
    """
    Pr_S[f_S != G|_S] for S a uniform k-set (S ~ mu_p in the biased regime).

    Args:
        E (LocalEnsemble)
        G (GlobalFunction)
        exact (bool): over every set; by default exact only without rng
        samples (int): Monte Carlo sets
        rng (numpy.random.Generator): required for Monte Carlo
        per_level (bool): also report Pr_S[f_S != G on sets of size <= i], i = 1..d

    Return:
        DisagreementReport
    """
    _check(E, G)
    d = E.params.d
    if exact is None:
        exact = rng is None
    first = []
    if exact:
        bias = E.bias
        n = E.params.n
        total = 0.0
        for S in E.sets():
            weight = 1.0
            if bias is not None:
                weight = bias.p ** len(S) * (1 - bias.p) ** (n - len(S))
            total += weight
            first.append((weight, _first_difference(E, G, S)))
        mass = {
            i: sum(w for w, size in first if size is not None and size <= i) / total
            for i in range(1, d + 1)
        }
        rate = stats.exact(mass[d], samples=len(first))
        levels = {i: stats.exact(v, samples=len(first)) for i, v in mass.items()}
    else:
        if rng is None:
            raise ParameterError("Monte Carlo disagreement needs a random stream")
        samples = samples or config["MC_DEFAULT_SAMPLES"]
        counts = {i: 0 for i in range(1, d + 1)}
        for _ in range(samples):
            if E.bias is not None:
                S = sample_mu(E.params.n, E.bias.p, rng)
            else:
                S = sample_k_subset(E.params.n, E.params.k, rng)
            size = _first_difference(E, G, S)
            if size is not None:
                for i in range(max(size, 1), d + 1):
                    counts[i] += 1
        levels = {i: stats.from_counts(c, samples) for i, c in counts.items()}
        rate = levels[d]
    return DisagreementReport(rate=rate, per_level=levels if per_level else None)


def seed_pair_disagreement(E, T1, T2, samples=None, rng=None, exact=None):
    """
    Pr[g_T1|_S != g_T2|_S] over k-sets S containing T1 ∪ T2, for the two
    restricted decoders. None when either decoder aborts.

    Return:
        stats.Estimate or None
    """
    if exact is None:
        exact = rng is None
    g1, _ = restricted_decode(E, T1, exact=exact, rng=rng)
    g2, _ = restricted_decode(E, T2, exact=exact, rng=rng)
    if g1 is None or g2 is None:
        logger.info("a restricted decoder aborted, no seed pair disagreement")
        return None
    W = T1 | T2
    n, k = E.params.n, E.params.k
    if len(W) > k:
        raise ParameterError("T1 ∪ T2 has more than k={} elements".format(k))
    differs = set(g1.differences(g2))
    if not differs:
        return stats.exact(0.0)
    if exact:
        total = math.comb(n - len(W), k - len(W))
        if total > config["DECODE_EXACT_MAX_SETS"]:
            raise ExactInfeasibleError(
                "seed pair disagreement over {} sets".format(total),
                alternative="Monte Carlo with a random stream",
            )
        rest = W.complement(n).members
        bad = 0
        for extra in itertools.combinations(rest, k - len(W)):
            S = W | VertexSet(extra)
            if any(B.issubset(S) for B in differs):
                bad += 1
        return stats.exact(bad / total, samples=total)
    samples = samples or config["MC_DEFAULT_SAMPLES"]
    bad = 0
    for _ in range(samples):
        S = sample_superset(n, k, W, rng)
        if any(B.issubset(S) for B in differs):
            bad += 1
    return stats.from_counts(bad, samples)
