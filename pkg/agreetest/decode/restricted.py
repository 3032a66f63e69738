"""
Incremental decoder g_T around a seed set T with |T| = t - d.

g is built on T^(0) ⊂ T^(1) ⊂ ... ⊂ T^(d). At level i every A outside T
with |A| = i gets g_A, the most popular f_S|_(T,A) among the sets S of
X^(i-1) containing A, and X^(i) keeps the sets of X^(i-1) that agree with g
on every such frame. delta_i = 1 - |X^(i)|/|X_T|; the decoder gives up
(g = ⊥) once delta_(i-1) exceeds the abort threshold.
"""

import itertools
import math
from collections import Counter, defaultdict
from dataclasses import dataclass, field
from typing import Dict, List, Optional

from cdislogging import get_logger

from agreetest.config import config
from agreetest.decode.plurality import most_popular
from agreetest.ensemble import GlobalFunction
from agreetest.errors import ExactInfeasibleError, ParameterError
from agreetest.sets import VertexSet, sample_superset

logger = get_logger(__name__)


@dataclass
class DecoderDiagnostics(object):
    """
    delta[j] is delta_(j-1), so delta[0] = delta_(-1) = 0. gamma and rho are
    keyed by the A-key of A; gamma is None where X^(i-1)_(A) was empty.
    """

    delta: List[float] = field(default_factory=list)
    gamma: Dict[str, Optional[float]] = field(default_factory=dict)
    rho: Dict[str, float] = field(default_factory=dict)
    aborted: bool = False
    fallback: List[str] = field(default_factory=list)
    pool_size: int = 0
    exact: bool = True

    def delta_at(self, i):
        return self.delta[i + 1]

    def to_dict(self):
        return {
            "delta": list(self.delta),
            "gamma": dict(self.gamma),
            "rho": dict(self.rho),
            "aborted": self.aborted,
            "fallback": list(self.fallback),
            "pool_size": self.pool_size,
            "exact": self.exact,
        }


def new_frame(T, A, d, include_empty):
    """
    Sets B of T^(A) with B - T = A exactly, canonical order. The rest of
    T^(A) lies in T^(i-1), where every S of X^(i-1) already agrees with g.
    """
    low = 0 if include_empty else 1
    out = []
    for size in range(0, d - len(A) + 1):
        if size + len(A) < low:
            continue
        for combo in itertools.combinations(T.members, size):
            out.append(VertexSet(combo) | A)
    return sorted(out, key=lambda B: (len(B), B.members))


def _pool(E, T, exact, pool_size, rng):
    n, k = E.params.n, E.params.k
    if exact:
        total = math.comb(n - len(T), k - len(T))
        if total > config["DECODE_EXACT_MAX_SETS"]:
            raise ExactInfeasibleError(
                "restricted decoding over {} sets".format(total),
                alternative="mc mode with a pool",
            )
        rest = T.complement(n).members
        return [
            T | VertexSet(extra)
            for extra in itertools.combinations(rest, k - len(T))
        ]
    if rng is None:
        raise ParameterError("Monte Carlo restricted decoding needs a random stream")
    pool_size = pool_size or config["RESTRICTED_POOL_SIZE"]
    return [sample_superset(n, k, T, rng) for _ in range(pool_size)]


def _fallback(E, T, A, frame, pool, rng):
    """
    Values on the new frame of A by plurality over the pool sets containing
    T ∪ A, or over fresh sets containing each B when the pool has none.
    """
    W = T | A
    holders = [S for S in pool if S.issuperset(W)]
    out = {}
    for B in frame:
        votes = defaultdict(float)
        if holders:
            for S in holders:
                votes[E.value(S, B)] += 1
        else:
            for _ in range(config["DECODE_MC_SAMPLES_PER_SET"]):
                S = sample_superset(E.params.n, E.params.k, B, rng)
                votes[E.value(S, B)] += 1
        out[B] = most_popular(votes)
    return out


def restricted_decode(
    E, T, exact=None, pool_size=None, rng=None, abort_threshold=None
):
    """
    Run the incremental decoder around T.

    Args:
        E (LocalEnsemble): uniform regime
        T (VertexSet): seed set, |T| = t - d
        exact (bool): use all of X_T; by default exact only without rng
        pool_size (int): Monte Carlo pool of sets containing T
        rng (numpy.random.Generator): required for the pool
        abort_threshold (float): RESTRICTED_ABORT_THRESHOLD by default

    Return:
        tuple: (GlobalFunction or None, DecoderDiagnostics)
    """
    params = E.params
    if E.is_biased:
        raise ParameterError("the restricted decoder works on k-set ensembles only")
    if len(T) != params.t - params.d:
        raise ParameterError(
            "seed set must have t-d={} elements, got {}".format(
                params.t - params.d, len(T)
            )
        )
    if not T.fits(params.n):
        raise ParameterError("{} is not a subset of [{}]".format(T, params.n))
    if abort_threshold is None:
        abort_threshold = config["RESTRICTED_ABORT_THRESHOLD"]
    if exact is None:
        exact = rng is None
    d = params.d
    pool = _pool(E, T, exact, pool_size, rng)
    size = len(pool)
    diagnostics = DecoderDiagnostics(delta=[0.0], pool_size=size, exact=exact)
    outside = T.complement(params.n).members
    g = {}
    alive = list(range(size))

    for i in range(0, d + 1):
        if diagnostics.delta[-1] > abort_threshold:
            diagnostics.aborted = True
            diagnostics.delta.extend([1.0] * (d + 1 - i))
            logger.info(
                "restricted decoder aborted at level {}: delta={:.4f}".format(
                    i, diagnostics.delta[i]
                )
            )
            return None, diagnostics

        frames = {}
        tallies = defaultdict(Counter)
        for j in alive:
            S = pool[j]
            for A in (S - T).subsets(i):
                if A not in frames:
                    frames[A] = new_frame(T, A, d, E.include_empty)
                values = tuple(E.value(S, B) for B in frames[A])
                tallies[A][values] += 1

        holders = Counter()
        for S in pool:
            for A in (S - T).subsets(i):
                holders[A] += 1

        for members in itertools.combinations(outside, i):
            A = VertexSet(members)
            key = A.key()
            frame = frames.get(A) or new_frame(T, A, d, E.include_empty)
            tally = tallies.get(A)
            diagnostics.rho[key] = (
                sum(tally.values()) / holders[A] if holders[A] else 0.0
            )
            if not tally:
                diagnostics.gamma[key] = None
                diagnostics.fallback.append(key)
                g.update(_fallback(E, T, A, frame, pool, rng))
                continue
            top = max(tally.values())
            popular = min(values for values, count in tally.items() if count == top)
            diagnostics.gamma[key] = 1 - top / sum(tally.values())
            g.update(zip(frame, popular))

        alive = [
            j
            for j in alive
            if all(
                E.value(pool[j], B) == g[B]
                for A in (pool[j] - T).subsets(i)
                for B in frames[A]
            )
        ]
        diagnostics.delta.append(1 - len(alive) / size)
        logger.debug(
            "restricted decoder level {}: delta={:.4f}".format(i, diagnostics.delta[-1])
        )

    G = GlobalFunction(
        params.n, d, params.alphabet_size, g, include_empty=E.include_empty
    )
    return G, diagnostics
