from dataclasses import dataclass

from cdislogging import get_logger

from agreetest.config import config
from agreetest.errors import ParameterError, PropertyFailure
from agreetest.hypergraph import (
    BiasedMode,
    Hypergraph,
    check_branching,
    greedy_branching_subgraph,
)
from agreetest.pruning.completion import complete_fill, complete_multi
from agreetest.pruning.critical import HitOracle, critical_depth
from agreetest.pruning.params import PruneConfig
from agreetest.pruning.unique_hit import unique_hit_lower_bound

logger = get_logger(__name__)


def _uniformity(H):
    d = H.uniformity
    if not H.is_uniform(d):
        raise ParameterError(
            "pruning needs a uniform hypergraph, got edge sizes {}".format(
                sorted({len(e) for e in H.edges})
            )
        )
    return d


def _check_postcondition(H, pruned, rho):
    if not pruned.issubset(H):
        raise PropertyFailure("pruned hypergraph is not a subset of its input")
    report = check_branching(pruned, rho)
    if not report.ok:
        raise PropertyFailure(
            "pruned hypergraph fails branching factor {}".format(rho), report=report
        )


def shrink_start(d):
    return config["PRUNE_SHRINK_START"] or 2 ** (d + 2)


def gamma_clamped(H, rho):
    """
    Whether pruning H at branching factor rho runs its decomposition at
    gamma = 1 from the start, i.e. rho is below the starting shrink factor.
    """
    if H.is_empty() or rho < 1:
        return False
    d = _uniformity(H)
    if d == 0 or rho >= shrink_start(d):
        return False
    return not check_branching(H, rho).ok


def _best_hit(candidates, rho, hit_oracle):
    # first candidate wins ties
    eligible = [K for K in candidates if check_branching(K, rho).ok]
    return max(eligible, key=lambda K: hit_oracle(K).value)


def prune_biased(H, cfg, hit_oracle=None):
    """
    Sub-hypergraph of H with branching factor c/p that keeps a constant
    share of the mu_p hit probability.

    The decomposition runs at the reduced factor gamma = (c/p)/M. A pruned
    outcome is returned directly; a critical family is pruned recursively
    at gamma and completed. M starts at PRUNE_SHRINK_START (2^(d+2) when
    unset) and doubles until the completion passes at c/p. Past
    PRUNE_SHRINK_MAX the greedy sub-hypergraph is used instead. Once gamma
    reaches 1 the decomposition alone degenerates towards a single edge, so
    the greedy sub-hypergraph at c/p is built as well and whichever of the
    two hits more is kept.

    Args:
        H (Hypergraph): d-uniform input
        cfg (PruneConfig)
        hit_oracle (callable): Hypergraph -> stats.Estimate, mu_p hit by default

    Return:
        Hypergraph
    """
    if gamma_clamped(H, cfg.rho):
        logger.warning(
            "c/p = {:.3f} is below the starting shrink factor {}, the "
            "decomposition runs at gamma = 1 and is compared against the "
            "greedy sub-hypergraph".format(cfg.rho, shrink_start(H.uniformity))
        )
    return _prune_biased(H, cfg, hit_oracle)


def _prune_biased(H, cfg, hit_oracle):
    if H.is_empty():
        return H
    d = _uniformity(H)
    if d == 0:
        return H
    rho = cfg.rho
    if rho < 1:
        raise ParameterError(
            "c/p must be >= 1, got c={} p={}".format(cfg.c, cfg.p)
        )
    if check_branching(H, rho).ok:
        return H
    hit_oracle = hit_oracle or HitOracle(BiasedMode(cfg.p, H.n))

    shrink = shrink_start(d)
    cap = config["PRUNE_SHRINK_MAX"]
    while True:
        gamma = max(rho / shrink, 1.0)
        inner = cfg.at_rho(gamma)
        result = critical_depth(H, inner, hit_oracle)
        if result.is_pruned:
            pruned = result.hypergraph
        else:
            I_pruned = _prune_biased(result.I, inner, hit_oracle)
            K_multi = complete_multi(result.H_prev, I_pruned, inner)
            pruned = complete_fill(result.H_prev, I_pruned, K_multi, inner)
        if gamma == 1.0:
            greedy = greedy_branching_subgraph(H, rho)
            pruned = _best_hit([pruned, greedy], rho, hit_oracle)
            if pruned is greedy:
                logger.debug(
                    "greedy sub-hypergraph hits more than the decomposition "
                    "at gamma = 1"
                )
            break
        if result.is_pruned or check_branching(pruned, rho).ok:
            break
        if shrink >= cap:
            logger.warning(
                "completion fails branching factor {:.3f} with shrink factor {}, "
                "falling back to the greedy sub-hypergraph".format(rho, shrink)
            )
            pruned = greedy_branching_subgraph(H, rho)
            break
        shrink *= 2
        logger.debug("doubling shrink factor to {}".format(shrink))

    _check_postcondition(H, pruned, rho)
    logger.debug(
        "pruned {}-uniform hypergraph at rho={:.3f}: {} -> {} edges".format(
            d, rho, len(H), len(pruned)
        )
    )
    return pruned


@dataclass(frozen=True)
class UniformPruneRun(object):
    hypergraph: Hypergraph
    config: PruneConfig
    epsilon: float


def prune_uniform_run(H, n, k, epsilon, c=None, hit_oracle=None):
    """
    prune_uniform, also returning the mu_p configuration that produced the
    result.

    Pruning happens under mu_p with p = k/n at slack epsilon' =
    min(epsilon/2, 1/2). c starts at `c` (PRUNE_UNIFORM_C_START by default)
    and is halved, never below p, until every surviving edge has a
    correlation lower bound on its mu_p unique-hit probability of at least
    1 - epsilon'. Moving to uniform k-sets at most doubles the failure
    probability.
    """
    if H.n != n:
        raise ParameterError(
            "hypergraph over [{}] does not match n={}".format(H.n, n)
        )
    if not 0 < epsilon < 1:
        raise ParameterError("epsilon must lie in (0, 1), got {}".format(epsilon))
    d = _uniformity(H) if not H.is_empty() else 0
    if k < 2 * d:
        raise ParameterError("uniform pruning needs k >= 2d, got k={} d={}".format(k, d))
    if not 0 < k < n:
        raise ParameterError("uniform pruning needs 0 < k < n, got k={} n={}".format(k, n))
    p = k / n
    if p > config["PRUNE_P0_GUARD"]:
        logger.warning(
            "k/n = {:.3f} is above the p0 guard {}, the unique-hit guarantee "
            "may not hold".format(p, config["PRUNE_P0_GUARD"])
        )
    inner_epsilon = min(epsilon / 2, 0.5)
    c = c if c is not None else config["PRUNE_UNIFORM_C_START"]
    if c < p:
        logger.warning("c={} is below p={}, raising it to p".format(c, p))
        c = p
    mode = BiasedMode(p, n)
    hit_oracle = hit_oracle or HitOracle(mode)

    while True:
        cfg = PruneConfig(c=c, p=p, epsilon=inner_epsilon)
        pruned = prune_biased(H, cfg, hit_oracle)
        worst = min(
            (unique_hit_lower_bound(pruned, e, mode) for e in pruned.edges),
            default=1.0,
        )
        if worst >= 1 - inner_epsilon or c <= p:
            break
        logger.debug(
            "unique-hit bound {:.4f} below {:.4f} at c={}, halving c".format(
                worst, 1 - inner_epsilon, c
            )
        )
        c = max(c / 2, p)

    logger.info(
        "uniform pruning n={} k={} epsilon={}: c={} rho={:.3f}, {} -> {} edges".format(
            n, k, epsilon, cfg.c, cfg.rho, len(H), len(pruned)
        )
    )
    return UniformPruneRun(hypergraph=pruned, config=cfg, epsilon=epsilon)


def prune_uniform(H, n, k, epsilon, c=None, hit_oracle=None):
    """
    Sub-hypergraph H' of H whose surviving edges e satisfy
    Pr[H'|_S = {e} | S ⊇ e] >= 1 - epsilon for S a uniform k-subset of [n].
    """
    return prune_uniform_run(H, n, k, epsilon, c=c, hit_oracle=hit_oracle).hypergraph
