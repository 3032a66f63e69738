"""
Completion of a pruned critical family I back into a sub-hypergraph of
H_prev: first the edges extending two or more edges of I, then a fixed
number of extensions per edge of I.
"""

from cdislogging import get_logger

from agreetest.config import config
from agreetest.errors import ParameterError, PropertyFailure, StructuralError
from agreetest.hypergraph import Hypergraph, check_branching
from agreetest.hypergraph.branching import TOLERANCE, floor_power
from agreetest.pruning.critical import shadow_counts

logger = get_logger(__name__)


def _levels(H_prev, I_pruned):
    d = H_prev.uniformity
    sizes = {len(e) for e in I_pruned.edges}
    if len(sizes) > 1:
        raise ParameterError("the critical family must be uniform")
    s = sizes.pop()
    if not H_prev.is_uniform(d) or s > d:
        raise ParameterError(
            "cannot complete a {}-uniform family inside a {}-uniform hypergraph".format(
                s, d
            )
        )
    return d, d - s


def _check_preconditions(H_prev, I_pruned, d, r, rho):
    report = check_branching(I_pruned, rho)
    if not report.ok:
        raise PropertyFailure(
            "critical family fails branching factor {}: {}".format(
                rho, report.witness
            )
        )
    for size in range(d - r + 1, d + 1):
        for A, count in shadow_counts(H_prev, size).items():
            if count > rho ** (d - size) + TOLERANCE:
                raise PropertyFailure(
                    "{} has {} extensions in H_prev, more than {:.3f}".format(
                        A, count, rho ** (d - size)
                    )
                )


def complete_multi(H_prev, I_pruned, cfg):
    """
    Edges of H_prev extending at least two distinct edges of I_pruned.

    Return:
        Hypergraph
    """
    if len(I_pruned) < 2:
        return Hypergraph(H_prev.n)
    d, r = _levels(H_prev, I_pruned)
    if config["PRUNE_DEBUG_CHECKS"]:
        _check_preconditions(H_prev, I_pruned, d, r, cfg.rho)
    s = d - r
    multi = []
    for edge in H_prev.edges:
        inside = sum(1 for A in edge.subsets(s) if A in I_pruned.edges)
        if inside >= 2:
            multi.append(edge)
    return Hypergraph(H_prev.n, multi)


def complete_fill(H_prev, I_pruned, K_multi, cfg):
    """
    Top up every edge e of I_pruned to floor(rho^r) extensions, taking the
    lexicographically smallest extensions of e in H_prev outside K_multi.

    Args:
        H_prev (Hypergraph): the d-uniform level the family was cut from
        I_pruned (Hypergraph): (d-r)-uniform pruned critical family
        K_multi (Hypergraph): output of complete_multi
        cfg (PruneConfig)

    Return:
        Hypergraph: K_multi plus the chosen extensions
    """
    if I_pruned.is_empty():
        return K_multi
    d, r = _levels(H_prev, I_pruned)
    target = floor_power(cfg.rho, r)
    pool = H_prev.difference(K_multi)
    chosen = set(K_multi.edges)
    for e in I_pruned.sorted_edges():
        have = sum(1 for f in K_multi.edges if f.issuperset(e))
        missing = max(target - have, 0)
        if not missing:
            continue
        available = [
            f for f in pool.sorted_edges() if f.issuperset(e) and f not in chosen
        ]
        if len(available) < missing:
            raise StructuralError(
                "{} has only {} extensions available, {} needed".format(
                    e, len(available), missing
                )
            )
        chosen.update(sorted(available, key=lambda f: f.members)[:missing])
    K = Hypergraph(H_prev.n, chosen)
    if config["PRUNE_DEBUG_CHECKS"]:
        half = cfg.rho ** r / 2
        for e in I_pruned.edges:
            count = sum(1 for f in K.edges if f.issuperset(e))
            if count + TOLERANCE < half:
                raise PropertyFailure(
                    "{} keeps {} extensions, fewer than {:.3f}".format(e, count, half)
                )
    logger.debug(
        "completion at r={}: {} multi edges, {} total".format(r, len(K_multi), len(K))
    )
    return K
