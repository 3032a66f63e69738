from dataclasses import asdict, dataclass, field
from typing import List, Optional

from cdislogging import get_logger

from agreetest.hypergraph import (
    UniformMode,
    check_branching,
    hit,
    minimal_branching_factor,
)
from agreetest.pruning.prune import gamma_clamped
from agreetest.pruning.unique_hit import (
    transfer_bounds,
    unique_hit_lower_bound,
    verify_unique_hit,
)
from agreetest.sets import derive_stream

logger = get_logger(__name__)


@dataclass
class EdgeReport(object):
    edge: List[int]
    unique_hit: float
    ci_halfwidth: float
    exact: bool
    lower_bound: float


@dataclass
class PruneReport(object):
    branching_ok: bool
    rho: float
    minimal_branching_factor: float
    edges_before: int
    edges_after: int
    hit_before: float
    hit_after: float
    hit_ratio: Optional[float]
    min_unique_hit: Optional[float]
    gamma_clamped: bool = False
    epsilon: Optional[float] = None
    mode: dict = field(default_factory=dict)
    transfer: Optional[dict] = None
    per_edge: List[EdgeReport] = field(default_factory=list)
    edges: List[List[int]] = field(default_factory=list)

    def to_dict(self):
        return asdict(self)


def prune_report(H, pruned, mode, rho, epsilon=None, seed=0, samples=None, exact=None):
    """
    Hit probabilities before and after pruning, the branching check, and the
    unique-hit probability of every surviving edge.

    Args:
        H (Hypergraph): input of the pruning
        pruned (Hypergraph): its output
        mode (UniformMode or BiasedMode): distribution hit and unique-hit use
        rho (float): branching factor to check
        epsilon (float): slack the unique-hit values are compared against
        seed (int): master seed of the Monte Carlo streams
        samples (int): Monte Carlo samples per estimate
        exact (bool): force the exact (True) or Monte Carlo (False) path

    Return:
        PruneReport
    """
    before = hit(
        H, mode, samples=samples, rng=derive_stream(seed, "hit", "before"), exact=exact
    )
    after = hit(
        pruned, mode, samples=samples, rng=derive_stream(seed, "hit", "after"), exact=exact
    )
    per_edge = []
    for index, e in enumerate(pruned.sorted_edges()):
        estimate = verify_unique_hit(
            pruned,
            e,
            mode,
            samples=samples,
            rng=derive_stream(seed, "verify", index),
            exact=exact,
        )
        per_edge.append(
            EdgeReport(
                edge=list(e.members),
                unique_hit=estimate.value,
                ci_halfwidth=estimate.ci_halfwidth,
                exact=estimate.exact,
                lower_bound=unique_hit_lower_bound(pruned, e, mode),
            )
        )
    transfer = None
    if isinstance(mode, UniformMode) and 0 < mode.k <= mode.n:
        transfer = transfer_bounds(mode.n, mode.k, H.uniformity)
    report = PruneReport(
        branching_ok=check_branching(pruned, rho).ok,
        rho=rho,
        minimal_branching_factor=minimal_branching_factor(pruned),
        edges_before=len(H),
        edges_after=len(pruned),
        hit_before=before.value,
        hit_after=after.value,
        hit_ratio=after.value / before.value if before.value > 0 else None,
        min_unique_hit=min((e.unique_hit for e in per_edge), default=None),
        gamma_clamped=gamma_clamped(H, rho),
        epsilon=epsilon,
        mode=mode.to_dict(),
        transfer=transfer,
        per_edge=per_edge,
        edges=pruned.to_lists(),
    )
    logger.info(
        "prune report: {} -> {} edges, hit {:.4f} -> {:.4f}, branching_ok={}".format(
            report.edges_before,
            report.edges_after,
            report.hit_before,
            report.hit_after,
            report.branching_ok,
        )
    )
    return report
