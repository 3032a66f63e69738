"""
Branching factor of a hypergraph: rho bounds H when every set A has at most
rho^r edges of size |A| + r containing it.
"""

import math
from collections import defaultdict
from dataclasses import dataclass
from typing import NamedTuple, Optional

from cdislogging import get_logger

from agreetest.errors import ParameterError
from agreetest.hypergraph.core import Hypergraph
from agreetest.sets import VertexSet

logger = get_logger(__name__)

# slack for comparing integer counts against real powers of rho
TOLERANCE = 1e-9


class Witness(NamedTuple):
    A: VertexSet
    r: int
    count: int


@dataclass(frozen=True)
class BranchingReport(object):
    rho: float
    ok: bool
    witness: Optional[Witness] = None

    def to_dict(self):
        out = {"rho": self.rho, "ok": self.ok, "witness": None}
        if self.witness is not None:
            out["witness"] = {
                "A": list(self.witness.A.members),
                "r": self.witness.r,
                "count": self.witness.count,
            }
        return out


def extension_counts(H):
    """
    Count, for every set A contained in some edge and every r >= 0, the edges
    of size |A| + r containing A. Sets contained in no edge have count 0 for
    every r >= 1, so the result covers all the constraints that can fail.

    Return:
        dict: (A, r) -> count
    """
    counts = defaultdict(int)
    for edge in H.edges:
        size = len(edge)
        for A in edge.subsets():
            counts[(A, size - len(A))] += 1
    return counts


def bound(rho, r):
    return rho ** r + TOLERANCE


def check_branching(H, rho):
    """
    Check the branching factor bound of H at rho.

    Args:
        H (Hypergraph): hypergraph to check
        rho (float): branching factor, >= 1

    Return:
        BranchingReport: ok, or the first violation by |A|, then A, then r
    """
    if rho < 1:
        raise ParameterError("branching factor must be >= 1, got {}".format(rho))
    violations = [
        Witness(A, r, count)
        for (A, r), count in extension_counts(H).items()
        if r >= 1 and count > bound(rho, r)
    ]
    if not violations:
        return BranchingReport(rho=rho, ok=True)
    witness = min(violations, key=lambda w: (len(w.A), w.A.members, w.r))
    logger.debug(
        "branching factor {} violated at A={} r={}: {} extensions".format(
            rho, witness.A, witness.r, witness.count
        )
    )
    return BranchingReport(rho=rho, ok=False, witness=witness)


def minimal_branching_factor(H):
    """
    Smallest rho at which check_branching passes.
    """
    rho = 1.0
    for (_, r), count in extension_counts(H).items():
        if r >= 1 and count > 1:
            rho = max(rho, count ** (1.0 / r))
    return rho


def greedy_branching_subgraph(H, rho):
    """
    Scan the edges in canonical order and keep an edge only while every
    branching constraint it touches stays within rho. The result always
    passes check_branching at rho.
    """
    if rho < 1:
        raise ParameterError("branching factor must be >= 1, got {}".format(rho))
    counts = defaultdict(int)
    kept = []
    for edge in H.sorted_edges():
        size = len(edge)
        touched = [(A, size - len(A)) for A in edge.subsets()]
        if all(
            r == 0 or counts[(A, r)] + 1 <= bound(rho, r) for (A, r) in touched
        ):
            kept.append(edge)
            for key in touched:
                counts[key] += 1
    logger.debug(
        "greedy subgraph at rho={} kept {} of {} edges".format(rho, len(kept), len(H))
    )
    return Hypergraph(H.n, kept)


def floor_power(rho, r):
    """
    floor(rho^r), robust to rounding just below an integer.
    """
    return int(math.floor(rho ** r + TOLERANCE))
