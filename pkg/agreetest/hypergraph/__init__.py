from agreetest.hypergraph.core import Hypergraph
from agreetest.hypergraph.branching import (
    BranchingReport,
    Witness,
    check_branching,
    extension_counts,
    greedy_branching_subgraph,
    minimal_branching_factor,
)
from agreetest.hypergraph.hit import BiasedMode, UniformMode, hit, hit_exact, hit_mc
from agreetest.hypergraph.io import (
    format_hypergraph,
    parse_hypergraph,
    read_hypergraph,
    write_hypergraph,
)


def restrict(H, S):
    return H.restrict(S)


def link_delete(H, A):
    return H.link_delete(A)
