import pytest

from agreetest.errors import PropertyFailure, StructuralError
from agreetest.hypergraph import Hypergraph, check_branching
from agreetest.pruning import PruneConfig, complete_fill, complete_multi


def edges(H):
    return sorted(e.members for e in H.edges)


def test_single_critical_edge_has_no_multi_extensions():
    H_prev = Hypergraph(5, [(1, 2), (1, 3)])
    assert complete_multi(H_prev, Hypergraph(5, [(1,)]), PruneConfig(c=0.2, p=0.1)).is_empty()


def test_edge_extending_two_critical_edges():
    H_prev = Hypergraph(5, [(1, 2, 3)])
    I = Hypergraph(5, [(1,), (2,)])
    cfg = PruneConfig(c=0.3, p=0.1)
    assert edges(complete_multi(H_prev, I, cfg)) == [(1, 2, 3)]


def test_edges_extending_one_critical_edge_each():
    H_prev = Hypergraph(5, [(1, 2), (3, 4)])
    I = Hypergraph(5, [(1,), (3,)])
    cfg = PruneConfig(c=0.3, p=0.1)
    assert complete_multi(H_prev, I, cfg).is_empty()


def test_fill_takes_the_smallest_extensions():
    H_prev = Hypergraph(10, [(1, j) for j in range(2, 10)])
    I = Hypergraph(10, [(1,)])
    cfg = PruneConfig(c=0.4, p=0.1)
    K = complete_fill(H_prev, I, Hypergraph(10), cfg)
    assert edges(K) == [(1, 2), (1, 3), (1, 4), (1, 5)]
    d = 2
    assert check_branching(K, 2 ** (d + 1) * cfg.rho).ok


def test_fill_keeps_a_rich_multi_family(restore_config):
    from agreetest.config import config

    config["PRUNE_DEBUG_CHECKS"] = False
    H_prev = Hypergraph(6, [(1, 2), (1, 3), (2, 3)])
    I = Hypergraph(6, [(1,), (2,), (3,)])
    cfg = PruneConfig(c=0.2, p=0.1)
    K_multi = complete_multi(H_prev, I, cfg)
    assert complete_fill(H_prev, I, K_multi, cfg) == K_multi


def test_fill_without_enough_extensions(restore_config):
    from agreetest.config import config

    config["PRUNE_DEBUG_CHECKS"] = False
    H_prev = Hypergraph(6, [(1, 2), (1, 3)])
    I = Hypergraph(6, [(1,)])
    with pytest.raises(StructuralError):
        complete_fill(H_prev, I, Hypergraph(6), PruneConfig(c=0.4, p=0.1))


def test_debug_checks_catch_a_bad_critical_family(restore_config):
    from agreetest.config import config

    config["PRUNE_DEBUG_CHECKS"] = True
    H_prev = Hypergraph(8, [(0, 1), (0, 2), (1, 3), (2, 3)])
    # the empty set has 4 > rho extensions in I
    I = Hypergraph(8, [(0,), (1,), (2,), (3,)])
    with pytest.raises(PropertyFailure):
        complete_multi(H_prev, I, PruneConfig(c=0.2, p=0.1))
