import pytest

from agreetest.decode import most_popular, plurality_decode
from agreetest.ensemble import FLIP_ENTRY, CorruptionSpec, from_global
from agreetest.errors import ParameterError
from agreetest.sets import BiasedPairParams, VertexSet, derive_stream


def test_most_popular():
    assert most_popular({0: 3, 1: 5}) == 1
    assert most_popular({2: 4.0, 0: 4.0, 1: 1.0}) == 0


def test_tie_seed_picks_among_tied_symbols():
    votes = {0: 2, 1: 2, 2: 2, 3: 1}
    picks = {
        most_popular(votes, tie_seed=seed, key=VertexSet([1])) for seed in range(40)
    }
    assert picks <= {0, 1, 2}
    assert len(picks) > 1
    assert most_popular(votes, tie_seed=5, key=VertexSet([1])) == most_popular(
        votes, tie_seed=5, key=VertexSet([1])
    )


def test_clean_ensemble_decodes_to_its_global_function(small_global, small_ensemble):
    assert plurality_decode(small_ensemble) == small_global
    mc = plurality_decode(small_ensemble, samples_per_set=20, rng=derive_stream(1))
    assert mc == small_global


def test_dimension_two(small_global_d2):
    assert plurality_decode(from_global(small_global_d2, 4, t=3)) == small_global_d2


def test_plurality_outvotes_sparse_corruption(small_global, small_ensemble):
    E = small_ensemble.corrupt(CorruptionSpec(FLIP_ENTRY, 0.2), derive_stream(11))
    assert plurality_decode(E) == small_global


def test_biased_regime(small_global):
    E = from_global(small_global, 4, bias=BiasedPairParams(0.4, 0.5))
    assert plurality_decode(E) == small_global
    assert plurality_decode(E, samples_per_set=10, rng=derive_stream(2)) == small_global


def test_monte_carlo_needs_a_stream(small_ensemble):
    with pytest.raises(ParameterError):
        plurality_decode(small_ensemble, exact=False)
