import pytest

from agreetest import stats
from agreetest.agreement import (
    MuDistribution,
    NuDistribution,
    agreement_estimate,
    agreement_exact,
    conditional_disagreement,
    expected_seed_disagreement,
    seed_disagreement_prediction,
)
from agreetest.errors import ExactInfeasibleError, ParameterError
from agreetest.ensemble import FLIP_ENTRY, REPLACE_SET, CorruptionSpec, from_global
from agreetest.sets import BiasedPairParams, VertexSet, derive_stream


@pytest.fixture
def flipped(small_ensemble):
    return small_ensemble.corrupt(CorruptionSpec(FLIP_ENTRY, 0.2), derive_stream(11))


def test_clean_ensemble_passes(small_ensemble):
    report = agreement_exact(small_ensemble)
    assert report.epsilon_hat == 0.0
    assert report.mode == "exact"
    assert report.per_size_breakdown == {}
    mc = agreement_estimate(small_ensemble, samples=500, rng=derive_stream(1))
    assert mc.epsilon_hat == 0.0
    assert mc.to_dict()["distribution"] == {"kind": "nu", "t": 2}


def test_breakdown_sums_to_epsilon(flipped):
    report = agreement_exact(flipped)
    assert 0 < report.epsilon_hat < 1
    assert sum(report.per_size_breakdown.values()) == pytest.approx(report.epsilon_hat)
    assert set(report.per_size_breakdown) <= {1, 2}


def test_monte_carlo_matches_exact(flipped):
    exact = agreement_exact(flipped)
    mc = agreement_estimate(flipped, samples=4000, rng=derive_stream(2, "agree"))
    assert mc.mode == "mc"
    assert stats.within_sigmas(mc.as_estimate(), exact.epsilon_hat)


def test_other_intersection_sizes(flipped):
    assert agreement_exact(flipped, t=0).epsilon_hat == 0.0
    assert 0 < agreement_exact(flipped, t=3).epsilon_hat <= 1
    with pytest.raises(ParameterError):
        agreement_exact(flipped, t=5)


def test_exact_guard(restore_config, flipped):
    from agreetest.config import config

    config["AGREEMENT_EXACT_MAX_PAIRS"] = 10
    with pytest.raises(ExactInfeasibleError):
        agreement_exact(flipped)


def test_estimate_needs_a_stream(flipped):
    with pytest.raises(ParameterError):
        agreement_estimate(flipped)


def test_mu_test_needs_a_biased_ensemble(small_global, small_ensemble):
    dist = MuDistribution(0.3, 0.5)
    with pytest.raises(ParameterError):
        agreement_estimate(small_ensemble, dist, samples=10, rng=derive_stream(0))
    biased = from_global(small_global, 4, bias=BiasedPairParams(0.3, 0.5))
    report = agreement_estimate(biased, dist, samples=300, rng=derive_stream(3))
    assert report.epsilon_hat == 0.0
    assert report.distribution["kind"] == "mu"


def test_mu_test_sees_replaced_sets(small_global):
    biased = from_global(small_global, 4, bias=BiasedPairParams(0.4, 0.5))
    corrupted = biased.corrupt(CorruptionSpec(REPLACE_SET, 0.5), derive_stream(4))
    report = agreement_estimate(
        corrupted, MuDistribution(0.4, 0.5), samples=2000, rng=derive_stream(5)
    )
    assert report.epsilon_hat > 0


def test_seed_identities_in_dimension_one(flipped):
    report = agreement_exact(flipped)
    predicted = seed_disagreement_prediction(report, flipped.params.t)
    empty = expected_seed_disagreement(flipped, level=0)
    point = expected_seed_disagreement(flipped, level=1)
    assert empty.exact and point.exact
    assert empty.value == pytest.approx(predicted["seed_empty"])
    assert point.value == pytest.approx(predicted["seed_point"])
    mc = expected_seed_disagreement(
        flipped, level=0, samples=4000, rng=derive_stream(6, "seed")
    )
    assert stats.within_sigmas(mc, predicted["seed_empty"])


def test_seed_levels_are_checked(flipped):
    with pytest.raises(ParameterError):
        expected_seed_disagreement(flipped, level=2)


def test_prediction_needs_a_breakdown(flipped):
    report = agreement_estimate(flipped, samples=50, rng=derive_stream(0), breakdown=False)
    with pytest.raises(ParameterError):
        seed_disagreement_prediction(report, 2)


def test_conditional_disagreement(small_ensemble, flipped):
    T = VertexSet([0])
    assert conditional_disagreement(small_ensemble, T).value == 0.0
    exact = conditional_disagreement(flipped, T, A=VertexSet([3]))
    assert exact.exact
    mc = conditional_disagreement(
        flipped, T, A=VertexSet([3]), samples=4000, rng=derive_stream(7)
    )
    assert not mc.exact
    assert stats.within_sigmas(mc, exact.value)


@pytest.mark.parametrize(
    "T, A",
    [
        (VertexSet([0]), VertexSet([0])),
        (VertexSet([0]), VertexSet([1, 2])),
        (VertexSet([0, 1]), VertexSet([2])),
    ],
)
def test_conditional_disagreement_rejects_bad_seeds(flipped, T, A):
    with pytest.raises(ParameterError):
        conditional_disagreement(flipped, T, A=A)


def test_distribution_dicts():
    assert NuDistribution(3).to_dict() == {"kind": "nu", "t": 3}
    assert MuDistribution(0.2, 0.5).pair_params == BiasedPairParams(0.2, 0.5)
