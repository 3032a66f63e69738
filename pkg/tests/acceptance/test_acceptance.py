"""
End-to-end checks of the library's guarantees at desk scale, including the
claims that the fitted constants do not move with n. Each test runs in
minutes at most; deselect them with -m "not slow".
"""

import math

import numpy as np
import pytest

from agreetest import stats
from agreetest.agreement import (
    agreement_estimate,
    agreement_exact,
    expected_seed_disagreement,
    seed_disagreement_prediction,
)
from agreetest.decode import disagreement_rate, plurality_decode
from agreetest.ensemble import (
    FLIP_ENTRY,
    PLANTED_DISAGREEMENT,
    REPLACE_SET,
    CorruptionSpec,
    GlobalFunction,
    from_global,
    random_planted_sets,
)
from agreetest.hypergraph import (
    BiasedMode,
    Hypergraph,
    UniformMode,
    check_branching,
    hit,
    hit_mc,
)
from agreetest.pruning import PruneConfig, prune_biased, prune_uniform, verify_unique_hit
from agreetest.scripting.experiments import fit_summary, run_trial
from agreetest.sets import derive_stream

pytestmark = pytest.mark.slow

SWEEP_RATES = (0.01, 0.02, 0.05, 0.08, 0.1)

# smallest hit(H')/hit(H) seen per uniformity at c = 0.5, p = 0.1; a run
# that falls below has lost most of the hit probability
PRUNE_HIT_RATIO_FLOOR = {1: 0.25, 2: 0.05, 3: 0.05}


def random_hypergraph(n, d, count, rng):
    return Hypergraph(n, [rng.choice(n, d, replace=False).tolist() for _ in range(count)])


def fit_through_origin(x, y):
    """
    Least-squares C in y = C x, with its standard error.
    """
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    C = float(x @ y / (x @ x))
    residual = y - C * x
    stderr = math.sqrt(float(residual @ residual) / (len(x) - 1) / float(x @ x))
    return C, stderr


@pytest.mark.parametrize("n, k, t, d", [(30, 6, 3, 1), (40, 8, 4, 2), (40, 10, 5, 2)])
@pytest.mark.parametrize("alphabet_size", [2, 4])
def test_global_ensembles_pass_and_decode(n, k, t, d, alphabet_size):
    F = GlobalFunction.random(n, d, alphabet_size, derive_stream(n, k, d, alphabet_size))
    E = from_global(F, k, t=t)
    report = agreement_estimate(E, samples=100000, rng=derive_stream(1, "agree"))
    assert report.epsilon_hat == 0.0
    G = plurality_decode(E, samples_per_set=15, rng=derive_stream(1, "decode"))
    assert G == F


@pytest.mark.parametrize("d, trials", [(1, 20), (2, 6)])
def test_decoding_error_is_linear_in_agreement_loss_at_every_n(make_experiment, d, trials):
    # k/n = 1/5 and t/k = 1/2 at both sizes; the alphabet of 4 keeps the
    # chance that a replaced set still agrees negligible at either t
    exp = make_experiment(
        n=40, k=8, t=4, d=d, alphabet_size=4, samples=2000, corruption={"mode": REPLACE_SET}
    )
    rows = [
        run_trial(exp, rate, n, trial, 7919 * trial + 101 * n + int(rate * 1000))
        for n in (40, 80)
        for rate in SWEEP_RATES
        for trial in range(trials)
    ]
    fits = fit_summary(rows)
    for n in ("40", "80"):
        fit = fits[n]
        assert fit["slope"] > 0
        assert abs(fit["intercept"]) <= 2 * fit["intercept_stderr"] + 0.005
    slope_gap = abs(fits["40"]["slope"] - fits["80"]["slope"])
    assert slope_gap < 2 * (fits["40"]["slope_stderr"] + fits["80"]["slope_stderr"])


def test_graphs_glue_with_a_constant_that_does_not_move_with_n():
    ratios = {}
    for n, k, t in ((30, 8, 4), (40, 10, 5), (60, 15, 8)):
        F = GlobalFunction.random(n, 2, 2, derive_stream(3, "graph", n))
        E = from_global(F, k, t=t).corrupt(
            CorruptionSpec(REPLACE_SET, 0.05), derive_stream(4, n)
        )
        epsilon = agreement_estimate(E, samples=10000, rng=derive_stream(5, n)).as_estimate()
        G = plurality_decode(E, samples_per_set=40, rng=derive_stream(6, n))
        assert G == F
        rate = disagreement_rate(E, G, samples=10000, rng=derive_stream(7, n)).rate
        assert epsilon.value > 0
        C = rate.value / epsilon.value
        relative = math.hypot(rate.sigma() / rate.value, epsilon.sigma() / epsilon.value)
        ratios[n] = (C, C * relative)
    C40, sigma40 = ratios[40]
    for n in (30, 60):
        C, sigma = ratios[n]
        assert abs(C - C40) <= 3 * (sigma + sigma40)


def test_pruning_keeps_its_hard_guarantees(restore_config):
    from agreetest.config import config

    config["PRUNE_DEBUG_CHECKS"] = False
    cfg = PruneConfig(c=0.5, p=0.1)
    instances = (
        [(1, n, count) for n in (20, 30, 40) for count in (6, 12, 20, 30, 40, 40)][:17]
        + [(2, n, count) for n in (20, 30, 40) for count in (20, 60, 120, 250, 400, 500)][:17]
        + [(3, n, count) for n in (20, 30, 40) for count in (20, 80, 160, 300, 500, 500)][:16]
    )
    assert len(instances) == 50
    worst = {}
    for index, (d, n, count) in enumerate(instances):
        H = random_hypergraph(n, d, count, derive_stream(11, "prune", index))
        pruned = prune_biased(H, cfg)
        assert pruned.issubset(H)
        assert check_branching(pruned, cfg.rho).ok
        mode = BiasedMode(cfg.p, n)
        before = hit(H, mode, samples=20000, rng=derive_stream(12, index, "before"))
        after = hit(pruned, mode, samples=20000, rng=derive_stream(12, index, "after"))
        ratio = after.value / before.value
        assert ratio > 0
        worst[d] = min(worst.get(d, 1.0), ratio)
    for d, ratio in worst.items():
        assert ratio >= PRUNE_HIT_RATIO_FLOOR[d], (d, ratio)


@pytest.mark.parametrize("d, count", [(1, 30), (2, 30), (2, 120)])
def test_pruned_edges_hit_uniquely(restore_config, d, count):
    from agreetest.config import config

    config["PRUNE_DEBUG_CHECKS"] = False
    n, k, epsilon = 40, 4, 0.25
    mode = UniformMode(n, k)
    for index in range(3):
        H = random_hypergraph(n, d, count, derive_stream(12, "unique", d, count, index))
        pruned = prune_uniform(H, n, k, epsilon)
        assert pruned.issubset(H) and not pruned.is_empty()
        for j, e in enumerate(pruned.sorted_edges()):
            est = verify_unique_hit(
                pruned, e, mode, samples=10000, rng=derive_stream(13, d, index, j)
            )
            assert est.value >= 1 - epsilon - 3 * est.sigma()


def planted_points(n, k, t, seed):
    """
    (epsilon_hat + delta_hat, disagreement of plurality G) for planted
    disagreement instances at several rates on both sides of 1/2.
    """
    x, y = [], []
    F = GlobalFunction.random(n, 1, 2, derive_stream(seed, "planted", n))
    for draw in range(3):
        planted = random_planted_sets(n, 1, 3, derive_stream(seed, "sets", n, draw))
        for rate in (0.2, 0.35, 0.65, 0.8):
            E = from_global(F, k, t=t).corrupt(
                CorruptionSpec(PLANTED_DISAGREEMENT, rate, planted=planted),
                derive_stream(seed, "corrupt", n, draw, int(rate * 100)),
            )
            epsilon = agreement_estimate(E, samples=10000, rng=derive_stream(n, draw, "agree"))
            delta = disagreement_rate(E, F, samples=10000, rng=derive_stream(n, draw, "delta"))
            G = plurality_decode(E, samples_per_set=60, rng=derive_stream(n, draw, "decode"))
            rate_G = disagreement_rate(E, G, samples=10000, rng=derive_stream(n, draw, "rate"))
            slack = 3 * (rate_G.rate.sigma() + delta.rate.sigma())
            assert rate_G.value <= 2 * (epsilon.epsilon_hat + delta.value) + slack
            x.append(epsilon.epsilon_hat + delta.value)
            y.append(rate_G.value)
    return x, y


def test_plurality_robustness_constant_holds_at_twice_the_size():
    C40, stderr40 = fit_through_origin(*planted_points(40, 8, 4, seed=21))
    C80, stderr80 = fit_through_origin(*planted_points(80, 16, 8, seed=22))
    assert C40 > 0
    assert abs(C80 - C40) <= 2 * (stderr40 + stderr80)


@pytest.mark.parametrize("seed", range(20))
def test_monte_carlo_matches_exact_enumeration(seed):
    F = GlobalFunction.random(8, 1, 2, derive_stream(seed, "oracle"))
    E = from_global(F, 4, t=2).corrupt(CorruptionSpec(FLIP_ENTRY, 0.2), derive_stream(seed))

    exact = agreement_exact(E)
    mc = agreement_estimate(E, samples=3000, rng=derive_stream(seed, "agree"))
    assert stats.within_sigmas(mc.as_estimate(), exact.epsilon_hat, sigmas=4)

    G = plurality_decode(E)
    expected = disagreement_rate(E, G).value
    est = disagreement_rate(E, G, samples=3000, rng=derive_stream(seed, "rate"))
    assert stats.within_sigmas(est.rate, expected, sigmas=4)

    H = random_hypergraph(8, 2, 5, derive_stream(seed, "hypergraph"))
    for h_mode in (UniformMode(8, 4), BiasedMode(0.3, 8)):
        expected = hit(H, h_mode).value
        est = hit_mc(H, h_mode, 3000, derive_stream(seed, "hit", h_mode.name))
        assert stats.within_sigmas(est, expected, sigmas=4)
        e = H.sorted_edges()[0]
        expected = verify_unique_hit(H, e, h_mode).value
        est = verify_unique_hit(
            H, e, h_mode, samples=3000, rng=derive_stream(seed, "unique"), exact=False
        )
        assert stats.within_sigmas(est, expected, sigmas=4)


@pytest.mark.parametrize("seed", range(3))
def test_seed_diagnostics_match_the_breakdown(seed):
    F = GlobalFunction.random(8, 1, 2, derive_stream(seed, "diag"))
    E = from_global(F, 4, t=2).corrupt(CorruptionSpec(FLIP_ENTRY, 0.15), derive_stream(seed))
    report = agreement_exact(E)
    predicted = seed_disagreement_prediction(report, 2)
    empty = expected_seed_disagreement(E, level=0).value
    point = expected_seed_disagreement(E, level=1).value
    assert empty <= report.epsilon_hat + 1e-12
    assert point == pytest.approx(report.per_size_breakdown.get(1, 0.0) / 2)
    assert empty == pytest.approx(predicted["seed_empty"])
