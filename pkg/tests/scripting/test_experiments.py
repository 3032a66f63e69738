import csv
import json
import os

import mock
import pytest

from agreetest.errors import ParameterError, PropertyFailure
from agreetest.ensemble import load_ensemble
from agreetest.hypergraph import Hypergraph, read_hypergraph
from agreetest.job.sweep import CSV_COLUMNS, SweepJob
from agreetest.pruning import PruneConfig, UniformPruneRun
from agreetest.scripting.experiments import (
    agree_action,
    build_ensemble,
    corrupt_action,
    decode_action,
    fit_summary,
    gen_action,
    prune_action,
    run_trial,
    sweep_action,
    verify_action,
)


def read(path):
    with open(path) as f:
        return f.read()


def test_experiment_from_the_test_configuration(make_experiment):
    exp = make_experiment(samples=100)
    assert (exp.params.n, exp.params.k, exp.params.t, exp.params.d) == (12, 4, 2, 1)
    assert exp.seed == 7
    assert exp.samples["agree"] == 100
    assert exp.samples["hit"] == 100
    assert exp.samples["decode_per_set"] == 60
    assert exp.samples["pool"] == 500
    assert exp.bias is None


def test_invalid_fields_are_all_reported(make_experiment):
    with pytest.raises(ParameterError) as exc:
        make_experiment(
            n="twelve",
            distribution={"kind": "zeta"},
            corruption={"mode": "shuffle"},
            prune={"mode": "random"},
        )
    message = exc.value.message
    for field in (
        "EXPERIMENT.n",
        "EXPERIMENT.distribution.kind",
        "EXPERIMENT.corruption.mode",
        "EXPERIMENT.prune.mode",
    ):
        assert field in message


@pytest.mark.parametrize(
    "changes, field",
    [
        ({"k": 20}, "EXPERIMENT.k"),
        ({"t": 5}, "EXPERIMENT.t"),
        ({"k": 0}, "EXPERIMENT.k"),
        ({"alphabet_size": 1}, "EXPERIMENT.alphabet_size"),
        ({"corruption": {"rate": 1.5}}, "EXPERIMENT.corruption.rate"),
        (
            {"corruption": {"mode": "planted_disagreement", "planted_count": 0}},
            "EXPERIMENT.corruption.planted_count",
        ),
        ({"sweep": {"trials": 0}}, "EXPERIMENT.sweep.trials"),
        ({"distribution": {"kind": "mu", "p": 2.0, "q": 0.5}}, "EXPERIMENT.distribution.p"),
    ],
)
def test_invalid_field(make_experiment, changes, field):
    with pytest.raises(ParameterError) as exc:
        make_experiment(**changes)
    assert field in exc.value.message


def test_mu_experiment(make_experiment):
    exp = make_experiment(distribution={"kind": "mu", "p": 0.3, "q": 0.5})
    assert exp.bias.p == 0.3
    assert exp.pair_distribution().to_dict() == {"kind": "mu", "p": 0.3, "q": 0.5}


def test_gen_is_deterministic(tmpdir, make_experiment):
    first = os.path.join(str(tmpdir), "first.json")
    second = os.path.join(str(tmpdir), "second.json")
    gen_action(make_experiment(out=first))
    gen_action(make_experiment(out=second))
    assert read(first) == read(second)
    E = load_ensemble(first)
    assert E.params.n == 12 and len(E.layers) == 1


def test_gen_writes_to_stdout(capsys, make_experiment):
    gen_action(make_experiment())
    data = json.loads(capsys.readouterr().out)
    assert data["header"]["kind"] == "implicit"


def test_planted_corruption_draws_its_sets(make_experiment):
    exp = make_experiment(
        corruption={"mode": "planted_disagreement", "rate": 0.5, "planted_count": 3}
    )
    spec = exp.corruption_spec()
    assert len(spec.planted) == 3
    assert build_ensemble(exp).layers[0].spec == spec


def test_corrupt_appends_a_layer(tmpdir, make_experiment):
    path = os.path.join(str(tmpdir), "e.json")
    again = os.path.join(str(tmpdir), "e2.json")
    gen_action(make_experiment(out=path))
    corrupt_action(path, make_experiment(out=again))
    E = load_ensemble(again)
    assert len(E.layers) == 2
    assert E.layers[0] == load_ensemble(path).layers[0]


@pytest.fixture
def clean_path(tmpdir, make_experiment):
    path = os.path.join(str(tmpdir), "clean.json")
    gen_action(make_experiment(out=path, corruption={"rate": 0.0}))
    return path


def test_agree_on_a_clean_ensemble(clean_path, make_experiment, capsys):
    out = agree_action(clean_path, make_experiment(exact=True))
    assert out["epsilon_hat"] == 0.0
    assert out["mode"] == "exact"
    assert out["seed_prediction"]["seed_empty"] == 0.0
    assert out["seed_measured"] == {"seed_empty": 0.0, "seed_point": 0.0}
    assert json.loads(capsys.readouterr().out)["epsilon_hat"] == 0.0
    mc = agree_action(clean_path, make_experiment(samples=200))
    assert mc["mode"] == "mc" and mc["samples"] == 200
    assert "seed_measured" not in mc


def test_agree_keeps_the_ensemble_t(clean_path, make_experiment):
    exp = make_experiment(exact=True, t=3)
    assert agree_action(clean_path, exp)["params"]["t"] == 2
    assert agree_action(clean_path, exp, t=1)["params"]["t"] == 1


def test_decode_a_clean_ensemble(clean_path, make_experiment):
    out = decode_action(clean_path, make_experiment(exact=True))
    assert out["disagreement"]["rate"]["value"] == 0.0
    assert out["restricted"]["agrees_with_plurality"] is True
    assert out["restricted"]["diagnostics"]["aborted"] is False
    assert len(out["restricted"]["seed_set"]) == 1
    values = load_ensemble(clean_path).global_function.to_dict()["values"]
    assert out["global_function"]["values"] == values


def test_prune_a_single_edge(hypergraph_file, tmpdir, make_experiment):
    path = hypergraph_file("12 1\n0 1\n")
    text_out = os.path.join(str(tmpdir), "pruned.txt")
    out = prune_action(path, make_experiment(), text_out=text_out)
    assert out["branching_ok"]
    assert out["edges"] == [[0, 1]]
    assert out["min_unique_hit"] == 1.0
    assert read_hypergraph(text_out) == read_hypergraph(path)


def test_prune_reports_a_failing_result(hypergraph_file, make_experiment):
    path = hypergraph_file("12 3\n0 1\n0 2\n0 3\n")
    H = read_hypergraph(path)
    run = UniformPruneRun(
        hypergraph=H, config=PruneConfig(c=0.5, p=1 / 3), epsilon=0.25
    )
    with mock.patch(
        "agreetest.scripting.experiments.prune_uniform_run", return_value=run
    ):
        with pytest.raises(PropertyFailure) as exc:
            prune_action(path, make_experiment())
    assert exc.value.report["branching_ok"] is False


def test_prune_in_biased_mode(hypergraph_file, make_experiment):
    path = hypergraph_file("12 2\n0 1\n2 3\n")
    out = prune_action(path, make_experiment(prune={"mode": "biased"}))
    assert out["branching_ok"]
    assert out["mode"]["mode"] == "biased"


def test_verify(hypergraph_file, make_experiment):
    path = hypergraph_file("12 2\n0 1\n2 3\n")
    out = verify_action(path, make_experiment())
    assert out["failing"] == []
    assert out["min_unique_hit"] == pytest.approx(44 / 45)
    assert out["minimal_branching_factor"] == pytest.approx(2 ** 0.5)


def test_verify_flags_a_star(hypergraph_file, make_experiment):
    path = hypergraph_file(
        "12 11\n" + "".join("0 {}\n".format(i) for i in range(1, 12))
    )
    with pytest.raises(PropertyFailure) as exc:
        verify_action(path, make_experiment())
    assert len(exc.value.report["failing"]) == 11


def test_run_trial_scales_k_and_t(make_experiment):
    exp = make_experiment(samples=100, corruption={"rate": 0.0})
    row = run_trial(exp, 0.0, 24, 0, 99)
    assert (row["n"], row["k"], row["t"]) == (24, 8, 4)
    assert row["epsilon_hat"] == 0.0
    assert row["decode_disagreement"] == 0.0
    assert set(row) == set(CSV_COLUMNS)


def test_sweep_trials_are_ordered_and_seeded(make_experiment):
    exp = make_experiment(sweep={"rates": [0.0, 0.1], "n_values": [12, 16], "trials": 2})
    trials = SweepJob(exp, run_trial).trials()
    assert [t[0] for t in trials] == list(range(8))
    assert [(t[1], t[2], t[3]) for t in trials[:4]] == [
        (0.0, 12, 0),
        (0.0, 12, 1),
        (0.0, 16, 0),
        (0.0, 16, 1),
    ]
    assert trials == SweepJob(exp, run_trial).trials()
    assert len({t[4] for t in trials}) == 8


def test_sweep_is_reproducible(tmpdir, make_experiment, capsys):
    paths = [os.path.join(str(tmpdir), name) for name in ("a.csv", "b.csv")]
    for path, workers in zip(paths, (1, 2)):
        exp = make_experiment(samples=200, out=path, sweep={"rates": [0.0]})
        rows, summary = sweep_action(exp, workers=workers)
        assert len(rows) == 2
    assert read(paths[0]) == read(paths[1])
    with open(paths[0]) as f:
        rows = list(csv.DictReader(f))
    assert [float(row["decode_disagreement"]) for row in rows] == [0.0, 0.0]
    assert summary["fits"]["12"]["points"] == 2
    assert json.loads(capsys.readouterr().out.splitlines()[-1])["rows"] == 2


def test_fit_summary():
    rows = [
        {"n": 30, "epsilon_hat": x, "decode_disagreement": 2 * x + 0.01}
        for x in (0.01, 0.02, 0.04, 0.08)
    ]
    fit = fit_summary(rows)["30"]
    assert fit["slope"] == pytest.approx(2.0)
    assert fit["intercept"] == pytest.approx(0.01)
