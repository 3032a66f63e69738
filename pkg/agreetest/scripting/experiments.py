"""
Actions behind the agreetest command line. Each action takes an
ExperimentConfig (the EXPERIMENT block of the configuration with the
command line overrides applied) and returns a JSON-able dict.
"""

import copy
import json
import sys
from dataclasses import dataclass
from typing import Optional

from cdislogging import get_logger

from agreetest import stats
from agreetest.agreement import (
    MuDistribution,
    NuDistribution,
    agreement_estimate,
    agreement_exact,
    expected_seed_disagreement,
    seed_disagreement_prediction,
)
from agreetest.config import config
from agreetest.decode import disagreement_rate, plurality_decode, restricted_decode
from agreetest.ensemble import (
    MODES,
    PLANTED_DISAGREEMENT,
    CorruptionSpec,
    GlobalFunction,
    from_global,
    load_ensemble,
    random_planted_sets,
    save_ensemble,
)
from agreetest.ensemble.storage import dumps, ensemble_to_dict
from agreetest.errors import ParameterError, PropertyFailure
from agreetest.hypergraph import (
    BiasedMode,
    UniformMode,
    minimal_branching_factor,
    read_hypergraph,
    write_hypergraph,
)
from agreetest.job.sweep import SweepJob
from agreetest.pruning import (
    HitOracle,
    PruneConfig,
    prune_biased,
    prune_report,
    prune_uniform_run,
    verify_unique_hit,
)
from agreetest.sets import BiasedPairParams, TestParams, derive_stream, sample_k_subset

logger = get_logger(__name__)

SAMPLE_KEYS = ("agree", "disagreement", "decode_per_set", "hit", "unique_hit", "pool")


@dataclass
class ExperimentConfig(object):
    params: TestParams
    distribution: dict
    corruption: dict
    sweep: dict
    samples: dict
    prune: dict
    seed: int = 0
    output_path: Optional[str] = None
    exact: Optional[bool] = None

    @classmethod
    def from_config(cls, block=None, seed=None, samples=None, out=None, exact=None):
        """
        Build and validate an experiment from a configuration block (the
        EXPERIMENT entry by default). Flag values win over the block.

        Raises:
            ParameterError: listing every invalid field
        """
        block = copy.deepcopy(block if block is not None else config["EXPERIMENT"])
        errors = []

        def number(key, value, kind=int, low=None, high=None):
            if not isinstance(value, (int, float)) or isinstance(value, bool):
                errors.append("EXPERIMENT.{}: expected a number, got {!r}".format(key, value))
                return value
            if kind is int and int(value) != value:
                errors.append("EXPERIMENT.{}: expected an integer, got {}".format(key, value))
            if low is not None and value < low:
                errors.append("EXPERIMENT.{}: must be >= {}, got {}".format(key, low, value))
            if high is not None and value > high:
                errors.append("EXPERIMENT.{}: must be <= {}, got {}".format(key, high, value))
            return kind(value)

        n = number("n", block.get("n"), low=1)
        k = number("k", block.get("k"), low=0)
        t = number("t", block.get("t"), low=0)
        d = number("d", block.get("d"), low=1)
        q = number("alphabet_size", block.get("alphabet_size"), low=2)
        if not errors:
            if k > n:
                errors.append("EXPERIMENT.k: must be <= n={}, got {}".format(n, k))
            if t > k:
                errors.append("EXPERIMENT.t: must be <= k={}, got {}".format(k, t))
            if k < d:
                errors.append("EXPERIMENT.k: must be >= d={}, got {}".format(d, k))

        distribution = dict(block.get("distribution") or {})
        if distribution.get("kind") not in ("nu", "mu"):
            errors.append(
                "EXPERIMENT.distribution.kind: must be nu or mu, got {!r}".format(
                    distribution.get("kind")
                )
            )
        elif distribution["kind"] == "mu":
            for key in ("p", "q"):
                number("distribution." + key, distribution.get(key), float, 0, 1)

        corruption = dict(block.get("corruption") or {})
        number("corruption.rate", corruption.get("rate"), float, 0, 1)
        corruption["planted_count"] = number(
            "corruption.planted_count", corruption.get("planted_count") or 0, low=0
        )
        if corruption.get("mode") not in MODES:
            errors.append(
                "EXPERIMENT.corruption.mode: unknown mode {!r}".format(corruption.get("mode"))
            )
        elif corruption["mode"] == PLANTED_DISAGREEMENT and not corruption["planted_count"]:
            errors.append("EXPERIMENT.corruption.planted_count: must be >= 1 when planting")

        sweep = dict(block.get("sweep") or {})
        for rate in sweep.get("rates") or []:
            number("sweep.rates", rate, float, 0, 1)
        for value in sweep.get("n_values") or []:
            number("sweep.n_values", value, low=1)
        sweep["trials"] = number("sweep.trials", sweep.get("trials"), low=1)

        sample_counts = dict(block.get("samples") or {})
        for key in SAMPLE_KEYS:
            if samples is not None and key not in ("decode_per_set", "pool"):
                sample_counts[key] = samples
            sample_counts[key] = number("samples." + key, sample_counts.get(key), low=1)

        prune = dict(block.get("prune") or {})
        if prune.get("mode") not in ("uniform", "biased"):
            errors.append(
                "EXPERIMENT.prune.mode: must be uniform or biased, got {!r}".format(
                    prune.get("mode")
                )
            )
        number("prune.c", prune.get("c"), float, 0)
        number("prune.p", prune.get("p"), float, 0, 1)
        number("prune.epsilon", prune.get("epsilon"), float, 0, 1)

        seed = block.get("seed") if seed is None else seed
        seed = number("seed", seed, low=0)

        if errors:
            raise ParameterError("invalid experiment: " + "; ".join(errors))
        params = TestParams(n=n, k=k, t=t, d=d, alphabet_size=q)
        params.validate()
        return cls(
            params=params,
            distribution=distribution,
            corruption=corruption,
            sweep=sweep,
            samples=sample_counts,
            prune=prune,
            seed=seed,
            output_path=out if out is not None else block.get("output_path"),
            exact=exact,
        )

    @property
    def bias(self):
        if self.distribution.get("kind") != "mu":
            return None
        return BiasedPairParams(self.distribution["p"], self.distribution["q"])

    def pair_distribution(self):
        if self.bias is not None:
            return MuDistribution(self.bias.p, self.bias.q)
        return NuDistribution(self.params.t)

    def corruption_spec(self, n=None, rng=None):
        mode = self.corruption["mode"]
        planted = ()
        if mode == PLANTED_DISAGREEMENT:
            planted = random_planted_sets(
                n or self.params.n,
                self.params.d,
                self.corruption["planted_count"],
                rng if rng is not None else derive_stream(self.seed, "planted"),
            )
        return CorruptionSpec(mode=mode, rate=self.corruption["rate"], planted=planted)

    def stream(self, *names):
        return derive_stream(self.seed, *names)


def write_output(data, path=None):
    """
    JSON to `path`, or to stdout without one.
    """
    text = data if isinstance(data, str) else dumps(data)
    if path:
        with open(path, "w") as f:
            f.write(text)
        logger.info("wrote {}".format(path))
    else:
        sys.stdout.write(text)
        sys.stdout.flush()


def build_ensemble(exp, params=None, seed=None):
    """
    Random global function plus the configured corruption, deterministic in
    the seed.
    """
    params = params or exp.params
    seed = exp.seed if seed is None else seed
    F = GlobalFunction.random(
        params.n,
        params.d,
        params.alphabet_size,
        derive_stream(seed, "global"),
        include_empty=config["INCLUDE_EMPTY_SET"],
    )
    E = from_global(F, params.k, t=params.t, bias=exp.bias)
    spec = exp.corruption_spec(n=params.n, rng=derive_stream(seed, "planted"))
    return E.corrupt(spec, derive_stream(seed, "corrupt"))


def gen_action(exp):
    E = build_ensemble(exp)
    if exp.output_path:
        save_ensemble(E, exp.output_path)
    else:
        write_output(ensemble_to_dict(E))
    return E


def corrupt_action(path, exp):
    E = load_ensemble(path)
    spec = exp.corruption_spec(n=E.params.n)
    corrupted = E.corrupt(spec, exp.stream("corrupt", len(E.layers)))
    if exp.output_path:
        save_ensemble(corrupted, exp.output_path)
    else:
        write_output(ensemble_to_dict(corrupted))
    return corrupted


def agree_action(path, exp, t=None):
    E = load_ensemble(path)
    # the ensemble keeps its own t unless the caller names one
    if t is not None and not E.is_biased:
        E = E.with_params(t=t)
    if exp.exact:
        report = agreement_exact(E)
    else:
        report = agreement_estimate(
            E,
            dist=exp.pair_distribution() if E.is_biased else NuDistribution(E.params.t),
            samples=exp.samples["agree"],
            rng=exp.stream("agree"),
        )
    out = report.to_dict()
    out["params"] = E.params.to_dict()
    out["validation"] = E.params.validate(log=False)
    if E.params.d == 1 and not E.is_biased and E.params.t >= 1:
        prediction = seed_disagreement_prediction(report, E.params.t)
        out["seed_prediction"] = prediction
        if exp.exact:
            out["seed_measured"] = {
                "seed_empty": expected_seed_disagreement(E, 0, exact=True).value,
                "seed_point": expected_seed_disagreement(E, 1, exact=True).value,
            }
    write_output(out, exp.output_path)
    return out


def decode_action(path, exp, tie_seed=None):
    E = load_ensemble(path)
    if exp.exact:
        G = plurality_decode(E, exact=True, tie_seed=tie_seed)
        rate = disagreement_rate(E, G, exact=True, per_level=True)
    else:
        G = plurality_decode(
            E,
            exact=False,
            samples_per_set=exp.samples["decode_per_set"],
            rng=exp.stream("decode"),
            tie_seed=tie_seed,
        )
        rate = disagreement_rate(
            E,
            G,
            exact=False,
            samples=exp.samples["disagreement"],
            rng=exp.stream("disagreement"),
            per_level=True,
        )
    out = {"global_function": G.to_dict(), "disagreement": rate.to_dict()}
    params = E.params
    if not E.is_biased and params.t >= params.d:
        T = sample_k_subset(params.n, params.t - params.d, exp.stream("decode", "seed"))
        if exp.exact:
            g, diagnostics = restricted_decode(E, T, exact=True)
        else:
            g, diagnostics = restricted_decode(
                E,
                T,
                exact=False,
                pool_size=exp.samples["pool"],
                rng=exp.stream("decode", "pool"),
            )
        out["restricted"] = {
            "seed_set": list(T.members),
            "diagnostics": diagnostics.to_dict(),
            "agrees_with_plurality": None if g is None else g == G,
        }
    write_output(out, exp.output_path)
    return out


def _prune_mode(exp, H):
    if exp.prune["mode"] == "uniform":
        return UniformMode(H.n, exp.params.k)
    return BiasedMode(exp.prune["p"], H.n)


def prune_action(path, exp, text_out=None):
    """
    Prune a hypergraph file and report. Raises PropertyFailure when the
    result fails its branching check.
    """
    H = read_hypergraph(path)
    mode = _prune_mode(exp, H)
    epsilon = exp.prune["epsilon"]
    oracle = HitOracle(
        BiasedMode(mode.p, H.n), seed=exp.seed, samples=exp.samples["hit"], exact=exp.exact
    )
    if isinstance(mode, UniformMode):
        run = prune_uniform_run(H, H.n, mode.k, epsilon, c=exp.prune["c"], hit_oracle=oracle)
        pruned, rho = run.hypergraph, run.config.rho
    else:
        cfg = PruneConfig(c=exp.prune["c"], p=exp.prune["p"], epsilon=epsilon)
        pruned, rho = prune_biased(H, cfg, oracle), cfg.rho
    report = prune_report(
        H,
        pruned,
        mode,
        rho,
        epsilon=epsilon,
        seed=exp.seed,
        samples=exp.samples["unique_hit"],
        exact=exp.exact,
    )
    if text_out:
        write_hypergraph(pruned, text_out)
    out = report.to_dict()
    write_output(out, exp.output_path)
    if not report.branching_ok:
        raise PropertyFailure(
            "pruned hypergraph fails branching factor {}".format(rho), report=out
        )
    return out


def verify_action(path, exp):
    """
    Unique-hit probability of every edge of an (already pruned) hypergraph
    file. Raises PropertyFailure when an edge is below 1 - epsilon by more
    than three standard errors.
    """
    H = read_hypergraph(path)
    mode = _prune_mode(exp, H)
    epsilon = exp.prune["epsilon"]
    per_edge = []
    failing = []
    for index, e in enumerate(H.sorted_edges()):
        estimate = verify_unique_hit(
            H,
            e,
            mode,
            samples=exp.samples["unique_hit"],
            rng=exp.stream("verify", index),
            exact=exp.exact,
        )
        per_edge.append({"edge": list(e.members), **estimate.to_dict()})
        if estimate.value + 3 * estimate.sigma() < 1 - epsilon - 1e-12:
            failing.append(list(e.members))
    out = {
        "edges": len(H),
        "epsilon": epsilon,
        "mode": mode.to_dict(),
        "minimal_branching_factor": minimal_branching_factor(H),
        "min_unique_hit": min((e["value"] for e in per_edge), default=None),
        "failing": failing,
        "per_edge": per_edge,
    }
    write_output(out, exp.output_path)
    if failing:
        raise PropertyFailure(
            "{} edges below unique-hit 1 - {}".format(len(failing), epsilon), report=out
        )
    return out


def run_trial(exp, rate, n, trial, trial_seed):
    """
    One sweep row: corrupt at `rate`, measure agreement, decode by
    plurality and measure the disagreement of the decoded function.
    """
    base = exp.params
    k = max(int(round(base.k * n / base.n)), base.d)
    t = min(int(round(base.t * n / base.n)), k)
    params = TestParams(n=n, k=k, t=t, d=base.d, alphabet_size=base.alphabet_size)
    scaled = copy.copy(exp)
    scaled.corruption = dict(exp.corruption, rate=rate)
    E = build_ensemble(scaled, params=params, seed=trial_seed)
    report = agreement_estimate(
        E,
        dist=scaled.pair_distribution() if E.is_biased else NuDistribution(t),
        samples=exp.samples["agree"],
        rng=derive_stream(trial_seed, "agree"),
        breakdown=False,
    )
    G = plurality_decode(
        E,
        exact=False,
        samples_per_set=exp.samples["decode_per_set"],
        rng=derive_stream(trial_seed, "decode"),
    )
    rate_report = disagreement_rate(
        E,
        G,
        exact=False,
        samples=exp.samples["disagreement"],
        rng=derive_stream(trial_seed, "disagreement"),
    )
    return {
        "rate": rate,
        "n": n,
        "k": k,
        "t": t,
        "d": base.d,
        "epsilon_hat": report.epsilon_hat,
        "epsilon_ci": report.ci_halfwidth,
        "decode_disagreement": rate_report.value,
        "disagreement_ci": rate_report.ci_halfwidth,
        "seed": trial_seed,
    }


def fit_summary(rows):
    """
    Least-squares fit of decode_disagreement against epsilon_hat, per n.
    """
    summary = {}
    for n in sorted({row["n"] for row in rows}):
        xs = [row["epsilon_hat"] for row in rows if row["n"] == n]
        ys = [row["decode_disagreement"] for row in rows if row["n"] == n]
        try:
            summary[str(n)] = stats.linear_fit(xs, ys)
        except ParameterError as exc:
            summary[str(n)] = {"error": exc.message, "points": len(xs)}
    return summary


def sweep_action(exp, workers=None):
    job = SweepJob(exp, run_trial, workers=workers)
    rows = job.run()
    summary = {"fits": fit_summary(rows), "rows": len(rows)}
    for n, fit in summary["fits"].items():
        if "slope" in fit:
            logger.info(
                "n={}: slope {:.4f} +- {:.4f}, intercept {:.4f} +- {:.4f}".format(
                    n,
                    fit["slope"],
                    fit["slope_stderr"],
                    fit["intercept"],
                    fit["intercept_stderr"],
                )
            )
    if exp.output_path:
        # stdout carries the CSV otherwise
        sys.stdout.write(json.dumps(summary, sort_keys=True) + "\n")
        sys.stdout.flush()
    return rows, summary
