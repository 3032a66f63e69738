# pylint: disable=redefined-outer-name
"""
Define pytest fixtures.
"""

import copy
import os

import pytest

from agreetest import configure_logging
from agreetest.config import config
from agreetest.ensemble import GlobalFunction, from_global
from agreetest.hypergraph import Hypergraph
from agreetest.scripting.experiments import ExperimentConfig
from agreetest.sets import derive_stream

ROOT_DIR = os.path.dirname(os.path.realpath(__file__))


@pytest.fixture(scope="session", autouse=True)
def agreetest_config():
    """
    Load the test configuration on top of the defaults once per session.
    """
    config.load(config_path=os.path.join(ROOT_DIR, "test-agreetest-config.yaml"))
    configure_logging(debug=config["DEBUG"])
    return config


@pytest.fixture(scope="function")
def restore_config():
    """
    Restore original config at teardown.
    """
    saved_config = copy.deepcopy(config._configs)

    yield

    # restore old configs
    config.update(saved_config)


@pytest.fixture(scope="function")
def rng():
    return derive_stream(1234, "tests")


@pytest.fixture(scope="function")
def make_rng():
    def _make_rng(*names):
        return derive_stream(1234, "tests", *names)

    return _make_rng


@pytest.fixture(scope="session")
def star():
    """
    2-uniform star on 11 vertices: edges {0, i} for i = 1..10.
    """
    return Hypergraph(11, [(0, i) for i in range(1, 11)])


@pytest.fixture(scope="session")
def k4_pairs():
    return Hypergraph(4, [(a, b) for a in range(4) for b in range(a + 1, 4)])


@pytest.fixture(scope="session")
def small_global():
    """
    Random binary global function on [8] in dimension 1.
    """
    return GlobalFunction.random(8, 1, 2, derive_stream(99, "small_global"))


@pytest.fixture(scope="session")
def small_global_d2():
    return GlobalFunction.random(8, 2, 3, derive_stream(99, "small_global_d2"))


@pytest.fixture(scope="function")
def small_ensemble(small_global):
    """
    from_global ensemble of small_global on 4-sets, t = 2.
    """
    return from_global(small_global, 4, t=2)


@pytest.fixture
def make_experiment():
    """
    ExperimentConfig from the test EXPERIMENT block with some fields
    replaced, e.g. make_experiment(corruption={"rate": 0.0}, exact=True).
    """

    def _make_experiment(exact=None, out=None, samples=None, **changes):
        block = copy.deepcopy(config["EXPERIMENT"])
        for key, value in changes.items():
            if isinstance(value, dict):
                block[key] = dict(block.get(key) or {}, **value)
            else:
                block[key] = value
        return ExperimentConfig.from_config(
            block, samples=samples, out=out, exact=exact
        )

    return _make_experiment
