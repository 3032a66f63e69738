"""
Estimates with confidence intervals and the small regression helper used
by the sweep.
"""

import math
from typing import NamedTuple

from scipy import stats

from agreetest.config import config
from agreetest.errors import ParameterError


class Estimate(NamedTuple):
    value: float
    ci_halfwidth: float
    samples: int
    exact: bool

    def to_dict(self):
        return {
            "value": self.value,
            "ci_halfwidth": self.ci_halfwidth,
            "samples": self.samples,
            "exact": self.exact,
        }

    def sigma(self):
        """
        Binomial standard error of the estimate (0 for exact values).
        """
        if self.exact or not self.samples:
            return 0.0
        v = self.value
        return math.sqrt(max(v * (1 - v), 0.0) / self.samples)


def z_score(level=None):
    level = config["CONFIDENCE_LEVEL"] if level is None else level
    return stats.norm.ppf(1 - (1 - level) / 2)


def wilson_interval(successes, trials, level=None):
    """
    Wilson score interval for a binomial proportion.

    Args:
        successes (int): number of hits
        trials (int): number of draws
        level (float): confidence level, CONFIDENCE_LEVEL by default

    Return:
        tuple: (lower, upper)
    """
    if trials <= 0:
        raise ParameterError("Wilson interval needs at least one trial")
    phat = successes / trials
    z = z_score(level)
    a = phat + z ** 2 / (2 * trials)
    b = math.sqrt(phat * (1 - phat) / trials + z ** 2 / (4 * trials ** 2))
    c = 1 + z ** 2 / trials
    lower = 0.0 if successes == 0 else max((a - z * b) / c, 0.0)
    upper = 1.0 if successes == trials else min((a + z * b) / c, 1.0)
    return lower, upper


def wilson_halfwidth(successes, trials, level=None):
    lower, upper = wilson_interval(successes, trials, level)
    return (upper - lower) / 2


def from_counts(successes, trials, level=None):
    return Estimate(
        value=successes / trials,
        ci_halfwidth=wilson_halfwidth(successes, trials, level),
        samples=int(trials),
        exact=False,
    )


def exact(value, samples=0):
    return Estimate(value=float(value), ci_halfwidth=0.0, samples=samples, exact=True)


def within_sigmas(estimate, expected, sigmas=3.0, floor=None):
    """
    True when the estimate lies within `sigmas` binomial standard errors of
    `expected`. The error is computed at the expected value, with `floor` as
    a minimal tolerance for expected values at 0 or 1.
    """
    if estimate.exact:
        return abs(estimate.value - expected) <= 1e-9
    n = estimate.samples
    sd = math.sqrt(max(expected * (1 - expected), 0.0) / n)
    tolerance = sigmas * sd
    if floor is None:
        floor = sigmas / n
    return abs(estimate.value - expected) <= max(tolerance, floor)


def linear_fit(x, y):
    """
    Least-squares line through (x, y).

    Return:
        dict: slope, intercept, their standard errors, r value and point count
    """
    if len(x) < 3:
        raise ParameterError("a linear fit needs at least 3 points, got {}".format(len(x)))
    if len(set(x)) < 2:
        raise ParameterError("a linear fit needs at least 2 distinct x values")
    result = stats.linregress(x, y)
    return {
        "slope": float(result.slope),
        "intercept": float(result.intercept),
        "slope_stderr": float(result.stderr),
        "intercept_stderr": float(result.intercept_stderr),
        "rvalue": float(result.rvalue),
        "points": len(x),
    }
