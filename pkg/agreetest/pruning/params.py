from dataclasses import dataclass, replace
from typing import Optional

from agreetest.config import config
from agreetest.errors import ParameterError

SELECTION_RULES = ("max_hit", "first_eligible")


@dataclass(frozen=True)
class PruneConfig(object):
    """
    Args:
        c (float): branching budget numerator, the target branching factor is c/p
        p (float): bias of mu_p, or k/n in the uniform setting
        epsilon (float): unique-hit slack
        selection_rule (str): how critical_depth picks among its candidates
    """

    c: float
    p: float
    epsilon: float = 0.25
    selection_rule: Optional[str] = None

    def __post_init__(self):
        if not self.c > 0:
            raise ParameterError("c must be > 0, got {}".format(self.c))
        if not 0 < self.p < 1:
            raise ParameterError("p must lie in (0, 1), got {}".format(self.p))
        if not 0 < self.epsilon < 1:
            raise ParameterError(
                "epsilon must lie in (0, 1), got {}".format(self.epsilon)
            )
        if self.selection_rule is None:
            object.__setattr__(self, "selection_rule", config["PRUNE_SELECTION_RULE"])
        if self.selection_rule not in SELECTION_RULES:
            raise ParameterError(
                "selection_rule must be one of {}, got {}".format(
                    SELECTION_RULES, self.selection_rule
                )
            )

    @property
    def rho(self):
        return self.c / self.p

    def at_rho(self, rho):
        """
        Same config with the branching factor moved to rho.
        """
        return replace(self, c=rho * self.p)

    def to_dict(self):
        return {
            "c": self.c,
            "p": self.p,
            "epsilon": self.epsilon,
            "rho": self.rho,
            "selection_rule": self.selection_rule,
        }
