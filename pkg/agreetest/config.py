import os
from yaml import safe_load as yaml_load

from gen3config import Config

from cdislogging import get_logger

logger = get_logger(__name__)

DEFAULT_CFG_PATH = os.path.join(
    os.path.dirname(os.path.abspath(__file__)), "config-default.yaml"
)


def _default_config():
    with open(DEFAULT_CFG_PATH) as f:
        return yaml_load(f)


class AgreetestConfig(Config):
    def post_process(self):
        # a user config only needs to name what it changes, anything left null
        # falls back to config-default.yaml
        default_config = _default_config()

        defaults = [
            "DEBUG",
            "INCLUDE_EMPTY_SET",
            "MC_DEFAULT_SAMPLES",
            "MC_BATCH_SIZE",
            "CONFIDENCE_LEVEL",
            "HIT_EXACT_MAX_UNION_VERTICES",
            "HIT_EXACT_MAX_SPLIT_WORK",
            "HIT_EXACT_MAX_IE_EDGES",
            "HIT_EXACT_MAX_ENUMERATION",
            "HIT_ORACLE_MC_SAMPLES",
            "AGREEMENT_EXACT_MAX_PAIRS",
            "DECODE_EXACT_MAX_SETS",
            "DECODE_MC_SAMPLES_PER_SET",
            "RESTRICTED_POOL_SIZE",
            "RESTRICTED_ABORT_THRESHOLD",
            "PRUNE_SELECTION_RULE",
            "PRUNE_SHRINK_MAX",
            "PRUNE_P0_GUARD",
            "PRUNE_UNIFORM_C_START",
            "PRUNE_DEBUG_CHECKS",
            "PARAMETER_WARNINGS",
            "SWEEP_WORKERS",
            "EXPERIMENT",
        ]
        for default in defaults:
            self.force_default_if_none(default, default_cfg=default_config)

        # partial EXPERIMENT blocks are merged key by key into the defaults
        experiment = dict(default_config["EXPERIMENT"])
        for key, value in (self._configs.get("EXPERIMENT") or {}).items():
            if isinstance(value, dict) and isinstance(experiment.get(key), dict):
                merged = dict(experiment[key])
                merged.update({k: v for k, v in value.items() if v is not None})
                experiment[key] = merged
            elif value is not None:
                experiment[key] = value
        self._configs["EXPERIMENT"] = experiment

        level = self._configs.get("CONFIDENCE_LEVEL")
        if not 0 < level < 1:
            raise ValueError(
                "CONFIDENCE_LEVEL must lie in (0, 1), got {}".format(level)
            )

        if self._configs.get("RESTRICTED_ABORT_THRESHOLD") != 0.5:
            logger.warning(
                "RESTRICTED_ABORT_THRESHOLD is {}, not 1/2. Decoder diagnostics "
                "produced with this value are not valid for acceptance runs.".format(
                    self._configs.get("RESTRICTED_ABORT_THRESHOLD")
                )
            )


config = AgreetestConfig(DEFAULT_CFG_PATH)
# usable as a library before any user configuration is loaded
config.update(_default_config())
