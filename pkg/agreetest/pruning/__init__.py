from agreetest.pruning.params import PruneConfig
from agreetest.pruning.critical import (
    CriticalDepthResult,
    HitOracle,
    critical_depth,
)
from agreetest.pruning.completion import complete_fill, complete_multi
from agreetest.pruning.unique_hit import (
    transfer_bounds,
    unique_hit_lower_bound,
    verify_unique_hit,
)
from agreetest.pruning.prune import (
    UniformPruneRun,
    gamma_clamped,
    prune_biased,
    prune_uniform,
    prune_uniform_run,
    shrink_start,
)
from agreetest.pruning.report import PruneReport, prune_report
