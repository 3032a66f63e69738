from agreetest.ensemble.functions import (
    GlobalFunction,
    LocalFunction,
    random_planted_sets,
)
from agreetest.ensemble.corruption import (
    FLIP_ENTRY,
    MODES,
    PLANTED_DISAGREEMENT,
    REPLACE_SET,
    CorruptionLayer,
    CorruptionSpec,
)
from agreetest.ensemble.local import (
    LocalEnsemble,
    corrupt,
    from_global,
    materialize_local,
)
from agreetest.ensemble.storage import (
    ensemble_from_dict,
    ensemble_to_dict,
    load_ensemble,
    load_global_function,
    save_ensemble,
    save_global_function,
)
