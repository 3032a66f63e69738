from agreetest.agreement.check import agree_check, disagreement_set
from agreetest.agreement.estimate import (
    AgreementReport,
    MuDistribution,
    NuDistribution,
    agreement_estimate,
    agreement_exact,
    conditional_disagreement,
)
from agreetest.agreement.diagnostics import (
    expected_seed_disagreement,
    seed_disagreement_prediction,
)
