from agreetest.decode.plurality import most_popular, plurality_decode
from agreetest.decode.restricted import DecoderDiagnostics, restricted_decode
from agreetest.decode.disagreement import (
    DisagreementReport,
    disagreement_rate,
    seed_pair_disagreement,
)
