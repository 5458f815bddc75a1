"""Bernoulli convolution spectra: exact arithmetic, operators, verification."""

from bernspec.exact import (
    BernoulliParams,
    ChaosEstimate,
    MuHatValue,
    QuarterInt,
    chaos_game_estimate,
    in_zero_set,
    mu_hat,
    mu_hat_product,
    reduce_argument,
)
from bernspec.matrixlab import (
    BlockStatus,
    MatrixEntry,
    SparsityReport,
    TruncatedMatrix,
    analyze_w0_sparsity,
    u_entry,
    verify_block_diagonal,
    verify_block_equality,
    verify_commutation_even,
    verify_multiplication_identity,
    verify_odd_twisted_relations,
)
from bernspec.operators import (
    CoeffVector,
    ParsevalSum,
    expand_exponential,
    operator_column,
    parseval_partial,
    prepend_one,
    prepend_zero,
    strip_one,
    strip_zero,
    verify_cuntz_relations,
)
from bernspec.report import CheckReport
from bernspec.spectrum import (
    TILDE_ONE_POINT,
    TILDE_OTHER,
    Word,
    enumerate_spectrum,
    parse_word,
    scale_value,
    stratum_index,
    tilde_stratum_index,
    word_from_value,
    word_to_bits,
    word_value,
)

__version__ = "0.1.0"

__all__ = [
    "BernoulliParams",
    "BlockStatus",
    "ChaosEstimate",
    "CheckReport",
    "CoeffVector",
    "MatrixEntry",
    "MuHatValue",
    "ParsevalSum",
    "QuarterInt",
    "SparsityReport",
    "TILDE_ONE_POINT",
    "TILDE_OTHER",
    "TruncatedMatrix",
    "Word",
    "analyze_w0_sparsity",
    "chaos_game_estimate",
    "enumerate_spectrum",
    "expand_exponential",
    "in_zero_set",
    "mu_hat",
    "mu_hat_product",
    "operator_column",
    "parse_word",
    "parseval_partial",
    "prepend_one",
    "prepend_zero",
    "reduce_argument",
    "scale_value",
    "stratum_index",
    "strip_one",
    "strip_zero",
    "tilde_stratum_index",
    "u_entry",
    "verify_block_diagonal",
    "verify_block_equality",
    "verify_commutation_even",
    "verify_cuntz_relations",
    "verify_multiplication_identity",
    "verify_odd_twisted_relations",
    "word_from_value",
    "word_to_bits",
    "word_value",
]
