"""Strong-uniform fuzzy partitions of any dimension, their verification, and fuzzy histograms."""

from .config import AxisSpec, RunConfig, config_from_text, load_config
from .dsl import canonical_spec, compile_mf, evaluate, mf_from_spec, parse_mf, pretty
from .errors import (
    ConfigError,
    DimensionMismatch,
    DSLError,
    EmptyHistogram,
    IndexOutOfRange,
    InvalidAxis,
    InvalidMF,
    MFSyntaxError,
    OutOfUniverse,
    RuspiniError,
    UnknownIdentifier,
    UnsupportedDimension,
)
from .histogram import (
    CompensatedSum,
    CrispHistogram,
    Dataset,
    FuzzyHistogram,
    accumulate_crisp,
    accumulate_fuzzy,
    accumulate_fuzzy_chunked,
    compare_shifts,
    density_estimate,
    shift_sensitivity,
)
from .partition1d import (
    Axis,
    NormalizedMF,
    Partition1D,
    check_definition1,
    get_mf,
    membership_1d,
    mf_cosine,
    mf_triangular,
    normalize,
    register_mf,
    registry_names,
    validate_mf,
)
from .report import ConditionReport, ConditionResult
from .tensor import Bin, GridPartition, TensorPartition, build_tensor, corner_ids
from .variants import variant_f1, variant_f2, variant_mu, variant_partition
from .verifier import VerifyConfig, verify_definition1, verify_definition2, verify_partition

__version__ = "0.1.0"
