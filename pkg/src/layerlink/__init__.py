"""Privacy-preserving record linkage with layered, per-pair escalation.

Two data owners encode their records as Bloom filters under a shared
secret; a linkage unit classifies candidate pairs by record-level
similarity, escalates only uncertain pairs to pair-keyed attribute
encodings, and sends the stubbornly uncertain remainder to masked
clerical review.  Labels flow back upward to retrain the cheaper
layers, and every disclosure beyond the record level is logged.
"""

from .encoding import (
    ATTRIBUTES,
    EncodedRecord,
    EncodingParams,
    FrequencyTable,
    KeyedAttributeEncoding,
    PlainRecord,
    RecordEncoder,
    encode_clk,
    encode_keyed_attributes,
    encode_shared_attributes,
    soundex,
)
from .matching import (
    BASELINE_WEIGHTS,
    AttributeComparison,
    CandidatePair,
    Layer,
    Prediction,
    block_candidates,
    compare_attributes,
    dice,
    weighted_mean_similarity,
)
from .models import (
    EvolvingForest,
    ForestConfig,
    LabeledInstance,
    ThresholdClassifier,
)
from .review import (
    MaskedAttribute,
    ReviewSession,
    ReviewTask,
    SelectionStrategy,
    SimulatedOracle,
    build_mask,
    build_view,
    select_attributes,
)
from .privacy import (
    DisclosedRecord,
    DisclosureEntry,
    DisclosureLedger,
    availability_stats,
    bit_frequencies,
    gini,
    jsd,
    kapr,
)
from .data import DatasetSpec, generate_dataset, load_records, load_truth
from .evaluate import Metrics, evaluate, find_optimal_threshold
from .protocol import (
    DataOwner,
    DisclosurePolicy,
    LinkageBase,
    ProtocolConfig,
    ProtocolEngine,
    RunResult,
    prepare_base,
    random_policy,
    run_protocol,
    select_uncertain_batch,
)
from .experiment import (
    MatrixSpec,
    RunConfig,
    load_config,
    run_baseline,
    run_link,
    run_matrix,
    run_privacy_report,
)

__version__ = "0.1.0"

__all__ = [
    "ATTRIBUTES",
    "AttributeComparison",
    "BASELINE_WEIGHTS",
    "CandidatePair",
    "DataOwner",
    "DatasetSpec",
    "DisclosedRecord",
    "DisclosureEntry",
    "DisclosureLedger",
    "DisclosurePolicy",
    "EncodedRecord",
    "EncodingParams",
    "EvolvingForest",
    "ForestConfig",
    "FrequencyTable",
    "KeyedAttributeEncoding",
    "LabeledInstance",
    "Layer",
    "LinkageBase",
    "MaskedAttribute",
    "MatrixSpec",
    "Metrics",
    "PlainRecord",
    "Prediction",
    "ProtocolConfig",
    "ProtocolEngine",
    "RecordEncoder",
    "ReviewSession",
    "ReviewTask",
    "RunConfig",
    "RunResult",
    "SelectionStrategy",
    "SimulatedOracle",
    "ThresholdClassifier",
    "availability_stats",
    "bit_frequencies",
    "block_candidates",
    "build_mask",
    "build_view",
    "compare_attributes",
    "dice",
    "encode_clk",
    "encode_keyed_attributes",
    "encode_shared_attributes",
    "evaluate",
    "find_optimal_threshold",
    "generate_dataset",
    "gini",
    "jsd",
    "kapr",
    "load_config",
    "load_records",
    "load_truth",
    "prepare_base",
    "random_policy",
    "run_baseline",
    "run_link",
    "run_matrix",
    "run_privacy_report",
    "run_protocol",
    "select_attributes",
    "select_uncertain_batch",
    "soundex",
    "weighted_mean_similarity",
]
