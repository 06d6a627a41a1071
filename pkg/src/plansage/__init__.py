"""plansage: content-based health insurance plan recommendations.

Encode a plan catalog and a user's stated preferences into comparable
feature vectors, score them with cosine similarity or Euclidean-distance
KNN, pre-filter by location and affordability tier, and rerank the top
pool by HMO rating to produce up to three recommendations.
"""

from .catalog import (
    CATALOG_COLUMNS,
    RATINGS_COLUMNS,
    SERVICE_FEATURES,
    CoverageRegion,
    PlanRecord,
    RatingRecord,
    UserLocation,
    UserPreference,
    WardType,
    load_catalog,
    load_ratings,
    scan_catalog,
    scan_ratings,
    write_catalog,
    write_ratings,
)
from .compare import AgreementReport, generate_preferences, run_comparison
from .encoding import (
    DEFAULT_SCHEMA,
    ENCODER_VERSION,
    SLOT_NAMES,
    VECTOR_DIM,
    EncodingSchema,
    FeatureVector,
    PlanEncoder,
    encode_plan,
    encode_preference,
)
from .errors import (
    ConfigError,
    EmptyCatalogError,
    EmptyPreferenceError,
    FieldError,
    MalformedFileError,
    NoCandidatesError,
    PlansageError,
    RowViolation,
    SchemaMismatchError,
    SchemaViolationError,
    ValidationFailure,
    ZeroVectorError,
)
from .recommend import (
    DEFAULT_POOL_SIZE,
    PlanRecommender,
    Recommendation,
    RecommendationRequest,
    matched_features,
    prefilter,
    recommend,
    rerank_by_rating,
)
from .similarity import (
    Metric,
    ScoredCandidate,
    cosine_similarity,
    euclidean_distance,
    rank_candidates,
)
from .snapshot import Snapshot, SnapshotStore

__version__ = "0.1.0"

__all__ = [
    "AgreementReport",
    "CATALOG_COLUMNS",
    "ConfigError",
    "CoverageRegion",
    "DEFAULT_POOL_SIZE",
    "DEFAULT_SCHEMA",
    "ENCODER_VERSION",
    "EmptyCatalogError",
    "EmptyPreferenceError",
    "EncodingSchema",
    "FeatureVector",
    "FieldError",
    "MalformedFileError",
    "Metric",
    "NoCandidatesError",
    "PlanEncoder",
    "PlanRecord",
    "PlanRecommender",
    "PlansageError",
    "RATINGS_COLUMNS",
    "RatingRecord",
    "Recommendation",
    "RecommendationRequest",
    "RowViolation",
    "SERVICE_FEATURES",
    "SLOT_NAMES",
    "SchemaMismatchError",
    "SchemaViolationError",
    "ScoredCandidate",
    "Snapshot",
    "SnapshotStore",
    "UserLocation",
    "UserPreference",
    "VECTOR_DIM",
    "ValidationFailure",
    "WardType",
    "ZeroVectorError",
    "cosine_similarity",
    "encode_plan",
    "encode_preference",
    "euclidean_distance",
    "generate_preferences",
    "load_catalog",
    "load_ratings",
    "matched_features",
    "prefilter",
    "rank_candidates",
    "recommend",
    "rerank_by_rating",
    "run_comparison",
    "scan_catalog",
    "scan_ratings",
    "write_catalog",
    "write_ratings",
    "__version__",
]
