"""Rank friend profiles by attribute, mutual-friend and string similarity."""

from .errors import GraphError, ParseError, ProfsimError, SchemaError, WeightingError
from .model import (
    Attribute,
    AttributeKind,
    AttributeSchema,
    Profile,
    SocialGraph,
    mutual_communities,
    mutual_friends,
)
from .scoring import (
    Decision,
    Mode,
    Rounding,
    ScoringConfig,
    SimilarityReport,
    attribute_similarity,
    decide,
    matching_threshold,
    new_similarity_score,
    rank_candidates,
    raw_profile_similarity,
)
from .string_metrics import (
    cosine_similarity,
    edit_distance_similarity,
    jaro_similarity,
    levenshtein_distance,
)
from .weighting import (
    MutualMode,
    WeightConfig,
    WeightVector,
    assign_binary_weights,
    mutual_community_weight,
    mutual_friend_weight,
    total_weight,
)

__version__ = "0.1.0"
