"""Temporal text network toolkit.

Model human communication as a directed bipartite actor/message graph
with timed edges and message text, then analyze it through classical
views (contact sequences, time slices, memory graphs), discrete
multilayer projections with clique-percolation communities, or a
continuous composite distance with retrieval and k-medoids clustering.
"""

from .continuous import (
    ClusterResult,
    DistanceConfig,
    DistanceMatrix,
    cluster_kmedoids,
    distance_matrix,
    nearest,
    pairwise_distance,
    tokenize,
)
from .communities import (
    Community,
    EvolutionGraph,
    community_evolution,
    filter_communities,
    kclique_communities,
)
from .discrete import (
    KPartiteNetwork,
    LayerLabel,
    MultilayerActorNetwork,
    discretize,
    project,
    tag_messages,
    time_bins,
)
from .ingest import (
    merge_networks,
    parse_contact_csv,
    parse_event_stream,
    parse_tweet_records,
)
from .model import (
    ActorRole,
    CommType,
    Message,
    TemporalTextNetwork,
    Violation,
    extract_hashtags,
)
from .views import (
    Contact,
    MemoryGraph,
    TimeSlice,
    TimeSliceSeries,
    contact_sequence_view,
    memory_graph_view,
    time_slice_view,
)

__version__ = "0.1.0"

__all__ = [
    "ActorRole",
    "ClusterResult",
    "CommType",
    "Community",
    "Contact",
    "DistanceConfig",
    "DistanceMatrix",
    "EvolutionGraph",
    "KPartiteNetwork",
    "LayerLabel",
    "MemoryGraph",
    "Message",
    "MultilayerActorNetwork",
    "TemporalTextNetwork",
    "TimeSlice",
    "TimeSliceSeries",
    "Violation",
    "cluster_kmedoids",
    "community_evolution",
    "contact_sequence_view",
    "discretize",
    "distance_matrix",
    "extract_hashtags",
    "filter_communities",
    "kclique_communities",
    "memory_graph_view",
    "merge_networks",
    "nearest",
    "pairwise_distance",
    "parse_contact_csv",
    "parse_event_stream",
    "parse_tweet_records",
    "project",
    "tag_messages",
    "time_bins",
    "time_slice_view",
    "tokenize",
]
