"""bsnkit: co-evolution analytics for blogging social networks.

Two complementary pipelines over user trajectories (cumulative posts and
friends over time): an event-level view that clusters users by the
conditional structure of their publishing/social event sequences and models
each cluster as a Markov chain, and a shape-level view that classifies each
trajectory component by its fitted dynamics. A seeded synthetic generator
provides ground truth for validating every stage.
"""

from .collect import (
    CollectionReport,
    CollectorPolicy,
    RateLimiter,
    SimulatedClock,
    SystemClock,
    TransientFetchError,
    rate_limited_collect,
)
from .compare import (
    ArchetypeComparison,
    OverlapEdge,
    OverlapMatrix,
    archetype_table,
    overlap,
    restrict_to_top_macro,
    significant_edges,
)
from .events import (
    EVENT_KINDS,
    Event,
    EventKind,
    EventSequence,
    delay_rate,
    extract_events,
    signature,
    signature_distance,
)
from .macro import (
    DynamicsClass,
    DynamicsClassifier,
    MacroCluster,
    QuadFit,
    SqrtLawFit,
    SqrtLawModel,
    anticorrelated_share,
    build_macro_clusters,
    classify_dynamics,
    classify_trajectory,
    fit_component,
    macro_archetype,
    mean_trajectory,
    sqrt_law_fit,
)
from .micro import (
    MarkovModel,
    MicroCluster,
    SignatureKMedoids,
    cluster_micro,
    markov_model,
    micro_archetype,
    micro_archetype_distribution,
)
from .preprocessing import (
    FilterReport,
    PercentileTrajectoryFilter,
    percentile_filter,
)
from .simulate import (
    ArchetypeSpec,
    PopulationSample,
    PopulationSpec,
    generate_population,
    generate_sqrt_coupled,
    generate_user,
    generate_user_with_events,
    population_preset,
    sample_population,
)
from .storage import SnapshotFile, read_snapshots, write_snapshots
from .trajectory import (
    Archetype,
    RateSample,
    Snapshot,
    Trajectory,
    activity_rates,
    interpolate,
    pf_correlation,
    translate_to_origin,
    validate,
)

__version__ = "0.1.0"
