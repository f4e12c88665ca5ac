"""Covering dense regular graphs by few vertex-disjoint paths and cycles.

The library realizes, at desk scale, a constructive route from regular
partitions and half-integral matchings to cycle covers, and from there via a
random reservoir to path covers, alongside exact brute-force oracles that
cross-check every component.
"""

from .graph import (
    Graph,
    GraphFormatError,
    VertexSet,
    complement,
    degree_into,
    density,
    induced_subgraph,
    read_graph,
    write_graph,
)
from .generators import (
    GenSpec,
    RetryExhausted,
    degree_from_ratio,
    extremal_family,
    generate,
    random_bipartite_regular,
    random_regular,
)
from .regularity import (
    CleaningFailed,
    ClusterGraph,
    Partition,
    RegularityVerdict,
    RegularityWitness,
    build_cluster_graph,
    clean_super_regular,
    equitable_partition,
    is_eps_regular,
)
from .matching import (
    HalfIntegralMatching,
    SizeLimitError,
    cluster_matching_pairs,
    fractional_matching,
    max_deficiency,
)
from .hamilton import (
    Cycle,
    CycleSearch,
    Path,
    PathSearch,
    cycle_to_path,
    hamiltonian_path,
    longest_cycle,
    longest_path,
    spanning_cycle_bipartite,
)
from .pipeline import (
    CoverCheck,
    CycleSet,
    DegenerateParameterError,
    PathCover,
    PipelineConfig,
    ReservoirError,
    RunReport,
    chernoff_lower,
    chernoff_upper,
    connect_paths,
    cycle_cover,
    path_cover,
    path_cover_bipartite,
    paths_limit,
    paths_limit_bipartite,
    reservoir,
    verify_cover,
)
from .oracle import (
    ExactCoverResult,
    binomial_tail_exact,
    conjecture_spot_check,
    cube_graph,
    independence_number,
    min_path_cover_exact,
    petersen_graph,
)

__version__ = "0.1.0"
