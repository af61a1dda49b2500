"""Graph signal interpolation toolkit.

Reconstructs a signal known on a subset of nodes by positive-definite
graph-kernel interpolation, localized over community subdomains with a
partition of unity and blended into a global approximation.
"""

from . import errors
from .clustering import (
    Partition,
    filtered_feature_partition,
    greedy_modularity_partition,
    import_partition,
    kmeans,
    modularity,
    random_feature_matrix,
    save_partition,
    select_partition_by_modularity,
    spectral_embedding_partition,
)
from .gbf import (
    GBFSpec,
    Interpolant,
    SampleSet,
    gbf_interpolate,
    kernel_matrix,
    load_sample_set,
    save_sample_set,
    spline_fourier,
)
from .graph import (
    UNREACHABLE,
    Graph,
    LaplacianKind,
    build_graph,
    generate_geometric,
    generate_grid,
    hop_distances,
    induced_subgraph,
    laplacian,
    load_graph,
    save_graph,
)
from .harness import (
    ExperimentConfig,
    ReportRow,
    parse_config,
    rmae,
    rrmse,
    run_experiment,
    sample_nodes,
    write_report,
)
from .pum import (
    Cover,
    EmptySubdomainWarning,
    PartitionOfUnity,
    enlarge_cover,
    pou_weights,
    pum_interpolate,
)
from .spectral import (
    SpectralBasis,
    convolve,
    eigendecompose,
    fourier,
    inverse_fourier,
    leading_sum_signal,
    load_signal,
    save_signal,
)

__version__ = "0.1.0"

__all__ = [
    "errors",
    "UNREACHABLE",
    "Graph",
    "LaplacianKind",
    "build_graph",
    "laplacian",
    "hop_distances",
    "induced_subgraph",
    "generate_grid",
    "generate_geometric",
    "load_graph",
    "save_graph",
    "SpectralBasis",
    "eigendecompose",
    "fourier",
    "inverse_fourier",
    "convolve",
    "leading_sum_signal",
    "load_signal",
    "save_signal",
    "Partition",
    "modularity",
    "greedy_modularity_partition",
    "random_feature_matrix",
    "kmeans",
    "spectral_embedding_partition",
    "filtered_feature_partition",
    "select_partition_by_modularity",
    "import_partition",
    "save_partition",
    "GBFSpec",
    "SampleSet",
    "Interpolant",
    "spline_fourier",
    "kernel_matrix",
    "gbf_interpolate",
    "load_sample_set",
    "save_sample_set",
    "Cover",
    "PartitionOfUnity",
    "EmptySubdomainWarning",
    "enlarge_cover",
    "pou_weights",
    "pum_interpolate",
    "ExperimentConfig",
    "ReportRow",
    "sample_nodes",
    "rmae",
    "rrmse",
    "run_experiment",
    "write_report",
    "parse_config",
]
