"""Uniform-sampling data reduction for k-median clustering.

The package answers one practical question: how few uniformly sampled
points suffice to solve k-median nearly optimally, and when does uniform
sampling fail?  It provides distance backends for Euclidean, graph and
explicit-matrix metrics, samplers with closed-form size calculators,
balancedness measurement, constrained and unconstrained local search,
desk-scale exact oracles, an importance-sampling coreset baseline,
adversarial instance generators, analysis-event diagnostics, and an
experiment harness with a CLI.
"""
from .core import (
    CenterSet,
    Clustering,
    Dataset,
    cluster,
    cost,
    dataset_balancedness,
    relative_error,
    solution_balancedness,
)
from .coreset import SensitivityProfile, build_coreset, sensitivities
from .diagnostics import (
    CostVectorDiag,
    GoodCenterReport,
    WeakCoresetReport,
    XiSReport,
    check_good_center,
    check_xi_s,
    cost_vectors,
    proof_factor,
    verify_weak_coreset,
)
from .errors import (
    BudgetExceededError,
    InfeasibleConstraintError,
    InvalidInputError,
    KmedsampleError,
    UndefinedErrorMeasure,
)
from .exact import ExactResult, brute_force_kmedian, dp_1d_kmedian
from .harness import (
    ExperimentSpec,
    TrialReport,
    materialize_dataset,
    run_balancedness,
    run_compare_coreset,
    run_experiment,
    run_lower_bound_mc,
    run_size_error,
    run_weak_coreset_mc,
    spec_from_dict,
)
from .instances import (
    InstanceDescriptor,
    from_descriptor,
    gen_gaussian_mixture,
    gen_graph_random,
    gen_lemma5,
    gen_thm3,
)
from .metric import (
    EuclideanBackend,
    GraphBackend,
    MatrixBackend,
    MetricBackend,
    distance,
    distance_to_set,
    load_edge_list,
    load_matrix_csv,
    load_points_csv,
)
from .sampling import (
    SampleSizeSpec,
    WeightedSample,
    load_sample_csv,
    sample_size,
    sample_size_raw,
    uniform_sample,
    write_sample_csv,
)
from .solvers import (
    LocalSearchConfig,
    LocalSearchResult,
    cluster_sample,
    dsample_init,
    local_search,
    sample_balancedness,
    weighted_cost,
)

__version__ = "0.1.0"
