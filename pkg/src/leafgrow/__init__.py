"""Growth of time-ordered rooted trees by probabilistic leaf attachment."""

from leafgrow.errors import (
    AttachmentError,
    DegenerateEvidenceError,
    LeafgrowError,
    ZeroBranchError,
)
from leafgrow.tree import Tree, Vertex, attachment_weights, new_tree, path_attachments
from leafgrow.inference import (
    LeafDistribution,
    LikelihoodVector,
    global_likelihood,
    local_likelihood,
    mixture,
    oscillating_q,
    posterior,
    uniform_prior,
)
from leafgrow.branching import (
    SharpenSpec,
    branch_leaf_distribution,
    branch_weights,
    cumulative_in_degree,
    sharpen,
    unit_weights,
    weighted_in_degree,
)
from leafgrow.growth import (
    FrameRecord,
    GrowthConfig,
    OscillatingQ,
    Policy,
    Trajectory,
    draw_batch_size,
    policy_distribution,
    run,
    sample_targets,
)
from leafgrow.analysis import (
    EnsembleSummary,
    PathReport,
    ensemble,
    highlighted_path,
    longest_path,
    max_posterior_path,
)

__version__ = "0.1.0"

__all__ = [
    "AttachmentError",
    "DegenerateEvidenceError",
    "EnsembleSummary",
    "FrameRecord",
    "GrowthConfig",
    "LeafDistribution",
    "LeafgrowError",
    "LikelihoodVector",
    "OscillatingQ",
    "PathReport",
    "Policy",
    "SharpenSpec",
    "Trajectory",
    "Tree",
    "Vertex",
    "ZeroBranchError",
    "attachment_weights",
    "branch_leaf_distribution",
    "branch_weights",
    "cumulative_in_degree",
    "draw_batch_size",
    "ensemble",
    "global_likelihood",
    "highlighted_path",
    "local_likelihood",
    "longest_path",
    "max_posterior_path",
    "mixture",
    "new_tree",
    "oscillating_q",
    "path_attachments",
    "policy_distribution",
    "posterior",
    "run",
    "sample_targets",
    "sharpen",
    "uniform_prior",
    "unit_weights",
    "weighted_in_degree",
]
