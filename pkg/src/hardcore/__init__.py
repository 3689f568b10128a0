"""Hardcore-model sampling on dense random graphs.

Library plus experiment CLI: Glauber dynamics with a stopping rule, randomized
greedy, the edge-resampling noise operator, normalized 2-Wasserstein
machinery, and brute-force oracles for every probabilistic claim.
"""

__version__ = "0.1.0"

from .errors import (
    BudgetExceededError,
    DegenerateNormalizationError,
    EmptyEventError,
    HardcoreError,
    SamplerQualityError,
)
from .graphs import (
    Graph,
    NoiseParams,
    VertexSet,
    d_j,
    ell_up_degree,
    expected_zk,
    expected_zk_log2,
    gen_gnp,
    induced_subgraph,
    is_independent,
    load_graph,
    max_independent_set_size,
    resample_noise,
    save_graph,
    up_degree,
)
from .measures import (
    ExactMeasure,
    SizeProfile,
    WindowParams,
    condition_on_size,
    enumerate_independent_sets,
    hardcore_measure,
    k_star,
    m2,
    m2_squared,
    mk_ratio_check,
    tv_distance,
)
from .samplers import (
    GlauberParams,
    RunRecord,
    SampleBatch,
    SamplerSpec,
    coupled_run,
    default_horizon,
    extend_uniform,
    glauber_run,
    greedy_run,
    sample_batch,
)
from .transport import (
    ChaosCertificate,
    TransportPlan,
    chaos_lower_bound,
    survival_probability,
    w2_empirical,
    w2_exact,
    w2_upper_from_coupling,
)
