"""streamsift: information-theoretic subsampling from labelled data streams.

A library and CLI for comparing acquisition objectives (MIC, EPIG, LA-EPIG,
RHO-LOSS, random) over pluggable stochastic predictive models, with
Table-style store strategies, cost accounting, a 2-d prioritisation-heatmap
demo and a seeded experiment harness.
"""

from .acquisition import (
    AcquisitionScore,
    OBJECTIVES,
    TargetSet,
    epig,
    epig_scores,
    la_epig,
    la_epig_scores,
    mic,
    mic_scores,
    predictive_ig,
    rho_loss,
    rho_loss_scores,
    score_pool,
)
from .demo import run_demo, two_bells_problem
from .errors import (
    ConfigError,
    DataFormatError,
    DegenerateEvidenceError,
    DomainError,
    FitError,
    GridLookupError,
    StreamsiftError,
    TrainingDivergedError,
    ValidationError,
)
from .harness import (
    ExperimentConfig,
    ExperimentResult,
    build_target_set,
    evaluate_accuracy,
    run_experiment,
    write_results,
)
from .models import (
    BootstrapForest,
    DirichletHistogramClassifier,
    DropoutMLP,
    FiniteHypothesisModel,
    LabelledExample,
    Model,
    PredictiveEnsemble,
    reweight_ensemble,
)
from .prob import (
    Categorical,
    JointCategorical,
    dirichlet_kl,
    entropy,
    kl_divergence,
    mutual_information,
)
from .store import (
    CostLedger,
    DataStore,
    STRATEGIES,
    apply_strategy,
    random_selector,
    replace_policy,
)
from .streams import (
    StreamSchedule,
    load_csv,
    load_idx,
    permuted_stream,
    save_csv,
    split_stream,
    stationary_stream,
    synth_blobs,
)

__version__ = "0.1.0"
