"""desbal: dynamic classifier/ensemble selection with rebalanced competence
regions for multi-class imbalanced classification."""

__version__ = "0.1.0"

from .data import (
    AttributeSpec,
    DataFormatError,
    Dataset,
    ImbalanceProfile,
    ScalingParams,
    SplitPlan,
    encode_nominals,
    parse_csv,
    parse_keel,
    standardize,
    stratified_5x2,
)
from .metrics import METRIC_NAMES, auc_multiclass, f_measure_weighted, g_mean
from .pool import DselSet, Pool, build_dsel, generate_pool, load_pool, save_pool
from .resampling import (
    RamoConfig,
    SyntheticBatch,
    VARIANTS,
    apply_multiclass,
    ramo,
    ramo_weights,
    random_balance,
    rus,
    smote,
)
from .selection import (
    DesKnnConfig,
    McbConfig,
    RegionOfCompetence,
    SELECTOR_NAMES,
    SelectionContext,
    SelectionResult,
    SelectorConfig,
    dfp_prune,
    profile_similarity,
    region_of_competence,
    run_selector,
    select_desknn,
    select_desp,
    select_desrrc,
    select_fire,
    select_kne,
    select_knu,
    select_lca,
    select_mcb,
    select_metades,
    select_rank,
    static_majority_vote,
    train_meta_classifier,
)
from .stats import RankTable, average_ranks, finner_stepdown, sign_test
from .tree import DecisionTree, TreeConfig, fit_tree
