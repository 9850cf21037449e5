"""Exact value-of-information interaction analysis for finite decision problems."""
from .bayes import marginal, posterior_family, product_channel
from .interaction import (
    InteractionReport,
    bregman_divergence_h,
    delta_voi,
    g_value,
    shift_rewards,
    voi,
)
from .localization import LocalizationVerdict, TheoremViolation, classify, decision_irrelevant
from .model import (
    Belief,
    Channel,
    DecisionProblem,
    ProblemInstance,
    ValidationError,
    load_instance,
    make_belief,
    paper_instance,
    parse_belief,
    parse_instance,
    parse_rational,
    serialize_instance,
)
from .value import (
    ValueResult,
    expected_posterior_value,
    regret,
    same_region,
    unnorm_posterior_value,
    value,
)

__version__ = "0.1.0"
