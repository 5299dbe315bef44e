"""Sensitivity analysis for selection bias on the risk-ratio scale.

Closed-form bounding factors and summary measures for several selection
scenarios, bound-based adjustment of estimates, and an exact-distribution
oracle that checks the bounds numerically.
"""

from .bounds import (
    BoundingFactor,
    Direction,
    Directional,
    EffectEstimate,
    General,
    ParameterError,
    Scale,
    Scenario,
    SEqualsU,
    SEqualsUDirectional,
    SelectedPopulation,
    adjust_estimate,
    bounding_factor,
    joint_bound,
    relative_bias,
    select_scenario,
)
from .summaries import (
    LimitChoice,
    SummaryMeasure,
    summary_directional,
    summary_for,
    summary_general,
    summary_s_equals_u,
    summary_s_equals_u_directional,
    summary_value,
)

__version__ = "0.1.0"
