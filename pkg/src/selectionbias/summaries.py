"""Summary measures: how strong selection would have to be to explain a result.

Each summary is the common value that every parameter of a scenario's
bounding factor must reach, when all are set equal, for selection bias
alone to move an observed risk ratio to the null (or to another proposed
true value).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Callable, Optional

from .bounds import EffectEstimate, ParameterError, Scenario, relative_bias

__all__ = [
    "LimitChoice",
    "SummaryMeasure",
    "summary_general",
    "summary_s_equals_u",
    "summary_directional",
    "summary_s_equals_u_directional",
    "summary_value",
    "summary_for",
]


class LimitChoice(str, Enum):
    POINT = "point"
    LOWER = "lower"
    UPPER = "upper"


def _check(rr: float) -> float:
    rr = float(rr)
    if math.isnan(rr) or rr < 1:
        raise ParameterError(
            f"summary measures need an oriented risk ratio >= 1, got {rr}; "
            "orient with relative_bias() first"
        )
    return rr


def summary_general(rr: float) -> float:
    """Common value of all four general-scenario parameters needed to reach ``rr``."""
    rr = _check(rr)
    root = math.sqrt(rr)
    return root + math.sqrt(rr - root)


def summary_s_equals_u(rr: float) -> float:
    return math.sqrt(_check(rr))


def summary_directional(rr: float) -> float:
    """E-value form ``rr + sqrt(rr * (rr - 1))``; also used for the selected population."""
    rr = _check(rr)
    return rr + math.sqrt(rr * (rr - 1))


def summary_s_equals_u_directional(rr: float) -> float:
    return _check(rr)


_FORMULAS: dict[Scenario, Callable[[float], float]] = {
    Scenario.GENERAL: summary_general,
    Scenario.S_EQUALS_U: summary_s_equals_u,
    Scenario.DIRECTIONAL_INCREASED: summary_directional,
    Scenario.DIRECTIONAL_DECREASED: summary_directional,
    Scenario.S_EQUALS_U_INCREASED: summary_s_equals_u_directional,
    Scenario.S_EQUALS_U_DECREASED: summary_s_equals_u_directional,
    Scenario.SELECTED: summary_directional,
}


def summary_value(scenario: Scenario, rr: float) -> float:
    """Dispatch to the scenario's summary formula for an oriented ``rr >= 1``."""
    return _FORMULAS[Scenario(scenario)](rr)


@dataclass(frozen=True)
class SummaryMeasure:
    value: float
    scenario: Scenario
    input_rr: float
    target: Optional[float]
    applied_to: LimitChoice
    recoded: bool
    # True when the chosen confidence limit already reaches the target
    crosses_target: bool = False


def summary_for(
    scenario: Scenario,
    estimate: EffectEstimate,
    target: Optional[float] = None,
    limit: LimitChoice = LimitChoice.POINT,
) -> SummaryMeasure:
    """Summary measure for one value of ``estimate`` against ``target``.

    ``target=None`` means the null. For a confidence limit that already lies
    on the far side of the target (relative to the point estimate), the
    interval contains the target and the summary is 1.
    """
    scenario = Scenario(scenario)
    limit = LimitChoice(limit)
    reference = 1.0 if target is None else float(target)

    if limit is LimitChoice.POINT:
        value = estimate.point
    else:
        value = getattr(estimate, limit.value)
        if value is None:
            raise ParameterError(f"estimate has no {limit.value} confidence limit")

    if limit is not LimitChoice.POINT:
        point_above = estimate.point >= reference
        if value <= reference if point_above else value >= reference:
            # interval already includes the target
            _, recoded = relative_bias(estimate.point, reference)
            return SummaryMeasure(1.0, scenario, 1.0, target, limit, recoded, True)
        if value == math.inf:
            return SummaryMeasure(math.inf, scenario, math.inf, target, limit, False)

    ratio, recoded = relative_bias(value, reference)
    return SummaryMeasure(
        summary_value(scenario, ratio), scenario, ratio, target, limit, recoded
    )
