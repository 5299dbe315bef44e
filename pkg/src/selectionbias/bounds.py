"""Bounding factors for selection bias on the risk-ratio scale.

Every bound here caps the relative bias ``RR_obs / RR_true`` from above,
assuming the bias is >= 1. When the observed estimate sits below the
proposed true value, reverse the exposure coding first (see
:func:`relative_bias`) and read the A=1 parameters as belonging to the
originally unexposed group.

All quantities are interpreted within one stratum of whatever measured
covariates the analysis already conditions on.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from typing import Literal, Optional, Union

__all__ = [
    "ParameterError",
    "Scenario",
    "Direction",
    "Scale",
    "EffectEstimate",
    "General",
    "SEqualsU",
    "Directional",
    "SEqualsUDirectional",
    "SelectedPopulation",
    "ScenarioParams",
    "BoundingFactor",
    "joint_bound",
    "bounding_factor",
    "relative_bias",
    "adjust_estimate",
    "select_scenario",
]


class ParameterError(ValueError):
    """A sensitivity parameter or effect estimate is outside its domain."""


class Scenario(str, Enum):
    GENERAL = "general"
    S_EQUALS_U = "s-equals-u"
    DIRECTIONAL_INCREASED = "directional-increased"
    DIRECTIONAL_DECREASED = "directional-decreased"
    S_EQUALS_U_INCREASED = "s-equals-u-directional"
    S_EQUALS_U_DECREASED = "s-equals-u-directional-decreased"
    SELECTED = "selected"

    @property
    def target(self) -> str:
        """Population whose causal risk ratio the bound refers to."""
        return "selected" if self is Scenario.SELECTED else "total"


class Direction(str, Enum):
    """Direction of the selection-outcome association in both exposure groups."""

    INCREASED = "increased"
    DECREASED = "decreased"


class Scale(str, Enum):
    RISK_RATIO = "risk_ratio"
    ODDS_RATIO_APPROX = "odds_ratio_approx"
    HAZARD_RATIO_APPROX = "hazard_ratio_approx"


def _check_param(name: str, value: float) -> float:
    value = float(value)
    if math.isnan(value) or math.isinf(value):
        raise ParameterError(f"{name} must be a finite number >= 1, got {value}")
    if value < 1:
        raise ParameterError(
            f"{name} must be >= 1 (it is a max/min risk ratio), got {value}; "
            f"supply the reciprocal {1 / value:.6g} or recode the reference level"
            if value > 0
            else f"{name} must be >= 1 (it is a max/min risk ratio), got {value}"
        )
    return value


def _check_rr(name: str, value: float) -> float:
    value = float(value)
    if not (value > 0) or math.isinf(value):
        raise ParameterError(f"{name} must be a positive finite risk ratio, got {value}")
    return value


@dataclass(frozen=True)
class EffectEstimate:
    """Point estimate with optional confidence limits.

    ``upper`` may be ``math.inf`` for an interval reported as unbounded.
    """

    point: float
    lower: Optional[float] = None
    upper: Optional[float] = None
    scale: Scale = Scale.RISK_RATIO

    def __post_init__(self):
        object.__setattr__(self, "point", _check_rr("point", self.point))
        if self.lower is not None:
            object.__setattr__(self, "lower", _check_rr("lower", self.lower))
            if self.lower > self.point:
                raise ParameterError(
                    f"lower limit {self.lower} exceeds point estimate {self.point}"
                )
        if self.upper is not None:
            upper = float(self.upper)
            if upper != math.inf:
                upper = _check_rr("upper", upper)
            if upper < self.point:
                raise ParameterError(
                    f"upper limit {upper} is below point estimate {self.point}"
                )
            object.__setattr__(self, "upper", upper)
        object.__setattr__(self, "scale", Scale(self.scale))

    def scaled(self, factor: float) -> "EffectEstimate":
        """Divide the estimate and both limits by ``factor``; infinity stays put."""
        return EffectEstimate(
            self.point / factor,
            None if self.lower is None else self.lower / factor,
            None if self.upper is None else self.upper / factor,
            self.scale,
        )


# -- scenario parameter sets --------------------------------------------------


@dataclass(frozen=True)
class General:
    """Four parameters for the general scenario (no extra assumptions)."""

    rr_uy_a1: float
    rr_su_a1: float
    rr_uy_a0: float
    rr_su_a0: float

    def __post_init__(self):
        for name in ("rr_uy_a1", "rr_su_a1", "rr_uy_a0", "rr_su_a0"):
            object.__setattr__(self, name, _check_param(name, getattr(self, name)))

    @property
    def scenario(self) -> Scenario:
        return Scenario.GENERAL


@dataclass(frozen=True)
class SEqualsU:
    """The selection factor is shared by the whole selected population."""

    rr_uy_a1: float
    rr_uy_a0: float

    def __post_init__(self):
        for name in ("rr_uy_a1", "rr_uy_a0"):
            object.__setattr__(self, name, _check_param(name, getattr(self, name)))

    @property
    def scenario(self) -> Scenario:
        return Scenario.S_EQUALS_U


@dataclass(frozen=True)
class Directional:
    """Selection shifts outcome risk the same way in both exposure groups.

    ``rr_uy`` and ``rr_su`` are the A=1 parameters when risk is increased
    with selection and the A=0 parameters when it is decreased.
    """

    direction: Direction
    rr_uy: float
    rr_su: float

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))
        for name in ("rr_uy", "rr_su"):
            object.__setattr__(self, name, _check_param(name, getattr(self, name)))

    @property
    def scenario(self) -> Scenario:
        if self.direction is Direction.INCREASED:
            return Scenario.DIRECTIONAL_INCREASED
        return Scenario.DIRECTIONAL_DECREASED


@dataclass(frozen=True)
class SEqualsUDirectional:
    direction: Direction
    rr_uy: float

    def __post_init__(self):
        object.__setattr__(self, "direction", Direction(self.direction))
        object.__setattr__(self, "rr_uy", _check_param("rr_uy", self.rr_uy))

    @property
    def scenario(self) -> Scenario:
        if self.direction is Direction.INCREASED:
            return Scenario.S_EQUALS_U_INCREASED
        return Scenario.S_EQUALS_U_DECREASED


Association = Literal["exact", "approx_su", "approx_sa"]


@dataclass(frozen=True)
class SelectedPopulation:
    """Parameters for a causal risk ratio targeted at the selected population.

    ``association`` is the exposure-U association induced within S=1 when
    ``kind == "exact"``. The two approximate kinds substitute the maximum
    selection risk ratio across levels of U (``approx_su``) or across
    exposure levels (``approx_sa``); these are easier to elicit but the
    resulting bound is approximate rather than guaranteed.
    """

    rr_uy_s1: float
    association: float
    kind: Association = "exact"

    def __post_init__(self):
        if self.kind not in ("exact", "approx_su", "approx_sa"):
            raise ParameterError(f"unknown association kind {self.kind!r}")
        object.__setattr__(self, "rr_uy_s1", _check_param("rr_uy_s1", self.rr_uy_s1))
        name = "rr_au_s1" if self.kind == "exact" else self.kind
        object.__setattr__(self, "association", _check_param(name, self.association))

    @property
    def scenario(self) -> Scenario:
        return Scenario.SELECTED

    @property
    def approximate(self) -> bool:
        return self.kind != "exact"


ScenarioParams = Union[General, SEqualsU, Directional, SEqualsUDirectional, SelectedPopulation]


@dataclass(frozen=True)
class BoundingFactor:
    value: float
    scenario: Scenario
    params: ScenarioParams
    approximate: bool = False


# -- operations ---------------------------------------------------------------


def joint_bound(a: float, b: float) -> float:
    """Joint bounding kernel ``a*b / (a + b - 1)`` for two max risk ratios.

    The result lies in ``[1, min(a, b)]`` and collapses to 1 whenever
    either argument is 1.
    """
    a = _check_param("a", a)
    b = _check_param("b", b)
    # same as a*b / (a + b - 1); this form is exactly 1 when a or b is 1
    product = a * b
    return product / (product - (a - 1) * (b - 1))


def bounding_factor(params: ScenarioParams) -> BoundingFactor:
    """Upper bound on the relative bias for the scenario ``params`` describes.

    >>> round(bounding_factor(General(2, 1.7, 2, 1.5)).value, 2)
    1.51
    """
    if isinstance(params, General):
        value = joint_bound(params.rr_uy_a1, params.rr_su_a1) * joint_bound(
            params.rr_uy_a0, params.rr_su_a0
        )
    elif isinstance(params, SEqualsU):
        value = params.rr_uy_a1 * params.rr_uy_a0
    elif isinstance(params, Directional):
        value = joint_bound(params.rr_uy, params.rr_su)
    elif isinstance(params, SEqualsUDirectional):
        value = params.rr_uy
    elif isinstance(params, SelectedPopulation):
        value = joint_bound(params.rr_uy_s1, params.association)
        return BoundingFactor(value, params.scenario, params, params.approximate)
    else:
        raise TypeError(f"not a scenario parameter set: {params!r}")
    return BoundingFactor(value, params.scenario, params)


def relative_bias(observed: float, proposed_true: float) -> tuple[float, bool]:
    """Oriented relative bias between an observed and a proposed true RR.

    Returns ``(ratio, recoded)`` with ``ratio >= 1``. ``recoded`` is True when
    the observed value lies below the proposed truth, meaning the exposure
    coding must be reversed for the bounds to apply.
    """
    observed = _check_rr("observed", observed)
    proposed_true = _check_rr("proposed_true", proposed_true)
    if observed < proposed_true:
        return proposed_true / observed, True
    return observed / proposed_true, False


def adjust_estimate(estimate: EffectEstimate, bound: BoundingFactor) -> EffectEstimate:
    """Divide the worst-case bias out of an (oriented) estimate.

    Adjusted values are not truncated at the null; a result below 1 means the
    proposed bias could fully account for the observed association.
    """
    return estimate.scaled(bound.value)


def select_scenario(
    s_equals_u: bool,
    exposed: Optional[Direction] = None,
    unexposed: Optional[Direction] = None,
) -> Scenario:
    """Tightest total-population scenario justified by the stated assumptions.

    ``exposed`` and ``unexposed`` give the direction of the selection-outcome
    association in each exposure group, or None when unknown. Mixed
    directions (increased in one group, decreased in the other) have no
    tighter bound and fall back to the general or S=U scenario.
    """
    if exposed is not None and exposed == unexposed:
        direction = Direction(exposed)
        if s_equals_u:
            return (
                Scenario.S_EQUALS_U_INCREASED
                if direction is Direction.INCREASED
                else Scenario.S_EQUALS_U_DECREASED
            )
        return (
            Scenario.DIRECTIONAL_INCREASED
            if direction is Direction.INCREASED
            else Scenario.DIRECTIONAL_DECREASED
        )
    return Scenario.S_EQUALS_U if s_equals_u else Scenario.GENERAL
