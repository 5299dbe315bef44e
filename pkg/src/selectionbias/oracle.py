"""Brute-force verification of the bounding factors on exact distributions.

A :class:`JointDistribution` stores a categorical U with ``k`` levels through
three ``(2, k)`` tables indexed ``[a, u]``: the joint ``P(A=a, U=u)``,
``P(S=1 | a, u)`` and ``P(Y=1 | a, u)``. Because the outcome table does not
depend on S, ``Y ⊥ S | {A, U}`` holds by construction, and conditional risks
given (a, u) are read as causal, so no confounding beyond U exists.

The tables may carry extra leading axes; every function below broadcasts
over them, which is how the batch verifier stays fast.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .bounds import (
    Direction,
    Directional,
    General,
    Scenario,
    ScenarioParams,
    SEqualsU,
    SEqualsUDirectional,
    SelectedPopulation,
    bounding_factor,
)

__all__ = [
    "EPS",
    "RTOL",
    "JointDistribution",
    "OracleReport",
    "BoundCheck",
    "sample_joint",
    "sample_batch",
    "observed_rr",
    "true_rr_total",
    "true_rr_total_direct",
    "true_rr_selected",
    "selection_outcome_ratios",
    "realized_params",
    "verify_bound",
    "run_verification",
    "tightness_search",
]

EPS = 1e-9
RTOL = 1e-9
_LOGIT_MAX = math.log((1 - EPS) / EPS)


@dataclass(frozen=True)
class JointDistribution:
    p_au: np.ndarray
    p_s_given_au: np.ndarray
    p_y_given_au: np.ndarray

    @property
    def k(self) -> int:
        return self.p_au.shape[-1]

    @property
    def batch_shape(self) -> tuple[int, ...]:
        return self.p_au.shape[:-2]

    def __len__(self) -> int:
        if not self.batch_shape:
            raise TypeError("single distribution has no length")
        return self.batch_shape[0]

    def __getitem__(self, idx) -> "JointDistribution":
        return JointDistribution(self.p_au[idx], self.p_s_given_au[idx], self.p_y_given_au[idx])

    def recoded(self) -> "JointDistribution":
        """Same distribution with the exposure coding reversed."""
        return JointDistribution(
            self.p_au[..., ::-1, :], self.p_s_given_au[..., ::-1, :], self.p_y_given_au[..., ::-1, :]
        )

    def validate(self, eps: float = EPS) -> None:
        """Raise ValueError unless positivity and normalisation hold."""
        for name in ("p_au", "p_s_given_au", "p_y_given_au"):
            table = getattr(self, name)
            if table.shape[-2:] != (2, self.k) or self.k < 2:
                raise ValueError(f"{name} has shape {table.shape}, expected (..., 2, k>=2)")
            if not np.all((table >= eps) & (table <= 1 - eps)):
                raise ValueError(f"{name} has entries outside [{eps}, 1 - {eps}]")
        total = self.p_au.sum(axis=(-2, -1))
        if not np.all(np.abs(total - 1) <= 1e-12):
            raise ValueError("p_au does not sum to 1")

    def to_dict(self) -> dict:
        return {
            "k": self.k,
            "p_au": self.p_au.tolist(),
            "p_s_given_au": self.p_s_given_au.tolist(),
            "p_y_given_au": self.p_y_given_au.tolist(),
        }

    @classmethod
    def from_dict(cls, data: dict) -> "JointDistribution":
        d = cls(*(np.asarray(data[key], dtype=float) for key in ("p_au", "p_s_given_au", "p_y_given_au")))
        d.validate()
        return d

    @classmethod
    def stack(cls, items: list["JointDistribution"]) -> "JointDistribution":
        return cls(
            np.stack([d.p_au for d in items]),
            np.stack([d.p_s_given_au for d in items]),
            np.stack([d.p_y_given_au for d in items]),
        )


# -- sampling -----------------------------------------------------------------


def _draw(rng: np.random.Generator, k: int, s_equals_u: bool):
    weights = rng.exponential(size=(2, k))
    p_au = EPS + (1 - 2 * k * EPS) * weights / weights.sum()
    p_y = EPS + (1 - 2 * EPS) * rng.random((2, k))
    if s_equals_u:
        p_s = np.array([[EPS, 1 - EPS], [EPS, 1 - EPS]])
    else:
        p_s = EPS + (1 - 2 * EPS) * rng.random((2, k))
    return p_au, p_s, p_y


def sample_joint(k: int, seed, s_equals_u: bool = False) -> JointDistribution:
    """Draw one random distribution with full support.

    ``p_au`` is a flat Dirichlet draw and every conditional probability is
    uniform on ``(EPS, 1 - EPS)``. With ``s_equals_u`` the level of a binary
    U determines selection up to ``EPS`` (``u=1`` selected), standing in for
    the case where the selection factor is selection itself.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if s_equals_u and k != 2:
        raise ValueError("s_equals_u sampling needs a binary U (k=2)")
    return JointDistribution(*_draw(np.random.default_rng(seed), k, s_equals_u))


def sample_batch(
    k: int, seed: int, start: int, stop: int, s_equals_u: bool = False
) -> JointDistribution:
    """Samples ``start..stop-1`` of the stream identified by ``seed``.

    Sample ``i`` always comes from its own substream ``(seed, i)``, so any
    partition of the index range yields the same distributions.
    """
    if k < 2:
        raise ValueError(f"k must be >= 2, got {k}")
    if s_equals_u and k != 2:
        raise ValueError("s_equals_u sampling needs a binary U (k=2)")
    n = stop - start
    p_au = np.empty((n, 2, k))
    p_s = np.empty((n, 2, k))
    p_y = np.empty((n, 2, k))
    for j, i in enumerate(range(start, stop)):
        rng = np.random.default_rng(np.random.SeedSequence(seed, spawn_key=(i,)))
        p_au[j], p_s[j], p_y[j] = _draw(rng, k, s_equals_u)
    return JointDistribution(p_au, p_s, p_y)


# -- exact marginalisation ----------------------------------------------------


def _selected_weights(d: JointDistribution):
    """P(A=a, U=u, S=1) and P(A=a, U=u, S=0)."""
    return d.p_au * d.p_s_given_au, d.p_au * (1 - d.p_s_given_au)


def _risk_given_selection(d: JointDistribution):
    """P(Y=1 | A=a, S=s) for s = 1 and s = 0, each shaped (..., 2)."""
    w1, w0 = _selected_weights(d)
    py = d.p_y_given_au
    return (py * w1).sum(-1) / w1.sum(-1), (py * w0).sum(-1) / w0.sum(-1)


def observed_rr(d: JointDistribution):
    """``P(Y=1 | A=1, S=1) / P(Y=1 | A=0, S=1)``."""
    risk1, _ = _risk_given_selection(d)
    return risk1[..., 1] / risk1[..., 0]


def true_rr_total(d: JointDistribution):
    """Total-population causal RR by standardising over S and U within each exposure level."""
    w1, w0 = _selected_weights(d)
    py = d.p_y_given_au
    p_a = d.p_au.sum(-1)
    risk = np.zeros(p_a.shape)
    for w in (w1, w0):
        p_as = w.sum(-1)
        p_u_given_as = w / p_as[..., None]
        risk = risk + (py * p_u_given_as).sum(-1) * (p_as / p_a)
    return risk[..., 1] / risk[..., 0]


def true_rr_total_direct(d: JointDistribution):
    """Same quantity as :func:`true_rr_total`, marginalising U directly."""
    p_u_given_a = d.p_au / d.p_au.sum(-1, keepdims=True)
    risk = (d.p_y_given_au * p_u_given_a).sum(-1)
    return risk[..., 1] / risk[..., 0]


def true_rr_selected(d: JointDistribution):
    """Causal RR in the selected population, standardised to ``P(U | S=1)``."""
    w1, _ = _selected_weights(d)
    p_u_given_s1 = w1.sum(-2) / w1.sum((-2, -1))[..., None]
    risk = (d.p_y_given_au * p_u_given_s1[..., None, :]).sum(-1)
    return risk[..., 1] / risk[..., 0]


def selection_outcome_ratios(d: JointDistribution):
    """``P(Y=1 | a, S=1) / P(Y=1 | a, S=0)`` for a = 0, 1, shaped (..., 2)."""
    risk1, risk0 = _risk_given_selection(d)
    return risk1 / risk0


def _direction(d: JointDistribution):
    """+1 where selection raises risk in both exposure groups, -1 where it lowers it in both, else 0."""
    ratios = selection_outcome_ratios(d)
    up = np.all(ratios > 1, axis=-1)
    down = np.all(ratios < 1, axis=-1)
    return np.where(up, 1, np.where(down, -1, 0))


def _param_arrays(d: JointDistribution) -> dict[str, np.ndarray]:
    py = d.p_y_given_au
    w1, w0 = _selected_weights(d)
    q1 = w1 / w1.sum(-1, keepdims=True)  # P(u | a, S=1)
    q0 = w0 / w0.sum(-1, keepdims=True)  # P(u | a, S=0)
    rr_uy = py.max(-1) / py.min(-1)
    # max ratio of two distributions over u is >= 1 exactly; rounding can dip below
    return {
        "rr_uy_a1": rr_uy[..., 1],
        "rr_uy_a0": rr_uy[..., 0],
        "rr_su_a1": np.maximum((q1[..., 1, :] / q0[..., 1, :]).max(-1), 1.0),
        "rr_su_a0": np.maximum((q0[..., 0, :] / q1[..., 0, :]).max(-1), 1.0),
        "rr_uy_s1": rr_uy.max(-1),
        "rr_au_s1": np.maximum(q1[..., 1, :].max(-1) / q1[..., 0, :].min(-1), 1.0),
    }


def _params_from(values: dict[str, float], scenario: Scenario) -> ScenarioParams:
    if scenario is Scenario.GENERAL:
        return General(values["rr_uy_a1"], values["rr_su_a1"], values["rr_uy_a0"], values["rr_su_a0"])
    if scenario is Scenario.S_EQUALS_U:
        return SEqualsU(values["rr_uy_a1"], values["rr_uy_a0"])
    if scenario is Scenario.DIRECTIONAL_INCREASED:
        return Directional(Direction.INCREASED, values["rr_uy_a1"], values["rr_su_a1"])
    if scenario is Scenario.DIRECTIONAL_DECREASED:
        return Directional(Direction.DECREASED, values["rr_uy_a0"], values["rr_su_a0"])
    if scenario is Scenario.S_EQUALS_U_INCREASED:
        return SEqualsUDirectional(Direction.INCREASED, values["rr_uy_a1"])
    if scenario is Scenario.S_EQUALS_U_DECREASED:
        return SEqualsUDirectional(Direction.DECREASED, values["rr_uy_a0"])
    return SelectedPopulation(values["rr_uy_s1"], values["rr_au_s1"])


def realized_params(d: JointDistribution, scenario: Scenario) -> ScenarioParams:
    """Sensitivity parameters that ``d`` actually realises, for one distribution.

    Each is computed from its defining max/min ratio over levels of U, so
    every value is >= 1. Directional scenarios pick the A=1 parameters for
    increased risk and the A=0 parameters for decreased risk.
    """
    values = {name: float(v) for name, v in _param_arrays(d).items()}
    return _params_from(values, Scenario(scenario))


# -- verification -------------------------------------------------------------


_REQUIRED_DIRECTION = {
    Scenario.DIRECTIONAL_INCREASED: 1,
    Scenario.S_EQUALS_U_INCREASED: 1,
    Scenario.DIRECTIONAL_DECREASED: -1,
    Scenario.S_EQUALS_U_DECREASED: -1,
}


class BoundCheck(NamedTuple):
    holds: bool
    bias: float
    bound: float


def _orient(d: JointDistribution, scenario: Scenario):
    """Oriented bias (>= 1) and the distribution recoded to match."""
    truth = true_rr_selected(d) if scenario is Scenario.SELECTED else true_rr_total(d)
    raw = observed_rr(d) / truth
    flip = raw < 1
    if d.batch_shape:
        mask = flip[:, None, None]
        oriented = JointDistribution(
            *(np.where(mask, t[..., ::-1, :], t) for t in (d.p_au, d.p_s_given_au, d.p_y_given_au))
        )
    else:
        oriented = d.recoded() if flip else d
    return np.where(flip, 1 / raw, raw), oriented


def _qualifies(oriented: JointDistribution, scenario: Scenario):
    need = _REQUIRED_DIRECTION.get(scenario)
    if need is None:
        return np.ones(oriented.batch_shape, dtype=bool)
    return _direction(oriented) == need


def verify_bound(d: JointDistribution, scenario: Scenario) -> Optional[BoundCheck]:
    """Check the scenario's bound on one distribution.

    The exposure is recoded first when the raw bias is below 1. Returns None
    when ``d`` fails the scenario's directionality precondition.
    """
    scenario = Scenario(scenario)
    bias, oriented = _orient(d, scenario)
    if not _qualifies(oriented, scenario):
        return None
    bias = float(bias)
    bound = bounding_factor(realized_params(oriented, scenario)).value
    return BoundCheck(bias <= bound * (1 + RTOL), bias, bound)


def _batch_bounds(d: JointDistribution, scenario: Scenario):
    """Oriented bias, bound (NaN where skipped) and qualifying mask for a batch."""
    bias, oriented = _orient(d, scenario)
    ok = _qualifies(oriented, scenario)
    arrays = _param_arrays(oriented)
    bound = np.full(bias.shape, np.nan)
    for i in np.flatnonzero(ok):
        values = {name: float(v[i]) for name, v in arrays.items()}
        bound[i] = bounding_factor(_params_from(values, scenario)).value
    return bias, bound, ok


@dataclass
class OracleReport:
    scenario: Scenario
    k: int
    seed: int
    samples: int = 0
    skipped: int = 0
    violations: int = 0
    max_ratio: float = 0.0
    worst_case: Optional[JointDistribution] = field(default=None, repr=False)

    def merge(self, other: "OracleReport") -> "OracleReport":
        """Combine with a report over a later index range."""
        better = other.max_ratio > self.max_ratio
        return OracleReport(
            self.scenario,
            self.k,
            self.seed,
            self.samples + other.samples,
            self.skipped + other.skipped,
            self.violations + other.violations,
            other.max_ratio if better else self.max_ratio,
            other.worst_case if better else self.worst_case,
        )

    def to_dict(self) -> dict:
        out = {
            "scenario": self.scenario.value,
            "k": self.k,
            "seed": self.seed,
            "samples": self.samples,
            "skipped": self.skipped,
            "violations": self.violations,
            "max_bias_over_bound": self.max_ratio,
        }
        if self.worst_case is not None:
            out["worst_case"] = self.worst_case.to_dict()
        return out


def _is_s_equals_u(scenario: Scenario) -> bool:
    return scenario in (Scenario.S_EQUALS_U, Scenario.S_EQUALS_U_INCREASED, Scenario.S_EQUALS_U_DECREASED)


def _verify_chunk(k: int, scenario: Scenario, seed: int, start: int, stop: int) -> OracleReport:
    d = sample_batch(k, seed, start, stop, s_equals_u=_is_s_equals_u(scenario))
    bias, bound, ok = _batch_bounds(d, scenario)
    report = OracleReport(scenario, k, seed, samples=stop - start, skipped=int((~ok).sum()))
    if ok.any():
        ratio = np.where(ok, bias / bound, -np.inf)
        report.violations = int((bias[ok] > bound[ok] * (1 + RTOL)).sum())
        best = int(np.argmax(ratio))
        report.max_ratio = float(ratio[best])
        report.worst_case = d[best]
    return report


def run_verification(
    k: int,
    scenario: Scenario,
    samples: int,
    seed: int,
    workers: int = 1,
    chunk_size: int = 4096,
) -> OracleReport:
    """Verify a scenario's bound on ``samples`` random distributions.

    The result depends only on ``(k, scenario, samples, seed)``; ``workers``
    and ``chunk_size`` change the schedule, never the report.
    """
    scenario = Scenario(scenario)
    if samples < 1:
        raise ValueError("samples must be >= 1")
    if _is_s_equals_u(scenario) and k != 2:
        raise ValueError(f"{scenario.value} verification uses a binary U; pass k=2")
    starts = range(0, samples, chunk_size)
    jobs = [(k, scenario, seed, s, min(s + chunk_size, samples)) for s in starts]
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(lambda job: _verify_chunk(*job), jobs))
    else:
        parts = [_verify_chunk(*job) for job in jobs]
    report = parts[0]
    for part in parts[1:]:
        report = report.merge(part)
    return report


# -- tightness search ---------------------------------------------------------


def _from_logits(theta: np.ndarray, k: int, fixed_s: Optional[np.ndarray]) -> JointDistribution:
    """Map unconstrained parameters (..., m) onto valid probability tables."""
    n = 2 * k
    logits = theta[..., :n]
    z = np.exp(logits - logits.max(-1, keepdims=True))
    p_au = EPS + (1 - n * EPS) * z / z.sum(-1, keepdims=True)
    shape = theta.shape[:-1] + (2, k)

    def squash(x):
        return EPS + (1 - 2 * EPS) / (1 + np.exp(-x))

    p_y = squash(theta[..., n : 2 * n]).reshape(shape)
    if fixed_s is None:
        p_s = squash(theta[..., 2 * n : 3 * n]).reshape(shape)
    else:
        p_s = np.broadcast_to(fixed_s, shape).copy()
    return JointDistribution(p_au.reshape(shape), p_s, p_y)


def tightness_search(
    k: int,
    scenario: Scenario,
    budget: int,
    seed: int,
    restarts: Optional[int] = None,
    proposals: int = 16,
) -> OracleReport:
    """Randomised hill climbing for distributions that push bias towards the bound.

    Tables are parameterised by logits. Each step perturbs one random
    coordinate of the incumbent in ``proposals`` independent ways and keeps
    the best candidate if it improves bias/bound; the step scale grows on
    success and shrinks on failure, and is reset once it collapses. The
    budget counts evaluated distributions across all restarts.
    """
    scenario = Scenario(scenario)
    if budget < 1:
        raise ValueError("budget must be >= 1")
    s_equals_u = _is_s_equals_u(scenario)
    if s_equals_u and k != 2:
        raise ValueError(f"{scenario.value} search uses a binary U; pass k=2")
    fixed_s = np.array([[EPS, 1 - EPS], [EPS, 1 - EPS]]) if s_equals_u else None
    dim = 4 * k if s_equals_u else 6 * k
    if restarts is None:
        restarts = max(1, min(20, budget // 5000))

    rng = np.random.default_rng(seed)
    report = OracleReport(scenario, k, seed)
    best_theta = None

    def evaluate(thetas: np.ndarray) -> np.ndarray:
        d = _from_logits(thetas, k, fixed_s)
        bias, bound, ok = _batch_bounds(d, scenario)
        report.samples += len(thetas)
        report.skipped += int((~ok).sum())
        report.violations += int((bias[ok] > bound[ok] * (1 + RTOL)).sum())
        return np.where(ok, bias / np.where(ok, bound, 1.0), -np.inf)

    used = 0
    for r in range(restarts):
        allowance = (budget - used) // (restarts - r)
        spent = 0
        current, score = None, -np.inf
        # random starts until one satisfies the scenario's precondition
        while spent < allowance and not np.isfinite(score):
            m = min(proposals, allowance - spent)
            thetas = rng.normal(0.0, 2.0, size=(m, dim))
            scores = evaluate(thetas)
            spent += m
            i = int(np.argmax(scores))
            current, score = thetas[i], scores[i]
        step = 1.0
        while spent < allowance:
            m = min(proposals, allowance - spent)
            cand = np.repeat(current[None, :], m, axis=0)
            coords = rng.integers(dim, size=m)
            cand[np.arange(m), coords] += rng.normal(0.0, step, size=m)
            np.clip(cand, -2 * _LOGIT_MAX, 2 * _LOGIT_MAX, out=cand)
            scores = evaluate(cand)
            spent += m
            i = int(np.argmax(scores))
            if scores[i] > score:
                current, score = cand[i], scores[i]
                step = min(step * 1.5, 16.0)
            else:
                step *= 0.8
                if step < 1e-4:
                    step = 1.0
        used += spent
        if current is not None and score > report.max_ratio:
            report.max_ratio = float(score)
            best_theta = current

    if best_theta is not None:
        report.worst_case = _from_logits(best_theta, k, fixed_s)
    return report
