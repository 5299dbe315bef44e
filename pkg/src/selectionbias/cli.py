"""Command-line front end.

Subcommands ``bound``, ``svalue``, ``adjust``, ``table`` and ``verify``.
Exit status is 0 on success, 2 for invalid input and 3 when the oracle
finds a bound violation.
"""

from __future__ import annotations

import argparse
import csv
import io
import itertools
import json
import math
import sys
from dataclasses import dataclass, field
from decimal import ROUND_HALF_EVEN, Decimal
from typing import Optional, Union

import numpy as np

from .bounds import (
    BoundingFactor,
    Direction,
    Directional,
    EffectEstimate,
    General,
    Scale,
    Scenario,
    SEqualsU,
    SEqualsUDirectional,
    SelectedPopulation,
    adjust_estimate,
    bounding_factor,
)
from .oracle import run_verification
from .summaries import LimitChoice, summary_for

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_VIOLATION = 3

OUTPUTS = ("text", "csv", "markdown", "json")

# CLI-only alias: mixed directions have no tighter bound than the general one
MIXED = "directional-mixed"

SCENARIO_HELP = """scenarios (pick the one whose assumptions you can defend):
  general                           Y independent of S given A and U; nothing else assumed
  s-equals-u                        the selection factor U is selection itself
  directional-increased             general, and selection raises outcome risk in both exposure groups
  directional-decreased             general, and selection lowers outcome risk in both exposure groups
  directional-mixed                 directions differ between groups; falls back to general
  s-equals-u-directional            S = U, and risk increased with selection in both groups
  s-equals-u-directional-decreased  S = U, and risk decreased with selection in both groups
  selected                          the target is the causal RR within the selected population

typical causal structures:
  selection affected by exposure and by a U that also affects the outcome
  (e.g. only live births recruited)                          -> general / directional
  selection defined by a factor that exposure and outcome both affect
  (e.g. everyone sampled had a diagnostic procedure)         -> s-equals-u variants
  selection on a common effect of exposure and a U that affects the outcome,
  with that selected group as the population of interest     -> selected"""

SCENARIO_PARAMS: dict[Scenario, tuple[str, ...]] = {
    Scenario.GENERAL: ("rr_uy_a1", "rr_su_a1", "rr_uy_a0", "rr_su_a0"),
    Scenario.S_EQUALS_U: ("rr_uy_a1", "rr_uy_a0"),
    Scenario.DIRECTIONAL_INCREASED: ("rr_uy", "rr_su"),
    Scenario.DIRECTIONAL_DECREASED: ("rr_uy", "rr_su"),
    Scenario.S_EQUALS_U_INCREASED: ("rr_uy",),
    Scenario.S_EQUALS_U_DECREASED: ("rr_uy",),
    Scenario.SELECTED: ("rr_uy_s1", "rr_au_s1", "approx_su", "approx_sa"),
}
ALL_PARAMS = ("rr_uy_a1", "rr_su_a1", "rr_uy_a0", "rr_su_a0", "rr_uy", "rr_su",
              "rr_uy_s1", "rr_au_s1", "approx_su", "approx_sa")
ASSOCIATIONS = {"rr_au_s1": "exact", "approx_su": "approx_su", "approx_sa": "approx_sa"}


class InputError(Exception):
    """Invalid command-line or config-file input (exit status 2)."""


@dataclass(frozen=True)
class Range:
    min: float
    max: float
    steps: int

    def __post_init__(self):
        if not (self.min >= 1):
            raise InputError(f"range minimum must be >= 1, got {self.min}")
        if self.min > self.max:
            raise InputError(f"range minimum {self.min} exceeds maximum {self.max}")
        if self.steps < 2:
            raise InputError(f"range needs at least 2 steps, got {self.steps}")

    def values(self) -> list[float]:
        return [float(v) for v in np.linspace(self.min, self.max, self.steps)]


Value = Union[float, Range]


@dataclass
class AnalysisConfig:
    scenario: Scenario = Scenario.GENERAL
    mixed: bool = False
    estimate: Optional[EffectEstimate] = None
    params: dict[str, Value] = field(default_factory=dict)
    target: Optional[float] = None
    output: str = "text"
    precision: int = 2


# -- parsing ------------------------------------------------------------------


def _number(name: str, raw) -> float:
    if isinstance(raw, bool):
        raise InputError(f"--{name.replace('_', '-')}: expected a number, got {raw!r}")
    if isinstance(raw, (int, float)):
        return float(raw)
    text = str(raw).strip().lower()
    if text in ("inf", "+inf", "infinity"):
        return math.inf
    try:
        return float(text)
    except ValueError:
        raise InputError(f"--{name.replace('_', '-')}: expected a number, got {raw!r}") from None


def _value(name: str, raw) -> Value:
    """A fixed number or a ``min:max:steps`` range (string or mapping)."""
    if isinstance(raw, dict):
        try:
            return Range(_number(name, raw["min"]), _number(name, raw["max"]), int(raw["steps"]))
        except (KeyError, TypeError, ValueError) as exc:
            raise InputError(f"--{name.replace('_', '-')}: bad range {raw!r}") from exc
    if isinstance(raw, str) and ":" in raw:
        parts = raw.split(":")
        if len(parts) != 3:
            raise InputError(f"--{name.replace('_', '-')}: ranges are written min:max:steps")
        try:
            steps = int(parts[2])
        except ValueError:
            raise InputError(f"--{name.replace('_', '-')}: steps must be an integer") from None
        return Range(_number(name, parts[0]), _number(name, parts[1]), steps)
    return _number(name, raw)


def _load_config(path: str) -> dict:
    try:
        with open(path, encoding="utf-8") as fh:
            data = json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read config {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"config {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise InputError("config file must hold a JSON object")
    return {key.replace("-", "_"): value for key, value in data.items()}


def _merged(args: argparse.Namespace) -> dict:
    """Config-file values overlaid by explicitly given flags."""
    values = _load_config(args.config) if getattr(args, "config", None) else {}
    values.update({k: v for k, v in vars(args).items() if k not in ("config", "command")})
    return values


def _scenario(raw) -> tuple[Scenario, bool]:
    if raw == MIXED:
        return Scenario.GENERAL, True
    try:
        return Scenario(raw), False
    except ValueError:
        raise InputError(f"unknown scenario {raw!r}") from None


def build_config(values: dict, need_params: bool, allow_ranges: bool) -> AnalysisConfig:
    scenario, mixed = _scenario(values.get("scenario", "general"))
    output = values.get("output", "text")
    if output not in OUTPUTS:
        raise InputError(f"--output must be one of {', '.join(OUTPUTS)}")
    precision = values.get("precision", 2)
    if isinstance(precision, bool) or not isinstance(precision, int) or precision < 0:
        raise InputError("--precision must be a non-negative integer")

    estimate = None
    if "est" in values:
        point = _number("est", values["est"])
        lower = _number("lo", values["lo"]) if "lo" in values else None
        upper = _number("hi", values["hi"]) if "hi" in values else None
        estimate = EffectEstimate(point, lower, upper, Scale(values.get("scale", "risk_ratio")))
    elif "lo" in values or "hi" in values:
        raise InputError("confidence limits given without --est")

    target = _number("true", values["true"]) if "true" in values else None

    params: dict[str, Value] = {}
    given = [name for name in ALL_PARAMS if name in values]
    if need_params:
        allowed = SCENARIO_PARAMS[scenario]
        for name in given:
            if name not in allowed:
                raise InputError(
                    f"--{name.replace('_', '-')} does not apply to scenario {scenario.value}"
                )
            params[name] = _value(name, values[name])
            if isinstance(params[name], Range) and not allow_ranges:
                raise InputError(f"--{name.replace('_', '-')}: ranges are only accepted by 'table'")
        required = allowed if scenario is not Scenario.SELECTED else ("rr_uy_s1",)
        for name in required:
            if name not in params:
                raise InputError(f"scenario {scenario.value} needs --{name.replace('_', '-')} (a risk ratio >= 1)")
        if scenario is Scenario.SELECTED:
            assoc = [name for name in ASSOCIATIONS if name in params]
            if len(assoc) != 1:
                raise InputError(
                    "scenario selected needs exactly one of --rr-au-s1, --approx-su, --approx-sa"
                )
    elif given:
        raise InputError(f"--{given[0].replace('_', '-')} is not used by this command")

    return AnalysisConfig(scenario, mixed, estimate, params, target, output, precision)


def make_params(scenario: Scenario, p: dict[str, float]):
    if scenario is Scenario.GENERAL:
        return General(p["rr_uy_a1"], p["rr_su_a1"], p["rr_uy_a0"], p["rr_su_a0"])
    if scenario is Scenario.S_EQUALS_U:
        return SEqualsU(p["rr_uy_a1"], p["rr_uy_a0"])
    if scenario is Scenario.DIRECTIONAL_INCREASED:
        return Directional(Direction.INCREASED, p["rr_uy"], p["rr_su"])
    if scenario is Scenario.DIRECTIONAL_DECREASED:
        return Directional(Direction.DECREASED, p["rr_uy"], p["rr_su"])
    if scenario is Scenario.S_EQUALS_U_INCREASED:
        return SEqualsUDirectional(Direction.INCREASED, p["rr_uy"])
    if scenario is Scenario.S_EQUALS_U_DECREASED:
        return SEqualsUDirectional(Direction.DECREASED, p["rr_uy"])
    name = next(n for n in ASSOCIATIONS if n in p)
    return SelectedPopulation(p["rr_uy_s1"], p[name], ASSOCIATIONS[name])


# -- formatting ---------------------------------------------------------------


def fmt(value: Optional[float], precision: int) -> str:
    """Round half-to-even at ``precision`` decimals; infinity prints as ``inf``."""
    if value is None:
        return ""
    if value == math.inf:
        return "inf"
    quantum = Decimal(1).scaleb(-precision)
    return str(Decimal(value).quantize(quantum, rounding=ROUND_HALF_EVEN))


def _json_number(value: Optional[float]):
    if value is not None and math.isinf(value):
        return "inf"
    return value


def _estimate_dict(est: EffectEstimate) -> dict:
    out = {"point": est.point}
    if est.lower is not None:
        out["lower"] = est.lower
    if est.upper is not None:
        out["upper"] = _json_number(est.upper)
    return out


def _interval(est: EffectEstimate, precision: int) -> str:
    text = fmt(est.point, precision)
    if est.lower is not None or est.upper is not None:
        text += f" [{fmt(est.lower, precision) or '-'}, {fmt(est.upper, precision) or '-'}]"
    return text


def _render_rows(header: list[str], rows: list[list[str]], output: str) -> str:
    if output == "csv":
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\r\n")
        writer.writerow(header)
        writer.writerows(rows)
        return buf.getvalue()
    if output == "markdown":
        lines = ["| " + " | ".join(header) + " |", "|" + "|".join("---" for _ in header) + "|"]
        lines += ["| " + " | ".join(row) + " |" for row in rows]
        return "\n".join(lines) + "\n"
    widths = [max(len(h), *(len(r[i]) for r in rows)) if rows else len(h) for i, h in enumerate(header)]
    lines = ["  ".join(h.ljust(w) for h, w in zip(header, widths)).rstrip()]
    lines += ["  ".join(c.ljust(w) for c, w in zip(row, widths)).rstrip() for row in rows]
    return "\n".join(lines) + "\n"


def _render_record(pairs: list[tuple[str, str]], output: str) -> str:
    """Single-record output: key/value lines for text, one-row table otherwise."""
    if output == "text":
        width = max(len(k) for k, _ in pairs)
        return "".join(f"{k.ljust(width)}  {v}\n" for k, v in pairs)
    return _render_rows([k for k, _ in pairs], [[v for _, v in pairs]], output)


def _dump_json(obj: dict) -> str:
    return json.dumps(obj, indent=2, allow_nan=False) + "\n"


def _inputs(cfg: AnalysisConfig) -> dict:
    out: dict = {}
    for name, value in cfg.params.items():
        out[name] = (
            {"min": value.min, "max": value.max, "steps": value.steps}
            if isinstance(value, Range)
            else value
        )
    if cfg.estimate is not None:
        out["estimate"] = _estimate_dict(cfg.estimate)
        out["scale"] = cfg.estimate.scale.value
    if cfg.target is not None:
        out["true"] = cfg.target
    return out


def _scenario_name(cfg: AnalysisConfig) -> str:
    return MIXED if cfg.mixed else cfg.scenario.value


# -- commands -----------------------------------------------------------------


def _check_oriented(est: EffectEstimate) -> None:
    if est.point < 1:
        raise InputError(
            f"estimate {est.point} is below 1; recode the exposure first "
            "(pass the reciprocal estimate with its limits swapped)"
        )


def _bound_and_adjust(cfg: AnalysisConfig, bound: BoundingFactor) -> tuple[dict, str]:
    p = cfg.precision
    adjusted = None
    if cfg.estimate is not None:
        _check_oriented(cfg.estimate)
        adjusted = adjust_estimate(cfg.estimate, bound)

    if cfg.output == "json":
        obj = {
            "scenario": _scenario_name(cfg),
            "inputs": _inputs(cfg),
            "bound": {"value": bound.value, "approximate": bound.approximate},
        }
        if adjusted is not None:
            obj["adjusted"] = _estimate_dict(adjusted)
        return obj, _dump_json(obj)

    pairs = [("scenario", _scenario_name(cfg)), ("bound", fmt(bound.value, p))]
    if cfg.output == "text":
        pairs[1] = ("bound", fmt(bound.value, p) + (" (approximate)" if bound.approximate else ""))
    else:
        pairs.append(("approximate", "true" if bound.approximate else "false"))
    if adjusted is not None:
        if cfg.output == "text":
            pairs.append(("estimate", _interval(cfg.estimate, p)))
            pairs.append(("adjusted", _interval(adjusted, p)))
        else:
            pairs += [
                ("adjusted_point", fmt(adjusted.point, p)),
                ("adjusted_lower", fmt(adjusted.lower, p)),
                ("adjusted_upper", fmt(adjusted.upper, p)),
            ]
    if cfg.mixed and cfg.output == "text":
        pairs.append(("note", "mixed directions have no tighter bound; general bound used"))
    return {}, _render_record(pairs, cfg.output)


def cmd_bound(values: dict) -> tuple[int, str]:
    cfg = build_config(values, need_params=True, allow_ranges=False)
    bound = bounding_factor(make_params(cfg.scenario, cfg.params))
    return EXIT_OK, _bound_and_adjust(cfg, bound)[1]


def cmd_adjust(values: dict) -> tuple[int, str]:
    if "est" not in values:
        raise InputError("adjust needs --est")
    direct = values.pop("bound", None)
    if direct is None:
        return cmd_bound(values)
    cfg = build_config(values, need_params=False, allow_ranges=False)
    factor = _number("bound", direct)
    if not (factor >= 1) or math.isinf(factor):
        raise InputError(f"--bound must be a finite bounding factor >= 1, got {factor}")
    bound = BoundingFactor(factor, cfg.scenario, None)
    return EXIT_OK, _bound_and_adjust(cfg, bound)[1]


def cmd_svalue(values: dict) -> tuple[int, str]:
    cfg = build_config(values, need_params=False, allow_ranges=False)
    est = cfg.estimate
    if est is None:
        raise InputError("svalue needs --est")
    reference = 1.0 if cfg.target is None else cfg.target
    point = summary_for(cfg.scenario, est, cfg.target, LimitChoice.POINT)
    side = LimitChoice.LOWER if est.point >= reference else LimitChoice.UPPER
    ci = summary_for(cfg.scenario, est, cfg.target, side) if getattr(est, side.value) is not None else None

    p = cfg.precision
    if cfg.output == "json":
        summary = {"point": {"value": point.value, "oriented_rr": point.input_rr}}
        if ci is not None:
            summary["ci"] = {
                "limit": side.value,
                "value": _json_number(ci.value),
                "oriented_rr": _json_number(ci.input_rr),
                "includes_target": ci.crosses_target,
            }
        summary["recoded"] = point.recoded
        obj = {"scenario": _scenario_name(cfg), "inputs": _inputs(cfg), "summary": summary}
        return EXIT_OK, _dump_json(obj)

    pairs = [("scenario", _scenario_name(cfg)), ("summary_point", fmt(point.value, p))]
    if ci is not None:
        pairs.append((f"summary_{side.value}", fmt(ci.value, p)))
    pairs.append(("recoded", "true" if point.recoded else "false"))
    if cfg.output == "text":
        if point.recoded:
            pairs.append(("note", "exposure recoded: A=1 now denotes the originally unexposed"))
        if ci is not None and ci.crosses_target:
            pairs.append(("note", "confidence interval already includes the target value"))
        if cfg.mixed:
            pairs.append(("note", "mixed directions have no dedicated summary; general summary used"))
    return EXIT_OK, _render_record(pairs, cfg.output)


def cmd_table(values: dict) -> tuple[int, str]:
    cfg = build_config(values, need_params=True, allow_ranges=True)
    names = [n for n in SCENARIO_PARAMS[cfg.scenario] if n in cfg.params]
    if not any(isinstance(cfg.params[n], Range) for n in names):
        raise InputError("table needs at least one ranged parameter (min:max:steps)")
    if cfg.estimate is not None:
        _check_oriented(cfg.estimate)
    axes = [
        cfg.params[n].values() if isinstance(cfg.params[n], Range) else [cfg.params[n]]
        for n in names
    ]
    records = []
    for combo in itertools.product(*axes):
        bound = bounding_factor(make_params(cfg.scenario, dict(zip(names, combo))))
        adjusted = adjust_estimate(cfg.estimate, bound) if cfg.estimate is not None else None
        records.append((combo, bound, adjusted))

    p = cfg.precision
    if cfg.output == "json":
        rows = []
        for combo, bound, adjusted in records:
            row = dict(zip(names, combo))
            row["bound"] = bound.value
            if adjusted is not None:
                row["adjusted"] = _estimate_dict(adjusted)
            rows.append(row)
        obj = {"scenario": _scenario_name(cfg), "inputs": _inputs(cfg), "table": rows}
        return EXIT_OK, _dump_json(obj)

    header = list(names) + ["bound"]
    if cfg.estimate is not None:
        header += ["adjusted_point", "adjusted_lower", "adjusted_upper"]
    rows = []
    for combo, bound, adjusted in records:
        row = [fmt(v, p) for v in combo] + [fmt(bound.value, p)]
        if adjusted is not None:
            row += [fmt(adjusted.point, p), fmt(adjusted.lower, p), fmt(adjusted.upper, p)]
        rows.append(row)
    return EXIT_OK, _render_rows(header, rows, cfg.output)


def cmd_verify(values: dict) -> tuple[int, str]:
    scenario, mixed = _scenario(values.get("scenario", "general"))
    output = values.get("output", "text")
    if output not in OUTPUTS:
        raise InputError(f"--output must be one of {', '.join(OUTPUTS)}")
    try:
        k = int(values.get("k", 2))
        n = int(values.get("n", 100_000))
        seed = int(values.get("seed", 0))
        workers = int(values.get("workers", 1))
        precision = int(values.get("precision", 2))
    except (TypeError, ValueError):
        raise InputError("--k, --n, --seed, --workers and --precision take integers") from None
    if n < 1:
        raise InputError("--n must be >= 1")
    if not 2 <= k <= 8:
        raise InputError("--k must be between 2 and 8")
    if workers < 1:
        raise InputError("--workers must be >= 1")
    try:
        report = run_verification(k, scenario, n, seed, workers=workers)
    except ValueError as exc:
        raise InputError(str(exc)) from exc
    code = EXIT_OK if report.violations == 0 else EXIT_VIOLATION

    if output == "json":
        obj = {
            "scenario": MIXED if mixed else scenario.value,
            "inputs": {"k": k, "n": n, "seed": seed},
            "report": report.to_dict(),
        }
        return code, _dump_json(obj)
    pairs = [
        ("scenario", MIXED if mixed else scenario.value),
        ("k", str(k)),
        ("seed", str(seed)),
        ("samples", str(report.samples)),
        ("skipped", str(report.skipped)),
        ("violations", str(report.violations)),
        ("max_bias_over_bound", fmt(report.max_ratio, precision)),
    ]
    return code, _render_record(pairs, output)


COMMANDS = {
    "bound": cmd_bound,
    "svalue": cmd_svalue,
    "adjust": cmd_adjust,
    "table": cmd_table,
    "verify": cmd_verify,
}


# -- argument parser ----------------------------------------------------------


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _add_global(p: argparse.ArgumentParser) -> None:
    S = argparse.SUPPRESS
    p.add_argument("--config", default=S, metavar="PATH", help="JSON file whose keys mirror the flag names")
    p.add_argument("--output", default=S, choices=OUTPUTS, help="output format (default text)")
    p.add_argument("--precision", default=S, type=int, metavar="N", help="display decimals (default 2)")


def _add_scenario(p: argparse.ArgumentParser) -> None:
    p.add_argument("--scenario", default=argparse.SUPPRESS, metavar="NAME",
                   choices=[s.value for s in Scenario] + [MIXED], help="see the scenario list below")


def _add_params(p: argparse.ArgumentParser, ranges: bool) -> None:
    g = p.add_argument_group("sensitivity parameters" + (" (value or min:max:steps)" if ranges else ""))
    helps = {
        "rr_uy_a1": "max outcome RR across U levels among the exposed",
        "rr_su_a1": "max factor selection shifts a U level's prevalence among the exposed",
        "rr_uy_a0": "max outcome RR across U levels among the unexposed",
        "rr_su_a0": "max factor non-selection shifts a U level's prevalence among the unexposed",
        "rr_uy": "outcome RR for the stratum the directional scenario uses",
        "rr_su": "selection-U factor for the stratum the directional scenario uses",
        "rr_uy_s1": "max outcome RR across U levels within the selected population",
        "rr_au_s1": "exposure-U association induced within the selected population",
        "approx_su": "max selection RR across U levels (approximate substitute)",
        "approx_sa": "max selection RR across exposure levels (approximate substitute)",
    }
    for name in ALL_PARAMS:
        g.add_argument("--" + name.replace("_", "-"), default=argparse.SUPPRESS, metavar="RR", help=helps[name])


def _add_estimate(p: argparse.ArgumentParser) -> None:
    g = p.add_argument_group("effect estimate")
    S = argparse.SUPPRESS
    g.add_argument("--est", default=S, metavar="RR", help="point estimate (RR, or OR/HR approximating it)")
    g.add_argument("--lo", default=S, metavar="RR", help="lower confidence limit")
    g.add_argument("--hi", default=S, metavar="RR", help="upper confidence limit ('inf' if unbounded)")
    g.add_argument("--scale", default=S, choices=[s.value for s in Scale], help="effect measure of the estimate")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="selectionbias",
        description="Bounds and summary measures for selection bias on the risk-ratio scale.",
        epilog=SCENARIO_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    _add_global(parser)
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def command(name, help_text):
        p = sub.add_parser(name, help=help_text, description=help_text, epilog=SCENARIO_HELP,
                           formatter_class=argparse.RawDescriptionHelpFormatter)
        _add_global(p)
        _add_scenario(p)
        return p

    p = command("bound", "bounding factor, plus the adjusted estimate when one is given")
    _add_params(p, ranges=False)
    _add_estimate(p)

    p = command("adjust", "divide a bounding factor out of an estimate and its interval")
    p.add_argument("--bound", default=argparse.SUPPRESS, metavar="B",
                   help="bounding factor to apply directly instead of scenario parameters")
    _add_params(p, ranges=False)
    _add_estimate(p)

    p = command("svalue", "summary measure for the point estimate and the limit nearest the target")
    _add_estimate(p)
    p.add_argument("--true", default=argparse.SUPPRESS, metavar="RR",
                   help="proposed true value to shift to (default: the null, 1)")

    p = command("table", "bounding factors over a grid of parameter values")
    _add_params(p, ranges=True)
    _add_estimate(p)

    p = command("verify", "check a scenario's bound against random exact distributions")
    S = argparse.SUPPRESS
    p.add_argument("--k", default=S, type=int, help="number of levels of U (default 2)")
    p.add_argument("--n", default=S, type=int, help="number of sampled distributions (default 100000)")
    p.add_argument("--seed", default=S, type=int, help="random seed (default 0)")
    p.add_argument("--workers", default=S, type=int, help="threads; never changes the report (default 1)")
    return parser


def main(argv: Optional[list[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code in (0, None) else EXIT_INPUT
    try:
        code, text = COMMANDS[args.command](_merged(args))
    except (InputError, ValueError) as exc:
        print(f"selectionbias {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    sys.stdout.write(text)
    return code


if __name__ == "__main__":
    sys.exit(main())
