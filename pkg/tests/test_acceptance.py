"""Exit criteria for the package, each checked at its stated tolerance."""

import io
import json
import math
import time
from contextlib import redirect_stdout

import numpy as np

from selectionbias.bounds import (
    Directional,
    EffectEstimate,
    General,
    Scenario,
    SEqualsU,
    SEqualsUDirectional,
    SelectedPopulation,
    adjust_estimate,
    bounding_factor,
    relative_bias,
)
from selectionbias.cli import main
from selectionbias.enumeration import enumerate_quantities
from selectionbias.oracle import (
    observed_rr,
    realized_params,
    run_verification,
    sample_batch,
    selection_outcome_ratios,
    tightness_search,
    true_rr_selected,
    true_rr_total,
    true_rr_total_direct,
)
from selectionbias.summaries import (
    summary_directional,
    summary_general,
    summary_s_equals_u_directional,
    summary_value,
)

N = 100_000


def test_1_zika_bounding_factor(criterion):
    bound = bounding_factor(General(2, 1.7, 2, 1.5))
    adj = adjust_estimate(EffectEstimate(73.1, 13.0, math.inf, "odds_ratio_approx"), bound)
    ok = (
        abs(bound.value - 1.51) <= 0.005
        and abs(adj.point - 48.4) <= 0.05
        and abs(adj.lower - 8.6) <= 0.05
        and adj.upper == math.inf
    )
    criterion(1, "Zika bounding factor and adjusted OR", ok,
              f"bound={bound.value:.4f} adjusted={adj.point:.3f} [{adj.lower:.3f}, {adj.upper}]")


def test_2_zika_summaries(criterion):
    got = {rr: summary_general(rr) for rr in (73.1, 13.0, 3)}
    want = {73.1: 16.6, 13.0: 6.7, 3: 2.9}
    ok = all(abs(got[rr] - want[rr]) <= 0.05 for rr in want)
    criterion(2, "general summary measures", ok, ", ".join(f"{rr}->{v:.3f}" for rr, v in got.items()))


def test_3_obesity_paradox(criterion):
    point, lower = summary_directional(1.50), summary_directional(1.22)
    ok = abs(point - 2.37) <= 0.005 and abs(lower - 1.74) <= 0.005
    criterion(3, "obesity paradox summary measures", ok, f"{point:.4f}, {lower:.4f}")


def test_4_endometrial(criterion):
    ratio, recoded = relative_bias(2.30, 11.98)
    summary = summary_s_equals_u_directional(ratio)
    ok = abs(ratio - 5.2) <= 0.05 and recoded and summary == ratio
    criterion(4, "endometrial relative bias and S=U directional summary", ok,
              f"ratio={ratio:.4f} recoded={recoded} summary={summary:.4f}")


def test_5_round_trip(criterion):
    makers = {
        Scenario.GENERAL: lambda s: General(s, s, s, s),
        Scenario.S_EQUALS_U: lambda s: SEqualsU(s, s),
        Scenario.DIRECTIONAL_INCREASED: lambda s: Directional("increased", s, s),
        Scenario.DIRECTIONAL_DECREASED: lambda s: Directional("decreased", s, s),
        Scenario.S_EQUALS_U_INCREASED: lambda s: SEqualsUDirectional("increased", s),
        Scenario.S_EQUALS_U_DECREASED: lambda s: SEqualsUDirectional("decreased", s),
        Scenario.SELECTED: lambda s: SelectedPopulation(s, s),
    }
    values = np.random.default_rng(20190405).uniform(1, 100, size=1000)
    start = time.perf_counter()
    worst = 0.0
    for scenario, make in makers.items():
        for rr in values:
            back = bounding_factor(make(summary_value(scenario, rr))).value
            worst = max(worst, abs(back - rr) / rr)
    elapsed = time.perf_counter() - start
    criterion(5, "summary/bound round trip", worst <= 1e-10 and elapsed < 1,
              f"max rel err={worst:.2e}, {elapsed:.2f}s")


def test_6_oracle_non_violation(criterion):
    runs = [(k, Scenario.GENERAL) for k in (2, 3, 4)]
    runs += [(k, Scenario.SELECTED) for k in (2, 3, 4)]
    runs += [(k, s) for k in (2, 3, 4) for s in (Scenario.DIRECTIONAL_INCREASED, Scenario.DIRECTIONAL_DECREASED)]
    start = time.perf_counter()
    violations, checked, details = 0, 0, []
    for k, scenario in runs:
        report = run_verification(k, scenario, N, seed=k)
        violations += report.violations
        checked += report.samples - report.skipped
        details.append(f"{scenario.value}/k{k}:{report.violations}v/{report.samples - report.skipped}")
    elapsed = time.perf_counter() - start
    criterion(6, "oracle finds no bound violations", violations == 0 and elapsed < 60,
              f"{checked} qualifying checks, {violations} violations, {elapsed:.1f}s")


def test_7_oracle_self_consistency(criterion):
    worst_forms, worst_enum = 0.0, 0.0
    for k in (2, 3, 4):
        d = sample_batch(k, 1000 + k, 0, N)
        a, b = true_rr_total(d), true_rr_total_direct(d)
        worst_forms = max(worst_forms, float(np.max(np.abs(a - b) / np.abs(b))))
        ref = enumerate_quantities(d)
        ours = {
            "observed_rr": observed_rr(d),
            "true_rr_total": a,
            "true_rr_selected": true_rr_selected(d),
            "selection_ratio_a1": selection_outcome_ratios(d)[:, 1],
            "selection_ratio_a0": selection_outcome_ratios(d)[:, 0],
        }
        for name, value in ours.items():
            worst_enum = max(worst_enum, float(np.max(np.abs(value - ref[name]) / np.abs(ref[name]))))
        worst_enum = max(worst_enum, float(np.max(np.abs(ref["total_mass"] - 1))))
        for i in range(0, N, N // 200):
            g = realized_params(d[i], Scenario.GENERAL)
            s = realized_params(d[i], Scenario.SELECTED)
            pairs = [(g.rr_uy_a1, "rr_uy_a1"), (g.rr_su_a1, "rr_su_a1"), (g.rr_uy_a0, "rr_uy_a0"),
                     (g.rr_su_a0, "rr_su_a0"), (s.rr_uy_s1, "rr_uy_s1"), (s.association, "rr_au_s1")]
            for value, name in pairs:
                expected = max(float(ref[name][i]), 1.0)
                worst_enum = max(worst_enum, abs(value - expected) / expected)
    ok = worst_forms <= 1e-12 and worst_enum <= 1e-12
    criterion(7, "oracle self-consistency", ok,
              f"two forms {worst_forms:.1e}, flat enumeration {worst_enum:.1e}")


def test_8_tightness(criterion):
    report = tightness_search(2, Scenario.S_EQUALS_U_INCREASED, N, seed=0)
    ok = report.max_ratio >= 0.95 and report.violations == 0
    criterion(8, "tightness search, S=U with increased risk", ok,
              f"max bias/bound={report.max_ratio:.6f} over {report.samples} evaluations")


def _verify_output(*extra):
    buf = io.StringIO()
    with redirect_stdout(buf):
        code = main(["--output", "json", "verify", "--k", "3", "--scenario", "general",
                     "--n", "20000", "--seed", "7", *extra])
    return code, buf.getvalue().encode()


def test_9_determinism(criterion):
    outputs = [_verify_output(), _verify_output(), _verify_output("--workers", "4")]
    first = outputs[0]
    ok = first[0] == 0 and all(o == first for o in outputs)
    criterion(9, "verify output byte-identical across runs and thread counts", ok,
              f"{len(outputs)} runs of {len(first[1])} bytes, "
              f"{json.loads(first[1])['report']['violations']} violations")
