import json

import numpy as np
import pytest

from selectionbias.bounds import (
    General,
    Scenario,
    SEqualsU,
    SEqualsUDirectional,
    SelectedPopulation,
    bounding_factor,
)
from selectionbias.enumeration import enumerate_quantities
from selectionbias.oracle import (
    EPS,
    JointDistribution,
    observed_rr,
    realized_params,
    run_verification,
    sample_batch,
    sample_joint,
    selection_outcome_ratios,
    tightness_search,
    true_rr_selected,
    true_rr_total,
    true_rr_total_direct,
    verify_bound,
)


def rel_err(x, y):
    return np.max(np.abs(np.asarray(x) - np.asarray(y)) / np.abs(np.asarray(y)))


def make(p_au, p_s, p_y):
    d = JointDistribution(*(np.asarray(t, dtype=float) for t in (p_au, p_s, p_y)))
    d.validate()
    return d


class TestSampling:
    def test_valid(self):
        sample_joint(2, 42).validate()

    def test_deterministic(self):
        a, b = sample_joint(3, 42), sample_joint(3, 42)
        for name in ("p_au", "p_s_given_au", "p_y_given_au"):
            assert np.array_equal(getattr(a, name), getattr(b, name))

    def test_normalised(self):
        d = sample_joint(4, 7)
        assert abs(d.p_au.sum() - 1) <= 1e-12
        assert d.k == 4

    def test_batch_matches_substreams(self):
        whole = sample_batch(3, 5, 0, 10)
        part = sample_batch(3, 5, 4, 7)
        assert np.array_equal(whole.p_au[4:7], part.p_au)
        assert np.array_equal(whole.p_y_given_au[4:7], part.p_y_given_au)
        whole.validate()

    def test_s_equals_u(self):
        d = sample_joint(2, 1, s_equals_u=True)
        d.validate()
        assert np.array_equal(d.p_s_given_au, [[EPS, 1 - EPS], [EPS, 1 - EPS]])
        with pytest.raises(ValueError):
            sample_joint(3, 1, s_equals_u=True)

    def test_bad_k(self):
        with pytest.raises(ValueError):
            sample_joint(1, 0)


class TestDistribution:
    def test_validate_rejects(self):
        d = sample_joint(2, 0)
        bad = JointDistribution(d.p_au * 2, d.p_s_given_au, d.p_y_given_au)
        with pytest.raises(ValueError):
            bad.validate()
        zero = d.p_y_given_au.copy()
        zero[0, 0] = 0
        with pytest.raises(ValueError):
            JointDistribution(d.p_au, d.p_s_given_au, zero).validate()

    def test_json_round_trip(self):
        d = sample_joint(3, 11)
        back = JointDistribution.from_dict(json.loads(json.dumps(d.to_dict())))
        assert np.array_equal(back.p_au, d.p_au)
        assert np.array_equal(back.p_s_given_au, d.p_s_given_au)

    def test_recode(self):
        d = sample_joint(3, 2)
        assert observed_rr(d.recoded()) == pytest.approx(1 / observed_rr(d), rel=1e-14)
        assert np.array_equal(d.recoded().recoded().p_au, d.p_au)

    def test_indexing(self):
        batch = sample_batch(2, 0, 0, 5)
        assert len(batch) == 5 and batch[3].batch_shape == ()
        with pytest.raises(TypeError):
            len(batch[0])


class TestObserved:
    def test_no_u_dependence(self):
        d = make(
            [[0.1, 0.3], [0.2, 0.4]],
            [[0.5, 0.5], [0.3, 0.3]],
            [[0.2, 0.2], [0.6, 0.6]],
        )
        assert observed_rr(d) == pytest.approx(3.0, rel=1e-14)

    def test_exchangeable(self):
        t = [[0.2, 0.3], [0.2, 0.3]]
        d = make(t, [[0.4, 0.7], [0.4, 0.7]], [[0.1, 0.5], [0.1, 0.5]])
        assert observed_rr(d) == pytest.approx(1.0, rel=1e-15)

    def test_matches_hand_enumeration(self):
        d = sample_joint(2, 3)
        # 16 cells P(a, u, s, y) written out longhand
        num = {0: 0.0, 1: 0.0}
        den = {0: 0.0, 1: 0.0}
        for a in (0, 1):
            for u in (0, 1):
                for y in (0, 1):
                    cell = d.p_au[a, u] * d.p_s_given_au[a, u] * (
                        d.p_y_given_au[a, u] if y else 1 - d.p_y_given_au[a, u]
                    )
                    den[a] += cell
                    if y:
                        num[a] += cell
        expected = (num[1] / den[1]) / (num[0] / den[0])
        assert observed_rr(d) == pytest.approx(expected, rel=1e-12)


class TestTrueRR:
    def test_no_u_dependence(self):
        d = make(
            [[0.1, 0.3], [0.2, 0.4]],
            [[0.9, 0.1], [0.2, 0.6]],
            [[0.2, 0.2], [0.5, 0.5]],
        )
        assert true_rr_total(d) == pytest.approx(2.5, rel=1e-14)
        assert true_rr_selected(d) == pytest.approx(observed_rr(d), rel=1e-14)

    def test_forms_agree(self):
        batch = sample_batch(4, 9, 0, 2000)
        assert rel_err(true_rr_total(batch), true_rr_total_direct(batch)) <= 1e-12

    def test_matches_enumeration_k3(self):
        batch = sample_batch(3, 1, 0, 500)
        ref = enumerate_quantities(batch)
        assert rel_err(true_rr_total(batch), ref["true_rr_total"]) <= 1e-12

    def test_selected_equals_observed_without_induced_association(self):
        # P(a, u) = P(a) P(u) and selection depends on u only => P(u | a, S=1) free of a
        p_a = np.array([0.3, 0.7])
        p_u = np.array([0.2, 0.5, 0.3])
        s = np.array([0.1, 0.6, 0.9])
        d = make(np.outer(p_a, p_u), [s, s], [[0.1, 0.4, 0.2], [0.3, 0.35, 0.9]])
        assert true_rr_selected(d) == pytest.approx(observed_rr(d), rel=1e-13)

    def test_selected_matches_enumeration(self):
        batch = sample_batch(2, 4, 0, 500)
        ref = enumerate_quantities(batch)
        assert rel_err(true_rr_selected(batch), ref["true_rr_selected"]) <= 1e-12
        assert rel_err(observed_rr(batch), ref["observed_rr"]) <= 1e-12


class TestRealizedParams:
    def test_flat_outcome(self):
        d = make([[0.1, 0.3], [0.2, 0.4]], [[0.9, 0.1], [0.2, 0.6]], [[0.3, 0.3], [0.5, 0.5]])
        p = realized_params(d, Scenario.GENERAL)
        assert p.rr_uy_a1 == pytest.approx(1) and p.rr_uy_a0 == pytest.approx(1)

    def test_flat_selection(self):
        d = make([[0.1, 0.3], [0.2, 0.4]], [[0.4, 0.4], [0.7, 0.7]], [[0.1, 0.3], [0.5, 0.2]])
        p = realized_params(d, Scenario.GENERAL)
        assert p.rr_su_a1 == pytest.approx(1) and p.rr_su_a0 == pytest.approx(1)

    def test_matches_pairwise_scan(self):
        for i in range(50):
            d = sample_joint(3, i)
            ref = enumerate_quantities(d)
            g = realized_params(d, Scenario.GENERAL)
            for name in ("rr_uy_a1", "rr_su_a1", "rr_uy_a0", "rr_su_a0"):
                assert getattr(g, name) == pytest.approx(float(ref[name]), rel=1e-12)
            sel = realized_params(d, Scenario.SELECTED)
            assert sel.rr_uy_s1 == pytest.approx(float(ref["rr_uy_s1"]), rel=1e-12)
            assert sel.association == pytest.approx(float(ref["rr_au_s1"]), rel=1e-12)

    def test_scenario_shapes(self):
        d = sample_joint(3, 0)
        g = realized_params(d, Scenario.GENERAL)
        inc = realized_params(d, Scenario.DIRECTIONAL_INCREASED)
        dec = realized_params(d, Scenario.DIRECTIONAL_DECREASED)
        assert (inc.rr_uy, inc.rr_su) == (g.rr_uy_a1, g.rr_su_a1)
        assert (dec.rr_uy, dec.rr_su) == (g.rr_uy_a0, g.rr_su_a0)
        assert realized_params(d, Scenario.S_EQUALS_U) == SEqualsU(g.rr_uy_a1, g.rr_uy_a0)
        assert realized_params(d, Scenario.S_EQUALS_U_DECREASED).rr_uy == g.rr_uy_a0
        assert isinstance(realized_params(d, Scenario.SELECTED), SelectedPopulation)


class TestVerifyBound:
    def test_general_holds(self):
        for i in range(200):
            check = verify_bound(sample_joint(2 + i % 3, i), Scenario.GENERAL)
            assert check.holds and check.bias >= 1

    def test_no_bias(self):
        d = make([[0.1, 0.3], [0.2, 0.4]], [[0.5, 0.5], [0.3, 0.3]], [[0.2, 0.2], [0.6, 0.6]])
        check = verify_bound(d, Scenario.GENERAL)
        assert check.holds
        assert check.bias == pytest.approx(1, rel=1e-14)
        assert check.bound == pytest.approx(1, rel=1e-14)

    def test_uses_bounds_core(self):
        d = sample_joint(3, 17)
        check = verify_bound(d, Scenario.GENERAL)
        oriented = d if observed_rr(d) >= true_rr_total(d) else d.recoded()
        assert check.bound == bounding_factor(realized_params(oriented, Scenario.GENERAL)).value

    def test_directional_skip(self):
        results = [verify_bound(sample_joint(2, i), Scenario.DIRECTIONAL_INCREASED) for i in range(100)]
        skipped = [r for r in results if r is None]
        assert 0 < len(skipped) < 100
        assert all(r.holds for r in results if r is not None)

    def test_directional_precondition_checked(self):
        for i in range(100):
            d = sample_joint(3, i)
            check = verify_bound(d, Scenario.DIRECTIONAL_DECREASED)
            ratios = selection_outcome_ratios(d)
            assert (check is not None) == bool(np.all(ratios < 1))

    def test_result_2_on_s_equals_u(self):
        for i in range(300):
            d = sample_joint(2, i, s_equals_u=True)
            check = verify_bound(d, Scenario.S_EQUALS_U)
            assert check.holds
            assert check.bound == bounding_factor(
                realized_params(d if observed_rr(d) >= true_rr_total(d) else d.recoded(), Scenario.S_EQUALS_U)
            ).value


class TestRunVerification:
    @pytest.mark.parametrize("scenario", list(Scenario))
    def test_no_violations(self, scenario):
        report = run_verification(2, scenario, 3000, seed=5)
        assert report.violations == 0
        assert report.samples == 3000
        assert 0 < report.max_ratio <= 1 + 1e-9

    def test_schedule_independent(self):
        a = run_verification(3, Scenario.GENERAL, 5000, seed=2)
        b = run_verification(3, Scenario.GENERAL, 5000, seed=2, workers=4, chunk_size=700)
        assert a.to_dict() == b.to_dict()

    def test_single_sample(self):
        report = run_verification(2, Scenario.SELECTED, 1, seed=0)
        assert report.samples == 1 and report.worst_case is not None

    def test_s_equals_u_needs_binary(self):
        with pytest.raises(ValueError):
            run_verification(3, Scenario.S_EQUALS_U, 10, seed=0)

    def test_worst_case_reproduces_ratio(self):
        report = run_verification(2, Scenario.GENERAL, 2000, seed=8)
        check = verify_bound(report.worst_case, Scenario.GENERAL)
        assert check.bias / check.bound == pytest.approx(report.max_ratio, rel=1e-12)


class TestTightness:
    def test_general_ratio_in_range(self):
        report = tightness_search(2, Scenario.GENERAL, 10_000, seed=1)
        assert report.violations == 0
        assert 0 < report.max_ratio <= 1 + 1e-9
        report.worst_case.validate()

    def test_deterministic(self):
        a = tightness_search(2, Scenario.DIRECTIONAL_INCREASED, 3000, seed=4)
        b = tightness_search(2, Scenario.DIRECTIONAL_INCREASED, 3000, seed=4)
        assert a.to_dict() == b.to_dict()
        assert a.samples == 3000

    def test_s_equals_u_directional_gets_close(self):
        report = tightness_search(2, Scenario.S_EQUALS_U_INCREASED, 20_000, seed=0)
        assert report.max_ratio >= 0.95
        assert report.violations == 0

    def test_budget(self):
        with pytest.raises(ValueError):
            tightness_search(2, Scenario.GENERAL, 0, seed=0)
        assert tightness_search(2, Scenario.GENERAL, 1, seed=0).samples == 1
