import random
from fractions import Fraction

import pytest

from costly_secretary import (
    GameConfig,
    PolicySpec,
    StageRule,
    StrategyProfile,
    closed_form_success,
    exact_expected_tau,
    exact_state_value,
    exact_success_probability,
    full_learning_audit,
    full_learning_counterexample,
    optimality_scan,
    policy_success_probability,
    solve_values,
)

COST_GRID = [k / 10 for k in range(10)]


class TestExactSuccessProbability:
    def test_equilibrium_three_half(self):
        cfg = GameConfig(3, 0.5)
        pi = exact_success_probability(cfg, PolicySpec.equilibrium(cfg))
        assert pi == Fraction(5, 12)

    def test_equilibrium_two_free(self):
        cfg = GameConfig(2, 0.0)
        pi = exact_success_probability(cfg, PolicySpec.equilibrium(cfg))
        assert pi == Fraction(1, 2)

    def test_uniform_masses(self):
        cfg = GameConfig(3, 0.0)
        policy = PolicySpec.from_acceptance_masses([Fraction(1, 3)] * 3)
        assert exact_success_probability(cfg, policy) == Fraction(1, 3)

    def test_random_mass_vectors_give_uniform_success(self):
        rand = random.Random(424242)
        for n_apps in range(2, 7):
            cfg = GameConfig(n_apps, 0.0)
            for _ in range(5):
                weights = [rand.randint(1, 50) for _ in range(n_apps)]
                total = sum(weights)
                masses = [Fraction(w, total) for w in weights]
                policy = PolicySpec.from_acceptance_masses(masses)
                assert exact_success_probability(cfg, policy) == Fraction(1, n_apps)

    def test_three_way_agreement_small_grid(self):
        for cost in (0.0, 0.3, 0.7):
            for n_apps in range(2, 7):
                cfg = GameConfig(n_apps, cost)
                dp = solve_values(cfg).success_probability
                enum = float(exact_success_probability(cfg, PolicySpec.equilibrium(cfg)))
                assert abs(enum - dp) <= 1e-12
                assert abs(closed_form_success(cfg) - dp) <= 1e-12

    def test_rejects_large_instances(self):
        cfg = GameConfig(11, 0.0)
        with pytest.raises(ValueError):
            exact_success_probability(cfg, PolicySpec.equilibrium(cfg))

    def test_rejects_underfunded_learning_stage(self):
        cfg = GameConfig(3, 0.5)
        policy = PolicySpec(accept_probs=(0.2, 1.0, 1.0), learning=(True,) * 3)
        with pytest.raises(ValueError):
            exact_success_probability(cfg, policy)


class TestExactExpectedTau:
    def test_three_half(self):
        cfg = GameConfig(3, 0.5)
        tau = exact_expected_tau(cfg, PolicySpec.equilibrium(cfg))
        assert tau == Fraction(5, 4)

    def test_two_free(self):
        cfg = GameConfig(2, 0.0)
        assert exact_expected_tau(cfg, PolicySpec.equilibrium(cfg)) == 1

    def test_identity_with_success(self):
        # a record accepted at stage n is best with probability exactly n/N,
        # so the stopping mass is N times the success mass, rationally
        for n_apps, cost in [(4, 0.3), (5, 0.8), (6, 0.0), (7, 0.45)]:
            cfg = GameConfig(n_apps, cost)
            policy = PolicySpec.equilibrium(cfg)
            assert exact_expected_tau(cfg, policy) == n_apps * exact_success_probability(
                cfg, policy
            )


class TestPolicyEvaluator:
    def test_matches_enumeration_on_random_policies(self):
        rand = random.Random(90125)
        for n_apps in (3, 4, 5):
            for cost in (0.0, 0.4):
                cfg = GameConfig(n_apps, cost)
                for _ in range(40):
                    probs = []
                    flags = []
                    for _ in range(n_apps):
                        learn = rand.random() < 0.6
                        if learn:
                            q = 0.0 if rand.random() < 0.2 else rand.uniform(cost, 1.0)
                        else:
                            q = rand.uniform(0.0, 1.0)
                        probs.append(q)
                        flags.append(learn)
                    policy = PolicySpec(tuple(probs), tuple(flags))
                    fast = policy_success_probability(cfg, policy)
                    slow = float(exact_success_probability(cfg, policy))
                    assert abs(fast - slow) <= 1e-13

    def test_hand_algebra_two_applicants(self):
        # accept stage-1 record with probability c, stage-2 record outright:
        # c/2 + (1-c)/2 = 1/2; blind-accepting applicant 1 also gives 1/2
        cfg = GameConfig(2, 0.3)
        learn = PolicySpec(accept_probs=(0.3, 1.0), learning=(True, True))
        assert policy_success_probability(cfg, learn) == pytest.approx(0.5, abs=1e-15)
        blind_first = PolicySpec(accept_probs=(1.0, 0.0), learning=(False, False))
        assert policy_success_probability(cfg, blind_first) == pytest.approx(
            0.5, abs=1e-15
        )

    def test_ignore_first_then_full_learning_scores_less(self):
        cfg = GameConfig(3, 0.5)
        ignore_first = PolicySpec(
            accept_probs=(0.0, 1.0, 1.0), learning=(False, True, True)
        )
        value = policy_success_probability(cfg, ignore_first)
        assert value == pytest.approx(1 / 3, abs=1e-15)
        assert value < 5 / 12 - 1e-9


class TestOptimalityScan:
    def test_three_half_quarter_grid(self):
        cfg = GameConfig(3, 0.5)
        report = optimality_scan(cfg, grid_step=0.25)
        assert report.max_success == pytest.approx(5 / 12, abs=1e-12)
        assert report.equilibrium_attains_max
        found = {(p.learning, p.accept_probs) for p in report.maximizers}
        assert ((True, True, True), (0.5, 1.0, 1.0)) in found
        # blindly accepting the last applicant only ever fires on non-records,
        # which lose anyway, so that variant ties; nothing beats 5/12
        assert all(
            policy_success_probability(cfg, p) <= 5 / 12 + 1e-12
            for p in report.maximizers
        )

    def test_two_applicants_argmax_not_unique(self):
        report = optimality_scan(GameConfig(2, 0.3), grid_step=0.1)
        assert report.max_success == pytest.approx(0.5, abs=1e-12)
        assert report.equilibrium_attains_max
        assert report.n_maximizers > 1
        probs = {(p.learning, p.accept_probs) for p in report.maximizers}
        # blind-accepting applicant 1 outright ties the solved policy
        assert ((False, False), (1.0, 0.0)) in probs

    def test_four_applicants(self):
        cfg = GameConfig(4, 0.25)
        report = optimality_scan(cfg, grid_step=0.25)
        dp = solve_values(cfg).success_probability
        assert report.max_success <= dp + 1e-12
        assert report.equilibrium_attains_max

    def test_budget_and_validation(self):
        with pytest.raises(ValueError):
            optimality_scan(GameConfig(5, 0.2), grid_step=0.05)
        with pytest.raises(ValueError):
            optimality_scan(GameConfig(9, 0.2), grid_step=0.25)
        with pytest.raises(ValueError):
            optimality_scan(GameConfig(3, 0.2), grid_step=0.3)
        with pytest.raises(ValueError):
            optimality_scan(GameConfig(4, 0.2), grid_step=0.25, max_policies=10)


class TestFullLearningAudit:
    def test_equilibrium_passes(self):
        assert full_learning_audit(GameConfig(3, 0.5))
        assert full_learning_audit(GameConfig(5, 0.0))

    def test_forced_decline_fails_with_counterexample(self):
        cfg = GameConfig(3, 0.5)
        rules = list(StrategyProfile.equilibrium(cfg).stages)
        rules[1] = StageRule(True, 1.0, force_decline=True)
        profile = StrategyProfile(0.5, tuple(rules))
        assert not full_learning_audit(cfg, profile)
        order, stage = full_learning_counterexample(cfg, profile)
        # the prefix breaks exactly when applicant 2 should have revealed
        assert stage == 2
        assert order[1] > order[0]

    def test_blind_stage_fails(self):
        cfg = GameConfig(3, 0.2)
        profile = StrategyProfile(
            0.2,
            (
                StageRule(False, 0.0),
                StageRule(True, 1.0),
                StageRule(True, 1.0),
            ),
        )
        assert not full_learning_audit(cfg, profile)

    def test_rejects_large_instances(self):
        with pytest.raises(ValueError):
            full_learning_audit(GameConfig(11, 0.1))


class TestExactStateValue:
    def test_matches_dp_tables(self):
        for cost in (0.0, 0.3, 0.7):
            for n_apps in (2, 3, 5, 6):
                cfg = GameConfig(n_apps, cost)
                tables = solve_values(cfg)
                for stage in range(1, n_apps + 1):
                    v0 = float(exact_state_value(cfg, stage, 0))
                    v1 = float(exact_state_value(cfg, stage, 1))
                    assert abs(v0 - stage * tables.v0[stage]) <= 1e-12
                    assert abs(v1 - stage * tables.v1[stage]) <= 1e-12

    def test_scaled_state0_values_monotone_in_instance_size(self):
        # N * V must not fall as the market grows, for each fixed stage;
        # exact rational comparison across N up to 8
        for cost in (0.0, 0.5):
            for stage in range(1, 5):
                values = []
                for n_apps in range(max(stage, 2), 9):
                    cfg = GameConfig(n_apps, cost)
                    values.append(n_apps * exact_state_value(cfg, stage, 0))
                assert all(a <= b for a, b in zip(values, values[1:]))

    def test_terminal_state(self):
        cfg = GameConfig(4, 0.2)
        assert exact_state_value(cfg, 4, 0) == 0
        assert exact_state_value(cfg, 4, 1) == 1

    def test_validation(self):
        cfg = GameConfig(4, 0.2)
        with pytest.raises(ValueError):
            exact_state_value(cfg, 5, 0)
        with pytest.raises(ValueError):
            exact_state_value(cfg, 1, 2)
