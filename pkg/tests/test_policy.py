import math

import numpy as np
import pytest

from qubed.design import INFO_GAIN, NEG_VARIANCE, DesignDomain, optimize_experiment
from qubed.inference import make_uniform_prior
from qubed.model import LikelihoodModel
from qubed.policy import (
    Schedule,
    greedy_step,
    nyquist_schedule,
    run_adaptive,
    run_schedule,
)

IDEAL = LikelihoodModel.ideal()
DOMAIN = DesignDomain()


class TestSchedule:
    def test_nyquist_times(self):
        sched = nyquist_schedule(4, omega_max=1.0)
        np.testing.assert_allclose(sched.times,
                                   [math.pi, 2 * math.pi, 3 * math.pi, 4 * math.pi],
                                   rtol=1e-15)

    def test_nyquist_spacing_scales_with_omega_max(self):
        sched = nyquist_schedule(3, omega_max=2.0)
        np.testing.assert_allclose(sched.times,
                                   [math.pi / 2, math.pi, 3 * math.pi / 2], rtol=1e-15)

    def test_rejects_bad_arguments(self):
        with pytest.raises(ValueError):
            nyquist_schedule(0, omega_max=1.0)
        with pytest.raises(ValueError):
            nyquist_schedule(3, omega_max=0.0)
        with pytest.raises(ValueError):
            Schedule(())
        with pytest.raises(ValueError):
            Schedule((1.0, -2.0))

    def test_length(self):
        assert len(Schedule((1.0, 2.0, 3.0))) == 3


class TestGreedyStep:
    def test_matches_optimizer(self):
        prior = make_uniform_prior(1000)
        exp = greedy_step(prior, IDEAL, NEG_VARIANCE, DOMAIN)
        t_hat, _ = optimize_experiment(prior, IDEAL, NEG_VARIANCE, DOMAIN)
        assert exp.time == t_hat


class TestRunAdaptive:
    def test_reproducible_for_fixed_seed(self):
        prior = make_uniform_prior(500)
        a = run_adaptive(0.5, IDEAL, prior, 5, NEG_VARIANCE, DOMAIN, seed=42)
        b = run_adaptive(0.5, IDEAL, prior, 5, NEG_VARIANCE, DOMAIN, seed=42)
        assert a == b

    def test_pinned_seed_zero_trajectory(self):
        # regression anchor: the first greedy times and outcomes for seed 0
        prior = make_uniform_prior(1000)
        rec = run_adaptive(0.5, IDEAL, prior, 4, NEG_VARIANCE, DOMAIN, seed=0)
        times = [s.time for s in rec.steps]
        assert times[0] == pytest.approx(3.5702206690710474, rel=1e-9)
        assert times[1] == pytest.approx(7.018634115127004, rel=1e-9)
        assert times[2] == pytest.approx(8.44735339924394, rel=1e-9)
        assert [s.outcome for s in rec.steps] == [1, 1, 0, 0]
        assert rec.true_omega == 0.5
        assert rec.seed == 0

    def test_variance_contracts_over_a_long_run(self):
        prior = make_uniform_prior(1000)
        rec = run_adaptive(0.5, IDEAL, prior, 12, NEG_VARIANCE, DOMAIN, seed=0)
        assert len(rec.steps) == 12
        assert rec.final_variance < 1.0 / 12.0
        assert rec.final_variance == rec.steps[-1].posterior_variance
        assert rec.final_estimate == rec.steps[-1].posterior_mean

    def test_infogain_policy_runs(self):
        prior = make_uniform_prior(500)
        rec = run_adaptive(0.3, IDEAL, prior, 3, INFO_GAIN, DOMAIN, seed=1)
        assert len(rec.steps) == 3
        assert all(0.0 <= s.time <= DOMAIN.t_max for s in rec.steps)

    def test_rejects_omega_outside_support(self):
        prior = make_uniform_prior(100)
        with pytest.raises(ValueError):
            run_adaptive(1.5, IDEAL, prior, 2, NEG_VARIANCE, DOMAIN, seed=0)

    def test_rejects_nonpositive_count(self):
        prior = make_uniform_prior(100)
        with pytest.raises(ValueError):
            run_adaptive(0.5, IDEAL, prior, 0, NEG_VARIANCE, DOMAIN, seed=0)


class TestRunSchedule:
    def test_uses_each_scheduled_time_in_order(self):
        prior = make_uniform_prior(500)
        sched = Schedule((1.0, 5.0, 2.0))
        rec = run_schedule(0.4, IDEAL, prior, sched, seed=3)
        assert [s.time for s in rec.steps] == [1.0, 5.0, 2.0]

    def test_zero_time_schedule_learns_nothing(self):
        prior = make_uniform_prior(1000)
        rec = run_schedule(0.7, IDEAL, prior, Schedule((0.0, 0.0, 0.0)), seed=9)
        for step in rec.steps:
            assert step.outcome == 0
            assert step.posterior_mean == pytest.approx(0.5, abs=1e-12)
            assert step.posterior_variance == pytest.approx(1.0 / 12.0, abs=1e-6)

    def test_nyquist_run_is_reproducible(self):
        prior = make_uniform_prior(500)
        sched = nyquist_schedule(6, omega_max=1.0)
        a = run_schedule(0.5, IDEAL, prior, sched, seed=8)
        b = run_schedule(0.5, IDEAL, prior, sched, seed=8)
        assert a == b

    def test_different_seeds_can_differ(self):
        prior = make_uniform_prior(500)
        sched = nyquist_schedule(8, omega_max=1.0)
        outcomes = {tuple(s.outcome for s in run_schedule(0.5, IDEAL, prior, sched,
                                                          seed=seed).steps)
                    for seed in range(6)}
        assert len(outcomes) > 1
