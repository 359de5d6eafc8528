import itertools
import math

import numpy as np
import pytest

from conftest import STANDARD_INIT, condition_params
from delaygame import (
    DomainError,
    IntegrationError,
    IntegratorConfig,
    Trajectory,
    detect_convergence,
    history_lookup,
    integrate,
    replicator_rhs,
)
from delaygame.dde import hermite_cubic


def reference_rk4(params, init, dt, n):
    """Textbook RK4 on the undelayed field, written against the public rhs."""
    u = np.array(init, dtype=float)
    out = [u.copy()]
    f = lambda s: replicator_rhs(params, s)  # noqa: E731
    for _ in range(n):
        k1 = f(u)
        k2 = f(u + dt / 2 * k1)
        k3 = f(u + dt / 2 * k2)
        k4 = f(u + dt * k3)
        u = u + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        out.append(u.copy())
    return np.array(out)


class TestConfig:
    def test_step_snapped_to_delay(self):
        cfg = IntegratorConfig(dt=0.003, tau=0.01)
        assert cfg.delay_steps == 4
        assert cfg.step == pytest.approx(0.0025)

    def test_exact_division_kept(self):
        cfg = IntegratorConfig(dt=1e-3, tau=0.01)
        assert cfg.delay_steps == 10
        assert cfg.step == pytest.approx(1e-3)
        assert cfg.n_steps == 50_000

    def test_no_delay(self):
        cfg = IntegratorConfig()
        assert cfg.delay_steps == 0 and cfg.step == 1e-3

    @pytest.mark.parametrize(
        "kwargs", [dict(dt=0), dict(dt=-1), dict(t_end=0), dict(tau=-0.1), dict(interpolation="spline")]
    )
    def test_invalid(self, kwargs):
        with pytest.raises(DomainError):
            IntegratorConfig(**kwargs)


class TestIntegrate:
    def test_condition1_reaches_gamma4(self):
        traj = integrate(condition_params(1), STANDARD_INIT)
        assert np.abs(np.array(traj.final) - (0, 0, 1)).max() < 1e-3
        assert traj.limit == (0, 0, 1)
        assert traj.times[0] == 0
        np.testing.assert_allclose(np.diff(traj.times), 1e-3, rtol=1e-9)

    @pytest.mark.parametrize("tau", [0.0, 0.03])
    def test_corner_start_is_constant(self, tau):
        p = condition_params(2, tau=tau)
        for corner in itertools.product((0.0, 1.0), repeat=3):
            traj = integrate(p, corner, IntegratorConfig(t_end=1.0, tau=tau))
            assert (traj.states == np.array(corner)).all()
            assert traj.converged_at == 0.0

    def test_no_delay_matches_reference_rk4(self):
        p = condition_params(1, tau=0.0)
        cfg = IntegratorConfig(dt=1e-3, t_end=5.0)
        traj = integrate(p, STANDARD_INIT, cfg)
        ref = reference_rk4(p, STANDARD_INIT, cfg.step, cfg.n_steps)
        assert np.abs(traj.states - ref).max() <= 1e-12

    def test_same_limit_with_and_without_delay(self):
        a = integrate(condition_params(1, tau=0.0), STANDARD_INIT)
        b = integrate(condition_params(1, tau=0.01), STANDARD_INIT)
        assert a.limit == b.limit == (0, 0, 1)

    def test_small_delay_does_not_converge_sooner(self):
        # Stated expectation: converged_at(tau = 0.01) >= converged_at(tau = 0).
        a = integrate(condition_params(1, tau=0.0), STANDARD_INIT)
        b = integrate(condition_params(1, tau=0.01), STANDARD_INIT)
        assert b.converged_at >= a.converged_at

    @pytest.mark.parametrize("tau", [0.01, 0.05])
    def test_step_halving_order(self, tau):
        p = condition_params(1, tau=tau)
        h = tau / 2

        def run(step):
            return integrate(p, STANDARD_INIT, IntegratorConfig(dt=step, t_end=2.0, tau=tau)).states

        ref = run(h / 16)
        coarse = np.abs(run(h) - ref[::16]).max()
        fine = np.abs(run(h / 2) - ref[::8]).max()
        assert math.log2(coarse / fine) >= 3

    def test_deterministic(self):
        p = condition_params(3, tau=0.05)
        a = integrate(p, STANDARD_INIT, IntegratorConfig(t_end=5, tau=0.05))
        b = integrate(p, STANDARD_INIT, IntegratorConfig(t_end=5, tau=0.05))
        assert a.states.tobytes() == b.states.tobytes()
        assert a.derivs.tobytes() == b.derivs.tobytes()

    @pytest.mark.parametrize("number", [1, 2, 3])
    @pytest.mark.parametrize("tau", [0.0, 0.01])
    def test_stays_in_unit_cube_for_short_delays(self, number, tau):
        traj = integrate(condition_params(number, tau=tau), STANDARD_INIT)
        assert traj.in_band

    def test_delayed_overshoot_leaves_unit_cube(self):
        # With a lag the IAEA keeps reacting to a stale z < 1 after z reached 1.
        traj = integrate(condition_params(1, tau=0.05), STANDARD_INIT)
        assert traj.states[:, 2].max() > 1.05
        assert traj.limit == (0, 0, 1)

    def test_unstable_delay_raises_with_time(self):
        with pytest.raises(IntegrationError) as info:
            integrate(condition_params(1, tau=0.2), STANDARD_INIT)
        assert 0 < info.value.time < 50

    def test_linear_interpolation_option(self):
        cfg = IntegratorConfig(tau=0.01, interpolation="linear")
        traj = integrate(condition_params(1), STANDARD_INIT, cfg)
        assert traj.limit == (0, 0, 1)

    def test_init_outside_cube_rejected(self):
        with pytest.raises(DomainError):
            integrate(condition_params(1), (1.5, 0.5, 0.5))


def _cubic_trajectory(h, n):
    t = np.arange(n + 1) * h
    u = np.stack([t**3 - 2 * t, 0.5 * t**2, np.full_like(t, 0.25)], axis=1)
    du = np.stack([3 * t**2 - 2, t, np.zeros_like(t)], axis=1)
    return Trajectory(times=t, states=u, derivs=du, tau=0.1)


class TestHistoryLookup:
    def test_zero_and_prehistory(self):
        traj = _cubic_trajectory(0.1, 10)
        assert history_lookup(traj, 0.0) == tuple(traj.states[0])
        assert history_lookup(traj, -0.05) == tuple(traj.states[0])

    def test_grid_nodes_bit_exact(self):
        traj = integrate(condition_params(1), STANDARD_INIT, IntegratorConfig(t_end=0.5, tau=0.01))
        for k in (1, 7, 123, 500):
            assert history_lookup(traj, traj.times[k]) == tuple(traj.states[k])

    def test_cubic_reproduced(self):
        traj = _cubic_trajectory(0.1, 10)
        for t in (0.05, 0.33, 0.871):
            expected = (t**3 - 2 * t, 0.5 * t**2, 0.25)
            np.testing.assert_allclose(history_lookup(traj, t), expected, rtol=0, atol=1e-13)

    def test_fourth_order_on_smooth_function(self):
        errors = []
        for h in (0.1, 0.05, 0.025):
            t = np.arange(int(round(1 / h)) + 1) * h
            u = np.stack([np.sin(3 * t)] * 3, axis=1)
            du = np.stack([3 * np.cos(3 * t)] * 3, axis=1)
            traj = Trajectory(times=t, states=u, derivs=du)
            q = np.linspace(0.01, 0.99, 97)
            errors.append(max(abs(history_lookup(traj, s).x - math.sin(3 * s)) for s in q))
        rates = [math.log2(a / b) for a, b in zip(errors, errors[1:])]
        assert min(rates) > 3.7

    def test_beyond_front(self):
        traj = _cubic_trajectory(0.1, 10)
        with pytest.raises(RuntimeError):
            history_lookup(traj, 1.05)
        with pytest.raises(RuntimeError):
            history_lookup(traj, 0.45, front=4)

    def test_before_prehistory(self):
        with pytest.raises(DomainError):
            history_lookup(_cubic_trajectory(0.1, 10), -0.2)

    def test_linear_mode(self):
        traj = _cubic_trajectory(0.1, 10)
        traj.interpolation = "linear"
        got = history_lookup(traj, 0.25).y
        assert got == pytest.approx(0.5 * (traj.states[2, 1] + traj.states[3, 1]))

    def test_integrator_midpoints_agree_with_lookup(self):
        # the stage value the integrator uses at t + h/2 - tau is the Hermite midpoint
        traj = integrate(condition_params(3), STANDARD_INIT, IntegratorConfig(t_end=0.3, tau=0.01))
        k, h = 40, traj.dt
        mid = hermite_cubic(traj.states[k], traj.states[k + 1], traj.derivs[k], traj.derivs[k + 1], h, 0.5)
        np.testing.assert_allclose(history_lookup(traj, (k + 0.5) * h), mid, rtol=0, atol=1e-15)


class TestDetectConvergence:
    def test_constant_at_target(self):
        t = np.arange(5) * 0.1
        traj = Trajectory(times=t, states=np.tile([0.0, 0.0, 1.0], (5, 1)), derivs=np.zeros((5, 3)))
        assert detect_convergence(traj, (0, 0, 1), 1e-3) == 0.0

    def test_ends_outside(self):
        t = np.arange(5) * 0.1
        states = np.tile([0.0, 0.0, 1.0], (5, 1))
        states[-1, 0] = 0.01
        traj = Trajectory(times=t, states=states, derivs=np.zeros((5, 3)))
        assert detect_convergence(traj, (0, 0, 1), 1e-3) is None

    def test_leaves_and_returns(self):
        t = np.arange(6) * 0.1
        states = np.tile([0.0, 0.0, 1.0], (6, 1))
        states[2, 1] = 0.5
        traj = Trajectory(times=t, states=states, derivs=np.zeros((6, 3)))
        assert detect_convergence(traj, (0, 0, 1), 1e-3) == pytest.approx(0.3)

    def test_condition1_run_finite(self):
        traj = integrate(condition_params(1), STANDARD_INIT)
        T = detect_convergence(traj, (0, 0, 1), 1e-3)
        assert T is not None and 0 < T < 50
        assert T == traj.converged_at

    def test_tol_must_be_positive(self):
        with pytest.raises(DomainError):
            detect_convergence(_cubic_trajectory(0.1, 3), (0, 0, 0), 0.0)
