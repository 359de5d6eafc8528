"""Fixed-step RK4 integration of the delayed replicator system.

The delay is handled by the method of steps: with the step size snapped so
that ``tau / dt`` is an integer ``m``, every RK4 stage of step ``k`` reads the
solution at times ``t_k - tau``, ``t_k + dt/2 - tau`` and ``t_k + dt - tau``,
all of which lie in the already computed past. A whole delay interval of
``m`` steps can therefore be advanced at once.

Off-grid history values come from cubic Hermite interpolation using the
stored derivatives (or from linear interpolation, if configured). The
pre-history on ``[-tau, 0]`` is the constant initial state.
"""

from __future__ import annotations

import dataclasses
import math
from typing import Optional

import numpy as np

from .errors import DomainError, IntegrationError
from .game import BAND, GameParams, StrategyState, rhs_coefficients, rhs_from_coefficients

INTERPOLATIONS = ("hermite-cubic", "linear")


@dataclasses.dataclass(frozen=True)
class IntegratorConfig:
    """Integrator settings.

    ``dt`` is the requested step; :attr:`step` is the one actually used,
    shrunk when needed so that the delay is a whole number of steps.
    """

    dt: float = 1e-3
    t_end: float = 50.0
    tau: float = 0.0
    interpolation: str = "hermite-cubic"
    convergence_tol: float = 1e-3

    def __post_init__(self):
        for name in ("dt", "t_end", "convergence_tol"):
            value = getattr(self, name)
            if not (math.isfinite(value) and value > 0):
                raise DomainError(f"{name} must be positive and finite, got {value!r}")
        if not (math.isfinite(self.tau) and self.tau >= 0):
            raise DomainError(f"tau must be non-negative and finite, got {self.tau!r}")
        if self.interpolation not in INTERPOLATIONS:
            raise DomainError(
                f"interpolation must be one of {INTERPOLATIONS}, got {self.interpolation!r}"
            )

    @property
    def delay_steps(self) -> int:
        """Number of steps per delay interval (0 without delay)."""
        if self.tau == 0:
            return 0
        return max(1, math.ceil(self.tau / self.dt - 1e-9))

    @property
    def step(self) -> float:
        m = self.delay_steps
        return self.tau / m if m else self.dt

    @property
    def n_steps(self) -> int:
        return max(1, math.ceil(self.t_end / self.step - 1e-9))

    def replace(self, **changes) -> IntegratorConfig:
        return dataclasses.replace(self, **changes)


@dataclasses.dataclass
class Trajectory:
    """Solution on a uniform grid.

    ``derivs[k]`` is the right derivative of the solution at ``times[k]``,
    which is what the dense output between ``k`` and ``k + 1`` needs.
    """

    times: np.ndarray
    states: np.ndarray
    derivs: np.ndarray
    tau: float = 0.0
    interpolation: str = "hermite-cubic"
    converged_at: Optional[float] = None
    limit: Optional[tuple[int, int, int]] = None

    @property
    def dt(self) -> float:
        return float(self.times[1] - self.times[0]) if len(self.times) > 1 else 0.0

    @property
    def init(self) -> StrategyState:
        return StrategyState(*map(float, self.states[0]))

    @property
    def final(self) -> StrategyState:
        return StrategyState(*map(float, self.states[-1]))

    @property
    def band_excursion(self) -> float:
        """Largest distance by which any component left [0, 1]."""
        below = -self.states.min()
        above = self.states.max() - 1.0
        return float(max(0.0, below, above))

    @property
    def in_band(self) -> bool:
        return self.band_excursion <= BAND


def nearest_corner(state) -> tuple[int, int, int]:
    return tuple(int(v >= 0.5) for v in state)


def _hermite_mid(u0, u1, d0, d1, h):
    return 0.5 * (u0 + u1) + 0.125 * h * (d0 - d1)


def integrate_ode(coef, init, h, n):
    """Classic RK4 on plain floats; the ``tau = 0`` path."""
    f = rhs_from_coefficients
    states = np.empty((n + 1, 3))
    derivs = np.empty((n + 1, 3))
    x, y, z = init
    states[0] = init
    for i in range(n):
        k1 = f(coef, x, y, z)
        k2 = f(coef, x + 0.5 * h * k1[0], y + 0.5 * h * k1[1], z + 0.5 * h * k1[2])
        k3 = f(coef, x + 0.5 * h * k2[0], y + 0.5 * h * k2[1], z + 0.5 * h * k2[2])
        k4 = f(coef, x + h * k3[0], y + h * k3[1], z + h * k3[2])
        derivs[i] = k1
        x = x + h / 6 * (k1[0] + 2 * k2[0] + 2 * k3[0] + k4[0])
        y = y + h / 6 * (k1[1] + 2 * k2[1] + 2 * k3[1] + k4[1])
        z = z + h / 6 * (k1[2] + 2 * k2[2] + 2 * k3[2] + k4[2])
        if not (math.isfinite(x) and math.isfinite(y) and math.isfinite(z)):
            raise IntegrationError("non-finite state", time=(i + 1) * h)
        states[i + 1] = (x, y, z)
    derivs[n] = f(coef, x, y, z)
    return states, derivs


def _field(coef, u):
    out = np.empty_like(u)
    out[..., 0], out[..., 1], out[..., 2] = rhs_from_coefficients(coef, u[..., 0], u[..., 1], u[..., 2])
    return out


def _advance_block(coef, lag_u, lag_d, last, h, hermite):
    """Advance up to one delay interval.

    ``lag_u`` / ``lag_d`` hold the ``size + 1`` delayed nodes (states and
    right derivatives) feeding ``size`` steps; ``last`` is the current node.
    Returns the new nodes and their derivatives.
    """
    lag0 = lag_u[:, :-1]
    lag1 = lag_u[:, 1:]
    if hermite:
        mid = _hermite_mid(lag0, lag1, lag_d[:, :-1], lag_d[:, 1:], h)
    else:
        mid = 0.5 * (lag0 + lag1)
    k1 = _field(coef, lag0)
    k2 = _field(coef, mid)
    k4 = _field(coef, lag1)
    incr = (h / 6) * (k1 + 4 * k2 + k4)
    new = np.cumsum(np.concatenate([last, incr], axis=1), axis=1)[:, 1:]
    # the derivative at node k + 1 is f(node k + 1 - m), the k4 stage
    return new, k4


def integrate_batch(coef, init, h, n, m, interpolation="hermite-cubic", record=True):
    """Method-of-steps RK4 for a batch of independent delayed systems.

    Parameters
    ----------
    coef : tuple of five arrays of shape ``(B,)`` (see ``rhs_coefficients``).
    init : array of shape ``(B, 3)``.
    h : step size.
    n : number of steps.
    m : steps per delay interval, ``m >= 1``.
    record : keep every node; otherwise only the final node is returned.

    Returns
    -------
    states, derivs : arrays of shape ``(B, n + 1, 3)``, or ``(B, 1, 3)``
        holding the final node when ``record`` is false.
    failed_at : array of shape ``(B,)`` with the first time a non-finite
        value appeared in each system, ``nan`` where none did.

    Systems are advanced elementwise, so each result is independent of what
    else shares the batch.
    """
    init = np.asarray(init, dtype=float)
    batch = init.shape[0]
    coef = tuple(np.asarray(c, dtype=float).reshape(batch, 1) for c in coef)
    hermite = interpolation == "hermite-cubic"
    d0 = _field(coef, init[:, None, :])[:, 0]

    # Row j holds node j - m; rows below m are the flat pre-history. When not
    # recording, only a window of 2m + 1 rows is kept and shifted back.
    rows = n + m + 1 if record else 2 * m + 1
    u = np.empty((batch, rows, 3))
    d = np.empty((batch, rows, 3))
    u[:, : m + 1] = init[:, None, :]
    d[:, : m + 1] = 0.0

    failed_at = np.full(batch, np.nan)
    base = 0  # node index of row m
    with np.errstate(over="ignore", invalid="ignore"):
        start = 0
        while start < n:
            size = min(m, n - start)
            r = start - base  # row of node start - m
            lag_d = d[:, r : r + size + 1]
            if start == 0:
                # left derivative at t = 0 is zero; right derivative is f(init)
                new, new_d = _advance_block(coef, u[:, r : r + size + 1], lag_d, u[:, m : m + 1], h, hermite)
                d[:, m] = d0
            else:
                new, new_d = _advance_block(
                    coef, u[:, r : r + size + 1], lag_d, u[:, r + m : r + m + 1], h, hermite
                )
            u[:, r + m + 1 : r + m + 1 + size] = new
            d[:, r + m + 1 : r + m + 1 + size] = new_d
            bad = ~np.isfinite(new).all(axis=2)
            if bad.any():
                for b in np.flatnonzero(bad.any(axis=1) & np.isnan(failed_at)):
                    failed_at[b] = (start + int(np.argmax(bad[b])) + 1) * h
            start += size
            if not record and start < n:
                # keep nodes start - m .. start at rows 0 .. m
                keep = slice(r + size, r + size + m + 1)
                u[:, : m + 1] = u[:, keep]
                d[:, : m + 1] = d[:, keep]
                base = start
    if record:
        return u[:, m:], d[:, m:], failed_at
    last = n - base + m
    return u[:, last : last + 1], d[:, last : last + 1], failed_at


def integrate(params: GameParams, init, config: Optional[IntegratorConfig] = None) -> Trajectory:
    """Integrate the delayed replicator system from a constant pre-history.

    ``config.tau`` is ignored in favour of ``params.tau`` when the config is
    omitted; a supplied config carries its own delay.
    """
    if config is None:
        config = IntegratorConfig(tau=params.tau)
    init = StrategyState.checked(*init)
    coef = rhs_coefficients(params)
    h = config.step
    n = config.n_steps
    m = config.delay_steps
    if m == 0:
        states, derivs = integrate_ode(coef, tuple(init), h, n)
    else:
        states, derivs, failed_at = integrate_batch(
            coef, np.array([init]), h, n, m, config.interpolation
        )
        if not np.isnan(failed_at[0]):
            raise IntegrationError("non-finite state", time=float(failed_at[0]))
        states, derivs = states[0], derivs[0]
    traj = Trajectory(
        times=np.arange(n + 1) * h,
        states=states,
        derivs=derivs,
        tau=config.tau,
        interpolation=config.interpolation,
    )
    corner = nearest_corner(traj.final)
    traj.converged_at = detect_convergence(traj, corner, config.convergence_tol)
    traj.limit = corner if traj.converged_at is not None else None
    return traj


def history_lookup(trajectory: Trajectory, t_query: float, front: Optional[int] = None) -> StrategyState:
    """Solution value at ``t_query`` from the stored nodes.

    ``front`` is the index of the last node that is valid (defaults to the
    last stored node). Times at or before 0 return the initial state.
    """
    times = trajectory.times
    states = trajectory.states
    if front is None:
        front = len(times) - 1
    if t_query < -trajectory.tau - BAND:
        raise DomainError(f"t = {t_query} precedes the pre-history window")
    if t_query <= 0:
        return StrategyState(*map(float, states[0]))
    h = trajectory.dt
    pos = t_query / h
    k = round(pos)
    if abs(pos - k) <= 1e-9 * max(1.0, abs(pos)):
        if k > front:
            raise RuntimeError(f"t = {t_query} lies beyond the integration front")
        return StrategyState(*map(float, states[k]))
    k = math.floor(pos)
    if k + 1 > front:
        raise RuntimeError(f"t = {t_query} lies beyond the integration front")
    theta = pos - k
    u0, u1 = states[k], states[k + 1]
    if trajectory.interpolation == "linear":
        value = (1 - theta) * u0 + theta * u1
    else:
        d0, d1 = trajectory.derivs[k], trajectory.derivs[k + 1]
        value = hermite_cubic(u0, u1, d0, d1, h, theta)
    return StrategyState(*map(float, value))


def hermite_cubic(u0, u1, d0, d1, h, theta):
    """Cubic Hermite interpolant on ``[t0, t0 + h]`` at fraction ``theta``."""
    t2 = theta * theta
    t3 = t2 * theta
    h00 = 2 * t3 - 3 * t2 + 1
    h10 = t3 - 2 * t2 + theta
    h01 = -2 * t3 + 3 * t2
    h11 = t3 - t2
    return h00 * u0 + h10 * h * d0 + h01 * u1 + h11 * h * d1


def detect_convergence(trajectory: Trajectory, target, tol: float) -> Optional[float]:
    """Earliest grid time after which the state stays within ``tol`` of ``target``.

    Returns ``None`` if the final node is still outside the band.
    """
    if not tol > 0:
        raise DomainError(f"tol must be positive, got {tol!r}")
    dist = np.abs(trajectory.states - np.asarray(target, dtype=float)).max(axis=1)
    outside = np.flatnonzero(~(dist < tol))
    if outside.size == 0:
        return float(trajectory.times[0])
    last = outside[-1]
    if last == len(dist) - 1:
        return None
    return float(trajectory.times[last + 1])


def component_convergence(trajectory: Trajectory, target, tol: float) -> tuple[Optional[float], ...]:
    """Per-player version of :func:`detect_convergence`."""
    out = []
    for j in range(3):
        dist = np.abs(trajectory.states[:, j] - float(target[j]))
        outside = np.flatnonzero(~(dist < tol))
        if outside.size == 0:
            out.append(float(trajectory.times[0]))
        elif outside[-1] == len(dist) - 1:
            out.append(None)
        else:
            out.append(float(trajectory.times[outside[-1] + 1]))
    return tuple(out)
