"""Experiments: single condition runs, delay comparisons and parameter surfaces."""

from __future__ import annotations

import dataclasses
import itertools
import math
from concurrent.futures import ProcessPoolExecutor
from typing import Optional, Sequence

import numpy as np

from .dde import (
    IntegratorConfig,
    Trajectory,
    component_convergence,
    integrate,
    integrate_batch,
    integrate_ode,
    nearest_corner,
)
from .errors import DomainError, ScenarioError
from .game import PARAM_NAMES, GameParams, StrategyState, rhs_coefficients
from .stability import CORNERS, Classification, classify

EXPERIMENTS = ("run", "compare", "sweep")
OBSERVABLES = ("x", "y", "z", "corner")
DEFAULT_INIT = StrategyState(0.8, 0.5, 0.5)
#: Final-x thresholds separating "discharge" from "no discharge" cells.
DISCHARGE_ABOVE = 0.95
NO_DISCHARGE_BELOW = 0.05


def default_init_lattice() -> list[StrategyState]:
    """Eight starting points, one per octant of the unit cube."""
    return [StrategyState(*p) for p in itertools.product((0.2, 0.8), repeat=3)]


@dataclasses.dataclass(frozen=True)
class Axis:
    name: str
    lo: float
    hi: float
    n: int

    def __post_init__(self):
        if self.name not in PARAM_NAMES or self.name == "tau":
            raise ScenarioError(f"cannot sweep over {self.name!r}")
        if not self.n >= 2:
            raise ScenarioError(f"axis {self.name} needs at least 2 grid points, got {self.n}")
        if not self.lo < self.hi:
            raise ScenarioError(f"axis {self.name} needs lo < hi, got [{self.lo}, {self.hi}]")
        if self.lo < 0:
            raise ScenarioError(f"axis {self.name} must stay non-negative, got lo = {self.lo}")

    @property
    def values(self) -> np.ndarray:
        return np.linspace(self.lo, self.hi, self.n)


@dataclasses.dataclass(frozen=True)
class SweepSpec:
    axis_a: Axis
    axis_b: Axis
    observable: str = "x"

    def __post_init__(self):
        if self.axis_a.name == self.axis_b.name:
            raise ScenarioError("sweep axes must name different parameters")
        if self.observable not in OBSERVABLES:
            raise ScenarioError(f"observable must be one of {OBSERVABLES}, got {self.observable!r}")


@dataclasses.dataclass(frozen=True)
class Scenario:
    params: GameParams
    init: StrategyState = DEFAULT_INIT
    integrator: IntegratorConfig = IntegratorConfig()
    experiment: str = "run"
    tau_list: tuple[float, ...] = ()
    sweep: Optional[SweepSpec] = None
    label: str = "scenario"

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ScenarioError(f"experiment must be one of {EXPERIMENTS}, got {self.experiment!r}")
        if not self.label:
            raise ScenarioError("label must be non-empty")
        if self.experiment == "compare" and not self.tau_list:
            raise ScenarioError("a delay comparison needs a non-empty tau list")
        if any(not (math.isfinite(t) and t >= 0) for t in self.tau_list):
            raise ScenarioError("every tau in the list must be non-negative")
        if self.experiment == "sweep" and self.sweep is None:
            raise ScenarioError("a sweep needs axis definitions")
        if self.integrator.tau != self.params.tau:
            object.__setattr__(self, "integrator", self.integrator.replace(tau=self.params.tau))

    def with_tau(self, tau: float) -> Scenario:
        return dataclasses.replace(
            self, params=self.params.replace(tau=tau), integrator=self.integrator.replace(tau=tau)
        )


@dataclasses.dataclass
class ConditionRun:
    trajectory: Trajectory
    classification: Classification
    reached: Optional[tuple[int, int, int]]
    predicted: list[tuple[int, int, int]]

    @property
    def matches_prediction(self) -> bool:
        return len(self.predicted) == 1 and self.reached == self.predicted[0]


def run_condition(scenario: Scenario) -> ConditionRun:
    """Integrate one scenario and compare the limit with the predicted ESS."""
    traj = integrate(scenario.params, scenario.init, scenario.integrator)
    report = classify(scenario.params)
    return ConditionRun(
        trajectory=traj,
        classification=report,
        reached=traj.limit,
        predicted=[e.point for e in report.ess],
    )


def run_multi_init(scenario: Scenario, inits: Optional[Sequence] = None) -> list[Trajectory]:
    """One trajectory per starting point (default: :func:`default_init_lattice`)."""
    if inits is None:
        inits = default_init_lattice()
    return [integrate(scenario.params, s, scenario.integrator) for s in inits]


@dataclasses.dataclass
class DelayRow:
    tau: float
    trajectory: Trajectory
    limit: Optional[tuple[int, int, int]]
    converged_at: Optional[float]
    player_times: tuple[Optional[float], ...]


@dataclasses.dataclass
class DelayComparison:
    rows: list[DelayRow]

    @property
    def same_limit(self) -> bool:
        limits = {r.limit for r in self.rows}
        return len(limits) == 1 and None not in limits

    @property
    def times_nondecreasing(self) -> bool:
        times = [r.converged_at for r in sorted(self.rows, key=lambda r: r.tau)]
        if any(t is None for t in times):
            return False
        return all(a <= b for a, b in zip(times, times[1:]))


def delay_comparison(scenario: Scenario, taus: Optional[Sequence[float]] = None) -> DelayComparison:
    """Rerun the scenario for each delay and tabulate convergence times.

    ``player_times`` gives the time each player individually settles near
    the limit corner, alongside the joint ``converged_at``.
    """
    taus = tuple(scenario.tau_list if taus is None else taus)
    if not taus:
        raise DomainError("need at least one delay")
    rows = []
    for tau in taus:
        if not tau >= 0:
            raise DomainError(f"tau must be non-negative, got {tau!r}")
        run = scenario.with_tau(float(tau))
        traj = integrate(run.params, run.init, run.integrator)
        target = traj.limit or nearest_corner(traj.final)
        rows.append(
            DelayRow(
                tau=float(tau),
                trajectory=traj,
                limit=traj.limit,
                converged_at=traj.converged_at,
                player_times=component_convergence(traj, target, run.integrator.convergence_tol),
            )
        )
    return DelayComparison(rows)


@dataclasses.dataclass
class SurfaceResult:
    """Final states over a two-parameter grid.

    ``finals[i, j]`` belongs to ``a_values[i]`` and ``b_values[j]``.
    ``failed_at`` is ``nan`` except where a cell's integration blew up.
    """

    spec: SweepSpec
    a_values: np.ndarray
    b_values: np.ndarray
    finals: np.ndarray
    converged: np.ndarray
    failed_at: np.ndarray

    def observable_grid(self, observable: Optional[str] = None) -> np.ndarray:
        observable = observable or self.spec.observable
        if observable == "corner":
            corners = np.rint(np.clip(self.finals, 0, 1)).astype(int)
            index = {c: i + 1 for i, c in enumerate(CORNERS)}
            out = np.zeros(self.converged.shape, dtype=int)
            for i, j in np.ndindex(out.shape):
                if self.converged[i, j]:
                    out[i, j] = index[tuple(corners[i, j])]
            return out
        return self.finals[..., "xyz".index(observable)]

    def decisions(self) -> np.ndarray:
        """``1`` for discharge, ``0`` for no discharge, ``-1`` for unresolved."""
        x = self.finals[..., 0]
        out = np.full(x.shape, -1, dtype=int)
        out[x > DISCHARGE_ABOVE] = 1
        out[x < NO_DISCHARGE_BELOW] = 0
        return out


def _surface_chunk(params, names, cells, init, config):
    base = rhs_coefficients(params)
    coef = [np.empty(len(cells)) for _ in base]
    for row, (va, vb) in enumerate(cells):
        cell = params.replace(**{names[0]: float(va), names[1]: float(vb)})
        for store, value in zip(coef, rhs_coefficients(cell)):
            store[row] = value
    inits = np.tile(np.asarray(init, dtype=float), (len(cells), 1))
    if config.delay_steps == 0:
        finals = np.empty((len(cells), 3))
        failed = np.full(len(cells), np.nan)
        for row in range(len(cells)):
            try:
                states, _ = integrate_ode(tuple(c[row] for c in coef), tuple(init), config.step, config.n_steps)
                finals[row] = states[-1]
            except ArithmeticError as exc:
                finals[row] = np.nan
                failed[row] = getattr(exc, "time", np.nan)
        return finals, failed
    finals, _, failed = integrate_batch(
        coef, inits, config.step, config.n_steps, config.delay_steps, config.interpolation, record=False
    )
    return finals[:, 0], failed


def surface_sweep(scenario: Scenario, workers: int = 1, chunk_size: int = 1024) -> SurfaceResult:
    """Integrate every cell of the sweep grid and collect final states.

    Cells are split into chunks; with ``workers > 1`` the chunks run in a
    process pool. Results are written back by grid position, so the output
    does not depend on ``workers`` or ``chunk_size``.
    """
    spec = scenario.sweep
    if spec is None:
        raise DomainError("scenario has no sweep specification")
    a_vals = spec.axis_a.values
    b_vals = spec.axis_b.values
    cells = [(a, b) for a in a_vals for b in b_vals]
    names = (spec.axis_a.name, spec.axis_b.name)
    chunks = [cells[i : i + chunk_size] for i in range(0, len(cells), chunk_size)]
    args = [(scenario.params, names, c, tuple(scenario.init), scenario.integrator) for c in chunks]
    if workers > 1 and len(chunks) > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            parts = list(pool.map(_surface_chunk, *zip(*args)))
    else:
        parts = [_surface_chunk(*a) for a in args]
    finals = np.concatenate([p[0] for p in parts]).reshape(len(a_vals), len(b_vals), 3)
    failed = np.concatenate([p[1] for p in parts]).reshape(len(a_vals), len(b_vals))
    tol = scenario.integrator.convergence_tol
    with np.errstate(invalid="ignore"):
        dist = np.abs(finals - np.rint(np.clip(finals, 0, 1))).max(axis=2)
        converged = (dist < tol) & np.isnan(failed)
    return SurfaceResult(
        spec=spec,
        a_values=a_vals,
        b_values=b_vals,
        finals=finals,
        converged=converged,
        failed_at=failed,
    )


def slice_extract(surface: SurfaceResult, axis: str, fixed_value: float, observable: Optional[str] = None):
    """Row or column of the surface at a fixed parameter value.

    ``axis`` names the parameter held fixed. Returns ``(free_values, series)``
    ordered along the other axis.
    """
    spec = surface.spec
    if axis == spec.axis_a.name:
        grid, free = surface.a_values, surface.b_values
    elif axis == spec.axis_b.name:
        grid, free = surface.b_values, surface.a_values
    else:
        raise DomainError(f"{axis!r} is not an axis of this surface")
    hits = np.flatnonzero(np.isclose(grid, fixed_value, rtol=1e-9, atol=1e-12))
    if hits.size == 0:
        raise DomainError(f"{axis} = {fixed_value} is not on the grid")
    values = surface.observable_grid(observable)
    series = values[hits[0], :] if axis == spec.axis_a.name else values[:, hits[0]]
    return free.copy(), np.array(series)
