"""Payoffs, expected utilities and replicator dynamics of the three-party game.

The players are Japan (discharge with probability ``x``), the other
countries (sanction with probability ``y``) and the IAEA (oppose with
probability ``z``).
"""

from __future__ import annotations

import dataclasses
import math
from typing import NamedTuple

import numpy as np

from .errors import DomainError

#: Accepted numerical slack around [0, 1] for probabilities.
BAND = 1e-9

PARAM_NAMES = (
    "i_j", "c_lc", "t_rj", "c_hj", "c_dj", "c_mj", "c_sj",
    "c_sc", "c_mc", "c_ii", "c_mi", "e_di", "h_ri", "tau",
)


@dataclasses.dataclass(frozen=True)
class GameParams:
    """Costs, benefits and the decision delay of the game.

    Attributes
    ----------
    i_j : Japan's international reputation loss when sanctioned.
    c_lc : litigation compensation paid by Japan to the other countries.
    t_rj : reduction of Japan's export tax revenue under sanctions.
    c_hj : aid the other countries give Japan when it does not discharge.
    c_dj : Japan's discharge cost.
    c_mj : Japan's marine monitoring cost.
    c_sj : Japan's storage cost.
    c_sc : the other countries' cost of substituting Japanese products.
    c_mc : the other countries' monitoring cost.
    c_ii : reputation the IAEA gains by opposing.
    c_mi : IAEA monitoring cost.
    e_di : ecological harm borne by the IAEA.
    h_ri : health risk borne by the IAEA.
    tau : fixed decision delay (time units).

    ``c_mi``, ``e_di`` and ``h_ri`` only enter the raw payoffs; they cancel
    out of every replicator equation.
    """

    i_j: float
    c_lc: float
    t_rj: float
    c_hj: float
    c_dj: float
    c_mj: float
    c_sj: float
    c_sc: float
    c_mc: float
    c_ii: float
    c_mi: float = 0.0
    e_di: float = 0.0
    h_ri: float = 0.0
    tau: float = 0.0

    def __post_init__(self):
        for name in PARAM_NAMES:
            value = getattr(self, name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                raise DomainError(f"{name} must be a real number, got {value!r}")
            value = float(value)
            if not math.isfinite(value):
                raise DomainError(f"{name} must be finite, got {value}")
            if value < 0:
                raise DomainError(f"{name} must be non-negative, got {value}")
            object.__setattr__(self, name, value)

    def replace(self, **changes) -> GameParams:
        return dataclasses.replace(self, **changes)

    def as_dict(self) -> dict[str, float]:
        return dataclasses.asdict(self)


class StrategyState(NamedTuple):
    """Mixed-strategy probabilities ``(x, y, z)``."""

    x: float
    y: float
    z: float

    @classmethod
    def checked(cls, x, y, z) -> StrategyState:
        state = cls(float(x), float(y), float(z))
        _check_probabilities(state, ("x", "y", "z"))
        return state


class StrategyProfile(NamedTuple):
    """A pure strategy profile: one binary choice per player."""

    discharge: bool
    sanction: bool
    oppose: bool


class PayoffTriple(NamedTuple):
    payoff_japan: float
    payoff_others: float
    payoff_iaea: float


def all_profiles() -> list[StrategyProfile]:
    """The eight pure profiles, discharge-major order."""
    return [
        StrategyProfile(d, s, o)
        for d in (True, False)
        for s in (True, False)
        for o in (True, False)
    ]


def _check_probabilities(values, names):
    for name, v in zip(names, values):
        if not (-BAND <= v <= 1 + BAND):
            raise DomainError(f"{name} = {v!r} is not a probability")


def payoff_lookup(params: GameParams, profile: StrategyProfile) -> PayoffTriple:
    """Payoff of each player for a pure strategy profile."""
    p = params
    discharge, sanction, oppose = (bool(v) for v in profile)
    if discharge:
        japan = -p.c_dj - p.c_mj
        others = -p.c_mc
        if sanction:
            japan -= p.i_j + p.c_lc + p.t_rj
            others += p.c_lc - p.c_sc
        iaea = -p.c_mi - p.e_di - p.h_ri
    else:
        japan = -p.c_sj
        others = 0.0
        if sanction:
            japan += p.c_hj
            others -= p.c_hj
        iaea = 0.0
    if oppose:
        iaea += p.c_ii
    return PayoffTriple(japan + 0.0, others + 0.0, iaea + 0.0)


def expected_utilities_japan(params: GameParams, y: float, z: float) -> tuple[float, float]:
    """Japan's expected utility of discharging and of not discharging.

    ``z`` does not enter either utility; it is still range-checked.
    """
    _check_probabilities((y, z), ("y", "z"))
    p = params
    u_discharge = -y * (p.i_j + p.c_lc + p.t_rj) - (p.c_dj + p.c_mj)
    u_store = y * p.c_hj - p.c_sj
    return u_discharge, u_store


def expected_utilities_others(params: GameParams, x: float, z: float) -> tuple[float, float]:
    """The other countries' expected utility of sanctioning and of not sanctioning."""
    _check_probabilities((x, z), ("x", "z"))
    p = params
    u_sanction = x * (-p.c_sc + p.c_lc - p.c_mc + p.c_hj) - p.c_hj
    u_tolerate = -x * p.c_mc
    return u_sanction, u_tolerate


def expected_utilities_iaea(params: GameParams, x: float, y: float) -> tuple[float, float]:
    """The IAEA's expected utility of opposing and of agreeing."""
    _check_probabilities((x, y), ("x", "y"))
    p = params
    harm = p.c_mi + p.e_di + p.h_ri
    u_agree = -x * harm
    return u_agree + p.c_ii, u_agree


def rhs_coefficients(params: GameParams):
    """Collapse the parameters into the five constants the dynamics need.

    Returns ``(k, d, m, h, c)`` such that::

        dx/dt = x (1 - x) (-k y - d)
        dy/dt = y (1 - y) (m x - h)
        dz/dt = z (1 - z) c
    """
    p = params
    k = p.i_j + p.c_lc + p.t_rj + p.c_hj
    d = p.c_dj + p.c_mj - p.c_sj
    m = -p.c_sc + p.c_lc + p.c_hj
    return k, d, m, p.c_hj, p.c_ii


def rhs_from_coefficients(coef, x, y, z):
    """Vector field on raw components; works on floats and broadcasting arrays."""
    k, d, m, h, c = coef
    return (
        x * (1 - x) * (-k * y - d),
        y * (1 - y) * (m * x - h),
        z * (1 - z) * c,
    )


def _as_components(state):
    arr = np.asarray(state, dtype=float)
    if arr.shape[-1:] != (3,):
        raise DomainError(f"state must have a trailing axis of length 3, got shape {arr.shape}")
    if not np.all((arr >= -BAND) & (arr <= 1 + BAND)):
        raise DomainError("state components must lie in [0, 1]")
    return arr[..., 0], arr[..., 1], arr[..., 2]


def replicator_rhs(params: GameParams, state) -> np.ndarray:
    """Replicator vector field ``(dx/dt, dy/dt, dz/dt)`` at ``state``.

    ``state`` may be a single triple or an array whose last axis has length 3.
    """
    x, y, z = _as_components(state)
    return np.stack(rhs_from_coefficients(rhs_coefficients(params), x, y, z), axis=-1)


def delayed_rhs(params: GameParams, delayed_state) -> np.ndarray:
    """Vector field of the delayed system given the state read at ``t - tau``.

    All three players react to the lagged state, so the algebra is the one of
    :func:`replicator_rhs`; only the caller's choice of state differs.
    """
    return replicator_rhs(params, delayed_state)
