"""Corner equilibria and their stability under the decision delay.

Each corner of the unit cube is a fixed point, and the linearisation there
is diagonal: coordinate ``i`` obeys ``u' = a_i u(t - tau)``. Its
characteristic roots solve ``lam = a_i exp(-lam tau)``, i.e.
``lam = W_k(a_i tau) / tau`` over the branches of the Lambert W function. The
principal branch gives the rightmost root.
"""

from __future__ import annotations

import cmath
import dataclasses
import enum
import math
from typing import Optional

from .errors import DomainError, NumericError
from .game import GameParams

INV_E = math.exp(-1.0)
TIE_TOL = 1e-12
ROOT_TOL = 1e-10
MAX_ITER = 100

#: Corners in the conventional order gamma_1 .. gamma_8.
CORNERS = (
    (0, 0, 0),
    (1, 0, 0),
    (0, 1, 0),
    (0, 0, 1),
    (1, 1, 0),
    (1, 0, 1),
    (0, 1, 1),
    (1, 1, 1),
)

# Published sign patterns, reordered to (x, y, z). The first corner is
# printed in (x, z, y) order in the published table as "(*,+,-)".
TABLE_SIGN_PATTERNS = {
    1: ("*", "-", "+"),
    2: ("*", "*", "+"),
    3: ("*", "+", "+"),
    4: ("-", "-", "-"),
    5: ("*", "*", "+"),
    6: ("-", "-", "-"),
    7: ("*", "+", "-"),
    8: ("-", "-", "-"),
}

#: Corner index whose (-,-,-) pattern is tied to each numbered condition.
CONDITION_CORNERS = {1: 4, 2: 6, 3: 8}


class Verdict(str, enum.Enum):
    ESS = "ESS"
    NON_ESS = "non-ESS"
    MARGINAL = "marginal"
    DELAY_DESTABILIZED = "delay-destabilized"


@dataclasses.dataclass(frozen=True)
class Equilibrium:
    index: int
    point: tuple[int, int, int]
    coeffs: tuple[float, float, float]
    roots: tuple[tuple[float, float], ...]
    verdict: Verdict
    sign_verdict: Verdict
    paper_sign_pattern: tuple[str, str, str]

    @property
    def name(self) -> str:
        return f"gamma{self.index}"

    @property
    def signs(self) -> tuple[str, str, str]:
        return sign_pattern(self.coeffs)


@dataclasses.dataclass(frozen=True)
class InteriorPoint:
    """Outcome of the interior fixed-point equations.

    With a positive IAEA reputation term the third equation has no solution
    and ``status`` is ``"nonexistent"``. Otherwise ``z`` is free and the
    point is ``"degenerate"``; ``x`` / ``y`` are ``None`` when their
    denominator vanishes.
    """

    status: str
    x: Optional[float] = None
    y: Optional[float] = None
    note: str = ""


@dataclasses.dataclass(frozen=True)
class ConditionReport:
    storage_cost: float
    discharge_cost: float
    full_discharge_cost: float
    litigation: float
    substitution: float
    condition1: bool
    condition2: bool
    condition3: bool

    def holds(self, number: int) -> bool:
        return {1: self.condition1, 2: self.condition2, 3: self.condition3}[number]


@dataclasses.dataclass(frozen=True)
class Classification:
    tau: float
    equilibria: tuple[Equilibrium, ...]
    conditions: ConditionReport
    interior: InteriorPoint

    @property
    def ess(self) -> list[Equilibrium]:
        return [e for e in self.equilibria if e.verdict is Verdict.ESS]

    def corner(self, index: int) -> Equilibrium:
        return self.equilibria[index - 1]


def linearized_coefficients(params: GameParams, corner_index: int) -> tuple[float, float, float]:
    """Diagonal coefficients of the linearisation at corner ``corner_index`` (1-8)."""
    p = params
    if corner_index not in range(1, 9):
        raise DomainError(f"corner index must be in 1..8, got {corner_index!r}")
    low = p.c_sj - p.c_mj - p.c_dj
    high = p.c_sj - p.c_mj - p.c_dj - p.c_hj - p.c_lc - p.i_j - p.t_rj
    table = {
        1: (low, -p.c_hj, p.c_ii),
        2: (-low, -p.c_sc + p.c_lc, p.c_ii),
        3: (high, p.c_hj, p.c_ii),
        4: (low, -p.c_hj, -p.c_ii),
        5: (-high, p.c_sc - p.c_lc, p.c_ii),
        6: (-low, p.c_lc - p.c_sc, -p.c_ii),
        7: (high, p.c_hj, -p.c_ii),
        8: (-high, -p.c_lc + p.c_sc, -p.c_ii),
    }
    return tuple(v + 0.0 for v in table[corner_index])


def lambert_w0(v: float) -> float:
    """Principal branch of the Lambert W function for real ``v >= -1/e``."""
    v = float(v)
    if math.isnan(v) or v < -INV_E - 1e-12:
        raise DomainError(f"lambert_w0 is real only for v >= -1/e, got {v!r}")
    if v <= -INV_E:
        return -1.0
    if v == 0.0:
        return 0.0
    if v == math.inf:
        return math.inf
    if v < -0.25:
        p = math.sqrt(2.0 * (math.e * v + 1.0))
        w = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    elif v < 3.0:
        w = math.log1p(v)
        w = w * (1.0 - 0.5 * w / (1.0 + w)) if v > 0 else w
    else:
        l1 = math.log(v)
        l2 = math.log(l1)
        w = l1 - l2 + l2 / l1
    best, best_res = w, math.inf
    for _ in range(MAX_ITER):
        ew = math.exp(w)
        f = w * ew - v
        if abs(f) < best_res:
            best, best_res = w, abs(f)
        wp1 = w + 1.0
        if f == 0.0 or wp1 == 0.0:
            return w
        step = f / (ew * wp1 - (w + 2.0) * f / (2.0 * wp1))
        w -= step
        if abs(step) <= 4e-16 * (1.0 + abs(w)):
            return w
    # near the branch point w e^w is flat and the iterates dither at rounding level
    if best_res <= 1e-14 * max(1.0, abs(v)):
        return best
    raise NumericError(f"Halley iteration for W({v}) did not converge")


def _principal_w_complex(v: float) -> complex:
    """Principal-branch W for real ``v < -1/e`` (upper half-plane member)."""
    if v > -1.5:
        p = cmath.sqrt(2.0 * (math.e * v + 1.0))
        s = -1.0 + p - p * p / 3.0 + 11.0 / 72.0 * p ** 3
    else:
        l1 = cmath.log(v)
        s = l1 - cmath.log(l1)
    g = s - v * cmath.exp(-s)
    for _ in range(MAX_ITER):
        dg = 1.0 + v * cmath.exp(-s)
        step = g / dg
        damping = 1.0
        while True:
            trial = s - damping * step
            g_trial = trial - v * cmath.exp(-trial)
            if abs(g_trial) < abs(g) or damping < 1e-6:
                break
            damping *= 0.5
        s, g = trial, g_trial
        if abs(step) * damping <= 4e-16 * (1.0 + abs(s)):
            break
    else:
        raise NumericError(f"Newton iteration for W({v}) did not converge")
    if s.imag < 0:
        s = s.conjugate()
    if not 0.0 < s.imag < math.pi:
        raise NumericError(f"Newton iteration for W({v}) left the principal branch")
    return s


def rightmost_root(a: float, tau: float) -> tuple[float, float]:
    """Rightmost root of ``lam = a * exp(-lam * tau)`` as ``(real, imag)``.

    Complex roots come in conjugate pairs; the member with positive
    imaginary part is returned.
    """
    if not tau >= 0:
        raise DomainError(f"tau must be non-negative, got {tau!r}")
    a = float(a)
    if tau == 0 or a == 0:
        return (a, 0.0)
    v = a * tau
    if v >= -INV_E:
        lam = complex(lambert_w0(v) / tau, 0.0)
    else:
        lam = _principal_w_complex(v) / tau
    residual = abs(lam - a * cmath.exp(-lam * tau))
    if not residual < ROOT_TOL * max(1.0, abs(a)):
        raise NumericError(
            f"characteristic root for a={a}, tau={tau} has residual {residual:.3g}"
        )
    return (lam.real, lam.imag)


def sign_pattern(coeffs) -> tuple[str, ...]:
    return tuple("0" if abs(a) <= TIE_TOL else ("+" if a > 0 else "-") for a in coeffs)


def matches_sign_pattern(signs, pattern) -> bool:
    return all(p == "*" or p == s for s, p in zip(signs, pattern))


def _sign_verdict(coeffs) -> Verdict:
    signs = sign_pattern(coeffs)
    if "+" in signs:
        return Verdict.NON_ESS
    if "0" in signs:
        return Verdict.MARGINAL
    return Verdict.ESS


def _delay_verdict(coeffs, tau) -> Verdict:
    verdict = _sign_verdict(coeffs)
    if verdict is Verdict.ESS and any(a * tau <= -math.pi / 2 for a in coeffs):
        return Verdict.DELAY_DESTABILIZED
    return verdict


def condition_report(params: GameParams) -> ConditionReport:
    p = params
    storage = p.c_sj
    direct = p.c_mj + p.c_dj
    full = p.c_mj + p.c_dj + p.t_rj + p.c_hj + p.c_lc + p.i_j
    return ConditionReport(
        storage_cost=storage,
        discharge_cost=direct,
        full_discharge_cost=full,
        litigation=p.c_lc,
        substitution=p.c_sc,
        condition1=storage < direct,
        condition2=storage > direct and p.c_lc < p.c_sc,
        condition3=p.c_lc > p.c_sc and storage > full,
    )


def interior_point(params: GameParams) -> InteriorPoint:
    p = params
    if p.c_ii != 0:
        return InteriorPoint(
            "nonexistent", note="the IAEA's growth rate is constant and positive; no interior rest point"
        )
    x_den = -p.c_sc + p.c_lc + p.c_hj
    y_den = p.i_j + p.c_lc + p.t_rj + p.c_hj
    x = p.c_hj / x_den if x_den != 0 else None
    y = -(p.c_dj + p.c_mj - p.c_sj) / y_den if y_den != 0 else None
    notes = ["z is free"]
    if x is None:
        notes.append("x undetermined (zero denominator)")
    if y is None:
        notes.append("y undetermined (zero denominator)")
    return InteriorPoint("degenerate", x=x, y=y, note="; ".join(notes))


def enumerate_equilibria(params: GameParams, tau: Optional[float] = None):
    """The eight corner equilibria plus the interior-point report.

    ``tau`` defaults to ``params.tau``.
    """
    if tau is None:
        tau = params.tau
    if not tau >= 0:
        raise DomainError(f"tau must be non-negative, got {tau!r}")
    out = []
    for index, point in enumerate(CORNERS, start=1):
        coeffs = linearized_coefficients(params, index)
        out.append(
            Equilibrium(
                index=index,
                point=point,
                coeffs=coeffs,
                roots=tuple(rightmost_root(a, tau) for a in coeffs),
                verdict=_delay_verdict(coeffs, tau),
                sign_verdict=_sign_verdict(coeffs),
                paper_sign_pattern=TABLE_SIGN_PATTERNS[index],
            )
        )
    return out, interior_point(params)


def classify(params: GameParams, tau: Optional[float] = None) -> Classification:
    """Stability verdict for every corner, using the delay-aware criterion.

    A corner is an ESS when all three coefficients are negative and each
    satisfies ``a * tau > -pi/2``; corners that pass the sign test but fail
    the delay bound are ``delay-destabilized``.
    """
    if tau is None:
        tau = params.tau
    equilibria, interior = enumerate_equilibria(params, tau)
    return Classification(
        tau=float(tau),
        equilibria=tuple(equilibria),
        conditions=condition_report(params),
        interior=interior,
    )
