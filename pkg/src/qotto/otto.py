"""The quasi-static quantum Otto cycle.

Strokes: A -> B hot isochore (width alpha_h, bath T_h), B -> C adiabat to
alpha_c, C -> D cold isochore (bath T_c), D -> A adiabat back to alpha_h.
Populations are frozen on the adiabats, so P(A) = P(D) and P(C) = P(B).

Sign convention: Q_h > 0 is heat absorbed from the hot bath, Q_c < 0 heat
rejected to the cold bath, and W = Q_h + Q_c is the work delivered per cycle.
"""

import enum
import math
from dataclasses import dataclass

import numpy as np

from . import _cycle_kernels as kern
from ._accel import NUMBA_ENABLED
from .errors import (
    InvalidParameters,
    NotEngineRegime,
    NotRefrigeratorRegime,
    NumericalBreakdown,
    TruncationTooLarge,
)
from .potential import PotentialParams
from .thermo import closed_sigma

DEFAULT_TOL = 1e-10
DEFAULT_TRUNCATION_BOUND = 1e-3


class Method(str, enum.Enum):
    CLOSED_FORM = "closed"
    DISCRETE_SUM = "sum"

    def __str__(self):
        return self.value


class Regime(str, enum.Enum):
    ENGINE = "Engine"
    REFRIGERATOR = "Refrigerator"
    HEATER = "Heater"
    ACCELERATOR = "Accelerator"
    IDLE = "Idle"
    # W > 0 without rejecting heat to the cold bath; only the closed forms can land here
    UNPHYSICAL = "Unphysical"

    def __str__(self):
        return self.value


@dataclass(frozen=True)
class CycleConfig:
    q: float
    delta: float
    alpha_h: float
    alpha_c: float
    t_h: float
    t_c: float

    def __post_init__(self):
        for name in ("q", "delta", "alpha_h", "alpha_c", "t_h", "t_c"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise InvalidParameters(f"{name} must be a finite real number, got {v!r}")
        if not self.t_c > 0:
            raise InvalidParameters(f"t_c must be > 0, got {self.t_c}")
        if not self.t_h >= self.t_c:
            raise InvalidParameters(f"t_h must be >= t_c, got t_h={self.t_h}, t_c={self.t_c}")
        # both isochores need a bound state; PotentialParams raises otherwise
        self.hot_params
        self.cold_params

    @property
    def hot_params(self):
        return PotentialParams(self.q, self.delta, self.alpha_h)

    @property
    def cold_params(self):
        return PotentialParams(self.q, self.delta, self.alpha_c)

    @property
    def carnot(self):
        return 1.0 - self.t_c / self.t_h

    def as_arrays(self):
        return tuple(np.array([getattr(self, f)], dtype=float)
                     for f in ("q", "delta", "alpha_h", "alpha_c", "t_h", "t_c"))


@dataclass(frozen=True)
class ReducedCycleParams:
    beta_h: float
    beta_c: float
    p_h: float
    p_c: float
    sigma_h: float
    sigma_c: float


def reduced_cycle_params(c):
    return ReducedCycleParams(
        beta_h=1.0 / c.t_h,
        beta_c=1.0 / c.t_c,
        p_h=0.5 * c.alpha_h ** 2,
        p_c=0.5 * c.alpha_c ** 2,
        sigma_h=closed_sigma(c.hot_params),
        sigma_c=closed_sigma(c.cold_params),
    )


@dataclass(frozen=True)
class CycleResult:
    config: CycleConfig
    method: Method
    q_hot: float
    q_cold: float
    work: float
    regime: Regime
    efficiency: float | None = None
    cop: float | None = None
    truncation_loss: float = 0.0

    @property
    def exceeds_carnot(self):
        return self.efficiency is not None and self.efficiency > self.config.carnot + 1e-9


def classify_regime(q_hot, q_cold, work, tol=DEFAULT_TOL):
    if abs(work) <= tol:
        return Regime.IDLE
    if work > tol:
        if q_hot > tol and q_cold < -tol:
            return Regime.ENGINE
        return Regime.UNPHYSICAL
    if q_cold > tol and q_hot < -tol:
        return Regime.REFRIGERATOR
    if q_hot > tol and q_cold < -tol:
        return Regime.ACCELERATOR
    return Regime.HEATER


def _finish(config, method, q_hot, q_cold, work, tol, loss=0.0):
    regime = classify_regime(q_hot, q_cold, work, tol)
    eff = work / q_hot if regime is Regime.ENGINE else None
    cop = q_cold / abs(work) if regime is Regime.REFRIGERATOR else None
    return CycleResult(config, method, q_hot, q_cold, work, regime, eff, cop, loss)


# ---------------------------------------------------------------------------
# closed forms
# ---------------------------------------------------------------------------

def _closed(c):
    arrays = c.as_arrays()
    fn = kern.closed_heats_loop if NUMBA_ENABLED else kern.closed_heats_np
    q_hot, q_cold = fn(*arrays)
    q_hot, q_cold = float(q_hot[0]), float(q_cold[0])
    if not (math.isfinite(q_hot) and math.isfinite(q_cold)):
        raise NumericalBreakdown(f"closed-form heats not finite for {c}")
    return q_hot, q_cold


def q_hot_closed(c):
    """Heat absorbed on the hot isochore, closed form (real part of the literal complex expression)."""
    return _closed(c)[0]


def q_cold_closed(c):
    """Heat exchanged on the cold isochore, closed form (mirror of :func:`q_hot_closed`)."""
    return _closed(c)[1]


# ---------------------------------------------------------------------------
# discrete sums
# ---------------------------------------------------------------------------

def _summed(c, truncation_bound):
    fn = kern.sum_cycle_loop if NUMBA_ENABLED else kern.sum_cycle_np
    q_hot, q_cold, work, loss, _, _ = fn(*c.as_arrays())
    loss = float(loss[0])
    if loss > truncation_bound:
        raise TruncationTooLarge(loss, truncation_bound)
    return float(q_hot[0]), float(q_cold[0]), float(work[0]), loss


def q_hot_sum(c, truncation_bound=DEFAULT_TRUNCATION_BOUND):
    """sum_n E_n^h [P_n(B) - P_n(D)] over the common level set; returns (Q_h, loss)."""
    q_hot, _, _, loss = _summed(c, truncation_bound)
    return q_hot, loss


def q_cold_sum(c, truncation_bound=DEFAULT_TRUNCATION_BOUND):
    """sum_n E_n^c [P_n(D) - P_n(B)] over the common level set; returns (Q_c, loss)."""
    _, q_cold, _, loss = _summed(c, truncation_bound)
    return q_cold, loss


# ---------------------------------------------------------------------------
# derived quantities
# ---------------------------------------------------------------------------

def evaluate_cycle(c, method=Method.CLOSED_FORM, tol=DEFAULT_TOL,
                   truncation_bound=DEFAULT_TRUNCATION_BOUND):
    method = Method(method)
    if method is Method.CLOSED_FORM:
        q_hot, q_cold = _closed(c)
        return _finish(c, method, q_hot, q_cold, q_hot + q_cold, tol)
    q_hot, q_cold, work, loss = _summed(c, truncation_bound)
    return _finish(c, method, q_hot, q_cold, work, tol, loss)


def work(c, method=Method.CLOSED_FORM, **kwargs):
    """W per cycle.  The discrete sum evaluates sum (E^h - E^c)(P(B) - P(D)) directly;
    the closed form has no separate expression and uses Q_h + Q_c."""
    return evaluate_cycle(c, method, **kwargs).work


def efficiency(c, method=Method.CLOSED_FORM, **kwargs):
    r = evaluate_cycle(c, method, **kwargs)
    if r.regime is not Regime.ENGINE:
        raise NotEngineRegime(f"efficiency undefined in regime {r.regime} (Q_h={r.q_hot:.6g})")
    return r.efficiency


def cop(c, method=Method.CLOSED_FORM, **kwargs):
    """Q_c / |W| in the refrigerator regime."""
    r = evaluate_cycle(c, method, **kwargs)
    if r.regime is not Regime.REFRIGERATOR:
        raise NotRefrigeratorRegime(f"COP undefined in regime {r.regime} (W={r.work:.6g})")
    return r.cop
