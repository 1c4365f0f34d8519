"""Canonical thermodynamics of a single configuration."""

import math
from dataclasses import dataclass, field

import numpy as np

from .deformed_math import EXP_LIMIT, SQRT_PI, erfi_scaled
from .errors import InvalidParameters


def _beta(temperature):
    if not (isinstance(temperature, (int, float)) and math.isfinite(temperature) and temperature > 0):
        raise InvalidParameters(f"temperature must be a positive finite number, got {temperature!r}")
    return 1.0 / temperature


def closed_sigma(p):
    """sigma = 1/2 - sqrt((delta^2 - 1/4)/(alpha^2 q^2) + 1/4), as used by the closed forms.

    Note the q^2: for q != 1 this is not -n_max of the bound ladder, whose
    w_tilde carries xi/q.  The closed forms keep the q^2 regardless.
    """
    return 0.5 - math.sqrt(p.depth / (p.alpha * p.alpha * p.q * p.q) + 0.25)


def boltzmann_weights(energies, beta):
    """exp(-beta (E_n - E_0)); every entry is <= 1 for an ordered ladder."""
    e = np.asarray(energies, dtype=float)
    return np.exp(-beta * (e - e[0]))


def log_partition_sum(s, temperature):
    beta = _beta(temperature)
    w = boltzmann_weights(s.energies, beta)
    return -beta * float(s.energies[0]) + math.log(float(w.sum()))


def partition_sum(s, temperature):
    """Z = sum_n exp(-E_n / T) over the bound levels.

    Raises OverflowError when Z exceeds double range; use
    :func:`log_partition_sum` there.
    """
    lz = log_partition_sum(s, temperature)
    if lz > EXP_LIMIT:
        raise OverflowError(f"partition sum overflows (log Z = {lz:.1f}); use log_partition_sum")
    return math.exp(lz)


def log_partition_closed(p, temperature):
    beta = _beta(temperature)
    a = math.sqrt(beta * p.alpha * p.alpha / 2.0)
    x = a * closed_sigma(p)
    return x * x + math.log(SQRT_PI * -erfi_scaled(x) / (2.0 * a))


def partition_closed(p, temperature):
    """Continuum partition function sqrt(pi) (-erfi(sqrt(beta p) sigma)) / (2 sqrt(beta p)).

    p = alpha^2 / 2 and sigma from :func:`closed_sigma`.
    """
    lz = log_partition_closed(p, temperature)
    if lz > EXP_LIMIT:
        raise OverflowError(f"closed-form partition function overflows (log Z = {lz:.1f})")
    return math.exp(lz)


@dataclass(frozen=True)
class ThermalState:
    beta: float
    log_z: float
    probs: np.ndarray = field(repr=False)

    @property
    def z_value(self):
        return math.exp(self.log_z) if self.log_z <= EXP_LIMIT else math.inf

    @property
    def temperature(self):
        return 1.0 / self.beta


def thermal_state(s, temperature):
    """Gibbs populations P_n = exp(-E_n/T) / Z normalised by the exact sum."""
    beta = _beta(temperature)
    w = boltzmann_weights(s.energies, beta)
    total = float(w.sum())
    probs = w / total
    probs.setflags(write=False)
    return ThermalState(beta=beta, log_z=-beta * float(s.energies[0]) + math.log(total), probs=probs)
