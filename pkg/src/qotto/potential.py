"""The q-deformed modified Poschl-Teller well, its bound states and eigenfunctions.

Natural units throughout: hbar = mu = k_B = 1.

The deformed hyperbolic functions obey cosh_q(y) = sqrt(q) cosh(y - ln(q)/2), so
the well is an ordinary Poschl-Teller well of depth (delta^2 - 1/4) / (2q)
centred at x* = ln(q) / (2 alpha).  Everything below follows from that.
"""

import math
from dataclasses import dataclass, field

import numpy as np

from .deformed_math import log_cosh_q, tanh_q
from .errors import IndexOutOfSpectrum, InvalidParameters, NoBoundStates, NonConvergentTail

# endpoint amplitude (relative to the peak) below which the grid covers the state
TAIL_THRESHOLD = 1e-12
DEFAULT_POINTS = 4001
DEFAULT_HALF_WIDTH = 15.0  # in units of 1/alpha
# e^-32 ~ 1e-14: the half-width needed for a state decaying like e^{-nu alpha |x|}
_TAIL_DECAY = 32.0


@dataclass(frozen=True)
class PotentialParams:
    """One working-substance configuration (q, delta, alpha)."""

    q: float
    delta: float
    alpha: float

    def __post_init__(self):
        for name in ("q", "delta", "alpha"):
            v = getattr(self, name)
            if not isinstance(v, (int, float)) or not math.isfinite(v):
                raise InvalidParameters(f"{name} must be a finite real number, got {v!r}")
        if self.q <= 0:
            raise InvalidParameters(f"q must be > 0, got {self.q}")
        if self.alpha <= 0:
            raise InvalidParameters(f"alpha must be > 0, got {self.alpha}")
        if self.delta <= 0.5:
            raise NoBoundStates(
                f"delta must exceed 1/2 for a bound state to exist, got {self.delta}"
            )

    @property
    def depth(self):
        """delta^2 - 1/4, the coupling in front of 1/cosh_q^2."""
        return self.delta * self.delta - 0.25

    @property
    def x_min(self):
        """Location of the well minimum, ln(q) / (2 alpha)."""
        return math.log(self.q) / (2.0 * self.alpha)

    @property
    def u_min(self):
        return -self.depth / (2.0 * self.q)


@dataclass(frozen=True)
class ReducedVariables:
    xi: float
    w_tilde: float

    def nu(self, n):
        return self.w_tilde - n - 0.5


def reduced_variables(p):
    xi = p.depth / (p.alpha * p.alpha)
    return ReducedVariables(xi=xi, w_tilde=math.sqrt(0.25 + xi / p.q))


def n_max(p):
    """Real-valued upper bound on the level index, where dE/dn = 0.

    Equals w_tilde - 1/2 = sqrt((delta^2 - 1/4)/(alpha^2 q) + 1/4) - 1/2.
    """
    return reduced_variables(p).w_tilde - 0.5


def level_count(nmax):
    # levels n = 0, 1, ... with n < nmax; a level exactly at E = 0 is not bound
    return max(int(math.ceil(nmax)), 1) if nmax > 0 else 0


@dataclass(frozen=True)
class Spectrum:
    params: PotentialParams
    n_max_real: float
    num_levels: int
    energies: np.ndarray = field(repr=False)

    def __len__(self):
        return self.num_levels


def energy_level(n, p):
    """E_n = -(alpha^2 / 2) (n + 1/2 - w_tilde)^2, bound or not."""
    w = reduced_variables(p).w_tilde
    return -0.5 * p.alpha * p.alpha * (n + 0.5 - w) ** 2


def spectrum(p):
    """All bound levels n = 0 .. ceil(n_max) - 1, strictly increasing and negative."""
    if p.delta <= 0.5:
        raise NoBoundStates(f"delta={p.delta} leaves no bound state")
    nm = n_max(p)
    count = level_count(nm)
    if count < 1:
        raise NoBoundStates(f"n_max={nm} leaves no bound state")
    n = np.arange(count, dtype=float)
    energies = energy_level(n, p)
    energies.setflags(write=False)
    return Spectrum(params=p, n_max_real=nm, num_levels=count, energies=energies)


def potential(x, p):
    """U_q(x) = -(delta^2 - 1/4) / (2 cosh_q^2(alpha x)).

    Evaluated through cosh_q^2(y) = q cosh^2(y - ln(q)/2), which never overflows
    into a NaN and reduces bit-for-bit to the undeformed well at q = 1.
    """
    return potential_curve(x, p.q, p.delta, p.alpha)


def potential_curve(x, q, delta, alpha):
    """:func:`potential` for raw parameters, without requiring a bound state.

    delta = 1/2 gives the flat (zero) potential; delta < 1/2 a barrier.
    """
    if not (q > 0 and alpha > 0 and math.isfinite(q) and math.isfinite(alpha) and math.isfinite(delta)):
        raise InvalidParameters(f"need finite q > 0 and alpha > 0, got q={q}, alpha={alpha}")
    x = np.asarray(x, dtype=float)
    shift = 0.5 * math.log(q)
    with np.errstate(over="ignore"):
        c = np.cosh(alpha * x - shift)
        out = (0.25 - delta * delta) / (2.0 * q * c * c)
    return float(out) if out.ndim == 0 else out


# --------------------------------------------------------------------------
# eigenfunctions
# --------------------------------------------------------------------------

def _check_level(n, p):
    count = level_count(n_max(p))
    if not 0 <= n < count:
        raise IndexOutOfSpectrum(f"level {n} outside the bound spectrum 0..{count - 1}")


def _symmetric_jacobi_scaled(n, a, z):
    """2F1(-n, n + 2a + 1; a + 1; (1 - z)/2) = n! / (a + 1)_n * P_n^(a,a)(z).

    With a = nu this is the polynomial factor of level n.  The terminating
    hypergeometric sum cancels catastrophically for high n, so the Jacobi
    polynomial is built by its three-term recurrence, which is stable on
    -1 < z < 1.
    """
    prev = np.ones_like(z)
    if n == 0:
        return prev
    cur = (a + 1.0) * z
    for m in range(2, n + 1):
        s = 2.0 * m + 2.0 * a
        nxt = ((s - 1.0) * s * (s - 2.0) * z * cur
               - 2.0 * (m + a - 1.0) ** 2 * s * prev) / (2.0 * m * (m + 2.0 * a) * (s - 2.0))
        prev, cur = cur, nxt
    scale = 1.0
    for j in range(1, n + 1):
        scale *= j / (a + j)
    return scale * cur


def wavefunction(n, x, p):
    """Unnormalised eigenfunction of level n on the points x.

    (1 - z^2)^{nu/2} 2F1(-n, -n + 2 w; -n + w + 1/2; (1 - z)/2) with
    z = tanh_q(alpha x) and 1 - z^2 = q / cosh_q^2(alpha x) taken in log form.
    Since -n + 2w = n + 2 nu + 1 and -n + w + 1/2 = nu + 1, the polynomial
    is a scaled symmetric Jacobi polynomial in z.
    """
    _check_level(n, p)
    rv = reduced_variables(p)
    nu = rv.nu(n)
    w = rv.w_tilde
    x = np.asarray(x, dtype=float)
    y = p.alpha * x
    z = tanh_q(y, p.q)
    log_one_minus_z2 = math.log(p.q) - 2.0 * log_cosh_q(y, p.q)
    envelope = np.exp(0.5 * nu * log_one_minus_z2)
    poly = _symmetric_jacobi_scaled(n, nu, z)
    out = envelope * poly
    return float(out) if out.ndim == 0 else out


@dataclass(frozen=True)
class GridSpec:
    """Uniform grid centred on the well minimum.

    Give either ``h`` (step) or ``points``.  ``half_width`` defaults to
    15/alpha, widened automatically so the slowest-decaying requested level
    reaches the tail threshold.
    """

    half_width: float | None = None
    points: int | None = None
    h: float | None = None

    @property
    def adaptive(self):
        return self.half_width is None

    def build(self, p, levels=(), decay=_TAIL_DECAY):
        hw = self.half_width
        if hw is None:
            hw = DEFAULT_HALF_WIDTH / p.alpha
            if levels:
                nu = min(reduced_variables(p).nu(n) for n in levels)
                hw = max(hw, decay / (nu * p.alpha))
        if self.h is not None:
            k = int(math.ceil(hw / self.h))
            return p.x_min + self.h * np.arange(-k, k + 1, dtype=float)
        if self.points is None:
            # keep the default step when the window had to widen
            step = 2.0 * DEFAULT_HALF_WIDTH / p.alpha / (DEFAULT_POINTS - 1)
            points = max(DEFAULT_POINTS, int(math.ceil(2.0 * hw / step)) + 1)
        else:
            points = self.points
        if points % 2 == 0:
            points += 1
        return np.linspace(p.x_min - hw, p.x_min + hw, points)


def simpson(y, x):
    """Composite Simpson rule on a uniform grid with an odd number of points."""
    if y.shape[0] % 2 == 0:
        raise ValueError("Simpson's rule needs an odd number of points")
    h = x[1] - x[0]
    return h / 3.0 * (y[0] + y[-1] + 4.0 * y[1:-1:2].sum() + 2.0 * y[2:-1:2].sum())


def _edge_ratio(psi):
    return max(abs(psi[0]), abs(psi[-1])) / np.max(np.abs(psi))


def _states_on_grid(p, grid, levels):
    """Grid plus raw states; auto-sized windows widen until every tail has decayed."""
    decay = _TAIL_DECAY
    for _ in range(4):
        x = grid.build(p, levels=levels, decay=decay)
        states = [wavefunction(n, x, p) for n in levels]
        bad = [n for n, psi in zip(levels, states) if _edge_ratio(psi) > TAIL_THRESHOLD]
        if not bad or not grid.adaptive:
            break
        decay *= 1.5
    if bad:
        n = bad[0]
        ratio = _edge_ratio(states[levels.index(n)])
        raise NonConvergentTail(
            f"level {n}: endpoint amplitude {ratio:.2e} of peak exceeds {TAIL_THRESHOLD:g}; widen the grid"
        )
    return x, states


def _checked_state(n, p, grid):
    x, (psi,) = _states_on_grid(p, grid, (n,))
    return x, psi


def normalize(n, p, grid=GridSpec(), rule="simpson"):
    """Positive constant N with int |N psi_n|^2 dx = 1 on the grid."""
    x, psi = _checked_state(n, p, grid)
    dens = psi * psi
    if rule == "simpson":
        norm2 = simpson(dens, x)
    elif rule == "trapezoid":
        norm2 = np.trapezoid(dens, x)
    else:
        raise ValueError(f"unknown quadrature rule {rule!r}")
    return 1.0 / math.sqrt(norm2)


def normalized_states(p, grid=GridSpec(), levels=None):
    """Grid and the normalised eigenfunctions (rows) of the requested levels."""
    count = level_count(n_max(p))
    levels = tuple(range(count)) if levels is None else tuple(levels)
    x, raw = _states_on_grid(p, grid, levels)
    states = np.empty((len(levels), x.size))
    for i, psi in enumerate(raw):
        states[i] = psi / math.sqrt(simpson(psi * psi, x))
    return x, states


def gram_matrix(p, grid=GridSpec(), levels=None):
    x, states = normalized_states(p, grid, levels)
    n = states.shape[0]
    g = np.empty((n, n))
    for i in range(n):
        for j in range(i, n):
            g[i, j] = g[j, i] = simpson(states[i] * states[j], x)
    return g


def schrodinger_residual(n, p, grid=GridSpec(h=1e-3), energy=None):
    """||(-1/2 d^2/dx^2 + U - E) psi|| / ||psi|| with central differences.

    ``energy`` overrides E_n, e.g. to confirm that a wrong eigenvalue is
    detected.  Second-order accurate in the grid step.
    """
    x, psi = _checked_state(n, p, grid)
    e = energy_level(n, p) if energy is None else energy
    h = x[1] - x[0]
    d2 = (psi[2:] - 2.0 * psi[1:-1] + psi[:-2]) / (h * h)
    inner = psi[1:-1]
    r = -0.5 * d2 + (potential(x[1:-1], p) - e) * inner
    return float(np.linalg.norm(r) / np.linalg.norm(inner))
