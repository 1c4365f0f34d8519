"""Named parameter presets for the standard potential, spectrum and cycle plots."""

from .sweep import SweepMethod, SweepSpec

# shared by both cycle figures
CYCLE_BATHS = dict(alpha_h=1.118, alpha_c=0.5, t_h=5.0, t_c=1.0)
FIG_GRID = 41

# potential curves: base (q, delta, alpha) = (1, 1.5, 1), one parameter varied
POTENTIAL_BASE = dict(q=1.0, delta=1.5, alpha=1.0)
POTENTIAL_PRESETS = {
    "fig1a": ("alpha", (0.5, 1.0, 2.0)),
    "fig1b": ("q", (0.5, 0.7, 0.9, 1.0)),
    "fig1c": ("delta", (0.9, 1.8, 2.7, 3.6)),
}
POTENTIAL_X_RANGE = (-6.0, 6.0)
POTENTIAL_SAMPLES = 601

# spectrum scans: (scanned parameter, range, fixed parameters)
SPECTRUM_PRESETS = {
    "fig2a": ("q", (0.3, 1.0), dict(delta=2.0, alpha=1.5)),
    "fig2b": ("alpha", (0.2, 2.0), dict(q=1.0, delta=2.0)),
    "fig2c": ("delta", (1.0, 4.0), dict(q=1.0, alpha=0.5)),
}
SPECTRUM_SCAN_POINTS = 71


def fig4(n=FIG_GRID, method=SweepMethod.BOTH):
    return SweepSpec(q_min=0.8, q_max=0.9, delta_min=3.7, delta_max=5.0, n_q=n, n_delta=n,
                     method=method, **CYCLE_BATHS)


def fig5(n=FIG_GRID, method=SweepMethod.BOTH):
    return SweepSpec(q_min=0.8, q_max=1.0, delta_min=0.9, delta_max=1.0, n_q=n, n_delta=n,
                     method=method, **CYCLE_BATHS)


SWEEP_PRESETS = {"fig4": fig4, "fig5": fig5}
