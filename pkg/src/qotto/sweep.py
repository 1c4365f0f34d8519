"""Deterministic (q, delta) grid sweeps, optimum search and CSV/JSON output."""

import csv
import enum
import io
import json
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np

from . import _cycle_kernels as kern
from ._accel import NUMBA_ENABLED
from .errors import InvalidParameters, MetricUndefinedEverywhere, QottoError
from .otto import (
    DEFAULT_TOL,
    DEFAULT_TRUNCATION_BOUND,
    CycleConfig,
    CycleResult,
    Method,
    _finish,
)

# nodes per work item; fixed so results never depend on the thread count
CHUNK = 64

CSV_COLUMNS = (
    "q", "delta", "alpha_h", "alpha_c", "t_h", "t_c", "method",
    "q_hot", "q_cold", "work", "efficiency", "cop", "regime", "truncation_loss",
)


class SweepMethod(str, enum.Enum):
    CLOSED_FORM = "closed"
    DISCRETE_SUM = "sum"
    BOTH = "both"

    def methods(self):
        if self is SweepMethod.BOTH:
            return (Method.CLOSED_FORM, Method.DISCRETE_SUM)
        return (Method(self.value),)


class Metric(str, enum.Enum):
    EFFICIENCY = "efficiency"
    COP = "cop"
    WORK = "work"
    Q_COLD = "q_cold"


@dataclass(frozen=True)
class SweepSpec:
    q_min: float
    q_max: float
    delta_min: float
    delta_max: float
    n_q: int
    n_delta: int
    alpha_h: float
    alpha_c: float
    t_h: float
    t_c: float
    method: SweepMethod = SweepMethod.CLOSED_FORM
    tol: float = DEFAULT_TOL
    truncation_bound: float = DEFAULT_TRUNCATION_BOUND

    def __post_init__(self):
        object.__setattr__(self, "method", SweepMethod(self.method))
        for name in ("q_min", "q_max", "delta_min", "delta_max", "alpha_h", "alpha_c",
                     "t_h", "t_c", "tol", "truncation_bound"):
            object.__setattr__(self, name, float(getattr(self, name)))
        for name in ("n_q", "n_delta"):
            object.__setattr__(self, name, int(getattr(self, name)))
        if not self.q_min < self.q_max:
            raise InvalidParameters(f"need q_min < q_max, got {self.q_min} >= {self.q_max}")
        if not self.delta_min < self.delta_max:
            raise InvalidParameters(
                f"need delta_min < delta_max, got {self.delta_min} >= {self.delta_max}"
            )
        if self.n_q < 2 or self.n_delta < 2:
            raise InvalidParameters(f"grid needs n_q, n_delta >= 2, got {self.n_q}x{self.n_delta}")
        if self.q_min <= 0:
            raise InvalidParameters(f"q_min must be > 0, got {self.q_min}")

    @property
    def q_values(self):
        return np.linspace(self.q_min, self.q_max, self.n_q)

    @property
    def delta_values(self):
        return np.linspace(self.delta_min, self.delta_max, self.n_delta)

    def header(self):
        d = asdict(self)
        d["method"] = self.method.value
        return d


@dataclass(frozen=True)
class SweepCell:
    i_delta: int
    i_q: int
    q: float
    delta: float
    method: Method
    result: CycleResult | None = None
    error: str | None = None
    truncation_loss: float | None = None

    @property
    def ok(self):
        return self.result is not None


@dataclass
class SweepGrid:
    """Row-major by (i_delta, i_q), methods innermost.

    ``cells`` holds every successful evaluation and ``failures`` the rest;
    ``nodes`` keeps both in grid order.
    """

    spec: SweepSpec
    nodes: list = field(default_factory=list)

    @property
    def cells(self):
        return [c for c in self.nodes if c.ok]

    @property
    def failures(self):
        return [(k, c.error) for k, c in enumerate(self.nodes) if not c.ok]

    def select(self, method):
        method = Method(method)
        return [c for c in self.nodes if c.method is method]

    def array(self, attr, method):
        """(n_delta, n_q) array of a result attribute; NaN where undefined or failed."""
        out = np.full((self.spec.n_delta, self.spec.n_q), np.nan)
        for c in self.select(method):
            if c.ok:
                v = getattr(c.result, attr)
                if v is not None:
                    out[c.i_delta, c.i_q] = v
        return out


def _threads(threads):
    if threads is None:
        env = os.environ.get("QOTTO_THREADS", "").strip()
        threads = int(env) if env else (os.cpu_count() or 1)
    return max(1, int(threads))


def _run_kernel(method, arrays):
    if method is Method.CLOSED_FORM:
        fn = kern.closed_heats_loop if NUMBA_ENABLED else kern.closed_heats_np
    else:
        fn = kern.sum_cycle_loop if NUMBA_ENABLED else kern.sum_cycle_np
    return fn(*arrays)


def run_sweep(spec, threads=None):
    """Evaluate every (delta, q) node; per-node failures are recorded, never raised."""
    deltas = spec.delta_values
    qs = spec.q_values
    dd, qq = np.meshgrid(deltas, qs, indexing="ij")
    dd = dd.ravel()
    qq = qq.ravel()
    size = dd.size
    const = [np.full(size, v, dtype=float) for v in (spec.alpha_h, spec.alpha_c, spec.t_h, spec.t_c)]

    configs = []
    for k in range(size):
        try:
            configs.append(CycleConfig(float(qq[k]), float(dd[k]), spec.alpha_h, spec.alpha_c,
                                       spec.t_h, spec.t_c))
        except QottoError as exc:
            configs.append(type(exc).__name__)

    valid = np.array([isinstance(c, CycleConfig) for c in configs])
    idx = np.flatnonzero(valid)
    chunks = [idx[i:i + CHUNK] for i in range(0, idx.size, CHUNK)]
    outputs = {}
    with ThreadPoolExecutor(max_workers=_threads(threads)) as pool:
        for method in spec.method.methods():
            futures = [
                pool.submit(_run_kernel, method,
                            (qq[ch], dd[ch], const[0][ch], const[1][ch], const[2][ch], const[3][ch]))
                for ch in chunks
            ]
            parts = [f.result() for f in futures]
            # slot assembly: chunk order is fixed, independent of thread count
            outputs[method] = [np.concatenate([p[j] for p in parts]) if parts else np.empty(0)
                               for j in range(len(parts[0]) if parts else 0)]

    slot = np.full(size, -1)
    slot[idx] = np.arange(idx.size)
    grid = SweepGrid(spec)
    for k in range(size):
        i_delta, i_q = divmod(k, spec.n_q)
        for method in spec.method.methods():
            base = dict(i_delta=i_delta, i_q=i_q, q=float(qq[k]), delta=float(dd[k]), method=method)
            cfg = configs[k]
            if not isinstance(cfg, CycleConfig):
                grid.nodes.append(SweepCell(**base, error=cfg))
                continue
            grid.nodes.append(_cell(spec, cfg, method, outputs[method], slot[k], base))
    return grid


def _cell(spec, cfg, method, out, j, base):
    if method is Method.CLOSED_FORM:
        q_hot, q_cold = float(out[0][j]), float(out[1][j])
        w, loss = q_hot + q_cold, 0.0
    else:
        q_hot, q_cold, w, loss = (float(out[i][j]) for i in range(4))
        if loss > spec.truncation_bound:
            return SweepCell(**base, error="TruncationTooLarge", truncation_loss=loss)
    if not all(math.isfinite(v) for v in (q_hot, q_cold, w)):
        return SweepCell(**base, error="NumericalBreakdown")
    result = _finish(cfg, method, q_hot, q_cold, w, spec.tol, loss)
    return SweepCell(**base, result=result, truncation_loss=loss)


def find_optimum(grid, metric, method=None):
    """Argmax of a metric over cells where it is defined.

    Ties go to the lowest (i_delta, i_q).  ``method`` defaults to the first
    method present in the grid.  Returns ((i_delta, i_q), value).
    """
    metric = Metric(metric)
    if method is None:
        method = grid.nodes[0].method if grid.nodes else Method.CLOSED_FORM
    method = Method(method)
    best = None
    for c in grid.nodes:
        if c.method is not method or not c.ok:
            continue
        v = getattr(c.result, metric.value)
        if v is None or not math.isfinite(v):
            continue
        if best is None or v > best[1]:
            best = ((c.i_delta, c.i_q), v)
    if best is None:
        raise MetricUndefinedEverywhere(f"{metric.value} is undefined on every {method.value} cell")
    return best


# ---------------------------------------------------------------------------
# output
# ---------------------------------------------------------------------------

def fmt_float(v):
    """Shortest round-trip rendering (repr); empty for None."""
    return "" if v is None else repr(float(v))


def _record(spec, cell):
    r = cell.result
    rec = {
        "q": cell.q, "delta": cell.delta,
        "alpha_h": spec.alpha_h, "alpha_c": spec.alpha_c, "t_h": spec.t_h, "t_c": spec.t_c,
        "method": cell.method.value,
        "q_hot": r.q_hot if r else None,
        "q_cold": r.q_cold if r else None,
        "work": r.work if r else None,
        "efficiency": r.efficiency if r else None,
        "cop": r.cop if r else None,
        "regime": r.regime.value if r else f"failed:{cell.error}",
        "truncation_loss": cell.truncation_loss,
    }
    return rec


def records(grid):
    return [_record(grid.spec, c) for c in grid.nodes]


def to_csv(grid):
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(CSV_COLUMNS)
    for rec in records(grid):
        w.writerow([fmt_float(rec[k]) if isinstance(rec[k], float) or rec[k] is None else rec[k]
                    for k in CSV_COLUMNS])
    return buf.getvalue()


def to_json(grid):
    return json.dumps({"spec": grid.spec.header(), "records": records(grid)}, indent=2) + "\n"


def emit(grid, fmt="csv", destination=None):
    """Write the grid as CSV or JSON to a path, a text stream, or return it when destination is None."""
    text = to_csv(grid) if fmt == "csv" else to_json(grid) if fmt == "json" else None
    if text is None:
        raise ValueError(f"unknown format {fmt!r}; expected 'csv' or 'json'")
    if destination is None:
        return text
    if hasattr(destination, "write"):
        destination.write(text)
        return text
    try:
        with open(destination, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)
    except OSError as exc:
        raise OSError(f"cannot write sweep output to {destination}: {exc}") from exc
    return text
