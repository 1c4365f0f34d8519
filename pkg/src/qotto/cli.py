"""Command-line interface.

    qotto potential | spectrum | thermal | cycle | sweep  [options]

Data goes to stdout (or ``--out``), human-readable summaries to stderr.
Exit codes: 0 success, 2 invalid parameters or usage, 3 numerical failure.

``--config PATH`` reads a flat ``key = value`` file whose keys are the long
option names (dashes or underscores); ``#`` starts a comment.  Command-line
flags override file values, which override presets.
"""

import argparse
import csv
import io
import json
import math
import sys

import numpy as np

from . import presets
from .errors import InvalidParameters, NumericalError, QottoError
from .otto import (
    DEFAULT_TOL,
    DEFAULT_TRUNCATION_BOUND,
    CycleConfig,
    Method,
    evaluate_cycle,
)
from .potential import PotentialParams, energy_level, level_count, n_max, potential_curve, spectrum
from .sweep import (
    CSV_COLUMNS,
    Metric,
    SweepSpec,
    emit,
    find_optimum,
    fmt_float,
    records,
    run_sweep,
)
from .thermo import log_partition_closed, log_partition_sum, thermal_state

EXIT_OK, EXIT_USAGE, EXIT_NUMERICAL = 0, 2, 3

# option name -> (type, default)
OPTIONS = {
    "q": (float, None), "delta": (float, None), "alpha": (float, None),
    "x_min": (float, None), "x_max": (float, None), "samples": (int, None),
    "scan": (str, None), "scan_min": (float, None), "scan_max": (float, None),
    "scan_points": (int, None), "temperature": (float, None),
    "alpha_h": (float, None), "alpha_c": (float, None), "t_h": (float, None), "t_c": (float, None),
    "q_min": (float, None), "q_max": (float, None),
    "delta_min": (float, None), "delta_max": (float, None),
    "n_q": (int, None), "n_delta": (int, None),
    "tol": (float, DEFAULT_TOL), "truncation_bound": (float, DEFAULT_TRUNCATION_BOUND),
    "threads": (int, None), "preset": (str, None),
    "out": (str, None), "format": (str, "csv"), "method": (str, None),
}


class UsageError(Exception):
    pass


# ---------------------------------------------------------------------------
# config handling
# ---------------------------------------------------------------------------

def read_config(path):
    values = {}
    try:
        with open(path, encoding="utf-8") as fh:
            lines = fh.readlines()
    except OSError as exc:
        raise UsageError(f"cannot read config file {path}: {exc}") from exc
    for lineno, raw in enumerate(lines, 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise UsageError(f"{path}:{lineno}: expected 'key = value', got {raw.strip()!r}")
        key, value = (s.strip() for s in line.split("=", 1))
        key = key.replace("-", "_")
        if key not in OPTIONS:
            raise UsageError(f"{path}:{lineno}: unknown key {key!r}")
        kind = OPTIONS[key][0]
        try:
            values[key] = kind(value)
        except ValueError as exc:
            raise UsageError(f"{path}:{lineno}: {key} expects {kind.__name__}, got {value!r}") from exc
    return values


def resolve(args, preset_values=None):
    """Merge presets, config file and explicit flags (in increasing priority)."""
    flags = {k: v for k, v in vars(args).items() if k in OPTIONS}
    config = read_config(args.config) if getattr(args, "config", None) else {}
    merged = {k: d for k, (_, d) in OPTIONS.items()}
    merged.update(preset_values or {})
    merged.update(config)
    merged.update(flags)
    return merged


def _preset_name(args):
    name = getattr(args, "preset", None)
    if name is None and getattr(args, "config", None):
        name = read_config(args.config).get("preset")
    return name


def _require(values, *names):
    missing = [n for n in names if values.get(n) is None]
    if missing:
        raise UsageError("missing required parameter(s): " + ", ".join("--" + m.replace("_", "-") for m in missing))
    return [values[n] for n in names]


# ---------------------------------------------------------------------------
# output helpers
# ---------------------------------------------------------------------------

def _cell(v):
    if v is None:
        return ""
    if isinstance(v, float):
        return fmt_float(v)
    return str(v)


def write_table(columns, rows, values, stdout):
    fmt = values["format"]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(columns)
        for row in rows:
            w.writerow([_cell(row[c]) for c in columns])
        text = buf.getvalue()
    elif fmt == "json":
        text = json.dumps([{c: row[c] for c in columns} for row in rows], indent=2) + "\n"
    else:
        raise UsageError(f"unknown format {fmt!r}; expected csv or json")
    _deliver(text, values, stdout)


def _deliver(text, values, stdout):
    if values.get("out"):
        try:
            with open(values["out"], "w", encoding="utf-8", newline="") as fh:
                fh.write(text)
        except OSError as exc:
            raise UsageError(f"cannot write output to {values['out']}: {exc}") from exc
    else:
        stdout.write(text)


# ---------------------------------------------------------------------------
# subcommands
# ---------------------------------------------------------------------------

def cmd_potential(args, stdout, stderr):
    name = _preset_name(args)
    preset = dict(presets.POTENTIAL_BASE)
    curves = None
    if name is not None:
        if name not in presets.POTENTIAL_PRESETS:
            raise UsageError(f"unknown potential preset {name!r}; choose from {sorted(presets.POTENTIAL_PRESETS)}")
        curves = presets.POTENTIAL_PRESETS[name]
        preset.update(x_min=presets.POTENTIAL_X_RANGE[0], x_max=presets.POTENTIAL_X_RANGE[1],
                      samples=presets.POTENTIAL_SAMPLES)
    else:
        preset = {}
    values = resolve(args, preset)
    q, delta, alpha = _require(values, "q", "delta", "alpha")
    x_min = -6.0 if values["x_min"] is None else values["x_min"]
    x_max = 6.0 if values["x_max"] is None else values["x_max"]
    samples = 201 if values["samples"] is None else values["samples"]
    if samples < 1 or not x_min <= x_max:
        raise InvalidParameters("need samples >= 1 and x_min <= x_max")
    xs = np.linspace(x_min, x_max, samples)
    base = dict(q=q, delta=delta, alpha=alpha)
    settings = [base] if curves is None else [dict(base, **{curves[0]: v}) for v in curves[1]]
    rows = []
    for s in settings:
        u = potential_curve(xs, s["q"], s["delta"], s["alpha"])
        rows.extend(dict(s, x=float(x), potential=float(v)) for x, v in zip(xs, u))
    write_table(("q", "delta", "alpha", "x", "potential"), rows, values, stdout)
    print(f"potential: {len(settings)} curve(s) x {samples} samples", file=stderr)
    return EXIT_OK


def cmd_spectrum(args, stdout, stderr):
    name = _preset_name(args)
    preset = {}
    if name is not None:
        if name not in presets.SPECTRUM_PRESETS:
            raise UsageError(f"unknown spectrum preset {name!r}; choose from {sorted(presets.SPECTRUM_PRESETS)}")
        scan, (lo, hi), fixed = presets.SPECTRUM_PRESETS[name]
        preset = dict(fixed, scan=scan, scan_min=lo, scan_max=hi, scan_points=presets.SPECTRUM_SCAN_POINTS)
    values = resolve(args, preset)
    columns = ("q", "delta", "alpha", "n", "energy", "n_max")
    scan = values["scan"]
    if scan is None:
        q, delta, alpha = _require(values, "q", "delta", "alpha")
        s = spectrum(PotentialParams(q, delta, alpha))
        rows = [dict(q=q, delta=delta, alpha=alpha, n=n, energy=float(e), n_max=s.n_max_real)
                for n, e in enumerate(s.energies)]
        write_table(columns, rows, values, stdout)
        print(f"spectrum: {s.num_levels} bound level(s), n_max = {fmt_float(s.n_max_real)}", file=stderr)
        return EXIT_OK
    if scan not in ("q", "alpha", "delta"):
        raise UsageError(f"--scan must be one of q, alpha, delta; got {scan!r}")
    fixed = [k for k in ("q", "delta", "alpha") if k != scan]
    _require(values, *fixed, "scan_min", "scan_max")
    points = values["scan_points"] or 50
    rows = []
    for v in np.linspace(values["scan_min"], values["scan_max"], points):
        s = dict((k, values[k]) for k in fixed)
        s[scan] = float(v)
        p = PotentialParams(s["q"], s["delta"], s["alpha"])
        nm = n_max(p)
        for n in range(level_count(nm)):
            rows.append(dict(s, n=n, energy=float(energy_level(n, p)), n_max=nm))
    write_table(columns, rows, values, stdout)
    print(f"spectrum scan over {scan}: {points} points, {len(rows)} bound levels", file=stderr)
    return EXIT_OK


def cmd_thermal(args, stdout, stderr):
    values = resolve(args)
    q, delta, alpha, temperature = _require(values, "q", "delta", "alpha", "temperature")
    p = PotentialParams(q, delta, alpha)
    s = spectrum(p)
    state = thermal_state(s, temperature)
    rows = [dict(n=n, energy=float(e), probability=float(pr))
            for n, (e, pr) in enumerate(zip(s.energies, state.probs))]
    write_table(("n", "energy", "probability"), rows, values, stdout)
    lz_sum = log_partition_sum(s, temperature)
    lz_closed = log_partition_closed(p, temperature)
    print(f"beta = {fmt_float(state.beta)}  log Z_sum = {fmt_float(lz_sum)}  "
          f"log Z_closed = {fmt_float(lz_closed)}  "
          f"relative gap = {fmt_float(abs(math.expm1(lz_closed - lz_sum)))}", file=stderr)
    return EXIT_OK


def _cycle_method(values, default):
    m = values["method"] or default
    if m not in ("closed", "sum", "both"):
        raise UsageError(f"--method must be closed, sum or both; got {m!r}")
    return (Method.CLOSED_FORM, Method.DISCRETE_SUM) if m == "both" else (Method(m),)


def cmd_cycle(args, stdout, stderr):
    name = _preset_name(args)
    preset = {}
    if name is not None:
        if name not in presets.SWEEP_PRESETS:
            raise UsageError(f"unknown cycle preset {name!r}; choose from {sorted(presets.SWEEP_PRESETS)}")
        preset = dict(presets.CYCLE_BATHS)
    values = resolve(args, preset)
    q, delta, ah, ac, th, tc = _require(values, "q", "delta", "alpha_h", "alpha_c", "t_h", "t_c")
    cfg = CycleConfig(q, delta, ah, ac, th, tc)
    rows, results, failed = [], {}, []
    for method in _cycle_method(values, "closed"):
        base = dict(q=q, delta=delta, alpha_h=ah, alpha_c=ac, t_h=th, t_c=tc, method=method.value)
        try:
            r = evaluate_cycle(cfg, method, tol=values["tol"], truncation_bound=values["truncation_bound"])
        except NumericalError as exc:
            failed.append((method, exc))
            rows.append(dict(base, q_hot=None, q_cold=None, work=None, efficiency=None, cop=None,
                             regime=f"failed:{type(exc).__name__}",
                             truncation_loss=getattr(exc, "loss", None)))
            continue
        results[method] = r
        rows.append(dict(base, q_hot=r.q_hot, q_cold=r.q_cold, work=r.work, efficiency=r.efficiency,
                         cop=r.cop, regime=r.regime.value, truncation_loss=r.truncation_loss))
    write_table(CSV_COLUMNS, rows, values, stdout)
    for method, r in results.items():
        figure = (f"eta = {fmt_float(r.efficiency)}" if r.efficiency is not None
                  else f"COP = {fmt_float(r.cop)}" if r.cop is not None else "")
        print(f"[{method.value}] Q_h = {fmt_float(r.q_hot)}  Q_c = {fmt_float(r.q_cold)}  "
              f"W = {fmt_float(r.work)}  {figure}  regime = {r.regime.value}  "
              f"truncation_loss = {fmt_float(r.truncation_loss)}", file=stderr)
        if r.exceeds_carnot:
            print(f"[{method.value}] warning: eta exceeds the Carnot bound {fmt_float(cfg.carnot)}", file=stderr)
    if len(results) == 2:
        c, s = results[Method.CLOSED_FORM], results[Method.DISCRETE_SUM]
        gaps = {k: abs(getattr(c, k) - getattr(s, k)) / abs(getattr(s, k)) if getattr(s, k) else math.inf
                for k in ("q_hot", "q_cold", "work")}
        print("closed/sum relative gaps: " + "  ".join(f"{k} = {fmt_float(v)}" for k, v in gaps.items()),
              file=stderr)
    for method, exc in failed:
        print(f"[{method.value}] numerical failure: {exc}", file=stderr)
    return EXIT_NUMERICAL if failed else EXIT_OK


def cmd_sweep(args, stdout, stderr):
    name = _preset_name(args)
    preset = {}
    if name is not None:
        if name not in presets.SWEEP_PRESETS:
            raise UsageError(f"unknown sweep preset {name!r}; choose from {sorted(presets.SWEEP_PRESETS)}")
        spec = presets.SWEEP_PRESETS[name]()
        preset = {k: v for k, v in spec.header().items() if k in OPTIONS}
    values = resolve(args, preset)
    fields = ("q_min", "q_max", "delta_min", "delta_max", "n_q", "n_delta",
              "alpha_h", "alpha_c", "t_h", "t_c")
    _require(values, *fields)
    method = values["method"] or "closed"
    if method not in ("closed", "sum", "both"):
        raise UsageError(f"--method must be closed, sum or both; got {method!r}")
    spec = SweepSpec(**{k: values[k] for k in fields}, method=method, tol=values["tol"],
                     truncation_bound=values["truncation_bound"])
    grid = run_sweep(spec, threads=values["threads"])
    if values["format"] not in ("csv", "json"):
        raise UsageError(f"unknown format {values['format']!r}; expected csv or json")
    text = emit(grid, values["format"])
    _deliver(text, values, stdout)

    total = len(grid.nodes)
    print(f"sweep: {total} evaluations, {len(grid.failures)} failed", file=stderr)
    for m in spec.method.methods():
        for metric in (Metric.EFFICIENCY, Metric.COP):
            try:
                (i_d, i_q), v = find_optimum(grid, metric, m)
            except QottoError:
                continue
            print(f"[{m.value}] max {metric.value} = {fmt_float(v)} at delta = "
                  f"{fmt_float(spec.delta_values[i_d])}, q = {fmt_float(spec.q_values[i_q])} "
                  f"(cell {i_d},{i_q})", file=stderr)
    return EXIT_OK


# ---------------------------------------------------------------------------
# parser
# ---------------------------------------------------------------------------

def _common():
    p = argparse.ArgumentParser(add_help=False)
    s = argparse.SUPPRESS
    p.add_argument("--out", default=s, help="write data here instead of stdout")
    p.add_argument("--format", choices=("csv", "json"), default=s)
    p.add_argument("--method", choices=("closed", "sum", "both"), default=s)
    p.add_argument("--config", default=s, help="flat key = value parameter file")
    return p


def _opt(p, *names, kind=float, **kw):
    for n in names:
        p.add_argument("--" + n, dest=n.replace("-", "_"), type=kind, default=argparse.SUPPRESS, **kw)


def build_parser():
    common = _common()
    parser = argparse.ArgumentParser(prog="qotto", description="q-deformed Poschl-Teller quantum Otto machine",
                                     parents=[common])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("potential", parents=[common], help="tabulate U_q(x)")
    _opt(p, "q", "delta", "alpha", "x-min", "x-max")
    _opt(p, "samples", kind=int)
    _opt(p, "preset", kind=str, choices=sorted(presets.POTENTIAL_PRESETS))

    p = sub.add_parser("spectrum", parents=[common], help="bound-state energies")
    _opt(p, "q", "delta", "alpha", "scan-min", "scan-max")
    _opt(p, "scan", kind=str, choices=("q", "alpha", "delta"))
    _opt(p, "scan-points", kind=int)
    _opt(p, "preset", kind=str, choices=sorted(presets.SPECTRUM_PRESETS))

    p = sub.add_parser("thermal", parents=[common], help="Gibbs populations and partition functions")
    _opt(p, "q", "delta", "alpha", "temperature")

    p = sub.add_parser("cycle", parents=[common], help="one Otto cycle")
    _opt(p, "q", "delta", "alpha-h", "alpha-c", "t-h", "t-c", "tol", "truncation-bound")
    _opt(p, "preset", kind=str, choices=sorted(presets.SWEEP_PRESETS),
         help="take alpha_h, alpha_c, t_h, t_c from a sweep preset")

    p = sub.add_parser("sweep", parents=[common], help="(q, delta) grid sweep")
    _opt(p, "q-min", "q-max", "delta-min", "delta-max", "alpha-h", "alpha-c", "t-h", "t-c",
         "tol", "truncation-bound")
    _opt(p, "n-q", "n-delta", "threads", kind=int)
    _opt(p, "preset", kind=str, choices=sorted(presets.SWEEP_PRESETS))
    return parser


COMMANDS = {
    "potential": cmd_potential,
    "spectrum": cmd_spectrum,
    "thermal": cmd_thermal,
    "cycle": cmd_cycle,
    "sweep": cmd_sweep,
}


def main(argv=None, stdout=None, stderr=None):
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else EXIT_USAGE
    try:
        return COMMANDS[args.command](args, stdout, stderr)
    except UsageError as exc:
        print(f"qotto {args.command}: {exc}", file=stderr)
        return EXIT_USAGE
    except InvalidParameters as exc:
        print(f"qotto {args.command}: invalid parameters: {exc}", file=stderr)
        return EXIT_USAGE
    except (NumericalError, OverflowError) as exc:
        print(f"qotto {args.command}: numerical failure: {exc}", file=stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
