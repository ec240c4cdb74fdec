"""Command-line front end.

Subcommands: run, sweep, thermal-scan, golden-rule, bench, plots.  Each
consumes a JSON config (plus flag overrides), writes CSV data files, a
summary JSON, and a canonical config echo into the output directory.
Exit codes: 0 success, 2 config error, 3 numerical non-convergence.

Time-series runs include an automatic dt-convergence check: the run is
repeated at dt/2 (with doubled sample thinning so sample times match)
and accepted when every sampled concurrence moves by at most 1e-4;
otherwise dt is halved, up to four times, before giving up with exit
code 3.  Summary JSON key names are documented in the README.
"""

from __future__ import annotations

import argparse
import csv
import json
import math
import os
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .lattice import load_lattice
from .schedules import FieldSchedule, UnsupportedScheduleError, discretize, field_at, \
    parse_schedule, schedule_normal_form
from .evolution import (ground_state, evolve_matrix_stepper, evolve_projection_stepper,
                        evolve_thermal, thermal_initial_state)
from .observables import concurrence_trajectory, entanglement_of_formation, ground_state_sweep, \
    time_average
from .symmetry import SectorLeakageError, build_sector_bases, evolve_projection_in_sector, \
    find_sector
from .analysis import (benchmark_engines, critical_temperature_scan, ergodicity_gap,
                       golden_rule_report)

CONVERGENCE_TOL = 1e-4
MAX_HALVINGS = 4

DEFAULT_CUTOFF = 1.0 - 1e-10


class ConfigError(ValueError):
    """Invalid configuration; maps to exit code 2."""


class NonConvergenceError(RuntimeError):
    """dt halving exhausted without meeting the tolerance; exit code 3."""


def _pair_key(pair) -> str:
    return "C(%d,%d)" % (pair[0], pair[1])


def _fmt(x) -> str:
    if isinstance(x, float):
        return "%.12g" % x
    return str(x)


def write_csv(path, header, rows):
    # column names like C(1,4) carry commas and need RFC 4180 quotes
    names = ['"%s"' % h if "," in h else h for h in header]
    with open(path, "w") as fh:
        fh.write(",".join(names) + "\n")
        for row in rows:
            fh.write(",".join(_fmt(x) for x in row) + "\n")


def write_json(path, doc):
    with open(path, "w") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def parse_pairs(text: str):
    """Pairs from the flag syntax '1,4;1,2'."""
    out = []
    for chunk in text.split(";"):
        bits = chunk.split(",")
        if len(bits) != 2:
            raise ConfigError("bad pair %r (expected 'i,j')" % chunk)
        try:
            out.append([int(bits[0]), int(bits[1])])
        except ValueError as exc:
            raise ConfigError("bad pair %r: %s" % (chunk, exc)) from None
    return out


def _grid_values(doc, name):
    if isinstance(doc, dict):
        try:
            start, stop, step = float(doc["start"]), float(doc["stop"]), float(doc["step"])
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError("%s grid needs numeric start/stop/step" % name) from exc
        if step <= 0 or stop < start:
            raise ConfigError("%s grid needs step > 0 and stop >= start" % name)
        n = int(math.floor((stop - start) / step + 1e-9)) + 1
        return start + step * np.arange(n)
    if isinstance(doc, (list, tuple)):
        vals = np.asarray([float(x) for x in doc])
        if len(vals) == 0:
            raise ConfigError("%s grid is empty" % name)
        return vals
    raise ConfigError("%s grid must be a list or {start, stop, step}" % name)


def _grid_normal_form(doc):
    if isinstance(doc, dict):
        return {"start": float(doc["start"]), "stop": float(doc["stop"]),
                "step": float(doc["step"])}
    return [float(x) for x in doc]


def _validate_pairs(pairs, lat):
    norm = []
    for pair in pairs:
        if len(pair) != 2:
            raise ConfigError("pair %r must have two sites" % (pair,))
        i, j = int(pair[0]), int(pair[1])
        if i == j or not (1 <= i <= lat.n_sites) or not (1 <= j <= lat.n_sites):
            raise ConfigError("pair (%d,%d) invalid for %d-site lattice" % (i, j, lat.n_sites))
        norm.append([i, j])
    if not norm:
        raise ConfigError("at least one pair is required")
    return norm


def _lattice_normal_form(spec):
    if isinstance(spec, str):
        return spec
    if isinstance(spec, dict):
        return {"n_sites": int(spec["n_sites"]),
                "edges": [[int(i), int(j)] for i, j in spec["edges"]]}
    raise ConfigError("lattice must be a name or an edge-list object")


def _positive(cfg, key, kind=float):
    try:
        val = kind(cfg[key])
    except (TypeError, ValueError) as exc:
        raise ConfigError("%s must be a number" % key) from exc
    if val <= 0:
        raise ConfigError("%s must be positive" % key)
    return val


def _load_configs(paths):
    docs = []
    for path in paths:
        try:
            with open(path) as fh:
                doc = json.load(fh)
        except OSError as exc:
            raise ConfigError("cannot read config %s: %s" % (path, exc)) from None
        except json.JSONDecodeError as exc:
            raise ConfigError("config %s is not valid JSON: %s" % (path, exc)) from None
        if not isinstance(doc, dict):
            raise ConfigError("config %s must contain a JSON object" % path)
        docs.append(doc)
    return docs


def _merge_flags(cfg: dict, args) -> dict:
    cfg = dict(cfg)
    if getattr(args, "out", None):
        cfg["out"] = args.out
    if getattr(args, "engine", None):
        cfg["engine"] = args.engine
    if getattr(args, "dt", None) is not None:
        cfg["dt"] = args.dt
    if getattr(args, "t_end", None) is not None:
        cfg["t_end"] = args.t_end
    if getattr(args, "pairs", None):
        cfg["pairs"] = parse_pairs(args.pairs)
    if getattr(args, "kt", None) is not None:
        cfg["kt"] = args.kt
    if getattr(args, "seed", None) is not None:
        cfg["seed"] = args.seed
    if getattr(args, "sector", None):
        cfg["sector"] = args.sector
    return cfg


def _resolve_lattice_schedule(cfg, need_schedule=True):
    try:
        lat = load_lattice(cfg["lattice"])
    except (ValueError, OSError) as exc:
        raise ConfigError(str(exc)) from None
    schedule = None
    if need_schedule:
        if "schedule" not in cfg:
            raise ConfigError("config needs a 'schedule' object")
        try:
            schedule = parse_schedule(cfg["schedule"])
        except ValueError as exc:
            raise ConfigError(str(exc)) from None
    return lat, schedule


def _sample_times(t_end: float, dt: float, sample_every: int) -> np.ndarray:
    # mirror of the evolution samplers: segment count ceil(t_end/dt), one
    # sample every sample_every segments plus the initial point
    n_segments = max(1, int(math.ceil(t_end / dt - 1e-9)))
    k = np.arange(1 + n_segments // sample_every)
    return np.minimum(k * (sample_every * dt), t_end)


def _check_sampling(t_end, dt, sample_every, window_fraction=0.3):
    times = _sample_times(t_end, dt, sample_every)
    if len(times) < 2:
        raise ConfigError(
            "sampling yields a single row; need t_end >= dt * sample_every "
            "(%g < %g)" % (t_end, dt * sample_every))
    t_lo = (1.0 - window_fraction) * t_end
    if int((times >= t_lo - 1e-12).sum()) < 2:
        raise ConfigError(
            "late window [%g, %g] holds fewer than 2 samples; decrease dt or "
            "sample_every" % (t_lo, t_end))


def normalize_run_config(raw: dict) -> dict:
    raw = dict(raw)
    raw.pop("command", None)
    cfg = {
        "lattice": "wheel7", "J": 1.0, "dt": 0.01, "t_end": 50.0, "sample_every": 10,
        "pairs": [[1, 4]], "engine": "projection", "kt": None, "cutoff": DEFAULT_CUTOFF,
        "sector": "auto", "convergence_check": True, "out": "out", "seed": None,
    }
    known = set(cfg) | {"schedule"}
    extra = set(raw) - known
    if extra:
        raise ConfigError("unknown config keys %s" % sorted(extra))
    cfg.update(raw)
    lat, schedule = _resolve_lattice_schedule(cfg)
    cfg["lattice"] = _lattice_normal_form(cfg["lattice"])
    cfg["schedule"] = schedule_normal_form(schedule)
    cfg["J"] = float(cfg["J"])
    cfg["dt"] = _positive(cfg, "dt")
    cfg["t_end"] = _positive(cfg, "t_end")
    cfg["sample_every"] = _positive(cfg, "sample_every", int)
    _check_sampling(cfg["t_end"], cfg["dt"], cfg["sample_every"])
    cfg["pairs"] = _validate_pairs(cfg["pairs"], lat)
    if cfg["engine"] not in ("matrix", "projection", "sector"):
        raise ConfigError("engine must be matrix, projection or sector")
    if cfg["kt"] is not None:
        cfg["kt"] = float(cfg["kt"])
        if cfg["kt"] < 0:
            raise ConfigError("kt must be >= 0")
        if cfg["engine"] != "projection":
            raise ConfigError("thermal runs use the projection engine")
    cfg["cutoff"] = float(cfg["cutoff"])
    if not 0 < cfg["cutoff"] <= 1:
        raise ConfigError("cutoff must be in (0, 1]")
    cfg["convergence_check"] = bool(cfg["convergence_check"])
    cfg["sector"] = str(cfg["sector"])
    cfg["out"] = str(cfg["out"])
    cfg["seed"] = None if cfg["seed"] is None else int(cfg["seed"])
    return cfg


def _prepare_out(cfg, command):
    out = cfg["out"]
    os.makedirs(out, exist_ok=True)
    echo = dict(cfg)
    echo["command"] = command
    write_json(os.path.join(out, "config_echo.json"), echo)
    return out


def _simulate_series(cfg, lat, schedule, dt, sample_every):
    """One evolution at a given resolution, reduced to a concurrence series."""
    J = cfg["J"]
    pairs = [tuple(p) for p in cfg["pairs"]]
    pcf = discretize(schedule, 0.0, cfg["t_end"], dt)
    if cfg["kt"] is not None:
        beta = math.inf if cfg["kt"] == 0 else 1.0 / cfg["kt"]
        ens = thermal_initial_state(lat, J, field_at(schedule, 0.0), beta, cfg["cutoff"])
        traj = evolve_thermal(ens, lat, J, pcf, pairs, sample_every)
        return concurrence_trajectory(traj, pairs)
    psi0 = ground_state(lat, J, field_at(schedule, 0.0))
    engine = cfg["engine"]
    if engine == "matrix":
        traj = evolve_matrix_stepper(lat, J, pcf, psi0, sample_every)
    elif engine == "projection":
        traj = evolve_projection_stepper(lat, J, pcf, psi0, sample_every)
    else:
        try:
            bases = build_sector_bases(lat)
            if cfg["sector"] == "auto":
                basis = find_sector(psi0, bases)
            else:
                match = [b for b in bases if b.sector.label == cfg["sector"]]
                if not match:
                    raise ConfigError("unknown sector %r" % cfg["sector"])
                basis = match[0]
            traj = evolve_projection_in_sector(basis, J, pcf, psi0, sample_every)
        except SectorLeakageError as exc:
            raise ConfigError(str(exc)) from None
    return concurrence_trajectory(traj, pairs)


def _converged_series(cfg, lat, schedule):
    """Run with dt halving until samples are stable to CONVERGENCE_TOL."""
    dt = cfg["dt"]
    sample_every = cfg["sample_every"]
    if not cfg["convergence_check"]:
        series = _simulate_series(cfg, lat, schedule, dt, sample_every)
        return series, {"status": "skipped", "requested_dt": cfg["dt"], "final_dt": dt,
                        "final_sample_every": sample_every, "halvings": 0,
                        "max_deviation": None, "tolerance": CONVERGENCE_TOL}
    series = _simulate_series(cfg, lat, schedule, dt, sample_every)
    for halvings in range(MAX_HALVINGS + 1):
        finer = _simulate_series(cfg, lat, schedule, dt / 2, sample_every * 2)
        dev = max(
            float(np.abs(series.concurrence[p] - finer.concurrence[p]).max())
            for p in series.pairs
        )
        if dev <= CONVERGENCE_TOL:
            return series, {"status": "converged", "requested_dt": cfg["dt"], "final_dt": dt,
                            "final_sample_every": sample_every, "halvings": halvings,
                            "max_deviation": dev, "tolerance": CONVERGENCE_TOL}
        dt, sample_every, series = dt / 2, sample_every * 2, finer
    raise NonConvergenceError(
        "concurrence did not converge under dt halving (last deviation %.3e)" % dev)


def _series_csv(path, series):
    header = ["t", "h"]
    for pair in series.pairs:
        header += ["C(%d,%d)" % pair, "E(%d,%d)" % pair]
    rows = []
    for k in range(len(series.times)):
        row = [float(series.times[k]), float(series.fields[k])]
        for pair in series.pairs:
            row += [float(series.concurrence[pair][k]), float(series.formation[pair][k])]
        rows.append(row)
    write_csv(path, header, rows)


def cmd_run(cfg) -> int:
    cfg = normalize_run_config(cfg)
    out = _prepare_out(cfg, "run")
    lat, schedule = _resolve_lattice_schedule(cfg)
    tic = time.perf_counter()
    series, convergence = _converged_series(cfg, lat, schedule)
    wall = time.perf_counter() - tic
    _series_csv(os.path.join(out, "trajectory.csv"), series)
    t_end = cfg["t_end"]
    averages = {}
    for pair in series.pairs:
        averages[_pair_key(pair)] = {
            "full_window": time_average(series.times, series.concurrence[pair]),
            "late_window": time_average(series.times, series.concurrence[pair],
                                        0.7 * t_end, t_end),
        }
    summary = {
        "command": "run",
        "version": __version__,
        "engine": cfg["engine"],
        "kt": cfg["kt"],
        "n_samples": len(series.times),
        "wall_time_s": wall,
        "dt_convergence": convergence,
        "averages": averages,
    }
    if cfg["kt"] is None and schedule.kind in ("step", "exp", "tanh"):
        ergodicity = {}
        for pair in series.pairs:
            rep = ergodicity_gap(series.times, series.concurrence[pair], lat, cfg["J"],
                                 schedule.b, pair)
            ergodicity[_pair_key(pair)] = {
                "late_average": rep.late_average,
                "equilibrium": rep.equilibrium,
                "absolute_gap": rep.absolute_gap,
                "relative_gap": rep.relative_gap,
            }
        summary["ergodicity"] = ergodicity
    write_json(os.path.join(out, "summary.json"), summary)
    return 0


def normalize_sweep_config(raw: dict) -> dict:
    raw = dict(raw)
    raw.pop("command", None)
    cfg = {"lattice": "wheel7", "J": 1.0, "pairs": [[1, 4], [1, 2]],
           "h_grid": {"start": 0.0, "stop": 6.0, "step": 0.01},
           "out": "out", "seed": None}
    extra = set(raw) - set(cfg)
    if extra:
        raise ConfigError("unknown config keys %s" % sorted(extra))
    cfg.update(raw)
    lat, _ = _resolve_lattice_schedule(cfg, need_schedule=False)
    cfg["lattice"] = _lattice_normal_form(cfg["lattice"])
    cfg["J"] = float(cfg["J"])
    if cfg["J"] == 0:
        raise ConfigError("J must be nonzero for a lambda sweep")
    cfg["pairs"] = _validate_pairs(cfg["pairs"], lat)
    _grid_values(cfg["h_grid"], "h")
    cfg["h_grid"] = _grid_normal_form(cfg["h_grid"])
    cfg["out"] = str(cfg["out"])
    cfg["seed"] = None if cfg["seed"] is None else int(cfg["seed"])
    return cfg


def cmd_sweep(cfg) -> int:
    cfg = normalize_sweep_config(cfg)
    out = _prepare_out(cfg, "sweep")
    lat, _ = _resolve_lattice_schedule(cfg, need_schedule=False)
    grid = _grid_values(cfg["h_grid"], "h")
    tic = time.perf_counter()
    result = ground_state_sweep(lat, cfg["J"], grid, [tuple(p) for p in cfg["pairs"]])
    wall = time.perf_counter() - tic
    header = ["lambda"]
    for pair in result.pairs:
        header += ["C(%d,%d)" % pair, "E(%d,%d)" % pair]
    rows = []
    for k in range(len(result.lambdas)):
        row = [float(result.lambdas[k])]
        for pair in result.pairs:
            row += [float(result.concurrence[pair][k]), float(result.formation[pair][k])]
        rows.append(row)
    write_csv(os.path.join(out, "sweep.csv"), header, rows)
    summary = {
        "command": "sweep",
        "version": __version__,
        "wall_time_s": wall,
        "n_points": len(result.lambdas),
        "argmax_lambda": {_pair_key(p): result.argmax[p] for p in result.pairs},
        "steepest_lambda": {_pair_key(p): result.steepest[p] for p in result.pairs},
        "max_concurrence": {_pair_key(p): float(result.concurrence[p].max())
                            for p in result.pairs},
    }
    write_json(os.path.join(out, "summary.json"), summary)
    return 0


def normalize_thermal_config(raw: dict) -> dict:
    raw = dict(raw)
    raw.pop("command", None)
    cfg = {"lattice": "wheel7", "J": 1.0, "pairs": [[1, 4]],
           "kt_grid": {"start": 0.0, "stop": 2.5, "step": 0.25},
           "threshold": 1e-3, "dt": 0.01, "t_end": 40.0, "sample_every": 10,
           "window_fraction": 0.3, "cutoff": DEFAULT_CUTOFF, "out": "out", "seed": None}
    known = set(cfg) | {"schedule"}
    extra = set(raw) - known
    if extra:
        raise ConfigError("unknown config keys %s" % sorted(extra))
    cfg.update(raw)
    lat, schedule = _resolve_lattice_schedule(cfg)
    cfg["lattice"] = _lattice_normal_form(cfg["lattice"])
    cfg["schedule"] = schedule_normal_form(schedule)
    cfg["J"] = float(cfg["J"])
    cfg["pairs"] = _validate_pairs(cfg["pairs"], lat)
    _grid_values(cfg["kt_grid"], "kT")
    cfg["kt_grid"] = _grid_normal_form(cfg["kt_grid"])
    cfg["threshold"] = _positive(cfg, "threshold")
    cfg["dt"] = _positive(cfg, "dt")
    cfg["t_end"] = _positive(cfg, "t_end")
    cfg["sample_every"] = _positive(cfg, "sample_every", int)
    cfg["window_fraction"] = _positive(cfg, "window_fraction")
    if cfg["window_fraction"] > 1:
        raise ConfigError("window_fraction must be in (0, 1]")
    if cfg["schedule"]["kind"] != "const":
        _check_sampling(cfg["t_end"], cfg["dt"], cfg["sample_every"],
                        cfg["window_fraction"])
    cfg["cutoff"] = float(cfg["cutoff"])
    cfg["out"] = str(cfg["out"])
    cfg["seed"] = None if cfg["seed"] is None else int(cfg["seed"])
    return cfg


def cmd_thermal_scan(cfg) -> int:
    cfg = normalize_thermal_config(cfg)
    out = _prepare_out(cfg, "thermal-scan")
    lat, schedule = _resolve_lattice_schedule(cfg)
    grid = _grid_values(cfg["kt_grid"], "kT")
    pairs = [tuple(p) for p in cfg["pairs"]]
    tic = time.perf_counter()
    scan = critical_temperature_scan(
        lat, cfg["J"], schedule, pairs, grid, threshold=cfg["threshold"], dt=cfg["dt"],
        t_end=cfg["t_end"], sample_every=cfg["sample_every"],
        window_fraction=cfg["window_fraction"], cutoff=cfg["cutoff"])
    wall = time.perf_counter() - tic
    header = ["kT"] + ["C(%d,%d)" % pair for pair in scan.pairs]
    rows = []
    for k in range(len(scan.kt_grid)):
        rows.append([float(scan.kt_grid[k])] +
                    [float(scan.values[pair][k]) for pair in scan.pairs])
    write_csv(os.path.join(out, "thermal_scan.csv"), header, rows)
    summary = {
        "command": "thermal-scan",
        "version": __version__,
        "wall_time_s": wall,
        "mode": scan.mode,
        "threshold": scan.threshold,
        "critical_temperature": {_pair_key(p): scan.critical[p] for p in scan.pairs},
    }
    write_json(os.path.join(out, "summary.json"), summary)
    return 0


def normalize_golden_config(raw: dict) -> dict:
    raw = dict(raw)
    raw.pop("command", None)
    cfg = {"lattice": "wheel7", "J": 1.0, "out": "out", "seed": None}
    known = set(cfg) | {"schedule"}
    extra = set(raw) - known
    if extra:
        raise ConfigError("unknown config keys %s" % sorted(extra))
    cfg.update(raw)
    _, schedule = _resolve_lattice_schedule(cfg)
    cfg["lattice"] = _lattice_normal_form(cfg["lattice"])
    cfg["schedule"] = schedule_normal_form(schedule)
    cfg["J"] = float(cfg["J"])
    cfg["out"] = str(cfg["out"])
    cfg["seed"] = None if cfg["seed"] is None else int(cfg["seed"])
    return cfg


def cmd_golden_rule(cfg) -> int:
    cfg = normalize_golden_config(cfg)
    out = _prepare_out(cfg, "golden-rule")
    lat, schedule = _resolve_lattice_schedule(cfg)
    try:
        rep = golden_rule_report(lat, cfg["J"], schedule)
    except UnsupportedScheduleError as exc:
        raise ConfigError(str(exc)) from None
    header = ["n", "excitation_energy", "abs_matrix_element", "spectral_density",
              "probability"]
    rows = []
    for k in range(len(rep.excitations)):
        rows.append([k + 1, float(rep.excitations[k]), float(abs(rep.matrix_elements[k])),
                     float(rep.spectral_densities[k]), float(rep.probabilities[k])])
    write_csv(os.path.join(out, "golden_rule.csv"), header, rows)
    summary = {
        "command": "golden-rule",
        "version": __version__,
        "field": rep.field,
        "omega": rep.omega,
        "first_gap": rep.first_gap,
        "connected_gap": rep.connected_gap,
        "ground_sector": rep.ground_sector,
        "ratio": rep.ratio,
        "verdict": rep.verdict,
        "max_probability": float(rep.probabilities.max()) if len(rep.probabilities) else 0.0,
    }
    write_json(os.path.join(out, "summary.json"), summary)
    return 0


def normalize_bench_config(raw: dict) -> dict:
    raw = dict(raw)
    raw.pop("command", None)
    cfg = {"lattice": "wheel7", "J": 1.0, "dt": 0.01, "t_end": 50.0, "repetitions": 5,
           "sample_every": 100, "out": "out", "seed": None,
           "schedules": [{"kind": "step", "a": 1.0, "b": 2.0}]}
    extra = set(raw) - set(cfg)
    if extra:
        raise ConfigError("unknown config keys %s" % sorted(extra))
    cfg.update(raw)
    lat, _ = _resolve_lattice_schedule(cfg, need_schedule=False)
    cfg["lattice"] = _lattice_normal_form(cfg["lattice"])
    cfg["J"] = float(cfg["J"])
    cfg["dt"] = _positive(cfg, "dt")
    cfg["t_end"] = _positive(cfg, "t_end")
    cfg["repetitions"] = _positive(cfg, "repetitions", int)
    cfg["sample_every"] = _positive(cfg, "sample_every", int)
    if not isinstance(cfg["schedules"], list) or not cfg["schedules"]:
        raise ConfigError("schedules must be a non-empty list")
    try:
        parsed = [parse_schedule(doc) for doc in cfg["schedules"]]
    except ValueError as exc:
        raise ConfigError(str(exc)) from None
    cfg["schedules"] = [schedule_normal_form(s) for s in parsed]
    cfg["out"] = str(cfg["out"])
    cfg["seed"] = None if cfg["seed"] is None else int(cfg["seed"])
    return cfg


def cmd_bench(cfg) -> int:
    cfg = normalize_bench_config(cfg)
    out = _prepare_out(cfg, "bench")
    lat, _ = _resolve_lattice_schedule(cfg, need_schedule=False)
    schedules = [parse_schedule(doc) for doc in cfg["schedules"]]
    result = benchmark_engines(lat, cfg["J"], schedules, dt=cfg["dt"], t_end=cfg["t_end"],
                               repetitions=cfg["repetitions"],
                               sample_every=cfg["sample_every"])
    header = ["kind", "a", "b", "omega", "n_segments", "matrix_seconds",
              "projection_seconds", "speedup", "residual"]
    rows = []
    for r in result.rows:
        rows.append([r.schedule.kind, r.schedule.a, r.schedule.b, r.schedule.omega,
                     r.n_segments, r.matrix_seconds, r.projection_seconds, r.speedup,
                     r.residual])
    write_csv(os.path.join(out, "bench.csv"), header, rows)
    summary = {
        "command": "bench",
        "version": __version__,
        "speedup": {r.schedule.kind: r.speedup for r in result.rows},
        "max_residual": max(r.residual for r in result.rows),
    }
    write_json(os.path.join(out, "summary.json"), summary)
    return 0


_PLOT_HEADER = """\
# gnuplot script; run:  gnuplot plot.gp
set datafile separator ","
set key autotitle columnhead
set grid
"""


def _csv_column_count(path) -> int:
    with open(path, newline="") as fh:
        return len(next(csv.reader(fh)))


def cmd_plots(cfg) -> int:
    out = str(cfg.get("out", "out"))
    if not os.path.isdir(out):
        raise ConfigError("output directory %r does not exist" % out)
    sections = []
    if os.path.exists(os.path.join(out, "trajectory.csv")):
        ncol = _csv_column_count(os.path.join(out, "trajectory.csv"))
        curves = ", ".join('"trajectory.csv" using 1:%d with lines' % c
                           for c in range(3, ncol + 1, 2))
        sections.append(
            'set output "trajectory.png"\nset xlabel "t (1/J)"\nset ylabel "C"\n'
            "plot %s, \"trajectory.csv\" using 1:2 with lines dashtype 2 title \"h(t)\"\n"
            % curves)
    if os.path.exists(os.path.join(out, "sweep.csv")):
        ncol = _csv_column_count(os.path.join(out, "sweep.csv"))
        curves = ", ".join('"sweep.csv" using 1:%d with lines' % c
                           for c in range(2, ncol + 1, 2))
        sections.append(
            'set output "sweep.png"\nset xlabel "lambda = h/J"\nset ylabel "C"\nplot %s\n'
            % curves)
    if os.path.exists(os.path.join(out, "thermal_scan.csv")):
        ncol = _csv_column_count(os.path.join(out, "thermal_scan.csv"))
        curves = ", ".join('"thermal_scan.csv" using 1:%d with linespoints' % c
                           for c in range(2, ncol + 1))
        sections.append(
            'set output "thermal_scan.png"\nset xlabel "kT (J)"\nset ylabel "C"\nplot %s\n'
            % curves)
    if not sections:
        raise ConfigError("no CSV outputs found in %r to plot" % out)
    with open(os.path.join(out, "plot.gp"), "w") as fh:
        fh.write(_PLOT_HEADER + "set terminal png size 900,600\n" + "\n".join(sections))
    return 0


_COMMANDS = {
    "run": cmd_run,
    "sweep": cmd_sweep,
    "thermal-scan": cmd_thermal_scan,
    "golden-rule": cmd_golden_rule,
    "bench": cmd_bench,
    "plots": cmd_plots,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="isingdyn",
        description="Entanglement dynamics of the driven wheel-lattice Ising cluster")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in _COMMANDS:
        p = sub.add_parser(name)
        p.add_argument("--config", nargs="+", default=[],
                       help="JSON config file(s); several fan out as a batch")
        p.add_argument("--out", help="output directory")
        p.add_argument("--seed", type=int)
        if name == "run":
            p.add_argument("--engine", choices=("matrix", "projection", "sector"))
            p.add_argument("--sector", help="sector label or 'auto'")
            p.add_argument("--kt", type=float)
        if name in ("run", "thermal-scan", "bench"):
            p.add_argument("--dt", type=float)
            p.add_argument("--t-end", dest="t_end", type=float)
        if name in ("run", "sweep", "thermal-scan"):
            p.add_argument("--pairs", help="pair list like '1,4;1,2'")
    return parser


def _guarded(command, cfg) -> int:
    try:
        return command(cfg)
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    except NonConvergenceError as exc:
        print("non-convergence: %s" % exc, file=sys.stderr)
        return 3


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    command = _COMMANDS[args.command]
    try:
        if args.config:
            docs = _load_configs(args.config)
            configs = []
            for path, doc in zip(args.config, docs):
                merged = _merge_flags(doc, args)
                if "out" not in merged:
                    merged["out"] = os.path.splitext(path)[0] + "_out"
                configs.append(merged)
        else:
            configs = [_merge_flags({}, args)]
    except ConfigError as exc:
        print("config error: %s" % exc, file=sys.stderr)
        return 2
    if len(configs) == 1:
        return _guarded(command, configs[0])
    with ThreadPoolExecutor(max_workers=min(4, len(configs))) as pool:
        codes = list(pool.map(lambda cfg: _guarded(command, cfg), configs))
    return max(codes)


if __name__ == "__main__":
    sys.exit(main())
