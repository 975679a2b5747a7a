"""Figure-style dataset generation: time traces, 2D maps, synthesis and
calibration runs, with deterministic CSV output and optional parallelism.

CSV files are UTF-8 with '.' decimals, values formatted %.12e, a header
row, and a leading '#'-prefixed metadata block (schema, parameters,
characteristic times).  Grid rows are computed by one row-function used
identically by the serial path and by worker processes; workers return
(index, rows) pairs that are written in index order, so output bytes do
not depend on the worker count.

Config files are single JSON documents.  Frequencies are interpreted per
the "units" field: "muB" (dimensionless, already angular, the default for
reproduction runs), "MHz" (ordinary frequency, converted by 2 pi; times
are then in microseconds) or "rad_per_us" (angular, no conversion).
"""

from __future__ import annotations

import io
import json
import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass

import numpy as np

from . import erc, synth
from .calib import rabi_extract, ratio_scan, simulate_odmr
from .errors import ConfigError, NvErcError
from .ham import hamiltonian_rwa
from .prop import IntegratorConfig, frame_transform, propagate
from .pulses import PulseSegment, PulseSequence, sequence_to_json
from .spin import (KET_0, KET_M1, KET_P1, FrameTag, StateVector3,
                   SystemParams)
from .strain import compensation_ratio, ey_characteristics

__all__ = [
    "load_config",
    "system_from_config",
    "cmd_trace",
    "cmd_robustness",
    "cmd_ey_map",
    "cmd_ratio_map",
    "cmd_synth",
    "cmd_calibrate",
]

CSV_SCHEMA = "nverc-csv/1"
_FLOAT_FMT = "%.12e"

_UNIT_FACTORS = {"muB": 1.0, "rad_per_us": 1.0, "MHz": 2.0 * math.pi}
_FREQUENCY_KEYS = ("D", "muB", "omega_x", "omega_y", "Ex", "Ey", "Ez")

OBSERVABLES = ("pop_plus1", "pop_0", "pop_minus1", "dq_fidelity")
_OBS_COLUMN = {"pop_plus1": "p_plus1", "pop_0": "p_0",
               "pop_minus1": "p_minus1", "dq_fidelity": "dq_fidelity"}


@dataclass(frozen=True)
class SweepSpec:
    """Validated description of one grid sweep: up to two axes of at least
    two points each, an observable, a method tag and the output path."""

    axes: tuple          # of (name, lo, hi, n)
    observable: str
    method: str
    out_path: str

    def __post_init__(self):
        if len(self.axes) > 2:
            raise ConfigError(f"at most 2 sweep axes supported, got {len(self.axes)}")
        for name, lo, hi, n in self.axes:
            if n < 2:
                raise ConfigError(f"axis {name!r} needs n >= 2, got {n}")
            if not (math.isfinite(lo) and math.isfinite(hi) and hi > lo):
                raise ConfigError(f"axis {name!r} needs a finite increasing range")
        if self.observable not in OBSERVABLES:
            raise ConfigError(
                f"observable must be one of {OBSERVABLES}, got {self.observable!r}")


def _observable_values(name: str, target_amps, states: np.ndarray) -> np.ndarray:
    """Vectorized observable over an (n, 3) array of state amplitudes."""
    if name == "pop_plus1":
        return np.abs(states[:, 0]) ** 2
    if name == "pop_0":
        return np.abs(states[:, 1]) ** 2
    if name == "pop_minus1":
        return np.abs(states[:, 2]) ** 2
    return np.abs(states @ np.conj(target_amps)) ** 2


def load_config(path: str) -> dict:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            cfg = json.load(fh)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path!r}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise ConfigError(f"config {path!r} is not valid JSON: line {exc.lineno}, {exc.msg}") from exc
    if not isinstance(cfg, dict):
        raise ConfigError(f"config {path!r} must be a JSON object")
    return cfg


def system_from_config(cfg: dict) -> SystemParams:
    units = cfg.get("units", "muB")
    if units not in _UNIT_FACTORS:
        raise ConfigError(f"units must be one of {sorted(_UNIT_FACTORS)}, got {units!r}")
    factor = _UNIT_FACTORS[units]
    raw = cfg.get("system")
    if not isinstance(raw, dict):
        raise ConfigError("config field 'system' must be an object")
    known = set(_FREQUENCY_KEYS)
    unknown = set(raw) - known
    if unknown:
        raise ConfigError(f"unknown system fields: {sorted(unknown)}")
    try:
        vals = {k: factor * float(raw[k]) for k in raw}
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"system fields must be numbers: {exc}") from exc
    if "D" not in vals or "muB" not in vals or "omega_x" not in vals:
        raise ConfigError("system requires at least D, muB and omega_x")
    try:
        return SystemParams(**vals)
    except ValueError as exc:
        raise ConfigError(str(exc)) from exc


def _start_state(cfg: dict) -> StateVector3:
    spec = cfg.get("start_state", "plus1")
    presets = {"plus1": KET_P1, "zero": KET_0, "minus1": KET_M1}
    if isinstance(spec, str):
        if spec not in presets:
            raise ConfigError(f"start_state must be one of {sorted(presets)} or an amplitude list")
        return StateVector3(presets[spec])
    try:
        amps = [complex(a[0], a[1]) for a in spec]
        return StateVector3.from_unnormalized(np.array(amps))
    except (TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"bad start_state: {exc}") from exc


def _observable_target(cfg: dict, observable: str):
    if observable != "dq_fidelity":
        return None
    return _start_state({"start_state": cfg.get("target_state", "minus1")}).amps


def _write_csv(path: str, meta: dict, header: list[str], rows) -> None:
    buf = io.StringIO()
    buf.write(f"# schema: {CSV_SCHEMA}\n")
    for key, value in meta.items():
        buf.write(f"# {key}: {json.dumps(value, sort_keys=True)}\n")
    buf.write(",".join(header) + "\n")
    for row in rows:
        buf.write(",".join(_FLOAT_FMT % x for x in row) + "\n")
    data = buf.getvalue().encode("utf-8")
    with open(path, "wb") as fh:
        fh.write(data)


def _params_meta(p: SystemParams) -> dict:
    return {"D": p.D, "muB": p.muB, "omega_x": p.omega_x, "omega_y": p.omega_y,
            "Ex": p.Ex, "Ey": p.Ey, "Ez": p.Ez}


_PLOT_TEMPLATE = '''\
#!/usr/bin/env python3
"""Generic plot of {csv_name} (written by nverc; matplotlib required here,
not by the package itself)."""
import numpy as np
import matplotlib.pyplot as plt

rows = []
with open({csv_name!r}) as fh:
    for line in fh:
        if line.startswith("#"):
            continue
        if not rows:
            header = line.strip().split(",")
            rows.append(None)
            continue
        rows.append([float(x) for x in line.split(",")])
data = np.array(rows[1:])

if header[0] == "t":                      # time trace
    for k, name in enumerate(header[1:], start=1):
        plt.plot(data[:, 0], data[:, k], label=name)
    plt.xlabel("t"); plt.legend()
else:                                     # 2D map in long format
    x = np.unique(data[:, 0]); y = np.unique(data[:, 1])
    z = data[:, 2].reshape(len(x), len(y))
    plt.pcolormesh(y, x, z, shading="nearest")
    plt.xlabel(header[1]); plt.ylabel(header[0])
    plt.colorbar(label=header[2])
plt.tight_layout()
plt.savefig({png_name!r}, dpi=160)
print("wrote", {png_name!r})
'''


def write_plot_script(csv_path: str) -> str:
    """Drop a standalone plotting script next to a CSV (convenience only)."""
    script_path = csv_path + ".plot.py"
    with open(script_path, "w", encoding="utf-8") as fh:
        fh.write(_PLOT_TEMPLATE.format(csv_name=csv_path, png_name=csv_path + ".png"))
    return script_path


def _run_rows(worker, args_list, jobs: int):
    """Evaluate ``worker(args)`` for every entry, preserving order.

    The same worker callable runs in-process (jobs == 1) or on a process
    pool; results are collected in submission order either way.
    """
    if jobs <= 1 or len(args_list) <= 1:
        return [worker(a) for a in args_list]
    with ProcessPoolExecutor(max_workers=jobs) as pool:
        return list(pool.map(worker, args_list, chunksize=max(1, len(args_list) // (4 * jobs))))


# ---------------------------------------------------------------- trace ---

def _sequence_from_config(p: SystemParams, cfg: dict) -> PulseSequence:
    spec = cfg.get("sequence", "not_gate")
    if spec == "not_gate":
        return erc.not_gate_sequence(p)
    if isinstance(spec, list):
        try:
            segs = [
                PulseSegment(
                    duration=float(s["duration"]),
                    alpha=float(s["alpha"]),
                    beta=float(s["beta"]) if "beta" in s else None,
                    omega_x=float(s.get("omega_x", p.omega_x)),
                    omega_y=float(s.get("omega_y", p.omega_y)),
                )
                for s in spec
            ]
        except (KeyError, TypeError, ValueError) as exc:
            raise ConfigError(f"bad sequence spec: {exc}") from exc
        return PulseSequence(segs)
    raise ConfigError("sequence must be 'not_gate' or a list of segments")


def _trace_states(p, seq, s0, times, method):
    """States at the requested times while running the program."""
    method = erc._canonical_method(method)
    out = np.empty((len(times), 3), dtype=complex)
    bounds = np.concatenate([[0.0], np.cumsum([seg.duration for seg in seq])])
    for i, t in enumerate(times):
        # truncate the program at time t
        segs = []
        for k, seg in enumerate(seq):
            if t >= bounds[k + 1] - 1e-15:
                segs.append(seg)
            elif t > bounds[k]:
                segs.append(PulseSegment(t - bounds[k], seg.alpha, seg.omega_x,
                                         seg.omega_y, seg.beta))
                break
            else:
                break
        sub = PulseSequence(segs, frame=seq.frame)
        out[i] = erc.apply_sequence(p, sub, s0, method=method).amps
    return out


def cmd_trace(cfg: dict, out_path: str, jobs: int = 1, method: str | None = None) -> dict:
    """Population time series of a pulse program (three columns of
    populations against time)."""
    p = system_from_config(cfg)
    method = method or cfg.get("method", "analytic")
    seq = _sequence_from_config(p, cfg)
    n = int(cfg.get("n_points", 401))
    if n < 0:
        raise ConfigError("n_points must be >= 0")
    try:
        q = erc.characteristic_quantities(p)
        characteristic = {"T_total": q.T_total, "T_prime": q.T_prime,
                          "T_second": q.T_second, "phi": q.phi}
        t_default = seq.total_duration or q.T_total
    except NvErcError:
        characteristic = None
        t_default = seq.total_duration
    t_max = float(cfg.get("t_max", t_default))
    s0 = _start_state(cfg)
    times = np.linspace(0.0, t_max, n) if n else np.array([])
    amps = _trace_states(p, seq, s0, times, method) if n else np.empty((0, 3))
    rows = [
        (t, abs(a[0]) ** 2, abs(a[1]) ** 2, abs(a[2]) ** 2)
        for t, a in zip(times, amps)
    ]
    meta = {
        "command": "trace",
        "params": _params_meta(p),
        "method": erc._canonical_method(method),
        "characteristic": characteristic,
    }
    _write_csv(out_path, meta, ["t", "p_plus1", "p_0", "p_minus1"], rows)
    return {"rows": len(rows), "out": out_path}


# ----------------------------------------------------------- robustness ---

def _robustness_row(args):
    (p_dict, t1, t2_list, observable, target) = args
    p = SystemParams(**p_dict)
    psi1 = erc.erc_unitary(p, t1, 0.0).m @ KET_P1
    states = np.empty((len(t2_list), 3), dtype=complex)
    for j, t2 in enumerate(t2_list):
        states[j] = erc.erc_unitary(p, t2, math.pi).m @ psi1
    return _observable_values(observable, target, states).tolist()


def cmd_robustness(cfg: dict, out_path: str, jobs: int = 1, method: str | None = None) -> dict:
    """Timing-error landscape: the chosen observable (default: final |-1>
    population) of the two-pulse combination U(t2, pi) U(t1, 0) applied to
    |+1>, over a (t1, t2) grid."""
    p = system_from_config(cfg)
    q = erc.characteristic_quantities(p)
    n = int(cfg.get("n", 129))
    t_max = float(cfg.get("t_max", q.T_total))
    observable = cfg.get("observable", "pop_minus1")
    spec = SweepSpec(axes=(("t1", 0.0, t_max, n), ("t2", 0.0, t_max, n)),
                     observable=observable, method="analytic", out_path=out_path)
    target = _observable_target(cfg, observable)
    ts = np.linspace(0.0, t_max, n)
    p_dict = _params_meta(p)
    args = [(p_dict, t1, ts, observable, target) for t1 in ts]
    rows_nested = _run_rows(_robustness_row, args, jobs)
    rows = [
        (ts[i], ts[j], rows_nested[i][j])
        for i in range(n)
        for j in range(n)
    ]
    meta = {
        "command": "robustness",
        "params": p_dict,
        "observable": observable,
        "characteristic": {"T_total": q.T_total, "T_prime": q.T_prime,
                           "T_second": q.T_second, "T_half": q.T_total / 2.0},
        "grid": {"n": n, "t_max": t_max},
    }
    _write_csv(out_path, meta, ["t1", "t2", _OBS_COLUMN[observable]], rows)
    return {"rows": len(rows), "out": out_path, "argmax": _argmax_cell(rows_nested, ts)}


def _argmax_cell(rows_nested, ts):
    arr = np.asarray(rows_nested)
    i, j = np.unravel_index(int(np.argmax(arr)), arr.shape)
    return {"t1": float(ts[i]), "t2": float(ts[j]), "value": float(arr[i, j])}


# ---------------------------------------------------------------- ey map ---

def _ground_state_states(p, times):
    """Amplitude trajectories of |0> under the constant two-tone drive."""
    seg = PulseSegment(duration=0.0, alpha=0.0, omega_x=p.omega_x, omega_y=p.omega_y)
    h = hamiltonian_rwa(p, seg)
    w, v = np.linalg.eigh(h)
    modal = v.conj().T @ KET_0
    return (np.exp(-1j * np.outer(times, w)) * modal) @ v.T


def _ey_row(args):
    (p_dict, ey, times, observable, target) = args
    p = SystemParams(**p_dict).replace(Ey=ey, omega_y=0.0)
    states = _ground_state_states(p, times)
    vals = _observable_values(observable, target, states)
    try:
        qe = ey_characteristics(p)
        overlay = (qe.T_total, qe.T_prime, qe.T_second)
    except NvErcError:
        overlay = (math.nan, math.nan, math.nan)
    return vals.tolist(), overlay


def cmd_ey_map(cfg: dict, out_path: str, jobs: int = 1, method: str | None = None) -> dict:
    """Ground-state population against (Ey, t), with the closed-form
    characteristic-time overlays as extra columns (NaN past the validity
    boundary Ey = sqrt(omega^2/4 - muB^2))."""
    p = system_from_config(cfg)
    n_ey = int(cfg.get("n_ey", 41))
    n_t = int(cfg.get("n_t", 201))
    boundary = math.sqrt(max(p.omega_x**2 / 4.0 - p.muB**2, 0.0))
    ey_max = float(cfg.get("ey_max", 1.2 * boundary))
    q0 = erc.characteristic_quantities(p)
    t_max = float(cfg.get("t_max", 1.2 * q0.T_total))
    observable = cfg.get("observable", "pop_0")
    SweepSpec(axes=(("Ey", 0.0, ey_max, n_ey), ("t", 0.0, t_max, n_t)),
              observable=observable, method="rwa_numeric", out_path=out_path)
    target = _observable_target(cfg, observable)
    eys = np.linspace(0.0, ey_max, n_ey)
    times = np.linspace(0.0, t_max, n_t)
    p_dict = _params_meta(p)
    results = _run_rows(_ey_row, [(p_dict, ey, times, observable, target) for ey in eys], jobs)
    rows = []
    for i, ey in enumerate(eys):
        vals, overlay = results[i]
        for j, t in enumerate(times):
            rows.append((ey, t, vals[j], *overlay))
    meta = {
        "command": "ey_map",
        "params": p_dict,
        "observable": observable,
        "validity_boundary_Ey": boundary,
        "grid": {"n_ey": n_ey, "n_t": n_t, "ey_max": ey_max, "t_max": t_max},
    }
    _write_csv(out_path, meta,
               ["Ey", "t", _OBS_COLUMN[observable],
                "T_total_ey", "T_prime_ey", "T_second_ey"], rows)
    return {"rows": len(rows), "out": out_path, "validity_boundary": boundary}


# ------------------------------------------------------------- ratio map ---

def _ratio_row(args):
    (p_dict, ratio, times, observable, target) = args
    p = SystemParams(**p_dict)
    pr = p.replace(omega_y=ratio * p.omega_x)
    states = _ground_state_states(pr, times)
    return _observable_values(observable, target, states).tolist()


def cmd_ratio_map(cfg: dict, out_path: str, jobs: int = 1, method: str | None = None) -> dict:
    """Ground-state population against (omega_y/omega_x, t) in the presence
    of a transverse field; metadata records the analytic compensation ratio
    and the effective depletion times."""
    p = system_from_config(cfg)
    if p.Ex == 0.0:
        raise ConfigError("ratio map requires a nonzero Ex in the system block")
    n_r = int(cfg.get("n_ratio", 81))
    n_t = int(cfg.get("n_t", 201))
    if n_r < 1:
        raise ConfigError("ratio map needs n_ratio >= 1")
    r_star = compensation_ratio(p.Ex, p.Ey)
    r_min = float(cfg.get("ratio_min", 0.0))
    r_max = float(cfg.get("ratio_max", 2.0 * abs(r_star) if r_star != 0 else 1.0))
    ratios = np.linspace(r_min, r_max, n_r) if n_r > 1 else np.array([r_min])
    p_res = p.replace(omega_y=r_star * p.omega_x)
    q_eff = erc.characteristic_quantities(p_res)
    t_max = float(cfg.get("t_max", 1.2 * q_eff.T_total))
    observable = cfg.get("observable", "pop_0")
    SweepSpec(axes=(("t", 0.0, t_max, n_t),), observable=observable,
              method="rwa_numeric", out_path=out_path)
    target = _observable_target(cfg, observable)
    times = np.linspace(0.0, t_max, n_t)
    p_dict = _params_meta(p)
    results = _run_rows(_ratio_row,
                        [(p_dict, r, times, observable, target) for r in ratios], jobs)
    rows = []
    for i, r in enumerate(ratios):
        for j, t in enumerate(times):
            rows.append((r, t, results[i][j]))
    meta = {
        "command": "ratio_map",
        "params": p_dict,
        "observable": observable,
        "analytic_ratio": r_star,
        "effective": {"T_total": q_eff.T_total, "T_prime": q_eff.T_prime,
                      "T_second": q_eff.T_second},
        "grid": {"n_ratio": n_r, "n_t": n_t, "t_max": t_max},
    }
    _write_csv(out_path, meta, ["ratio", "t", _OBS_COLUMN[observable]], rows)
    return {"rows": len(rows), "out": out_path, "analytic_ratio": r_star}


# ---------------------------------------------------------------- synth ---

_TARGET_PRESETS = {
    "I": np.eye(2, dtype=complex),
    "X": np.array([[0, 1], [1, 0]], dtype=complex),
    "Y": np.array([[0, -1j], [1j, 0]], dtype=complex),
    "Z": np.diag([1.0, -1.0]).astype(complex),
    "H": np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2.0),
}


def _target_from_config(cfg: dict, seed: int) -> np.ndarray:
    spec = cfg.get("target", "X")
    if isinstance(spec, str):
        if spec == "haar":
            return synth.haar_unitary2(np.random.default_rng(seed))
        if spec in _TARGET_PRESETS:
            return _TARGET_PRESETS[spec]
        raise ConfigError(f"unknown target preset {spec!r}")
    try:
        return np.array(
            [[complex(e[0], e[1]) for e in row] for row in spec], dtype=complex
        )
    except (TypeError, ValueError, IndexError) as exc:
        raise ConfigError(f"bad target matrix: {exc}") from exc


def cmd_synth(cfg: dict, out_path: str, jobs: int = 1, method: str | None = None,
              seed: int = 0) -> dict:
    """Synthesize a DQ gate, write the pulse-program JSON and a fidelity
    report with analytic / rotating-wave / lab cross-checks."""
    p = system_from_config(cfg)
    target = _target_from_config(cfg, seed)
    result = synth.synthesize_gate(p, target, seed=seed)
    seq_json = sequence_to_json(result.sequence, p)
    with open(out_path, "w", encoding="utf-8") as fh:
        fh.write(seq_json)

    report = {
        "n_rotations": len(result.rotations),
        "rotations": [{"axis": r.axis.value, "theta": r.theta} for r in result.rotations],
        "total_duration": result.sequence.total_duration,
        "fidelity_analytic": result.fidelity,
    }
    if len(result.sequence) > 0:
        res_rwa = propagate(p, result.sequence, StateVector3(KET_P1),
                            frame=result.sequence.frame)
        report["fidelity_rwa"] = synth.dq_gate_fidelity(
            synth.dq_block(res_rwa.unitary), target)
        spp = float(cfg.get("lab_steps_per_period", 80))
        cfg_lab = IntegratorConfig(max_step=(2 * math.pi / p.carrier) / spp)
        res_lab = propagate(p, result.sequence, StateVector3(KET_P1),
                            frame=FrameTag.LAB, cfg=cfg_lab)
        u_int = frame_transform(res_lab.unitary, 0.0, result.sequence.total_duration,
                                FrameTag.LAB, result.sequence.frame, p)
        report["fidelity_lab"] = synth.dq_gate_fidelity(synth.dq_block(u_int), target)
    else:
        report["fidelity_rwa"] = report["fidelity_lab"] = result.fidelity
    report_path = out_path + ".report.json"
    with open(report_path, "w", encoding="utf-8") as fh:
        json.dump(report, fh, indent=2, sort_keys=True)
    return {"out": out_path, "report": report_path, **report}


# ------------------------------------------------------------ calibrate ---

def cmd_calibrate(cfg: dict, out_path: str, jobs: int = 1, method: str | None = None) -> dict:
    """Run the simulated calibration pipeline and write the result JSON."""
    p = system_from_config(cfg)
    method = method or cfg.get("method", "analytic")
    odmr = simulate_odmr(p)

    # with a transverse-x field, find the compensating tone first
    best_ratio = None
    p_run = p
    if p.Ex != 0.0 and "ratio_grid" in cfg:
        grid = [float(r) for r in cfg["ratio_grid"]]
        best_ratio = ratio_scan(p, grid).best_ratio
        p_run = p.replace(omega_y=best_ratio * p.omega_x)

    scan_cfg = cfg.get("scan", {})
    mu, om = p_run.muB_eff(), p_run.omega_eff()
    t_period = 2.0 * math.pi / math.sqrt(mu * mu + om * om / 4.0)
    t_max = float(scan_cfg.get("t_max", 1.5 * t_period))
    n_points = int(scan_cfg.get("n_points", 256))
    extraction = rabi_extract(p_run, t_max, n_points, method=method)
    result = {
        "carrier": odmr.carrier,
        "levels": list(odmr.levels),
        "T_total": extraction.T_total,
        "T_prime": extraction.T_prime,
        "phi": extraction.phi,
        "best_ratio": best_ratio,
        "method": extraction.method,
        "tolerances": {"root_xtol": 1e-14, "ratio_refine": "parabolic"},
    }
    with open(out_path, "w", encoding="utf-8") as fh:
        json.dump(result, fh, indent=2, sort_keys=True)
    return result
