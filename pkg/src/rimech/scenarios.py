"""Scenario configs: loading, validation, execution and reporting.

A scenario is a JSON document::

    {"name": "demo", "kind": "el-flow",
     "parameters": {"pipeline": "phi-v-closure", "grid": {"start": 0, "stop": 2, "n": 201}, ...},
     "outputs": [{"table": "trajectory", "csv": "traj.csv", "columns": ["lam", "q"]}]}

``"registry": "<name>"`` starts from a built-in fixture whose parameters
the document may override.  Fields are referenced by registry family, e.g.
``{"family": "bump", "params": {"base": 2, "amplitude": 1, "delta": 2}}``.
"""

from __future__ import annotations

import copy
import csv
import io
import json
import os
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from . import acceptance
from . import el_integrator as eli
from . import ext_hamiltonian as eh
from . import fields as fl
from . import lagrangian as lg
from . import quantize1d as qz
from . import rel_particle as rp
from .errors import RIMechError, ScenarioError, ScenarioParseError, ScenarioSchemaError
from .extended_phase import ExtendedState, make_metric, make_minkowski, weak_field_metric

KINDS = ("el-flow", "ext-flow", "rel-particle", "quantize", "invariant-suite")
TOP_KEYS = {"name", "kind", "parameters", "outputs", "registry", "seed"}

# kind -> pipeline -> required parameter keys
PIPELINES = {
    "el-flow": {
        "phi-v-closure": ("grid", "field", "x0", "v0"),
        "geodesic": ("grid", "x0", "v0"),
    },
    "ext-flow": {
        "catalog": ("grid", "hamiltonian", "state"),
        "bracket-table": ("dim",),
    },
    "rel-particle": {
        "coordinate-time": ("grid", "background", "x0", "v0"),
        "proper-time": ("grid", "background", "x0", "v0"),
        "factor-of-two": ("grid", "background", "x0", "v0"),
    },
    "quantize": {
        "plane-wave-norm": ("field", "deltas"),
        "weak-gravity": ("u0", "omega", "grid"),
        "synthesize": ("field", "grid", "gauge"),
    },
    "invariant-suite": {
        "acceptance": ("criteria",),
    },
}
DEFAULT_PIPELINE = {
    "el-flow": "geodesic",
    "ext-flow": "catalog",
    "rel-particle": "coordinate-time",
    "quantize": "synthesize",
    "invariant-suite": "acceptance",
}

REGISTRY = {
    "bracket-table": {
        "name": "bracket-table", "kind": "ext-flow",
        "parameters": {"pipeline": "bracket-table", "dim": 4, "tol": 1e-10},
    },
    "plane-wave-norm": {
        "name": "plane-wave-norm", "kind": "quantize",
        "parameters": {"pipeline": "plane-wave-norm", "hbar": 1.0, "points_per_unit": 60,
                       "field": {"family": "bump", "params": {"base": 2.0, "amplitude": 1.0, "delta": 2.0}},
                       "deltas": [10.0, 100.0, 1000.0, 10000.0]},
    },
    "factor-of-two": {
        "name": "factor-of-two", "kind": "rel-particle",
        "parameters": {"pipeline": "factor-of-two", "background": {"B": 1.0, "q": 1.0, "m": 1.0},
                       "x0": [0.0, 0.0, 0.0], "v0": [0.3, 0.1, 0.0],
                       "grid": {"start": 0.0, "stop": 2.0, "n": 401}, "tol": 1e-9},
        "outputs": [{"table": "h", "csv": "h_flow.csv"}, {"table": "h_tilde", "csv": "h_tilde_flow.csv"}],
    },
    "appendix-weak-gravity": {
        "name": "appendix-weak-gravity", "kind": "quantize",
        "parameters": {"pipeline": "weak-gravity", "u0": 1e-4, "omega": 1.0, "c": 1.0, "m": 1.0, "hbar": 1.0,
                       "grid": {"start": 0.0, "stop": 4 * np.pi, "n": 40001}, "coefficient": 1.0, "tol": 0.05,
                       "criterion": 9},
    },
}


@dataclass
class ScenarioConfig:
    name: str
    kind: str
    parameters: dict
    outputs: list = field(default_factory=list)
    seed: Optional[int] = None
    source: str = ""

    @property
    def pipeline(self) -> str:
        return self.parameters.get("pipeline", DEFAULT_PIPELINE.get(self.kind, ""))


@dataclass
class Check:
    name: str
    passed: bool
    measured: object
    threshold: str
    criterion: object = None

    def as_dict(self):
        return {"name": self.name, "passed": bool(self.passed), "measured": _jsonable(self.measured),
                "threshold": self.threshold, "criterion": self.criterion}


@dataclass
class RunResult:
    name: str
    kind: str
    summary: dict
    checks: list
    csv_files: list = field(default_factory=list)
    wall_time: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def as_dict(self):
        return {"name": self.name, "kind": self.kind, "passed": self.passed,
                "summary": {k: _jsonable(v) for k, v in self.summary.items()},
                "checks": [c.as_dict() for c in self.checks], "csv_files": list(self.csv_files),
                "wall_time": self.wall_time}

    @classmethod
    def from_dict(cls, d):
        checks = [Check(c["name"], c["passed"], c["measured"], c["threshold"], c.get("criterion"))
                  for c in d.get("checks", [])]
        return cls(d["name"], d["kind"], d.get("summary", {}), checks, d.get("csv_files", []), d.get("wall_time", 0.0))


def _jsonable(v):
    if isinstance(v, (np.floating, np.integer, np.bool_)):
        return v.item()
    if isinstance(v, np.ndarray):
        return v.tolist()
    if isinstance(v, complex):
        return [v.real, v.imag]
    return v


def _json_default(v):
    out = _jsonable(v)
    if out is v:
        raise TypeError(f"cannot serialize {type(v).__name__}")
    return out


# --------------------------------------------------------------------------
# loading and validation


def parse_config_text(text: str, source: str = "<string>") -> dict:
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioParseError(f"{source}: {exc.msg}", exc.lineno, exc.colno) from None


def _walk_tolerances(params, path, violations):
    for key, val in params.items():
        where = f"{path}.{key}"
        if isinstance(val, dict):
            _walk_tolerances(val, where, violations)
        elif key == "tol" or key.endswith("_tol"):
            if not isinstance(val, (int, float)) or isinstance(val, bool) or not val > 0:
                violations.append(f"{where}: tolerance must be a positive number")


def validate(doc) -> list:
    """Every schema violation in ``doc`` (empty list when valid)."""
    violations = []
    if not isinstance(doc, dict):
        return ["document: top level must be an object"]
    for key in sorted(set(doc) - TOP_KEYS):
        violations.append(f"{key}: unknown key")
    if "registry" in doc and doc["registry"] not in REGISTRY:
        violations.append(f"registry: unknown registry name {doc['registry']!r}")
    for key in ("name", "kind"):
        if key not in doc:
            violations.append(f"{key}: missing")
    if "name" in doc and not isinstance(doc["name"], str):
        violations.append("name: must be a string")
    kind = doc.get("kind")
    if kind is not None and kind not in KINDS:
        violations.append(f"kind: unknown kind {kind!r}")
    params = doc.get("parameters", {})
    if not isinstance(params, dict):
        violations.append("parameters: must be an object")
        params = {}
    if kind in KINDS:
        pipeline = params.get("pipeline", DEFAULT_PIPELINE.get(kind))
        if pipeline is None:
            violations.append("parameters.pipeline: missing")
        elif pipeline not in PIPELINES[kind]:
            violations.append(f"parameters.pipeline: unknown pipeline {pipeline!r} for kind {kind}")
        else:
            for key in PIPELINES[kind][pipeline]:
                if key not in params:
                    violations.append(f"parameters.{key}: missing")
    grid = params.get("grid")
    if isinstance(grid, dict):
        for key in ("start", "stop", "n"):
            if key not in grid:
                violations.append(f"parameters.grid.{key}: missing")
        if isinstance(grid.get("n"), (int, float)) and grid["n"] < 2:
            violations.append("parameters.grid.n: needs at least 2 samples")
    elif grid is not None:
        violations.append("parameters.grid: must be an object with start, stop, n")
    _walk_tolerances(params, "parameters", violations)
    outputs = doc.get("outputs", [])
    if not isinstance(outputs, list):
        violations.append("outputs: must be a list")
    else:
        for i, out in enumerate(outputs):
            if not isinstance(out, dict) or "csv" not in out:
                violations.append(f"outputs[{i}].csv: missing")
    if "seed" in doc and not isinstance(doc["seed"], int):
        violations.append("seed: must be an integer")
    return violations


def _merge(base, over):
    out = copy.deepcopy(base)
    for key, val in over.items():
        if isinstance(val, dict) and isinstance(out.get(key), dict):
            out[key] = _merge(out[key], val)
        else:
            out[key] = copy.deepcopy(val)
    return out


def config_from_dict(doc, source: str = "<dict>") -> ScenarioConfig:
    if isinstance(doc, dict) and doc.get("registry") in REGISTRY:
        base = REGISTRY[doc["registry"]]
        doc = _merge(base, {k: v for k, v in doc.items() if k != "registry"})
    violations = validate(doc)
    if violations:
        raise ScenarioSchemaError(violations)
    return ScenarioConfig(doc["name"], doc["kind"], doc.get("parameters", {}), doc.get("outputs", []),
                          doc.get("seed"), source)


def load_scenario(path) -> ScenarioConfig:
    """Read and validate a scenario file."""
    path = Path(path)
    if not path.is_file():
        raise ScenarioError(f"{path}: no such file")
    doc = parse_config_text(path.read_text(encoding="utf-8"), str(path))
    return config_from_dict(doc, str(path))


def registry_config(name: str) -> ScenarioConfig:
    return config_from_dict({"registry": name})


# --------------------------------------------------------------------------
# pipelines: each returns (tables, summary, checks)


def _grid(spec):
    return np.linspace(float(spec["start"]), float(spec["stop"]), int(spec["n"]))


def _background(spec) -> rp.BackgroundFields:
    m = float(spec.get("m", 1.0))
    q = float(spec.get("q", 0.0))
    c = float(spec.get("c", 1.0))
    B = float(spec.get("B", 0.0))
    E = float(spec.get("E", 0.0))
    grav = spec.get("gravity")

    def A(x):
        return np.array([E * x[1] / c, -0.5 * B * x[2], 0.5 * B * x[1], 0.0])

    if grav is None:
        metric = make_minkowski(4, "minus-plus")
        U = None
    else:
        depth = float(grav.get("depth", 0.0))
        width = float(grav.get("width", 1.0))
        u0 = float(grav.get("u0", 0.0))
        omega = float(grav.get("omega", 0.0))

        def U(x):
            r2 = (x[1] ** 2 + x[2] ** 2 + x[3] ** 2) / width**2
            return depth * c**2 * np.exp(-r2) + u0 * c**2 * np.sin(omega * x[0] / c)

        metric = weak_field_metric(U, c)
    return rp.BackgroundFields(metric, A=A, q_charge=q, m=m, U=U, c=c)


def _hamiltonian(spec):
    label = spec["label"]
    p = spec.get("params", {})
    if label == "coordinate-time":
        return eh.make_phi_coordinate_H(fl.from_spec(p["field"]), p.get("c", 1.0))
    if label == "proper-time":
        return eh.make_proper_time_H(fl.from_spec(p["field"]), p.get("c", 1.0))
    if label == "proper-length":
        return eh.make_proper_length_H(fl.from_spec(p["field"]))
    if label == "momentum":
        return eh.make_momentum_H(float(p["p_ref"]))
    if label == "moving-particle":
        return eh.make_moving_particle_H(float(p["v"]), float(p["p1_0"]), float(p["E"]))
    if label == "reversed-time":
        return eh.make_energy_H(float(p["E"]))
    raise ScenarioError(f"unknown Hamiltonian label {label!r}")


def _pipe_phi_v(cfg, tol_scale):
    P = cfg.parameters
    phi = fl.from_spec(P["field"])
    L = lg.phi_v_lagrangian(phi)
    grid = _grid(P["grid"])
    traj = eli.integrate_el(L, P["x0"], P["v0"], grid, eli.conserved_lagrangian(L))
    Ls = traj.diagnostics["L"]
    drift = float(np.max(np.abs(Ls - Ls[0])))
    resid = float(np.max(np.abs(lg.el_residual(L, traj))))
    tol = float(P.get("drift_tol", 1e-8)) * tol_scale
    table = {"lam": traj.lam, "q": traj.x[:, 0], "v": traj.aux[:, 0], "L": Ls}
    summary = {"L_drift": drift, "el_residual": resid}
    return {"trajectory": table}, summary, [Check("L_drift", drift < tol, drift, f"< {tol:g}")]


def _pipe_geodesic(cfg, tol_scale):
    P = cfg.parameters
    metric = acceptance.geodesic_metric() if P.get("metric", "curved") == "curved" else make_minkowski(4, "minus-plus")
    L2 = lg.metric_power_lagrangian(metric, n=2)
    L1 = lg.metric_power_lagrangian(metric, n=1, sign=-1.0)
    traj = eli.integrate_el(L2, P["x0"], P["v0"], _grid(P["grid"]))
    r1 = np.max(np.abs(lg.el_residual(L1, traj)), axis=1)
    tol = float(P.get("tol", 1e-7)) * tol_scale
    table = {"lam": traj.lam}
    for k in range(4):
        table[f"x{k}"] = traj.x[:, k]
    table["el_residual_L1"] = r1
    return {"trajectory": table}, {"el_residual_L1": float(r1.max())}, [
        Check("el_residual_L1", r1.max() < tol, float(r1.max()), f"< {tol:g}", 4)]


def _pipe_catalog(cfg, tol_scale):
    P = cfg.parameters
    H = _hamiltonian(P["hamiltonian"])
    s0 = ExtendedState(P["state"]["x"], P["state"]["p"])
    traj = eh.evolve(H, s0, _grid(P["grid"]), monitor_only=bool(P.get("monitor_only", False)))
    res = traj.diagnostics["H"]
    rate = eh.parametrization_rate(H, s0)
    table = {"lam": traj.lam}
    for k in range(traj.dim):
        table[f"x{k}"] = traj.x[:, k]
    for k in range(traj.dim):
        table[f"p{k}"] = traj.aux[:, k]
    table["H"] = res
    span = max(1.0, abs(traj.lam[-1] - traj.lam[0]))
    tol = float(P.get("tol", 1e-7)) * tol_scale * span
    return {"trajectory": table}, {"max_constraint": float(res.max()), "dt_dlambda": rate}, [
        Check("constraint", res.max() < tol, float(res.max()), f"< {tol:g}")]


def _pipe_bracket_table(cfg, tol_scale):
    P = cfg.parameters
    n = int(P["dim"])
    rng = np.random.default_rng(cfg.seed or 0)
    s = ExtendedState(rng.normal(size=n), rng.normal(size=n))
    table = {"mu": [], "nu": [], "bracket": [], "expected": []}
    worst = 0.0
    for a in range(n):
        for b in range(n):
            val = eh.ext_bracket(eh.coordinate(a), eh.momentum(b), s)
            want = (-1.0 if a == 0 else 1.0) if a == b else 0.0
            table["mu"].append(a)
            table["nu"].append(b)
            table["bracket"].append(val)
            table["expected"].append(want)
            worst = max(worst, abs(val - want))
    tol = float(P.get("tol", 1e-10)) * tol_scale
    return {"brackets": table}, {"max_error": worst}, [Check("bracket_table", worst < tol, worst, f"< {tol:g}", 2)]


def _rel_start(cfg):
    P = cfg.parameters
    f = _background(P["background"])
    x3 = np.asarray(P["x0"], dtype=float)
    v3 = np.asarray(P["v0"], dtype=float)
    return f, x3, v3, _grid(P["grid"])


def _pipe_rel_coordinate(cfg, tol_scale):
    f, x3, v3, grid = _rel_start(cfg)
    tr = rp.integrate_coordinate_time(f, x3, v3, grid)
    h = tr.diagnostics["h"]
    gid = float(np.max(rp.coordinate_gamma_identity_error(f, tr)))
    span = max(1.0, abs(grid[-1] - grid[0]))
    drift = float(np.max(np.abs(h - h[0]))) / (f.m * f.c**2) / span
    table = {"t": tr.lam}
    for k in range(1, 4):
        table[f"x{k}"] = tr.x[:, k]
    for k in range(3):
        table[f"v{k + 1}"] = tr.diagnostics["v"][:, k]
    table["gamma"] = tr.diagnostics["gamma"]
    table["h"] = h
    checks = [Check("gamma_identity", gid < 1e-8 * tol_scale, gid, f"< {1e-8 * tol_scale:g}", 5)]
    if _static_background(cfg):
        checks.append(Check("h_drift", drift < 1e-7 * tol_scale, drift, f"< {1e-7 * tol_scale:g} mc^2/t"))
    return {"trajectory": table}, {"h_drift": drift, "gamma_identity": gid}, checks


def _static_background(cfg) -> bool:
    grav = cfg.parameters["background"].get("gravity") or {}
    return float(grav.get("u0", 0.0)) == 0.0


def _pipe_rel_proper(cfg, tol_scale):
    f, x3, v3, grid = _rel_start(cfg)
    x0 = np.concatenate([[0.0], x3])
    tr = rp.integrate_proper_time(f, x0, rp.on_shell_four_velocity(f, x0, v3), grid)
    shell = tr.diagnostics["mass_shell"]
    span = max(1.0, abs(grid[-1] - grid[0]))
    drift = float(np.max(np.abs(shell - shell[0]))) / (f.m * f.c) ** 2 / span
    gid = float(np.max(rp.gamma_identity_error(f, tr)))
    table = {"tau": tr.lam}
    for k in range(4):
        table[f"x{k}"] = tr.x[:, k]
    table["p0"] = tr.diagnostics["p0"]
    table["mass_shell"] = shell
    p0 = tr.diagnostics["p0"]
    summary = {"mass_shell_drift": drift, "gamma_identity": gid, "p0_drift": float(np.max(np.abs(p0 - p0[0])))}
    return {"trajectory": table}, summary, [
        Check("mass_shell_drift", drift < 1e-8 * tol_scale, drift, f"< {1e-8 * tol_scale:g}", 5),
        Check("gamma_identity", gid < 1e-8 * tol_scale, gid, f"< {1e-8 * tol_scale:g}", 5)]


def _pipe_factor_two(cfg, tol_scale):
    f, x3, v3, grid = _rel_start(cfg)
    x0 = np.concatenate([[0.0], x3])
    res = rp.factor_of_two(f, x0, rp.on_shell_four_velocity(f, x0, v3), grid)
    tables = {}
    for label, tr, vel in (("h", res.trajectory_h, res.velocity_h), ("h_tilde", res.trajectory_tilde, res.velocity_tilde)):
        t = {"lam": tr.lam}
        for k in range(4):
            t[f"x{k}"] = tr.x[:, k]
        for k in range(4):
            t[f"dx{k}"] = vel[:, k]
        t["velocity_ratio"] = res.ratio
        tables[label] = t
    err = float(np.max(np.abs(res.ratio - 2.0)))
    tol = float(cfg.parameters.get("tol", 1e-9)) * tol_scale
    return tables, {"velocity_ratio_error": err, "position_mismatch": res.max_position_mismatch}, [
        Check("velocity_ratio", err < tol, err, f"|r-2| < {tol:g}", 5)]


def _pipe_plane_wave(cfg, tol_scale):
    P = cfg.parameters
    phi = fl.from_spec(P["field"])
    hbar = float(P.get("hbar", 1.0))
    ppu = float(P.get("points_per_unit", 60))
    p0 = phi.asymptotic
    rows = {"delta": [], "norm": [], "error": [], "error_times_delta": []}
    for D in P["deltas"]:
        D = float(D)
        grid = np.linspace(0.0, D, int(round(D * ppu)) + 1)
        psi = qz.synth_psi_proper(phi, grid, hbar, 1.0)
        n = qz.inner_product_windowed(psi, psi, 0.0, D).real
        rows["delta"].append(D)
        rows["norm"].append(n)
        rows["error"].append(n - p0)
        rows["error_times_delta"].append((n - p0) * D)
    worst = max(abs(e) * D for e, D in zip(rows["error"], rows["delta"]))
    ok = worst <= p0 * tol_scale
    return {"norms": rows}, {"p0": p0, "final_norm": rows["norm"][-1]}, [
        Check("norm_within_p0_over_delta", ok, worst, f"|n-p0| * Delta <= {p0 * tol_scale:g}", 6)]


def _pipe_weak_gravity(cfg, tol_scale):
    P = cfg.parameters
    g = P["grid"]
    c = float(P.get("c", 1.0))
    grid, ratio, ref = acceptance.weak_gravity_run(float(P["u0"]), float(P["omega"]), c, float(P.get("m", 1.0)),
                                                    float(g["stop"]) - float(g["start"]), int(g["n"]),
                                                    float(P.get("coefficient", 1.0)))
    err = acceptance.rms_relative(ratio.imag, ref.imag)
    tol = float(P.get("tol", 0.05)) * tol_scale
    table = {"t": grid, "energy_re": ratio.real, "energy_im": ratio.imag, "reference_im": ref.imag}
    return {"energy": table}, {"rms_rel_error": err}, [
        Check("weak_gravity_shift", err < tol, err, f"< {tol:g}", P.get("criterion"))]


def _pipe_synthesize(cfg, tol_scale):
    P = cfg.parameters
    phi = fl.from_spec(P["field"])
    grid = _grid(P["grid"])
    hbar = float(P.get("hbar", 1.0))
    N = float(P.get("N", 1.0))
    gauge = P["gauge"]
    if gauge == "coordinate":
        psi = qz.synth_psi_coordinate(phi, grid, hbar, N)
        res = qz.schrodinger_residual(psi, phi)
    elif gauge == "proper":
        psi = qz.synth_psi_proper(phi, grid, hbar, N)
        res = qz.schrodinger_residual(psi, phi, proper=True)
    else:
        psi = qz.synth_psi_spatial(phi, grid, hbar, N, gauge)
        res = None
    table = {"s": psi.grid, "re": psi.values.real, "im": psi.values.imag, "abs2": np.abs(psi.values) ** 2}
    summary = {"norm_full_window": qz.inner_product_windowed(psi, psi, grid[0], grid[-1] - grid[0]).real}
    checks = []
    if res is not None:
        r = float(np.max(np.abs(res)))
        tol = float(P.get("tol", 1e-2)) * tol_scale
        summary["residual"] = r
        checks.append(Check("schrodinger_residual", r < tol, r, f"< {tol:g}"))
    return {"wavefunction": table}, summary, checks


def _pipe_acceptance(cfg, tol_scale):
    rows = {"criterion": [], "passed": [], "seconds": []}
    checks = []
    summary = {}
    for n in cfg.parameters["criteria"]:
        kwargs = {"tol_scale": tol_scale}
        if cfg.seed is not None and int(n) in (1, 2):
            kwargs["seed"] = cfg.seed
        res = acceptance.CRITERIA[int(n)](**kwargs)
        rows["criterion"].append(int(n))
        rows["passed"].append(int(res.passed))
        rows["seconds"].append(res.seconds)
        summary[f"criterion_{n}"] = res.as_dict()
        checks.append(Check(res.title, res.passed, {k: _jsonable(v) for k, v in res.measured.items()},
                            "; ".join(f"{k} {v}" for k, v in res.thresholds.items()), int(n)))
    return {"criteria": rows}, summary, checks


RUNNERS = {
    ("el-flow", "phi-v-closure"): _pipe_phi_v,
    ("el-flow", "geodesic"): _pipe_geodesic,
    ("ext-flow", "catalog"): _pipe_catalog,
    ("ext-flow", "bracket-table"): _pipe_bracket_table,
    ("rel-particle", "coordinate-time"): _pipe_rel_coordinate,
    ("rel-particle", "proper-time"): _pipe_rel_proper,
    ("rel-particle", "factor-of-two"): _pipe_factor_two,
    ("quantize", "plane-wave-norm"): _pipe_plane_wave,
    ("quantize", "weak-gravity"): _pipe_weak_gravity,
    ("quantize", "synthesize"): _pipe_synthesize,
    ("invariant-suite", "acceptance"): _pipe_acceptance,
}


# --------------------------------------------------------------------------
# output


def format_float(v) -> str:
    if isinstance(v, (int, np.integer)) and not isinstance(v, bool):
        return str(int(v))
    return "%.17g" % float(v)


def table_to_csv(table: dict, columns=None) -> str:
    cols = list(table) if columns is None else list(columns)
    missing = [c for c in cols if c not in table]
    if missing:
        raise ScenarioError(f"unknown CSV columns {missing}; available {list(table)}")
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(cols)
    n = len(table[cols[0]]) if cols else 0
    for i in range(n):
        w.writerow([format_float(table[c][i]) for c in cols])
    return buf.getvalue()


def _write(path: Path, text: str):
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def run_scenario(cfg: ScenarioConfig, out_dir=None, tol_scale: float = 1.0) -> RunResult:
    """Execute ``cfg``; with ``out_dir`` write its CSVs and ``summary.json`` under ``out_dir/<name>``."""
    runner = RUNNERS[(cfg.kind, cfg.pipeline)]
    t0 = time.perf_counter()
    try:
        tables, summary, checks = runner(cfg, tol_scale)
    except RIMechError as exc:
        raise ScenarioError(f"scenario {cfg.name!r} ({cfg.kind}/{cfg.pipeline}): {type(exc).__name__}: {exc}") from exc
    wall = time.perf_counter() - t0
    written = []
    if out_dir is not None:
        base = Path(out_dir) / cfg.name
        outputs = cfg.outputs or [{"table": t, "csv": f"{t}.csv"} for t in tables]
        for out in outputs:
            tname = out.get("table", next(iter(tables)))
            if tname not in tables:
                raise ScenarioError(f"scenario {cfg.name!r} has no table {tname!r}; available {list(tables)}")
            _write(base / out["csv"], table_to_csv(tables[tname], out.get("columns")))
            written.append(str(base / out["csv"]))
    result = RunResult(cfg.name, cfg.kind, summary, checks, written, wall)
    if out_dir is not None:
        _write(Path(out_dir) / cfg.name / "summary.json", json.dumps(result.as_dict(), indent=2, sort_keys=True, default=_json_default) + "\n")
    return result


# --------------------------------------------------------------------------
# reporting


@dataclass
class InvariantReport:
    rows: list

    @property
    def passed(self) -> bool:
        return all(r["passed"] for r in self.rows)

    @property
    def exit_code(self) -> int:
        return 0 if self.passed else 1

    def failing(self) -> list:
        return [r for r in self.rows if not r["passed"]]

    def lines(self) -> list:
        out = []
        for r in self.rows:
            crit = f"criterion {r['criterion']}" if r["criterion"] is not None else "scenario check"
            verdict = "PASS" if r["passed"] else "FAIL"
            out.append(f"{verdict} {r['scenario']}: {r['check']} ({crit}) measured={r['measured']} threshold={r['threshold']}")
        return out


def invariant_report(results) -> InvariantReport:
    """Flatten the checks of all results into a pass/fail table."""
    rows = []
    for res in results:
        for c in res.checks:
            rows.append({"scenario": res.name, "check": c.name, "criterion": c.criterion, "passed": bool(c.passed),
                         "measured": _jsonable(c.measured), "threshold": c.threshold})
    return InvariantReport(rows)


def load_results(results_dir) -> list:
    out = []
    for path in sorted(Path(results_dir).rglob("summary.json")):
        with open(path, encoding="utf-8") as fh:
            out.append(RunResult.from_dict(json.load(fh)))
    return out


def output_dir(cli_value) -> str:
    """``RI_MECH_OUT`` takes precedence over the command-line value."""
    return os.environ.get("RI_MECH_OUT") or cli_value
