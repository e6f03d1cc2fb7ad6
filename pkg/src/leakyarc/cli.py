"""Batch front end: one TOML config names a curve and a task, ``run`` writes the reports.

Config layout::

    [curve]
    kind = "segment"          # segment | circular_arc | polynomial
    length = 1.0

    [task.sweep]              # exactly one [task.<name>] table
    betas = [50, 100, 200, 400]
    j_max = 2

    [output]
    dir = "out"

    [run]
    workers = 1
"""
from __future__ import annotations

import argparse
import csv
import json
import math
import os
import platform
import sys
import time
from dataclasses import dataclass, field
from datetime import datetime, timezone
from importlib import metadata

import numpy as np
import scipy
import tomli
import tomli_w

from . import asympt, bs_solver, curve as curve_mod, effective1d

TASKS = ("curve-info", "effective", "spectrum", "sweep", "eigenfunction")

# every tunable default lives here and is echoed into the manifest
DEFAULTS = {
    "tol": 1e-7,
    "j_max": {"curve-info": None, "effective": 5, "spectrum": 2, "sweep": 2, "eigenfunction": None},
    "N": "auto: 16 * (max(4, ceil(kappa L / 6)) + 2 (grading + 1)), kappa = 0.5 sqrt(1.2) (beta + log beta)",
    "M": "auto: max(2000, 200 j_max)",
    "order": bs_solver.ORDER,
    "grading": bs_solver.GRADING,
    "samples": 257,
    "resolution": [81, 61],
    "workers": 1,
}

_CURVE_KEYS = {
    "segment": {"length"},
    "circular_arc": {"radius", "angle"},
    "polynomial": {"x", "y", "u_range"},
}

_TASK_KEYS = {
    "curve-info": {"samples"},
    "effective": {"j_max", "M", "interval", "beta"},
    "spectrum": {"betas", "beta", "j_max", "N", "tol"},
    "sweep": {"betas", "j_max", "N", "tol"},
    "eigenfunction": {"beta", "j", "N", "tol", "bbox", "resolution"},
}


class ConfigError(ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


@dataclass
class RunConfig:
    curve: dict
    task: str
    params: dict
    output_dir: str = "out"
    csv: bool = True
    json: bool = True
    workers: int = 1


# ---------------------------------------------------------------------------
# parsing


def _num(x):
    return isinstance(x, (int, float)) and not isinstance(x, bool) and math.isfinite(x)


def _int(x):
    return isinstance(x, int) and not isinstance(x, bool)


class _Checker:
    def __init__(self):
        self.errors: list[str] = []

    def fail(self, where, msg):
        self.errors.append(f"{where}: {msg}")

    def positive(self, where, name, x, integer=False):
        ok = _int(x) if integer else _num(x)
        if not ok:
            self.fail(where, f"{name} must be {'an integer' if integer else 'a number'}")
            return None
        if not x > 0:
            self.fail(where, f"{name} must be positive")
            return None
        return int(x) if integer else float(x)

    def numbers(self, where, name, x, size=None):
        if not isinstance(x, list) or not all(_num(v) for v in x):
            self.fail(where, f"{name} must be a list of numbers")
            return None
        if size is not None and len(x) != size:
            self.fail(where, f"{name} must have {size} entries")
            return None
        return [float(v) for v in x]


def _parse_curve(block, chk: _Checker) -> dict:
    if not isinstance(block, dict):
        chk.fail("curve", "missing [curve] table")
        return {}
    kind = block.get("kind")
    if kind not in _CURVE_KEYS:
        chk.fail("curve", f"kind must be one of {sorted(_CURVE_KEYS)}")
        return {}
    allowed = _CURVE_KEYS[kind] | {"kind", "margin"}
    for key in sorted(set(block) - allowed):
        chk.fail("curve", f"unknown key {key!r} for kind {kind!r}")
    out = {"kind": kind}
    for key in sorted(_CURVE_KEYS[kind]):
        if key not in block:
            chk.fail("curve", f"missing {key}")
            continue
        if kind == "polynomial":
            size = 2 if key == "u_range" else None
            out[key] = chk.numbers("curve", key, block[key], size)
        else:
            out[key] = chk.positive("curve", key, block[key])
    if kind == "circular_arc" and _num(block.get("angle")) and block["angle"] >= 2 * math.pi:
        chk.fail("curve", "angle must stay below 2*pi for an open arc")
    if kind == "polynomial" and out.get("u_range") and not out["u_range"][1] > out["u_range"][0]:
        chk.fail("curve", "u_range must be increasing")
    out["margin"] = chk.positive("curve", "margin", block["margin"]) if "margin" in block else None
    return out


def _parse_task(name, block, chk: _Checker) -> dict:
    where = f"task.{name}"
    if not isinstance(block, dict):
        chk.fail(where, "task parameters must be a table")
        return {}
    for key in sorted(set(block) - _TASK_KEYS[name]):
        chk.fail(where, f"unknown key {key!r}")
    p: dict = {}
    tol_default = DEFAULTS["tol"]
    if name == "curve-info":
        p["samples"] = chk.positive(where, "samples", block.get("samples", DEFAULTS["samples"]), True)
    elif name == "effective":
        p["j_max"] = chk.positive(where, "j_max", block.get("j_max", DEFAULTS["j_max"][name]), True)
        p["M"] = chk.positive(where, "M", block["M"], True) if "M" in block else None
        p["interval"] = chk.numbers(where, "interval", block["interval"], 2) if "interval" in block else None
        p["beta"] = chk.positive(where, "beta", block["beta"]) if "beta" in block else None
        if p["interval"] is not None and p["beta"] is not None:
            chk.fail(where, "give either interval or beta, not both")
    elif name in ("spectrum", "sweep"):
        if "betas" in block and "beta" in block:
            chk.fail(where, "give either beta or betas, not both")
        raw = block.get("betas", [block["beta"]] if "beta" in block else None)
        if raw is None:
            chk.fail(where, "missing betas")
            betas = None
        elif not isinstance(raw, list) or not raw:
            chk.fail(where, "betas must be a non-empty list")
            betas = None
        else:
            betas = [chk.positive(where, "beta", b) for b in raw]
            if any(b is None for b in betas):
                betas = None
            elif any(b2 <= b1 for b1, b2 in zip(betas[:-1], betas[1:])):
                chk.fail(where, "betas must be strictly ascending")
        if name == "sweep" and betas is not None and any(b < 20 for b in betas):
            chk.fail(where, "sweep betas must be >= 20")
        p["betas"] = betas
        p["j_max"] = chk.positive(where, "j_max", block.get("j_max", DEFAULTS["j_max"][name]), True)
        p["N"] = chk.positive(where, "N", block["N"], True) if "N" in block else None
        p["tol"] = chk.positive(where, "tol", block.get("tol", tol_default))
    elif name == "eigenfunction":
        if "beta" not in block:
            chk.fail(where, "missing beta")
            p["beta"] = None
        else:
            p["beta"] = chk.positive(where, "beta", block["beta"])
        p["j"] = chk.positive(where, "j", block.get("j", 1), True)
        p["N"] = chk.positive(where, "N", block["N"], True) if "N" in block else None
        p["tol"] = chk.positive(where, "tol", block.get("tol", tol_default))
        p["bbox"] = chk.numbers(where, "bbox", block["bbox"], 4) if "bbox" in block else None
        res = block.get("resolution", DEFAULTS["resolution"])
        if _int(res):
            res = [res, res]
        if isinstance(res, list) and len(res) == 2 and all(_int(r) for r in res) and min(res) >= 2:
            p["resolution"] = [int(r) for r in res]
        else:
            chk.fail(where, "resolution must be an integer >= 2 or a pair of them")
            p["resolution"] = None
        bb = p["bbox"]
        if bb is not None and not (bb[1] > bb[0] and bb[3] > bb[2]):
            chk.fail(where, "bbox must be [xmin, xmax, ymin, ymax] with xmin < xmax, ymin < ymax")
    return p


def parse_config(text: str) -> RunConfig:
    """Validated RunConfig; raises ConfigError listing every problem found."""
    try:
        doc = tomli.loads(text)
    except tomli.TOMLDecodeError as exc:
        raise ConfigError([f"syntax error: {exc}"]) from exc
    chk = _Checker()
    for key in sorted(set(doc) - {"curve", "task", "output", "run"}):
        chk.fail("config", f"unknown table {key!r}")
    curve = _parse_curve(doc.get("curve"), chk)

    tasks = doc.get("task", {})
    if not isinstance(tasks, dict):
        tasks = {}
    names = list(tasks)
    task, params = None, {}
    if len(names) != 1:
        chk.fail("task", f"exactly one task required, found {len(names)}")
    for name in names:
        if name not in TASKS:
            chk.fail("task", f"unknown task {name!r}; choose one of {', '.join(TASKS)}")
        else:
            # validate every block so all errors surface together
            params = _parse_task(name, tasks[name], chk)
            task = name

    output = doc.get("output", {})
    out_dir, want_csv, want_json = "out", True, True
    if isinstance(output, dict):
        for key in sorted(set(output) - {"dir", "csv", "json"}):
            chk.fail("output", f"unknown key {key!r}")
        out_dir = output.get("dir", out_dir)
        if not isinstance(out_dir, str) or not out_dir:
            chk.fail("output", "dir must be a non-empty string")
        want_csv = output.get("csv", True)
        want_json = output.get("json", True)
        if not isinstance(want_csv, bool) or not isinstance(want_json, bool):
            chk.fail("output", "csv and json flags must be booleans")
    else:
        chk.fail("output", "[output] must be a table")

    run_block = doc.get("run", {})
    workers = 1
    if isinstance(run_block, dict):
        for key in sorted(set(run_block) - {"workers"}):
            chk.fail("run", f"unknown key {key!r}")
        workers = chk.positive("run", "workers", run_block.get("workers", 1), True) or 1
    if chk.errors:
        raise ConfigError(chk.errors)
    return RunConfig(curve, task, params, out_dir, want_csv, want_json, workers)


def _drop_none(d: dict) -> dict:
    return {k: v for k, v in d.items() if v is not None}


def serialize(config: RunConfig) -> str:
    doc = {
        "curve": _drop_none(config.curve),
        "task": {config.task: _drop_none(config.params)},
        "output": {"dir": config.output_dir, "csv": config.csv, "json": config.json},
        "run": {"workers": config.workers},
    }
    return tomli_w.dumps(doc)


def load_config(path) -> RunConfig:
    with open(path, "rb") as fh:
        raw = fh.read()
    try:
        text = raw.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise ConfigError([f"config is not UTF-8: {exc}"]) from exc
    return parse_config(text)


# ---------------------------------------------------------------------------
# running


def build_curve(spec: dict) -> curve_mod.ArcCurve:
    kind = spec["kind"]
    margin = spec.get("margin")
    if kind == "segment":
        return curve_mod.make_segment(spec["length"], margin)
    if kind == "circular_arc":
        return curve_mod.make_circular_arc(spec["radius"], spec["angle"], margin)
    return curve_mod.make_polynomial(spec["x"], spec["y"], spec["u_range"], margin)


def write_csv(path, header, rows) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(v)) if isinstance(v, (float, np.floating)) else v for v in row])


def write_json(path, obj) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(obj, fh, indent=2, sort_keys=True, default=_json_default)
        fh.write("\n")


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"not JSON serializable: {type(o).__name__}")


def _versions() -> dict:
    try:
        pkg = metadata.version("artifact")
    except metadata.PackageNotFoundError:
        pkg = "unknown"
    return {"python": platform.python_version(), "numpy": np.__version__,
            "scipy": scipy.__version__, "leakyarc": pkg}


@dataclass
class _Outcome:
    files: list = field(default_factory=list)
    errors: list = field(default_factory=list)
    lines: list = field(default_factory=list)


def _task_curve_info(cfg, c, out, res: _Outcome):
    K = c.max_curvature()
    cap = math.inf if K == 0 else 0.5 / K
    info = {"kind": c.kind, "L": c.length, "K": K, "tubular_cap": cap, "margin": c.margin,
            "beta_floor": c.beta_floor(), "curve": c.describe()}
    res.lines.append(f"L = {c.length:.12g}")
    res.lines.append(f"K = {K:.12g}")
    res.lines.append(f"tubular cap a < {cap:.12g}" if K > 0 else "tubular cap: none (straight)")
    res.lines.append(f"margin l0 = {c.margin:.6g}, extended spectra need beta > {c.beta_floor():.6g}")
    if cfg.csv:
        write_csv(os.path.join(out, "polyline.csv"), ["s", "x", "y", "kappa"],
                  c.polyline(cfg.params["samples"]).tolist())
        res.files.append("polyline.csv")
    if cfg.json:
        write_json(os.path.join(out, "curve_info.json"), info)
        res.files.append("curve_info.json")


def _task_effective(cfg, c, out, res: _Outcome):
    p = cfg.params
    if p["beta"] is not None:
        spec = effective1d.extended_eigenvalues(c, p["beta"], p["j_max"], p["M"])
    elif p["interval"] is not None:
        spec = effective1d.dirichlet_eigenvalues(c, *p["interval"], p["j_max"], p["M"])
    else:
        spec = effective1d.dirichlet_eigenvalues(c, 0.0, c.length, p["j_max"], p["M"])
    for j, mu, err in spec.rows():
        res.lines.append(f"mu_{j} = {mu:.12g}  (error estimate {err:.1e})")
    if cfg.csv:
        write_csv(os.path.join(out, "effective.csv"), ["j", "mu", "error_estimate"], spec.rows())
        res.files.append("effective.csv")
    if cfg.json:
        write_json(os.path.join(out, "effective.json"),
                   {"s0": spec.s0, "s1": spec.s1, "M": spec.M, "mu": spec.eigenvalues,
                    "error": spec.error})
        res.files.append("effective.json")


def _task_spectrum(cfg, c, out, res: _Outcome):
    p = cfg.params
    records = []
    for beta in p["betas"]:
        for j in range(1, p["j_max"] + 1):
            try:
                st = bs_solver.solve_eigenvalue(c, beta, j, N=p["N"], tol=p["tol"])
            except bs_solver.BsError as exc:
                res.errors.append({"beta": beta, "j": j, "error": type(exc).__name__, "message": str(exc)})
                res.lines.append(f"beta={beta:g} j={j}: {type(exc).__name__}: {exc}")
                if isinstance(exc, bs_solver.NoSuchLevel):
                    for jj in range(j + 1, p["j_max"] + 1):
                        res.errors.append({"beta": beta, "j": jj, "error": "NoSuchLevel",
                                           "message": f"level {j} already absent"})
                    break
                continue
            records.append(st.record())
            res.lines.append(f"beta={beta:g} j={j}: E = {st.energy:.12g}  (N={st.N})")
    header = ["beta", "j", "E", "N", "tol", "residual"]
    if cfg.csv:
        write_csv(os.path.join(out, "spectrum.csv"), header, [[r[k] for k in header] for r in records])
        res.files.append("spectrum.csv")
    if cfg.json:
        write_json(os.path.join(out, "spectrum.json"), {"rows": records, "errors": res.errors})
        res.files.append("spectrum.json")


def _task_sweep(cfg, c, out, res: _Outcome, workers):
    p = cfg.params
    table = asympt.sweep(c, p["betas"], p["j_max"], N=p["N"], tol=p["tol"], workers=workers)
    for m in table.missing:
        res.errors.append({"beta": m.beta, "j": m.j, "error": m.reason})
        res.lines.append(f"beta={m.beta:g} j={m.j}: absent ({m.reason})")
    summary = {"curve": c.describe(), "curve_hash": table.metadata["curve_hash"],
               "mu": table.metadata["mu"], "rows": len(table.rows),
               "missing": [{"beta": m.beta, "j": m.j, "reason": m.reason} for m in table.missing],
               "apriori": asympt.check_apriori(table), "ordering": asympt.check_ordering(table)}
    try:
        fit = asympt.fit_rate(table)
        summary.update(fit.summary())
        for j in fit.C:
            res.lines.append(f"j={j}: C_j = {fit.C[j]:.4g}, shrinking = {fit.trend[j]}")
    except asympt.InsufficientRows as exc:
        summary["fit_error"] = str(exc)
    try:
        summary["gap_C"] = {str(j): v for j, v in asympt.gap_consistency(c, p["betas"], p["j_max"]).items()}
    except effective1d.MarginExceeded as exc:
        summary["gap_error"] = str(exc)
    res.lines.append(f"a-priori bracket respected: {summary['apriori']}")
    if cfg.csv:
        with open(os.path.join(out, "sweep.csv"), "w", encoding="utf-8", newline="") as fh:
            fh.write(table.to_csv())
        res.files.append("sweep.csv")
    if cfg.json:
        write_json(os.path.join(out, "summary.json"), summary)
        res.files.append("summary.json")


def _task_eigenfunction(cfg, c, out, res: _Outcome):
    p = cfg.params
    st = bs_solver.solve_eigenvalue(c, p["beta"], p["j"], N=p["N"], tol=p["tol"])
    bbox = p["bbox"]
    if bbox is None:
        pts = c.point(np.linspace(0.0, c.length, 257))
        pad = 0.25 * c.length
        bbox = [pts[:, 0].min() - pad, pts[:, 0].max() + pad, pts[:, 1].min() - pad, pts[:, 1].max() + pad]
    grid = bs_solver.eigenfunction_grid(st, bbox, tuple(p["resolution"]))
    res.lines.append(f"E_{p['j']}({p['beta']:g}) = {st.energy:.12g}; "
                     f"{int(grid.flag.sum())} of {grid.flag.size} grid points flagged near the arc")
    if cfg.csv:
        write_csv(os.path.join(out, "eigenfunction.csv"), ["x", "y", "u", "flag"],
                  [[x, y, u, int(f)] for x, y, u, f in zip(grid.x, grid.y, grid.u, grid.flag)])
        res.files.append("eigenfunction.csv")
    if cfg.json:
        write_json(os.path.join(out, "bound_state.json"), dict(st.record(), bbox=list(bbox)))
        res.files.append("bound_state.json")


def run(config: RunConfig, out: str | None = None, workers: int | None = None,
        quiet: bool = False) -> int:
    """Run the configured task; 0 iff every requested row succeeded, 2 for I/O failures."""
    say = (lambda *_: None) if quiet else (lambda msg: print(msg))
    out = out or config.output_dir
    workers = workers or config.workers
    started = datetime.now(timezone.utc).isoformat(timespec="seconds")
    t0 = time.perf_counter()
    try:
        os.makedirs(out, exist_ok=True)
        if not os.access(out, os.W_OK):
            raise PermissionError(f"output directory {out!r} is not writable")
    except OSError as exc:
        print(f"error: cannot use output directory: {exc}", file=sys.stderr)
        return 2

    res = _Outcome()
    status = 0
    try:
        c = build_curve(config.curve)
        if config.task == "curve-info":
            _task_curve_info(config, c, out, res)
        elif config.task == "effective":
            _task_effective(config, c, out, res)
        elif config.task == "spectrum":
            _task_spectrum(config, c, out, res)
        elif config.task == "sweep":
            _task_sweep(config, c, out, res, workers)
        else:
            _task_eigenfunction(config, c, out, res)
    except OSError as exc:
        print(f"error: writing outputs failed: {exc}", file=sys.stderr)
        return 2
    except (curve_mod.CurveError, effective1d.EffectiveError, bs_solver.BsError, asympt.SweepError) as exc:
        res.errors.append({"error": type(exc).__name__, "message": str(exc)})
        res.lines.append(f"{type(exc).__name__}: {exc}")
    if res.errors:
        status = 1
    for line in res.lines:
        say(line)
    if res.errors:
        say(f"{len(res.errors)} requested row(s) failed")

    manifest = {
        "config": serialize(config),
        "task": config.task,
        "versions": _versions(),
        "defaults": DEFAULTS,
        "started": started,
        "wall_time_s": time.perf_counter() - t0,
        "workers": workers,
        "outputs": res.files,
        "errors": res.errors,
        "exit_status": status,
    }
    try:
        write_json(os.path.join(out, "manifest.json"), manifest)
    except OSError as exc:
        print(f"error: writing manifest failed: {exc}", file=sys.stderr)
        return 2
    return status


def main(argv=None) -> int:
    ap = argparse.ArgumentParser(prog="leakyarc", description="Bound states of a leaky arc from a TOML config.")
    ap.add_argument("config", help="path to the UTF-8 TOML config")
    ap.add_argument("--out", help="output directory (overrides [output] dir)")
    ap.add_argument("--workers", type=int, help="worker processes for sweeps")
    ap.add_argument("--quiet", action="store_true", help="suppress the console summary")
    args = ap.parse_args(argv)
    if args.workers is not None and args.workers < 1:
        ap.error("--workers must be >= 1")
    try:
        cfg = load_config(args.config)
    except OSError as exc:
        print(f"error: cannot read config: {exc}", file=sys.stderr)
        return 2
    except ConfigError as exc:
        for e in exc.errors:
            print(f"config error: {e}", file=sys.stderr)
        return 2
    return run(cfg, out=args.out, workers=args.workers, quiet=args.quiet)


if __name__ == "__main__":
    sys.exit(main())
