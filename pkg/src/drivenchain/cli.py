"""Command-line front end: configuration, task orchestration and result files.

Every run writes ``manifest.json`` (parameters, library version, config hash,
per-task residuals, status and timings) and one table per task into the
output directory.  Exit codes: 0 success, 1 task failure, 2 configuration error.
"""

import argparse
import csv
import hashlib
import io
import json
import sys
import time
from dataclasses import dataclass, field, asdict, fields
from math import gcd
from pathlib import Path

import numpy as np
import scipy.linalg as la

from . import __version__

TASKS = ("solve", "oracle", "observe", "partition", "drude", "verify")
MODEL_KEYS = ("kind", "n", "n_range", "delta", "gamma_frac", "eps", "p", "theta", "N", "mu", "mu_grid")
TOP_KEYS = ("model", "tasks", "cap", "tol", "out", "format", "seed", "drude")


class ConfigError(ValueError):
    """Invalid or inconsistent job configuration (exit code 2)."""


@dataclass
class JobConfig:
    model: dict
    tasks: list
    cap: int | None = None
    tol: float = 1e-9
    out: str = "run"
    format: str = "csv"
    seed: int = 20240
    drude: dict = field(default_factory=lambda: {"l": 1, "m": 3})

    def to_dict(self):
        return asdict(self)

    def config_hash(self):
        """SHA-256 of the canonical configuration, excluding the output location."""
        data = self.to_dict()
        data.pop("out")
        blob = json.dumps(data, sort_keys=True, separators=(",", ":"), default=str)
        return hashlib.sha256(blob.encode()).hexdigest()

    @property
    def sizes(self):
        m = self.model
        if m.get("n_range") is not None:
            a, b = m["n_range"]
            return list(range(a, b + 1))
        return [m["n"]] if m.get("n") is not None else []


def parse_gamma_frac(text):
    if text is None or isinstance(text, (list, tuple)):
        return None if text is None else tuple(int(v) for v in text)
    try:
        l, m = (int(v) for v in str(text).split("/"))
    except ValueError as exc:
        raise ConfigError(f"--gamma-frac expects l/m, got {text!r}") from exc
    return l, m


def parse_n_range(value):
    """``"a:b"`` or ``[a, b]`` to ``[a, b]``."""
    if value is None:
        return None
    parts = str(value).split(":") if isinstance(value, str) else list(value)
    try:
        a, b = (int(v) for v in parts)
    except (TypeError, ValueError) as exc:
        raise ConfigError(f"n_range expects a:b or [a, b], got {value!r}") from exc
    return [a, b]


def parse_complex(text):
    if text is None or isinstance(text, (int, float, complex)):
        return text
    try:
        return complex(str(text).replace(" ", ""))
    except ValueError as exc:
        raise ConfigError(f"cannot read complex number {text!r}") from exc


def validate(cfg):
    """Check a :class:`JobConfig` for schema and consistency errors."""
    m = cfg.model
    for where, keys, allowed in (("model", m, MODEL_KEYS), ("drude", cfg.drude, ("l", "m"))):
        for k in keys:
            if k not in allowed:
                raise ConfigError(f"unknown key {k!r} in {where}")
    for t in cfg.tasks:
        if t not in TASKS:
            raise ConfigError(f"unknown task {t!r} in tasks")
    if cfg.format not in ("json", "csv"):
        raise ConfigError(f"format must be json or csv, got {cfg.format!r}")
    if m.get("eps") is not None and m.get("p") is not None:
        raise ConfigError("both eps and p supplied; give exactly one")
    gf = m.get("gamma_frac")
    if gf is not None:
        l, mm = gf
        if not (1 <= l < mm) or gcd(l, mm) != 1:
            raise ConfigError(f"gamma_frac {l}/{mm} must be coprime with 1 <= l < m")
    if m.get("n_range") is not None:
        a, b = m["n_range"]
        if not 1 <= a <= b:
            raise ConfigError("n_range must be increasing and positive")
    l, mm = cfg.drude.get("l", 1), cfg.drude.get("m", 3)
    if not (1 <= l < mm) or gcd(l, mm) != 1:
        raise ConfigError(f"drude l/m = {l}/{mm} must be coprime with 1 <= l < m")
    needs_model = {"solve", "oracle", "observe", "partition"} & set(cfg.tasks)
    if needs_model and (m.get("kind") is None or not cfg.sizes):
        raise ConfigError(f"tasks {sorted(needs_model)} need a model kind and n")
    if needs_model:
        try:
            _chain_model(cfg, cfg.sizes[0])
        except ValueError as exc:
            raise ConfigError(str(exc)) from exc
    return cfg


def config_from_dict(data):
    unknown = [k for k in data if k not in TOP_KEYS]
    if unknown:
        raise ConfigError(f"unknown key {unknown[0]!r} at top level")
    model = dict(data.get("model", {}))
    if "gamma_frac" in model:
        model["gamma_frac"] = parse_gamma_frac(model["gamma_frac"])
    if "p" in model:
        model["p"] = parse_complex(model["p"])
    if "n_range" in model:
        model["n_range"] = parse_n_range(model["n_range"])
    kw = {f.name: data[f.name] for f in fields(JobConfig) if f.name in data and f.name != "model"}
    return validate(JobConfig(model=model, **kw))


def config_from_args(args):
    model = {}
    for key in MODEL_KEYS:
        val = getattr(args, key, None)
        if val is not None:
            model[key] = val
    model["gamma_frac"] = parse_gamma_frac(model.get("gamma_frac"))
    if model["gamma_frac"] is None:
        model.pop("gamma_frac")
    if "p" in model:
        model["p"] = parse_complex(model["p"])
    if "n_range" in model:
        model["n_range"] = parse_n_range(model["n_range"])
    if "mu_grid" in model:
        model["mu_grid"] = [float(v) for v in str(model["mu_grid"]).split(",")]
    if args.eps is None and "p" not in model and args.command not in ("drude", "verify", "run"):
        model["eps"] = 1.0
    tasks = [args.command] if args.command in TASKS else []
    return validate(JobConfig(model=model, tasks=tasks, cap=args.cap, tol=args.tol, out=args.out,
                              format=args.format, seed=args.seed,
                              drude={"l": args.l, "m": args.m}))


def parse_config(source):
    """Read a :class:`JobConfig` from a JSON file path or an argparse namespace."""
    if isinstance(source, (str, Path)):
        path = Path(source)
        if not path.exists():
            raise ConfigError(f"config file {path} not found")
        try:
            data = json.loads(path.read_text())
        except json.JSONDecodeError as exc:
            raise ConfigError(f"{path}: line {exc.lineno}: {exc.msg}") from exc
        return config_from_dict(data)
    if isinstance(source, dict):
        return config_from_dict(source)
    return config_from_args(source)


# ---------------------------------------------------------------- formatting

def fmt_value(v):
    """Stable text form: ``repr`` floats, complex numbers as ``re+imj``."""
    if isinstance(v, (complex, np.complexfloating)):
        v = complex(v)
        return f"{v.real!r}{'+' if v.imag >= 0 or np.isnan(v.imag) else '-'}{abs(v.imag)!r}j"
    if isinstance(v, (np.floating, float)):
        return repr(float(v))
    if isinstance(v, np.integer):
        return str(int(v))
    if v is None:
        return ""
    return str(v)


def to_jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple, np.ndarray)):
        return [to_jsonable(v) for v in obj]
    if isinstance(obj, (complex, np.complexfloating)):
        return fmt_value(obj)
    if isinstance(obj, np.generic):
        return obj.item()
    if isinstance(obj, float) and not np.isfinite(obj):
        return repr(obj)
    return obj


def write_table(path, rows, fmt):
    """Write a list of dicts with identical keys as CSV (header row) or JSON."""
    if fmt == "json":
        path = path.with_suffix(".json")
        path.write_text(json.dumps(to_jsonable(rows), sort_keys=True, indent=1) + "\n", encoding="utf-8")
        return path
    path = path.with_suffix(".csv")
    buf = io.StringIO()
    header = list(rows[0].keys()) if rows else []
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt_value(r[k]) for k in header])
    path.write_text(buf.getvalue(), encoding="utf-8")
    return path


# ---------------------------------------------------------------- tasks

def _chain_model(cfg, n):
    from .lax import eps_from_p
    from .operators import ChainModel
    m = cfg.model
    eps = m.get("eps")
    kw = {k: m[k] for k in ("delta", "gamma_frac", "theta", "N", "mu") if m.get(k) is not None}
    if eps is None and m.get("p") is not None:
        probe = ChainModel(m["kind"], n=n, eps=1.0, **kw)
        eps = float(np.real(eps_from_p(m["p"], probe.gamma)))
    if m["kind"] in ("xxz", "xxz-twisted") and "delta" not in kw and "gamma_frac" not in kw:
        kw["gamma_frac"] = (1, 3)
    return ChainModel(m["kind"], n=n, eps=eps, **kw)


class Job:
    """Task runner with a cache of built artifacts shared across tasks."""

    def __init__(self, cfg):
        self.cfg = cfg
        self.cache = {}

    def artifact(self, key, build):
        if key not in self.cache:
            self.cache[key] = build()
        return self.cache[key]

    def model(self, n):
        return self.artifact(("model", n), lambda: _chain_model(self.cfg, n))

    def lax(self, n):
        from .lax import build_lax
        return self.artifact(("lax", n), lambda: build_lax(self.model(n), D=self.cfg.cap))

    def two_leg(self, n):
        from .ness import two_leg, reduce_two_leg
        return self.artifact(("two-leg", n), lambda: reduce_two_leg(two_leg(self.lax(n))))

    def liouvillian(self, n):
        from .lindblad import build_liouvillian
        return self.artifact(("liouvillian", n), lambda: build_liouvillian(self.model(n)))

    def ness(self, n):
        from .ness import assemble_ness
        return self.artifact(("ness", n), lambda: assemble_ness(self.lax(n), n))

    # each task returns (rows, residuals, ok)

    def task_solve(self):
        from .lindblad import SIZE_GUARD, relative_residual
        rows, res = [], {}
        for n in self.cfg.sizes:
            r = self.ness(n)
            model = self.model(n)
            resid = None
            if n <= SIZE_GUARD.get(model.d, 3):
                resid = relative_residual(self.liouvillian(n), r.rho)
                res[f"n{n}"] = resid
            rows.append({"n": n, "Z": r.Z, "trace_rho": float(np.real(np.trace(r.rho))),
                         "liouvillian_residual": resid})
        return rows, res, all(v <= self.cfg.tol for v in res.values())

    def task_oracle(self):
        from .lindblad import solve_ness, fidelity, subspace_fidelity
        rows, res = [], {}
        ok = True
        for n in self.cfg.sizes:
            ss = solve_ness(self.liouvillian(n))
            row = {"n": n, "null_dimension": ss.null_dimension,
                   "max_residual": float(max(ss.residuals)), "fidelity": None}
            if ("ness", n) in self.cache:
                rho = self.cache[("ness", n)].rho
                if ss.null_dimension == 1:
                    f = fidelity(rho, ss.states[0])
                else:
                    Q, _ = la.qr(np.array([s.reshape(-1, order="F") for s in ss.states]).T, mode="economic")
                    f = subspace_fidelity(rho, Q)
                row["fidelity"] = f
                res[f"n{n}-infidelity"] = abs(1 - f)
                ok &= abs(1 - f) <= self.cfg.tol
            res[f"n{n}-residual"] = row["max_residual"]
            ok &= row["max_residual"] <= self.cfg.tol
            rows.append(row)
        return rows, res, ok

    def task_observe(self):
        from .basis import weyl
        from .observables import (magnetization_profile, spin_current, ls_currents, expect_local,
                                  rescaled_coordinate, filling_ratio)
        rows, res = [], {}
        for n in self.cfg.sizes:
            tl, model = self.two_leg(n), self.model(n)
            if model.kind in ("xxx", "xxz", "xxz-twisted"):
                prof = magnetization_profile(tl, n)
                cur, ratio = spin_current(tl, n) if model.kind != "xxz-twisted" else (np.array([np.nan]), np.nan)
                for x, (xi, mz) in enumerate(zip(rescaled_coordinate(n), prof), start=1):
                    rows.append({"n": n, "site": x, "coordinate": xi, "observable": "sigma_z", "value": mz})
                for b, j in enumerate(cur, start=1):
                    rows.append({"n": n, "site": b, "coordinate": None, "observable": "current", "value": j})
                if model.kind != "xxz-twisted":
                    rows.append({"n": n, "site": None, "coordinate": None, "observable": "current_ratio_form",
                                 "value": ratio})
                    # the bond expectation is a difference of O(1) terms, so exponentially
                    # small currents are only resolved to absolute precision
                    res[f"n{n}-current"] = float(np.max(np.abs(cur - ratio)) / max(abs(ratio), 1.0))
            elif model.kind == "lai-sutherland":
                cur, ratio = ls_currents(tl, n)
                for i, c in enumerate(cur):
                    rows.append({"n": n, "site": 1, "coordinate": None, "observable": f"current{i}",
                                 "value": np.real(c)})
                rows.append({"n": n, "site": 1, "coordinate": None, "observable": "current_ratio_form",
                             "value": ratio})
                res[f"n{n}-current"] = abs(np.real(cur[0]) - ratio) / max(abs(ratio), 1.0)
                for mu in self.cfg.model.get("mu_grid") or []:
                    rows.append({"n": n, "site": None, "coordinate": mu, "observable": "filling_ratio",
                                 "value": filling_ratio(model.eps, n, mu)})
            else:
                for x in range(1, n + 1):
                    for a in range(model.d):
                        v = np.real(expect_local(tl, weyl(a, a, model.d), x, n))
                        rows.append({"n": n, "site": x, "coordinate": None, "observable": f"population{a}",
                                     "value": v})
        return rows, res, all(v <= max(self.cfg.tol, 1e-9) for v in res.values())

    def task_partition(self):
        from .observables import partition_sequence
        rows = []
        nmax = max(self.cfg.sizes)
        logz = partition_sequence(self.two_leg(nmax), nmax)
        for n in range(1, nmax + 1):
            rows.append({"n": n, "log_Z": logz[n], "log_ratio": logz[n] - logz[n - 1]})
        return rows, {}, bool(np.all(np.isfinite(logz)))

    def task_drude(self):
        from .pseudolocal import drude_bounds
        l, m = self.cfg.drude["l"], self.cfg.drude["m"]
        b = drude_bounds(l, m)
        row = {"l": l, "m": m, "delta": b.delta, "D_Z_formula": b.dz_formula, "D_Z_numeric": b.dz_numeric,
               "D_K_formula": b.dk_formula, "D_K_numeric": b.dk_numeric,
               "D_Z_error": abs(b.dz_numeric - b.dz_formula), "D_K_error": abs(b.dk_numeric - b.dk_formula)}
        res = {"D_Z": row["D_Z_error"], "D_K": row["D_K_error"]}
        return [row], res, max(res.values()) <= 1e-6 and b.dk_formula >= b.dz_formula

    def task_verify(self):
        from .verify import run_default_suite
        rows, res = [], {}
        for r in run_default_suite(tol=self.cfg.tol, seed=self.cfg.seed):
            worst = max(r.residuals.values())
            rows.append({"check": r.check_id, "verdict": r.verdict, "max_residual": worst,
                         "tolerance": r.tolerance, "seed": r.seed})
            res[r.check_id] = worst
        return rows, res, all(r["verdict"] == "pass" for r in rows)


def execute_job(cfg):
    """Run the tasks of ``cfg`` in order and write the run directory.

    Returns the run directory and the manifest dictionary.  Task exceptions
    are recorded as failures; they never abort later tasks.
    """
    out = Path(cfg.out)
    out.mkdir(parents=True, exist_ok=True)
    job = Job(cfg)
    tasks = {}
    for name in cfg.tasks:
        t0 = time.perf_counter()
        entry = {}
        try:
            rows, residuals, ok = getattr(job, f"task_{name}")()
            path = write_table(out / name, rows, cfg.format)
            entry.update(status="ok" if ok else "fail", residuals=residuals, table=path.name, rows=len(rows))
        except Exception as exc:  # recorded, not raised: the manifest is the report
            entry.update(status="error", error=f"{type(exc).__name__}: {exc}", residuals={})
        entry["wall_time"] = time.perf_counter() - t0
        tasks[name] = entry
    manifest = {"version": __version__, "config": cfg.to_dict(), "config_hash": cfg.config_hash(),
                "tasks": tasks, "numpy": np.__version__}
    (out / "manifest.json").write_text(json.dumps(to_jsonable(manifest), sort_keys=True, indent=1) + "\n",
                                       encoding="utf-8")
    return out, manifest


# ---------------------------------------------------------------- argparse

def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    g = common.add_argument_group("global")
    g.add_argument("--out", default="run", help="output directory")
    g.add_argument("--tol", type=float, default=1e-9, help="residual tolerance")
    g.add_argument("--cap", type=int, default=None, help="auxiliary ladder truncation")
    g.add_argument("--seed", type=int, default=20240)
    g.add_argument("--format", choices=("json", "csv"), default="csv")
    m = common.add_argument_group("model")
    m.add_argument("--model", dest="kind", choices=("xxx", "xxz", "xxz-twisted", "suN", "lai-sutherland"))
    m.add_argument("--n", type=int)
    m.add_argument("--n-range", dest="n_range", help="inclusive range a:b")
    m.add_argument("--eps", type=float)
    m.add_argument("--p", help="representation parameter (complex), instead of --eps")
    m.add_argument("--delta", type=float)
    m.add_argument("--gamma-frac", dest="gamma_frac", help="anisotropy angle pi*l/m as l/m")
    m.add_argument("--theta", type=float)
    m.add_argument("--N", type=int)
    m.add_argument("--mu", type=float)
    m.add_argument("--mu-grid", dest="mu_grid", help="comma-separated chemical potentials")
    d = common.add_argument_group("drude")
    d.add_argument("--l", type=int, default=1)
    d.add_argument("--m", type=int, default=3)

    parser = argparse.ArgumentParser(prog="drivenchain", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)
    helps = {"solve": "matrix-product steady state", "oracle": "brute-force Liouvillian null space",
             "observe": "profiles and currents", "partition": "partition-function sequence",
             "drude": "Drude-weight bounds", "verify": "algebraic identity suites",
             "run": "run a JSON job file"}
    for name, h in helps.items():
        p = sub.add_parser(name, parents=[common], help=h)
        if name == "run":
            p.add_argument("config", help="JSON job file")
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        cfg = parse_config(args.config) if args.command == "run" else parse_config(args)
    except ConfigError as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return 2
    _, manifest = execute_job(cfg)
    failed = [k for k, v in manifest["tasks"].items() if v["status"] != "ok"]
    for k, v in manifest["tasks"].items():
        print(f"{k}: {v['status']}")
    return 1 if failed else 0


if __name__ == "__main__":
    sys.exit(main())
