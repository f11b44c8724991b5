"""Command line front end: configuration, stage orchestration, persistence, plot data.

Every run writes ``config.json`` and ``diagnostics.json`` (validated against the
shipped schema), CSV field data, and gnuplot-ready ``.dat`` files into
``<root>/<name>``.  The root is ``--out``, else ``$FPUT_MICROPTERON_OUTPUT``,
else ``./runs``.

Exit codes: 0 success, 2 configuration error, 3 stage non-convergence,
4 hypothesis-check failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from importlib import resources
from pathlib import Path
from typing import Optional

import jsonschema
import numpy as np

from .dispersion import (WaveParameters, critical_frequency, critical_frequency_mu, eigencurves,
                         kernel_coefficient, mu_threshold, sound_speed_squared)
from .jost import (NeumannDivergence, StripZeroError, functional_iota, iota_chi_derived, jost_adjoint_residual,
                   chi_c, neumann_jost, random_odd_panel, solvability_defect)
from .lattice_sim import TravelingProfile, init_from_profiles, run_and_compare
from .micropteron import (BealeNonContraction, SolvabilityError, assemble_profiles, beale_iterate,
                          supersonic_margin)
from .periodic import PeriodicNonConvergence, PeriodicWave, bifurcation_denominator, solve_periodic
from .solitary import SolitaryDivergence, SolitaryWave, solve_monatomic
from .spectral_ops import Grid, GridFunction, KrylovFailure, apply_Hc, solve_Hc

FORMAT_VERSION = "1"
ENV_OUTPUT = "FPUT_MICROPTERON_OUTPUT"
SUBCOMMANDS = ("dispersion", "solitary", "periodic", "jost", "micropteron", "simulate", "pipeline")
STAGES = ("dispersion", "solitary", "periodic", "jost", "micropteron", "simulate")
STAGE_ERRORS = (SolitaryDivergence, PeriodicNonConvergence, NeumannDivergence, StripZeroError,
                BealeNonContraction, SolvabilityError, KrylovFailure)

H1_RESIDUAL = 1e-9
H2_ERROR = 1e-8
H4_MARGIN = 1e-3

EXIT_OK, EXIT_CONFIG, EXIT_STAGE, EXIT_HYPOTHESIS = 0, 2, 3, 4


class ConfigError(ValueError):
    pass


class StageError(RuntimeError):
    def __init__(self, stage: str, cause: BaseException):
        super().__init__(f"[{stage}] {type(cause).__name__}: {cause}")
        self.stage = stage
        self.cause = cause


@dataclass(frozen=True)
class RunConfig:
    subcommand: str
    c: Optional[float] = None
    epsilon: Optional[float] = None
    mu: float = 0.0
    mus: tuple = ()
    a_values: tuple = (0.0, 1e-3, 2e-3)
    half_length: Optional[float] = None
    n_points: Optional[int] = None
    tol: float = 1e-12
    beale_tol: float = 1e-11
    T: float = 50.0
    dt: float = 0.01
    chain_length: Optional[int] = None
    profiles: Optional[str] = None
    out: Optional[str] = None
    name: Optional[str] = None
    seed: int = 0
    workers: int = 1
    record_timing: bool = False
    format_version: str = FORMAT_VERSION

    def __post_init__(self):
        object.__setattr__(self, "mus", tuple(float(m) for m in self.mus))
        object.__setattr__(self, "a_values", tuple(float(a) for a in self.a_values))
        self.validate()

    def validate(self) -> None:
        if self.subcommand not in SUBCOMMANDS:
            raise ConfigError(f"unknown subcommand {self.subcommand!r}")
        if self.format_version != FORMAT_VERSION:
            raise ConfigError(f"unsupported format version {self.format_version!r}")
        for name in ("tol", "beale_tol", "T", "dt"):
            v = getattr(self, name)
            if not (isinstance(v, (int, float)) and math.isfinite(v) and v > 0):
                raise ConfigError(f"{name} must be positive, got {v!r}")
        if self.workers < 1:
            raise ConfigError("workers must be at least 1")
        if (self.half_length is None) != (self.n_points is None):
            raise ConfigError("give both half_length and n_points or neither")
        if self.subcommand == "simulate" and self.profiles is None:
            raise ConfigError("simulate requires --profiles")
        if self.subcommand != "simulate" or self.profiles is None:
            if (self.c is None) == (self.epsilon is None):
                raise ConfigError("give exactly one of c and epsilon")
            try:
                self.params()
                self.grid()
            except ValueError as err:
                raise ConfigError(str(err)) from err

    def params(self, mu: Optional[float] = None) -> WaveParameters:
        mu = self.mu if mu is None else mu
        if self.epsilon is not None:
            return WaveParameters.from_epsilon(self.epsilon, mu)
        return WaveParameters(c=self.c, mu=mu)

    def grid(self) -> Grid:
        if self.half_length is not None:
            return Grid(float(self.half_length), int(self.n_points))
        return Grid.for_epsilon(self.params().near_sonic_epsilon)

    def mu_list(self) -> tuple:
        return self.mus if self.mus else (self.mu,)

    def run_dir(self) -> Path:
        root = self.out or os.environ.get(ENV_OUTPUT) or "runs"
        return Path(root) / (self.name or self.subcommand)

    def to_json(self) -> dict:
        d = asdict(self)
        d["mus"] = list(self.mus)
        d["a_values"] = list(self.a_values)
        return d

    @classmethod
    def from_json(cls, data: dict, **overrides) -> "RunConfig":
        known = {f.name for f in fields(cls)}
        extra = set(data) - known
        if extra:
            raise ConfigError(f"unknown config keys: {sorted(extra)}")
        merged = {**data, **{k: v for k, v in overrides.items() if v is not None}}
        try:
            return cls(**merged)
        except TypeError as err:
            raise ConfigError(str(err)) from err


# ---------------------------------------------------------------- persistence

def load_schema() -> dict:
    text = resources.files(__package__).joinpath("schema/diagnostics.schema.json").read_text()
    return json.loads(text)


def _clean(obj):
    """JSON-safe copy: non-finite floats become null, numpy scalars become Python."""
    if isinstance(obj, dict):
        return {str(k): _clean(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_clean(v) for v in obj]
    if isinstance(obj, (np.floating, float)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, (np.integer,)):
        return int(obj)
    if isinstance(obj, np.bool_):
        return bool(obj)
    return obj


def write_json(path: Path, data: dict) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(json.dumps(_clean(data), indent=2, sort_keys=True, allow_nan=False) + "\n")


def validate_record(record: dict) -> None:
    jsonschema.validate(_clean(record), load_schema())


def write_columns(path: Path, columns, header: str = "") -> None:
    """Whitespace-separated columns with exact float repr (gnuplot reads '#' as comment)."""
    path.parent.mkdir(parents=True, exist_ok=True)
    cols = [np.asarray(c, dtype=float) for c in columns]
    with open(path, "w") as fh:
        if header:
            fh.write(f"# {header}\n")
        for row in zip(*cols):
            fh.write(" ".join(repr(float(v)) for v in row) + "\n")


def _wave_to_json(wave: Optional[PeriodicWave]):
    if wave is None:
        return None
    d = {f.name: getattr(wave, f.name) for f in fields(wave)}
    d["psi1"] = [float(v) for v in wave.psi1]
    d["psi2"] = [float(v) for v in wave.psi2]
    return d


def _wave_from_json(d) -> Optional[PeriodicWave]:
    if d is None:
        return None
    d = dict(d)
    d["psi1"] = np.array(d["psi1"], dtype=float)
    d["psi2"] = np.array(d["psi2"], dtype=float)
    return PeriodicWave(**d)


def write_profile_csv(path: Path, profile: TravelingProfile) -> None:
    """x, p1, p2 with a JSON header carrying c, mu, the box, and the exact ripple."""
    g = profile.grid
    head = {"c": profile.c, "mu": profile.mu, "half_length": g.half_length, "n_points": g.n_points,
            "ripple": _wave_to_json(profile.ripple)}
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w") as fh:
        fh.write("# " + json.dumps(_clean(head), sort_keys=True) + "\n")
        fh.write("x,p1,p2\n")
        for x, a, b in zip(g.x, profile.p1.values, profile.p2.values):
            fh.write(f"{float(x)!r},{float(a)!r},{float(b)!r}\n")


def read_profile_csv(path) -> TravelingProfile:
    lines = Path(path).read_text().splitlines()
    if not lines or not lines[0].startswith("#"):
        raise ConfigError(f"{path}: missing JSON header line")
    head = json.loads(lines[0][1:])
    grid = Grid(float(head["half_length"]), int(head["n_points"]))
    rows = np.array([[float(v) for v in ln.split(",")] for ln in lines[2:] if ln.strip()])
    if rows.shape != (grid.n_points, 3):
        raise ConfigError(f"{path}: expected {grid.n_points} rows of x,p1,p2")
    return TravelingProfile(GridFunction(grid, rows[:, 1]), GridFunction(grid, rows[:, 2]),
                            float(head["c"]), float(head["mu"]), _wave_from_json(head.get("ripple")))


# ---------------------------------------------------------------- stages

def _hyp(status: str, value=None, threshold=None, detail: str = "") -> dict:
    out = {"status": status, "value": value, "threshold": threshold}
    if detail:
        out["detail"] = detail
    return out


def stage_dispersion(cfg: RunConfig, run_dir: Path):
    p = cfg.params()
    cf = critical_frequency(p)
    out = {"status": "ok", "omega_c": cf.omega, "residual": cf.residual, "certificate": cf.certificate,
           "bracket": list(cf.bracket), "mu_threshold": mu_threshold(p.c),
           "sound_speed_squared": sound_speed_squared(p.mu)}
    if p.mu != 0.0:
        cm = critical_frequency_mu(p)
        out.update(omega_c_mu=cm.omega, residual_mu=cm.residual, upsilon=kernel_coefficient(p, cm.omega))
    out["bifurcation_denominator"] = bifurcation_denominator(p)
    return out, {"dispersion": p}


def stage_solitary(cfg: RunConfig, run_dir: Path):
    p = cfg.params(0.0)
    sol = solve_monatomic(p, cfg.grid(), tol=cfg.tol)
    path = run_dir / "solitary.csv"
    path.write_text(sol.profile.to_csv())
    out = {"status": "ok", "iterations": sol.iterations, "residual": sol.residual,
           "stabilizing_factor": sol.stabilizing_factor, "tail_rate": sol.tail_rate,
           "fitted_tail_rate": sol.fitted_tail_rate, "peak": float(np.max(sol.profile.values)),
           "half_length": sol.grid.half_length, "n_points": sol.grid.n_points,
           "hypothesis_mode": sol.hypothesis_mode, "artifacts": [path.name]}
    return out, {"solitary": sol}


def check_h1(sol: SolitaryWave) -> dict:
    ok = sol.residual <= H1_RESIDUAL and abs(sol.stabilizing_factor - 1.0) < 1e-8
    return _hyp("pass" if ok else "fail", sol.residual, H1_RESIDUAL)


def check_h2(p: WaveParameters, sol: SolitaryWave) -> dict:
    """Manufactured solve: H_c f = g with f = varsigma must return varsigma."""
    f0 = sol.profile
    try:
        f = solve_Hc(p.with_mu(0.0), f0, apply_Hc(p.with_mu(0.0), f0, f0))
    except KrylovFailure as err:
        return _hyp("fail", None, H2_ERROR, str(err))
    err = float(np.max(np.abs(f.values - f0.values)) / f0.sup())
    return _hyp("pass" if err <= H2_ERROR else "fail", err, H2_ERROR)


def stage_periodic(cfg: RunConfig, run_dir: Path):
    waves = []
    rows = []
    for mu in cfg.mu_list():
        p = cfg.params(mu)
        for a in cfg.a_values:
            w = solve_periodic(p, a)
            waves.append(w)
            rows.append({"mu": mu, "a": a, "omega": w.omega, "omega_critical": w.omega_critical,
                         "xi": w.xi, "upsilon": w.upsilon, "residual": w.residual,
                         "iterations": w.iterations, "psi_norm": w.psi_norm(),
                         "orthogonality": w.orthogonality})
    names = []
    for i, w in enumerate(waves):
        name = f"periodic_{i:02d}.csv"
        write_columns(run_dir / name, [np.arange(len(w.psi1)), w.psi1, w.psi2],
                      f"mu={w.mu!r} a={w.a!r} omega={w.omega!r}; columns k, cos-coeff psi1, sin-coeff psi2")
        names.append(name)
    worst = max(r["residual"] for r in rows)
    return {"status": "ok", "waves": rows, "max_residual": worst, "artifacts": names}, {"periodic": waves}


def stage_jost(cfg: RunConfig, run_dir: Path, sol: SolitaryWave):
    p = cfg.params(0.0)
    j = neumann_jost(p, sol)
    path = run_dir / "jost.csv"
    path.write_text(j.gamma.to_csv())
    chi = chi_c(p, sol, j.omega)
    iq = functional_iota(j, chi)
    panel = random_odd_panel(sol.grid, 10, cfg.seed)
    out = {"status": "ok", "theta": j.theta, "omega_c": j.omega, "q": j.q, "iterations": j.iterations,
           "contraction": j.contraction, "tail_misfit": j.tail_misfit,
           "adjoint_residual": jost_adjoint_residual(p, sol, j), "sin_margin": j.sin_margin,
           "iota_chi": iq, "iota_chi_closed_form": iota_chi_derived(p, j),
           "solvability_defect": solvability_defect(p, sol, j, panel),
           "theta_over_epsilon": j.theta / p.near_sonic_epsilon, "artifacts": [path.name]}
    return out, {"jost": j}


def check_h3(j) -> dict:
    return _hyp("pass" if j.contraction < 1.0 else "fail", j.contraction, 1.0)


def check_h4(j) -> dict:
    m = abs(j.sin_margin)
    return _hyp("pass" if m >= H4_MARGIN else "fail", j.sin_margin, H4_MARGIN)


def _solve_mu(cfg: RunConfig, sol: SolitaryWave, j, mu: float, sub: str):
    """Beale iteration at mu, halving on non-contraction; writes its own subdirectory."""
    run_dir = cfg.run_dir() / sub
    m = mu
    tried = []
    while True:
        p = cfg.params(m)
        try:
            res = beale_iterate(p, sol, j, tol=cfg.beale_tol)
            break
        except (BealeNonContraction, KrylovFailure) as err:
            tried.append({"mu": m, "error": str(err), "supersonic_margin": supersonic_margin(p)})
            m *= 0.5
            if abs(m) < 1e-7:
                raise BealeNonContraction(f"no contraction down to mu={m}") from err
    prof = assemble_profiles(res, sol)
    run_dir.mkdir(parents=True, exist_ok=True)
    (run_dir / "eta1.csv").write_text(res.eta1.to_csv())
    (run_dir / "eta2.csv").write_text(res.eta2.to_csv())
    r1, r2 = _ripple_p(res, sol)
    tp = TravelingProfile(prof["p1"].with_values(prof["p1"].values - res.a * r1),
                          prof["p2"].with_values(prof["p2"].values - res.a * r2),
                          res.c, res.mu, res.periodic if res.a != 0.0 else None)
    write_profile_csv(run_dir / "profile.csv", tp)
    summary = {"mu_requested": mu, "mu": m, "a": res.a, "iterations": res.iterations,
               "residual": res.residual, "eta_sup": res.eta_sup(), "size": res.size(),
               "solvability_multiplier": res.solvability_multiplier,
               "supersonic_margin": supersonic_margin(cfg.params(m)), "halvings": tried,
               "artifacts": [f"{sub}/eta1.csv", f"{sub}/eta2.csv", f"{sub}/profile.csv"]}
    return summary, res, tp


def _ripple_p(res, sol):
    """Unit-amplitude ripple in (p1, p2) form on the box, or zeros."""
    if res.periodic is None or res.a == 0.0:
        z = np.zeros(sol.grid.n_points)
        return z, z
    f1, f2 = res.periodic.components(res.periodic.omega * sol.grid.x)
    return f1 + f2, f1 - f2


def stage_micropteron(cfg: RunConfig, run_dir: Path, sol: SolitaryWave, j):
    mus = cfg.mu_list()
    subs = [f"mu_{i:02d}" for i in range(len(mus))]
    if cfg.workers > 1 and len(mus) > 1:
        with ProcessPoolExecutor(max_workers=cfg.workers) as ex:
            futs = [ex.submit(_solve_mu, cfg, sol, j, mu, s) for mu, s in zip(mus, subs)]
            results = [f.result() for f in futs]
    else:
        results = [_solve_mu(cfg, sol, j, mu, s) for mu, s in zip(mus, subs)]
    rows = [r[0] for r in results]
    out = {"status": "ok", "solutions": rows, "max_residual": max(r["residual"] for r in rows),
           "artifacts": [a for r in rows for a in r["artifacts"]]}
    return out, {"micropteron": [r[1] for r in results], "profiles": [r[2] for r in results]}


def stage_simulate(cfg: RunConfig, run_dir: Path, profile: TravelingProfile):
    try:
        state = init_from_profiles(profile, cfg.chain_length)
        rep = run_and_compare(state, profile, cfg.T, cfg.dt)
    except ValueError as err:
        raise ConfigError(str(err)) from err
    write_columns(run_dir / "simulate_timeseries.dat", [rep.times, rep.shift_errors, rep.energies - rep.energies[0]],
                  "t, sup |r - p(. - ct)|, H(t) - H(0)")
    out = {"status": "ok", "T": rep.T, "dt": rep.dt, "chain_length": len(state.r), "c": profile.c,
           "mu": profile.mu, "shift_error": rep.shift_error, "energy_drift": rep.energy_drift,
           "momentum_drift": rep.momentum_drift, "far_field_initial": rep.far_field_initial,
           "far_field_final": rep.far_field_final, "radiated_energy": rep.radiated_energy,
           "artifacts": ["simulate_timeseries.dat"]}
    return out, {"simulation": rep}


# ---------------------------------------------------------------- plot data

def emit_plot_data(artifacts: dict, out_dir: Path, n_samples: int = 2001) -> list:
    """gnuplot two-column files for whatever stages are present; returns written paths."""
    out_dir = Path(out_dir)
    written = []
    p = artifacts.get("dispersion")
    if p is not None:
        K = np.linspace(0.0, math.pi, n_samples)
        lm, lp = eigencurves(p.mu, K)
        cK = p.c**2 * K * K
        for name, y in (("dispersion_lambda_minus.dat", lm), ("dispersion_lambda_plus.dat", lp),
                        ("dispersion_c2K2.dat", cK)):
            write_columns(out_dir / name, [K, y])
            written.append(out_dir / name)
        ks = dispersion_intersections(p, K)
        write_columns(out_dir / "dispersion_intersections.dat", [ks, p.c**2 * ks**2])
        written.append(out_dir / "dispersion_intersections.dat")
    sol = artifacts.get("solitary")
    if sol is not None:
        write_columns(out_dir / "profile_solitary.dat", [sol.grid.x, sol.profile.values])
        written.append(out_dir / "profile_solitary.dat")
    sols = artifacts.get("micropteron") or []
    if sol is not None:
        for i, res in enumerate(sols):
            prof = assemble_profiles(res, sol)
            for comp in ("p1", "p2"):
                name = f"profile_micropteron_{i:02d}_{comp}.dat"
                write_columns(out_dir / name, [sol.grid.x, prof[comp].values])
                written.append(out_dir / name)
    if sols:
        mus = np.array([r.mu for r in sols])
        order = np.argsort(mus)
        j = artifacts.get("jost")
        cols = {"sweep_a.dat": [r.a for r in sols], "sweep_eta.dat": [r.eta_sup() for r in sols]}
        if j is not None:
            cols["sweep_theta.dat"] = [j.theta] * len(sols)
        for name, y in cols.items():
            write_columns(out_dir / name, [mus[order], np.asarray(y)[order]])
            written.append(out_dir / name)
    return written


def dispersion_intersections(p: WaveParameters, K: np.ndarray) -> np.ndarray:
    """Positive crossings of c^2 K^2 with lambda_plus located on the sampled curve."""
    h = p.c**2 * K * K - eigencurves(p.mu, K)[1]
    idx = np.nonzero((h[:-1] < 0) & (h[1:] >= 0) | (h[:-1] > 0) & (h[1:] <= 0))[0]
    idx = idx[K[idx + 1] > 0]
    return K[idx] - h[idx] * (K[idx + 1] - K[idx]) / (h[idx + 1] - h[idx])


# ---------------------------------------------------------------- orchestration

def _empty_record(cfg: RunConfig) -> dict:
    return {"format_version": FORMAT_VERSION, "kind": cfg.subcommand, "config": cfg.to_json(),
            "stages": {}, "hypotheses": {h: _hyp("skipped") for h in ("H1", "H2", "H3", "H4")}}


def run(cfg: RunConfig):
    """Execute the stages needed by ``cfg.subcommand``.

    Returns (record, artifacts).  On a stage failure the record (with the failed
    stage marked and earlier artifacts kept) is written before StageError is raised.
    """
    t0 = time.perf_counter()
    run_dir = cfg.run_dir()
    run_dir.mkdir(parents=True, exist_ok=True)
    write_json(run_dir / "config.json", cfg.to_json())
    record = _empty_record(cfg)
    art: dict = {}
    sub = cfg.subcommand
    wanted = {
        "dispersion": ("dispersion",),
        "solitary": ("solitary",),
        "periodic": ("periodic",),
        "jost": ("solitary", "jost"),
        "micropteron": ("solitary", "jost", "micropteron"),
        "simulate": ("simulate",),
        "pipeline": STAGES,
    }[sub]

    def finish():
        for st in STAGES:
            record["stages"].setdefault(st, {"status": "skipped"})
        if cfg.record_timing:
            record["wall_time"] = time.perf_counter() - t0
        validate_record(record)
        write_json(run_dir / "diagnostics.json", record)

    current = None
    try:
        for st in STAGES:
            if st not in wanted:
                continue
            current = st
            if st == "dispersion":
                out, a = stage_dispersion(cfg, run_dir)
            elif st == "solitary":
                out, a = stage_solitary(cfg, run_dir)
                record["hypotheses"]["H1"] = check_h1(a["solitary"])
                record["hypotheses"]["H2"] = check_h2(cfg.params(), a["solitary"])
            elif st == "periodic":
                out, a = stage_periodic(cfg, run_dir)
            elif st == "jost":
                out, a = stage_jost(cfg, run_dir, art["solitary"])
                record["hypotheses"]["H3"] = check_h3(a["jost"])
                record["hypotheses"]["H4"] = check_h4(a["jost"])
            elif st == "micropteron":
                out, a = stage_micropteron(cfg, run_dir, art["solitary"], art["jost"])
            else:
                if cfg.profiles is not None:
                    prof = read_profile_csv(cfg.profiles)
                elif art.get("profiles"):
                    prof = art["profiles"][0]
                else:
                    s = art["solitary"]
                    prof = TravelingProfile(s.profile, s.profile, s.c, 0.0)
                out, a = stage_simulate(cfg, run_dir, prof)
            record["stages"][st] = out
            art.update(a)
    except STAGE_ERRORS as err:
        record["stages"][current] = {"status": "failed", "error": f"{type(err).__name__}: {err}"}
        if isinstance(err, NeumannDivergence):
            record["hypotheses"]["H3"] = _hyp("fail", None, 1.0, str(err))
        finish()
        raise StageError(current, err) from err
    except ConfigError:
        raise
    except ValueError as err:
        record["stages"][current] = {"status": "failed", "error": f"{type(err).__name__}: {err}"}
        finish()
        raise StageError(current, err) from err
    files = emit_plot_data(art, run_dir)
    if files:
        record["stages"][current]["plot_files"] = sorted(f.name for f in files)
    finish()
    return record, art


def run_pipeline(cfg: RunConfig) -> dict:
    return run(cfg)[0]


def hypotheses_failed(record: dict) -> list:
    return [k for k, v in record["hypotheses"].items() if v["status"] == "fail"]


# ---------------------------------------------------------------- argument parsing

def _floats(text: str) -> tuple:
    try:
        return tuple(float(v) for v in text.split(",") if v.strip())
    except ValueError as err:
        raise argparse.ArgumentTypeError(str(err)) from err


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="fput-micropteron",
                                 description="Traveling waves of the diatomic FPUT lattice near the monatomic limit.")
    sp = ap.add_subparsers(dest="subcommand", required=True)
    for name in SUBCOMMANDS:
        p = sp.add_parser(name)
        p.add_argument("--config", help="JSON RunConfig file; flags override its values")
        speed = p.add_mutually_exclusive_group()
        speed.add_argument("--c", type=float)
        speed.add_argument("--epsilon", type=float)
        p.add_argument("--mu", type=float)
        p.add_argument("--mus", type=_floats, help="comma-separated mu sweep")
        p.add_argument("--a-values", dest="a_values", type=_floats)
        p.add_argument("--L", dest="half_length", type=float)
        p.add_argument("--N", dest="n_points", type=int)
        p.add_argument("--tol", type=float)
        p.add_argument("--beale-tol", dest="beale_tol", type=float)
        p.add_argument("--T", type=float)
        p.add_argument("--dt", type=float)
        p.add_argument("--M", dest="chain_length", type=int)
        p.add_argument("--profiles")
        p.add_argument("--out")
        p.add_argument("--name")
        p.add_argument("--seed", type=int)
        p.add_argument("--workers", type=int)
        p.add_argument("--timing", dest="record_timing", action="store_const", const=True)
    return ap


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    base = {}
    if ns.config:
        try:
            base = json.loads(Path(ns.config).read_text())
        except (OSError, json.JSONDecodeError) as err:
            raise ConfigError(f"cannot read config {ns.config}: {err}") from err
    base["subcommand"] = ns.subcommand
    flags = {k: v for k, v in vars(ns).items() if k not in ("config", "subcommand") and v is not None}
    if "c" in flags:
        base.pop("epsilon", None)
    if "epsilon" in flags:
        base.pop("c", None)
    return RunConfig.from_json(base, **flags)


def main(argv=None) -> int:
    ns = build_parser().parse_args(argv)
    try:
        cfg = config_from_args(ns)
        record, _ = run(cfg)
    except ConfigError as err:
        print(f"config error: {err}", file=sys.stderr)
        return EXIT_CONFIG
    except StageError as err:
        print(f"stage failure: {err}", file=sys.stderr)
        return EXIT_STAGE
    failed = hypotheses_failed(record)
    print(json.dumps(_clean({"run_dir": str(cfg.run_dir()), "stages": {k: v["status"] for k, v in record["stages"].items()},
                             "hypotheses": {k: v["status"] for k, v in record["hypotheses"].items()}}), sort_keys=True))
    if failed:
        print(f"hypothesis checks failed: {failed}", file=sys.stderr)
        return EXIT_HYPOTHESIS
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
