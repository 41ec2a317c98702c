"""Sweep drivers that reproduce the error-versus-parameter studies as CSV tables.

Every experiment emits one row per grid point with the columns

    sweep_var, sigma2_optimal, sigma2_robust, [csl], [sql],
    delta_star_opt, delta_star_rob, r_pure_used,
    R_sq_opt, R_sq_rob, fp_iters_opt, fp_iters_rob, error

where csl/sql appear only for the resonant studies that plot them, and the
mc-validate experiment uses its own schema (empirical vs analytic moments).
Numeric cells are written with 17 significant digits and LF line endings;
failed grid points record their message in the error column and the run
continues.

Experiments
-----------
ou-delta     error vs uncertain parameter, mean-reverting noise, fixed mu
ou-mu        worst-case error vs uncertainty level, mean-reverting noise
res-delta    error vs uncertain parameter, resonant noise, with CSL and SQL
res-mu       worst-case error vs uncertainty level, resonant noise, CSL/SQL
res-zeta     worst-case error vs damping, per-point squeezing optimization
res-squeeze  worst-case error vs measured squeezing level at fixed loss
res-flux     worst-case error vs photon flux, per-point worst-robust squeezing
mc-validate  stochastic-simulation cross-check of the analytic pipeline
"""

from __future__ import annotations

import math
import warnings
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .analysis import evaluate_error, worst_case_error
from .errors import (
    ConfigError,
    FixedPointDiverged,
    NoAdmissibleSolution,
    NonUnimodalWarning,
    NotHurwitz,
    RpsmoothError,
)
from .limits import compute_csl, compute_sql
from .models import (
    SqueezingConfig,
    effective_squeezing,
    ou_process,
    resonant_process,
    squeezing_db,
    uncertainty_for,
)
from .montecarlo import SimConfig, simulate_tracking

__all__ = [
    "SweepSpec",
    "SweepTable",
    "run_sweep",
    "optimize_squeezing",
    "load_config",
    "DEFAULT_OU",
    "DEFAULT_RESONANT",
    "EXPERIMENTS",
]

DEFAULT_OU = {"lambda_": 5.9e4, "kappa": 1.9e4, "alpha_sq": 1e6, "r_m": 0.36, "r_p": 0.59}
DEFAULT_RESONANT = {"kappa": 9e4, "zeta": 0.1, "omega_r": 6.283e3, "alpha_sq": 25e4,
                    "r_m": 0.48, "r_p": 1.11}

# id -> (grid start, stop, count, extra defaults)
EXPERIMENTS = {
    "ou-delta": (-1.0, 1.0, 201, {"mu": 0.8}),
    "ou-mu": (0.0, 0.9, 19, {}),
    "res-delta": (-1.0, 1.0, 201, {"mu": 0.8}),
    "res-mu": (0.0, 0.9, 19, {}),
    "res-zeta": (0.05, 1.0, 20, {"mu": 0.8, "l_sq": 0.33}),
    "res-squeeze": (0.0, -20.0, 41, {"mu": 0.4, "l_sq": 0.0}),
    "res-flux": (4e4, 1e6, 20, {"mu": 0.4, "l_sq": 0.33}),
    "mc-validate": (0.0, 1.0, 2, {}),
}

BASE_COLUMNS = [
    "sweep_var", "sigma2_optimal", "sigma2_robust", "delta_star_opt", "delta_star_rob",
    "r_pure_used", "R_sq_opt", "R_sq_rob", "fp_iters_opt", "fp_iters_rob", "error",
]
MC_COLUMNS = [
    "kind", "mu", "delta", "seed", "dt", "T",
    "emp_sigma_f_sq", "stderr_f", "ana_sigma_f_sq",
    "emp_sigma_b_sq", "stderr_b", "ana_sigma_b_sq",
    "emp_sigma_sq", "stderr_s", "ana_sigma_sq", "error",
]


@dataclass(frozen=True)
class SweepSpec:
    """One experiment run: grid definition plus resolved fixed parameters."""

    experiment: str
    start: float
    stop: float
    count: int
    fixed: dict = field(default_factory=dict)
    out: str | None = None

    def __post_init__(self):
        if self.experiment not in EXPERIMENTS:
            raise ConfigError(f"unknown experiment {self.experiment!r}")
        if self.count < 3 and self.experiment != "mc-validate":
            raise ConfigError("grid count must be at least 3")
        if self.start == self.stop:
            raise ConfigError("grid must be strictly monotone")


@dataclass
class SweepTable:
    columns: list
    rows: list
    any_error: bool = False

    def write(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(",".join(self.columns) + "\n")
            for row in self.rows:
                fh.write(",".join(_fmt(row.get(c, "")) for c in self.columns) + "\n")


def _fmt(v) -> str:
    if isinstance(v, float):
        return f"{v:.17g}"
    return str(v)


def spec_for(experiment: str, overrides: dict | None = None) -> SweepSpec:
    """Build a SweepSpec from per-experiment defaults plus overrides."""
    start, stop, count, extra = EXPERIMENTS[experiment]
    fixed = {**extra, **(overrides or {})}
    count = int(fixed.pop("grid", count))
    out = fixed.pop("out", None)
    return SweepSpec(experiment=experiment, start=start, stop=stop, count=count,
                     fixed=fixed, out=out)


def _pmap(fn, items, threads: int):
    if threads <= 1:
        return [fn(x) for x in items]
    with ThreadPoolExecutor(max_workers=threads) as pool:
        return list(pool.map(fn, items))


def _squeezing_from(ctx: dict) -> SqueezingConfig:
    if ctx.get("r_pure") is not None:
        return SqueezingConfig.from_pure(ctx["alpha_sq"], ctx["r_pure"], ctx.get("l_sq", 0.0))
    return SqueezingConfig.from_effective(ctx["alpha_sq"], ctx["r_m"], ctx["r_p"])


def _nan_row(sweep_var: float, columns, message: str) -> dict:
    row = {c: float("nan") for c in columns}
    row["sweep_var"] = sweep_var
    row["fp_iters_opt"] = 0
    row["fp_iters_rob"] = 0
    row["error"] = message.replace(",", ";")
    return row


def run_sweep(spec: SweepSpec) -> SweepTable:
    """Run one experiment and return its table (also written to spec.out if set)."""
    runner = _RUNNERS[spec.experiment]
    table = runner(spec)
    if spec.out:
        table.write(spec.out)
    return table


# ---------------------------------------------------------------------------
# squeezing-level optimization


def optimize_squeezing(objective: str, model, unc, alpha_sq: float, l_sq: float,
                       combine: str = "scalar-first", obj_grid: int = 21,
                       r_lo: float = 0.0, r_hi: float = 3.0, tol: float = 1e-3) -> float:
    """Pure squeezing parameter minimizing the chosen error objective.

    objective="nominal-error" minimizes the matched smoother error for the
    exact model; objective="worst-robust" minimizes the robust smoother's
    worst-case error over the uncertainty interval. Squeezing levels whose
    design is infeasible (no admissible robust solution, or a diverging noise
    fixed point) count as infinitely bad. Golden-section search on
    [r_lo, r_hi]; if a coarse scan of the objective shows more than one
    descent region a NonUnimodalWarning is issued and a dense 61-point grid
    with local refinement is used instead.
    """
    if objective == "nominal-error":
        def raw(r):
            sq = SqueezingConfig.from_pure(alpha_sq, r, l_sq)
            return evaluate_error(model, unc, sq, "optimal", 0.0, combine=combine).sigma_sq
    elif objective == "worst-robust":
        def raw(r):
            sq = SqueezingConfig.from_pure(alpha_sq, r, l_sq)
            return worst_case_error(model, unc, sq, "robust", grid_size=obj_grid,
                                    combine=combine)[0]
    else:
        raise ValueError(f"unknown objective {objective!r}")

    def f(r):
        try:
            return raw(r)
        except (NoAdmissibleSolution, FixedPointDiverged, NotHurwitz):
            return math.inf

    scan_r = np.linspace(r_lo, r_hi, 13)
    scan_v = [f(r) for r in scan_r]
    if not any(math.isfinite(v) for v in scan_v):
        raise NoAdmissibleSolution("no feasible squeezing level in the search interval")
    minima = [i for i in range(1, len(scan_r) - 1)
              if scan_v[i] < scan_v[i - 1] and scan_v[i] < scan_v[i + 1]]
    if len(minima) > 1:
        warnings.warn("squeezing objective is not unimodal; falling back to a grid scan",
                      NonUnimodalWarning)
        grid = np.linspace(r_lo, r_hi, 61)
        vals = [f(r) for r in grid]
        i = int(np.argmin(vals))
        lo = grid[max(i - 1, 0)]
        hi = grid[min(i + 1, len(grid) - 1)]
    else:
        i = int(np.argmin(scan_v))
        lo = scan_r[max(i - 1, 0)]
        hi = scan_r[min(i + 1, len(scan_r) - 1)]
    return _golden_section(f, lo, hi, tol)


def _golden_section(f, lo: float, hi: float, tol: float) -> float:
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    c = b - invphi * (b - a)
    d = a + invphi * (b - a)
    fc, fd = f(c), f(d)
    while b - a > tol:
        if fc < fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = f(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = f(d)
    return 0.5 * (a + b)


# ---------------------------------------------------------------------------
# experiment runners


def _ctx(spec: SweepSpec, defaults: dict) -> dict:
    ctx = dict(defaults)
    ctx.update(spec.fixed)
    return ctx


def _point_columns(with_limits: bool):
    cols = list(BASE_COLUMNS)
    if with_limits:
        cols[3:3] = ["csl", "sql"]
    return cols


def _delta_sweep(spec: SweepSpec, defaults: dict, make_model, with_limits: bool) -> SweepTable:
    ctx = _ctx(spec, defaults)
    model = make_model(ctx)
    unc = uncertainty_for(model, ctx["mu"])
    sq = _squeezing_from(ctx)
    combine = ctx.get("combine", "scalar-first")
    columns = _point_columns(with_limits)
    deltas = np.linspace(spec.start, spec.stop, spec.count)

    def point(delta: float) -> dict:
        try:
            opt = evaluate_error(model, unc, sq, "optimal", delta, combine=combine)
            rob = evaluate_error(model, unc, sq, "robust", delta, combine=combine)
            row = {
                "sweep_var": float(delta),
                "sigma2_optimal": opt.sigma_sq,
                "sigma2_robust": rob.sigma_sq,
                "delta_star_opt": float(delta),
                "delta_star_rob": float(delta),
                "r_pure_used": _r_pure_of(ctx),
                "R_sq_opt": opt.R_sq_converged,
                "R_sq_rob": rob.R_sq_converged,
                "fp_iters_opt": opt.fixed_point_iters,
                "fp_iters_rob": rob.fixed_point_iters,
                "error": "",
            }
            if with_limits:
                row["csl"] = compute_csl(model, unc, ctx["alpha_sq"], delta)
                row["sql"] = compute_sql(model, unc, ctx["alpha_sq"], delta)
            return row
        except RpsmoothError as exc:
            return _nan_row(float(delta), columns, str(exc))

    rows = _pmap(point, deltas, int(ctx.get("threads", 1)))
    return SweepTable(columns, rows, any_error=any(r["error"] for r in rows))


def _worst_pair(model, unc, sq, combine: str, grid: int):
    """Worst-case reports for both estimators plus the argmax locations."""
    out = {}
    for kind in ("optimal", "robust"):
        sw, dstar = worst_case_error(model, unc, sq, kind, grid_size=grid, combine=combine)
        rep = evaluate_error(model, unc, sq, kind, dstar, combine=combine)
        out[kind] = (sw, dstar, rep)
    return out


def _mu_sweep(spec: SweepSpec, defaults: dict, make_model, with_limits: bool) -> SweepTable:
    ctx = _ctx(spec, defaults)
    model = make_model(ctx)
    sq = _squeezing_from(ctx)
    combine = ctx.get("combine", "scalar-first")
    wgrid = int(ctx.get("worst_grid", 41))
    columns = _point_columns(with_limits)
    mus = np.linspace(spec.start, spec.stop, spec.count)

    def point(mu: float) -> dict:
        try:
            unc = uncertainty_for(model, float(mu))
            pair = _worst_pair(model, unc, sq, combine, wgrid)
            (sw_o, d_o, rep_o), (sw_r, d_r, rep_r) = pair["optimal"], pair["robust"]
            row = {
                "sweep_var": float(mu),
                "sigma2_optimal": sw_o,
                "sigma2_robust": sw_r,
                "delta_star_opt": d_o,
                "delta_star_rob": d_r,
                "r_pure_used": _r_pure_of(ctx),
                "R_sq_opt": rep_o.R_sq_converged,
                "R_sq_rob": rep_r.R_sq_converged,
                "fp_iters_opt": rep_o.fixed_point_iters,
                "fp_iters_rob": rep_r.fixed_point_iters,
                "error": "",
            }
            if with_limits:
                ds = np.linspace(-1.0, 1.0, wgrid)
                row["csl"] = max(compute_csl(model, unc, ctx["alpha_sq"], d) for d in ds)
                row["sql"] = max(compute_sql(model, unc, ctx["alpha_sq"], d) for d in ds)
            return row
        except RpsmoothError as exc:
            return _nan_row(float(mu), columns, str(exc))

    rows = _pmap(point, mus, int(ctx.get("threads", 1)))
    return SweepTable(columns, rows, any_error=any(r["error"] for r in rows))


def _r_pure_of(ctx: dict) -> float:
    return float(ctx["r_pure"]) if ctx.get("r_pure") is not None else float("nan")


def _make_ou(ctx: dict):
    return ou_process(ctx["lambda_"], ctx["kappa"])


def _make_resonant(ctx: dict):
    return resonant_process(ctx["kappa"], ctx["zeta"], ctx["omega_r"])


def _run_ou_delta(spec: SweepSpec) -> SweepTable:
    return _delta_sweep(spec, DEFAULT_OU, _make_ou, with_limits=False)


def _run_ou_mu(spec: SweepSpec) -> SweepTable:
    return _mu_sweep(spec, DEFAULT_OU, _make_ou, with_limits=False)


def _run_res_delta(spec: SweepSpec) -> SweepTable:
    return _delta_sweep(spec, DEFAULT_RESONANT, _make_resonant, with_limits=True)


def _run_res_mu(spec: SweepSpec) -> SweepTable:
    return _mu_sweep(spec, DEFAULT_RESONANT, _make_resonant, with_limits=True)


def _run_res_zeta(spec: SweepSpec) -> SweepTable:
    ctx = _ctx(spec, DEFAULT_RESONANT)
    combine = ctx.get("combine", "scalar-first")
    wgrid = int(ctx.get("worst_grid", 41))
    columns = BASE_COLUMNS
    zetas = np.linspace(spec.start, spec.stop, spec.count)

    def point(zeta: float) -> dict:
        try:
            model = resonant_process(ctx["kappa"], float(zeta), ctx["omega_r"])
            unc = uncertainty_for(model, ctx["mu"])
            r_star = optimize_squeezing("nominal-error", model, unc, ctx["alpha_sq"],
                                        ctx["l_sq"], combine=combine)
            sq = SqueezingConfig.from_pure(ctx["alpha_sq"], r_star, ctx["l_sq"])
            pair = _worst_pair(model, unc, sq, combine, wgrid)
            (sw_o, d_o, rep_o), (sw_r, d_r, rep_r) = pair["optimal"], pair["robust"]
            return {
                "sweep_var": float(zeta),
                "sigma2_optimal": sw_o,
                "sigma2_robust": sw_r,
                "delta_star_opt": d_o,
                "delta_star_rob": d_r,
                "r_pure_used": r_star,
                "R_sq_opt": rep_o.R_sq_converged,
                "R_sq_rob": rep_r.R_sq_converged,
                "fp_iters_opt": rep_o.fixed_point_iters,
                "fp_iters_rob": rep_r.fixed_point_iters,
                "error": "",
            }
        except RpsmoothError as exc:
            return _nan_row(float(zeta), columns, str(exc))

    rows = _pmap(point, zetas, int(ctx.get("threads", 1)))
    return SweepTable(columns, rows, any_error=any(r["error"] for r in rows))


def _run_res_squeeze(spec: SweepSpec) -> SweepTable:
    ctx = _ctx(spec, DEFAULT_RESONANT)
    model = _make_resonant(ctx)
    unc = uncertainty_for(model, ctx["mu"])
    combine = ctx.get("combine", "scalar-first")
    wgrid = int(ctx.get("worst_grid", 41))
    l_sq = ctx["l_sq"]
    columns = _point_columns(with_limits=False)
    columns = columns[:3] + ["csl"] + columns[3:]
    # grid is the pure squeezing level in dB; the reported sweep_var is the
    # measured (post-loss) level, which saturates near 10*log10(l_sq)
    db_grid = np.linspace(spec.start, spec.stop, spec.count)
    csl_ds = np.linspace(-1.0, 1.0, wgrid)
    csl_worst = max(compute_csl(model, unc, ctx["alpha_sq"], d) for d in csl_ds)

    def point(db_pure: float) -> dict:
        r_pure = -db_pure * math.log(10.0) / 20.0
        try:
            r_m, _ = effective_squeezing(r_pure, l_sq)
            sq = SqueezingConfig.from_pure(ctx["alpha_sq"], r_pure, l_sq)
            pair = _worst_pair(model, unc, sq, combine, wgrid)
            (sw_o, d_o, rep_o), (sw_r, d_r, rep_r) = pair["optimal"], pair["robust"]
            return {
                "sweep_var": squeezing_db(r_m),
                "sigma2_optimal": sw_o,
                "sigma2_robust": sw_r,
                "csl": csl_worst,
                "delta_star_opt": d_o,
                "delta_star_rob": d_r,
                "r_pure_used": r_pure,
                "R_sq_opt": rep_o.R_sq_converged,
                "R_sq_rob": rep_r.R_sq_converged,
                "fp_iters_opt": rep_o.fixed_point_iters,
                "fp_iters_rob": rep_r.fixed_point_iters,
                "error": "",
            }
        except RpsmoothError as exc:
            row = _nan_row(float(db_pure), columns, str(exc))
            row["r_pure_used"] = r_pure
            return row

    rows = _pmap(point, db_grid, int(ctx.get("threads", 1)))
    return SweepTable(columns, rows, any_error=any(r["error"] for r in rows))


def _run_res_flux(spec: SweepSpec) -> SweepTable:
    ctx = _ctx(spec, DEFAULT_RESONANT)
    combine = ctx.get("combine", "scalar-first")
    wgrid = int(ctx.get("worst_grid", 41))
    columns = BASE_COLUMNS
    fluxes = np.geomspace(spec.start, spec.stop, spec.count)

    def point(flux: float) -> dict:
        try:
            model = _make_resonant(ctx)
            unc = uncertainty_for(model, ctx["mu"])
            r_star = optimize_squeezing("worst-robust", model, unc, float(flux),
                                        ctx["l_sq"], combine=combine, obj_grid=11)
            sq = SqueezingConfig.from_pure(float(flux), r_star, ctx["l_sq"])
            pair = _worst_pair(model, unc, sq, combine, wgrid)
            (sw_o, d_o, rep_o), (sw_r, d_r, rep_r) = pair["optimal"], pair["robust"]
            return {
                "sweep_var": float(flux),
                "sigma2_optimal": sw_o,
                "sigma2_robust": sw_r,
                "delta_star_opt": d_o,
                "delta_star_rob": d_r,
                "r_pure_used": r_star,
                "R_sq_opt": rep_o.R_sq_converged,
                "R_sq_rob": rep_r.R_sq_converged,
                "fp_iters_opt": rep_o.fixed_point_iters,
                "fp_iters_rob": rep_r.fixed_point_iters,
                "error": "",
            }
        except RpsmoothError as exc:
            return _nan_row(float(flux), columns, str(exc))

    rows = _pmap(point, fluxes, int(ctx.get("threads", 1)))
    return SweepTable(columns, rows, any_error=any(r["error"] for r in rows))


def _run_mc_validate(spec: SweepSpec) -> SweepTable:
    ctx = _ctx(spec, DEFAULT_OU)
    seed = int(ctx.get("seed", 20260809))
    dt = float(ctx.get("dt", 1e-8))
    horizon = float(ctx.get("T", 0.3))
    model = _make_ou(ctx)
    sq = _squeezing_from(ctx)
    points = [("optimal", 0.0, 0.0, seed), ("robust", 0.8, 1.0, seed + 1)]
    rows = []
    any_error = False
    for kind, mu, delta, pt_seed in points:
        unc = uncertainty_for(model, mu)
        row = {"kind": kind, "mu": mu, "delta": delta, "seed": pt_seed, "dt": dt,
               "T": horizon, "error": ""}
        try:
            ana = evaluate_error(model, unc, sq, kind, delta)
            cfg = SimConfig(dt=dt, T=horizon, seed=pt_seed, delta=delta, mu=mu, kind=kind)
            sim = simulate_tracking(model, unc, sq, cfg)
            row.update({
                "emp_sigma_f_sq": sim.emp_sigma_f_sq, "stderr_f": sim.stderr_f,
                "ana_sigma_f_sq": ana.sigma_f_sq,
                "emp_sigma_b_sq": sim.emp_sigma_b_sq, "stderr_b": sim.stderr_b,
                "ana_sigma_b_sq": ana.sigma_b_sq,
                "emp_sigma_sq": sim.emp_sigma_sq, "stderr_s": sim.stderr_s,
                "ana_sigma_sq": ana.sigma_sq,
            })
        except RpsmoothError as exc:
            any_error = True
            for c in MC_COLUMNS:
                row.setdefault(c, float("nan"))
            row["error"] = str(exc).replace(",", ";")
        rows.append(row)
    return SweepTable(MC_COLUMNS, rows, any_error=any_error)


_RUNNERS = {
    "ou-delta": _run_ou_delta,
    "ou-mu": _run_ou_mu,
    "res-delta": _run_res_delta,
    "res-mu": _run_res_mu,
    "res-zeta": _run_res_zeta,
    "res-squeeze": _run_res_squeeze,
    "res-flux": _run_res_flux,
    "mc-validate": _run_mc_validate,
}


# ---------------------------------------------------------------------------
# configuration file


CONFIG_KEYS = {
    "out": str, "mu": float, "grid": int, "combine": str, "loss": float,
    "seed": int, "threads": int, "lambda": float, "kappa": float, "zeta": float,
    "omega_r": float, "alpha_sq": float, "r_pure": float, "l_sq": float,
    "r_m": float, "r_p": float, "dt": float, "T": float, "worst_grid": int,
}


def load_config(path) -> dict:
    """Parse a flat key-value configuration file (``key = value`` per line).

    Blank lines and ``#`` comments are ignored. ``loss`` is an alias for
    ``l_sq`` and ``lambda`` maps to the model's relaxation rate.
    """
    out: dict = {}
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, raw in enumerate(fh, start=1):
            line = raw.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" in line:
                key, _, value = line.partition("=")
            else:
                parts = line.split(None, 1)
                if len(parts) != 2:
                    raise ConfigError(f"{path}:{lineno}: cannot parse {raw.strip()!r}")
                key, value = parts
            key = key.strip()
            value = value.strip()
            if key not in CONFIG_KEYS:
                raise ConfigError(f"{path}:{lineno}: unknown key {key!r}")
            try:
                parsed = CONFIG_KEYS[key](value)
            except ValueError as exc:
                raise ConfigError(f"{path}:{lineno}: bad value for {key}: {value!r}") from exc
            if key == "loss":
                key = "l_sq"
            if key == "lambda":
                key = "lambda_"
            if key == "combine" and parsed not in ("scalar-first", "matrix-first"):
                raise ConfigError(f"{path}:{lineno}: combine must be scalar-first or matrix-first")
            out[key] = parsed
    return out
