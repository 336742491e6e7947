"""End-to-end runs: eigencurves, the fixed-measure lower bound over a shape
zoo, and cross-path consistency. Each runner returns plain data; writing
files is a separate step so that tests can inspect results directly."""
from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import closed_form as cf
from .config import ExperimentConfig, ShapeSpec, default_zoo
from .eigen import (DENSE_MAX_CELLS, ConvergenceError, lambda_dirichlet,
                    lambda_dirichlet_dense)
from .grid import DomainMask, make_disk, shape_with_measure, write_mask
from .rearrangement import lp_norm, polya_szego_check, schwarz_rearrange
from .svg import line_chart
from .variational import (TWISTED, SpectralProfile, characterize, mu_direct,
                          nodal_diagnostics)

log = logging.getLogger(__name__)

EIGENCURVE_HEADER = ("domain_id", "alpha", "mu", "branch", "lambda_D", "lambda_T", "status")
VERIFY_HEADER = ("domain_id", "alpha", "mu", "envelope", "margin", "best_two_ball",
                 "equality_case", "status")

DENSE_VS_ITERATIVE_TOL = 1e-6
DIRECT_VS_CHARACTERIZATION_TOL = 1e-3
TWISTED_MEAN_TOL = 2e-2


def fmt(x) -> str:
    if isinstance(x, str):
        return x
    if x is None:
        return ""
    x = float(x)
    if math.isnan(x):
        return "nan"
    return format(x, ".12g")


def csv_text(header, rows) -> str:
    lines = [",".join(header)]
    for r in rows:
        lines.append(",".join(fmt(r[k]) for k in header))
    return "\n".join(lines) + "\n"


@dataclass
class ShapeRun:
    spec: ShapeSpec
    mask: DomainMask | None
    profile: SpectralProfile | None
    error: str = ""


def solve_shapes(config: ExperimentConfig, shapes=None, twisted: bool = True) -> list[ShapeRun]:
    """Build every configured shape and compute lambda_D and lambda_T once."""
    out = []
    for spec in shapes or config.shapes or default_zoo():
        try:
            mask = spec.build(config.h, config.measure)
        except ValueError as exc:
            out.append(ShapeRun(spec, None, None, f"error: {exc}"))
            continue
        try:
            prof = characterize(mask, config.tol, config.restarts, config.seed, twisted=twisted)
            log.info("%s: %d cells, lambda_D=%.6g lambda_T=%s", mask.id, mask.n_active,
                     prof.dirichlet.value, prof.twisted and f"{prof.twisted.value:.6g}")
            out.append(ShapeRun(spec, mask, prof))
        except ConvergenceError as exc:
            out.append(ShapeRun(spec, mask, None, f"error: {exc}"))
    return out


# --- eigencurves ----------------------------------------------------------

@dataclass
class EigencurveRun:
    rows: list
    envelope: list
    svg: str
    shapes: list = field(default_factory=list)

    @property
    def csv(self) -> str:
        return csv_text(EIGENCURVE_HEADER, self.rows)

    @property
    def failed(self) -> bool:
        return any(r["status"] != "ok" for r in self.rows)


def _row(domain_id, alpha, mu, branch, lam_D, lam_T, status="ok"):
    return dict(domain_id=domain_id, alpha=alpha, mu=mu, branch=branch,
                lambda_D=lam_D, lambda_T=lam_T, status=status)


def run_eigencurve(config: ExperimentConfig, shapes=None) -> EigencurveRun:
    runs = solve_shapes(config, shapes)
    alphas = config.alphas
    rows = []
    for run in runs:
        sid = run.spec.id or run.spec.kind
        for a in alphas:
            if run.profile is None:
                rows.append(_row(sid, a, math.nan, "", math.nan, math.nan, run.error))
                continue
            m = run.profile.mu(a)
            rows.append(_row(sid, a, m.value, m.branch, m.lambda_D,
                             run.profile.twisted.value if run.profile.twisted else math.nan))
    env = [cf.theorem_envelope(config.n, config.measure, a) for a in alphas]
    series = []
    for run in runs:
        sid = run.spec.id or run.spec.kind
        ys = [r["mu"] for r in rows if r["domain_id"] == sid]
        series.append((sid, alphas, ys))
    svg = line_chart(series, ("lower bound", alphas, [e.value for e in env]),
                     title=f"mu(Omega, alpha) at |Omega| = {config.measure:g}, h = {config.h:g}")
    return EigencurveRun(rows, env, svg, runs)


def fitted_slope(alphas, mus) -> float:
    """Least-squares slope of mu against alpha."""
    return float(np.polyfit(np.asarray(alphas, float), np.asarray(mus, float), 1)[0])


def empirical_kink(alphas, branches) -> float | None:
    """First sampled alpha on the twisted branch, or None."""
    for a, b in zip(alphas, branches):
        if b == TWISTED:
            return a
    return None


# --- fixed-measure lower bound --------------------------------------------

def best_ball_union_value(n: int, measure: float, alpha: float, count: int = 33,
                          lambda_T_ball: float | None = None) -> float:
    """Smallest mu over a grid of two-ball unions with the given total measure.

    Larger radius runs over ``count`` values from the half-measure radius to
    the full-measure radius. For unequal balls the twisted value is bounded
    by the mean of the two ball eigenvalues (one ball per nodal part), which
    is exact at the equal split; for the single ball ``lambda_T_ball`` is
    used when given and the linear branch otherwise.
    """
    r_half = cf.ball_radius_for_measure(n, measure / 2)
    r_full = cf.ball_radius_for_measure(n, measure)
    omega = cf.dimension_constants(n).omega_n
    best = math.inf
    for k in range(count):
        r1 = r_half + (r_full - r_half) * k / (count - 1)
        rest = max(measure / omega - r1 ** n, 0.0)
        r2 = min(rest ** (1.0 / n), r1) if k < count - 1 else 0.0
        if k == 0:
            r2 = r1
        spec = cf.BallUnionSpec(n, r1, r2)
        if spec.is_equal_pair:
            v = cf.mu_two_balls(spec, alpha)
        elif spec.is_single_ball:
            lt = lambda_T_ball if lambda_T_ball is not None else math.inf
            v = cf.mu_single_ball(n, r1, alpha, lt)
        else:
            lt = 0.5 * (cf.lambda_ball(n, r1) + cf.lambda_ball(n, r2))
            v = cf.mu_two_balls(spec, alpha, lt)
        best = min(best, v)
    return best


@dataclass
class VerifyRun:
    rows: list
    shapes: list

    @property
    def csv(self) -> str:
        return csv_text(VERIFY_HEADER, self.rows)

    @property
    def errored(self) -> bool:
        return any(r["status"].startswith("error") for r in self.rows)

    @property
    def passed(self) -> bool:
        return all(r["status"] == "ok" for r in self.rows)


def _equality_expected(spec: ShapeSpec, alpha: float, threshold: float) -> bool:
    if spec.kind == "disk":
        return alpha < threshold
    if spec.is_equal_two_disks:
        return alpha > threshold
    return False


def run_verify_theorem(config: ExperimentConfig, shapes=None) -> VerifyRun:
    """mu(shape, alpha) >= lower bound - slack for every shape and alpha,
    plus |margin| <= slack where the bound is attained (disk below the
    threshold, two equal disks above it)."""
    runs = solve_shapes(config, shapes)
    threshold = config.alpha_c_scaled
    rows = []
    for run in runs:
        sid = run.spec.id or run.spec.kind
        for a in config.alphas:
            env = cf.theorem_envelope(config.n, config.measure, a).value
            best = best_ball_union_value(config.n, config.measure, a, config.radius_grid)
            eq = _equality_expected(run.spec, a, threshold)
            if run.profile is None:
                rows.append(dict(domain_id=sid, alpha=a, mu=math.nan, envelope=env,
                                 margin=math.nan, best_two_ball=best,
                                 equality_case=int(eq), status=run.error))
                continue
            mu = run.profile.mu(a).value
            margin = (mu - env) / env
            ok = margin >= -config.slack and mu >= best * (1 - config.slack)
            if eq:
                ok = ok and abs(margin) <= config.slack
            rows.append(dict(domain_id=sid, alpha=a, mu=mu, envelope=env, margin=margin,
                             best_two_ball=best, equality_case=int(eq),
                             status="ok" if ok else "fail"))
    return VerifyRun(rows, runs)


# --- cross-path consistency -----------------------------------------------

@dataclass
class CrosscheckRun:
    entries: list
    passed: bool


def default_crosscheck_config() -> ExperimentConfig:
    return ExperimentConfig(
        shapes=(ShapeSpec("square"), ShapeSpec("disk"),
                ShapeSpec("two_disks", id="two_disks_equal", fraction=0.5)),
        h=1.0 / 21, measure=1.0)


def run_crosscheck(config: ExperimentConfig | None = None, shapes=None) -> CrosscheckRun:
    """Dense vs iterative lambda_D, characterization vs direct mu, and the
    nodal-part identities of twisted minimizers, on small masks."""
    config = config or default_crosscheck_config()
    entries = []
    passed = True
    for spec in shapes or config.shapes or default_crosscheck_config().shapes:
        mask = spec.build(config.h, config.measure)
        sid = mask.id
        if mask.n_active > DENSE_MAX_CELLS:
            entries.append(dict(domain_id=sid, check="size", value=mask.n_active,
                                threshold=DENSE_MAX_CELLS, ok=False))
            passed = False
            continue
        it = lambda_dirichlet(mask)
        de = lambda_dirichlet_dense(mask)
        rel = abs(it.value - de.value) / de.value
        ok = rel <= DENSE_VS_ITERATIVE_TOL
        passed &= ok
        entries.append(dict(domain_id=sid, check="dense_vs_iterative", value=rel,
                            threshold=DENSE_VS_ITERATIVE_TOL, ok=ok))
        prof = characterize(mask, config.tol, config.restarts, config.seed)
        for a in config.crosscheck_alphas:
            c = prof.mu(a)
            d = mu_direct(mask, a, config.tol, ground=prof.dirichlet)
            diff = abs(c.value - d.value)
            ok = diff <= max(1e-6, DIRECT_VS_CHARACTERIZATION_TOL * c.value)
            passed &= ok
            entries.append(dict(domain_id=sid, check=f"direct_vs_characterization@{a:g}",
                                value=diff / c.value, threshold=DIRECT_VS_CHARACTERIZATION_TOL,
                                ok=ok))
        rep = nodal_diagnostics(prof.twisted, mask, prof.dirichlet.value)
        if spec.is_equal_two_disks:
            ok = rep.mean_residual is not None and rep.mean_residual <= TWISTED_MEAN_TOL
            passed &= ok
        else:
            ok = None
        entries.append(dict(domain_id=sid, check="twisted_mean_formula",
                            value=rep.mean_residual, threshold=TWISTED_MEAN_TOL, ok=ok))
        entries.append(dict(domain_id=sid, check="twisted_mass_balance",
                            value=rep.mass_residual, threshold=1e-3, ok=None))
    return CrosscheckRun(entries, bool(passed))


# --- single-shot reports ----------------------------------------------------

def ball_values(n: int = 2, measure: float | None = None, radius: float | None = None,
                alpha: float = 0.0, grid_h: float | None = None) -> dict:
    """Closed-form quantities for the ball of the given measure (or radius)."""
    if (measure is None) == (radius is None):
        raise ValueError("give exactly one of measure and radius")
    if radius is None:
        radius = cf.ball_radius_for_measure(n, measure)
    measure = cf.BallUnionSpec(n, radius).measure
    env = cf.theorem_envelope(n, measure, alpha)
    out = dict(n=n, radius=radius, measure=measure, alpha=alpha,
               lambda_D=cf.lambda_ball(n, radius),
               alpha_c=cf.alpha_critical(n),
               alpha_threshold=cf.alpha_critical(n) / measure ** (2.0 / n),
               two_equal_balls=cf.two_equal_balls_value(n, measure),
               envelope=env.value, branch=env.branch)
    if grid_h is not None:
        if n != 2:
            raise ValueError("grid solves are two-dimensional")
        prof = characterize(make_disk(radius, grid_h))
        out.update(grid_h=grid_h, lambda_D_grid=prof.dirichlet.value,
                   lambda_T_grid=prof.twisted.value,
                   mu_ball=cf.mu_single_ball(2, radius, alpha, max(prof.twisted.value,
                                                                    out["lambda_D"])))
    return out


def rearrange_mask(mask: DomainMask, out_dir=None) -> dict:
    """Rearrange the ground state of ``mask`` and report norms and energies."""
    g = lambda_dirichlet(mask).eigenfunction
    pair = schwarz_rearrange(g)
    ps = polya_szego_check(g)
    out = dict(domain_id=mask.id, cells=mask.n_active, measure=mask.measure,
               energy_before=ps.energy_before, energy_after=ps.energy_after,
               ratio=ps.ratio, ps_violated=ps.violated,
               L1=(lp_norm(g, 1), lp_norm(pair.symmetrized, 1)),
               L2=(lp_norm(g, 2), lp_norm(pair.symmetrized, 2)),
               Linf=(lp_norm(g, math.inf), lp_norm(pair.symmetrized, math.inf)),
               faber_krahn=cf.faber_krahn_value(2, mask.measure))
    if out_dir is not None:
        path = Path(out_dir) / f"{mask.id or 'mask'}_sym.mask"
        path.parent.mkdir(parents=True, exist_ok=True)
        write_mask(pair.symmetrized.mask, path)
        out["written"] = str(path)
    return out


def write_outputs(out_dir, **files) -> list[str]:
    d = Path(out_dir)
    d.mkdir(parents=True, exist_ok=True)
    written = []
    for name, text in files.items():
        p = d / name.replace("__", ".")
        p.write_text(text)
        written.append(str(p))
    return written


__all__ = [
    "EIGENCURVE_HEADER", "VERIFY_HEADER", "ShapeRun", "EigencurveRun", "VerifyRun",
    "CrosscheckRun", "solve_shapes", "run_eigencurve", "run_verify_theorem",
    "run_crosscheck", "default_crosscheck_config", "best_ball_union_value", "ball_values",
    "rearrange_mask", "fitted_slope", "empirical_kink", "csv_text", "fmt", "write_outputs",
    "shape_with_measure",
]
