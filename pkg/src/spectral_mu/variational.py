"""Twisted eigenvalue lambda_T and the penalized minimum mu(Omega, alpha).

Internally a grid function is a plain vector ``u`` of active-cell values; the
h^2 quadrature weights cancel in every quotient, so

    F(u) = u.K u / u.u,   C(u) = sum |u| u / u.u,   Q(u, a) = F(u) + a |C(u)|.

All descents are preconditioned by K^{-1} (an H^1 gradient): with that
metric a unit step on the Rayleigh quotient is one inverse-iteration step,
which keeps the iteration count independent of the mesh width.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .eigen import (ConvergenceError, SpectralResult, lambda_dirichlet,
                    lambda_dirichlet_auto, second_eigenfunction)
from .grid import DomainMask, GridFunction, sign_split, l2_norm_sq

__all__ = [
    "TwistedResult",
    "MuResult",
    "NodalReport",
    "InfeasibleError",
    "SpectralProfile",
    "LINEAR",
    "TWISTED",
    "lambda_twisted",
    "mu_characterization",
    "mu_direct",
    "characterize",
    "nodal_diagnostics",
    "radial_spread",
    "balance",
]

LINEAR = "linear"
TWISTED = "twisted"

BALANCE_TOL = 1e-6
KINK_TOL = 1e-8
ARMIJO = 1e-4
MAX_HALVINGS = 30
MAX_STEP = 2.0


class InfeasibleError(ValueError):
    """No sign-changing function with balanced parts exists on the mask."""


@dataclass(frozen=True)
class TwistedResult:
    value: float
    minimizer: GridFunction
    balance_residual: float
    restarts_used: int
    start_values: tuple = ()
    iterations: int = 0


@dataclass(frozen=True)
class MuResult:
    value: float
    minimizer: GridFunction
    branch: str
    alpha: float
    lambda_D: float | None = None
    lambda_T: float | None = None
    method: str = "characterization"

    @property
    def balance_residual(self) -> float:
        return _balance_residual(self.minimizer.values)


def _balance_residual(v: np.ndarray) -> float:
    return abs(float(np.dot(np.abs(v), v))) / float(np.dot(v, v))


def _unit_l2(mask: DomainMask, v: np.ndarray) -> GridFunction:
    return GridFunction(mask, v / (mask.h * np.linalg.norm(v)))


def balance(v: np.ndarray) -> np.ndarray | None:
    """Rescale the parts of ``v`` to equal, unit total mass: a u+ - b u-.

    The supports are disjoint, so the result satisfies sum |u| u = 0 exactly
    (up to round-off). Returns None when one part is empty.
    """
    p = np.maximum(v, 0.0)
    m = np.maximum(-v, 0.0)
    a = np.linalg.norm(p)
    b = np.linalg.norm(m)
    if a == 0.0 or b == 0.0:
        return None
    return (p / a - m / b) / math.sqrt(2.0)


# --- starts ---------------------------------------------------------------

def _jacobi_smooth(mask: DomainMask, v: np.ndarray, sweeps: int = 5) -> np.ndarray:
    i, j, _ = mask.edges
    for _ in range(sweeps):
        s = np.zeros_like(v)
        np.add.at(s, i, v[j])
        np.add.at(s, j, v[i])
        v = v + (2.0 / 3.0) * (s / 4.0 - v)
    return v


def _half_split(mask: DomainMask, ground: np.ndarray) -> np.ndarray:
    # flip the sign of the ground state right of the column splitting its mass
    _, cols = mask.rows_cols
    mass = np.bincount(cols, weights=ground ** 2, minlength=mask.width)
    cut = int(np.searchsorted(np.cumsum(mass), 0.5 * mass.sum()))
    return np.where(cols <= cut, ground, -ground)


def _component_split(mask: DomainMask, tol: float) -> np.ndarray | None:
    labels, k = mask.components
    if k < 2:
        return None
    sizes = np.bincount(labels)
    a, b = np.argsort(sizes)[::-1][:2]
    v = np.zeros(mask.n_active)
    for c, s in ((a, 1.0), (b, -1.0)):
        part = mask.submask(labels == c)
        g = lambda_dirichlet_auto(part, tol).eigenfunction
        v[labels == c] = s * g.values
    return v


def _starts(mask: DomainMask, ground: SpectralResult, restarts: int, seed: int, tol: float):
    g = ground.eigenfunction.values
    starts = []
    try:
        starts.append(("second-eigenfunction", second_eigenfunction(mask, ground.eigenfunction)[1].values))
    except ValueError:
        pass
    starts.append(("half-split", _half_split(mask, g)))
    comp = _component_split(mask, tol)
    if comp is not None:
        starts.append(("component-split", comp))
    rng = np.random.default_rng(seed)
    for _ in range(max(0, restarts - 2)):
        starts.append(("random", _jacobi_smooth(mask, rng.choice([-1.0, 1.0], mask.n_active))))
    return starts


# --- descent engine -------------------------------------------------------

@dataclass
class _Descent:
    value: float
    u: np.ndarray
    iterations: int
    converged: bool


def _evaluate(K, v: np.ndarray, alpha: float):
    nn = v @ v
    F = (v @ (K @ v)) / nn
    C = (np.abs(v) @ v) / nn
    return F + alpha * abs(C), F, C


def _descend(mask: DomainMask, u0: np.ndarray, alpha: float, constrained: bool,
             tol: float, max_iter: int) -> _Descent:
    """Preconditioned nonlinear-CG descent on Q(., alpha).

    ``constrained=True`` keeps every iterate on the balanced manifold
    (lambda_T). Otherwise the iterate may sit on either side of the kink
    C = 0 or on it; on the kink the minimum-norm subgradient decides
    whether to slide along the manifold or to leave it.
    """
    K = mask.stiffness
    solve = mask.solve
    u = u0 / np.linalg.norm(u0)
    Q, F, C = _evaluate(K, u, alpha)
    t = 0.5
    d_prev = g_prev = G_prev = None
    prev_mode = None
    increases = 0
    for it in range(1, max_iter + 1):
        Ku = K @ u
        Pu = solve(u)
        n = np.abs(u)
        w = solve(n)
        gF = 2.0 * (u - F * Pu)
        GF = 2.0 * (Ku - F * u)
        on_kink = constrained or abs(C) < KINK_TOL
        if on_kink:
            nw = n @ w
            tau = n @ gF
            if constrained or (alpha > 0 and abs(tau) < 2.0 * alpha * nw):
                mode = "slide"
                g = gF - (tau / nw) * w
                G = GF - (tau / nw) * n
            else:
                mode = "leave"
                s = -1.0 if tau > 0 else 1.0
                g = gF + 2.0 * alpha * s * w
                G = GF + 2.0 * alpha * s * n
        else:
            mode = "smooth"
            s = 1.0 if C > 0 else -1.0
            g = gF + 2.0 * alpha * s * (w - C * Pu)
            G = GF + 2.0 * alpha * s * (n - C * u)
        d = -g
        if d_prev is not None and mode == prev_mode and mode != "leave":
            beta = max(0.0, (G @ (g - g_prev)) / (G_prev @ g_prev))
            dt = d_prev
            if mode == "slide":
                dt = dt - ((n @ dt) / nw) * w
            trial = d + beta * dt
            if G @ trial < 0:
                d = trial
        slope = G @ d
        if slope >= 0:
            return _Descent(Q, u, it, True)
        t = min(2.0 * t, MAX_STEP)
        accepted = False
        for _ in range(MAX_HALVINGS):
            x = u + t * d
            cands = []
            if mode == "slide":
                cands.append(balance(x))
            else:
                cands.append(x / np.linalg.norm(x))
                if not constrained and (np.abs(x) @ x) * C < 0:
                    # the step crossed the kink: also try landing on it
                    cands.append(balance(x))
            best = None
            for c in cands:
                if c is None:
                    continue
                Qc, Fc, Cc = _evaluate(K, c, alpha)
                if best is None or Qc < best[0]:
                    best = (Qc, Fc, Cc, c)
            if best is not None and best[0] <= Q + ARMIJO * t * slope:
                accepted = True
                break
            t *= 0.5
        if not accepted:
            return _Descent(Q, u, it, True)
        Qn, F, C, u = best
        if mode != "slide" and abs(C) < KINK_TOL:
            b = balance(u)
            if b is not None:
                u = b
                Qn, F, C = _evaluate(K, u, alpha)
        increases = increases + 1 if Qn > Q else 0
        if increases >= 50:
            raise ConvergenceError("quotient increased for 50 consecutive steps", iterations=it)
        decrease = Q - Qn
        Q = Qn
        d_prev, g_prev, G_prev, prev_mode = d, g, G, mode
        if decrease <= tol * abs(Q) + 1e-300:
            return _Descent(Q, u, it, True)
    return _Descent(Q, u, max_iter, False)


# --- public solvers -------------------------------------------------------

def lambda_twisted(mask: DomainMask, tol: float = 1e-8, restarts: int = 4, seed: int = 0,
                   max_iter: int = 2000, ground: SpectralResult | None = None) -> TwistedResult:
    """Minimum of the Rayleigh quotient under the balance constraint sum |u| u = 0.

    Projected descent from several starts (second Dirichlet eigenfunction,
    half split of the ground state, opposite-signed component ground states
    on disconnected masks, and ``restarts - 2`` smoothed random sign
    patterns); the smallest converged value is returned.
    """
    if restarts < 1:
        raise ValueError("need at least one restart")
    if mask.n_active < 2:
        raise InfeasibleError("a balanced sign-changing function needs two cells")
    ground = ground or lambda_dirichlet(mask)
    best = None
    values = []
    used = 0
    total_iter = 0
    for name, v0 in _starts(mask, ground, restarts, seed, 1e-10):
        if balance(v0) is None:
            continue
        used += 1
        run = _descend(mask, balance(v0), 0.0, True, tol, max_iter)
        total_iter += run.iterations
        values.append((name, run.value, run.converged))
        if run.converged and (best is None or run.value < best.value):
            best = run
    if best is None:
        raise ConvergenceError("no restart of the twisted descent converged", starts=values)
    u = best.u
    if np.abs(u) @ u < 0:
        u = -u
    return TwistedResult(float(best.value), _unit_l2(mask, u), _balance_residual(u), used,
                         tuple(values), total_iter)


@dataclass
class SpectralProfile:
    """lambda_D and lambda_T of one mask; mu(alpha) then costs nothing."""

    mask: DomainMask
    dirichlet: SpectralResult
    twisted: TwistedResult | None = None
    tol: float = 1e-8
    restarts: int = 4
    seed: int = 0

    def ensure_twisted(self) -> TwistedResult:
        if self.twisted is None:
            self.twisted = lambda_twisted(self.mask, self.tol, self.restarts, self.seed,
                                          ground=self.dirichlet)
        return self.twisted

    @property
    def gap(self) -> float:
        """Kink location lambda_T - lambda_D of the eigencurve, floored at 0
        (on equal components the two agree only up to round-off)."""
        return max(0.0, self.ensure_twisted().value - self.dirichlet.value)

    def mu(self, alpha: float) -> MuResult:
        lam = self.dirichlet.value
        if alpha <= 0:
            lam_T = self.twisted.value if self.twisted is not None else None
            return MuResult(lam + alpha, self.dirichlet.eigenfunction, LINEAR, alpha, lam, lam_T)
        tw = self.ensure_twisted()
        if lam + alpha <= tw.value:
            return MuResult(lam + alpha, self.dirichlet.eigenfunction, LINEAR, alpha, lam, tw.value)
        return MuResult(tw.value, tw.minimizer, TWISTED, alpha, lam, tw.value)


def characterize(mask: DomainMask, tol: float = 1e-8, restarts: int = 4, seed: int = 0,
                 twisted: bool = True) -> SpectralProfile:
    prof = SpectralProfile(mask, lambda_dirichlet(mask), None, tol, restarts, seed)
    if twisted:
        prof.ensure_twisted()
    return prof


def mu_characterization(mask: DomainMask, alpha: float, tol: float = 1e-8,
                        restarts: int = 4, seed: int = 0,
                        profile: SpectralProfile | None = None) -> MuResult:
    """mu = min(lambda_D + alpha, lambda_T), or lambda_D + alpha for alpha <= 0."""
    profile = profile or characterize(mask, tol, restarts, seed, twisted=alpha > 0)
    return profile.mu(alpha)


def mu_direct(mask: DomainMask, alpha: float, tol: float = 1e-8, max_iter: int = 5000,
              ground: SpectralResult | None = None) -> MuResult:
    """Minimize Q(., alpha) itself, without using the min formula.

    Descents from the positive ground state and, for alpha > 0, from each
    balanced deterministic start (second eigenfunction, half split,
    component split). The smallest quotient wins; the branch is read off
    the minimizer's balance residual.
    """
    if alpha < 0:
        raise ValueError("the direct path is restricted to alpha >= 0")
    ground = ground or lambda_dirichlet(mask)
    runs = [_descend(mask, ground.eigenfunction.values, alpha, False, tol, max_iter)]
    if mask.n_active >= 2 and alpha > 0:
        # deterministic starts only; a start vanishing on a component can
        # never populate it, hence the component split on disconnected masks
        for _, v0 in _starts(mask, ground, 2, 0, 1e-10):
            b = balance(v0)
            if b is not None:
                runs.append(_descend(mask, b, alpha, False, tol, max_iter))
    done = [r for r in runs if r.converged]
    if not done:
        raise ConvergenceError("direct descent did not converge", alpha=alpha)
    best = min(done, key=lambda r: r.value)
    u = best.u
    if np.abs(u) @ u < 0:
        u = -u
    branch = TWISTED if _balance_residual(u) <= BALANCE_TOL else LINEAR
    return MuResult(float(best.value), _unit_l2(mask, u), branch, alpha, ground.value, None, "direct")


# --- diagnostics ----------------------------------------------------------

@dataclass
class NodalReport:
    lambda_plus: float | None
    lambda_minus: float | None
    mass_plus: float
    mass_minus: float
    value: float
    lambda_D: float | None = None
    mean_residual: float | None = None
    mass_residual: float | None = None
    equality_residual: float | None = None
    alpha_reconstructed: float | None = None
    minus_empty: bool = False
    notes: list = field(default_factory=list)


def nodal_diagnostics(result, mask: DomainMask | None = None,
                      lambda_D: float | None = None) -> NodalReport:
    """Dirichlet eigenvalues of the nodal parts of a minimizer and the
    identities they satisfy.

    ``mean_residual`` compares (lambda(O+) + lambda(O-)) / 2 with the value,
    ``mass_residual`` the L^2 masses of the parts, ``equality_residual``
    lambda(O+) with lambda_D(mask); entries that do not apply stay None.
    """
    u = result.minimizer
    mask = mask or u.mask
    plus, minus, om_p, om_m = sign_split(u)
    lam_p = lambda_dirichlet_auto(om_p).value if om_p.n_active else None
    lam_m = lambda_dirichlet_auto(om_m).value if om_m.n_active else None
    mp, mm = l2_norm_sq(plus), l2_norm_sq(minus)
    if lambda_D is None:
        lambda_D = getattr(result, "lambda_D", None)
    rep = NodalReport(lam_p, lam_m, mp, mm, result.value, lambda_D)
    rep.minus_empty = om_m.n_active == 0
    twisted = isinstance(result, TwistedResult) or getattr(result, "branch", None) == TWISTED
    if lam_p is not None and lam_m is not None:
        rep.alpha_reconstructed = 0.5 * (lam_m - lam_p)
        rep.mean_residual = abs(0.5 * (lam_p + lam_m) - result.value) / result.value
    else:
        rep.notes.append("one nodal part is empty: mean formula not applicable")
    if twisted:
        rep.mass_residual = abs(mp - mm) / (mp + mm)
    elif lam_p is not None and lambda_D is not None:
        rep.equality_residual = abs(lam_p - lambda_D) / lambda_D
    return rep


def radial_spread(u: GridFunction) -> float:
    """Largest within-annulus spread of |u| (annuli one cell wide, centred on
    each component's centroid), relative to max |u|."""
    mask = u.mask
    labels, k = mask.components
    rows, cols = mask.rows_cols
    a = np.abs(u.values)
    top = a.max()
    worst = 0.0
    for c in range(k):
        sel = labels == c
        r0, c0 = rows[sel].mean(), cols[sel].mean()
        ring = np.floor(np.hypot(rows[sel] - r0, cols[sel] - c0)).astype(int)
        vals = a[sel]
        hi = np.full(ring.max() + 1, -np.inf)
        lo = np.full(ring.max() + 1, np.inf)
        np.maximum.at(hi, ring, vals)
        np.minimum.at(lo, ring, vals)
        worst = max(worst, float(np.max(hi - lo)))
    return worst / top if top > 0 else 0.0
