"""Smallest Dirichlet eigenvalue of the five-point Laplacian on a mask."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .grid import DomainMask, GridFunction

__all__ = [
    "SpectralResult",
    "ConvergenceError",
    "conjugate_gradient",
    "lambda_dirichlet",
    "lambda_dirichlet_dense",
    "lambda_dirichlet_auto",
    "second_eigenfunction",
    "DENSE_MAX_CELLS",
]

DENSE_MAX_CELLS = 2000


class ConvergenceError(RuntimeError):
    def __init__(self, message, **diagnostics):
        super().__init__(message)
        self.diagnostics = diagnostics


@dataclass(frozen=True)
class SpectralResult:
    value: float
    eigenfunction: GridFunction
    residual: float
    iterations: int
    method: str


def conjugate_gradient(A, b, x0=None, rtol=1e-10, maxiter=None):
    """Plain conjugate gradients for SPD ``A``; returns ``(x, iterations)``.

    Stops when ``||b - A x|| <= rtol * ||b||``.
    """
    x = np.zeros_like(b) if x0 is None else np.array(x0, dtype=float)
    r = b - A @ x
    bnorm = np.linalg.norm(b)
    if bnorm == 0.0:
        return np.zeros_like(b), 0
    target = (rtol * bnorm) ** 2
    rr = r @ r
    if rr <= target:
        return x, 0
    maxiter = maxiter or 10 * b.size
    p = r.copy()
    for k in range(1, maxiter + 1):
        Ap = A @ p
        step = rr / (p @ Ap)
        x += step * p
        r -= step * Ap
        rr_new = r @ r
        if rr_new <= target:
            return x, k
        p *= rr_new / rr
        p += r
        rr = rr_new
    raise ConvergenceError("conjugate gradients did not converge",
                           iterations=maxiter, residual=math.sqrt(rr) / bnorm)


def _normalize(mask: DomainMask, v: np.ndarray) -> np.ndarray:
    return v / (mask.h * np.linalg.norm(v))


def _positive(v: np.ndarray) -> np.ndarray:
    # Ground states have one sign per component; orient by the total.
    return -v if v.sum() < 0 else v


def lambda_dirichlet(mask: DomainMask, tol: float = 1e-10, max_iter: int = 10000,
                     start: np.ndarray | None = None) -> SpectralResult:
    """Inverse power iteration with a conjugate-gradient inner solve.

    Converged when the eigenvalue moves by at most ``tol * value`` and the
    residual ``||K u - value u|| / ||u||`` is at most ``sqrt(tol) * value``.
    The returned eigenfunction is nonnegative and has unit L^2 norm.
    """
    if mask.n_active == 0:
        raise ValueError("empty mask")
    K = mask.stiffness
    u = np.ones(mask.n_active) if start is None else np.array(start, dtype=float)
    u /= np.linalg.norm(u)
    Ku = K @ u
    lam = u @ Ku
    res_rel = 1.0
    for it in range(1, max_iter + 1):
        inner = min(1e-2, max(1e-13, 0.05 * res_rel))
        w, _ = conjugate_gradient(K, u, x0=u / lam, rtol=inner)
        u = w / np.linalg.norm(w)
        Ku = K @ u
        lam_new = u @ Ku
        res = np.linalg.norm(Ku - lam_new * u)
        res_rel = res / lam_new
        if abs(lam_new - lam) <= tol * lam_new and res_rel <= math.sqrt(tol):
            lam = lam_new
            break
        lam = lam_new
    else:
        raise ConvergenceError("inverse iteration did not converge", iterations=max_iter,
                               value=lam, residual=res)
    u = _positive(u)
    return SpectralResult(float(lam), GridFunction(mask, _normalize(mask, u)), float(res),
                          it, "inverse-iteration")


def lambda_dirichlet_dense(mask: DomainMask) -> SpectralResult:
    """Smallest eigenpair from a full symmetric eigendecomposition."""
    n = mask.n_active
    if n == 0:
        raise ValueError("empty mask")
    if n > DENSE_MAX_CELLS:
        raise ValueError(f"dense oracle is capped at {DENSE_MAX_CELLS} cells, mask has {n}")
    K = mask.stiffness.toarray()
    w, V = np.linalg.eigh(K)
    u = _positive(V[:, 0])
    res = np.linalg.norm(K @ u - w[0] * u)
    return SpectralResult(float(w[0]), GridFunction(mask, _normalize(mask, u)), float(res),
                          1, "dense-oracle")


def lambda_dirichlet_auto(mask: DomainMask, tol: float = 1e-10) -> SpectralResult:
    """Dense oracle on small masks, inverse iteration otherwise."""
    if mask.n_active <= DENSE_MAX_CELLS:
        return lambda_dirichlet_dense(mask)
    return lambda_dirichlet(mask, tol)


def second_eigenfunction(mask: DomainMask, ground: GridFunction, tol: float = 1e-8,
                         max_iter: int = 2000) -> tuple[float, GridFunction]:
    """Second Dirichlet eigenpair by inverse iteration deflated against ``ground``.

    For a degenerate ground state (two congruent components) this returns the
    other vector of the eigenspace. Starts from the horizontal coordinate.
    """
    g = ground.values / np.linalg.norm(ground.values)
    _, cols = mask.rows_cols
    v = cols - cols.mean() + 0.1 * (mask.rows_cols[0] - mask.rows_cols[0].mean())
    v = v.astype(float)
    v -= (g @ v) * g
    if np.linalg.norm(v) == 0:
        raise ValueError("mask too small for a second eigenfunction")
    v /= np.linalg.norm(v)
    K = mask.stiffness
    lam = v @ (K @ v)
    for _ in range(max_iter):
        w = mask.solve(v)
        w -= (g @ w) * g
        v = w / np.linalg.norm(w)
        lam_new = v @ (K @ v)
        if abs(lam_new - lam) <= tol * lam_new:
            lam = lam_new
            break
        lam = lam_new
    return float(lam), GridFunction(mask, _normalize(mask, v))
