"""Slow, independent maximizers used to cross-check fitted models.

Both oracles work on the raw likelihood of squared amplitudes,

    L(c) = sum_j log( sum_i c_i^2 a_ij ),    ||c||^2 = r,  c_i >= 0,

where a_ij holds window i evaluated at sample j (optionally scaled by the
interval Jacobian so values are comparable with model log-likelihoods).
`grid_search` enumerates the nonnegative orthant of the sphere through
spherical angles; `projected_gradient` ascends L with renormalization back
to the sphere after every step. Neither shares any iteration machinery
with the fitting path, which is the point.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConvergenceError, FeasibilityError

GRID_DIMENSION_LIMIT = 4
GRADIENT_SAMPLE_LIMIT = 200

_CHUNK = 1 << 15


@dataclass(frozen=True)
class OracleResult:
    """Best sphere point found, its log-likelihood, and the search cost."""

    best_coefficients: np.ndarray
    best_loglik: float
    evaluations: int
    method: str


def _checked_matrix(a_matrix) -> np.ndarray:
    a = np.asarray(a_matrix, dtype=float)
    if a.ndim != 2:
        raise ValueError(f"a-matrix must be two-dimensional, got shape {a.shape}")
    if np.any(~np.isfinite(a)) or np.any(a < 0):
        raise ValueError("a-matrix entries must be finite and nonnegative")
    uncovered = ~(a > 0).any(axis=0)
    if np.any(uncovered):
        j = int(np.flatnonzero(uncovered)[0])
        raise FeasibilityError(
            f"sample column {j} has no positive window value; the instance "
            "is infeasible"
        )
    return a


def sphere_loglik(a_matrix, c) -> float:
    """Log-likelihood of squared amplitudes; -inf if any sample gets zero."""
    a = np.asarray(a_matrix, dtype=float)
    c = np.asarray(c, dtype=float)
    lj = (c * c) @ a
    with np.errstate(divide="ignore"):
        return float(np.log(lj).sum())


def sphere_loglik_grad(a_matrix, c) -> np.ndarray:
    """Analytic gradient dL/dc_k = 2 c_k sum_j a_kj / l_j."""
    a = np.asarray(a_matrix, dtype=float)
    c = np.asarray(c, dtype=float)
    lj = (c * c) @ a
    if np.any(~(lj > 0)):
        raise ValueError("gradient is undefined where a sample has zero density")
    return 2.0 * c * (a @ (1.0 / lj))


def _fd_gradient(a: np.ndarray, c: np.ndarray) -> np.ndarray:
    h = np.cbrt(np.finfo(float).eps) * np.maximum(np.abs(c), 1e-3)
    out = np.empty(c.size)
    for i in range(c.size):
        up = c.copy()
        dn = c.copy()
        up[i] += h[i]
        dn[i] -= h[i]
        out[i] = (sphere_loglik(a, up) - sphere_loglik(a, dn)) / (up[i] - dn[i])
    return out


def grid_search(a_matrix, r: float, resolution: int) -> OracleResult:
    """Exhaustive angular sweep of the nonnegative part of the sphere.

    The sweep covers resolution**(count-1) direction vectors, so it is
    refused outright above GRID_DIMENSION_LIMIT windows.
    """
    a = _checked_matrix(a_matrix)
    r = float(r)
    if not r > 0:
        raise ValueError(f"total mass r must be positive, got {r}")
    p = a.shape[0]
    if p > GRID_DIMENSION_LIMIT:
        raise ValueError(
            f"grid search over {p} windows would cost resolution**{p - 1} "
            f"evaluations; the guard allows at most {GRID_DIMENSION_LIMIT}"
        )
    if p == 1:
        c = np.array([math.sqrt(r)])
        return OracleResult(c, sphere_loglik(a, c), 1, "grid")
    if not isinstance(resolution, (int, np.integer)) or resolution < 2:
        raise ValueError(f"grid resolution must be an integer >= 2, got {resolution!r}")
    angles = np.linspace(0.0, math.pi / 2.0, resolution)
    mesh = np.meshgrid(*([angles] * (p - 1)), indexing="ij")
    thetas = np.stack([axis.ravel() for axis in mesh], axis=1)
    total = thetas.shape[0]
    dirs = np.empty((total, p))
    sin_running = np.ones(total)
    for d in range(p - 1):
        dirs[:, d] = sin_running * np.cos(thetas[:, d])
        sin_running = sin_running * np.sin(thetas[:, d])
    dirs[:, p - 1] = sin_running
    weights = r * dirs * dirs
    best_ll = -math.inf
    best_idx = 0
    for start in range(0, total, _CHUNK):
        block = weights[start : start + _CHUNK]
        lj = block @ a
        with np.errstate(divide="ignore"):
            lls = np.log(lj).sum(axis=1)
        local = int(np.argmax(lls))
        if lls[local] > best_ll:
            best_ll = float(lls[local])
            best_idx = start + local
    best_c = math.sqrt(r) * dirs[best_idx]
    return OracleResult(best_c, best_ll, total, "grid")


def ascend(
    a_matrix,
    r: float,
    start,
    grad_tol: float = 1e-10,
    max_steps: int = 50_000,
) -> tuple[np.ndarray, float, int]:
    """Projected-gradient ascent from one start.

    The step rule is adaptive: a trial step is kept if it raises the
    log-likelihood, or if it leaves the value unchanged to rounding while
    strictly shrinking the projected-gradient norm (which is what progress
    looks like once the value has saturated double precision). Otherwise
    the step is halved. The analytic gradient is verified against central
    finite differences at the start point before any ascent happens.
    """
    a = _checked_matrix(a_matrix)
    r = float(r)
    if not r > 0:
        raise ValueError(f"total mass r must be positive, got {r}")
    c = np.abs(np.asarray(start, dtype=float))
    if c.shape != (a.shape[0],):
        raise ValueError(f"start must have shape ({a.shape[0]},), got {c.shape}")
    norm = float(np.linalg.norm(c))
    if norm == 0:
        raise ValueError("start vector must be nonzero")
    c = c * (math.sqrt(r) / norm)

    evals = 0
    grad = sphere_loglik_grad(a, c)
    fd = _fd_gradient(a, c)
    evals += 2 * c.size
    rel = float(np.linalg.norm(fd - grad)) / max(float(np.linalg.norm(grad)), 1e-300)
    if rel > 1e-6:
        raise ValueError(
            f"analytic gradient disagrees with finite differences "
            f"(relative error {rel:.3e}) at the start point"
        )

    ll = sphere_loglik(a, c)
    evals += 1
    step = 1.0
    for _ in range(max_steps):
        gproj = grad - (float(grad @ c) / r) * c
        gnorm = float(np.linalg.norm(gproj))
        if gnorm <= grad_tol:
            return c, ll, evals
        while True:
            if step < 1e-20:
                raise ConvergenceError(
                    f"projected-gradient line search stalled with gradient "
                    f"norm {gnorm:.3e} > {grad_tol:.3e}"
                )
            y = np.abs(c + step * gproj)
            y *= math.sqrt(r) / float(np.linalg.norm(y))
            ll_y = sphere_loglik(a, y)
            evals += 1
            if ll_y > ll:
                c, ll = y, ll_y
                grad = sphere_loglik_grad(a, c)
                step *= 1.5
                break
            slack = 64.0 * np.finfo(float).eps * max(1.0, abs(ll))
            if ll_y >= ll - slack:
                grad_y = sphere_loglik_grad(a, y)
                gp_y = grad_y - (float(grad_y @ y) / r) * y
                if float(np.linalg.norm(gp_y)) < gnorm:
                    c, ll, grad = y, ll_y, grad_y
                    break
            step *= 0.5
    raise ConvergenceError(
        f"projected-gradient ascent did not reach gradient norm {grad_tol:.3e} "
        f"within {max_steps} steps"
    )


def projected_gradient(
    a_matrix,
    r: float,
    starts: int = 20,
    seed: int = 0,
    grad_tol: float = 1e-10,
    max_steps: int = 50_000,
) -> OracleResult:
    """Multi-start projected-gradient ascent; returns the best endpoint.

    Refused above GRADIENT_SAMPLE_LIMIT samples to keep the oracle cheap
    and honest about its intended scale.
    """
    a = _checked_matrix(a_matrix)
    if a.shape[1] > GRADIENT_SAMPLE_LIMIT:
        raise ValueError(
            f"projected-gradient oracle is limited to {GRADIENT_SAMPLE_LIMIT} "
            f"samples, got {a.shape[1]}"
        )
    if not isinstance(starts, (int, np.integer)) or starts < 1:
        raise ValueError(f"starts must be a positive integer, got {starts!r}")
    rng = np.random.default_rng(seed)
    best: tuple[np.ndarray, float] | None = None
    evals = 0
    for _ in range(starts):
        c0 = rng.random(a.shape[0]) + 1e-12
        c, ll, used = ascend(a, r, c0, grad_tol=grad_tol, max_steps=max_steps)
        evals += used
        if best is None or ll > best[1]:
            best = (c, ll)
    return OracleResult(best[0], best[1], evals, "projected-gradient")
