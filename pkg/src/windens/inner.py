"""Coordinate solver for the sample-coupling quadratic system.

Given the Gram matrix D, the solver finds the positive vector alpha with

    alpha_k * sum_j D_kj alpha_j = 1    for every k.

Each pass picks the coordinate with the largest absolute residual and
solves its scalar quadratic exactly, which keeps alpha positive and makes
the total absolute residual strictly decrease. Residuals are maintained
incrementally (delta_E_i = delta_alpha_k * D_ik * alpha_i for i != k, the
touched coordinate recomputed exactly) with a full recomputation every m
updates to flush floating-point drift.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .design import DesignMatrix, GramMatrix
from .errors import ConvergenceError

try:
    from numba import njit as _njit
except ImportError:
    _njit = None


def default_delta(m: int) -> float:
    """Stopping tolerance on the total absolute residual."""
    return 1e-10 * m

def default_update_cap(m: int) -> int:
    """Hard cap on coordinate updates before giving up."""
    return 200 * m * m


@dataclass
class AlphaState:
    """Solver state: current alpha, its residuals, and the descent trace."""

    alpha: np.ndarray
    residuals: np.ndarray
    total_error: float
    sweeps: int
    trace: list[float] = field(default_factory=list)
    min_alpha: float = math.inf


def residuals(gram: GramMatrix, alpha: np.ndarray) -> tuple[np.ndarray, float]:
    """Residual vector E_i = alpha_i (D alpha)_i - 1 and its 1-norm."""
    e = alpha * (gram.matrix @ alpha) - 1.0
    return e, float(np.abs(e).sum())


def init_alpha(gram: GramMatrix) -> AlphaState:
    """Uniform starting point alpha_k = sqrt(1 / (dbar * m))."""
    a0 = np.full(gram.m, math.sqrt(1.0 / (gram.dbar * gram.m)))
    e, tot = residuals(gram, a0)
    return AlphaState(
        alpha=a0,
        residuals=e,
        total_error=tot,
        sweeps=0,
        trace=[tot],
        min_alpha=float(a0[0]),
    )


def coordinate_update(gram: GramMatrix, alpha: np.ndarray, k: int) -> float:
    """Positive root of the coordinate-k quadratic with the others frozen.

    The root (-s + sqrt(s^2 + 4 D_kk)) / (2 D_kk) is evaluated in the
    rationalized form 2 / (s + sqrt(s^2 + 4 D_kk)), which loses no digits
    when s dominates.
    """
    if k < 0 or k >= gram.m:
        raise ValueError(f"coordinate index {k} out of range for m={gram.m}")
    row = gram.matrix[k]
    s = float(row @ alpha - row[k] * alpha[k])
    return 2.0 / (s + math.sqrt(s * s + 4.0 * row[k]))


def _update_chunk(d, alpha, res, sweeps, delta, max_updates, trace_out):
    """Run coordinate updates until done, capped, or the chunk fills up.

    Mutates alpha and res in place; returns (used, total_error, sweeps,
    min_alpha_seen). Kept in plain loops so numba can compile it; the
    numpy fallback below mirrors it operation for operation.
    """
    m = alpha.size
    used = 0
    min_alpha = math.inf
    tot = 0.0
    for i in range(m):
        tot += abs(res[i])
    while tot > delta and sweeps < max_updates and used < trace_out.size:
        k = 0
        best = -1.0
        for i in range(m):
            mag = abs(res[i])
            if mag > best:
                best = mag
                k = i
        row = d[k]
        s = 0.0
        for i in range(m):
            s += row[i] * alpha[i]
        s -= row[k] * alpha[k]
        new = 2.0 / (s + math.sqrt(s * s + 4.0 * row[k]))
        step = new - alpha[k]
        alpha[k] = new
        if new < min_alpha:
            min_alpha = new
        sweeps += 1
        if sweeps % m == 0:
            for i in range(m):
                acc = 0.0
                for j in range(m):
                    acc += d[i, j] * alpha[j]
                res[i] = alpha[i] * acc - 1.0
        else:
            for i in range(m):
                res[i] += step * row[i] * alpha[i]
            acc = 0.0
            for i in range(m):
                acc += row[i] * alpha[i]
            res[k] = new * acc - 1.0
        tot = 0.0
        for i in range(m):
            tot += abs(res[i])
        trace_out[used] = tot
        used += 1
    return used, tot, sweeps, min_alpha


if _njit is not None:
    _update_chunk = _njit(cache=True)(_update_chunk)

_CHUNK = 8192


def solve(
    gram: GramMatrix,
    delta: float | None = None,
    max_updates: int | None = None,
    alpha0: np.ndarray | None = None,
) -> AlphaState:
    """Drive the total absolute residual below delta.

    Parameters
    ----------
    gram:
        Gram matrix of a feasible instance.
    delta:
        Stopping tolerance on the residual 1-norm; defaults to 1e-10 * m.
    max_updates:
        Cap on coordinate updates; defaults to 200 * m**2.
    alpha0:
        Optional positive starting vector replacing the uniform default.

    Raises
    ------
    ConvergenceError
        If the cap is hit first. The partial state rides on the exception.
    """
    m = gram.m
    if delta is None:
        delta = default_delta(m)
    if not delta > 0:
        raise ValueError(f"delta must be positive, got {delta}")
    if max_updates is None:
        max_updates = default_update_cap(m)
    if alpha0 is None:
        state = init_alpha(gram)
    else:
        a0 = np.array(alpha0, dtype=float)
        if a0.shape != (m,):
            raise ValueError(f"alpha0 must have shape ({m},), got {a0.shape}")
        if np.any(~np.isfinite(a0)) or np.any(a0 <= 0):
            raise ValueError("alpha0 must be strictly positive and finite")
        e, tot = residuals(gram, a0)
        state = AlphaState(
            alpha=a0,
            residuals=e,
            total_error=tot,
            sweeps=0,
            trace=[tot],
            min_alpha=float(a0.min()),
        )

    d = np.ascontiguousarray(gram.matrix)
    alpha = state.alpha
    res = state.residuals
    tot = state.total_error
    buffer = np.empty(_CHUNK)
    while tot > delta:
        if state.sweeps >= max_updates:
            state.residuals = res
            state.total_error = tot
            raise ConvergenceError(
                f"coordinate solver hit the cap of {max_updates} updates "
                f"with total residual {tot:.3e} > {delta:.3e}",
                state=state,
            )
        used, tot, sweeps, low = _update_chunk(
            d, alpha, res, state.sweeps, delta, max_updates, buffer
        )
        state.sweeps = int(sweeps)
        state.trace.extend(buffer[:used].tolist())
        if low < state.min_alpha:
            state.min_alpha = float(low)
        tot = float(tot)
    state.residuals = res
    state.total_error = tot
    return state


def recover_u(design: DesignMatrix, alpha: np.ndarray, r: float) -> np.ndarray:
    """Window amplitudes u = (r/m) sum_j alpha_j b_j for a solved alpha.

    The identity u.u = r + (r/m) sum_k E_k ties the sphere defect to the
    residuals, so an alpha that was never converged is rejected here.
    """
    r = float(r)
    if not r > 0:
        raise ValueError(f"total mass r must be positive, got {r}")
    b = design.entries
    m = design.sample_count
    alpha = np.asarray(alpha, dtype=float)
    if alpha.shape != (m,):
        raise ValueError(f"alpha must have shape ({m},), got {alpha.shape}")
    u = (r / m) * (b @ alpha)
    e = alpha * (u @ b) - 1.0
    tot = float(np.abs(e).sum())
    # Any converged solve leaves tot at delta scale (1e-10 m by default);
    # this ceiling is four orders looser and only rejects garbage input.
    if tot > 1e-6 * m:
        raise ConvergenceError(
            f"alpha has total residual {tot:.3e}, far above any stopping "
            "tolerance; it does not solve the quadratic system"
        )
    defect = abs(float(u @ u) - r)
    if defect > 2.0 * tot * r / m + 1e-12 * r * max(m, 8):
        raise ConvergenceError(
            f"recovered amplitudes miss the sphere by {defect:.3e}, more "
            f"than the residual bound {2.0 * tot * r / m:.3e}; alpha is "
            "not converged"
        )
    return u
