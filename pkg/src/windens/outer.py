"""Outer amplitude iteration driving the maximum-likelihood fit.

The window coefficients are written as products c_i = u_i v_i of two
vectors on the radius-sqrt(r) sphere. Each pass freezes v, lets the inner
coordinate solver maximize over u, then rescales

    v' = theta * sqrt(u v),    theta = sqrt(r / sum_i u_i v_i) >= 1,

which keeps v' on the sphere and never lowers the likelihood. The loop
stops once sum_i u_i v_i + epsilon >= r, at which point u and v agree to
within sqrt(2 epsilon) componentwise and the products are the fitted
coefficients.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import inner
from .design import SampleSet, build_design, build_gram
from .errors import ConvergenceError
from .model import DensityModel
from .windows import WindowBasis, window_matrix

DEFAULT_EPSILON = 1e-8
DEFAULT_MAX_OUTER = 10_000


@dataclass
class AmplitudeState:
    """Progress of the outer iteration.

    `v` is the weight vector the latest inner solve actually used and `u`
    its maximizer, so `inner_product` always equals u . v. The rescaled
    weights waiting for the next pass live in `v_next`.
    """

    r: float
    v: np.ndarray
    v_next: np.ndarray
    u: np.ndarray | None = None
    k: int = 1
    inner_product: float | None = None
    theta_history: list[float] = field(default_factory=list)
    loglik_history: list[float] = field(default_factory=list)
    inner_product_history: list[float] = field(default_factory=list)
    inner_update_counts: list[int] = field(default_factory=list)


def init_state(degree: int, r: float = 1.0) -> AmplitudeState:
    """Uniform starting weights v_i = sqrt(r / (degree + 1))."""
    if not isinstance(degree, (int, np.integer)) or degree < 0:
        raise ValueError(f"degree must be a nonnegative integer, got {degree!r}")
    r = float(r)
    if not r > 0:
        raise ValueError(f"total mass r must be positive, got {r}")
    v0 = np.full(degree + 1, math.sqrt(r / (degree + 1)))
    return AmplitudeState(r=r, v=v0.copy(), v_next=v0)


def outer_step(
    state: AmplitudeState,
    basis: WindowBasis,
    samples: SampleSet,
    r: float,
    delta: float | None = None,
    max_inner: int | None = None,
    phi: np.ndarray | None = None,
) -> AmplitudeState:
    """One pass: inner maximization over u, then the sphere rescale of v.

    Every pass starts the inner solver from its own uniform initializer;
    nothing is warm-started across passes, so each solve is covered by the
    descent and positivity guarantees as stated.
    """
    r = float(r)
    if r != state.r:
        raise ValueError(f"r={r} disagrees with the state's r={state.r}")
    v = state.v_next
    design = build_design(basis, samples, v, phi=phi)
    gram = build_gram(design, r)
    sol = inner.solve(gram, delta=delta, max_updates=max_inner)
    u = inner.recover_u(design, sol.alpha, r)

    p = float(u @ v)
    # theta >= 1 holds exactly by Cauchy-Schwarz; the max() only shields
    # the invariant from last-ulp rounding in the dot product.
    theta = max(1.0, math.sqrt(r / p))
    loglik = float(np.log(u @ design.entries).sum()) - samples.m * math.log(
        samples.domain.width
    )
    state.u = u
    state.v = v
    state.v_next = theta * np.sqrt(u * v)
    state.inner_product = p
    state.k += 1
    state.theta_history.append(theta)
    state.loglik_history.append(loglik)
    state.inner_product_history.append(p)
    state.inner_update_counts.append(sol.sweeps)
    return state


def converged(state: AmplitudeState, epsilon: float, r: float) -> bool:
    """Stopping rule: the latest inner product is within epsilon of r."""
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if state.inner_product is None:
        raise ValueError("convergence is undefined before the first outer step")
    return state.inner_product + epsilon >= float(r)


def fit(
    basis: WindowBasis,
    samples: SampleSet,
    r: float = 1.0,
    epsilon: float = DEFAULT_EPSILON,
    delta: float | None = None,
    max_outer: int = DEFAULT_MAX_OUTER,
    max_inner: int | None = None,
    with_state: bool = False,
):
    """Fit the density to the samples.

    Parameters
    ----------
    basis, samples:
        Window family and wrapped observations.
    r:
        Total coefficient mass (1 gives a probability density).
    epsilon:
        Outer stopping tolerance on r - sum u_i v_i.
    delta:
        Inner residual tolerance; defaults to 1e-10 * m.
    max_outer, max_inner:
        Iteration caps for the two loops.
    with_state:
        When true, return (model, state) so the terminal amplitudes are
        inspectable alongside the model.

    Returns
    -------
    DensityModel, or (DensityModel, AmplitudeState) with `with_state`.

    Raises
    ------
    ConvergenceError
        If max_outer passes complete without meeting the stopping rule.
        The partial state (with traces) rides on the exception.
    """
    r = float(r)
    if not epsilon > 0:
        raise ValueError(f"epsilon must be positive, got {epsilon}")
    if max_outer < 1:
        raise ValueError(f"max_outer must be at least 1, got {max_outer}")
    delta_used = inner.default_delta(samples.m) if delta is None else float(delta)
    phi = window_matrix(basis, samples.unit_samples)
    state = init_state(basis.degree, r)
    for _ in range(max_outer):
        try:
            outer_step(
                state,
                basis,
                samples,
                r,
                delta=delta_used,
                max_inner=max_inner,
                phi=phi,
            )
        except ConvergenceError as exc:
            raise ConvergenceError(
                f"inner solver gave up on outer pass {state.k}: {exc}",
                state=state,
            ) from exc
        if converged(state, epsilon, r):
            products = state.u * state.v
            coeffs = products * (r / state.inner_product)
            model = DensityModel(
                basis=basis,
                domain=samples.domain,
                coefficients=coeffs,
                raw_inner_product=state.inner_product,
                r=r,
                m=samples.m,
                epsilon=float(epsilon),
                delta=delta_used,
                theta_trace=tuple(state.theta_history),
                loglik_trace=tuple(state.loglik_history),
                inner_product_trace=tuple(state.inner_product_history),
                inner_update_trace=tuple(state.inner_update_counts),
            )
            return (model, state) if with_state else model
    raise ConvergenceError(
        f"outer iteration did not converge within {max_outer} passes "
        f"(last gap {state.r - state.inner_product:.3e} > {epsilon:.3e})",
        state=state,
    )
