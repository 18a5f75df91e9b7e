"""Bernstein window functions on the unit interval.

The degree-n family consists of n+1 polynomial bumps

    phi_i(t) = (n+1) * C(n, i) * t**i * (1-t)**(n-i),    i = 0..n,

each nonnegative on [0, 1] and scaled so its integral is exactly 1.
The common normalizer n+1 follows from the Beta-integral closed form
integral C(n,i) t^i (1-t)^(n-i) dt = 1/(n+1) and is cross-checked by
quadrature the first time a given degree is constructed.

Data live on an arbitrary interval [a, b]; `DomainMap` carries the
affine change of variable t = (x - a) / (b - a) and the matching
1/(b - a) Jacobian for densities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad
from scipy.special import gammaln

# Above this degree the direct product of binomial coefficient and powers
# is replaced by a log-space evaluation so extreme degrees stay finite.
_LOG_EVAL_DEGREE = 30

# Degrees whose normalizers already passed the quadrature cross-check.
_CHECKED_DEGREES: set[int] = set()


def _check_normalizers(degree: int) -> None:
    """Confirm by adaptive quadrature that every window integrates to 1."""
    if degree in _CHECKED_DEGREES:
        return
    for i in range(degree + 1):
        peak = i / degree if degree > 0 else 0.5
        hint = sorted({min(max(peak, 1e-12), 1.0 - 1e-12)})
        total, _ = quad(
            lambda t: _window_matrix(degree, np.atleast_1d(t))[i, 0],
            0.0,
            1.0,
            points=hint,
            limit=200,
        )
        if abs(total - 1.0) > 1e-8:
            raise ValueError(
                f"window {i} of degree {degree} integrates to {total!r}, not 1"
            )
    _CHECKED_DEGREES.add(degree)


@dataclass(frozen=True)
class WindowBasis:
    """Family of degree-`degree` Bernstein windows with unit integrals."""

    degree: int

    def __post_init__(self):
        if not isinstance(self.degree, (int, np.integer)) or isinstance(
            self.degree, bool
        ):
            raise ValueError(f"degree must be an integer, got {self.degree!r}")
        if self.degree < 0:
            raise ValueError(f"degree must be nonnegative, got {self.degree}")
        object.__setattr__(self, "degree", int(self.degree))
        _check_normalizers(self.degree)

    @property
    def count(self) -> int:
        """Number of windows in the family."""
        return self.degree + 1

    @property
    def normalizers(self) -> np.ndarray:
        """Per-window scale factors that give each window a unit integral."""
        return np.full(self.degree + 1, float(self.degree + 1))


def _require_unit(ts: np.ndarray) -> None:
    bad = ~np.isfinite(ts) | (ts < 0.0) | (ts > 1.0)
    if np.any(bad):
        offender = ts[bad].ravel()[0]
        raise ValueError(f"evaluation point {offender!r} is outside [0, 1]")


def _window_matrix_direct(degree: int, ts: np.ndarray) -> np.ndarray:
    n = degree
    m = ts.size
    coeff = np.empty(n + 1)
    coeff[0] = 1.0
    for i in range(1, n + 1):
        coeff[i] = coeff[i - 1] * (n - i + 1) / i
    if n == 0:
        return np.ones((1, m))
    tpow = np.vstack(
        [np.ones((1, m)), np.cumprod(np.broadcast_to(ts, (n, m)), axis=0)]
    )
    upow = np.vstack(
        [np.cumprod(np.broadcast_to(1.0 - ts, (n, m)), axis=0)[::-1], np.ones((1, m))]
    )
    return (n + 1.0) * coeff[:, None] * tpow * upow


def _window_matrix_log(degree: int, ts: np.ndarray) -> np.ndarray:
    n = degree
    i = np.arange(n + 1)
    logc = gammaln(n + 1) - gammaln(i + 1) - gammaln(n - i + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        logt = np.log(ts)
        log1mt = np.log1p(-ts)
        # Rows with exponent zero contribute nothing even where the log
        # diverges, so mask them before the 0 * inf product can poison it.
        left = np.where(i[:, None] == 0, 0.0, i[:, None] * logt[None, :])
        right = np.where(
            i[:, None] == n, 0.0, (n - i)[:, None] * log1mt[None, :]
        )
    return np.exp(math.log(n + 1.0) + logc[:, None] + left + right)


def _window_matrix(degree: int, ts: np.ndarray) -> np.ndarray:
    if degree > _LOG_EVAL_DEGREE:
        return _window_matrix_log(degree, ts)
    return _window_matrix_direct(degree, ts)


def window_matrix(basis: WindowBasis, ts) -> np.ndarray:
    """Evaluate every window at every point.

    Parameters
    ----------
    basis:
        Window family.
    ts:
        One-dimensional array of points in [0, 1].

    Returns
    -------
    Array of shape (basis.count, len(ts)) whose (i, j) entry is window i
    evaluated at ts[j].
    """
    ts = np.atleast_1d(np.asarray(ts, dtype=float))
    if ts.ndim != 1:
        raise ValueError("evaluation points must form a one-dimensional array")
    _require_unit(ts)
    return _window_matrix(basis.degree, ts)


def bernstein_window(basis: WindowBasis, i: int, t: float) -> float:
    """Value of window i at a single point t in [0, 1]."""
    if not isinstance(i, (int, np.integer)) or isinstance(i, bool):
        raise ValueError(f"window index must be an integer, got {i!r}")
    if i < 0 or i > basis.degree:
        raise ValueError(
            f"window index {i} out of range for degree {basis.degree}"
        )
    return float(window_matrix(basis, [t])[i, 0])


def eval_all(basis: WindowBasis, t: float) -> np.ndarray:
    """Vector of all window values at a single point t in [0, 1]."""
    return window_matrix(basis, [t])[:, 0]


@dataclass(frozen=True)
class DomainMap:
    """Affine identification of a data interval [a, b] with [0, 1]."""

    a: float
    b: float

    def __post_init__(self):
        a = float(self.a)
        b = float(self.b)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise ValueError(f"interval endpoints must be finite, got ({a}, {b})")
        if not b > a:
            raise ValueError(f"interval must satisfy b > a, got ({a}, {b})")
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)

    @property
    def width(self) -> float:
        return self.b - self.a


def to_unit(domain: DomainMap, x):
    """Map points of [a, b] onto [0, 1]; anything outside is an error."""
    arr = np.asarray(x, dtype=float)
    bad = ~np.isfinite(arr) | (arr < domain.a) | (arr > domain.b)
    if np.any(bad):
        offender = np.atleast_1d(arr)[np.atleast_1d(bad)].ravel()[0]
        raise ValueError(
            f"point {offender!r} lies outside the interval "
            f"[{domain.a}, {domain.b}]"
        )
    t = (arr - domain.a) / domain.width
    # Guard against one-ulp overshoot at the endpoints.
    t = np.minimum(np.maximum(t, 0.0), 1.0)
    return float(t) if np.isscalar(x) or arr.ndim == 0 else t


def density_back(domain: DomainMap, g):
    """Convert a unit-interval density value to the data interval."""
    arr = np.asarray(g, dtype=float)
    if np.any(arr < 0):
        raise ValueError("density values must be nonnegative")
    out = arr / domain.width
    return float(out) if np.isscalar(g) or arr.ndim == 0 else out


def interval_from_samples(xs, pad_fraction: float = 1e-9) -> DomainMap:
    """Smallest padded interval containing the samples.

    The padding is pad_fraction times the sample range, which keeps every
    sample strictly interior. A degenerate range (all samples equal) has
    no scale of its own and falls back to a half-width of 0.5.
    """
    arr = np.asarray(xs, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError("cannot infer an interval from zero samples")
    if np.any(~np.isfinite(arr)):
        raise ValueError("samples must be finite")
    lo = float(arr.min())
    hi = float(arr.max())
    span = hi - lo
    eta = pad_fraction * span if span > 0 else 0.5
    return DomainMap(lo - eta, hi + eta)
