"""Reference densities with closed-form inverse CDFs for synthetic data.

Sampling is plain inverse-transform: draw U uniform on [0, 1) from
numpy's default PCG64 generator and push it through the inverse CDF, so a
fixed seed pins the sample bytes exactly.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad

from .model import DensityModel, pdf as model_pdf


@dataclass(frozen=True)
class ReferenceDensity:
    """A density, its inverse CDF, and the breakpoints of its pieces."""

    name: str
    lower: float
    upper: float
    breakpoints: tuple[float, ...]
    pdf: Callable[[np.ndarray], np.ndarray]
    ppf: Callable[[np.ndarray], np.ndarray]


def _exp_pdf(x):
    x = np.asarray(x, dtype=float)
    return np.where(x >= 0.0, np.exp(-np.clip(x, 0.0, None)), 0.0)


def _exp_ppf(u):
    return -np.log1p(-np.asarray(u, dtype=float))


def _bimodal_pdf(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    out = np.where((x >= 1.0) & (x <= 2.0), 2.0 / 3.0, out)
    out = np.where((x >= 3.0) & (x <= 4.0), 1.0 / 3.0, out)
    return out


def _bimodal_ppf(u):
    u = np.asarray(u, dtype=float)
    return np.where(u < 2.0 / 3.0, 1.0 + 1.5 * u, 3.0 + 3.0 * (u - 2.0 / 3.0))


def _trimodal_pdf(x):
    x = np.asarray(x, dtype=float)
    out = np.zeros(x.shape)
    out = np.where((x >= 0.0) & (x <= 0.5), 1.0, out)
    out = np.where((x >= 1.0) & (x <= 1.5), 0.5, out)
    out = np.where((x >= 3.0) & (x <= 3.5), 0.5, out)
    return out


def _trimodal_ppf(u):
    u = np.asarray(u, dtype=float)
    mid = 1.0 + 2.0 * (u - 0.5)
    top = 3.0 + 2.0 * (u - 0.75)
    return np.where(u < 0.5, u, np.where(u < 0.75, mid, top))


DENSITIES: dict[str, ReferenceDensity] = {
    "exp": ReferenceDensity(
        name="exp",
        lower=0.0,
        upper=math.inf,
        breakpoints=(0.0,),
        pdf=_exp_pdf,
        ppf=_exp_ppf,
    ),
    "bimodal": ReferenceDensity(
        name="bimodal",
        lower=1.0,
        upper=4.0,
        breakpoints=(1.0, 2.0, 3.0, 4.0),
        pdf=_bimodal_pdf,
        ppf=_bimodal_ppf,
    ),
    "trimodal": ReferenceDensity(
        name="trimodal",
        lower=0.0,
        upper=3.5,
        breakpoints=(0.0, 0.5, 1.0, 1.5, 3.0, 3.5),
        pdf=_trimodal_pdf,
        ppf=_trimodal_ppf,
    ),
}


def get_density(name: str) -> ReferenceDensity:
    try:
        return DENSITIES[name]
    except KeyError:
        raise ValueError(
            f"unknown density {name!r}; choose from {sorted(DENSITIES)}"
        ) from None


def generate_samples(name: str, size: int, seed: int) -> np.ndarray:
    """Inverse-transform samples from a named reference density."""
    density = get_density(name)
    if not isinstance(size, (int, np.integer)) or size < 1:
        raise ValueError(f"sample size must be a positive integer, got {size!r}")
    rng = np.random.default_rng(seed)
    return np.asarray(density.ppf(rng.random(size)), dtype=float)


def integrated_squared_error(model: DensityModel, density: ReferenceDensity) -> float:
    """Integral of (fitted - true)^2 over the union of both supports.

    The fitted density is zero outside its own interval, so mass the model
    cannot reach is charged in full. Integration is piecewise between all
    breakpoints, which keeps each integrand smooth for the quadrature.
    """
    a, b = model.domain.a, model.domain.b
    lo = min(a, density.lower)
    hi = max(b, density.upper) if math.isfinite(density.upper) else b
    cuts = {lo, hi, a, b}
    cuts.update(p for p in density.breakpoints if lo < p < hi)
    edges = sorted(cuts)

    def square_gap(x: float) -> float:
        return float((model_pdf(model, x) - density.pdf(np.float64(x))) ** 2)

    total = 0.0
    for left, right in zip(edges[:-1], edges[1:]):
        if right <= left:
            continue
        piece, _ = quad(square_gap, left, right, epsabs=1e-11, epsrel=1e-11, limit=300)
        total += piece
    if math.isinf(density.upper):
        tail, _ = quad(
            lambda x: float(density.pdf(np.float64(x)) ** 2),
            hi,
            math.inf,
            epsabs=1e-11,
            epsrel=1e-11,
            limit=300,
        )
        total += tail
    return total
