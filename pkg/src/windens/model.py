"""Fitted density models: evaluation, validation, and a stable file format.

A model is a nonnegative mixture f(x) = sum_i c_i phi_i(t(x)) / (b - a)
with sum_i c_i = r. Documents are flat JSON with every float printed at 17
significant digits, which round-trips IEEE doubles bit for bit and keeps
repeated saves byte-identical.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.integrate import quad

from .errors import ModelDocumentError
from .windows import DomainMap, WindowBasis, to_unit, window_matrix

FORMAT_VERSION = 1
BASIS_KIND = "bernstein"

# Relative slack on the coefficient-sum invariant.
_SUM_TOL = 1e-12


def format_float(x: float) -> str:
    """Render a float with 17 significant digits (lossless for doubles)."""
    return format(float(x), ".17g")


@dataclass(frozen=True, eq=False)
class DensityModel:
    """A fitted density together with the run metadata that produced it."""

    basis: WindowBasis
    domain: DomainMap
    coefficients: np.ndarray
    raw_inner_product: float
    r: float
    m: int
    epsilon: float
    delta: float
    theta_trace: tuple = ()
    loglik_trace: tuple = ()
    inner_product_trace: tuple = ()
    inner_update_trace: tuple = ()

    def __post_init__(self):
        c = np.asarray(self.coefficients, dtype=float)
        object.__setattr__(self, "coefficients", c)
        if c.shape != (self.basis.count,):
            raise ValueError(
                f"expected {self.basis.count} coefficients, got shape {c.shape}"
            )
        if np.any(~np.isfinite(c)):
            raise ValueError("coefficients must be finite")
        if np.any(c < 0):
            i = int(np.flatnonzero(c < 0)[0])
            raise ValueError(f"coefficient {i} is negative ({c[i]!r})")
        if not self.r > 0:
            raise ValueError(f"total mass r must be positive, got {self.r}")
        gap = abs(float(c.sum()) - self.r)
        if gap > _SUM_TOL * max(1.0, abs(self.r)):
            raise ValueError(
                f"coefficients sum to {c.sum()!r}, expected {self.r!r}"
            )
        if not (isinstance(self.m, (int, np.integer)) and self.m >= 1):
            raise ValueError(f"sample count m must be a positive integer, got {self.m!r}")
        if not self.epsilon > 0:
            raise ValueError(f"epsilon must be positive, got {self.epsilon}")
        if not self.delta > 0:
            raise ValueError(f"delta must be positive, got {self.delta}")


def pdf(model: DensityModel, x):
    """Density at x; zero outside [a, b] by convention."""
    arr = np.atleast_1d(np.asarray(x, dtype=float))
    out = np.zeros(arr.shape)
    inside = np.isfinite(arr) & (arr >= model.domain.a) & (arr <= model.domain.b)
    if np.any(inside):
        t = to_unit(model.domain, arr[inside])
        t = np.atleast_1d(t)
        vals = model.coefficients @ window_matrix(model.basis, t)
        out[inside] = vals / model.domain.width
    if np.isscalar(x) or np.asarray(x).ndim == 0:
        return float(out[0])
    return out


def log_likelihood(model: DensityModel, xs) -> float:
    """Sum of log densities over the samples.

    Fails loudly, naming the first offending index, if any sample has zero
    density (which includes samples outside the model interval).
    """
    arr = np.asarray(xs, dtype=float).ravel()
    if arr.size == 0:
        raise ValueError("log-likelihood of an empty sample set is undefined")
    vals = pdf(model, arr)
    dead = ~(vals > 0)
    if np.any(dead):
        j = int(np.flatnonzero(dead)[0])
        raise ValueError(
            f"sample index {j} (x={arr[j]!r}) has zero density under the model"
        )
    return float(np.log(vals).sum())


def integrate(model: DensityModel, tolerance: float = 1e-8) -> float:
    """Adaptive-quadrature integral of the density over [a, b]."""
    if not tolerance > 0:
        raise ValueError(f"tolerance must be positive, got {tolerance}")
    value, err = quad(
        lambda x: pdf(model, x),
        model.domain.a,
        model.domain.b,
        epsabs=0.1 * tolerance,
        epsrel=0.1 * tolerance,
        limit=400,
    )
    if err > tolerance:
        raise ValueError(
            f"quadrature error estimate {err:.3e} exceeds tolerance {tolerance:.3e}"
        )
    return float(value)


def document_text(model: DensityModel) -> str:
    """Serialize the model to its canonical JSON text."""
    coeffs = ", ".join(format_float(c) for c in model.coefficients)
    lines = [
        "{",
        f'  "format_version": {FORMAT_VERSION},',
        f'  "basis_kind": "{BASIS_KIND}",',
        f'  "degree": {model.basis.degree},',
        f'  "a": {format_float(model.domain.a)},',
        f'  "b": {format_float(model.domain.b)},',
        f'  "r": {format_float(model.r)},',
        f'  "coefficients": [{coeffs}],',
        f'  "raw_inner_product": {format_float(model.raw_inner_product)},',
        f'  "m": {model.m},',
        f'  "epsilon": {format_float(model.epsilon)},',
        f'  "delta": {format_float(model.delta)}',
        "}",
    ]
    return "\n".join(lines) + "\n"


def save(model: DensityModel, destination) -> None:
    """Write the model document to a path."""
    Path(destination).write_text(document_text(model), encoding="ascii")


_REQUIRED_FIELDS = {
    "format_version",
    "basis_kind",
    "degree",
    "a",
    "b",
    "r",
    "coefficients",
    "raw_inner_product",
    "m",
    "epsilon",
    "delta",
}


def load(source) -> DensityModel:
    """Read and fully re-validate a model document."""
    try:
        text = Path(source).read_text(encoding="utf-8")
    except OSError as exc:
        raise ModelDocumentError(f"cannot read model document: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ModelDocumentError(f"model document is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict):
        raise ModelDocumentError("model document must be a JSON object")
    missing = _REQUIRED_FIELDS - doc.keys()
    if missing:
        raise ModelDocumentError(f"model document is missing fields: {sorted(missing)}")
    extra = doc.keys() - _REQUIRED_FIELDS
    if extra:
        raise ModelDocumentError(f"model document has unknown fields: {sorted(extra)}")
    if doc["format_version"] != FORMAT_VERSION:
        raise ModelDocumentError(
            f"unsupported format_version {doc['format_version']!r}"
        )
    if doc["basis_kind"] != BASIS_KIND:
        raise ModelDocumentError(f"unsupported basis_kind {doc['basis_kind']!r}")
    degree = doc["degree"]
    if not isinstance(degree, int) or degree < 0:
        raise ModelDocumentError(f"degree must be a nonnegative integer, got {degree!r}")
    coeffs = doc["coefficients"]
    if not isinstance(coeffs, list) or not all(
        isinstance(c, (int, float)) and not isinstance(c, bool) for c in coeffs
    ):
        raise ModelDocumentError("coefficients must be a list of numbers")
    m = doc["m"]
    if not isinstance(m, int) or m < 1:
        raise ModelDocumentError(f"m must be a positive integer, got {m!r}")
    for key in ("a", "b", "r", "raw_inner_product", "epsilon", "delta"):
        if not isinstance(doc[key], (int, float)) or isinstance(doc[key], bool):
            raise ModelDocumentError(f"field {key!r} must be a number")
        if not math.isfinite(float(doc[key])):
            raise ModelDocumentError(f"field {key!r} must be finite")
    try:
        return DensityModel(
            basis=WindowBasis(degree),
            domain=DomainMap(float(doc["a"]), float(doc["b"])),
            coefficients=np.asarray(coeffs, dtype=float),
            raw_inner_product=float(doc["raw_inner_product"]),
            r=float(doc["r"]),
            m=m,
            epsilon=float(doc["epsilon"]),
            delta=float(doc["delta"]),
        )
    except ValueError as exc:
        raise ModelDocumentError(f"model document violates an invariant: {exc}") from exc
