"""Sample containers and the window-by-sample design algebra.

Feasibility is decided here: every sample must receive strictly positive
weight from at least one window, otherwise no member of the model family
assigns it positive density and the likelihood is identically zero.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import FeasibilityError
from .windows import DomainMap, WindowBasis, interval_from_samples, to_unit, window_matrix


@dataclass(frozen=True, eq=False)
class SampleSet:
    """Observations on [a, b] together with their unit-interval images."""

    observations: np.ndarray
    domain: DomainMap
    unit_samples: np.ndarray

    @property
    def m(self) -> int:
        return self.observations.size


def sample_set(observations, domain: DomainMap | None = None) -> SampleSet:
    """Wrap raw observations, inferring a padded interval when none is given."""
    xs = np.asarray(observations, dtype=float).ravel()
    if xs.size == 0:
        raise ValueError("a sample set needs at least one observation")
    if np.any(~np.isfinite(xs)):
        raise ValueError("observations must be finite")
    if domain is None:
        domain = interval_from_samples(xs)
    unit = np.asarray(to_unit(domain, xs), dtype=float)
    return SampleSet(observations=xs, domain=domain, unit_samples=unit)


@dataclass(frozen=True, eq=False)
class DesignMatrix:
    """Weighted window values b_ij = v_i * phi_i(t_j), one column per sample."""

    entries: np.ndarray

    @property
    def window_count(self) -> int:
        return self.entries.shape[0]

    @property
    def sample_count(self) -> int:
        return self.entries.shape[1]


def build_design(
    basis: WindowBasis,
    samples: SampleSet,
    v,
    phi: np.ndarray | None = None,
) -> DesignMatrix:
    """Assemble the design matrix for window weights v.

    `phi` may carry precomputed window values for the sample points so
    repeated calls with different weights skip the basis evaluation.
    """
    weights = np.asarray(v, dtype=float)
    if weights.shape != (basis.count,):
        raise ValueError(
            f"weights must have shape ({basis.count},), got {weights.shape}"
        )
    if np.any(~np.isfinite(weights)) or np.any(weights < 0):
        raise ValueError("window weights must be finite and nonnegative")
    if phi is None:
        phi = window_matrix(basis, samples.unit_samples)
    entries = weights[:, None] * phi
    uncovered = ~(entries > 0).any(axis=0)
    if np.any(uncovered):
        j = int(np.flatnonzero(uncovered)[0])
        raise FeasibilityError(
            f"sample index {j} (x={samples.observations[j]!r}) receives zero "
            "weight from every window; the instance is infeasible"
        )
    return DesignMatrix(entries=entries)


@dataclass(frozen=True, eq=False)
class GramMatrix:
    """Scaled sample-by-sample inner products of design columns."""

    matrix: np.ndarray
    r: float
    m: int
    dbar: float = field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "dbar", float(self.matrix.max()))


def build_gram(design: DesignMatrix, r: float) -> GramMatrix:
    """Form D_kj = (r/m) b_k . b_j, exactly symmetric by construction."""
    r = float(r)
    if not r > 0:
        raise ValueError(f"total mass r must be positive, got {r}")
    b = design.entries
    m = design.sample_count
    raw = b.T @ b
    # Mirror the lower triangle so D == D.T holds entrywise, not just
    # up to rounding in the matrix product.
    raw = np.tril(raw) + np.tril(raw, -1).T
    d = (r / m) * raw
    diag = np.diag(d)
    if np.any(diag <= 0):
        j = int(np.flatnonzero(diag <= 0)[0])
        raise FeasibilityError(
            f"sample index {j} has zero self inner product; the instance "
            "is infeasible"
        )
    return GramMatrix(matrix=d, r=r, m=m)
