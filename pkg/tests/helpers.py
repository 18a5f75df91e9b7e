"""Shared pieces for the test suite.

The oracles here are deliberately independent of the library's own
algorithms: the Newton solver attacks the full quadratic system at once
instead of one coordinate at a time, and the naive Gram builder uses
explicit Python loops.
"""

import numpy as np

from windens import DomainMap, WindowBasis, sample_set
from windens.design import build_design, build_gram


def newton_alpha(d, tol=1e-12, max_steps=400):
    """Damped Newton on the full system alpha_k (D alpha)_k = 1.

    Jacobian of F(alpha) = alpha * (D alpha) - 1 is diag(D alpha) + diag(alpha) D.
    Step lengths are halved until the residual norm drops and every
    component stays positive.
    """
    d = np.asarray(d, dtype=float)
    m = d.shape[0]
    alpha = np.full(m, np.sqrt(1.0 / (d.max() * m)))
    for _ in range(max_steps):
        da = d @ alpha
        f = alpha * da - 1.0
        if np.abs(f).sum() <= tol:
            return alpha
        jac = np.diag(da) + alpha[:, None] * d
        step = np.linalg.solve(jac, f)
        err = np.abs(f).sum()
        lam = 1.0
        while lam > 1e-12:
            cand = alpha - lam * step
            if np.all(cand > 0):
                cerr = np.abs(cand * (d @ cand) - 1.0).sum()
                if cerr < err:
                    alpha = cand
                    break
            lam *= 0.5
        else:
            raise RuntimeError("newton oracle stalled before reaching tol")
    raise RuntimeError("newton oracle did not converge")


def naive_gram(entries, r):
    entries = np.asarray(entries, dtype=float)
    m = entries.shape[1]
    d = np.empty((m, m))
    for j in range(m):
        for k in range(m):
            acc = 0.0
            for i in range(entries.shape[0]):
                acc += entries[i, j] * entries[i, k]
            d[j, k] = (r / m) * acc
    return d


def random_unit_instance(rng, m, degree):
    """Random samples on [0, 1] with the identity domain map."""
    xs = np.sort(rng.uniform(0.0, 1.0, m))
    return WindowBasis(degree), sample_set(xs, DomainMap(0.0, 1.0))


def random_gram(rng, m, degree, r=1.0):
    basis, samples = random_unit_instance(rng, m, degree)
    v = rng.uniform(0.2, 2.0, degree + 1)
    design = build_design(basis, samples, v)
    return build_gram(design, r)


def peak_count(values):
    """Local maxima on a sampled curve, plateau-free strict comparison."""
    values = np.asarray(values, dtype=float)
    last = len(values) - 1
    total = 0
    for i in range(len(values)):
        left = i == 0 or values[i] > values[i - 1]
        right = i == last or values[i] > values[i + 1]
        if left and right:
            total += 1
    return total
