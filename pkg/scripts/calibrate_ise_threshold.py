"""Calibration ensembles for the integrated-squared-error gates.

Two studies, 50 independent seeds each:

  exp      11 windows on 80 samples, once with the default sample-range
           interval and once anchored at zero
  bimodal  35 windows on 180 samples over [0, 4]

The acceptance test asserts a fixed 0.02 ceiling for the exponential
study on a seed frozen from its ensemble; the comparison test for the
bimodal study freezes 0.19, which is 3 times the median printed here.
The quartiles show how typical or lucky the frozen seeds are.

Run:  python3 scripts/calibrate_ise_threshold.py
"""

import numpy as np

import windens as w


def exp_ensemble(anchor_zero: bool) -> np.ndarray:
    density = w.get_density("exp")
    errs = []
    for seed in range(50):
        xs = w.generate_samples("exp", 80, seed=seed)
        domain = None
        if anchor_zero:
            domain = w.DomainMap(0.0, float(xs.max()) + 1e-9 * float(np.ptp(xs)))
        ss = w.sample_set(xs, domain)
        model = w.fit(w.WindowBasis(10), ss)
        errs.append(w.integrated_squared_error(model, density))
    return np.asarray(errs)


def bimodal_ensemble() -> np.ndarray:
    density = w.get_density("bimodal")
    errs = []
    for seed in range(50):
        xs = w.generate_samples("bimodal", 180, seed=seed)
        ss = w.sample_set(xs, w.DomainMap(0.0, 4.0))
        model = w.fit(w.WindowBasis(34), ss)
        errs.append(w.integrated_squared_error(model, density))
    return np.asarray(errs)


def report(label: str, errs: np.ndarray) -> None:
    q1, med, q3 = np.percentile(errs, [25, 50, 75])
    print(f"{label}: min={errs.min():.5f} q1={q1:.5f} median={med:.5f} "
          f"q3={q3:.5f} max={errs.max():.5f}")
    print(f"{label}: 3 * median = {3.0 * med:.5f}")
    print(f"{label}: seeds within 3*median: "
          f"{np.flatnonzero(errs <= 3.0 * med).tolist()}")


if __name__ == "__main__":
    report("exp, sample-range interval", exp_ensemble(anchor_zero=False))
    report("exp, zero-anchored interval", exp_ensemble(anchor_zero=True))
    report("bimodal, [0,4] interval", bimodal_ensemble())
