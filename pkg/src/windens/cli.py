"""Command-line front end.

Subcommands: gen, fit, eval, compare, verify. Exit codes: 0 on success,
2 when an iteration fails to converge, 3 when an instance is infeasible,
4 for configuration or I/O problems. All file output uses 17-significant-
digit floats so repeated runs with the same seed are byte-identical.
"""

from __future__ import annotations

import argparse
import sys
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .densities import DENSITIES, generate_samples, get_density, integrated_squared_error
from .design import sample_set
from .errors import ConvergenceError, FeasibilityError
from .model import format_float, load, log_likelihood, pdf, save
from .oracle import ascend, grid_search
from .outer import DEFAULT_EPSILON, DEFAULT_MAX_OUTER, fit
from .windows import DomainMap, WindowBasis, window_matrix

TRACE_HEADER = "k,theta_bar,inner_product,log_likelihood,inner_updates"


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


@dataclass
class RunConfig:
    command: str
    input: str | None = None
    output: str | None = None
    degree: int | None = None
    interval: tuple[float, float] | None = None
    r: float = 1.0
    epsilon: float = DEFAULT_EPSILON
    delta: float | None = None
    max_outer: int = DEFAULT_MAX_OUTER
    max_inner: int | None = None
    grid: int = 512
    seed: int = 0
    density: str | None = None
    trace: str | None = None
    size: int | None = None
    holdout: str | None = None


def _add_fit_flags(sub):
    sub.add_argument("--degree", type=int, default=None)
    sub.add_argument(
        "--windows", type=int, default=None, help="window count, equal to degree + 1"
    )
    sub.add_argument("--interval", type=str, default=None, metavar="A,B")
    sub.add_argument("--r", type=float, default=1.0)
    sub.add_argument("--epsilon", type=float, default=DEFAULT_EPSILON)
    sub.add_argument("--delta", type=float, default=None)
    sub.add_argument("--max-outer", type=int, default=DEFAULT_MAX_OUTER)
    sub.add_argument("--max-inner", type=int, default=None)


def _build_parser() -> _Parser:
    parser = _Parser(prog="windens", description=__doc__)
    subs = parser.add_subparsers(dest="command", required=True)

    gen = subs.add_parser("gen", help="draw samples from a reference density")
    gen.add_argument("--density", required=True, choices=sorted(DENSITIES))
    gen.add_argument("--size", type=int, required=True)
    gen.add_argument("--seed", type=int, default=0)
    gen.add_argument("--output", required=True)

    fit_p = subs.add_parser("fit", help="fit a density to a sample file")
    fit_p.add_argument("--input", required=True)
    fit_p.add_argument("--output", required=True)
    fit_p.add_argument("--trace", default=None)
    _add_fit_flags(fit_p)

    eval_p = subs.add_parser("eval", help="tabulate a fitted density on a grid")
    eval_p.add_argument("--input", required=True)
    eval_p.add_argument("--output", default=None)
    eval_p.add_argument("--grid", type=int, default=512)

    cmp_p = subs.add_parser("compare", help="score a fitted density against a reference")
    cmp_p.add_argument("--input", required=True)
    cmp_p.add_argument("--density", required=True, choices=sorted(DENSITIES))
    cmp_p.add_argument("--holdout", default=None)
    cmp_p.add_argument("--output", default=None)

    ver_p = subs.add_parser("verify", help="cross-check a fit against slow oracles")
    ver_p.add_argument("--input", required=True)
    ver_p.add_argument("--output", default=None)
    ver_p.add_argument("--grid", type=int, default=201)
    ver_p.add_argument("--seed", type=int, default=0)
    _add_fit_flags(ver_p)

    return parser


def _parse_interval(text: str) -> tuple[float, float]:
    parts = text.split(",")
    if len(parts) != 2:
        raise UsageError(f"interval must look like 'a,b', got {text!r}")
    try:
        a, b = float(parts[0]), float(parts[1])
    except ValueError:
        raise UsageError(f"interval endpoints must be numbers, got {text!r}") from None
    if not b > a:
        raise UsageError(f"interval must satisfy b > a, got {text!r}")
    return a, b


def _resolve_degree(ns) -> int:
    degree = getattr(ns, "degree", None)
    wins = getattr(ns, "windows", None)
    if degree is None and wins is None:
        raise UsageError("one of --degree or --windows is required")
    if wins is not None:
        if wins < 1:
            raise UsageError(f"--windows must be at least 1, got {wins}")
        if degree is not None and degree != wins - 1:
            raise UsageError(
                f"--degree {degree} and --windows {wins} disagree "
                "(windows = degree + 1)"
            )
        degree = wins - 1
    if degree < 0:
        raise UsageError(f"--degree must be nonnegative, got {degree}")
    return degree


def parse_config(argv) -> RunConfig:
    ns = _build_parser().parse_args(argv)
    cfg = RunConfig(command=ns.command)
    for name in (
        "input",
        "output",
        "trace",
        "holdout",
        "density",
        "size",
        "seed",
        "grid",
        "r",
        "epsilon",
        "delta",
        "max_outer",
        "max_inner",
    ):
        if hasattr(ns, name):
            setattr(cfg, name, getattr(ns, name))
    if cfg.command in ("fit", "verify"):
        cfg.degree = _resolve_degree(ns)
        if ns.interval is not None:
            cfg.interval = _parse_interval(ns.interval)
        if not cfg.r > 0:
            raise UsageError(f"--r must be positive, got {cfg.r}")
        if not cfg.epsilon > 0:
            raise UsageError(f"--epsilon must be positive, got {cfg.epsilon}")
        if cfg.delta is not None and not cfg.delta > 0:
            raise UsageError(f"--delta must be positive, got {cfg.delta}")
        if cfg.max_outer < 1:
            raise UsageError(f"--max-outer must be at least 1, got {cfg.max_outer}")
        if cfg.max_inner is not None and cfg.max_inner < 1:
            raise UsageError(f"--max-inner must be at least 1, got {cfg.max_inner}")
    if cfg.command in ("eval", "verify") and cfg.grid < 2:
        raise UsageError(f"--grid must be at least 2, got {cfg.grid}")
    return cfg


def read_samples(path: str) -> np.ndarray:
    """One decimal per line; blank lines are ignored."""
    values = []
    for lineno, line in enumerate(Path(path).read_text().splitlines(), start=1):
        text = line.strip()
        if not text:
            continue
        try:
            values.append(float(text))
        except ValueError:
            raise ValueError(
                f"{path}:{lineno}: {text!r} is not a decimal number"
            ) from None
    if not values:
        raise ValueError(f"{path} contains no samples")
    return np.asarray(values, dtype=float)


def _write_text(destination: str | None, text: str) -> None:
    if destination is None:
        sys.stdout.write(text)
    else:
        Path(destination).write_text(text, encoding="ascii")


def _trace_text(thetas, products, logliks, counts) -> str:
    lines = [TRACE_HEADER]
    for i, (th, p, ll, n) in enumerate(zip(thetas, products, logliks, counts), 1):
        lines.append(
            f"{i},{format_float(th)},{format_float(p)},{format_float(ll)},{n}"
        )
    return "\n".join(lines) + "\n"


def _json_text(items) -> str:
    parts = []
    for key, value in items:
        if value is None:
            rendered = "null"
        elif isinstance(value, bool):
            rendered = "true" if value else "false"
        elif isinstance(value, (int, np.integer)):
            rendered = str(int(value))
        elif isinstance(value, float):
            rendered = format_float(value)
        else:
            rendered = f'"{value}"'
        parts.append(f'  "{key}": {rendered}')
    return "{\n" + ",\n".join(parts) + "\n}\n"


def cmd_gen(cfg: RunConfig) -> int:
    xs = generate_samples(cfg.density, cfg.size, cfg.seed)
    _write_text(cfg.output, "".join(format_float(x) + "\n" for x in xs))
    return 0


def cmd_fit(cfg: RunConfig) -> int:
    xs = read_samples(cfg.input)
    domain = DomainMap(*cfg.interval) if cfg.interval else None
    samples = sample_set(xs, domain)
    basis = WindowBasis(cfg.degree)
    try:
        model = fit(
            basis,
            samples,
            r=cfg.r,
            epsilon=cfg.epsilon,
            delta=cfg.delta,
            max_outer=cfg.max_outer,
            max_inner=cfg.max_inner,
        )
    except ConvergenceError as exc:
        state = exc.state
        if cfg.trace and state is not None and hasattr(state, "theta_history"):
            _write_text(
                cfg.trace,
                _trace_text(
                    state.theta_history,
                    state.inner_product_history,
                    state.loglik_history,
                    state.inner_update_counts,
                ),
            )
        print(f"fit did not converge: {exc}", file=sys.stderr)
        return 2
    save(model, cfg.output)
    if cfg.trace:
        _write_text(
            cfg.trace,
            _trace_text(
                model.theta_trace,
                model.inner_product_trace,
                model.loglik_trace,
                model.inner_update_trace,
            ),
        )
    return 0


def cmd_eval(cfg: RunConfig) -> int:
    model = load(cfg.input)
    xs = np.linspace(model.domain.a, model.domain.b, cfg.grid)
    vals = pdf(model, xs)
    lines = ["x,pdf"]
    lines.extend(
        f"{format_float(x)},{format_float(v)}" for x, v in zip(xs, vals)
    )
    _write_text(cfg.output, "\n".join(lines) + "\n")
    return 0


def cmd_compare(cfg: RunConfig) -> int:
    model = load(cfg.input)
    density = get_density(cfg.density)
    items = [("density", density.name), ("ise", integrated_squared_error(model, density))]
    if cfg.holdout:
        held = read_samples(cfg.holdout)
        vals = pdf(model, held)
        dead = int(np.count_nonzero(~(vals > 0)))
        if dead:
            items.append(("holdout_log_likelihood", None))
        else:
            items.append(("holdout_log_likelihood", float(np.log(vals).sum())))
        items.append(("holdout_zero_density_count", dead))
        items.append(("holdout_size", int(held.size)))
    _write_text(cfg.output, _json_text(items))
    return 0


def cmd_verify(cfg: RunConfig) -> int:
    xs = read_samples(cfg.input)
    domain = DomainMap(*cfg.interval) if cfg.interval else None
    samples = sample_set(xs, domain)
    basis = WindowBasis(cfg.degree)
    if basis.count > 4:
        raise ValueError(
            f"verify is limited to 4 windows (grid-search cost guard), "
            f"got {basis.count}"
        )
    if samples.m > 200:
        raise ValueError(
            f"verify is limited to 200 samples (oracle cost guard), got {samples.m}"
        )
    model = fit(
        basis,
        samples,
        r=cfg.r,
        epsilon=cfg.epsilon,
        delta=cfg.delta,
        max_outer=cfg.max_outer,
        max_inner=cfg.max_inner,
    )
    fit_ll = log_likelihood(model, xs)
    a_matrix = window_matrix(basis, samples.unit_samples) / samples.domain.width
    grid = grid_search(a_matrix, cfg.r, cfg.grid)
    rng = np.random.default_rng(cfg.seed)
    starts = 20
    endpoints = []
    for _ in range(starts):
        c0 = rng.random(basis.count) + 1e-12
        c, ll, _ = ascend(a_matrix, cfg.r, c0)
        endpoints.append((c, ll))
    best_c, best_ll = max(endpoints, key=lambda pair: pair[1])
    spread = max(float(np.max(np.abs(c - best_c))) for c, _ in endpoints)
    coeff_diff = float(np.max(np.abs(model.coefficients - best_c * best_c)))
    items = [
        ("m", samples.m),
        ("windows", basis.count),
        ("fit_log_likelihood", fit_ll),
        ("grid_resolution", cfg.grid),
        ("grid_log_likelihood", grid.best_loglik),
        ("grid_gap", grid.best_loglik - fit_ll),
        ("gradient_starts", starts),
        ("gradient_log_likelihood", best_ll),
        ("gradient_gap", best_ll - fit_ll),
        ("multistart_spread", spread),
        ("coefficient_max_diff", coeff_diff),
    ]
    _write_text(cfg.output, _json_text(items))
    return 0


_HANDLERS = {
    "gen": cmd_gen,
    "fit": cmd_fit,
    "eval": cmd_eval,
    "compare": cmd_compare,
    "verify": cmd_verify,
}


def main(argv=None) -> int:
    try:
        cfg = parse_config(argv)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    try:
        return _HANDLERS[cfg.command](cfg)
    except FeasibilityError as exc:
        print(f"infeasible: {exc}", file=sys.stderr)
        return 3
    except ConvergenceError as exc:
        print(f"did not converge: {exc}", file=sys.stderr)
        return 2
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 4


def entry() -> None:
    sys.exit(main())


if __name__ == "__main__":
    entry()
