"""Maximum-likelihood density estimation with nonnegative Bernstein windows.

The estimator writes the density as a nonnegative combination of unit-mass
polynomial windows and finds the maximum-likelihood coefficients with a
nested iteration: an outer amplitude rescaling and an inner coordinate
solver that only ever solves single scalar quadratics.
"""

from .densities import (
    DENSITIES,
    ReferenceDensity,
    generate_samples,
    get_density,
    integrated_squared_error,
)
from .design import (
    DesignMatrix,
    GramMatrix,
    SampleSet,
    build_design,
    build_gram,
    sample_set,
)
from .errors import ConvergenceError, FeasibilityError, ModelDocumentError
from .inner import (
    AlphaState,
    coordinate_update,
    default_delta,
    default_update_cap,
    init_alpha,
    recover_u,
    residuals,
    solve,
)
from .model import (
    DensityModel,
    document_text,
    integrate,
    load,
    log_likelihood,
    pdf,
    save,
)
from .oracle import (
    OracleResult,
    ascend,
    grid_search,
    projected_gradient,
    sphere_loglik,
    sphere_loglik_grad,
)
from .outer import AmplitudeState, converged, fit, init_state, outer_step
from .windows import (
    DomainMap,
    WindowBasis,
    bernstein_window,
    density_back,
    eval_all,
    interval_from_samples,
    to_unit,
    window_matrix,
)

__all__ = [
    "AlphaState",
    "AmplitudeState",
    "ConvergenceError",
    "DENSITIES",
    "DensityModel",
    "DesignMatrix",
    "DomainMap",
    "FeasibilityError",
    "GramMatrix",
    "ModelDocumentError",
    "OracleResult",
    "ReferenceDensity",
    "SampleSet",
    "WindowBasis",
    "ascend",
    "bernstein_window",
    "build_design",
    "build_gram",
    "converged",
    "coordinate_update",
    "default_delta",
    "default_update_cap",
    "density_back",
    "document_text",
    "eval_all",
    "fit",
    "generate_samples",
    "get_density",
    "grid_search",
    "init_alpha",
    "init_state",
    "integrate",
    "integrated_squared_error",
    "interval_from_samples",
    "load",
    "log_likelihood",
    "outer_step",
    "pdf",
    "projected_gradient",
    "recover_u",
    "residuals",
    "sample_set",
    "save",
    "solve",
    "sphere_loglik",
    "sphere_loglik_grad",
    "to_unit",
    "window_matrix",
]

__version__ = "0.1.0"
