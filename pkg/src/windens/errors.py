"""Exception types shared across the estimator."""

from __future__ import annotations


class FeasibilityError(Exception):
    """A sample is invisible to every window, so no density can cover it."""


class ConvergenceError(Exception):
    """An iteration cap was reached before the stopping rule fired.

    The partially converged state is attached so callers can inspect
    traces or write diagnostics before giving up.
    """

    def __init__(self, message: str, state=None):
        super().__init__(message)
        self.state = state


class ModelDocumentError(ValueError):
    """A persisted model document is malformed or violates an invariant."""
