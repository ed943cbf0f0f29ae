"""Estimator-style front end for the sphere search, for pipeline-minded callers.

Wraps minimize_entropy_product in the scikit-learn parameter idiom: all search
knobs live in the constructor, fit consumes the frame pair, and fitted
attributes carry trailing underscores, so get_params/set_params/clone work and
the search drops into grid-search style sweeps over its own hyperparameters.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator

from ._validation import ValidationError
from .frames import WeightedFrame
from .phi import PhiSpec
from .search import SearchConfig, minimize_entropy_product, probe_conjecture


class EntropyProductMinimizer(BaseEstimator):
    """Searches the unit sphere for the minimum phi-entropy product of a frame pair.

    Parameters mirror SearchConfig; phi defaults to the power family with
    exponent 1 when left unset.

    Attributes (after fit):
        result_            the full SearchResult
        best_state_        StateVector attaining the searched minimum
        best_value_        the searched minimum of the entropy product
        bound_value_       proven lower bound phi((1 + c)^2 / 4)
        gap_               best_value_ - bound_value_
        conjecture_gap_    best_value_ - phi(c^2)
        boundary_flag_     True when the minimizer hugs the clamp floor
    """

    def __init__(self, phi=None, n_starts=64, max_iters=2000, fd_step=1e-6,
                 grad_tol=1e-8, eta_floor=1e-8, seed=0, jobs=1):
        self.phi = phi
        self.n_starts = n_starts
        self.max_iters = max_iters
        self.fd_step = fd_step
        self.grad_tol = grad_tol
        self.eta_floor = eta_floor
        self.seed = seed
        self.jobs = jobs

    def _config(self) -> SearchConfig:
        return SearchConfig(
            n_starts=self.n_starts,
            max_iters=self.max_iters,
            fd_step=self.fd_step,
            grad_tol=self.grad_tol,
            eta_floor=self.eta_floor,
            seed=self.seed,
            jobs=self.jobs,
        )

    def _resolve_inputs(self, X) -> tuple[WeightedFrame, WeightedFrame, PhiSpec]:
        try:
            a, b = X
        except (TypeError, ValueError) as exc:
            raise ValidationError(
                "fit expects a pair (frame_a, frame_b) of WeightedFrame objects"
            ) from exc
        if not isinstance(a, WeightedFrame) or not isinstance(b, WeightedFrame):
            raise ValidationError("both elements of the pair must be WeightedFrame objects")
        spec = self.phi if self.phi is not None else PhiSpec.power(1.0)
        if not isinstance(spec, PhiSpec):
            raise ValidationError(f"phi must be a PhiSpec, got {type(spec).__name__}")
        return a, b, spec

    def fit(self, X, y=None):
        """Run the multi-start search on X = (frame_a, frame_b)."""
        a, b, spec = self._resolve_inputs(X)
        result = minimize_entropy_product(a, b, spec, self._config())
        self.result_ = result
        self.best_state_ = result.best_state
        self.best_value_ = result.best_value
        self.bound_value_ = result.bound_value
        self.gap_ = result.gap
        self.conjecture_gap_ = result.conjecture_gap
        self.boundary_flag_ = result.boundary_flag
        return self

    def probe(self, X):
        """Run the conjecture probe on X = (frame_a, frame_b); returns a ProbeResult."""
        a, b, spec = self._resolve_inputs(X)
        return probe_conjecture(a, b, spec, self._config())

    def score(self, X=None, y=None) -> float:
        """Negative searched minimum, so that larger is better under sklearn conventions."""
        if not hasattr(self, "best_value_"):
            raise ValidationError("estimator is not fitted; call fit first")
        return -self.best_value_
