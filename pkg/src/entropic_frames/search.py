"""Sphere search for minimizers of the phi-entropy product.

The unit sphere of C^d is parameterized by z in R^{2d} (consecutive real
pairs form complex entries, then normalize), so a plain real-vector descent
can walk it. Gradients come from central finite differences; phi is pluggable
(including tabulated), the objective is cheap at these sizes, and correctness
beats speed here. Descent is projected steepest descent with a backtracking
(halving) line search under the Armijo sufficient-decrease rule.

During the search every squared coefficient is clamped into
[eta_floor, 1] before both the coefficient factor and the phi argument, which
keeps the objective finite and continuous on the whole sphere. A minimizer
whose smallest squared coefficient ends up within 10 * eta_floor of the clamp
is flagged as a boundary case: the entropy product is only meaningful on
states with no vanishing coefficient, so such minima are inconclusive.
"""

from __future__ import annotations

import csv
import io
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from ._validation import DomainError, ValidationError
from .bounds import (
    conjectured_product_bound,
    deutsch_lower_bound,
    mu_bound,
    product_bound,
)
from .frames import (
    StateVector,
    WeightedFrame,
    check_frame,
    make_orthonormal_basis,
    mutual_coherence,
    rotated_basis_2d,
    squared_coefficients,
)
from .phi import PhiSpec, _eval_array, certify_phi

ARMIJO_C = 1e-4
MAX_HALVINGS = 60
# Two consecutive accepted steps whose decrease is below rounding noise mean
# the line search is grinding against the clamp kink; stop there instead of
# burning out max_iters.
STALL_TOL = 1e-12
STALL_LIMIT = 2
COUNTEREXAMPLE_GAP = -1e-6

SWEEP_COLUMNS = (
    "theta", "coherence", "min_product", "product_bound", "conjectured_bound",
    "min_shannon_sum", "deutsch_bound", "mu_bound",
)


@dataclass(frozen=True)
class SearchConfig:
    """Multi-start descent parameters; start s draws its point from seed + s."""

    n_starts: int = 64
    max_iters: int = 2000
    fd_step: float = 1e-6
    grad_tol: float = 1e-8
    eta_floor: float = 1e-8
    seed: int = 0
    jobs: int = 1

    def __post_init__(self):
        if not isinstance(self.n_starts, (int, np.integer)) or self.n_starts < 1:
            raise ValidationError(f"n_starts must be a positive integer, got {self.n_starts!r}")
        if not isinstance(self.max_iters, (int, np.integer)) or self.max_iters < 1:
            raise ValidationError(f"max_iters must be a positive integer, got {self.max_iters!r}")
        for name in ("fd_step", "grad_tol", "eta_floor"):
            value = getattr(self, name)
            if not (np.isfinite(value) and value > 0):
                raise ValidationError(f"{name} must be positive, got {value!r}")
        if self.eta_floor < 1e-12:
            raise ValidationError("eta_floor must stay at or above the admissibility floor 1e-12")
        if not isinstance(self.jobs, (int, np.integer)) or self.jobs < 1:
            raise ValidationError(f"jobs must be a positive integer, got {self.jobs!r}")


@dataclass(frozen=True)
class StartRecord:
    start_seed: int
    final_value: float
    iterations: int
    converged: bool
    history: tuple = ()


@dataclass(frozen=True)
class SearchResult:
    """Outcome of one multi-start minimization of the entropy product."""

    best_state: StateVector
    best_value: float
    per_start: tuple
    boundary_flag: bool
    bound_value: float
    conjectured_value: float
    gap: float
    conjecture_gap: float
    min_coeff_sq: float

    def to_dict(self, verbose: bool = False) -> dict:
        entry_pairs = [[float(z.real), float(z.imag)] for z in self.best_state.entries]
        starts = []
        for rec in self.per_start:
            row = {
                "start_seed": rec.start_seed,
                "final_value": rec.final_value,
                "iterations": rec.iterations,
                "converged": rec.converged,
            }
            if verbose:
                row["history"] = list(rec.history)
            starts.append(row)
        return {
            "best_state": entry_pairs,
            "best_value": self.best_value,
            "boundary_flag": self.boundary_flag,
            "bound_value": self.bound_value,
            "conjectured_value": self.conjectured_value,
            "gap": self.gap,
            "conjecture_gap": self.conjecture_gap,
            "min_coeff_sq": self.min_coeff_sq,
            "per_start": starts,
        }


@dataclass(frozen=True)
class ProbeResult:
    """SearchResult plus the conjecture verdict.

    counterexample_candidate is raised only when the searched minimum undercuts
    the conjectured bound by more than 1e-6 away from the clamp boundary, and
    the finding survives re-evaluation at a 10x tighter floor.
    """

    search: SearchResult
    counterexample_candidate: bool
    refined_value: float | None = None
    refined_boundary_flag: bool | None = None

    def to_dict(self, verbose: bool = False) -> dict:
        data = self.search.to_dict(verbose)
        data["counterexample_candidate"] = self.counterexample_candidate
        data["refined_value"] = self.refined_value
        data["refined_boundary_flag"] = self.refined_boundary_flag
        return data


@dataclass(frozen=True)
class SweepRow:
    theta: float
    coherence: float
    min_product: float
    product_bound: float
    conjectured_bound: float
    min_shannon_sum: float
    deutsch_bound: float
    mu_bound: float
    boundary_flag: bool
    counterexample_candidate: bool


@dataclass(frozen=True)
class SweepResult:
    rows: tuple
    skipped: tuple  # (theta, reason) pairs


# ---------------------------------------------------------------------------
# objective machinery

def _z_to_states(z_batch: np.ndarray) -> np.ndarray:
    """Map rows of an (m, 2d) real array to unit complex states.

    Rows are pre-scaled by their largest absolute component before
    normalizing, so scalings of z that are exactly representable map to
    bit-identical states.
    """
    scale = np.max(np.abs(z_batch), axis=1, keepdims=True)
    if np.any(scale == 0.0) or not np.all(np.isfinite(scale)):
        raise DomainError("sphere parameterization requires a finite nonzero vector")
    y = z_batch / scale
    pairs = y.reshape(y.shape[0], -1, 2)
    states = pairs[..., 0] + 1j * pairs[..., 1]
    return states / np.linalg.norm(states, axis=1, keepdims=True)


def _product_objective(a: WeightedFrame, b: WeightedFrame, spec: PhiSpec,
                       eta_floor: float):
    a_adj = a.vectors.conj().T.copy()
    b_adj = b.vectors.conj().T.copy()

    def fn(z_batch: np.ndarray) -> np.ndarray:
        states = _z_to_states(z_batch)
        xa = np.abs(states @ a_adj) ** 2
        np.clip(xa, eta_floor, 1.0, out=xa)
        xb = np.abs(states @ b_adj) ** 2
        np.clip(xb, eta_floor, 1.0, out=xb)
        return ((xa * _eval_array(spec, xa)) @ a.weights
                * ((xb * _eval_array(spec, xb)) @ b.weights))

    return fn


def _shannon_sum_objective(a: WeightedFrame, b: WeightedFrame, eta_floor: float):
    a_adj = a.vectors.conj().T.copy()
    b_adj = b.vectors.conj().T.copy()

    def fn(z_batch: np.ndarray) -> np.ndarray:
        states = _z_to_states(z_batch)
        xa = np.abs(states @ a_adj) ** 2
        np.clip(xa, eta_floor, 1.0, out=xa)
        xb = np.abs(states @ b_adj) ** 2
        np.clip(xb, eta_floor, 1.0, out=xb)
        return (-xa * np.log(xa)) @ a.weights + (-xb * np.log(xb)) @ b.weights

    return fn


def entropy_product_objective(z, a: WeightedFrame, b: WeightedFrame,
                              spec: PhiSpec, eta_floor: float = 1e-8) -> float:
    """Entropy product of the state encoded by z, with the soft clamp applied.

    z is a real vector of length 2 * d; consecutive pairs form the complex
    entries, which are then normalized, so the value is invariant under
    positive rescaling of z. Squared coefficients are clamped into
    [eta_floor, 1] before use, which makes the value finite for every nonzero
    z, including states that vanish against some frame vector.
    """
    arr = np.asarray(z, dtype=np.float64).ravel()
    if arr.size != 2 * a.dimension:
        raise ValidationError(
            f"z must have length {2 * a.dimension} (= 2 * dimension), got {arr.size}"
        )
    if not np.all(np.isfinite(arr)) or not np.any(arr):
        raise DomainError("z must be finite and nonzero")
    return float(_product_objective(a, b, spec, eta_floor)(arr[None])[0])


# ---------------------------------------------------------------------------
# descent

def _descend(fn, z0: np.ndarray, cfg: SearchConfig):
    """Projected steepest descent from z0; returns (z, value, iters, converged, history).

    The halving line search is evaluated as one batch over all candidate step
    sizes 2^0 .. 2^-(MAX_HALVINGS-1); the accepted step is the largest one
    meeting the Armijo rule, exactly as a sequential halving loop would pick.
    """
    n = z0.size
    z = z0 / np.linalg.norm(z0)
    value = float(fn(z[None])[0])
    history = [value]
    step_dirs = cfg.fd_step * np.eye(n)
    steps = np.power(2.0, -np.arange(MAX_HALVINGS, dtype=np.float64))
    converged = False
    iterations = 0
    stalled = 0
    for _ in range(cfg.max_iters):
        iterations += 1
        probes = np.concatenate([z + step_dirs, z - step_dirs], axis=0)
        vals = fn(probes)
        grad = (vals[:n] - vals[n:]) / (2.0 * cfg.fd_step)
        grad -= (grad @ z) * z
        grad_norm = float(np.linalg.norm(grad))
        if grad_norm <= cfg.grad_tol:
            converged = True
            break
        candidates = z[None, :] - steps[:, None] * grad[None, :]
        norms = np.linalg.norm(candidates, axis=1)
        nonzero = norms > 0.0
        candidates /= np.where(nonzero, norms, 1.0)[:, None]
        if not nonzero.all():
            candidates[~nonzero] = z  # placeholder rows, masked out below
        cand_values = fn(candidates)
        acceptable = nonzero & (cand_values
                                <= value - ARMIJO_C * steps * grad_norm * grad_norm)
        if not acceptable.any():
            break  # stalled at the numerical floor of the line search
        idx = int(np.argmax(acceptable))  # first True, i.e. the largest step
        decrease = value - float(cand_values[idx])
        z, value = candidates[idx], float(cand_values[idx])
        history.append(value)
        if decrease <= STALL_TOL * (1.0 + abs(value)):
            stalled += 1
            if stalled >= STALL_LIMIT:
                break
        else:
            stalled = 0
    return z, value, iterations, converged, history


def _multi_start(fn, dimension: int, cfg: SearchConfig):
    """Run cfg.n_starts descents; deterministic given cfg regardless of jobs."""

    def one_start(s: int):
        rng = np.random.default_rng(cfg.seed + s)
        z0 = rng.standard_normal(2 * dimension)
        z, value, iterations, converged, history = _descend(fn, z0, cfg)
        record = StartRecord(cfg.seed + s, value, iterations, converged, tuple(history))
        return z, record

    if cfg.jobs > 1:
        with ThreadPoolExecutor(max_workers=cfg.jobs) as pool:
            outcomes = list(pool.map(one_start, range(cfg.n_starts)))
    else:
        outcomes = [one_start(s) for s in range(cfg.n_starts)]

    records = tuple(rec for _, rec in outcomes)
    best_idx = int(np.argmin([rec.final_value for rec in records]))
    return outcomes[best_idx][0], records[best_idx].final_value, records


def _require_search_inputs(a: WeightedFrame, b: WeightedFrame, spec: PhiSpec) -> None:
    check_frame(a)
    check_frame(b)
    if a.dimension != b.dimension:
        raise ValidationError(
            f"frames must share a dimension, got {a.dimension} and {b.dimension}"
        )
    cert = certify_phi(spec)
    if not cert.certified:
        raise ValidationError(
            f"phi spec {spec.describe()} is not certified "
            f"(positive={cert.positive}, decreasing={cert.decreasing}, "
            f"submultiplicative={cert.submultiplicative})"
        )


def _min_coeff_sq(state: np.ndarray, a: WeightedFrame, b: WeightedFrame) -> float:
    return float(min(np.min(squared_coefficients(state, a)),
                     np.min(squared_coefficients(state, b))))


def minimize_entropy_product(a: WeightedFrame, b: WeightedFrame, spec: PhiSpec,
                             cfg: SearchConfig = SearchConfig()) -> SearchResult:
    """Multi-start search for the minimum entropy product over the unit sphere.

    Frames must pass validation and phi must certify; the search refuses
    inputs outside the hypotheses of the product bound. The returned gap
    (best_value - bound_value) measures how loose the proven bound is for
    this pair; a negative gap beyond tolerance with boundary_flag False would
    be an anomaly worth investigating, not an expected outcome.
    """
    _require_search_inputs(a, b, spec)
    fn = _product_objective(a, b, spec, cfg.eta_floor)
    best_z, best_value, records = _multi_start(fn, a.dimension, cfg)
    state = _z_to_states(best_z[None])[0]
    min_sq = _min_coeff_sq(state, a, b)
    coherence = mutual_coherence(a, b)
    bound = product_bound(spec, coherence)
    conjectured = conjectured_product_bound(spec, coherence)
    return SearchResult(
        best_state=StateVector(state),
        best_value=best_value,
        per_start=records,
        boundary_flag=bool(min_sq <= 10.0 * cfg.eta_floor),
        bound_value=bound,
        conjectured_value=conjectured,
        gap=best_value - bound,
        conjecture_gap=best_value - conjectured,
        min_coeff_sq=min_sq,
    )


def probe_conjecture(a: WeightedFrame, b: WeightedFrame, spec: PhiSpec,
                     cfg: SearchConfig = SearchConfig()) -> ProbeResult:
    """Hunt for states beating the conjectured bound phi(c^2).

    A candidate needs conjecture_gap < -1e-6 with the minimizer clear of the
    clamp boundary; boundary-pinned minima are inconclusive because the bound
    only quantifies over states with nonvanishing coefficients. Surviving
    candidates are re-checked at a 10x tighter floor before being reported.
    """
    result = minimize_entropy_product(a, b, spec, cfg)
    candidate = (result.conjecture_gap < COUNTEREXAMPLE_GAP) and not result.boundary_flag
    refined_value = None
    refined_boundary = None
    if candidate:
        tighter = cfg.eta_floor / 10.0
        z = np.column_stack([result.best_state.entries.real,
                             result.best_state.entries.imag]).ravel()
        refined_value = float(entropy_product_objective(z, a, b, spec, tighter))
        refined_boundary = bool(result.min_coeff_sq <= 10.0 * tighter)
        candidate = ((refined_value - result.conjectured_value) < COUNTEREXAMPLE_GAP
                     and not refined_boundary)
    return ProbeResult(result, bool(candidate), refined_value, refined_boundary)


def sweep_rotation(angles, spec: PhiSpec,
                   cfg: SearchConfig = SearchConfig()) -> SweepResult:
    """Minimize product and Shannon sum against a rotated basis, angle by angle.

    The pair is (standard basis of C^2, standard basis rotated by theta), the
    smallest nontrivial case; its coherence is max(|cos theta|, |sin theta|).
    Angles at 0 or pi/2 (coherence 1, admissibility degenerate) are skipped
    and listed in the result.
    """
    a = make_orthonormal_basis("standard", 2)
    rows = []
    skipped = []
    for theta in angles:
        theta = float(theta)
        if not (0.0 < theta < np.pi / 2) or min(theta, np.pi / 2 - theta) < 1e-12:
            skipped.append((theta, "coherence 1, admissibility degenerate"))
            continue
        b = rotated_basis_2d(theta)
        product_result = minimize_entropy_product(a, b, spec, cfg)
        shannon_fn = _shannon_sum_objective(a, b, cfg.eta_floor)
        _, min_shannon, _ = _multi_start(shannon_fn, 2, cfg)
        coherence = mutual_coherence(a, b)
        candidate = ((product_result.conjecture_gap < COUNTEREXAMPLE_GAP)
                     and not product_result.boundary_flag)
        rows.append(SweepRow(
            theta=theta,
            coherence=coherence,
            min_product=product_result.best_value,
            product_bound=product_result.bound_value,
            conjectured_bound=product_result.conjectured_value,
            min_shannon_sum=float(min_shannon),
            deutsch_bound=deutsch_lower_bound(coherence),
            mu_bound=mu_bound(coherence),
            boundary_flag=product_result.boundary_flag,
            counterexample_candidate=candidate,
        ))
    return SweepResult(tuple(rows), tuple(skipped))


def interior_angle_grid(count: int) -> np.ndarray:
    """count angles evenly spaced strictly inside (0, pi/2): k*pi/(2*(count+1))."""
    if not isinstance(count, (int, np.integer)) or count < 1:
        raise ValidationError(f"angle count must be a positive integer, got {count!r}")
    k = np.arange(1, count + 1, dtype=np.float64)
    return k * np.pi / (2.0 * (count + 1))


def sweep_to_csv(result: SweepResult) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(SWEEP_COLUMNS)
    for row in result.rows:
        writer.writerow([
            f"{row.theta:.17g}", f"{row.coherence:.17g}", f"{row.min_product:.17g}",
            f"{row.product_bound:.17g}", f"{row.conjectured_bound:.17g}",
            f"{row.min_shannon_sum:.17g}", f"{row.deutsch_bound:.17g}",
            f"{row.mu_bound:.17g}",
        ])
    return buf.getvalue()
