"""Finite weighted Parseval frames: construction, validation, coefficients, coherence.

A frame is a family of complex vectors tau_alpha in C^d together with strictly
positive atom weights w_alpha. The working hypotheses throughout the package are

    Parseval identity   sum_alpha w_alpha tau_alpha tau_alpha^* = I_d
    1-boundedness       ||tau_alpha|| <= 1 for every alpha

so that for any unit vector h the squared analysis coefficients
x_alpha = |<h, tau_alpha>|^2 form a probability distribution under the weights
(sum_alpha w_alpha x_alpha = 1) with every x_alpha in [0, 1].

Orthonormal bases are the special case n = d with all weights 1.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ._validation import (
    ValidationError,
    as_complex_vector,
    check_positive_int,
    check_same_dimension,
    check_state,
)

# Acceptance tolerance for the Parseval residual of a frame; generators aim
# two orders tighter so construction error stays separated from verification noise.
PARSEVAL_TOL = 1e-8
GENERATOR_PARSEVAL_TOL = 1e-10
NORM_TOL = 1e-10
DEFAULT_ETA_ADM = 1e-12

ONB_KINDS = ("standard", "fourier", "random_unitary")
PARSEVAL_KINDS = ("harmonic", "mercedes_benz", "random_isometry_rows")


@dataclass(frozen=True)
class StateVector:
    """Unit-norm complex vector; the argument of every entropy functional."""

    entries: np.ndarray

    def __post_init__(self):
        arr = as_complex_vector(self.entries, "state")
        nrm = float(np.linalg.norm(arr))
        if abs(nrm - 1.0) > 1e-12:
            raise ValidationError(f"state must be unit norm, got ||h|| = {nrm!r}")
        arr.setflags(write=False)
        object.__setattr__(self, "entries", arr)

    @classmethod
    def normalized(cls, entries) -> "StateVector":
        arr = as_complex_vector(entries, "state")
        nrm = float(np.linalg.norm(arr))
        if nrm == 0.0:
            raise ValidationError("cannot normalize the zero vector")
        return cls(arr / nrm)

    @property
    def dimension(self) -> int:
        return int(self.entries.size)


@dataclass(frozen=True)
class WeightedFrame:
    """Finite family of complex vectors with positive atom weights.

    vectors has shape (n, d): row alpha is tau_alpha. weights has shape (n,).
    Construction enforces structural well-formedness only (shapes, positivity);
    the numeric Parseval / 1-boundedness invariants are checked by
    validate_frame so that deliberately broken frames can still be built and
    reported on.
    """

    vectors: np.ndarray
    weights: np.ndarray
    label: str = ""

    def __post_init__(self):
        vecs = np.asarray(self.vectors, dtype=np.complex128)
        if vecs.ndim != 2 or vecs.shape[0] < 1 or vecs.shape[1] < 1:
            raise ValidationError(
                f"vectors must be a nonempty (n, d) array, got shape {vecs.shape}"
            )
        w = np.asarray(self.weights, dtype=np.float64)
        if w.ndim != 1 or w.shape[0] != vecs.shape[0]:
            raise ValidationError(
                f"weights must be 1-d with one entry per vector, got shape {w.shape}"
            )
        if not np.all(np.isfinite(vecs.view(np.float64))) or not np.all(np.isfinite(w)):
            raise ValidationError("frame contains non-finite entries")
        if np.any(w <= 0.0):
            raise ValidationError("all weights must be strictly positive")
        vecs.setflags(write=False)
        w.setflags(write=False)
        object.__setattr__(self, "vectors", vecs)
        object.__setattr__(self, "weights", w)

    @property
    def dimension(self) -> int:
        return int(self.vectors.shape[1])

    @property
    def size(self) -> int:
        return int(self.vectors.shape[0])

    def frame_operator(self) -> np.ndarray:
        """sum_alpha w_alpha tau_alpha tau_alpha^* as a dense (d, d) matrix."""
        return (self.weights[:, None] * self.vectors).T @ self.vectors.conj()

    def norms(self) -> np.ndarray:
        return np.linalg.norm(self.vectors, axis=1)


@dataclass(frozen=True)
class FrameValidation:
    """Numeric report for the Parseval and boundedness invariants."""

    parseval_residual: float
    max_norm: float
    trace_gap: float
    passed: bool


@dataclass(frozen=True)
class AdmissibilityReport:
    admissible: bool
    min_coeff_sq: float
    offending_index: int | None = None


def validate_frame(frame: WeightedFrame, tol_parseval: float = PARSEVAL_TOL) -> FrameValidation:
    """Check the Parseval identity and 1-boundedness, reporting rather than raising.

    parseval_residual is the max-entry deviation of the frame operator from the
    identity; trace_gap is |sum w ||tau||^2 - d|, a cheap independent check.
    """
    S = frame.frame_operator()
    residual = float(np.max(np.abs(S - np.eye(frame.dimension))))
    norms = frame.norms()
    max_norm = float(np.max(norms))
    trace_gap = float(abs(np.sum(frame.weights * norms**2) - frame.dimension))
    passed = residual <= tol_parseval and max_norm <= 1.0 + NORM_TOL
    return FrameValidation(residual, max_norm, trace_gap, passed)


def check_frame(frame: WeightedFrame, tol_parseval: float = PARSEVAL_TOL) -> WeightedFrame:
    """Raise ValidationError unless the frame passes validate_frame."""
    report = validate_frame(frame, tol_parseval)
    if not report.passed:
        raise ValidationError(
            f"frame {frame.label!r} fails validation: parseval_residual="
            f"{report.parseval_residual:.3e}, max_norm={report.max_norm!r}"
        )
    return frame


def _phase_fix_columns(m: np.ndarray) -> np.ndarray:
    """Make the first nonzero entry of each column real positive.

    Fixes the gauge of QR-derived unitaries so seeded generation is
    reproducible bit-for-bit.
    """
    out = m.copy()
    for j in range(out.shape[1]):
        col = out[:, j]
        nz = np.flatnonzero(np.abs(col) > 1e-14)
        if nz.size:
            pivot = col[nz[0]]
            out[:, j] = col * (abs(pivot) / pivot)
    return out


def _seeded_isometry(rows: int, cols: int, seed: int) -> np.ndarray:
    """Orthonormal-column (rows, cols) matrix from a seeded complex Gaussian."""
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((rows, cols)) + 1j * rng.standard_normal((rows, cols))
    q, _ = np.linalg.qr(g)
    return _phase_fix_columns(q[:, :cols])


def make_orthonormal_basis(kind: str, d: int, seed: int = 0) -> WeightedFrame:
    """Build an orthonormal basis of C^d as a weight-1 frame.

    kinds:
      standard        the canonical basis e_0 .. e_{d-1}
      fourier         j-th vector has entries exp(2*pi*i*j*k/d)/sqrt(d)
      random_unitary  columns of a seeded Haar-like unitary (QR of a complex
                      Gaussian, first nonzero entry of each column made real
                      positive)
    """
    d = check_positive_int(d, "d")
    if kind == "standard":
        vecs = np.eye(d, dtype=np.complex128)
    elif kind == "fourier":
        j, k = np.meshgrid(np.arange(d), np.arange(d), indexing="ij")
        vecs = np.exp(2j * np.pi * j * k / d) / np.sqrt(d)
    elif kind == "random_unitary":
        vecs = _seeded_isometry(d, d, seed).T.copy()
    else:
        raise ValidationError(f"unknown orthonormal basis kind {kind!r}")
    return WeightedFrame(vecs, np.ones(d), label=f"{kind}:{d}")


def make_parseval_frame(kind: str, n: int, d: int, seed: int = 0) -> WeightedFrame:
    """Build a weight-1 Parseval frame of n vectors for C^d.

    kinds:
      harmonic              alpha-th vector has entries exp(2*pi*i*alpha*k/n)/sqrt(n),
                            k = 0..d-1; vector norms are sqrt(d/n)
      mercedes_benz         n >= 3 equiangular plane vectors
                            sqrt(2/n) * (cos(2*pi*alpha/n), sin(2*pi*alpha/n)); d must be 2
      random_isometry_rows  rows of a seeded n x d isometry (orthonormal
                            columns); automatically 1-bounded
    """
    n = check_positive_int(n, "n")
    d = check_positive_int(d, "d")
    if n < d:
        raise ValidationError(f"need n >= d for a Parseval frame, got n={n}, d={d}")
    if kind == "harmonic":
        alpha, k = np.meshgrid(np.arange(n), np.arange(d), indexing="ij")
        vecs = np.exp(2j * np.pi * alpha * k / n) / np.sqrt(n)
    elif kind == "mercedes_benz":
        if d != 2:
            raise ValidationError("mercedes_benz frames live in dimension 2")
        if n < 3:
            # n = 2 puts both vectors on one line and breaks the Parseval identity
            raise ValidationError("mercedes_benz needs at least 3 vectors")
        angles = 2 * np.pi * np.arange(n) / n
        vecs = np.sqrt(2 / n) * np.stack([np.cos(angles), np.sin(angles)], axis=1)
        vecs = vecs.astype(np.complex128)
    elif kind == "random_isometry_rows":
        vecs = _seeded_isometry(n, d, seed).copy()
    else:
        raise ValidationError(f"unknown Parseval frame kind {kind!r}")
    return WeightedFrame(vecs, np.ones(n), label=f"{kind}:{n}x{d}")


def rotated_basis_2d(theta: float) -> WeightedFrame:
    """Standard basis of C^2 rotated by theta (real rotation, stored complex)."""
    c, s = np.cos(theta), np.sin(theta)
    vecs = np.array([[c, s], [-s, c]], dtype=np.complex128)
    return WeightedFrame(vecs, np.ones(2), label=f"rotated:{theta:.6g}")


def apply_unitary(frame: WeightedFrame, u: np.ndarray) -> WeightedFrame:
    """Frame with every vector replaced by U tau_alpha; weights unchanged."""
    u = np.asarray(u, dtype=np.complex128)
    if u.shape != (frame.dimension, frame.dimension):
        raise ValidationError(
            f"unitary must be {frame.dimension}x{frame.dimension}, got {u.shape}"
        )
    return WeightedFrame(frame.vectors @ u.T, frame.weights,
                         label=f"U({frame.label})")


def analysis_coefficients(h, frame: WeightedFrame) -> np.ndarray:
    """The n coefficients <h, tau_alpha>.

    The inner product is conjugate-linear in the second slot,
    <u, v> = sum_k u_k conj(v_k); only magnitudes feed the entropies, so the
    convention cannot affect anything downstream.
    """
    arr = check_state(h, frame.dimension)
    return frame.vectors.conj() @ arr


def squared_coefficients(h, frame: WeightedFrame) -> np.ndarray:
    """|<h, tau_alpha>|^2 for all alpha, clipped to at most 1 against roundoff."""
    coeffs = analysis_coefficients(h, frame)
    return np.minimum(np.abs(coeffs) ** 2, 1.0)


def admissibility(h, frame: WeightedFrame, eta_adm: float = DEFAULT_ETA_ADM) -> AdmissibilityReport:
    """Check that every squared coefficient clears the floor eta_adm."""
    x = squared_coefficients(h, frame)
    idx = int(np.argmin(x))
    min_sq = float(x[idx])
    if min_sq >= eta_adm:
        return AdmissibilityReport(True, min_sq, None)
    return AdmissibilityReport(False, min_sq, idx)


def mutual_coherence(a: WeightedFrame, b: WeightedFrame) -> float:
    """max over all pairs of |<tau_alpha, omega_beta>|; in [0, 1] for 1-bounded frames."""
    check_same_dimension(a.dimension, b.dimension)
    return float(np.max(np.abs(a.vectors @ b.vectors.conj().T)))


def sample_unit_states(d: int, count: int, seed, complex_field: bool = True) -> np.ndarray:
    """(count, d) array of Haar-uniform unit vectors from a seeded Gaussian.

    seed may be an int or a numpy SeedSequence; complex_field=False draws
    real states uniform on the real sphere.
    """
    d = check_positive_int(d, "d")
    count = check_positive_int(count, "count")
    rng = np.random.default_rng(seed)
    g = rng.standard_normal((count, d))
    if complex_field:
        g = g + 1j * rng.standard_normal((count, d))
    g = g.astype(np.complex128)
    return g / np.linalg.norm(g, axis=1, keepdims=True)


# ---------------------------------------------------------------------------
# JSON round-trip

def frame_to_dict(frame: WeightedFrame) -> dict:
    return {
        "label": frame.label,
        "dimension": frame.dimension,
        "weights": [float(w) for w in frame.weights],
        "vectors": [[[float(z.real), float(z.imag)] for z in row] for row in frame.vectors],
    }


def frame_from_dict(data: dict) -> WeightedFrame:
    for key in ("label", "dimension", "weights", "vectors"):
        if key not in data:
            raise ValidationError(f"frame file is missing the {key!r} field")
    try:
        d = int(data["dimension"])
        rows = [
            [complex(re, im) for re, im in row]
            for row in data["vectors"]
        ]
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"frame file has a malformed 'vectors' field: {exc}") from exc
    vecs = np.asarray(rows, dtype=np.complex128)
    if vecs.ndim != 2 or vecs.shape[1] != d:
        raise ValidationError(
            f"'vectors' rows have length {vecs.shape[-1] if vecs.ndim == 2 else '?'}, "
            f"but 'dimension' is {d}"
        )
    try:
        weights = np.asarray([float(w) for w in data["weights"]], dtype=np.float64)
    except (TypeError, ValueError) as exc:
        raise ValidationError(f"frame file has a malformed 'weights' field: {exc}") from exc
    return WeightedFrame(vecs, weights, label=str(data["label"]))


def save_frame(frame: WeightedFrame, path) -> None:
    Path(path).write_text(json.dumps(frame_to_dict(frame), indent=1) + "\n")


def load_frame(path) -> WeightedFrame:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValidationError(f"frame file {path} is not valid JSON: {exc}") from exc
    if not isinstance(data, dict):
        raise ValidationError(f"frame file {path} must hold a JSON object")
    return frame_from_dict(data)
