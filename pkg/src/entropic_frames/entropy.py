"""Shannon and phi-entropy functionals of a state against a weighted frame.

With x_alpha = |<h, tau_alpha>|^2 and atom weights w_alpha:

    shannon_entropy(h, F)      sum_alpha w_alpha x_alpha log(1 / x_alpha)
    phi_entropy(h, F, phi)     sum_alpha w_alpha x_alpha phi(x_alpha)

The two functionals degenerate differently at vanishing coefficients. Shannon
uses the 0 * log(1/0) = 0 limit convention; phi-entropy refuses inadmissible
states outright, because for families with unbounded x * phi(x) near 0 there
is no safe limit to assign.
"""

from __future__ import annotations

import numpy as np

from ._validation import AdmissibilityError
from .frames import DEFAULT_ETA_ADM, WeightedFrame, squared_coefficients
from .phi import PhiSpec, _eval_array


def shannon_entropy(h, frame: WeightedFrame, eta: float = DEFAULT_ETA_ADM) -> float:
    """Weighted Shannon entropy of the analysis coefficients, in nats.

    Coefficients with x_alpha < eta contribute 0.
    """
    x = squared_coefficients(h, frame)
    mask = x >= eta
    xm = x[mask]
    return float(-np.sum(frame.weights[mask] * xm * np.log(xm)))


def phi_entropy(h, frame: WeightedFrame, spec: PhiSpec,
                eta_adm: float = DEFAULT_ETA_ADM) -> float:
    """Weighted phi-entropy sum w_alpha x_alpha phi(x_alpha).

    Raises AdmissibilityError, naming the offending index, if any squared
    coefficient falls below eta_adm.
    """
    x = squared_coefficients(h, frame)
    idx = int(np.argmin(x))
    if x[idx] < eta_adm:
        raise AdmissibilityError(idx, float(x[idx]), eta_adm)
    return float(np.sum(frame.weights * x * _eval_array(spec, x)))


def shannon_entropy_batch(states: np.ndarray, frame: WeightedFrame,
                          eta: float = DEFAULT_ETA_ADM) -> np.ndarray:
    """shannon_entropy for every row of an (m, d) array of unit states."""
    x = np.abs(states @ frame.vectors.conj().T) ** 2
    np.minimum(x, 1.0, out=x)
    terms = np.where(x >= eta, -x * np.log(np.maximum(x, eta)), 0.0)
    return terms @ frame.weights


def phi_entropy_batch(states: np.ndarray, frame: WeightedFrame, spec: PhiSpec,
                      eta_adm: float = DEFAULT_ETA_ADM) -> tuple[np.ndarray, np.ndarray]:
    """phi_entropy for every row of an (m, d) array of unit states.

    Returns (entropies, admissible_mask); rows with a coefficient below
    eta_adm get NaN and a False mask entry instead of an error.
    """
    x = np.abs(states @ frame.vectors.conj().T) ** 2
    np.minimum(x, 1.0, out=x)
    admissible = np.min(x, axis=1) >= eta_adm
    safe = np.maximum(x, eta_adm)
    values = (safe * _eval_array(spec, safe)) @ frame.weights
    return np.where(admissible, values, np.nan), admissible
