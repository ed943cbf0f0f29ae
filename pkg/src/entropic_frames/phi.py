"""Candidate weight functions phi:(0,1] -> (0,inf) and their numeric certification.

An admissible phi must be continuous, decreasing, and submultiplicative
(phi(x*y) <= phi(x)*phi(y) for all x, y in (0,1]). Built-in families:

  power      phi(x) = x**(-p), p > 0        (multiplicative, so certifiable)
  log_shift  phi(x) = a - log(x), a >= 1    (defect (a^2-a) + (a-1)(u+v) + uv >= 0
                                             with u = -log x, v = -log y)
  exp_decay  phi(x) = exp(-x)               (NOT submultiplicative; ships as the
                                             negative control for the rejection path)
  tabulated  piecewise-linear interpolation of (x, phi(x)) samples in log x

The certifier is a falsifier with witnesses, not a theorem prover: it scans a
geometric grid and reports the worst violation it can find.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from ._validation import DomainError, ValidationError

PHI_FAMILIES = ("power", "log_shift", "exp_decay", "tabulated")

# Comparisons are scale-aware: a defect counts as a violation only when it
# exceeds CERT_TOL relative to the magnitudes involved. Absolute comparison
# would misread rounding noise as violations for families like power p=4,
# whose values near x = 1e-18 reach 1e72.
CERT_TOL = 1e-12
CERT_GRID_LO = 1e-9


@dataclass(frozen=True)
class PhiSpec:
    """Descriptor of one candidate phi, evaluable pointwise on (0,1]."""

    family: str
    params: tuple = ()

    def __post_init__(self):
        if self.family not in PHI_FAMILIES:
            raise ValidationError(f"unknown phi family {self.family!r}")
        if self.family == "power":
            (p,) = self.params
            if not (np.isfinite(p) and p > 0):
                raise ValidationError(f"power family needs exponent p > 0, got {p!r}")
        elif self.family == "log_shift":
            (a,) = self.params
            if not (np.isfinite(a) and a >= 1):
                raise ValidationError(f"log_shift family needs shift a >= 1, got {a!r}")
        elif self.family == "exp_decay":
            if self.params != ():
                raise ValidationError("exp_decay takes no parameters")
        else:  # tabulated
            xs, values = self.params
            xs = np.asarray(xs, dtype=np.float64)
            values = np.asarray(values, dtype=np.float64)
            if xs.ndim != 1 or xs.size < 2 or values.shape != xs.shape:
                raise ValidationError("tabulated phi needs matching 1-d x and value arrays")
            if np.any(xs <= 0) or np.any(xs > 1) or np.any(np.diff(xs) <= 0):
                raise ValidationError("tabulated x grid must be strictly increasing within (0, 1]")
            if not np.all(np.isfinite(values)):
                raise ValidationError("tabulated phi values must be finite")
            xs.setflags(write=False)
            values.setflags(write=False)
            object.__setattr__(self, "params", (xs, values))

    @classmethod
    def power(cls, p: float) -> "PhiSpec":
        return cls("power", (float(p),))

    @classmethod
    def log_shift(cls, a: float) -> "PhiSpec":
        return cls("log_shift", (float(a),))

    @classmethod
    def exp_decay(cls) -> "PhiSpec":
        return cls("exp_decay", ())

    @classmethod
    def tabulated(cls, xs, values) -> "PhiSpec":
        return cls("tabulated", (xs, values))

    def describe(self) -> str:
        if self.family == "power":
            return f"power:{self.params[0]:g}"
        if self.family == "log_shift":
            return f"log_shift:{self.params[0]:g}"
        if self.family == "exp_decay":
            return "exp_decay"
        return f"tabulated[{self.params[0].size} nodes]"

    def to_dict(self) -> dict:
        if self.family == "power":
            params = {"p": self.params[0]}
        elif self.family == "log_shift":
            params = {"a": self.params[0]}
        elif self.family == "exp_decay":
            params = {}
        else:
            xs, values = self.params
            params = {"x": [float(v) for v in xs], "phi": [float(v) for v in values]}
        return {"family": self.family, "params": params}

    @classmethod
    def from_dict(cls, data: dict) -> "PhiSpec":
        try:
            family = data["family"]
            params = data["params"]
        except (KeyError, TypeError) as exc:
            raise ValidationError(f"phi spec needs 'family' and 'params' fields: {exc}") from exc
        if family == "power":
            return cls.power(params["p"])
        if family == "log_shift":
            return cls.log_shift(params["a"])
        if family == "exp_decay":
            return cls.exp_decay()
        if family == "tabulated":
            return cls.tabulated(params["x"], params["phi"])
        raise ValidationError(f"unknown phi family {family!r}")


@dataclass(frozen=True)
class PhiCertificate:
    """Outcome of the grid certification of one PhiSpec.

    witness, present only when submultiplicativity fails, is the quadruple
    (x, y, phi(x*y), phi(x)*phi(y)) with the largest defect found.
    """

    positive: bool
    decreasing: bool
    submultiplicative: bool
    grid_size: int
    witness: tuple[float, float, float, float] | None = None

    @property
    def certified(self) -> bool:
        return self.positive and self.decreasing and self.submultiplicative

    def to_dict(self) -> dict:
        return {
            "positive": self.positive,
            "decreasing": self.decreasing,
            "submultiplicative": self.submultiplicative,
            "certified": self.certified,
            "grid_size": self.grid_size,
            "witness": None if self.witness is None else {
                "x": self.witness[0],
                "y": self.witness[1],
                "phi_xy": self.witness[2],
                "phi_x_phi_y": self.witness[3],
            },
        }


def _eval_array(spec: PhiSpec, x: np.ndarray) -> np.ndarray:
    if spec.family == "power":
        return np.power(x, -spec.params[0])
    if spec.family == "log_shift":
        return spec.params[0] - np.log(x)
    if spec.family == "exp_decay":
        return np.exp(-x)
    xs, values = spec.params
    # linear interpolation in log x; np.interp clamps to the end values, which
    # keeps evaluation total and preserves weak decrease outside the table
    return np.interp(np.log(x), np.log(xs), values)


def phi_eval(spec: PhiSpec, x):
    """Evaluate phi at x; x may be a scalar or an array, with entries in (0, 1]."""
    arr = np.asarray(x, dtype=np.float64)
    if arr.size == 0:
        return arr
    if np.any(~np.isfinite(arr)) or np.any(arr <= 0.0) or np.any(arr > 1.0):
        bad = arr.reshape(-1)
        bad = bad[(~np.isfinite(bad)) | (bad <= 0.0) | (bad > 1.0)][0]
        raise DomainError(f"phi is defined on (0, 1], got argument {bad!r}")
    out = _eval_array(spec, arr)
    return float(out) if np.isscalar(x) or arr.ndim == 0 else out


def certify_phi(spec: PhiSpec, grid_size: int = 200) -> PhiCertificate:
    """Falsify positivity, decrease, and submultiplicativity on a geometric grid.

    The grid spans [1e-9, 1] with grid_size points; submultiplicativity is
    checked on all grid pairs. Comparisons carry a relative tolerance of 1e-12
    so exact-equality families (power) are not failed on rounding noise; in
    particular weak (non-strict) decrease is accepted.
    """
    if not isinstance(grid_size, (int, np.integer)) or grid_size < 2:
        raise ValidationError(f"grid_size must be an integer >= 2, got {grid_size!r}")
    grid = np.geomspace(CERT_GRID_LO, 1.0, int(grid_size))
    grid[-1] = 1.0
    vals = _eval_array(spec, grid)

    positive = bool(np.all(vals > 0.0))

    diffs = np.diff(vals)  # ascending x, so decrease means diffs <= 0
    dec_tol = CERT_TOL * np.maximum(1.0, np.abs(vals[:-1]))
    decreasing = bool(np.all(diffs <= dec_tol))

    prods = np.outer(vals, vals)
    phi_xy = _eval_array(spec, np.outer(grid, grid))
    defect = phi_xy - prods
    rel_defect = defect / np.maximum(1.0, np.abs(prods))
    submultiplicative = bool(np.all(rel_defect <= CERT_TOL))

    witness = None
    if not submultiplicative:
        i, j = np.unravel_index(int(np.argmax(rel_defect)), rel_defect.shape)
        witness = (float(grid[i]), float(grid[j]), float(phi_xy[i, j]), float(prods[i, j]))

    return PhiCertificate(positive, decreasing, submultiplicative, int(grid_size), witness)
