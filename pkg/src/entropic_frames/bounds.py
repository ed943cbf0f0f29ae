"""Uncertainty bounds and verification reports for frame pairs.

Implemented inequalities, all against the mutual coherence c of the pair:

  Buzano             |<u,h><h,v>| <= ||h||^2 (||u|| ||v|| + |<u,v>|) / 2
  Deutsch (ONBs)     2 log n >= S_tau(h) + S_omega(h) >= -2 log((1 + c) / 2)
  Maassen-Uffink /
  Ricaud-Torresani   S_tau(h) + S_omega(h) >= -2 log c
                     (ONBs, extended verbatim to unweighted Parseval frames)
  product bound      S_{tau,phi}(h) * S_{omega,phi}(h) >= phi((1 + c)^2 / 4)
  AM-GM corollary    S_{tau,phi}(h) + S_{omega,phi}(h) >= 2 sqrt(phi((1+c)^2/4))
  conjectured        phi(c^2), a candidate strengthening of the product bound;
                     reported as data, never counted as a theorem violation

A report never raises on a violated inequality: a violation is a finding to
surface, not a crash. Margins are value - bound; an inequality "holds" when
its margin clears -EPS_VERIFY.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field

import numpy as np

from ._validation import (
    AdmissibilityError,
    DomainError,
    ValidationError,
    check_in_range,
    check_positive_int,
    check_same_dimension,
)
from .entropy import phi_entropy, phi_entropy_batch, shannon_entropy, shannon_entropy_batch
from .frames import (
    DEFAULT_ETA_ADM,
    PARSEVAL_TOL,
    WeightedFrame,
    check_state,
    mutual_coherence,
    sample_unit_states,
    squared_coefficients,
    validate_frame,
)
from .phi import PhiSpec, _eval_array, phi_eval

# Margin tolerance: absorbs accumulation over 1e4-term double sums at double
# precision while still catching real violations.
EPS_VERIFY = 1e-9
BUZANO_TOL = 1e-12

CSV_COLUMNS = (
    "state_id", "entropy_a", "entropy_b", "product", "sum", "coherence",
    "product_bound", "conjectured_bound", "margin_product", "margin_deutsch",
    "margin_mu", "holds_product", "holds_deutsch", "holds_mu", "admissible",
)


# ---------------------------------------------------------------------------
# bound formulas

def buzano_check(u, v, h) -> tuple[float, float, bool]:
    """Evaluate both sides of the Buzano inequality for arbitrary vectors.

    Returns (lhs, rhs, holds) with lhs = |<u,h><h,v>| and
    rhs = ||h||^2 (||u|| ||v|| + |<u,v>|) / 2. No norm constraints apply.
    """
    u = np.asarray(u, dtype=np.complex128).ravel()
    v = np.asarray(v, dtype=np.complex128).ravel()
    h = np.asarray(h, dtype=np.complex128).ravel()
    if not (u.size == v.size == h.size):
        raise ValidationError(
            f"buzano_check needs equal dimensions, got {u.size}, {v.size}, {h.size}"
        )
    lhs = abs(np.vdot(h, u) * np.vdot(v, h))
    rhs = float(np.linalg.norm(h) ** 2) * (
        float(np.linalg.norm(u)) * float(np.linalg.norm(v)) + abs(np.vdot(v, u))
    ) / 2.0
    return float(lhs), float(rhs), bool(lhs <= rhs + BUZANO_TOL)


def deutsch_lower_bound(c: float) -> float:
    """-2 log((1 + c) / 2) for coherence c in [0, 1]."""
    c = check_in_range(c, 0.0, 1.0, "coherence c")
    return float(-2.0 * np.log((1.0 + c) / 2.0)) + 0.0  # +0.0 kills -0.0 at c=1


def deutsch_upper_bound(n: int) -> float:
    """2 log n, the entropy-sum ceiling for a pair of orthonormal bases of size n."""
    try:
        n = check_positive_int(n, "n")
    except ValidationError as exc:
        raise DomainError(str(exc)) from exc
    return float(2.0 * np.log(n))


def mu_bound(c: float) -> float:
    """-2 log c for coherence c in (0, 1]; disjoint-support pairs (c = 0) have no finite bound."""
    c = check_in_range(c, 0.0, 1.0, "coherence c", open_lo=True)
    return float(-2.0 * np.log(c)) + 0.0


def product_bound(spec: PhiSpec, c: float) -> float:
    """phi((1 + c)^2 / 4), the proven floor of the phi-entropy product.

    1-boundedness is what keeps the argument inside phi's domain: c <= 1 gives
    (1 + c)^2 / 4 <= 1. c = 0 is legal here (argument 1/4).
    """
    c = check_in_range(c, 0.0, 1.0, "coherence c")
    return float(phi_eval(spec, (1.0 + c) ** 2 / 4.0))


def conjectured_product_bound(spec: PhiSpec, c: float) -> float:
    """phi(c^2), the candidate stronger floor whose validity is an open question."""
    c = check_in_range(c, 0.0, 1.0, "coherence c", open_lo=True)
    return float(phi_eval(spec, c * c))


def amgm_sum_bound(spec: PhiSpec, c: float) -> float:
    """2 sqrt(product_bound): the sum bound the product bound implies via AM-GM."""
    return float(2.0 * np.sqrt(product_bound(spec, c)))


# ---------------------------------------------------------------------------
# frame classification for the Shannon-based checks

def is_orthonormal_basis(frame: WeightedFrame, tol: float = PARSEVAL_TOL) -> bool:
    """n = d, unit weights, and the Parseval identity: the vectors form an ONB."""
    return (
        frame.size == frame.dimension
        and bool(np.all(np.abs(frame.weights - 1.0) <= 1e-12))
        and validate_frame(frame, tol).passed
    )


def is_unweighted_parseval(frame: WeightedFrame, tol: float = PARSEVAL_TOL) -> bool:
    """Unit weights and the Parseval identity.

    The Shannon entropy computed here matches the counting-measure entropy of
    the literature only when every weight is 1, so the Maassen-Uffink and
    Ricaud-Torresani checks require it.
    """
    return bool(np.all(np.abs(frame.weights - 1.0) <= 1e-12)) and validate_frame(frame, tol).passed


# ---------------------------------------------------------------------------
# reports

@dataclass(frozen=True)
class BoundReport:
    """One verification record for a (state, frame pair, phi) triple.

    entropy_a/entropy_b/product/sum are phi-entropies (NaN when the state is
    inadmissible); shannon_a/shannon_b always carry the Shannon entropies under
    the 0 * log(1/0) = 0 convention. margins and holds cover only
    theorem-backed inequalities; the conjectured bound is reported as plain
    data in conjectured_bound / conjectured_margin.
    """

    entropy_a: float
    entropy_b: float
    product: float
    sum: float
    shannon_a: float
    shannon_b: float
    coherence: float
    product_bound: float
    conjectured_bound: float
    sum_bound_amgm: float
    conjectured_margin: float
    margins: dict = field(default_factory=dict)
    holds: dict = field(default_factory=dict)
    state_admissible: bool = True
    state_id: int | None = None

    @property
    def all_hold(self) -> bool:
        return all(self.holds.values())

    def to_dict(self) -> dict:
        def _clean(x):
            return None if (isinstance(x, float) and not np.isfinite(x)) else x

        return {
            "state_id": self.state_id,
            "entropy_a": _clean(self.entropy_a),
            "entropy_b": _clean(self.entropy_b),
            "product": _clean(self.product),
            "sum": _clean(self.sum),
            "shannon_a": self.shannon_a,
            "shannon_b": self.shannon_b,
            "coherence": self.coherence,
            "product_bound": self.product_bound,
            "conjectured_bound": self.conjectured_bound,
            "sum_bound_amgm": self.sum_bound_amgm,
            "conjectured_margin": _clean(self.conjectured_margin),
            "margins": {k: v for k, v in self.margins.items()},
            "holds": {k: v for k, v in self.holds.items()},
            "state_admissible": self.state_admissible,
        }


@dataclass(frozen=True)
class BatchSummary:
    n_states: int
    n_admissible: int
    n_inadmissible: int
    violations: int
    min_margins: dict

    def to_dict(self) -> dict:
        return {
            "n_states": self.n_states,
            "n_admissible": self.n_admissible,
            "n_inadmissible": self.n_inadmissible,
            "violations": self.violations,
            "min_margins": dict(self.min_margins),
        }


@dataclass(frozen=True)
class BatchResult:
    reports: list
    summary: BatchSummary


def _pair_context(a: WeightedFrame, b: WeightedFrame, spec: PhiSpec) -> dict:
    """Coherence, bound values, and the Shannon-check eligibility of a pair."""
    check_same_dimension(a.dimension, b.dimension)
    c = mutual_coherence(a, b)
    ctx = {
        "coherence": c,
        "product_bound": product_bound(spec, c),
        "amgm": amgm_sum_bound(spec, c),
        "conjectured": conjectured_product_bound(spec, c) if c > 0 else float("nan"),
        "onb_pair": is_orthonormal_basis(a) and is_orthonormal_basis(b),
        "parseval_pair": is_unweighted_parseval(a) and is_unweighted_parseval(b),
    }
    ctx["deutsch_lower"] = deutsch_lower_bound(c) if ctx["onb_pair"] else float("nan")
    ctx["deutsch_upper"] = deutsch_upper_bound(a.size) if ctx["onb_pair"] else float("nan")
    ctx["mu"] = mu_bound(c) if (ctx["parseval_pair"] and c > 0) else float("nan")
    return ctx


def _build_report(ctx: dict, sa: float, sb: float, sha: float, shb: float,
                  admissible: bool, eps_verify: float, state_id=None) -> BoundReport:
    prod = sa * sb
    total = sa + sb
    margins: dict = {}
    holds: dict = {}
    if admissible:
        margins["product"] = prod - ctx["product_bound"]
        margins["amgm_sum"] = total - ctx["amgm"]
        if ctx["onb_pair"]:
            margins["deutsch_lower"] = (sha + shb) - ctx["deutsch_lower"]
            margins["deutsch_upper"] = ctx["deutsch_upper"] - (sha + shb)
        if ctx["parseval_pair"] and np.isfinite(ctx["mu"]):
            margins["mu"] = (sha + shb) - ctx["mu"]
        holds = {k: bool(v >= -eps_verify) for k, v in margins.items()}
    return BoundReport(
        entropy_a=float(sa),
        entropy_b=float(sb),
        product=float(prod),
        sum=float(total),
        shannon_a=float(sha),
        shannon_b=float(shb),
        coherence=ctx["coherence"],
        product_bound=ctx["product_bound"],
        conjectured_bound=ctx["conjectured"],
        sum_bound_amgm=ctx["amgm"],
        conjectured_margin=float(prod - ctx["conjectured"]),
        margins=margins,
        holds=holds,
        state_admissible=bool(admissible),
        state_id=state_id,
    )


def verify_pair(h, a: WeightedFrame, b: WeightedFrame, spec: PhiSpec,
                eta_adm: float = DEFAULT_ETA_ADM,
                eps_verify: float = EPS_VERIFY) -> BoundReport:
    """Verify every applicable inequality for one state against a frame pair.

    Shannon-based margins (Deutsch, Maassen-Uffink) appear only when the
    frames qualify for those theorems. An inadmissible state yields a report
    with state_admissible=False, Shannon entropies, NaN phi-entropies, and no
    margins; it never raises.
    """
    arr = check_state(h, a.dimension)
    ctx = _pair_context(a, b, spec)
    sha = shannon_entropy(arr, a, eta_adm)
    shb = shannon_entropy(arr, b, eta_adm)
    try:
        sa = phi_entropy(arr, a, spec, eta_adm)
        sb = phi_entropy(arr, b, spec, eta_adm)
        admissible = True
    except AdmissibilityError:
        sa = sb = float("nan")
        admissible = False
    return _build_report(ctx, sa, sb, sha, shb, admissible, eps_verify)


def verify_batch(a: WeightedFrame, b: WeightedFrame, spec: PhiSpec,
                 n_states: int, seed: int = 0,
                 eta_adm: float = DEFAULT_ETA_ADM,
                 eps_verify: float = EPS_VERIFY,
                 include_reports: bool = True) -> BatchResult:
    """verify_pair over n_states seeded Haar-uniform states, plus a summary.

    Inadmissible samples are skipped (no report) and counted in the summary.
    summary.violations counts reports with any theorem-backed inequality
    failing its margin. Deterministic for a fixed seed.
    """
    n_states = check_positive_int(n_states, "n_states")
    check_same_dimension(a.dimension, b.dimension)
    ctx = _pair_context(a, b, spec)
    states = sample_unit_states(a.dimension, n_states, seed)

    sa, adm_a = phi_entropy_batch(states, a, spec, eta_adm)
    sb, adm_b = phi_entropy_batch(states, b, spec, eta_adm)
    sha = shannon_entropy_batch(states, a, eta_adm)
    shb = shannon_entropy_batch(states, b, eta_adm)
    admissible = adm_a & adm_b

    shannon_sum = sha + shb
    prod = sa * sb
    margin_arrays: dict[str, np.ndarray] = {
        "product": prod - ctx["product_bound"],
        "amgm_sum": (sa + sb) - ctx["amgm"],
    }
    if ctx["onb_pair"]:
        margin_arrays["deutsch_lower"] = shannon_sum - ctx["deutsch_lower"]
        margin_arrays["deutsch_upper"] = ctx["deutsch_upper"] - shannon_sum
    if ctx["parseval_pair"] and np.isfinite(ctx["mu"]):
        margin_arrays["mu"] = shannon_sum - ctx["mu"]

    ok = admissible
    min_margins = {
        k: float(np.min(v[ok])) if np.any(ok) else float("nan")
        for k, v in margin_arrays.items()
    }
    violation_mask = np.zeros(n_states, dtype=bool)
    for v in margin_arrays.values():
        violation_mask |= ok & (v < -eps_verify)
    summary = BatchSummary(
        n_states=n_states,
        n_admissible=int(np.count_nonzero(ok)),
        n_inadmissible=int(n_states - np.count_nonzero(ok)),
        violations=int(np.count_nonzero(violation_mask)),
        min_margins=min_margins,
    )

    reports: list[BoundReport] = []
    if include_reports:
        for i in range(n_states):
            if not ok[i]:
                continue
            reports.append(_build_report(
                ctx, float(sa[i]), float(sb[i]), float(sha[i]), float(shb[i]),
                True, eps_verify, state_id=i,
            ))
    return BatchResult(reports=reports, summary=summary)


# ---------------------------------------------------------------------------
# the product inequality, step by step

def product_double_sum_identity(h, a: WeightedFrame, b: WeightedFrame,
                                spec: PhiSpec,
                                eta_adm: float = DEFAULT_ETA_ADM) -> tuple[float, float]:
    """Expand the entropy product into its brute-force double sum.

    lhs = S_a * S_b; rhs = sum_{alpha,beta} w_alpha v_beta x_alpha y_beta
    phi(x_alpha) phi(y_beta), summed termwise. The two agree up to rounding:
    |lhs - rhs| <= 1e-9 * (1 + |lhs|).
    """
    arr = check_state(h, a.dimension)
    lhs = phi_entropy(arr, a, spec, eta_adm) * phi_entropy(arr, b, spec, eta_adm)
    x = squared_coefficients(arr, a)
    y = squared_coefficients(arr, b)
    term_a = a.weights * x * _eval_array(spec, x)
    term_b = b.weights * y * _eval_array(spec, y)
    rhs = float(np.sum(np.outer(term_a, term_b)))
    return float(lhs), rhs


@dataclass(frozen=True)
class ProofChain:
    """The three decreasing quantities behind the product bound.

    product >= cross_sum >= bound, where cross_sum applies phi to the product
    of squared coefficients inside the double sum:
    sum_{alpha,beta} w_alpha v_beta x_alpha y_beta phi(x_alpha * y_beta).

    The stepwise check scales its tolerance by the magnitudes involved: for
    multiplicative phi the first step is an exact identity, so near-degenerate
    states can push both sides to 1e12 where an absolute epsilon would flag
    nothing but rounding noise.
    """

    product: float
    cross_sum: float
    bound: float

    def holds_stepwise(self, eps: float = EPS_VERIFY) -> bool:
        step1_tol = eps * max(1.0, abs(self.product), abs(self.cross_sum))
        step2_tol = eps * max(1.0, abs(self.cross_sum), abs(self.bound))
        return (self.product >= self.cross_sum - step1_tol
                and self.cross_sum >= self.bound - step2_tol)


def proof_chain(h, a: WeightedFrame, b: WeightedFrame, spec: PhiSpec,
                eta_adm: float = DEFAULT_ETA_ADM) -> ProofChain:
    """Evaluate the product, the submultiplicative cross sum, and the bound."""
    arr = check_state(h, a.dimension)
    x = squared_coefficients(arr, a)
    y = squared_coefficients(arr, b)
    product = phi_entropy(arr, a, spec, eta_adm) * phi_entropy(arr, b, spec, eta_adm)
    xy = np.outer(x, y)
    wv = np.outer(a.weights, b.weights)
    cross = float(np.sum(wv * xy * _eval_array(spec, np.minimum(xy, 1.0))))
    return ProofChain(float(product), cross,
                      product_bound(spec, mutual_coherence(a, b)))


def proof_chain_batch(states: np.ndarray, a: WeightedFrame, b: WeightedFrame,
                      spec: PhiSpec,
                      eta_adm: float = DEFAULT_ETA_ADM) -> tuple[np.ndarray, np.ndarray, float, np.ndarray]:
    """proof_chain for every row of an (m, d) state array.

    Returns (products, cross_sums, bound, admissible_mask); inadmissible rows
    carry NaN.
    """
    sa, adm_a = phi_entropy_batch(states, a, spec, eta_adm)
    sb, adm_b = phi_entropy_batch(states, b, spec, eta_adm)
    admissible = adm_a & adm_b
    x = np.minimum(np.abs(states @ a.vectors.conj().T) ** 2, 1.0)
    y = np.minimum(np.abs(states @ b.vectors.conj().T) ** 2, 1.0)
    xy = np.einsum("ma,mb->mab", x, y)
    np.minimum(xy, 1.0, out=xy)
    phi_xy = _eval_array(spec, np.maximum(xy, eta_adm * eta_adm))
    wv = np.outer(a.weights, b.weights)
    cross = np.einsum("mab,ab->m", xy * phi_xy, wv)
    bound = product_bound(spec, mutual_coherence(a, b))
    nan = float("nan")
    return (np.where(admissible, sa * sb, nan),
            np.where(admissible, cross, nan),
            bound,
            admissible)


# ---------------------------------------------------------------------------
# serialization

def _fmt(x) -> str:
    if x is None or (isinstance(x, float) and not np.isfinite(x)):
        return ""
    return f"{x:.17g}"


def report_csv_row(report: BoundReport) -> list[str]:
    return [
        "" if report.state_id is None else str(report.state_id),
        _fmt(report.entropy_a),
        _fmt(report.entropy_b),
        _fmt(report.product),
        _fmt(report.sum),
        _fmt(report.coherence),
        _fmt(report.product_bound),
        _fmt(report.conjectured_bound),
        _fmt(report.margins.get("product")),
        _fmt(report.margins.get("deutsch_lower")),
        _fmt(report.margins.get("mu")),
        _bool_cell(report.holds.get("product")),
        _bool_cell(report.holds.get("deutsch_lower")),
        _bool_cell(report.holds.get("mu")),
        _bool_cell(report.state_admissible),
    ]


def _bool_cell(value) -> str:
    if value is None:
        return ""
    return "true" if value else "false"


def reports_to_csv(reports) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for report in reports:
        writer.writerow(report_csv_row(report))
    return buf.getvalue()


def batch_to_json(result: BatchResult) -> str:
    payload = {
        "summary": result.summary.to_dict(),
        "reports": [r.to_dict() for r in result.reports],
    }
    return json.dumps(payload, indent=1, sort_keys=True) + "\n"
