"""Command-line front end: reproducible verification, certification, and search runs.

Subcommands
    verify       sample states against a frame pair and check every bound
    certify-phi  run the phi certifier and report witnesses
    bounds       tabulate bound values over coherence values
    search       minimize the entropy product and probe the conjectured bound
    sweep        rotation sweep in dimension 2 (product and Shannon-sum minima)
    rerun        replay a run from a saved manifest

Every run writes report.json / report.csv (per --format) plus manifest.json
into --out. All randomness flows from one --seed (fallback: the
ENTROPIC_FRAMES_SEED environment variable); per-task seeds are derived by
fixed offsets recorded in the manifest, so a given seed reproduces primary
outputs byte for byte.

Exit codes: 0 success; 1 usage or validation error; 2 an inequality or
certification check failed; 3 the search flagged a counterexample candidate.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from datetime import datetime, timezone
from pathlib import Path

from . import __version__
from ._validation import DomainError, ValidationError
from .bounds import (
    amgm_sum_bound,
    batch_to_json,
    conjectured_product_bound,
    deutsch_lower_bound,
    mu_bound,
    product_bound,
    reports_to_csv,
    verify_batch,
)
from .frames import (
    WeightedFrame,
    check_frame,
    load_frame,
    make_orthonormal_basis,
    make_parseval_frame,
    rotated_basis_2d,
)
from .phi import PhiSpec, certify_phi
from .search import (
    SearchConfig,
    interior_angle_grid,
    probe_conjecture,
    sweep_rotation,
    sweep_to_csv,
)

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VIOLATION = 2
EXIT_CANDIDATE = 3

# fixed seed offsets so one --seed drives every random task distinctly
SEED_OFFSET_FRAME_A = 1
SEED_OFFSET_FRAME_B = 2
SEED_OFFSET_STATES = 0
SEED_OFFSET_SEARCH = 0


class _Parser(argparse.ArgumentParser):
    """argparse exits with code 2 on usage errors; the contract here is 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        raise SystemExit(EXIT_USAGE)


def parse_frame_spec(text: str, seed: int, tol: float = 1e-8) -> WeightedFrame:
    """Build a frame from a kind:params spec string.

    Grammar: standard:D | fourier:D | random_unitary:D | harmonic:NxD |
    random_isometry_rows:NxD | mercedes_benz:N[x2] | rotated:THETA |
    file:PATH. Generated frames are valid by construction; file frames are
    validated before use.
    """
    kind, _, params = text.partition(":")
    kind = kind.strip()
    try:
        if kind in ("standard", "fourier", "random_unitary"):
            return make_orthonormal_basis(kind, int(params), seed)
        if kind in ("harmonic", "random_isometry_rows"):
            n_str, _, d_str = params.partition("x")
            return make_parseval_frame(kind, int(n_str), int(d_str), seed)
        if kind == "mercedes_benz":
            n_str, _, d_str = params.partition("x")
            d = int(d_str) if d_str else 2
            return make_parseval_frame(kind, int(n_str), d, seed)
        if kind == "rotated":
            return rotated_basis_2d(float(params))
        if kind == "file":
            return check_frame(load_frame(params), tol)
    except (TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise ValidationError(f"bad frame spec {text!r}: {exc}") from exc
    raise ValidationError(f"unknown frame kind {kind!r} in spec {text!r}")


def parse_phi_spec(text: str) -> PhiSpec:
    """PhiSpec from power:P | log_shift:A | exp_decay | file:PATH."""
    family, _, params = text.partition(":")
    family = family.strip()
    try:
        if family == "power":
            return PhiSpec.power(float(params))
        if family == "log_shift":
            return PhiSpec.log_shift(float(params))
        if family == "exp_decay":
            return PhiSpec.exp_decay()
        if family == "file":
            return PhiSpec.from_dict(json.loads(Path(params).read_text()))
    except ValidationError:
        raise
    except (TypeError, ValueError, OSError) as exc:
        raise ValidationError(f"bad phi spec {text!r}: {exc}") from exc
    raise ValidationError(f"unknown phi family {family!r} in spec {text!r}")


def _resolve_seed(value) -> int:
    if value is not None:
        return int(value)
    env = os.environ.get("ENTROPIC_FRAMES_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError as exc:
            raise ValidationError(
                f"ENTROPIC_FRAMES_SEED must be an integer, got {env!r}"
            ) from exc
    return 0


def _write_outputs(out_dir: str, fmt: str, manifest: dict,
                   json_payload: dict | None, csv_text: str | None) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    if json_payload is not None and fmt in ("json", "both"):
        (out / "report.json").write_text(
            json.dumps(json_payload, indent=1, sort_keys=True) + "\n")
    if csv_text is not None and fmt in ("csv", "both"):
        (out / "report.csv").write_text(csv_text)
    (out / "manifest.json").write_text(
        json.dumps(manifest, indent=1, sort_keys=True) + "\n")


def _manifest(command: str, params: dict, seed: int) -> dict:
    return {
        "command": command,
        "parameters": params,
        "seed": seed,
        "derived_seeds": {
            "frame_a": seed + SEED_OFFSET_FRAME_A,
            "frame_b": seed + SEED_OFFSET_FRAME_B,
            "states": seed + SEED_OFFSET_STATES,
            "search": seed + SEED_OFFSET_SEARCH,
        },
        "tool_version": __version__,
        "timestamp": datetime.now(timezone.utc).isoformat(),
    }


# ---------------------------------------------------------------------------
# command handlers: take a plain parameter dict so manifests can replay them

def run_verify(params: dict) -> int:
    seed = int(params["seed"])
    tol = float(params["tol"])
    a = parse_frame_spec(params["frame_a"], seed + SEED_OFFSET_FRAME_A, tol)
    b = parse_frame_spec(params["frame_b"], seed + SEED_OFFSET_FRAME_B, tol)
    spec = parse_phi_spec(params["phi"])
    result = verify_batch(
        a, b, spec,
        n_states=int(params["states"]),
        seed=seed + SEED_OFFSET_STATES,
        eta_adm=float(params["eta_adm"]),
    )
    manifest = _manifest("verify", params, seed)
    payload = json.loads(batch_to_json(result))
    _write_outputs(params["out"], params["format"], manifest, payload,
                   reports_to_csv(result.reports))
    s = result.summary
    print(f"verify: {s.n_admissible}/{s.n_states} admissible states, "
          f"{s.n_inadmissible} skipped, {s.violations} violations")
    for name, margin in sorted(s.min_margins.items()):
        print(f"  min margin[{name}] = {margin:.6e}")
    return EXIT_OK if s.violations == 0 else EXIT_VIOLATION


def run_certify_phi(params: dict) -> int:
    spec = parse_phi_spec(params["phi"])
    cert = certify_phi(spec, int(params["grid"]))
    manifest = _manifest("certify-phi", params, int(params["seed"]))
    _write_outputs(params["out"], params["format"], manifest,
                   {"phi": spec.to_dict(), "certificate": cert.to_dict()}, None)
    if cert.certified:
        print(f"certify-phi: {spec.describe()} certified "
              f"(grid {cert.grid_size})")
        return EXIT_OK
    print(f"certify-phi: {spec.describe()} REJECTED "
          f"(positive={cert.positive}, decreasing={cert.decreasing}, "
          f"submultiplicative={cert.submultiplicative})")
    if cert.witness is not None:
        x, y, pxy, pxpy = cert.witness
        print(f"  witness: x={x:.6g} y={y:.6g} phi(xy)={pxy:.6g} "
              f"> phi(x)*phi(y)={pxpy:.6g}")
    return EXIT_VIOLATION


def run_bounds(params: dict) -> int:
    spec = parse_phi_spec(params["phi"])
    cs = [float(piece) for c in params["c"] for piece in str(c).split(",") if piece]
    rows = []
    for c in cs:
        if not (0.0 <= c <= 1.0):
            raise DomainError(f"coherence value {c!r} outside [0, 1]")
        row = {
            "c": c,
            "deutsch": deutsch_lower_bound(c),
            "mu": mu_bound(c) if c > 0 else None,
            "product_bound": product_bound(spec, c),
            "conjectured": conjectured_product_bound(spec, c) if c > 0 else None,
            "amgm_sum": amgm_sum_bound(spec, c),
        }
        rows.append(row)
    header = ["c", "deutsch", "mu", "product_bound", "conjectured", "amgm_sum"]
    lines = [",".join(header)]
    for row in rows:
        lines.append(",".join(
            "" if row[k] is None else f"{row[k]:.17g}" for k in header))
    csv_text = "\n".join(lines) + "\n"
    manifest = _manifest("bounds", params, int(params["seed"]))
    _write_outputs(params["out"], params["format"], manifest,
                   {"phi": spec.to_dict(), "rows": rows}, csv_text)
    print(f"{'c':>12} {'deutsch':>12} {'mu':>12} {'product':>12} "
          f"{'conjectured':>12} {'amgm_sum':>12}")
    for row in rows:
        cells = [f"{row['c']:12.6g}"]
        for key in ("deutsch", "mu", "product_bound", "conjectured", "amgm_sum"):
            cells.append("         n/a" if row[key] is None else f"{row[key]:12.6g}")
        print(" ".join(cells))
    return EXIT_OK


def _search_config(params: dict, seed: int) -> SearchConfig:
    return SearchConfig(
        n_starts=int(params["starts"]),
        max_iters=int(params["max_iters"]),
        fd_step=float(params["fd_step"]),
        grad_tol=float(params["grad_tol"]),
        eta_floor=float(params["eta_floor"]),
        seed=seed + SEED_OFFSET_SEARCH,
        jobs=int(params["jobs"]),
    )


def run_search(params: dict) -> int:
    seed = int(params["seed"])
    a = parse_frame_spec(params["frame_a"], seed + SEED_OFFSET_FRAME_A)
    b = parse_frame_spec(params["frame_b"], seed + SEED_OFFSET_FRAME_B)
    spec = parse_phi_spec(params["phi"])
    probe = probe_conjecture(a, b, spec, _search_config(params, seed))
    result = probe.search
    manifest = _manifest("search", params, seed)
    csv_lines = ["start_seed,final_value,iterations,converged"]
    for rec in result.per_start:
        csv_lines.append(
            f"{rec.start_seed},{rec.final_value:.17g},{rec.iterations},"
            f"{'true' if rec.converged else 'false'}")
    _write_outputs(params["out"], params["format"], manifest,
                   probe.to_dict(verbose=bool(params["verbose"])),
                   "\n".join(csv_lines) + "\n")
    print(f"search: best_value={result.best_value:.12g} "
          f"bound={result.bound_value:.12g} gap={result.gap:.6e}")
    print(f"  conjectured={result.conjectured_value:.12g} "
          f"conjecture_gap={result.conjecture_gap:.6e} "
          f"boundary_flag={result.boundary_flag}")
    if probe.counterexample_candidate:
        print("  COUNTEREXAMPLE CANDIDATE for the conjectured bound")
        return EXIT_CANDIDATE
    return EXIT_OK


def run_sweep(params: dict) -> int:
    seed = int(params["seed"])
    spec = parse_phi_spec(params["phi"])
    angles = interior_angle_grid(int(params["angles"]))
    result = sweep_rotation(angles, spec, _search_config(params, seed))
    manifest = _manifest("sweep", params, seed)
    payload = {
        "rows": [
            {
                "theta": row.theta,
                "coherence": row.coherence,
                "min_product": row.min_product,
                "product_bound": row.product_bound,
                "conjectured_bound": row.conjectured_bound,
                "min_shannon_sum": row.min_shannon_sum,
                "deutsch_bound": row.deutsch_bound,
                "mu_bound": row.mu_bound,
                "boundary_flag": row.boundary_flag,
                "counterexample_candidate": row.counterexample_candidate,
            }
            for row in result.rows
        ],
        "skipped": [{"theta": t, "reason": r} for t, r in result.skipped],
    }
    _write_outputs(params["out"], params["format"], manifest, payload,
                   sweep_to_csv(result))
    print(f"sweep: {len(result.rows)} rows, {len(result.skipped)} skipped")
    for row in result.rows:
        print(f"  theta={row.theta:.6f} c={row.coherence:.6f} "
              f"min_product={row.min_product:.9g} bound={row.product_bound:.9g}")
    if any(row.counterexample_candidate for row in result.rows):
        print("  COUNTEREXAMPLE CANDIDATE for the conjectured bound")
        return EXIT_CANDIDATE
    return EXIT_OK


_HANDLERS = {
    "verify": run_verify,
    "certify-phi": run_certify_phi,
    "bounds": run_bounds,
    "search": run_search,
    "sweep": run_sweep,
}


def run_rerun(params: dict) -> int:
    data = json.loads(Path(params["manifest"]).read_text())
    command = data.get("command")
    if command not in _HANDLERS:
        raise ValidationError(f"manifest names unknown command {command!r}")
    replay = dict(data["parameters"])
    if params.get("out"):
        replay["out"] = params["out"]
    return _HANDLERS[command](replay)


def _add_common(p: argparse.ArgumentParser):
    p.add_argument("--seed", type=int, default=None,
                   help="master seed (fallback: ENTROPIC_FRAMES_SEED, then 0)")
    p.add_argument("--out", default=".", help="output directory")
    p.add_argument("--format", choices=("json", "csv", "both"), default="both")
    p.add_argument("--jobs", type=int, default=1,
                   help="cap on concurrent work items")


def _add_search_flags(p: argparse.ArgumentParser):
    p.add_argument("--starts", type=int, default=64)
    p.add_argument("--max-iters", type=int, default=2000)
    p.add_argument("--fd-step", type=float, default=1e-6)
    p.add_argument("--grad-tol", type=float, default=1e-8)
    p.add_argument("--eta-floor", type=float, default=1e-8)
    p.add_argument("--verbose", action="store_true",
                   help="include per-start objective traces in report.json")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="entropic-frames",
                     description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("verify", help="check bounds on sampled states")
    p.add_argument("--frame-a", required=True)
    p.add_argument("--frame-b", required=True)
    p.add_argument("--phi", required=True)
    p.add_argument("--states", type=int, default=1000)
    p.add_argument("--eta-adm", type=float, default=1e-12)
    p.add_argument("--tol", type=float, default=1e-8,
                   help="Parseval tolerance for frame validation")
    _add_common(p)

    p = sub.add_parser("certify-phi", help="certify a phi spec")
    p.add_argument("phi")
    p.add_argument("--grid", type=int, default=200)
    _add_common(p)

    p = sub.add_parser("bounds", help="tabulate bound values")
    p.add_argument("--phi", required=True)
    p.add_argument("--c", action="append", required=True,
                   help="coherence value; repeatable")
    _add_common(p)

    p = sub.add_parser("search", help="minimize the entropy product")
    p.add_argument("--frame-a", required=True)
    p.add_argument("--frame-b", required=True)
    p.add_argument("--phi", required=True)
    _add_search_flags(p)
    _add_common(p)

    p = sub.add_parser("sweep", help="rotation sweep in dimension 2")
    p.add_argument("--phi", required=True)
    p.add_argument("--angles", type=int, default=16,
                   help="number of interior angles in (0, pi/2)")
    _add_search_flags(p)
    _add_common(p)

    p = sub.add_parser("rerun", help="replay a saved manifest")
    p.add_argument("--manifest", required=True)
    p.add_argument("--out", default=None,
                   help="override the output directory of the replay")

    return parser


def _params_from_args(args: argparse.Namespace) -> dict:
    params = {k.replace("-", "_"): v for k, v in vars(args).items()
              if k != "command"}
    if args.command != "rerun":
        params["seed"] = _resolve_seed(params.get("seed"))
    return params


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:  # argparse help/version (0) or usage error (1)
        return int(exc.code or 0)
    try:
        params = _params_from_args(args)
        if args.command == "rerun":
            return run_rerun(params)
        return _HANDLERS[args.command](params)
    except (ValidationError, DomainError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
