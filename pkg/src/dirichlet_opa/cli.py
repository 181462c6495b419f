"""
Command-line front end.

    dirichlet-opa opa --f "1,-1" --alpha 0 --dmax 6
    dirichlet-opa bounds --family linear-plus --alpha 0 --d 1 --nmax 100
    dirichlet-opa capacity --alpha 0.5 --depth 20
    dirichlet-opa experiment prop45-kernel --alpha 0 --nmax 200

Exit codes: 0 success, 1 numerical failure or a failed verdict, 2 invalid
input.  Reports are JSON (schema in docs/report.schema.json) or CSV.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from typing import Dict, Iterable, List, Optional

import numpy as np

from . import __version__
from .bounds import check_theorem41, corollary_caps, phi, psi
from .capacity import (
    METRIC,
    KernelKind,
    build_middle_eps,
    capacity_bounds,
    carleson_sum,
    eps_for_alpha,
    hausdorff_dimension,
    level_stats,
)
from .errors import ConditioningError, SingularSystemError, TruncationError
from .experiments import EXPERIMENTS
from .opa_solver import opa_sequence
from .series_core import PowerSeries, build_geometric, build_kernel, build_singular_inner

SCHEMA_NAME = "dirichlet-opa-report"
SCHEMA_VERSION = 1

FUNCTION_HELP = """\
function grammar:
  comma-separated Taylor coefficients a_0,a_1,...; each is a real or complex
  number such as 2, -0.5, 1.5e-3, 2i, 1-3i, -0.25+1e-2i
  or a named builder (truncated at --N):
    kernel:w       reproducing kernel k_w, |w| < 1 (uses --alpha)
    geometric:a    1/(1 - z/a), |a| > 1
    singular:c     exp(-(1+z)/(c-z)), c >= 1
"""


class UsageError(Exception):
    """Input violates a precondition; maps to exit status 2."""


def parse_complex(text: str) -> complex:
    """Parse "re", "imi" or "re+imi" (``j`` also accepted)."""
    t = text.strip().replace(" ", "")
    try:
        value = complex(t.replace("i", "j"))
    except ValueError:
        raise UsageError(f"cannot parse number {text!r}") from None
    if not (math.isfinite(value.real) and math.isfinite(value.imag)):
        raise UsageError(f"number must be finite, got {text!r}")
    return value


def parse_function(spec: str, N: int, alpha: float) -> PowerSeries:
    spec = spec.strip()
    name, _, arg = spec.partition(":")
    try:
        if name == "kernel":
            return build_kernel(parse_complex(arg), alpha, N)
        if name == "geometric":
            return build_geometric(parse_complex(arg), N, alpha)
        if name == "singular":
            c = parse_complex(arg)
            if c.imag != 0:
                raise UsageError("singular:c needs a real c")
            return build_singular_inner(c.real, N)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc
    coeffs = [parse_complex(t) for t in spec.split(",")]
    return PowerSeries.from_coeffs(coeffs)


def _clean(value):
    """JSON-safe scalar: numpy types unwrapped, non-finite floats to None, complex to [re, im]."""
    if isinstance(value, (np.bool_, bool)):
        return bool(value)
    if isinstance(value, (np.integer, int)):
        return int(value)
    if isinstance(value, (complex, np.complexfloating)):
        value = complex(value)
        if value.imag == 0:
            value = value.real
        else:
            return [_clean(value.real), _clean(value.imag)]
    if isinstance(value, (float, np.floating)):
        value = float(value)
        return value if math.isfinite(value) else None
    if isinstance(value, dict):
        return {str(k): _clean(v) for k, v in value.items()}
    if isinstance(value, (list, tuple, np.ndarray)):
        return [_clean(v) for v in value]
    return value


def render_json(command: str, config: Dict, sections: Dict) -> str:
    doc = {
        "schema": SCHEMA_NAME,
        "schema_version": SCHEMA_VERSION,
        "generator_version": __version__,
        "command": command,
        "config": config,
        **sections,
    }
    return json.dumps(_clean(doc), indent=2) + "\n"


def render_csv(rows: List[Dict]) -> str:
    columns: List[str] = []
    for row in rows:
        for k in row:
            if k not in columns:
                columns.append(k)
    buf = io.StringIO()
    writer = csv.DictWriter(buf, fieldnames=columns, extrasaction="ignore")
    writer.writeheader()
    for row in rows:
        out = {}
        for k in columns:
            v = _clean(row.get(k))
            out[k] = "" if v is None else (";".join(map(str, v)) if isinstance(v, list) else v)
        writer.writerow(out)
    return buf.getvalue()


def _emit(args, command: str, sections: Dict, rows: List[Dict]):
    config = {k: v for k, v in sorted(vars(args).items()) if k not in ("func", "output", "format")}
    text = render_json(command, config, sections) if args.format == "json" else render_csv(rows)
    if args.output in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.output, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _require(cond: bool, message: str):
    if not cond:
        raise UsageError(message)


def cmd_opa(args) -> int:
    _require(args.dmax >= 0, "--dmax must be non-negative")
    _require(args.N >= 0, "--N must be non-negative")
    f = parse_function(args.f, args.N, args.alpha)
    _require(not f.is_zero(), "the zero function has no optimal polynomial approximants")
    results = opa_sequence(f, args.dmax, args.alpha)
    rows = [
        {
            "d": r.degree,
            "residual": r.residual,
            "residual_sq": r.residual ** 2,
            "residual_projection": r.residual_projection,
            "cond": r.cond,
            "residual_tail_bound": r.residual_tail_bound,
            "consistent": r.consistent,
            "flags": ";".join(r.flags),
        }
        for r in results
    ]
    coeffs = [{"d": r.degree, "coefficients": list(r.coefficients)} for r in results]
    _emit(args, "opa", {"rows": rows, "coefficients": coeffs}, rows)
    return 0 if all(r.consistent for r in results) else 1


def _family(args):
    ns = list(range(args.nmin, args.nmax + 1))
    _require(len(ns) > 0, f"empty n-range {args.nmin}..{args.nmax}")
    if args.family == "linear-plus":
        f = PowerSeries.from_coeffs([1, -1])
        seq = [PowerSeries.from_coeffs([1 + 1 / n, -1]) for n in ns]
    elif args.family == "linear-minus":
        f = PowerSeries.from_coeffs([1, -1])
        seq = [PowerSeries.from_coeffs([1 - 1 / n, -1]) for n in ns]
    elif args.family == "perturb":
        _require(args.f is not None and args.g is not None, "family 'perturb' needs --f and --g")
        f = parse_function(args.f, args.N, args.alpha)
        g = parse_function(args.g, args.N, args.alpha)
        seq = [f + g / n for n in ns]
    else:
        raise UsageError(f"unknown family {args.family!r}")
    _require(not f.is_zero(), "the limit function must be nonzero")
    return f, seq, ns


def cmd_bounds(args) -> int:
    _require(args.d >= 0, "--d must be non-negative")
    table = []
    for d in range(args.d + 1):
        pc, qc = corollary_caps(d, args.alpha)
        table.append({"d": d, "phi": phi(d, args.alpha), "psi": psi(d, args.alpha), "phi_cap": pc, "psi_cap": qc})
    if args.table:
        _emit(args, "bounds", {"constants": table}, table)
        return 0

    if args.family == "random":
        _require(args.trials > 0, "--trials must be positive")
        rng = np.random.default_rng(args.seed)
        rows = []
        for t in range(args.trials):
            f, fn = (PowerSeries(rng.uniform(-1, 1, 7) + 1j * rng.uniform(-1, 1, 7)) for _ in range(2))
            rep = check_theorem41([fn], f, args.d, args.alpha)
            rec = vars(rep.records[0]).copy()
            rec["index"] = t
            rows.append(rec)
    else:
        f, seq, ns = _family(args)
        rep = check_theorem41(seq, f, args.d, args.alpha, indices=ns)
        rows = [vars(r).copy() for r in rep.records]
    for r in rows:
        r["passed"] = r["pass_a"] and r["pass_b"] and r["pass_c"]
    passed = all(r["passed"] for r in rows)
    summary = {
        "passed": passed,
        "alpha": args.alpha,
        "d": args.d,
        "phi": phi(args.d, args.alpha),
        "psi": psi(args.d, args.alpha),
        "failures": sum(not r["passed"] for r in rows),
        "matrix_norm_convention": "weighted basis for M_n - M; monomial basis for inverses",
    }
    _emit(args, "bounds", {"summary": summary, "rows": rows, "constants": table}, rows)
    return 0 if passed else 1


def cmd_capacity(args) -> int:
    _require((args.eps is None) != (args.alpha is None), "give exactly one of --eps or --alpha")
    if args.alpha is not None:
        _require(0 < args.alpha <= 1, "--alpha must lie in (0, 1]")
        eps = eps_for_alpha(args.alpha)
        kalpha = args.alpha if args.kernel_alpha is None else args.kernel_alpha
    else:
        _require(0 < args.eps < 1, "--eps must lie in (0, 1)")
        eps = args.eps
        kalpha = 1.0 if args.kernel_alpha is None else args.kernel_alpha
    _require(0 < kalpha <= 1, "kernel exponent must lie in (0, 1]")
    _require(args.depth >= 0, "--depth must be non-negative")
    _require(0 < args.L0 <= 2 * math.pi, "--L0 must lie in (0, 2pi]")

    cset = build_middle_eps(eps, args.depth, args.L0)
    kind = KernelKind(kalpha)
    carl = carleson_sum(cset)
    bounds = capacity_bounds(cset, kind) if args.depth >= 2 else None

    rows = []
    for n in range(args.depth + 1):
        d_n, e_n = level_stats(cset, n)
        row = {"n": n, "arc_length": cset.arc_length(n), "d_n": d_n, "e_n": e_n}
        if bounds is not None and n < args.depth:
            row["lower_partial"] = bounds.lower_partials[n]
            row["upper_partial"] = bounds.upper_partials[n]
        row["carleson_term"] = carl.generation_terms[n - 1] if n >= 1 else carl.root_term
        rows.append(row)
    summary = {
        "eps": eps,
        "kernel": kind.name,
        "metric": METRIC,
        "hausdorff_dimension": hausdorff_dimension(eps),
        "carleson_partial": carl.partial,
        "carleson_converged": carl.converged,
    }
    if bounds is not None:
        summary.update(
            lower_partial=bounds.lower_partial,
            upper_partial=bounds.upper_partial,
            converged=bounds.converged,
            upper_extrapolated=bounds.upper_extrapolated,
            capacity_lower_bound=bounds.capacity_lower_bound,
            positive_capacity_certificate=bounds.capacity_lower_bound is not None,
            extrapolation=bounds.extrapolation,
        )
    else:
        summary["note"] = "capacity bounds need depth >= 2"
    _emit(args, "capacity", {"summary": summary, "rows": rows}, rows)
    return 0


def cmd_experiment(args) -> int:
    name = args.name
    if name not in EXPERIMENTS:
        raise UsageError(f"unknown experiment {name!r}; choose from {', '.join(EXPERIMENTS)}")
    _require(args.nmax is None or args.nmax >= 1, "--nmax must be positive")
    kw = {}
    if args.N is not None:
        _require(args.N >= 0, "--N must be non-negative")
        kw["N"] = args.N
    if args.tol is not None:
        _require(args.tol > 0, "--tol must be positive")
        kw["tol"] = args.tol
    alpha = args.alpha
    try:
        if name == "singular-inner":
            alpha = 0.0 if alpha is None else alpha
            _require(alpha <= 0, "singular-inner needs --alpha <= 0")
            report = EXPERIMENTS[name](alpha=alpha, n_max=args.nmax or 50, **kw)
        elif name == "linear-families":
            alpha = 0.0 if alpha is None else alpha
            kw.pop("N", None)
            kw.pop("tol", None)
            report = EXPERIMENTS[name](alpha=alpha, n_max=args.nmax or 8, d_max=args.dmax)
        else:
            a_seq = [1 + 1 / n for n in range(1, (args.nmax or 200) + 1)]
            if name == "prop45-kernel":
                alpha = 0.0 if alpha is None else alpha
                _require(alpha <= 0, "prop45-kernel needs --alpha <= 0")
            else:
                alpha = 1.0 if alpha is None else alpha
                _require(alpha > 0, "prop45-geometric needs --alpha > 0")
            report = EXPERIMENTS[name](alpha=alpha, a_seq=a_seq, **kw)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc

    rows = [dict(experiment=name, **r) for r in report.records]
    sections = {
        "experiments": {
            name: {
                "parameters": report.parameters,
                "verdict": report.verdict,
                "passed": report.passed,
                "notes": report.notes,
                "rows": report.records,
            }
        }
    }
    _emit(args, "experiment", sections, rows)
    return 0 if report.passed else 1


def _thread_cap() -> Optional[int]:
    raw = os.environ.get("OPA_THREADS")
    if raw is None or raw == "":
        return None
    if not raw.isdigit() or int(raw) < 1:
        raise UsageError(f"OPA_THREADS must be a positive integer, got {raw!r}")
    return int(raw)


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--output", "-o", default=None, help="report path (default: stdout)")
    common.add_argument("--seed", type=int, default=0, help="seed for randomized trials")

    parser = argparse.ArgumentParser(
        prog="dirichlet-opa",
        description="Optimal polynomial approximants and cyclicity diagnostics in D_alpha.",
        epilog=FUNCTION_HELP,
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("opa", parents=[common], help="residuals of optimal approximants to 1/f",
                       epilog=FUNCTION_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--f", required=True, help="function (see grammar below)")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--dmax", type=int, default=10)
    p.add_argument("--N", type=int, default=200, help="truncation degree for named builders")
    p.set_defaults(func=cmd_opa)

    p = sub.add_parser("bounds", parents=[common], help="perturbation bounds for f_n -> f",
                       epilog=FUNCTION_HELP, formatter_class=argparse.RawDescriptionHelpFormatter)
    p.add_argument("--family", choices=("linear-plus", "linear-minus", "perturb", "random"), default="linear-plus")
    p.add_argument("--f", help="limit function for family 'perturb'")
    p.add_argument("--g", help="perturbation direction: f_n = f + g/n")
    p.add_argument("--alpha", type=float, default=0.0)
    p.add_argument("--d", type=int, default=1)
    p.add_argument("--nmin", type=int, default=1)
    p.add_argument("--nmax", type=int, default=100)
    p.add_argument("--N", type=int, default=200)
    p.add_argument("--trials", type=int, default=100, help="random pairs for family 'random'")
    p.add_argument("--table", action="store_true", help="only tabulate phi, psi and the caps for d = 0..--d")
    p.set_defaults(func=cmd_bounds)

    p = sub.add_parser("capacity", parents=[common], help="middle-eps Cantor set capacity estimates")
    p.add_argument("--eps", type=float)
    p.add_argument("--alpha", type=float, help="derive eps from the target exponent")
    p.add_argument("--kernel-alpha", type=float, help="kernel exponent (default: --alpha, or 1 with --eps)")
    p.add_argument("--depth", type=int, default=20)
    p.add_argument("--L0", type=float, default=1.0, help="root arc length in radians")
    p.set_defaults(func=cmd_capacity)

    p = sub.add_parser("experiment", parents=[common], help="run a named experiment")
    p.add_argument("name", help=", ".join(EXPERIMENTS))
    p.add_argument("--alpha", type=float)
    p.add_argument("--nmax", type=int)
    p.add_argument("--dmax", type=int, default=20)
    p.add_argument("--N", type=int)
    p.add_argument("--tol", type=float)
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Optional[Iterable[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(None if argv is None else list(argv))
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        _thread_cap()
        return args.func(args)
    except (UsageError, SingularSystemError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    except (ConditioningError, TruncationError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
