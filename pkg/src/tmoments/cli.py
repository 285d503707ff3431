"""Command line interface.

Subcommands: one-d, multi, truncated, oracle, verify. Results go to stdout as
a single JSON object (see schemas/response-v1.json); human-readable
diagnostics go to stderr. Floats are serialized with 17 significant digits so
parsing the output reproduces the doubles bit for bit.

Exit codes: 0 success, 1 verification mismatch, 2 usage or malformed input,
3 undefined moment (value is null in the response), 4 numerical
non-convergence or failed estimation. The oracle seed is taken from --seed,
else the TMOMENT_SEED environment variable, else 12345.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import t1d, tnd, truncated
from .errors import DomainError, EstimationError, NonConvergenceError, UndefinedMomentError
from .oracle import DEFAULT_SEED, KINDS, mc_moment_nd, quad_moment_1d
from .t1d import MomentResult, TParams1D
from .tnd import TParamsND
from .truncated import Rectangle

SCHEMA_VERSION = "response-v1"


class _UsageError(Exception):
    pass


def _format_float(x: float) -> str:
    if math.isnan(x) or math.isinf(x):
        return "null"
    return format(x, ".17g")


def _to_json(obj) -> str:
    if obj is None:
        return "null"
    if obj is True:
        return "true"
    if obj is False:
        return "false"
    if isinstance(obj, str):
        return json.dumps(obj, ensure_ascii=False)
    if isinstance(obj, (int, np.integer)):
        return str(int(obj))
    if isinstance(obj, (float, np.floating)):
        return _format_float(float(obj))
    if isinstance(obj, dict):
        items = ", ".join(f"{_to_json(str(k))}: {_to_json(v)}" for k, v in obj.items())
        return "{" + items + "}"
    if isinstance(obj, (list, tuple)):
        return "[" + ", ".join(_to_json(v) for v in obj) + "]"
    raise TypeError(f"cannot serialize {type(obj)!r}")


def _emit(response: dict, fmt: str) -> None:
    if fmt == "json":
        print(_to_json(response))
        return
    for key, val in response.items():
        if isinstance(val, dict):
            print(f"{key} {_to_json(val)}")
        elif isinstance(val, (float, np.floating)):
            print(f"{key} {_format_float(float(val))}")
        else:
            print(f"{key} {val}")


def _response(value, *, defined=True, reason="", formula="", mode="", diagnostics=None) -> dict:
    return {
        "schema": SCHEMA_VERSION,
        "value": None if (value is None or not defined) else float(value),
        "defined": bool(defined),
        "reason": reason,
        "formula": formula,
        "mode": mode,
        "diagnostics": diagnostics or {},
    }


def _from_result(r: MomentResult) -> dict:
    return _response(r.value if r.defined else None, defined=r.defined, reason=r.reason,
                     formula=r.formula, mode=r.mode, diagnostics=dict(r.diagnostics))


def _parse_floats(text, what: str) -> list[float]:
    if isinstance(text, (int, float)):
        return [float(text)]
    try:
        return [float(tok) for tok in text.split(",") if tok.strip() != ""]
    except ValueError as e:
        raise _UsageError(f"could not parse {what} {text!r}: {e}") from None


def _parse_orders(text: str) -> list[int]:
    vals = _parse_floats(text, "order list")
    orders = []
    for v in vals:
        if not v.is_integer() or v < 0:
            raise _UsageError(f"orders must be nonnegative integers, got {v!r}")
        orders.append(int(v))
    if not orders:
        raise _UsageError("order list is empty")
    return orders


def _parse_matrix(args, dim: int) -> np.ndarray:
    source = "command line"
    text = args.sigma_mat
    if getattr(args, "sigma_file", None):
        if text not in (None, "identity"):
            raise _UsageError("give either --sigma-mat or --sigma-file, not both")
        source = args.sigma_file
        try:
            with open(args.sigma_file, "r", encoding="utf-8") as fh:
                text = fh.read()
        except OSError as e:
            raise _UsageError(f"could not read matrix file: {e}") from None
    if text is None or text == "identity":
        mat = np.eye(dim)
    else:
        try:
            data = json.loads(text)
        except json.JSONDecodeError as e:
            raise _UsageError(
                f"failed to parse matrix from {source}: {e.msg} at position {e.pos} "
                f"(line {e.lineno}, column {e.colno})") from None
        try:
            mat = np.array(data, dtype=float)
        except (TypeError, ValueError) as e:
            raise _UsageError(f"matrix from {source} is not numeric: {e}") from None
        if mat.shape != (dim, dim):
            raise _UsageError(
                f"matrix from {source} has shape {mat.shape}, expected ({dim}, {dim})")
    if getattr(args, "matrix_convention", "precision") == "scale":
        # A scale-convention matrix S parameterizes the same distribution as
        # the precision-convention S^(-1).
        try:
            mat = np.linalg.inv(np.asarray(mat, dtype=float))
        except np.linalg.LinAlgError as e:
            raise _UsageError(f"scale-convention matrix is singular: {e}") from None
    return mat


def _resolve_seed(args) -> int:
    if getattr(args, "seed", None) is not None:
        return args.seed
    env = os.environ.get("TMOMENT_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise _UsageError(f"TMOMENT_SEED must be an integer, got {env!r}") from None
    return DEFAULT_SEED


def _params_1d(args) -> TParams1D:
    sigma = args.sigma
    if getattr(args, "scale", None) is not None:
        if sigma is not None:
            raise _UsageError("give either --sigma or --scale, not both")
        sigma = t1d.precision_from_scale(args.scale)
    if sigma is None:
        sigma = 1.0
    mu = args.mu if args.mu is not None else 0.0
    if not isinstance(mu, (int, float)):
        vals = _parse_floats(mu, "--mu")
        if len(vals) != 1:
            raise _UsageError("expected a single --mu entry for a one-dimensional request")
        mu = vals[0]
    try:
        return TParams1D(mu, sigma, args.nu)
    except DomainError as e:
        raise _UsageError(str(e)) from None


def _params_nd(args, dim: int) -> TParamsND:
    mu = _parse_floats(args.mu, "--mu") if args.mu is not None else [0.0] * dim
    if len(mu) != dim:
        raise _UsageError(f"--mu has {len(mu)} entries, expected {dim}")
    if getattr(args, "sigma", None) is not None:
        if dim != 1 or args.sigma_mat is not None or getattr(args, "sigma_file", None):
            raise _UsageError("--sigma applies only to one-dimensional requests")
        mat = np.array([[args.sigma]])
    else:
        mat = _parse_matrix(args, dim)
    try:
        return TParamsND(np.asarray(mu), mat, args.nu)
    except DomainError as e:
        raise _UsageError(str(e)) from None


def _parse_rectangle(args, dim: int) -> Rectangle | None:
    if args.lower is None and args.upper is None:
        return None
    lower = _parse_floats(args.lower, "--lower") if args.lower is not None else [-math.inf] * dim
    upper = _parse_floats(args.upper, "--upper") if args.upper is not None else [math.inf] * dim
    if len(lower) != dim or len(upper) != dim:
        raise _UsageError(f"--lower/--upper must each have {dim} entries")
    try:
        return Rectangle(np.asarray(lower), np.asarray(upper))
    except DomainError as e:
        raise _UsageError(str(e)) from None


def _cmd_one_d(args) -> tuple[dict, int]:
    p = _params_1d(args)
    if args.via_central:
        if args.kind != "raw":
            raise _UsageError("--via-central applies only to --kind raw")
        result = t1d.raw_from_central(args.k, p)
    elif args.kind == "raw":
        result = t1d.raw_moment(args.k, p)
    elif args.kind == "central":
        result = t1d.central_moment(args.k, p)
    elif args.kind == "abs":
        result = t1d.abs_moment(args.k, p)
    else:
        result = t1d.central_abs_moment(args.k, p)
    return _from_result(result), (0 if result.defined else 3)


def _cmd_multi(args) -> tuple[dict, int]:
    orders = _parse_orders(args.k)
    p = _params_nd(args, len(orders))
    if args.kind == "abs":
        if np.any(p.mu != 0) or not np.array_equal(p.sigma_mat, np.eye(p.dim)):
            raise _UsageError("--kind abs has a closed form only for mu = 0 and the "
                              "identity matrix")
        result = tnd.std_abs_moment_nd(orders, p.nu)
    elif args.mode == "literal":
        result = tnd.raw_moment_nd_literal(orders, p)
    else:
        result = tnd.raw_moment_nd(orders, p)
    return _from_result(result), (0 if result.defined else 3)


def _cmd_truncated(args) -> tuple[dict, int]:
    orders = _parse_orders(args.k)
    p = _params_nd(args, len(orders))
    rect = _parse_rectangle(args, p.dim)
    if rect is None:
        rect = Rectangle.full_space(p.dim)
    if args.mode == "literal":
        result = truncated.trunc_t_moment_literal(orders, rect, p, tol=args.tol)
    else:
        result = truncated.trunc_t_moment(orders, rect, p, tol=args.tol)
    return _from_result(result), (0 if result.defined else 3)


def _is_multivariate(args) -> bool:
    if args.sigma_mat is not None or getattr(args, "sigma_file", None):
        return True
    return len(_parse_orders(args.k)) > 1


def _oracle_estimate(args, orders, seed) -> tuple[float, dict, str]:
    """Shared by the oracle and verify subcommands.

    Returns (value, diagnostics, formula tag). 1-D untruncated and 1-D
    truncated requests integrate the defining integral; everything else is
    seeded Monte Carlo.
    """
    multivariate = _is_multivariate(args)
    if multivariate and args.method == "quad":
        raise _UsageError("the quadrature oracle supports one-dimensional requests only")
    if not multivariate and args.method != "mc":
        p1 = _params_1d(args)
        bounds = (-math.inf, math.inf)
        if args.lower is not None or args.upper is not None:
            bounds = (float(args.lower) if args.lower is not None else -math.inf,
                      float(args.upper) if args.upper is not None else math.inf)
        res = quad_moment_1d(args.kind, orders[0], p1, bounds=bounds, tol=args.tol)
        diag = {"method": "quad", "est_abs_error": res.est_abs_error,
                "evaluations": res.evaluations}
        return res.value, diag, "oracle-quad"
    if args.kind != "raw":
        raise _UsageError("the Monte Carlo oracle supports --kind raw only")
    if multivariate:
        p = _params_nd(args, len(orders))
    else:
        p1 = _params_1d(args)
        p = TParamsND(np.array([p1.mu]), np.array([[p1.sigma]]), p1.nu)
    rect = _parse_rectangle(args, p.dim)
    est = mc_moment_nd(orders, p, rect=rect, n_samples=args.samples, seed=seed)
    diag = {"method": "mc", "std_error": est.std_error,
            "n_samples": est.n_samples, "seed": est.seed}
    return est.value, diag, "oracle-mc"


def _cmd_oracle(args) -> tuple[dict, int]:
    orders = _parse_orders(args.k)
    seed = _resolve_seed(args)
    value, diag, tag = _oracle_estimate(args, orders, seed)
    return _response(value, formula=tag, mode="oracle", diagnostics=diag), 0


def _formula_result(args, orders) -> MomentResult:
    kind = args.kind
    if _is_multivariate(args) or args.lower is not None or args.upper is not None \
            or args.sigma_mat is not None:
        p = _params_nd(args, len(orders))
        rect = _parse_rectangle(args, p.dim)
        if rect is not None:
            if kind != "raw":
                raise _UsageError("truncated moments are raw moments; use --kind raw")
            if args.mode == "literal":
                return truncated.trunc_t_moment_literal(orders, rect, p, tol=args.tol)
            return truncated.trunc_t_moment(orders, rect, p, tol=args.tol)
        if args.mode == "literal":
            return tnd.raw_moment_nd_literal(orders, p)
        return tnd.raw_moment_nd(orders, p)
    p1 = _params_1d(args)
    if kind == "raw":
        return t1d.raw_moment(orders[0], p1)
    if kind == "central":
        return t1d.central_moment(orders[0], p1)
    if kind == "abs":
        return t1d.abs_moment(orders[0], p1)
    return t1d.central_abs_moment(orders[0], p1)


def _cmd_verify(args) -> tuple[dict, int]:
    orders = _parse_orders(args.k)
    seed = _resolve_seed(args)
    formula = _formula_result(args, orders)
    if not formula.defined:
        return _from_result(formula), 3
    oracle_value, diag, _ = _oracle_estimate(args, orders, seed)
    diff = abs(formula.value - oracle_value)
    if diag["method"] == "mc":
        allowed = max(4.0 * diag["std_error"], args.tol)
    else:
        allowed = args.tol * max(1.0, abs(oracle_value))
    passed = diff <= allowed
    diag.update({"oracle_value": oracle_value, "difference": diff,
                 "allowed_difference": allowed, "passed": passed})
    response = _response(formula.value, formula=formula.formula,
                         mode=formula.mode, diagnostics=diag)
    print(f"verify: |formula - oracle| = {diff:.3e}, allowed {allowed:.3e} -> "
          f"{'pass' if passed else 'FAIL'}", file=sys.stderr)
    return response, (0 if passed else 1)


def _add_format(sub) -> None:
    sub.add_argument("--format", choices=("json", "plain"), default="json",
                     help="output format (values are identical in both)")


def _add_nd_params(sub) -> None:
    sub.add_argument("--mu", help="comma-separated location vector (default zeros)")
    sub.add_argument("--sigma-mat", help="'identity' or an inline JSON matrix")
    sub.add_argument("--sigma-file", help="path to a JSON matrix file")
    sub.add_argument("--matrix-convention", choices=("precision", "scale"),
                     default="precision",
                     help="how to read the matrix; a scale matrix S means precision S^(-1)")
    sub.add_argument("--nu", type=float, required=True, help="degrees of freedom")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="tmoment",
        description="Closed-form moments of generalized Student's t distributions "
                    "(precision-like sigma convention).")
    subs = parser.add_subparsers(dest="command", required=True)

    one = subs.add_parser("one-d", help="univariate closed-form moments")
    one.add_argument("--kind", choices=KINDS, default="raw")
    one.add_argument("--k", type=int, required=True, help="moment order")
    one.add_argument("--mu", type=float, default=0.0)
    one.add_argument("--sigma", type=float, default=None,
                     help="precision-like sigma (default 1)")
    one.add_argument("--scale", type=float, default=None,
                     help="conventional scale s, converted via sigma = 1/s^2")
    one.add_argument("--nu", type=float, required=True)
    one.add_argument("--via-central", action="store_true",
                     help="recombine the raw moment from central moments")
    _add_format(one)

    multi = subs.add_parser("multi", help="multivariate mixed moments")
    multi.add_argument("--kind", choices=("raw", "abs"), default="raw")
    multi.add_argument("--k", required=True, help="comma-separated orders, e.g. 2,2")
    multi.add_argument("--mode", choices=("corrected", "literal"), default="corrected")
    _add_nd_params(multi)
    _add_format(multi)

    trunc = subs.add_parser("truncated", help="moments over axis-aligned rectangles")
    trunc.add_argument("--k", required=True, help="comma-separated orders")
    trunc.add_argument("--lower", help="comma-separated lower bounds (-inf allowed)")
    trunc.add_argument("--upper", help="comma-separated upper bounds (inf allowed)")
    trunc.add_argument("--mode", choices=("corrected", "literal"), default="corrected")
    trunc.add_argument("--sigma", type=float, default=None,
                       help="1-D shortcut for --sigma-mat [[sigma]]")
    trunc.add_argument("--tol", type=float, default=1e-9,
                       help="absolute tolerance of the mixing quadrature")
    _add_nd_params(trunc)
    _add_format(trunc)

    def add_oracle_args(sub, with_mode: bool):
        sub.add_argument("--kind", choices=KINDS, default="raw")
        sub.add_argument("--k", required=True, help="order or comma-separated orders")
        sub.add_argument("--mu", help="location (scalar for 1-D, comma-separated otherwise)")
        sub.add_argument("--sigma", type=float, default=None)
        sub.add_argument("--scale", type=float, default=None)
        sub.add_argument("--sigma-mat")
        sub.add_argument("--sigma-file")
        sub.add_argument("--matrix-convention", choices=("precision", "scale"),
                         default="precision")
        sub.add_argument("--nu", type=float, required=True)
        sub.add_argument("--lower", help="truncation lower bound(s)")
        sub.add_argument("--upper", help="truncation upper bound(s)")
        sub.add_argument("--method", choices=("quad", "mc"), default=None)
        sub.add_argument("--samples", type=int, default=1_000_000)
        sub.add_argument("--seed", type=int, default=None,
                         help="overrides TMOMENT_SEED; default 12345")
        sub.add_argument("--tol", type=float, default=1e-8)
        if with_mode:
            sub.add_argument("--mode", choices=("corrected", "literal"), default="corrected")
        _add_format(sub)

    oracle_p = subs.add_parser("oracle", help="quadrature / Monte Carlo estimates only")
    add_oracle_args(oracle_p, with_mode=False)

    verify_p = subs.add_parser("verify", help="formula vs oracle with pass/fail")
    add_oracle_args(verify_p, with_mode=True)

    return parser


_HANDLERS = {
    "one-d": _cmd_one_d,
    "multi": _cmd_multi,
    "truncated": _cmd_truncated,
    "oracle": _cmd_oracle,
    "verify": _cmd_verify,
}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        response, code = _HANDLERS[args.command](args)
    except _UsageError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except UndefinedMomentError as e:
        _emit(_response(None, defined=False, reason=str(e)), args.format)
        return 3
    except DomainError as e:
        print(f"error: {e}", file=sys.stderr)
        return 2
    except (NonConvergenceError, EstimationError) as e:
        _emit(_response(None, defined=False,
                        reason=f"numerical non-convergence: {e}"), args.format)
        print(f"error: {e}", file=sys.stderr)
        return 4
    _emit(response, args.format)
    return code


if __name__ == "__main__":
    sys.exit(main())
