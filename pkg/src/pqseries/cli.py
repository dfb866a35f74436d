"""Command-line front end.

Every invocation writes exactly one JSON object (or a ``key: value`` text
block with ``--format text``) to stdout.  Logs go to stderr.

Exit codes: 0 ok, 1 usage error, 2 evaluation error or failed suite.
"""

from __future__ import annotations

import argparse
import json
import logging
import math
import os
import re
import sys
from dataclasses import replace
from typing import Any, Optional, Sequence

from . import identities as ident
from . import oscillator as osc
from . import suites
from ._accel import backend
from .core import (
    EvalConfig,
    PQBase,
    PQPair,
    multi_shifted_factorial,
    pq_binomial_coeff,
    pq_number,
    pq_number_factored,
    pq_rising,
    q_number,
    q_shifted_factorial,
)
from .errors import ConvergenceError, DivergenceError, PoleError, PQError
from .series import (
    SeriesSpec,
    Termination,
    eval_pq_hypergeometric,
    eval_pq_hypergeometric_exponents,
    eval_q_hypergeometric,
    eval_via_burban_klimyk,
)

log = logging.getLogger("pqseries")

SCHEMA = "pq/1"
MAX_TERMS_ENV = "PQ_MAX_TERMS"

EXIT_OK, EXIT_USAGE, EXIT_EVAL = 0, 1, 2

_STATUS = [
    (ConvergenceError, "convergence_error"),
    (DivergenceError, "divergence_error"),
    (PoleError, "pole_error"),
    (PQError, "domain_error"),
]


class UsageError(Exception):
    pass


# -- scalar I/O ------------------------------------------------------------------

_IMAG = re.compile(r"^(?P<body>.*?)[ij]$")


def parse_complex(text: str) -> complex:
    """Parse ``re``, ``re,im`` or ``re+imi`` (``j`` also accepted).

    >>> parse_complex("1.5,-2"), parse_complex("0.3+0.1i")
    ((1.5-2j), (0.3+0.1j))
    """
    s = text.strip().replace(" ", "")
    if not s:
        raise UsageError("empty complex scalar")
    try:
        if "," in s:
            re_part, im_part = s.split(",")
            return complex(float(re_part), float(im_part))
        if _IMAG.match(s):
            return complex(s[:-1] + "j")
        return complex(float(s), 0.0)
    except ValueError as exc:
        raise UsageError(f"cannot parse complex scalar {text!r}") from exc


def _component(text: str) -> complex:
    if "," in text:
        raise UsageError(f"pair component {text!r} must use the re+imi form")
    return parse_complex(text)


def parse_pair(text: str) -> tuple[complex, complex]:
    """``"xp,xq"`` where each component is ``re`` or ``re+imi``."""
    parts = text.strip().split(",")
    if len(parts) != 2:
        raise UsageError(f"expected a pair 'a,b', got {text!r}")
    return _component(parts[0]), _component(parts[1])


def parse_pair_list(text: str) -> list[tuple[complex, complex]]:
    """Semicolon-separated pairs; the empty string is the empty list."""
    text = text.strip()
    if not text:
        return []
    return [parse_pair(chunk) for chunk in text.split(";")]


def parse_scalar_list(text: str) -> list[complex]:
    text = text.strip()
    if not text:
        return []
    return [parse_complex(chunk) for chunk in text.split(";")]


def parse_index_list(text: str) -> list[int]:
    try:
        return [int(t) for t in text.replace(";", ",").split(",") if t.strip()]
    except ValueError as exc:
        raise UsageError(f"cannot parse index list {text!r}") from exc


def fmt_float(x: float) -> str:
    return format(float(x), ".17g")


def fmt_complex(z: complex) -> dict:
    z = complex(z)
    return {"re": fmt_float(z.real), "im": fmt_float(z.imag)}


def to_jsonable(obj: Any) -> Any:
    if isinstance(obj, bool) or obj is None or isinstance(obj, str):
        return obj
    if isinstance(obj, int):
        return obj
    if isinstance(obj, float):
        return fmt_float(obj)
    if isinstance(obj, complex):
        return fmt_complex(obj)
    if isinstance(obj, dict):
        return {str(k): to_jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [to_jsonable(v) for v in obj]
    if hasattr(obj, "item"):  # numpy scalar
        return to_jsonable(obj.item())
    return str(obj)


# -- argument parser ---------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _config_parent() -> argparse.ArgumentParser:
    parent = _Parser(add_help=False)
    g = parent.add_argument_group("evaluation controls")
    g.add_argument("--rel-tol", type=float)
    g.add_argument("--abs-tol", type=float)
    g.add_argument("--max-terms", type=int)
    g.add_argument("--small-window", type=int)
    g.add_argument("--growth-window", type=int)
    parent.add_argument("--format", choices=("json", "text"), default="json")
    parent.add_argument("-v", "--verbose", action="store_true", help="log to stderr")
    return parent


def build_parser() -> argparse.ArgumentParser:
    parent = _config_parent()
    parser = _Parser(prog="pqseries", description="Twin-basic (P,Q) numbers, series and identity checks.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("number", parents=[parent], help="basic numbers [x]_(P,Q) or [x]_q")
    p.add_argument("--x", required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--base", help="P,Q")
    g.add_argument("--q", help="single base for Heine's [x]_q")
    p.add_argument("--form", choices=("direct", "factored"), default="direct")

    p = sub.add_parser("factorial", parents=[parent], help="[n]!, rising factorials, binomial coefficients")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--base", required=True)
    p.add_argument("--x", help="rising factorial ([x])_n instead of [n]!")
    p.add_argument("--k", type=int, help="binomial coefficient [n choose k]")

    p = sub.add_parser("pochhammer", parents=[parent], help="shifted factorials (x~; q~)_n")
    p.add_argument("--n", type=int, required=True)
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--pairs", help="'xp,xq;...' product over pairs")
    g.add_argument("--x", help="one-base (x; q)_n, needs --q")
    p.add_argument("--base")
    p.add_argument("--q")

    p = sub.add_parser("series", parents=[parent], help="evaluate a basic hypergeometric series")
    p.add_argument("--z", required=True)
    p.add_argument("--base")
    p.add_argument("--num-pairs")
    p.add_argument("--den-pairs", default="")
    p.add_argument("--alphas", help="';'-separated exponents of the base")
    p.add_argument("--betas", default="")
    p.add_argument("--a", help="classical numerator parameters, ';'-separated")
    p.add_argument("--b", default="")
    p.add_argument("--q")
    p.add_argument("--method", choices=("pairs", "exponents", "burban-klimyk", "classical"))

    p = sub.add_parser("binomial", parents=[parent], help="check the (P,Q)-binomial theorem")
    p.add_argument("--a", required=True, help="a_p,a_q")
    p.add_argument("--base", required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--tol", type=float, default=1e-8)

    p = sub.add_parser("exp-identity", parents=[parent], help="check e_q(z) E_q(-z) = 1")
    p.add_argument("--q", required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("permutation", parents=[parent], help="check product permutation invariance")
    p.add_argument("--pairs", required=True)
    p.add_argument("--base", required=True)
    p.add_argument("--z", required=True)
    p.add_argument("--perm-p", required=True, help="0-based indices, e.g. 1,2,0")
    p.add_argument("--perm-q", required=True)
    p.add_argument("--tol", type=float, default=1e-10)

    p = sub.add_parser("oscillator", parents=[parent], help="verify the (p,q)-oscillator algebra")
    p.add_argument("--p", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--dim", type=int, required=True)

    p = sub.add_parser("fibonacci", parents=[parent], help="Fibonacci-type sequence of a twin base")
    p.add_argument("--base", required=True)
    p.add_argument("--n", type=int, required=True)

    p = sub.add_parser("suite", parents=[parent], help="run a seeded property suite")
    p.add_argument("--name", required=True, choices=[*suites.SUITES, "all"])
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--draws", type=int, default=100)
    return parser


def config_from_args(args) -> EvalConfig:
    cfg = EvalConfig()
    env = os.environ.get(MAX_TERMS_ENV)
    if env:
        try:
            cfg = replace(cfg, max_terms=int(env))
        except ValueError as exc:
            raise UsageError(f"{MAX_TERMS_ENV}={env!r} is not a positive integer") from exc
    overrides = {
        name: getattr(args, name)
        for name in ("rel_tol", "abs_tol", "max_terms", "small_window", "growth_window")
        if getattr(args, name, None) is not None
    }
    try:
        return replace(cfg, **overrides)
    except ValueError as exc:
        raise UsageError(str(exc)) from exc


# -- commands ----------------------------------------------------------------------

def _base(text: Optional[str]) -> PQBase:
    if text is None:
        raise UsageError("--base is required")
    return PQBase(*parse_pair(text))


def _series_payload(result) -> dict:
    return {
        "value": result.value,
        "diagnostics": {
            "terms_used": result.terms_used,
            "termination": result.termination.value,
            "error_estimate": result.error_estimate,
        },
    }


def _report_payload(report: ident.IdentityReport) -> dict:
    diag = {
        "lhs": report.lhs,
        "rhs": report.rhs,
        "abs_residual": report.abs_residual,
        "rel_residual": report.rel_residual,
        "passed": report.passed,
    }
    if report.unit_check is not None:
        diag["unit_product"] = _report_payload(report.unit_check)["diagnostics"]
    return {"value": report.lhs, "diagnostics": diag}


def cmd_number(args, cfg):
    x = parse_complex(args.x)
    if args.q is not None:
        return {"value": q_number(x, parse_complex(args.q))}
    fn = pq_number_factored if args.form == "factored" else pq_number
    return {"value": fn(x, _base(args.base))}


def cmd_factorial(args, cfg):
    base = _base(args.base)
    if args.k is not None:
        return {"value": pq_binomial_coeff(args.n, args.k, base)}
    x = parse_complex(args.x) if args.x is not None else 1
    return {"value": pq_rising(x, args.n, base)}


def cmd_pochhammer(args, cfg):
    if args.x is not None:
        if args.q is None:
            raise UsageError("--x needs --q")
        return {"value": q_shifted_factorial(parse_complex(args.x), parse_complex(args.q), args.n)}
    return {"value": multi_shifted_factorial(parse_pair_list(args.pairs), _base(args.base), args.n)}


def cmd_series(args, cfg):
    z = parse_complex(args.z)
    method = args.method
    if method is None:
        if args.num_pairs is not None:
            method = "pairs"
        elif args.alphas is not None:
            method = "exponents"
        elif args.a is not None:
            method = "classical"
        else:
            raise UsageError("give --num-pairs, --alphas or --a")
    if method == "pairs":
        if args.num_pairs is None:
            raise UsageError("--method pairs needs --num-pairs")
        spec = SeriesSpec([PQPair(*p) for p in parse_pair_list(args.num_pairs)],
                          [PQPair(*p) for p in parse_pair_list(args.den_pairs)], _base(args.base), z)
        result = eval_pq_hypergeometric(spec, cfg)
    elif method in ("exponents", "burban-klimyk"):
        if args.alphas is None:
            raise UsageError(f"--method {method} needs --alphas")
        alphas, betas = parse_scalar_list(args.alphas), parse_scalar_list(args.betas)
        fn = eval_pq_hypergeometric_exponents if method == "exponents" else eval_via_burban_klimyk
        result = fn(alphas, betas, _base(args.base), z, cfg)
    else:
        if args.a is None or args.q is None:
            raise UsageError("--method classical needs --a and --q")
        result = eval_q_hypergeometric(parse_scalar_list(args.a), parse_scalar_list(args.b),
                                       parse_complex(args.q), z, cfg)
    payload = _series_payload(result)
    payload["diagnostics"]["method"] = method
    if result.termination is Termination.MAX_TERMS:
        payload["status"] = "convergence_error"
    return payload


def cmd_binomial(args, cfg):
    report = ident.check_pq_binomial(parse_pair(args.a), _base(args.base), parse_complex(args.z), cfg, args.tol)
    return _report_payload(report)


def cmd_exp_identity(args, cfg):
    return _report_payload(ident.check_exp_identity(parse_complex(args.q), parse_complex(args.z), cfg, args.tol))


def cmd_permutation(args, cfg):
    pairs = parse_pair_list(args.pairs)
    perm_p, perm_q = parse_index_list(args.perm_p), parse_index_list(args.perm_q)
    if sorted(perm_p) != list(range(len(pairs))) or sorted(perm_q) != list(range(len(pairs))):
        raise UsageError(f"--perm-p/--perm-q must be permutations of 0..{len(pairs) - 1}")
    report = ident.product_permutation_check(pairs, _base(args.base), parse_complex(args.z),
                                             perm_p, perm_q, cfg, args.tol)
    return _report_payload(report)


def cmd_oscillator(args, cfg):
    if args.dim < 1:
        raise UsageError("--dim must be positive")
    real = osc.build_fock(parse_complex(args.p), parse_complex(args.q), args.dim)
    res = osc.verify_oscillator(real)
    return {
        "diagnostics": {
            "residuals": res.residuals,
            "relative_residuals": res.relative(),
            "subspace_dim": res.subspace_dim,
            "numbers": list(real.numbers),
        }
    }


def cmd_fibonacci(args, cfg):
    if args.n < 0:
        raise UsageError("--n must be non-negative")
    base = _base(args.base)
    seq = ident.fibonacci_sequence(base, args.n)
    worst = max((suites.rel_diff(f, pq_number(n, base)) for n, f in enumerate(seq) if n), default=0.0)
    return {"value": seq[-1], "diagnostics": {"sequence": seq, "max_rel_residual_vs_pq_number": worst}}


def cmd_suite(args, cfg):
    if args.draws < 1:
        raise UsageError("--draws must be positive")
    reports = suites.run_suite(args.name, args.seed, args.draws)
    all_passed = all(r.ok for r in reports)
    payload = {
        "suite": {"name": args.name, "seed": args.seed, "draws": args.draws, "generator": "numpy.PCG64"},
        "results": [
            {
                "name": r.name,
                "draws": r.draws,
                "passed": r.passed,
                "tolerance": r.tolerance,
                "max_residual": r.max_residual,
                "median_residual": r.median_residual,
                "failures": r.failures,
            }
            for r in reports
        ],
        "diagnostics": {"all_passed": all_passed},
    }
    if not all_passed:
        payload["exit_code"] = EXIT_EVAL
    return payload


COMMANDS = {
    "number": cmd_number,
    "factorial": cmd_factorial,
    "pochhammer": cmd_pochhammer,
    "series": cmd_series,
    "binomial": cmd_binomial,
    "exp-identity": cmd_exp_identity,
    "permutation": cmd_permutation,
    "oscillator": cmd_oscillator,
    "fibonacci": cmd_fibonacci,
    "suite": cmd_suite,
}


def run(argv: Optional[Sequence[str]] = None) -> tuple[dict, int, str]:
    """Parse and dispatch; returns (response, exit code, output format). Never raises."""
    fmt = "json"
    command = None
    try:
        args = build_parser().parse_args(argv)
        fmt, command = args.format, args.command
        if args.verbose:
            logging.basicConfig(level=logging.INFO, stream=sys.stderr)
        log.info("backend=%s command=%s", backend(), command)
        cfg = config_from_args(args)
        payload = COMMANDS[command](args, cfg)
    except UsageError as exc:
        return {"schema": SCHEMA, "command": command, "status": "usage_error", "message": str(exc)}, EXIT_USAGE, fmt
    except PQError as exc:
        status = next(name for cls, name in _STATUS if isinstance(exc, cls))
        return {"schema": SCHEMA, "command": command, "status": status, "message": str(exc)}, EXIT_EVAL, fmt
    except (OverflowError, ZeroDivisionError) as exc:
        status = "pole_error" if isinstance(exc, ZeroDivisionError) else "divergence_error"
        return {"schema": SCHEMA, "command": command, "status": status, "message": str(exc)}, EXIT_EVAL, fmt

    code = payload.pop("exit_code", EXIT_OK)
    status = payload.pop("status", "ok")
    if status != "ok":
        code = EXIT_EVAL
    return {"schema": SCHEMA, "command": command, "status": status, **payload}, code, fmt


def render(response: dict, fmt: str) -> str:
    data = to_jsonable(response)
    if fmt == "json":
        return json.dumps(data, sort_keys=True)
    lines = []

    def walk(prefix, obj):
        if isinstance(obj, dict) and set(obj) == {"re", "im"}:
            lines.append(f"{prefix}: {obj['re']},{obj['im']}")
        elif isinstance(obj, dict):
            for k in sorted(obj):
                walk(f"{prefix}.{k}" if prefix else k, obj[k])
        elif isinstance(obj, list):
            for i, v in enumerate(obj):
                walk(f"{prefix}[{i}]", v)
        else:
            lines.append(f"{prefix}: {obj}")

    walk("", data)
    return "\n".join(lines)


def main(argv: Optional[Sequence[str]] = None) -> int:
    response, code, fmt = run(argv)
    sys.stdout.write(render(response, fmt) + "\n")
    return code


if __name__ == "__main__":
    sys.exit(main())
