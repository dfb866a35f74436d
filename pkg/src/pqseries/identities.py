"""Numerical checks of twin-basic identities, plus the twin exponential and calculus.

Checkers return an :class:`IdentityReport` and never raise on a mismatch;
deciding what residual is acceptable is the caller's job.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Sequence

from .core import (
    DEFAULT_CONFIG,
    EvalConfig,
    PQBase,
    PQPair,
    _as_base,
    _as_pair,
    pq_number,
    pq_shifted_factorial_ratio_inf,
)
from .errors import ConvergenceError, PoleError
from .series import SeriesSpec, Termination, adaptive_sum, eval_pq_hypergeometric

__all__ = [
    "IdentityReport",
    "check_pq_binomial",
    "binomial_series",
    "product_permutation_check",
    "unit_product_check",
    "q_exp_small",
    "q_exp_big",
    "check_exp_identity",
    "pq_exponential",
    "pq_derivative_monomial",
    "pq_integral_monomial",
    "fibonacci_sequence",
]


@dataclass(frozen=True)
class IdentityReport:
    lhs: complex
    rhs: complex
    abs_residual: float
    rel_residual: float
    passed: bool
    unit_check: Optional["IdentityReport"] = None

    @classmethod
    def compare(cls, lhs: complex, rhs: complex, tol: float, **extra) -> "IdentityReport":
        lhs, rhs = complex(lhs), complex(rhs)
        abs_res = abs(lhs - rhs)
        rel_res = abs_res / max(abs(lhs), abs(rhs), 1e-300)
        return cls(lhs, rhs, abs_res, rel_res, bool(rel_res <= tol), **extra)


def _converged_value(result, what: str) -> complex:
    if result.termination is Termination.MAX_TERMS:
        raise ConvergenceError(f"{what} not converged within {result.terms_used} terms")
    return result.value


def binomial_series(a, base, z: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """``1 phi~ 0 (a~; -; q~, z)``, the single-pair series of the binomial theorem."""
    spec = SeriesSpec([_as_pair(a)], [], _as_base(base), z)
    return _converged_value(eval_pq_hypergeometric(spec, cfg), "binomial series")


def check_pq_binomial(a, base, z: complex, cfg: EvalConfig = DEFAULT_CONFIG,
                      tol: float = 1e-8) -> IdentityReport:
    """Series side of the twin binomial theorem against its product side.

    ``sum (a~; q~)_n / (q~; q~)_n z^n  ==  ((P, a_q z); q~)_inf / ((P, a_p z); q~)_inf``
    """
    a, base = _as_pair(a), _as_base(base)
    z = complex(z)
    lhs = binomial_series(a, base, z, cfg)
    rhs = pq_shifted_factorial_ratio_inf(PQPair(base.P, a.x_q * z), PQPair(base.P, a.x_p * z), base, cfg)
    return IdentityReport.compare(lhs, rhs, tol)


def _series_product(pairs: Sequence[PQPair], base: PQBase, z: complex, cfg: EvalConfig) -> complex:
    out = 1 + 0j
    for pair in pairs:
        out *= binomial_series(pair, base, z, cfg)
    return out


def _is_permutation(perm: Sequence[int], n: int) -> bool:
    return sorted(perm) == list(range(n))


def unit_product_check(pairs, base, z: complex, cfg: EvalConfig = DEFAULT_CONFIG,
                       tol: float = 1e-10) -> IdentityReport:
    """Product of binomial series, compared with 1."""
    pairs = [_as_pair(p) for p in pairs]
    lhs = _series_product(pairs, _as_base(base), complex(z), cfg)
    return IdentityReport.compare(lhs, 1, tol)


def product_permutation_check(pairs, base, z: complex, perm_p: Sequence[int], perm_q: Sequence[int],
                              cfg: EvalConfig = DEFAULT_CONFIG, tol: float = 1e-10) -> IdentityReport:
    """Permute p- and q-components independently and compare the series products.

    ``perm_p`` and ``perm_q`` are 0-based index sequences: the ``i``-th
    permuted pair is ``(a[perm_p[i]].x_p, a[perm_q[i]].x_q)``.  When the
    q-components are themselves a rearrangement of the p-components, the
    report also carries ``unit_check`` against the value 1.
    """
    pairs = [_as_pair(p) for p in pairs]
    base, z = _as_base(base), complex(z)
    n = len(pairs)
    if not (_is_permutation(perm_p, n) and _is_permutation(perm_q, n)):
        raise ValueError(f"perm_p and perm_q must be permutations of range({n})")
    lhs = _series_product(pairs, base, z, cfg)
    permuted = [PQPair(pairs[i].x_p, pairs[j].x_q) for i, j in zip(perm_p, perm_q)]
    rhs = _series_product(permuted, base, z, cfg)

    unit = None
    p_sorted = sorted((p.x_p for p in pairs), key=lambda c: (c.real, c.imag))
    q_sorted = sorted((p.x_q for p in pairs), key=lambda c: (c.real, c.imag))
    if all(abs(a - b) <= 1e-14 * max(abs(a), abs(b), 1.0) for a, b in zip(p_sorted, q_sorted)):
        unit = IdentityReport.compare(lhs, 1, tol)
    report = IdentityReport.compare(lhs, rhs, tol, unit_check=unit)
    if unit is not None and not unit.passed:
        return IdentityReport(report.lhs, report.rhs, report.abs_residual, report.rel_residual, False, unit)
    return report


def _check_q_exp_domain(q: complex, z: complex, need_small_z: bool) -> None:
    if abs(q) >= 1:
        raise ConvergenceError(f"q-exponentials need |q| < 1, got {abs(q)!r}")
    if need_small_z and abs(z) >= 1:
        raise ConvergenceError(f"e_q(z) converges only for |z| < 1, got {abs(z)!r}")


def q_exp_small(q: complex, z: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """``e_q(z) = sum z^n / (q; q)_n``, the series with pair ``(1, 0)`` and base ``(1, q)``."""
    q, z = complex(q), complex(z)
    _check_q_exp_domain(q, z, True)
    return binomial_series(PQPair(1, 0), PQBase(1, q), z, cfg)


def q_exp_big(q: complex, z: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """``E_q(z) = sum q^(n(n-1)/2) z^n / (q; q)_n`` (entire in ``z``).

    The pair ``(0, 1)`` contributes factors ``-q^k``, so its series at
    argument ``-z`` is ``E_q(z)``.
    """
    q, z = complex(q), complex(z)
    _check_q_exp_domain(q, z, False)
    return binomial_series(PQPair(0, 1), PQBase(1, q), -z, cfg)


def check_exp_identity(q: complex, z: complex, cfg: EvalConfig = DEFAULT_CONFIG,
                       tol: float = 1e-10) -> IdentityReport:
    """``e_q(z) E_q(-z) == 1``."""
    lhs = q_exp_small(q, z, cfg) * q_exp_big(q, -complex(z), cfg)
    return IdentityReport.compare(lhs, 1, tol)


def pq_exponential(base, z: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """Twin exponential ``sum z^n / [n]_{P,Q}!``.

    This is the zero-parameter twin series at argument ``(P - Q) z`` with the
    alternating power factor dropped.  At ``P == Q`` the numbers degenerate
    to ``n P^(n-1)``, and at ``(1, 1)`` the sum is the ordinary exponential.
    """
    base = _as_base(base)
    z = complex(z)

    def ratio_at(n):
        d = pq_number(n + 1, base)
        if d == 0:
            raise PoleError(f"[{n + 1}]_(P,Q) vanishes")
        return z / d

    return _converged_value(adaptive_sum(ratio_at, cfg), "twin exponential")


def pq_derivative_monomial(n: int, base) -> tuple[complex, int]:
    """``D z^n = [n] z^(n-1)``; constants map to ``(0, 0)``.

    >>> pq_derivative_monomial(3, (2, 1))
    ((7+0j), 2)
    """
    if n == 0:
        return 0j, 0
    return pq_number(n, _as_base(base)), n - 1


def pq_integral_monomial(n: int, base) -> tuple[complex, int]:
    """``I z^n = z^(n+1) / [n+1]``, the right inverse of :func:`pq_derivative_monomial`."""
    d = pq_number(n + 1, _as_base(base))
    if d == 0:
        raise PoleError(f"[{n + 1}]_(P,Q) vanishes")
    return 1 / d, n + 1


def fibonacci_sequence(base, n_max: int) -> list[complex]:
    """``F_0 .. F_{n_max}`` from ``F_{m+1} = (P+Q) F_m - PQ F_{m-1}``, ``F_0 = 0``, ``F_1 = 1``.

    >>> [int(f.real) for f in fibonacci_sequence((2, 1), 5)]
    [0, 1, 3, 7, 15, 31]
    """
    P, Q = _as_base(base)
    out = [0j, 1 + 0j][: n_max + 1]
    s, p = P + Q, P * Q
    while len(out) <= n_max:
        out.append(s * out[-1] - p * out[-2])
    return out
