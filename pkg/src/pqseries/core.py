"""Twin-basic numbers, shifted factorials and notation adapters.

Everything is double-precision complex.  Complex powers follow the principal
branch (Python's ``complex.__pow__``), and integer powers inside products use
the same binary exponentiation CPython uses, so results from the compiled and
interpreted kernels agree bit for bit.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from typing import Iterable, Iterator, Sequence

import numpy as np

from . import _kernels
from .errors import ConvergenceError, DomainError, PoleError

__all__ = [
    "PQBase",
    "PQPair",
    "EvalConfig",
    "q_number",
    "pq_number",
    "pq_number_factored",
    "pq_rising",
    "pq_factorial",
    "q_shifted_factorial",
    "pq_shifted_factorial",
    "multi_shifted_factorial",
    "pq_shifted_factorial_ratio_inf",
    "pq_power",
    "kk_adapter",
    "flv_adapter",
    "pq_binomial_coeff",
]

DEGENERATE_RTOL = 1e-14
# below this |P - Q| / |P| the direct formula loses ~log10(1/gap) digits
NEAR_DEGENERATE = 0.25


@dataclass(frozen=True)
class PQBase:
    """The twin base ``(P, Q)``.  Construction never validates."""

    P: complex
    Q: complex

    def __post_init__(self):
        object.__setattr__(self, "P", complex(self.P))
        object.__setattr__(self, "Q", complex(self.Q))

    def __iter__(self) -> Iterator[complex]:
        yield self.P
        yield self.Q

    @property
    def rho(self) -> complex:
        """The ratio ``Q/P``; raises :class:`DomainError` when ``P == 0``."""
        if self.P == 0:
            raise DomainError("rho = Q/P is undefined for P = 0")
        return self.Q / self.P


@dataclass(frozen=True)
class PQPair:
    """A parameter doublet ``(x_p, x_q)``; ``(0, 0)`` is allowed."""

    x_p: complex
    x_q: complex

    def __post_init__(self):
        object.__setattr__(self, "x_p", complex(self.x_p))
        object.__setattr__(self, "x_q", complex(self.x_q))

    def __iter__(self) -> Iterator[complex]:
        yield self.x_p
        yield self.x_q


@dataclass(frozen=True)
class EvalConfig:
    """Summation controls shared by series, products and identity checks.

    ``small_window`` consecutive terms below ``rel_tol * |partial sum| +
    abs_tol`` stop a sum; ``growth_window`` consecutive growing terms (past
    the first ten, with a non-decreasing term ratio) raise a divergence.
    """

    rel_tol: float = 1e-12
    abs_tol: float = 1e-300
    max_terms: int = 10000
    small_window: int = 3
    growth_window: int = 8

    def __post_init__(self):
        if not (self.rel_tol > 0 and self.abs_tol > 0):
            raise ValueError("tolerances must be strictly positive")
        for name in ("max_terms", "small_window", "growth_window"):
            value = getattr(self, name)
            if int(value) != value or value < 1:
                raise ValueError(f"{name} must be a positive integer, got {value!r}")
            object.__setattr__(self, name, int(value))


DEFAULT_CONFIG = EvalConfig()


def _as_base(base) -> PQBase:
    return base if isinstance(base, PQBase) else PQBase(*base)


def _as_pair(pair) -> PQPair:
    return pair if isinstance(pair, PQPair) else PQPair(*pair)


def _check_n(n) -> int:
    if int(n) != n or n < 0:
        raise DomainError(f"n must be a non-negative integer, got {n!r}")
    return int(n)


def _cpow(base: complex, x: complex) -> complex:
    """Principal-branch power with a domain check at zero."""
    if base == 0:
        if x == 0:
            return 1 + 0j
        if x.real <= 0:
            raise DomainError(f"0 ** {x} is undefined on the principal branch")
        return 0j
    return base**x


def _expm1(w: complex) -> complex:
    a, b = w.real, w.imag
    return complex(math.expm1(a) * math.cos(b) - 2 * math.sin(b / 2) ** 2, math.exp(a) * math.sin(b))


def _log1p(w: complex) -> complex:
    return complex(0.5 * math.log1p(2 * w.real + abs(w) ** 2), math.atan2(w.imag, 1 + w.real))


def _pq_number_near_degenerate(x: complex, P: complex, Q: complex) -> complex:
    """``P**(x-1) * expm1(x L) / expm1(log(Q/P))`` with ``L = Log Q - Log P``.

    Free of the cancellation in ``P**x - Q**x`` when ``Q`` is close to ``P``.
    ``L`` carries the same branch as the principal powers, so the result is
    the same function as the direct formula.
    """
    small = _log1p((Q - P) / P)
    turns = round((cmath.phase(Q) - cmath.phase(P) - small.imag) / (2 * math.pi))
    log_ratio = small + 2j * math.pi * turns
    return _cpow(P, x - 1) * _expm1(x * log_ratio) / _expm1(small)


def q_number(x: complex, q: complex) -> complex:
    """Heine's number ``(1 - q**x) / (1 - q)``; the limit ``x`` at ``q = 1``.

    Evaluated like :func:`pq_number` with ``P = 1``.
    """
    x, q = complex(x), complex(q)
    if abs(1 - q) < DEGENERATE_RTOL:
        return x
    return _basic_number(x, 1 + 0j, q)


def _basic_number(x: complex, P: complex, Q: complex) -> complex:
    """``(P**x - Q**x) / (P - Q)`` for ``P != Q``, avoiding cancellation where it bites."""
    if x == 0 or x == 1:
        return x
    if P != 0 and Q != 0:
        try:
            if abs(P - Q) < NEAR_DEGENERATE * abs(P):
                return _pq_number_near_degenerate(x, P, Q)
            log_ratio = cmath.log(Q) - cmath.log(P)
            # P**x and Q**x agree to about |x log(Q/P)|
            if abs(x * log_ratio) < 1:
                return -_cpow(P, x) * _expm1(x * log_ratio) / (P - Q)
        except OverflowError:
            pass
    return (_cpow(P, x) - _cpow(Q, x)) / (P - Q)


def pq_number(x: complex, base) -> complex:
    """Twin-basic number ``(P**x - Q**x) / (P - Q)``.

    Near ``P == Q`` the analytic limit ``x * P**(x-1)`` is returned.  Where
    ``P**x`` and ``Q**x`` nearly cancel, that is for ``|P - Q| < |P| / 4`` or
    ``|x log(Q/P)| < 1``, the value is computed in a log/expm1 form.

    >>> pq_number(3, (2, 1))
    (7+0j)
    """
    P, Q = _as_base(base)
    x = complex(x)
    if P == 0 and x.real < 0:
        raise DomainError("P**x is undefined for P = 0 and Re(x) < 0")
    if abs(P - Q) < DEGENERATE_RTOL * max(abs(P), abs(Q), 1.0):
        return x * _cpow(P, x - 1)
    return _basic_number(x, P, Q)


def pq_number_factored(x: complex, base) -> complex:
    """``P**(x-1) * [x]_rho`` with ``rho = Q/P``; equals :func:`pq_number`."""
    base = _as_base(base)
    x = complex(x)
    rho = base.rho
    return _cpow(base.P, x - 1) * q_number(x, rho)


def pq_rising(x: complex, n: int, base) -> complex:
    """Rising product ``[x][x+1]...[x+n-1]`` of twin-basic numbers."""
    n = _check_n(n)
    base = _as_base(base)
    out = 1 + 0j
    for k in range(n):
        out *= pq_number(complex(x) + k, base)
    return out


def pq_factorial(n: int, base) -> complex:
    return pq_rising(1, n, base)


def q_shifted_factorial(x: complex, q: complex, n: int) -> complex:
    """``(x; q)_n = (1 - x)(1 - xq)...(1 - xq**(n-1))``."""
    n = _check_n(n)
    return _kernels.shifted_product(1 + 0j, complex(x), 1 + 0j, complex(q), n)


def pq_shifted_factorial(pair, base, n: int) -> complex:
    """``prod_{k<n} (x_p P**k - x_q Q**k)``.

    With ``pair = base`` this is ``(P - Q)(P**2 - Q**2)...(P**n - Q**n)``.
    """
    n = _check_n(n)
    xp, xq = _as_pair(pair)
    P, Q = _as_base(base)
    return _kernels.shifted_product(xp, xq, P, Q, n)


def multi_shifted_factorial(pairs: Iterable, base, n: int) -> complex:
    n = _check_n(n)
    base = _as_base(base)
    out = 1 + 0j
    for pair in pairs:
        out *= pq_shifted_factorial(pair, base, n)
    return out


def pq_shifted_factorial_ratio_inf(num, den, base, cfg: EvalConfig = DEFAULT_CONFIG) -> complex:
    """Ratio of two infinite twin shifted factorials sharing their p-component.

    The product is formed factor by factor as
    ``prod_k (1 - (num.x_q/x_p) rho**k) / (1 - (den.x_q/x_p) rho**k)``, each
    factor being the quotient of the two ``k``-th factors after dividing both
    by ``x_p P**k``.  It stops once ``small_window`` consecutive factors lie
    within ``rel_tol`` of one.
    """
    num, den = _as_pair(num), _as_pair(den)
    base = _as_base(base)
    scale = max(abs(num.x_p), abs(den.x_p))
    if abs(num.x_p - den.x_p) > DEGENERATE_RTOL * scale:
        raise DomainError("numerator and denominator must share their p-component")
    rho = base.rho
    if abs(rho) >= 1:
        raise DomainError(f"infinite products need |Q/P| < 1, got {abs(rho)!r}")
    xp = num.x_p
    if xp == 0:
        # factors reduce to the constant num.x_q / den.x_q
        if num.x_q == den.x_q:
            return 1 + 0j
        raise DomainError("with vanishing p-components the product cannot converge")
    value, _, status, index = _kernels.ratio_product(
        num.x_q / xp, den.x_q / xp, rho,
        float(cfg.rel_tol), float(cfg.abs_tol), cfg.max_terms, cfg.small_window,
    )
    if status == _kernels.POLE:
        raise PoleError(f"denominator factor {index} of the infinite product vanishes")
    if status == _kernels.MAX_TERMS:
        raise ConvergenceError(f"infinite product not converged after {cfg.max_terms} factors")
    return value


def pq_power(base, x: complex) -> PQPair:
    """The doublet ``(P**x, Q**x)`` on the principal branch."""
    P, Q = _as_base(base)
    x = complex(x)
    return PQPair(_cpow(P, x), _cpow(Q, x))


def kk_adapter(lam: complex, x: complex, p: complex, q: complex, l: int) -> complex:
    """``(lam + x)(p lam + q x)...(p**(l-1) lam + q**(l-1) x)`` as ``((lam, -x); (p, q))_l``."""
    return pq_shifted_factorial(PQPair(lam, -complex(x)), PQBase(p, q), l)


def flv_adapter(mu: complex, nu: complex, p: complex, q: complex, n: int) -> complex:
    """``prod_{k<n} (p**-(mu+k) - q**(nu+k))`` as ``((p**-mu, q**nu); (1/p, q))_n``."""
    p = complex(p)
    if p == 0:
        raise DomainError("p must be nonzero")
    pair = PQPair(_cpow(p, -complex(mu)), _cpow(complex(q), complex(nu)))
    return pq_shifted_factorial(pair, PQBase(1 / p, q), n)


def pq_binomial_coeff(n: int, k: int, base) -> complex:
    """``[n]! / ([k]! [n-k]!)`` in twin-basic factorials."""
    n, k = _check_n(n), _check_n(k)
    if k > n:
        raise DomainError(f"k = {k} exceeds n = {n}")
    base = _as_base(base)
    den = pq_factorial(k, base) * pq_factorial(n - k, base)
    if den == 0:
        raise PoleError("vanishing twin-basic factorial in the denominator")
    return pq_factorial(n, base) / den


def as_complex_array(values: Sequence) -> np.ndarray:
    return np.asarray([complex(v) for v in values], dtype=np.complex128).reshape(-1)
