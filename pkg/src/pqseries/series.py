"""Summation of one-base and twin-base basic hypergeometric series.

Sums run on the term ratio.  A sum stops for one of three reasons, reported
in :class:`SeriesResult`:

* ``natural``: a numerator shifted factorial vanishes, so the series is a
  polynomial.  It is summed exactly, with no tolerance cut-off.
* ``tolerance``: ``small_window`` consecutive terms fell below
  ``rel_tol * |partial sum| + abs_tol``.
* ``max_terms``: the term budget ran out.  This is reported and never treated
  as converged.

No convergence radius in ``z`` is assumed.  Persistent growth of the terms
raises :class:`~pqseries.errors.DivergenceError`.
"""

from __future__ import annotations

import cmath
import enum
import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Sequence

from . import _kernels
from .core import (
    DEFAULT_CONFIG,
    EvalConfig,
    PQBase,
    PQPair,
    _as_base,
    _as_pair,
    _cpow,
    as_complex_array,
    pq_number,
    pq_power,
)
from .errors import ArityError, ConvergenceError, DivergenceError, DomainError, PoleError

__all__ = [
    "Termination",
    "SeriesSpec",
    "SeriesResult",
    "eval_q_hypergeometric",
    "eval_pq_hypergeometric",
    "eval_pq_hypergeometric_exponents",
    "rho_omega_transform",
    "eval_via_burban_klimyk",
    "detect_termination",
    "limit_parameter_series",
    "recurrence_terms",
]


class Termination(str, enum.Enum):
    NATURAL = "natural"
    TOLERANCE = "tolerance"
    MAX_TERMS = "max_terms"


_MODES = {
    _kernels.NATURAL: Termination.NATURAL,
    _kernels.TOLERANCE: Termination.TOLERANCE,
    _kernels.MAX_TERMS: Termination.MAX_TERMS,
}


@dataclass(frozen=True)
class SeriesSpec:
    numerator_pairs: Sequence[PQPair]
    denominator_pairs: Sequence[PQPair]
    base: PQBase
    z: complex

    def __post_init__(self):
        object.__setattr__(self, "numerator_pairs", tuple(_as_pair(p) for p in self.numerator_pairs))
        object.__setattr__(self, "denominator_pairs", tuple(_as_pair(p) for p in self.denominator_pairs))
        object.__setattr__(self, "base", _as_base(self.base))
        object.__setattr__(self, "z", complex(self.z))

    @property
    def r(self) -> int:
        return len(self.numerator_pairs)

    @property
    def s(self) -> int:
        return len(self.denominator_pairs)


@dataclass(frozen=True)
class SeriesResult:
    value: complex
    terms_used: int
    termination: Termination
    error_estimate: float = field(default=0.0)

    @property
    def converged(self) -> bool:
        return self.termination is not Termination.MAX_TERMS


def _finish(raw, what: str) -> SeriesResult:
    value, terms, mode, err, status, index = raw
    if status == _kernels.POLE:
        raise PoleError(f"{what}: denominator factor {index} vanishes before termination")
    if status == _kernels.DIVERGENCE:
        raise DivergenceError(f"{what}: terms grow without bound (detected at n = {index})")
    return SeriesResult(complex(value), int(terms), _MODES[int(mode)], float(err))


def _cfg_args(cfg: EvalConfig):
    return (float(cfg.rel_tol), float(cfg.abs_tol), cfg.max_terms, cfg.small_window, cfg.growth_window)


def detect_termination(pair, base, max_n: int) -> Optional[int]:
    """Smallest ``k < max_n`` where ``x_p P**k - x_q Q**k`` vanishes, else None.

    "Vanishes" means the factor is below ``1e-13`` times the sum of the
    magnitudes of its two parts; the pair ``(0, 0)`` vanishes at ``k = 0``.
    """
    xp, xq = _as_pair(pair)
    P, Q = _as_base(base)
    if P == 0:
        # factors are xp - xq at k = 0, then -xq Q**k
        if _kernels.is_zero(xp - xq, xp, xq):
            return 0
        if max_n > 1 and (xq == 0 or Q == 0):
            return 1
        return None
    k = int(_kernels.pair_termination(xp, xq, Q / P, int(max_n)))
    return None if k < 0 else k


def eval_q_hypergeometric(a: Sequence[complex], b: Sequence[complex], q: complex, z: complex,
                          cfg: EvalConfig = DEFAULT_CONFIG) -> SeriesResult:
    """Classical ``r phi s (a; b; q, z)`` with the ``((-1)^n q^(n(n-1)/2))^(1+s-r)`` factor."""
    a_arr, b_arr = as_complex_array(a), as_complex_array(b)
    q, z = complex(q), complex(z)
    e = 1 + len(b_arr) - len(a_arr)
    if z == 0:
        return SeriesResult(1 + 0j, 1, Termination.NATURAL, 0.0)
    k = int(_kernels.q_termination(a_arr, q, cfg.max_terms))
    if k < 0 and abs(q) >= 1:
        raise ConvergenceError(f"|q| = {abs(q)!r} >= 1 and the series does not terminate")
    raw = _kernels.sum_q(a_arr, b_arr, q, z, e, k, *_cfg_args(cfg))
    return _finish(raw, "q-hypergeometric series")


def _pair_arrays(pairs):
    pairs = [_as_pair(p) for p in pairs]
    return (as_complex_array([p.x_p for p in pairs]), as_complex_array([p.x_q for p in pairs]))


def _sum_pairs(spec: SeriesSpec, cfg: EvalConfig, alternating: bool) -> SeriesResult:
    P, Q = spec.base
    if P == 0:
        raise DomainError("the twin series needs P != 0")
    if spec.z == 0:
        return SeriesResult(1 + 0j, 1, Termination.NATURAL, 0.0)
    ap, aq = _pair_arrays(spec.numerator_pairs)
    bp, bq = _pair_arrays(spec.denominator_pairs)
    ks = [detect_termination(p, spec.base, cfg.max_terms) for p in spec.numerator_pairs]
    ks = [k for k in ks if k is not None]
    k = min(ks) if ks else -1
    if k < 0 and abs(Q / P) >= 1:
        raise ConvergenceError(f"|Q/P| = {abs(Q / P)!r} >= 1 and the series does not terminate")
    e_struct = 1 + spec.s - spec.r
    e_sign = e_struct if alternating else 0
    raw = _kernels.sum_pq(ap, aq, bp, bq, P, Q, spec.z, e_sign, e_struct, k, *_cfg_args(cfg))
    return _finish(raw, "(P,Q)-hypergeometric series")


def eval_pq_hypergeometric(spec: SeriesSpec, cfg: EvalConfig = DEFAULT_CONFIG, *,
                           alternating: bool = True) -> SeriesResult:
    """Twin-base series ``r phi~ s`` over numerator/denominator pairs.

    The ``n``-th term is ``(a~; q~)_n / ((b~; q~)_n (q~; q~)_n) *
    ((-1)^n (Q/P)^(n(n-1)/2))^(1+s-r) * z^n``.  ``alternating=False`` drops
    the bracketed power factor, the convention used for the twin
    exponential.

    >>> spec = SeriesSpec([PQPair(1, 0.3)], [], PQBase(1, 0.5), 0.4)
    >>> round(eval_pq_hypergeometric(spec).value.real, 12)
    1.995164350821
    """
    return _sum_pairs(spec, cfg, alternating)


def adaptive_sum(ratio_at: Callable[[int], complex], cfg: EvalConfig = DEFAULT_CONFIG,
                 natural: int = -1) -> SeriesResult:
    """Sum ``t_0 = 1, t_{n+1} = t_n * ratio_at(n)`` under the standard stopping policy.

    Interpreted twin of the compiled kernels, for series whose term ratio is
    easier to state as a Python callable.  ``natural >= 0`` sums exactly
    ``natural + 1`` terms.
    """
    term = 1 + 0j
    total = 0j
    sr = si = cr = ci = 0.0
    small = grow = 0
    prev_ratio = 0.0
    for n in range(cfg.max_terms):
        sr, cr = _kernels.neumaier(sr, cr, term.real)
        si, ci = _kernels.neumaier(si, ci, term.imag)
        total = complex(sr + cr, si + ci)
        if n == natural:
            return SeriesResult(total, n + 1, Termination.NATURAL, 0.0)
        try:
            ratio = ratio_at(n)
        except OverflowError as exc:
            raise DivergenceError(f"term ratio overflowed at n = {n}") from exc
        nxt = term * ratio
        if not (math.isfinite(abs(nxt)) and math.isfinite(abs(total))):
            raise DivergenceError(f"terms overflowed at n = {n}")
        if natural < 0:
            mag, nmag, rmag = abs(term), abs(nxt), abs(ratio)
            if mag <= cfg.rel_tol * abs(total) + cfg.abs_tol:
                small += 1
                if small >= cfg.small_window:
                    return SeriesResult(total, n + 1, Termination.TOLERANCE, nmag)
            else:
                small = 0
            if (n >= _kernels.GROWTH_START and nmag > mag
                    and rmag >= prev_ratio * (1 - _kernels.GROWTH_RATIO_SLACK)):
                grow += 1
                if grow >= cfg.growth_window:
                    raise DivergenceError(f"terms grow without bound (detected at n = {n})")
            else:
                grow = 0
            prev_ratio = rmag
        term = nxt
    return SeriesResult(total, cfg.max_terms, Termination.MAX_TERMS, abs(term))


def _log_ratio(base: PQBase) -> complex:
    P, Q = base
    return cmath.log(Q) - cmath.log(P)


def _number_vanishes(x: complex, base: PQBase) -> bool:
    """``[x]_{P,Q} == 0``, tested as ``(Q/P)**x == 1`` in log form to avoid overflow."""
    P, Q = base
    if abs(P - Q) < 1e-14 * max(abs(P), abs(Q), 1.0):
        return x == 0
    if Q == 0:
        return False
    try:
        w = cmath.exp(x * _log_ratio(base))
    except OverflowError:
        return False
    return _kernels.is_zero(1 - w, 1.0, w)


def _exponent_termination(alphas: Sequence[complex], base: PQBase, max_n: int) -> int:
    P, Q = base
    if not alphas:
        return -1
    if abs(P - Q) < 1e-14 * max(abs(P), abs(Q), 1.0):
        hits = [int(-a.real) for a in alphas if a.imag == 0 and a.real <= 0 and a.real == int(a.real)]
        hits = [k for k in hits if k < max_n]
        return min(hits) if hits else -1
    if Q == 0:
        return -1
    log_rho = _log_ratio(base)
    for n in range(max_n):
        if any(_number_vanishes(a + n, base) for a in alphas):
            return n
        # once every (Q/P)**(a+n) has left the unit neighbourhood for good, stop
        mags = [((a + n) * log_rho).real for a in alphas]
        if log_rho.real < 0 and min(mags) < -40:
            return -1
        if log_rho.real > 0 and max(mags) > 40:
            return -1
    return -1


def eval_pq_hypergeometric_exponents(alphas: Sequence[complex], betas: Sequence[complex], base,
                                     z: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> SeriesResult:
    """Same series with pairs ``q~**alpha``, written in twin-basic rising factorials.

    Term ratio: ``prod [alpha_i + n] / (prod [beta_j + n] [n + 1]) *
    (-(Q/P)^n / (P - Q))^(1+s-r) * z``.  It is built from
    :func:`pq_number` alone, independently of the pair kernel.
    """
    base = _as_base(base)
    alphas = [complex(a) for a in alphas]
    betas = [complex(b) for b in betas]
    z = complex(z)
    P, Q = base
    if P == 0:
        raise DomainError("the twin series needs P != 0")
    if z == 0:
        return SeriesResult(1 + 0j, 1, Termination.NATURAL, 0.0)
    rho = Q / P
    e = 1 + len(betas) - len(alphas)
    if e != 0 and abs(P - Q) < 1e-14 * max(abs(P), abs(Q), 1.0):
        raise PoleError("(P - Q)**(1+s-r) vanishes at P = Q")
    step = -1 / (P - Q) if e != 0 else 1.0

    natural = _exponent_termination(alphas, base, cfg.max_terms)
    if natural < 0 and abs(rho) >= 1:
        raise ConvergenceError(f"|Q/P| = {abs(rho)!r} >= 1 and the series does not terminate")

    def ratio_at(n):
        num = 1 + 0j
        for a in alphas:
            num *= pq_number(a + n, base)
        den = 1 + 0j
        for b in betas + [1 + 0j]:
            if _number_vanishes(b + n, base):
                raise PoleError(f"denominator factor [{b + n}] vanishes")
            den *= pq_number(b + n, base)
        ratio = num / den * z
        if e:
            ratio *= (step * rho**n) ** e
        return ratio

    return adaptive_sum(ratio_at, cfg, natural)


def rho_omega_transform(alphas: Sequence[complex], betas: Sequence[complex], base,
                        z: complex) -> tuple[complex, complex]:
    """``rho = Q/P`` and ``omega = P**(sum(alphas) - sum(betas) - 1) * z``."""
    base = _as_base(base)
    rho = base.rho
    expo = sum(complex(a) for a in alphas) - sum(complex(b) for b in betas) - 1
    return rho, _cpow(base.P, expo) * complex(z)


def eval_via_burban_klimyk(alphas: Sequence[complex], betas: Sequence[complex], base,
                           z: complex, cfg: EvalConfig = DEFAULT_CONFIG) -> SeriesResult:
    """Evaluate the ``s = r - 1`` twin series as a classical series in base ``rho``.

    The parameters become ``rho**alpha`` and ``rho**beta`` and the argument
    becomes ``omega``.  The rewrite assumes ``(Q/P)**x == Q**x / P**x``, which
    holds for positive real bases and for integer exponents.
    """
    if len(betas) != len(alphas) - 1:
        raise ArityError(f"need len(betas) == len(alphas) - 1, got {len(alphas)} and {len(betas)}")
    rho, omega = rho_omega_transform(alphas, betas, base, z)
    a = [_cpow(rho, complex(x)) for x in alphas]
    b = [_cpow(rho, complex(x)) for x in betas]
    return eval_q_hypergeometric(a, b, rho, omega, cfg)


def limit_parameter_series(spec: SeriesSpec, which: int, direction: str,
                           cfg: EvalConfig = DEFAULT_CONFIG) -> SeriesResult:
    """Evaluate the limit series where one numerator pair is sent to infinity.

    Sending the q-component of pair ``which`` to infinity while the argument
    is scaled by its inverse leaves the pair ``(0, 1)``.  The p-component
    limit leaves ``(1, 0)``.  ``direction`` is ``"q_component"`` or
    ``"p_component"``.
    """
    pairs = list(spec.numerator_pairs)
    if not -len(pairs) <= which < len(pairs):
        raise IndexError(f"numerator pair index {which} out of range for r = {len(pairs)}")
    if direction == "q_component":
        pairs[which] = PQPair(0, 1)
    elif direction == "p_component":
        pairs[which] = PQPair(1, 0)
    else:
        raise ValueError(f"direction must be 'q_component' or 'p_component', not {direction!r}")
    return eval_pq_hypergeometric(replace(spec, numerator_pairs=pairs), cfg)


def pairs_from_exponents(alphas: Sequence[complex], base) -> list[PQPair]:
    return [pq_power(base, a) for a in alphas]


def recurrence_terms(spec: SeriesSpec, n_max: int, *, alternating: bool = True) -> list[complex]:
    """Terms ``t_0 .. t_{n_max}`` produced by the same ratio step the summation kernel uses.

    Terms past a natural termination are exactly zero.  A pole raises
    :class:`PoleError`.
    """
    P, Q = spec.base
    if P == 0:
        raise DomainError("the twin series needs P != 0")
    ap, aq = _pair_arrays(spec.numerator_pairs)
    bp, bq = _pair_arrays(spec.denominator_pairs)
    e_struct = 1 + spec.s - spec.r
    e_sign = e_struct if alternating else 0
    rho, pre, sgn, w_step = _kernels.ratio_constants(complex(P), complex(Q), complex(spec.z), e_sign, e_struct)
    w = (1.0, 0.0, 0.0, 0.0)
    terms = [1 + 0j]
    for n in range(n_max):
        ratio, flag = _kernels.pq_ratio(ap, aq, bp, bq, rho, pre, sgn, _kernels.cdd_value(w), n)
        w = _kernels.cdd_mul(w, w_step)
        if flag == _kernels.POLE_FLAG:
            raise PoleError(f"denominator factor {n} vanishes")
        if flag == _kernels.NATURAL_FLAG:
            terms.extend([0j] * (n_max - n))
            break
        terms.append(terms[-1] * complex(ratio))
    return terms
