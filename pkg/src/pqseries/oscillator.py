"""Truncated Fock-space realization of the (p,q)-oscillator and relation checkers.

Matrices act on column vectors indexed by the level ``n = 0 .. dim-1``, so
the lowering operator ``a|n> = sqrt([n]) |n-1>`` sits on the first
superdiagonal (``a[n-1, n]``), the same layout as ``qutip.destroy``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .core import PQBase, pq_number
from .errors import DomainError, NumericalError, ShapeError

__all__ = ["FockRealization", "RelationResiduals", "build_fock", "verify_oscillator", "verify_angular_momentum"]

OSCILLATOR_RELATION = "a a_dag - q a_dag a = p^-N"
N_A_RELATION = "[N, a] = -a"
N_ADAG_RELATION = "[N, a_dag] = a_dag"
J0_JP_RELATION = "[J0, J+] = J+"
J0_JM_RELATION = "[J0, J-] = -J-"
JP_JM_RELATION = "J+ J- - p/q J- J+ = (p^-2J0 - q^2J0)/(1/p - q)"


@dataclass(frozen=True)
class FockRealization:
    dim: int
    p: complex
    q: complex
    a: np.ndarray
    a_dag: np.ndarray
    n_op: np.ndarray

    @property
    def numbers(self) -> np.ndarray:
        """``[n]_{1/p, q}`` for ``n = 0 .. dim-1``."""
        return np.array([pq_number(n, PQBase(1 / self.p, self.q)) for n in range(self.dim)])


@dataclass(frozen=True)
class RelationResiduals:
    """Max-norm residuals keyed by relation name.

    ``scales`` holds the largest max-norm among each relation's operand
    terms, so ``residuals[k] / scales[k]`` is a size-independent relative
    residual.
    """

    residuals: dict
    subspace_dim: int
    scales: dict

    def relative(self) -> dict:
        return {k: v / max(self.scales.get(k, 0.0), 1.0) for k, v in self.residuals.items()}


def build_fock(p: complex, q: complex, dim: int, *, real: bool = False) -> FockRealization:
    """Ladder matrices with ``a^dag a = [N]_{1/p, q}`` on ``dim`` levels.

    Entries are principal square roots of the basic numbers and ``a_dag`` is
    the plain transpose of ``a``, so ``a a_dag`` and ``a_dag a`` reproduce
    the numbers exactly even when they are complex or negative.  With
    ``real=True``, a non-positive or non-real number raises
    :class:`NumericalError` instead.

    >>> build_fock(1, 0.5, 3).numbers.real.tolist()
    [0.0, 1.0, 1.5]
    """
    p, q = complex(p), complex(q)
    if p == 0:
        raise DomainError("p must be nonzero")
    dim = int(dim)
    if dim < 1:
        raise ValueError("dim must be a positive integer")
    base = PQBase(1 / p, q)
    numbers = np.array([pq_number(n, base) for n in range(dim)], dtype=np.complex128)
    if real:
        bad = [n for n in range(1, dim) if numbers[n].imag != 0 or numbers[n].real <= 0]
        if bad:
            raise NumericalError(f"[n]_(1/p,q) is not real positive at n = {bad[0]}")
        entries = np.sqrt(numbers.real[1:]).astype(np.complex128)
    else:
        entries = np.sqrt(numbers[1:])
    a = np.diag(entries, k=1) if dim > 1 else np.zeros((1, 1), dtype=np.complex128)
    a = a.astype(np.complex128)
    n_op = np.diag(np.arange(dim)).astype(np.complex128)
    return FockRealization(dim, p, q, a, a.T.copy(), n_op)


def _maxnorm(m: np.ndarray) -> float:
    return float(np.max(np.abs(m))) if m.size else 0.0


def verify_oscillator(real: FockRealization) -> RelationResiduals:
    """Residuals of ``a a^dag - q a^dag a = p^(-N)``, ``[N, a] = -a``, ``[N, a^dag] = a^dag``.

    The first relation is checked on levels ``0 .. dim-2`` only, because the
    truncation removes ``a^dag |dim-1>``.  The commutators are checked on the
    full space.
    """
    a, ad, n_op = real.a, real.a_dag, real.n_op
    p_pow = np.diag(real.p ** (-np.arange(real.dim, dtype=np.complex128)))
    sub = real.dim - 1
    aad = (a @ ad)[:sub, :sub]
    qada = real.q * (ad @ a)[:sub, :sub]
    lhs = aad - qada
    rhs = p_pow[:sub, :sub]
    residuals = {
        OSCILLATOR_RELATION: _maxnorm(lhs - rhs),
        N_A_RELATION: _maxnorm(n_op @ a - a @ n_op + a),
        N_ADAG_RELATION: _maxnorm(n_op @ ad - ad @ n_op - ad),
    }
    scales = {
        OSCILLATOR_RELATION: max(_maxnorm(rhs), _maxnorm(aad), _maxnorm(qada)),
        N_A_RELATION: _maxnorm(a),
        N_ADAG_RELATION: _maxnorm(ad),
    }
    return RelationResiduals(residuals, sub, scales)


def verify_angular_momentum(J0, Jp, Jm, p: complex, q: complex) -> RelationResiduals:
    """Residuals of the (p,q)-deformed angular momentum relations.

    Only diagonal ``J0`` is supported.  The right-hand side
    ``(p^(-2 J0) - q^(2 J0)) / (1/p - q)`` is then ``[2 j]_{1/p, q}`` on each
    diagonal entry ``j``, including its limit at ``1/p == q``.
    """
    J0, Jp, Jm = (np.asarray(m, dtype=np.complex128) for m in (J0, Jp, Jm))
    if J0.ndim != 2 or J0.shape[0] != J0.shape[1] or Jp.shape != J0.shape or Jm.shape != J0.shape:
        raise ShapeError(f"need equal square matrices, got {J0.shape}, {Jp.shape}, {Jm.shape}")
    weights = np.diag(J0)
    if np.count_nonzero(J0 - np.diag(weights)):
        raise DomainError("J0 must be diagonal")
    p, q = complex(p), complex(q)
    if p == 0 or q == 0:
        raise DomainError("p and q must be nonzero")
    base = PQBase(1 / p, q)
    rhs = np.diag([pq_number(2 * w, base) for w in weights]).astype(np.complex128)
    jpjm = Jp @ Jm
    jmjp = (p / q) * (Jm @ Jp)
    lhs = jpjm - jmjp
    residuals = {
        J0_JP_RELATION: _maxnorm(J0 @ Jp - Jp @ J0 - Jp),
        J0_JM_RELATION: _maxnorm(J0 @ Jm - Jm @ J0 + Jm),
        JP_JM_RELATION: _maxnorm(lhs - rhs),
    }
    scales = {J0_JP_RELATION: _maxnorm(Jp), J0_JM_RELATION: _maxnorm(Jm), JP_JM_RELATION: max(_maxnorm(rhs), _maxnorm(jpjm), _maxnorm(jmjp))}
    return RelationResiduals(residuals, J0.shape[0], scales)
