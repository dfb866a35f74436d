"""Seeded property suites behind ``pqseries suite``.

Draws come from ``numpy.random.Generator(PCG64(seed))``.  PCG64 and the
uniform-double transform are platform independent, so the same seed gives
the same draws everywhere.  Draws are evaluated in order, and each records
its relative residual against the suite tolerance.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import identities as ident
from . import oscillator as osc
from .core import PQBase, PQPair, flv_adapter, kk_adapter, pq_number
from .errors import PQError
from .series import (
    SeriesSpec,
    eval_pq_hypergeometric,
    eval_pq_hypergeometric_exponents,
    eval_q_hypergeometric,
    eval_via_burban_klimyk,
)


@dataclass
class SuiteReport:
    name: str
    tolerance: float
    draws: int = 0
    passed: int = 0
    residuals: list = field(default_factory=list)
    failures: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return self.passed == self.draws

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else 0.0

    @property
    def median_residual(self) -> float:
        return float(np.median(self.residuals)) if self.residuals else 0.0

    def record(self, index: int, params: dict, residual: float, error: str = "") -> None:
        self.draws += 1
        self.residuals.append(residual)
        if residual < self.tolerance and not error:
            self.passed += 1
        else:
            failure = {"draw": index, "params": params, "residual": residual}
            if error:
                failure["error"] = error
            self.failures.append(failure)


def rel_diff(a: complex, b: complex) -> float:
    return abs(a - b) / max(abs(a), abs(b), 1e-300)


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def disk(rng: np.random.Generator, r_max: float, r_min: float = 0.0) -> complex:
    """Uniform point of the annulus ``r_min <= |w| <= r_max``."""
    r = math.sqrt(rng.uniform(r_min**2, r_max**2))
    theta = rng.uniform(0.0, 2 * math.pi)
    return complex(r * math.cos(theta), r * math.sin(theta))


def _run(name: str, tol: float, seed: int, draws: int,
         draw: Callable[[np.random.Generator], dict],
         evaluate: Callable[..., float]) -> SuiteReport:
    rng = make_rng(seed)
    report = SuiteReport(name, tol)
    for i in range(draws):
        params = draw(rng)
        try:
            residual = float(evaluate(**params))
            report.record(i, params, residual)
        except PQError as exc:
            report.record(i, params, math.inf, f"{type(exc).__name__}: {exc}")
    return report


# -- classical reduction -------------------------------------------------------

def draw_reduction(rng):
    s = int(rng.integers(0, 4))
    r = int(rng.integers(0, min(s + 1, 3) + 1))
    q = disk(rng, 0.9, 0.05)
    a = [disk(rng, 2.0) for _ in range(r)]
    b = [disk(rng, 2.0) for _ in range(s)]
    z = disk(rng, 0.5 if r == s + 1 else 2.0, 0.01)
    return {"a": a, "b": b, "q": q, "z": z}


def eval_reduction(a, b, q, z):
    spec = SeriesSpec([PQPair(1, x) for x in a], [PQPair(1, x) for x in b], PQBase(1, q), z)
    return rel_diff(eval_pq_hypergeometric(spec).value, eval_q_hypergeometric(a, b, q, z).value)


def run_reductions(seed: int, draws: int) -> SuiteReport:
    return _run("reductions", 1e-12, seed, draws, draw_reduction, eval_reduction)


# -- binomial theorem ----------------------------------------------------------

def draw_binomial(rng):
    P = disk(rng, 2.0, 0.5)
    Q = disk(rng, 0.5, 0.01) * P
    z = disk(rng, 1.0, 0.1)
    ap = disk(rng, 0.5) * P / z
    aq = disk(rng, 0.5) * P / z
    return {"a": (ap, aq), "base": (P, Q), "z": z}


def eval_binomial(a, base, z):
    return ident.check_pq_binomial(a, base, z, tol=1e-8).rel_residual


def run_binomial(seed: int, draws: int) -> SuiteReport:
    return _run("binomial", 1e-8, seed, draws, draw_binomial, eval_binomial)


# -- Burban-Klimyk reduction -----------------------------------------------------

def draw_burban_klimyk(rng):
    P = rng.uniform(0.5, 2.0)
    Q = P * rng.uniform(0.1, 0.8)
    r = int(rng.integers(1, 4))
    alphas = [complex(rng.uniform(0.2, 3.0), rng.uniform(-0.5, 0.5)) for _ in range(r)]
    betas = [complex(rng.uniform(0.2, 3.0), rng.uniform(-0.5, 0.5)) for _ in range(r - 1)]
    omega = disk(rng, 0.5, 0.05)
    expo = sum(alphas) - sum(betas) - 1
    z = omega / complex(P) ** expo
    return {"alphas": alphas, "betas": betas, "base": (complex(P), complex(Q)), "z": z}


def eval_burban_klimyk(alphas, betas, base, z):
    return rel_diff(eval_pq_hypergeometric_exponents(alphas, betas, base, z).value,
                    eval_via_burban_klimyk(alphas, betas, base, z).value)


def run_burban_klimyk(seed: int, draws: int) -> SuiteReport:
    return _run("burban-klimyk", 1e-10, seed, draws, draw_burban_klimyk, eval_burban_klimyk)


# -- q-exponentials --------------------------------------------------------------

def draw_exponential(rng):
    return {"q": disk(rng, 0.9, 0.1), "z": disk(rng, 0.9, 0.1)}


def eval_exponential(q, z):
    return ident.check_exp_identity(q, z, tol=1e-8).rel_residual


def run_exponentials(seed: int, draws: int) -> SuiteReport:
    return _run("exponentials", 1e-8, seed, draws, draw_exponential, eval_exponential)


# -- permutation invariance ------------------------------------------------------

def draw_permutation(rng):
    P = disk(rng, 1.5, 0.7)
    Q = disk(rng, 0.6, 0.05) * P
    z = disk(rng, 0.5, 0.05)
    pairs = [(disk(rng, 0.6) * P / z, disk(rng, 0.6) * P / z) for _ in range(3)]
    perm_p = [int(i) for i in rng.permutation(3)]
    perm_q = [int(i) for i in rng.permutation(3)]
    return {"pairs": pairs, "base": (P, Q), "z": z, "perm_p": perm_p, "perm_q": perm_q}


def eval_permutation(pairs, base, z, perm_p, perm_q):
    return ident.product_permutation_check(pairs, base, z, perm_p, perm_q).rel_residual


def run_permutations(seed: int, draws: int) -> SuiteReport:
    return _run("permutations", 1e-10, seed, draws, draw_permutation, eval_permutation)


ALL_PERMUTATIONS = [list(p) for p in itertools.permutations(range(3))]


# -- oscillator ------------------------------------------------------------------

def draw_oscillator(rng):
    while True:
        p = rng.uniform(0.5, 1.5)
        q = rng.uniform(0.5, 1.5)
        if abs(1 / p - q) > 1e-3:
            break
    return {"p": p, "q": q, "dim": int(rng.integers(2, 41))}


def eval_oscillator(p, q, dim):
    return max(osc.verify_oscillator(osc.build_fock(p, q, dim)).relative().values())


def run_oscillator(seed: int, draws: int) -> SuiteReport:
    return _run("oscillator", 1e-11, seed, draws, draw_oscillator, eval_oscillator)


# -- Fibonacci recurrence --------------------------------------------------------

def draw_fibonacci(rng):
    P = disk(rng, 1.5, 0.5)
    return {"base": (P, P * disk(rng, 0.9, 0.1))}


def eval_fibonacci(base):
    seq = ident.fibonacci_sequence(base, 30)
    return max(rel_diff(seq[n], pq_number(n, base)) for n in range(1, 31))


def run_fibonacci(seed: int, draws: int) -> SuiteReport:
    return _run("fibonacci", 1e-12, seed, draws, draw_fibonacci, eval_fibonacci)


# -- notation adapters -----------------------------------------------------------

def draw_adapter(rng):
    return {
        "lam": disk(rng, 2.0, 0.1), "x": disk(rng, 2.0, 0.1),
        "mu": disk(rng, 2.0), "nu": disk(rng, 2.0),
        "p": disk(rng, 1.5, 0.6), "q": disk(rng, 1.5, 0.6),
        "n": int(rng.integers(0, 13)),
    }


def kk_direct(lam, x, p, q, l):
    out = 1 + 0j
    for k in range(l):
        out *= p**k * lam + q**k * x
    return out


def flv_direct(mu, nu, p, q, n):
    out = 1 + 0j
    for k in range(n):
        out *= p ** (-(mu + k)) - q ** (nu + k)
    return out


def eval_adapter(lam, x, mu, nu, p, q, n):
    return max(rel_diff(kk_adapter(lam, x, p, q, n), kk_direct(lam, x, p, q, n)),
               rel_diff(flv_adapter(mu, nu, p, q, n), flv_direct(mu, nu, p, q, n)))


def run_adapters(seed: int, draws: int) -> SuiteReport:
    return _run("adapters", 1e-12, seed, draws, draw_adapter, eval_adapter)


SUITES = {
    "reductions": run_reductions,
    "binomial": run_binomial,
    "burban-klimyk": run_burban_klimyk,
    "exponentials": run_exponentials,
    "permutations": run_permutations,
    "oscillator": run_oscillator,
    "fibonacci": run_fibonacci,
    "adapters": run_adapters,
}


def run_suite(name: str, seed: int, draws: int) -> list[SuiteReport]:
    if name == "all":
        return [fn(seed, draws) for fn in SUITES.values()]
    return [SUITES[name](seed, draws)]
