import math
import os
import subprocess
import sys
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

import oracles
from pqseries import _kernels as k
from pqseries._accel import NUMBA_AVAILABLE, USE_NUMBA, backend

CFG = (1e-12, 1e-300, 5000, 3, 5)
# complex division rounds differently compiled and interpreted; the running
# term product carries that difference forward, so allow a few ulps per term
ROUNDING_PER_TERM = 1e-14


def arr(*xs):
    return np.array(xs, dtype=np.complex128)


def close(a, b, tol=1e-14):
    return abs(a - b) <= tol * max(abs(a), abs(b), 1e-300)


# -- double-double helpers ------------------------------------------------------

def exact(hi, lo):
    return Fraction(hi) + Fraction(lo)


@given(st.floats(-1e10, 1e10), st.floats(-1e10, 1e10))
def test_two_sum_is_exact(a, b):
    s, e = k.two_sum(a, b)
    assert exact(s, e) == Fraction(a) + Fraction(b)


# Dekker's product is exact while the low part stays out of the subnormal range
normal = st.floats(-1e10, 1e10).filter(lambda v: v == 0 or abs(v) > 1e-100)


@given(normal, normal)
def test_two_prod_is_exact(a, b):
    p, e = k.two_prod(a, b)
    assert exact(p, e) == Fraction(a) * Fraction(b)


def test_running_power_beats_plain_product():
    x = complex(0.9, 0.3)
    w = k.cdd(1 + 0j)
    step = k.cdd(x)
    plain = 1 + 0j
    for _ in range(400):
        w = k.cdd_mul(w, step)
        plain *= x
    ref = oracles.to_complex(oracles.c(x) ** 400)
    assert abs(k.cdd_value(w) - ref) <= 2e-16 * abs(ref)
    assert abs(k.cdd_value(w) - ref) <= abs(plain - ref)


def test_power_step_values():
    assert k.cdd_value(k.power_step(2 + 0j, 3, 4 + 0j, 1)) == 2
    assert k.cdd_value(k.power_step(0.5 + 0j, 0, 2 + 0j, 2)) == 0.25
    assert math.isinf(k.power_step(0j, -1, 1 + 0j, 0)[0])


def test_cdd_div_inverts_mul():
    x, y = k.cdd(1.3 - 0.7j), k.cdd(0.2 + 2.1j)
    assert close(k.cdd_value(k.cdd_div(k.cdd_mul(x, y), y)), 1.3 - 0.7j, 1e-16)


# -- compiled and interpreted kernels agree -------------------------------------

@pytest.mark.skipif(not NUMBA_AVAILABLE, reason="numba not installed")
def test_kernel_tables_cover_same_names():
    assert set(k.KERNELS) == set(k.PY_KERNELS)


@given(st.complex_numbers(max_magnitude=2, allow_nan=False), st.complex_numbers(max_magnitude=2, allow_nan=False),
       st.integers(0, 40))
def test_shifted_product_paths_agree(xp, xq, n):
    P, Q = 1.1 + 0.2j, 0.7 - 0.1j
    assert close(k.KERNELS["shifted_product"](xp, xq, P, Q, n), k.PY_KERNELS["shifted_product"](xp, xq, P, Q, n),
                 1e-12)


@given(st.floats(0.05, 0.9), st.floats(-3, 3), st.complex_numbers(max_magnitude=0.9, allow_nan=False))
def test_sum_pq_paths_agree(rho, phase, z):
    P = complex(1.2, 0.1)
    Q = P * rho * complex(math.cos(phase), math.sin(phase))
    args = (arr(0.4, 1.1 + 0.2j), arr(0.3, 0.5), arr(0.9), arr(0.2), P, Q, z, 0, 0, -1) + CFG
    fast = k.KERNELS["sum_pq"](*args)
    slow = k.PY_KERNELS["sum_pq"](*args)
    assert fast[1] == slow[1] and fast[2] == slow[2] and fast[4] == slow[4]
    assert close(fast[0], slow[0], ROUNDING_PER_TERM * fast[1])


def condition(a, b, q, z, e, n_terms):
    """sum of |t_n| for the one-base series."""
    t, total = 1.0, 0.0
    for n in range(n_terms):
        total += abs(t)
        ratio = np.prod(1 - a * q**n) / (np.prod(1 - b * q**n) * (1 - q ** (n + 1)))
        t *= ratio * ((-1) ** e * q ** (e * n)) * z
    return abs(total)


@given(st.floats(0.05, 0.9), st.complex_numbers(max_magnitude=0.9, allow_nan=False), st.integers(0, 3))
def test_sum_q_paths_agree(q, z, e):
    a, b = arr(0.3, 0.6j), arr(0.8)
    args = (a, b, complex(q), z, e, -1) + CFG
    fast = k.KERNELS["sum_q"](*args)
    slow = k.PY_KERNELS["sum_q"](*args)
    assert fast[1] == slow[1] and fast[4] == slow[4]
    # the terms grow well past the sum before decaying, so scale by the condition number
    cond = condition(a, b, q, z, e, fast[1]) / max(abs(slow[0]), 1e-300)
    assert close(fast[0], slow[0], ROUNDING_PER_TERM * fast[1] * max(cond, 1.0))


def test_ratio_product_paths_agree():
    args = (0.3 + 0.1j, 0.6, 0.5 - 0.2j, 1e-17, 1e-300, 5000, 3)
    fast = k.KERNELS["ratio_product"](*args)
    slow = k.PY_KERNELS["ratio_product"](*args)
    assert fast[1:] == slow[1:] and close(fast[0], slow[0])


def test_termination_paths_agree():
    rho = 0.5 + 0j
    for name, args in [("pair_termination", (0.5 + 0j, 1 + 0j, rho, 20)),
                       ("q_termination", (arr(2, 8), 0.5 + 0j, 20))]:
        assert k.KERNELS[name](*args) == k.PY_KERNELS[name](*args) == 1


# -- backend switch ---------------------------------------------------------------

def run_python(code, **env):
    full = dict(os.environ, **env)
    out = subprocess.run([sys.executable, "-c", code], capture_output=True, text=True, env=full, check=True)
    return out.stdout.strip()


def test_env_flag_forces_python_backend():
    code = "import pqseries; print(pqseries.backend(), pqseries.pq_number(3, (2, 1)))"
    assert run_python(code, PQSERIES_DISABLE_NUMBA="1") == "python (7+0j)"


@pytest.mark.skipif(not NUMBA_AVAILABLE, reason="numba not installed")
def test_default_backend_is_numba():
    assert backend() == ("numba" if USE_NUMBA else "python")
    assert run_python("import pqseries; print(pqseries.backend())", PQSERIES_DISABLE_NUMBA="0") == "numba"


@pytest.mark.skipif(not NUMBA_AVAILABLE, reason="numba not installed")
def test_benchmark_script_runs():
    script = os.path.join(os.path.dirname(__file__), os.pardir, "benchmarks", "bench_kernels.py")
    out = subprocess.run([sys.executable, script, "--repeat", "1", "--skip-end-to-end"],
                         capture_output=True, text=True, check=True)
    assert "speedup" in out.stdout and len(out.stdout.splitlines()) == 5
