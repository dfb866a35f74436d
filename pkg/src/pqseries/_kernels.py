"""Inner loops for shifted factorials, infinite-product ratios and series sums.

Every function here is plain Python over complex scalars and 1-d complex
arrays so that it can run either compiled (numba) or interpreted.  Public
wrappers live in :mod:`pqseries.core` and :mod:`pqseries.series`; callers
should not rely on the status-code conventions below.

The ``py_*`` names are the interpreted originals, the unprefixed names are
whatever :func:`pqseries._accel.compile_kernel` produced.
"""

import math

from ._accel import compile_kernel, jitable

# termination modes
NATURAL = 0
TOLERANCE = 1
MAX_TERMS = 2

# kernel status codes
OK = 0
POLE = 1
DIVERGENCE = 2

ZERO_RTOL = 1e-13
GROWTH_RATIO_SLACK = 1e-9
GROWTH_START = 10


@jitable
def powi(x, n):
    # same binary exponentiation as CPython's complex ** int, bit for bit
    r = 1.0 + 0.0j
    p = x
    mask = 1
    while mask > 0 and n >= mask:
        if n & mask:
            r = r * p
        mask <<= 1
        p = p * p
    return r


@jitable
def powz(x, n):
    if n >= 0:
        return powi(x, n)
    return 1.0 / powi(x, -n)


@jitable
def is_zero(diff, left, right):
    if left == 0 and right == 0:
        return True
    return abs(diff) < ZERO_RTOL * (abs(left) + abs(right))


@jitable
def neumaier(s, c, x):
    # compensated summation step on floats: returns new (sum, compensation)
    t = s + x
    if abs(s) >= abs(x):
        c += (s - t) + x
    else:
        c += (x - t) + s
    return t, c


@jitable
def is_finite(x):
    return math.isfinite(x.real) and math.isfinite(x.imag)


NATURAL_FLAG = 1
POLE_FLAG = 2

# -- double-double complex arithmetic ---------------------------------------------
#
# Term n of a series with a q**(n(n-1)/2)-type factor contains w**k for every
# k < n, so a relative error d in w**k grows to about n**2/2 * d in the term.
# Rounding w**k to double only once per step keeps that growth out; the
# running power itself is kept as (re_hi, re_lo, im_hi, im_lo).

SPLITTER = 134217729.0  # 2**27 + 1


@jitable
def two_sum(a, b):
    s = a + b
    bb = s - a
    return s, (a - (s - bb)) + (b - bb)


@jitable
def quick_two_sum(a, b):
    s = a + b
    return s, b - (s - a)


@jitable
def split(a):
    c = SPLITTER * a
    hi = c - (c - a)
    return hi, a - hi


@jitable
def two_prod(a, b):
    p = a * b
    ah, al = split(a)
    bh, bl = split(b)
    return p, ((ah * bh - p) + ah * bl + al * bh) + al * bl


@jitable
def dd_mul(ah, al, bh, bl):
    p, e = two_prod(ah, bh)
    e += ah * bl + al * bh
    return quick_two_sum(p, e)


@jitable
def dd_add(ah, al, bh, bl):
    s, e = two_sum(ah, bh)
    e += al + bl
    return quick_two_sum(s, e)


@jitable
def cdd(x):
    return x.real, 0.0, x.imag, 0.0


@jitable
def cdd_value(x):
    return complex(x[0] + x[1], x[2] + x[3])


@jitable
def cdd_mul(x, y):
    a, b = dd_mul(x[0], x[1], y[0], y[1])
    c, d = dd_mul(x[2], x[3], y[2], y[3])
    e, f = dd_mul(x[0], x[1], y[2], y[3])
    g, h = dd_mul(x[2], x[3], y[0], y[1])
    re_h, re_l = dd_add(a, b, -c, -d)
    im_h, im_l = dd_add(e, f, g, h)
    return re_h, re_l, im_h, im_l


@jitable
def cdd_div(x, y):
    # one correction step on the double quotient
    yd = complex(y[0], y[2])
    q1 = complex(x[0], x[2]) / yd
    prod = cdd_mul(cdd(q1), y)
    rh, rl = dd_add(x[0], x[1], -prod[0], -prod[1])
    ih, il = dd_add(x[2], x[3], -prod[2], -prod[3])
    q2 = complex(rh + rl, ih + il) / yd
    re_h, re_l = two_sum(q1.real, q2.real)
    im_h, im_l = two_sum(q1.imag, q2.imag)
    return re_h, re_l, im_h, im_l


@jitable
def cdd_powz(x, k):
    """x**k in double-double for a small integer k; x must be nonzero if k < 0."""
    one = (1.0, 0.0, 0.0, 0.0)
    r = one
    base = cdd(x)
    for _ in range(abs(k)):
        r = cdd_mul(r, base)
    if k < 0:
        return cdd_div(one, r)
    return r


@jitable
def power_step(x, num_exp, den, den_exp):
    """Double-double x**num_exp / den**den_exp; infinite when it has no finite value."""
    if (x == 0 and num_exp < 0) or (den == 0 and den_exp > 0):
        return math.inf, 0.0, 0.0, 0.0
    return cdd_mul(cdd_powz(x, num_exp), cdd_powz(den, -den_exp))


@jitable
def pq_ratio(ap, aq, bp, bq, rho, pre, sgn, wn, n):
    """Ratio t_{n+1}/t_n of the P-scaled twin series, plus a flag.

    The flag is NATURAL_FLAG when a numerator factor vanishes at n and
    POLE_FLAG when a denominator factor does; the ratio is then meaningless.
    """
    rn = powi(rho, n)
    num = 1.0 + 0.0j
    for i in range(len(ap)):
        right = aq[i] * rn
        f = ap[i] - right
        if is_zero(f, ap[i], right):
            return 0.0 + 0.0j, NATURAL_FLAG
        num *= f
    den = 1.0 + 0.0j
    for j in range(len(bp)):
        right = bq[j] * rn
        f = bp[j] - right
        if is_zero(f, bp[j], right):
            return 0.0 + 0.0j, POLE_FLAG
        den *= f
    rn1 = powi(rho, n + 1)
    f = 1.0 - rn1
    if is_zero(f, 1.0, rn1):
        return 0.0 + 0.0j, POLE_FLAG
    return pre * num / (den * f) * sgn * wn, 0


def py_shifted_product(xp, xq, P, Q, n):
    out = 1.0 + 0.0j
    for k in range(n):
        out *= xp * powi(P, k) - xq * powi(Q, k)
    return out


def py_pair_termination(xp, xq, rho, max_n):
    """First k < max_n where xp - xq*rho**k vanishes (P-scaled factor), or -1."""
    for k in range(max_n):
        right = xq * powi(rho, k)
        if is_zero(xp - right, xp, right):
            return k
    return -1


def py_q_termination(a, q, max_n):
    """First k < max_n where some 1 - a_i*q**k vanishes, or -1."""
    for k in range(max_n):
        qk = powi(q, k)
        for i in range(len(a)):
            right = a[i] * qk
            if is_zero(1.0 - right, 1.0, right):
                return k
    return -1


def py_ratio_product(cn, cd, rho, rel_tol, abs_tol, max_terms, small_window):
    """prod_k (1 - cn rho^k) / (1 - cd rho^k).

    Returns (value, factors_used, status, index); status MAX_TERMS means the
    window criterion never fired.
    """
    value = 1.0 + 0.0j
    small = 0
    for k in range(max_terms):
        rk = powi(rho, k)
        den = 1.0 - cd * rk
        if abs(den) < abs_tol:
            return value, k, POLE, k
        factor = (1.0 - cn * rk) / den
        value *= factor
        if abs(factor - 1.0) < rel_tol:
            small += 1
            if small >= small_window:
                return value, k + 1, OK, -1
        else:
            small = 0
    return value, max_terms, MAX_TERMS, -1


@jitable
def ratio_constants(P, Q, z, e_sign, e_struct):
    """(rho, pre, sgn, w_step) for :func:`pq_ratio`.

    ``w_step`` is Q**e_sign / P**(e_sign + e_struct) in double-double; the
    power fed to step n is w_step**n.
    """
    sgn = -1.0 if e_sign % 2 else 1.0
    return Q / P, z / P, sgn, power_step(Q, e_sign, P, e_sign + e_struct)


def py_sum_pq(ap, aq, bp, bq, P, Q, z, e_sign, e_struct, n_natural,
              rel_tol, abs_tol, max_terms, small_window, growth_window):
    """Sum the twin-basic series by its term ratio.

    Each shifted-factorial factor is divided by its P**n scale, so the ratio
    from term n to n+1 is

        (z/P) * prod(ap - aq rho^n) / (prod(bp - bq rho^n) (1 - rho^(n+1)))
              * (-1)^e_sign * (rho^e_sign / P^e_struct)^n

    with rho = Q/P.  ``e_struct`` is 1+s-r, ``e_sign`` is 1+s-r or 0 when the
    alternating power factor is dropped.  ``n_natural >= 0`` sums exactly the
    first n_natural+1 terms.

    Returns (value, terms_used, mode, error_estimate, status, index).
    """
    rho, pre, sgn, w_step = ratio_constants(P, Q, z, e_sign, e_struct)
    w = (1.0, 0.0, 0.0, 0.0)
    term = 1.0 + 0.0j
    sr = si = cr = ci = 0.0
    total = 0.0 + 0.0j
    small = 0
    grow = 0
    prev_ratio = 0.0
    for n in range(max_terms):
        sr, cr = neumaier(sr, cr, term.real)
        si, ci = neumaier(si, ci, term.imag)
        total = complex(sr + cr, si + ci)
        if n == n_natural:
            return total, n + 1, NATURAL, 0.0, OK, -1
        ratio, flag = pq_ratio(ap, aq, bp, bq, rho, pre, sgn, cdd_value(w), n)
        w = cdd_mul(w, w_step)
        if flag == NATURAL_FLAG:
            return total, n + 1, NATURAL, 0.0, OK, -1
        if flag == POLE_FLAG:
            return total, n + 1, MAX_TERMS, math.inf, POLE, n
        nxt = term * ratio
        if not is_finite(nxt) or not is_finite(total):
            return total, n + 1, MAX_TERMS, math.inf, DIVERGENCE, n
        if n_natural < 0:
            mag = abs(term)
            nmag = abs(nxt)
            rmag = abs(ratio)
            if mag <= rel_tol * abs(total) + abs_tol:
                small += 1
                if small >= small_window:
                    return total, n + 1, TOLERANCE, nmag, OK, -1
            else:
                small = 0
            if n >= GROWTH_START and nmag > mag and rmag >= prev_ratio * (1.0 - GROWTH_RATIO_SLACK):
                grow += 1
                if grow >= growth_window:
                    return total, n + 1, MAX_TERMS, nmag, DIVERGENCE, n
            else:
                grow = 0
            prev_ratio = rmag
        term = nxt
    return total, max_terms, MAX_TERMS, abs(term), OK, -1


def py_sum_q(a, b, q, z, e, n_natural,
             rel_tol, abs_tol, max_terms, small_window, growth_window):
    """Sum the one-base series; same conventions as :func:`py_sum_pq`."""
    sgn = -1.0 if e % 2 else 1.0
    w_step = power_step(q, e, 1.0 + 0.0j, 0)
    w = (1.0, 0.0, 0.0, 0.0)
    term = 1.0 + 0.0j
    sr = si = cr = ci = 0.0
    total = 0.0 + 0.0j
    small = 0
    grow = 0
    prev_ratio = 0.0
    for n in range(max_terms):
        sr, cr = neumaier(sr, cr, term.real)
        si, ci = neumaier(si, ci, term.imag)
        total = complex(sr + cr, si + ci)
        if n == n_natural:
            return total, n + 1, NATURAL, 0.0, OK, -1
        qn = powi(q, n)
        num = 1.0 + 0.0j
        for i in range(len(a)):
            right = a[i] * qn
            f = 1.0 - right
            if is_zero(f, 1.0, right):
                return total, n + 1, NATURAL, 0.0, OK, -1
            num *= f
        den = 1.0 + 0.0j
        for j in range(len(b)):
            right = b[j] * qn
            f = 1.0 - right
            if is_zero(f, 1.0, right):
                return total, n + 1, MAX_TERMS, math.inf, POLE, n
            den *= f
        qn1 = powi(q, n + 1)
        f = 1.0 - qn1
        if is_zero(f, 1.0, qn1):
            return total, n + 1, MAX_TERMS, math.inf, POLE, n
        ratio = num / (den * f) * (sgn * cdd_value(w)) * z
        w = cdd_mul(w, w_step)
        nxt = term * ratio
        if not is_finite(nxt) or not is_finite(total):
            return total, n + 1, MAX_TERMS, math.inf, DIVERGENCE, n
        if n_natural < 0:
            mag = abs(term)
            nmag = abs(nxt)
            rmag = abs(ratio)
            if mag <= rel_tol * abs(total) + abs_tol:
                small += 1
                if small >= small_window:
                    return total, n + 1, TOLERANCE, nmag, OK, -1
            else:
                small = 0
            if n >= GROWTH_START and nmag > mag and rmag >= prev_ratio * (1.0 - GROWTH_RATIO_SLACK):
                grow += 1
                if grow >= growth_window:
                    return total, n + 1, MAX_TERMS, nmag, DIVERGENCE, n
            else:
                grow = 0
            prev_ratio = rmag
        term = nxt
    return total, max_terms, MAX_TERMS, abs(term), OK, -1


shifted_product = compile_kernel(py_shifted_product)
pair_termination = compile_kernel(py_pair_termination)
q_termination = compile_kernel(py_q_termination)
ratio_product = compile_kernel(py_ratio_product)
sum_pq = compile_kernel(py_sum_pq)
sum_q = compile_kernel(py_sum_q)

PY_KERNELS = {
    "shifted_product": py_shifted_product,
    "pair_termination": py_pair_termination,
    "q_termination": py_q_termination,
    "ratio_product": py_ratio_product,
    "sum_pq": py_sum_pq,
    "sum_q": py_sum_q,
}
KERNELS = {
    "shifted_product": shifted_product,
    "pair_termination": pair_termination,
    "q_termination": q_termination,
    "ratio_product": ratio_product,
    "sum_pq": sum_pq,
    "sum_q": sum_q,
}
