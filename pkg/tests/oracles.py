"""Independent reference evaluations in mpmath, used to freeze expected values.

Nothing here imports pqseries.  Sums are plain from-scratch products at 40
digits, so they share no code path with the library's ratio recurrences.
"""

import mpmath as mp

mp.mp.dps = 40


def c(x):
    return mp.mpc(complex(x))


def to_complex(x):
    return complex(mp.re(x), mp.im(x))


def pq_number(x, P, Q):
    x, P, Q = c(x), c(P), c(Q)
    if P == Q:
        return to_complex(x * P ** (x - 1))
    return to_complex((P**x - Q**x) / (P - Q))


def shifted(xp, xq, P, Q, n):
    xp, xq, P, Q = c(xp), c(xq), c(P), c(Q)
    out = mp.mpc(1)
    for k in range(n):
        out *= xp * P**k - xq * Q**k
    return out


def q_shifted(x, q, n):
    x, q = c(x), c(q)
    out = mp.mpc(1)
    for k in range(n):
        out *= 1 - x * q**k
    return out


def pq_term(num, den, P, Q, z, n, alternating=True):
    """n-th twin-series term, every product rebuilt from scratch."""
    r, s = len(num), len(den)
    e = 1 + s - r
    t = mp.mpc(1)
    for xp, xq in num:
        t *= shifted(xp, xq, P, Q, n)
    for xp, xq in den:
        t /= shifted(xp, xq, P, Q, n)
    t /= shifted(P, Q, P, Q, n)
    if alternating:
        t *= ((-1) ** n * (c(Q) / c(P)) ** (n * (n - 1) // 2)) ** e
    return t * c(z) ** n


def pq_series(num, den, P, Q, z, n_terms, alternating=True):
    return to_complex(mp.fsum(pq_term(num, den, P, Q, z, n, alternating) for n in range(n_terms)))


def q_series(a, b, q, z, n_terms):
    r, s = len(a), len(b)
    e = 1 + s - r
    total = mp.mpc(0)
    for n in range(n_terms):
        t = mp.mpc(1)
        for x in a:
            t *= q_shifted(x, q, n)
        for x in b:
            t /= q_shifted(x, q, n)
        t /= q_shifted(q, q, n)
        t *= ((-1) ** n * c(q) ** (n * (n - 1) // 2)) ** e * c(z) ** n
        total += t
    return to_complex(total)


def qhyper(a, b, q, z):
    return to_complex(mp.qhyper([c(x) for x in a], [c(x) for x in b], c(q), c(z)))


def ratio_inf(nxp, nxq, dxp, dxq, P, Q, n_factors=400):
    out = mp.mpc(1)
    for k in range(n_factors):
        out *= (c(nxp) * c(P) ** k - c(nxq) * c(Q) ** k) / (c(dxp) * c(P) ** k - c(dxq) * c(Q) ** k)
    return to_complex(out)


def e_small(q, z, n_terms=400):
    return to_complex(mp.fsum(c(z) ** n / q_shifted(q, q, n) for n in range(n_terms)))


def e_big(q, z, n_terms=400):
    return to_complex(mp.fsum(c(q) ** (n * (n - 1) // 2) * c(z) ** n / q_shifted(q, q, n) for n in range(n_terms)))


def rel(a, b):
    a, b = complex(a), complex(b)
    return abs(a - b) / max(abs(a), abs(b), 1e-300)
