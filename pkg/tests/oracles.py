"""Slow, independent reference computations.

Series are plain ``{word_tuple: Fraction}`` dicts; nothing here touches the
packed-word kernels of the library.
"""
from fractions import Fraction
from itertools import product
import math


def val(x, ell):
    """Valuation of a nonzero rational by repeated division."""
    x = Fraction(x)
    if x == 0:
        return math.inf
    v = 0
    num, den = x.numerator, x.denominator
    while num % ell == 0:
        num //= ell
        v += 1
    while den % ell == 0:
        den //= ell
        v -= 1
    return v


def egcd_inverse(a, m):
    """Inverse of ``a`` modulo ``m`` by the extended Euclidean algorithm."""
    r0, r1, s0, s1 = a % m, m, 1, 0
    while r1:
        q = r0 // r1
        r0, r1 = r1, r0 - q * r1
        s0, s1 = s1, s0 - q * s1
    if r0 != 1:
        raise ValueError("not invertible")
    return s0 % m


def from_series(f):
    return {tuple(w): Fraction(int(c.numerator), int(c.denominator)) for w, c in f.terms()}


def clean(d):
    return {w: c for w, c in d.items() if c != 0}


def mul(a, b, D):
    out = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            if len(wa) + len(wb) <= D:
                w = wa + wb
                out[w] = out.get(w, 0) + ca * cb
    return clean(out)


def add(a, b, sign=1):
    out = dict(a)
    for w, c in b.items():
        out[w] = out.get(w, 0) + sign * c
    return clean(out)


def subst(f, args, D):
    """``f(args)`` by expanding each word as a product of argument series."""
    out = {}
    for w, c in f.items():
        term = {(): Fraction(1)}
        for letter in w:
            term = mul(term, args[letter - 1], D)
        out = add(out, {k: c * v for k, v in term.items()})
    return out


def compose(fs, gs, D):
    return [subst(f, gs, D) for f in fs]


def identity(n):
    return [{(i + 1,): Fraction(1)} for i in range(n)]


def fixed_point_inverse(psis, D):
    """``g = x - psi_hat(g)``, iterated ``D`` times from ``g = x``."""
    n = len(psis)
    hats = [{w: c for w, c in p.items() if len(w) >= 2} for p in psis]
    g = identity(n)
    for _ in range(D):
        g = [add(identity(n)[i], subst(hats[i], g, D), -1) for i in range(n)]
    return g


def log_norm(f, s):
    """``min_w (v(a_w) + |w| s)``, i.e. ``-log_ell ||f||_r`` with ``r = ell**(-s)``."""
    return min((val(c, 5) + len(w) * s for w, c in f.items()), default=math.inf)


def log_norm_ell(f, s, ell):
    return min((val(c, ell) + len(w) * s for w, c in f.items()), default=math.inf)


def jet(fs, m):
    """Column ``J`` holds the coefficients of ``x^J o f`` for words of weight ``1..m``."""
    n = len(fs)
    basis = [w for k in range(1, m + 1) for w in product(range(1, n + 1), repeat=k)]
    index = {w: i for i, w in enumerate(basis)}
    M = [[Fraction(0)] * len(basis) for _ in basis]
    for col, J in enumerate(basis):
        term = {(): Fraction(1)}
        for letter in J:
            term = mul(term, fs[letter - 1], m)
        for w, c in term.items():
            if w in index:
                M[index[w]][col] = c
    return basis, M


def matmul(A, B):
    return [[sum(A[i][k] * B[k][j] for k in range(len(B))) for j in range(len(B[0]))]
            for i in range(len(A))]


def eval_rep(f, mats):
    """``sum a_w X_{w1} ... X_{wk}`` with list-of-lists matrices."""
    m = len(mats[0])
    out = [[Fraction(0)] * m for _ in range(m)]
    for w, c in f.items():
        P = [[Fraction(int(i == j)) for j in range(m)] for i in range(m)]
        for letter in w:
            P = matmul(P, mats[letter - 1])
        out = [[out[i][j] + c * P[i][j] for j in range(m)] for i in range(m)]
    return out


def divisor_valuations(lambdas, ell, N_max):
    """``{N: max v(lambda^e - lambda_j)}`` over non-resonant divisors, exactly."""
    lambdas = [Fraction(x) for x in lambdas]
    n = len(lambdas)
    worst = {}
    for N in range(2, N_max + 1):
        for e in product(range(N + 1), repeat=n):
            if sum(e) != N:
                continue
            p = Fraction(1)
            for lam, k in zip(lambdas, e):
                p *= lam**k
            for lj in lambdas:
                if p != lj:
                    worst[N] = max(worst.get(N, -math.inf), val(p - lj, ell))
    return worst


def sup_enumeration(eta, mu, upto):
    return max((1 - eta) ** i * i**mu for i in range(1, upto + 1))


def partial_product(u, alpha, terms=200):
    p = 1.0
    for k in range(terms):
        p *= 1 - u / alpha**k
    return p
