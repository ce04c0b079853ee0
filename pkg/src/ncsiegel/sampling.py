"""Seeded random inputs for property checks and demos."""
import math
import random
from fractions import Fraction

from .endo import EndoTuple
from .scalars import exact
from .series import NCSeries, words


def rng_for(seed):
    return random.Random(seed)


def random_unit(rng, ell, size=20):
    while True:
        u = rng.randint(-size, size)
        if u % ell:
            return u


def random_scalar(rng, ell, vmin=0, vspan=3, zero_rate=0.0):
    """``ell**v * unit`` with ``vmin <= v <= vmin + vspan``; sometimes a rational unit."""
    if zero_rate and rng.random() < zero_rate:
        return exact(0)
    v = rng.randint(vmin, vmin + vspan)
    u = Fraction(random_unit(rng, ell))
    if rng.random() < 0.3:
        u /= random_unit(rng, ell, 6)
    return exact(u * Fraction(ell) ** v)


def random_series(rng, n, D, ell, lo=0, hi=None, density=0.5, vmin=0, vspan=3):
    hi = D if hi is None else hi
    coeffs = {}
    for w in words(n, lo, hi) if lo > 0 else [()] + list(words(n, 1, hi)):
        if rng.random() < density:
            coeffs[w] = random_scalar(rng, ell, vmin, vspan)
    return NCSeries(n, D, ell, coeffs)


def random_endo(rng, n, D, ell, lo=1, hi=None, density=0.5, vmin=0, vspan=3):
    return EndoTuple(random_series(rng, n, D, ell, lo, hi, density, vmin, vspan)
                     for _ in range(n))


def random_normalized(rng, n, D, ell, s_r, hi=None, density=0.4):
    """``x + psi_hat`` with ``||psi_hat||_r < r`` for ``r = ell**(-s_r)``.

    A weight-``k`` coefficient with valuation ``v`` contributes
    ``ell**(-v - k s_r)``, below ``r`` exactly when ``v > -(k-1) s_r``.
    """
    hi = D if hi is None else hi
    comps = []
    for i in range(n):
        coeffs = {(i + 1,): 1}
        for w in words(n, 2, hi):
            if rng.random() < density:
                k = len(w)
                vmin = -((k - 1) * s_r).__ceil__() + 1
                coeffs[w] = random_scalar(rng, ell, int(vmin), 2)
        comps.append(NCSeries(n, D, ell, coeffs))
    return EndoTuple(comps)


def random_lambdas(rng, n, D, ell, nonresonant=True):
    """Distinct eigenvalues ``1 + ell*t``, redrawn until no resonance of weight <= D."""
    from .endo import resonant_pairs

    while True:
        lambdas = []
        while len(lambdas) < n:
            lam = exact(1 + ell * random_unit(rng, ell, 4))
            if lam not in lambdas:
                lambdas.append(lam)
        if not nonresonant or not resonant_pairs(lambdas, D):
            return lambdas


def random_diagonal(rng, n, D, ell, hi=None, density=0.5, vmin=0, vspan=3, lambdas=None):
    """``A x + f_hat`` with random non-resonant unit eigenvalues unless given."""
    if lambdas is None:
        lambdas = random_lambdas(rng, n, D, ell)
    hat = random_endo(rng, n, D, ell, 2, hi, density, vmin, vspan)
    return EndoTuple(h + NCSeries(n, D, ell, {(i + 1,): lambdas[i]})
                     for i, h in enumerate(hat)), lambdas


def random_matrix(rng, m, ell, N, size=6):
    import numpy as np

    M = np.empty((m, m), dtype=object)
    for i in range(m):
        for j in range(m):
            M[i, j] = exact(rng.randint(-size, size) * ell ** math.ceil(N))
    return M
