"""Outward-rounded real arithmetic on top of mpmath's interval context.

A private interval context is used so the global ``mpmath.iv`` precision is
left alone.
"""
from fractions import Fraction

import mpmath
from mpmath.libmp import to_rational

ctx = type(mpmath.iv)()
ctx.prec = 113


def interval(x):
    """Enclose ``x`` (int, Fraction, mpq, float, str or interval) exactly."""
    if isinstance(x, ctx.mpf):
        return x
    if isinstance(x, float):
        return ctx.mpf(x)
    if isinstance(x, str):
        x = Fraction(x)
    num, den = int(x.numerator), int(x.denominator)
    if den == 1:
        return ctx.mpf(num)
    return ctx.mpf(num) / ctx.mpf(den)


def _endpoint(raw):
    p, q = to_rational(raw)
    return Fraction(int(p), int(q))


def lower(x):
    return _endpoint(interval(x)._mpi_[0])


def upper(x):
    return _endpoint(interval(x)._mpi_[1])


def upper_dyadic(x, bits=48):
    """A rational upper bound for ``x`` with denominator ``2**bits``."""
    u = upper(x)
    den = 1 << bits
    return Fraction(-((-u.numerator * den) // u.denominator), den)


def lower_dyadic(x, bits=48):
    """A rational lower bound for ``x`` with denominator ``2**bits``."""
    u = lower(x)
    den = 1 << bits
    return Fraction((u.numerator * den) // u.denominator, den)


def log_base(x, ell):
    return ctx.log(interval(x)) / ctx.log(ctx.mpf(ell))


def ell_power(ell, s):
    """``ell ** (-s)`` as an interval."""
    return ctx.exp(-interval(s) * ctx.log(ctx.mpf(ell)))


def certainly_le(a, b):
    return interval(a).b <= interval(b).a


def certainly_lt(a, b):
    return interval(a).b < interval(b).a


def mid_float(x):
    return float(interval(x).mid)
