"""Canonical small inputs shared by the self-test, the demos and the test suite."""
from fractions import Fraction

from .endo import EndoTuple
from .params import SiegelParams
from .rep import ReprSpec, WeightTable
from .series import NCSeries, Radius

ELL = 5
U = 1 + ELL


def cubic(D=8, ell=ELL):
    """One variable: ``f(x) = (1+ell) x + x**3``."""
    return EndoTuple([NCSeries(1, D, ell, {(1,): 1 + ell, (1, 1, 1): 1})])


def cubic_setup(D=8):
    return cubic(D), Radius(ELL, 2), SiegelParams(Fraction(1, 10), 1)


def resonant_compliant(D=8, ell=ELL):
    """Two variables with eigenvalues ``(u, u**2)``, ``u = 1 + ell``.

    The only resonance up to high degree is ``u * u = u**2`` (words
    ``x1 x1`` into the second component); its coefficient is zero.
    """
    u = 1 + ell
    f1 = NCSeries(2, D, ell, {(1,): u, (1, 2): 1, (2, 1): ell, (2, 2, 1): 1})
    f2 = NCSeries(2, D, ell, {(2,): u * u, (1, 2): 2, (2, 2): 1, (1, 1, 2): ell})
    return EndoTuple([f1, f2])


def resonant_setup(D=8):
    return resonant_compliant(D), Radius(ELL, 2), SiegelParams(Fraction(1, 50), 1)


def resonant_violating(D=4, ell=ELL):
    """Same eigenvalues with a nonzero ``x1 x1`` term in the second component."""
    u = 1 + ell
    f1 = NCSeries(2, D, ell, {(1,): u})
    f2 = NCSeries(2, D, ell, {(2,): u * u, (1, 1): 1})
    return EndoTuple([f1, f2])


def weight_table():
    """Eigen weights ``-1, -2`` against conjugation weights ``-1, 0, 1``; cutoff 2."""
    return WeightTable([-1, -2], [-1, 0, 1])


def trivial_rep(m=2, n=2):
    zero = [[0] * m for _ in range(m)]
    return ReprSpec(ELL, 1, m, [zero] * n)


def upper_triangular_rep():
    """Strictly upper triangular images: any product of two vanishes."""
    return ReprSpec(ELL, 1, 2, [[[0, ELL], [0, 0]], [[0, ELL * ELL], [0, 0]]])


def non_equivariant_rep():
    """Diagonal images whose squares survive, so no weight argument applies."""
    return ReprSpec(ELL, 1, 2, [[[ELL, 0], [0, 0]], [[0, 0], [0, ELL]]])


def taylor_witness(D=4, ell=ELL):
    """``f = (x1, 0)``, ``eps = (x1**2, 0)``: the bound with ``1/r`` is attained."""
    f = EndoTuple([NCSeries.var(1, 2, D, ell), NCSeries.zero(2, D, ell)])
    eps = EndoTuple([NCSeries(2, D, ell, {(1, 1): 1}), NCSeries.zero(2, D, ell)])
    return f, eps
