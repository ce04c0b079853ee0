"""Endomorphism tuples under substitution, with composition in End^op order.

``compose(f, g)`` is ``(f_1(g), ..., f_n(g))``.  The induced algebra map
``P -> P o f`` reverses the order, which is why jet matrices multiply as
``jet(f o g) = jet(g) @ jet(f)``.
"""
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import (
    BackendUnsupported,
    ConstantTermNonzero,
    NormTooLarge,
    NotDiagonal,
    NotNormalized,
    RadiusViolation,
    ShapeMismatch,
    Undecidable,
)
from .scalars import INF, LogNorm, ONE, CappedScalar, exact, scalar_to_json, valuation
from .series import (
    NCSeries,
    Radius,
    _mul_blocks,
    _powers,
    _prune,
    abelianize,
    substitute_many,
    words,
)


class EndoTuple:
    """An ``n``-tuple of series with zero constant term."""

    __slots__ = ("components",)

    def __init__(self, components):
        comps = tuple(components)
        if not comps:
            raise ShapeMismatch("an endomorphism needs at least one component")
        n, D, ell = comps[0].n, comps[0].D, comps[0].ell
        if len(comps) != n:
            raise ShapeMismatch(f"{len(comps)} components for n={n} variables")
        for i, c in enumerate(comps):
            if (c.n, c.D, c.ell) != (n, D, ell):
                raise ShapeMismatch(f"component {i + 1} has a different shape")
            if c._blocks[0]:
                raise ConstantTermNonzero(f"component {i + 1} has a constant term")
        self.components = comps

    @classmethod
    def identity(cls, n, D, ell):
        return cls(NCSeries.var(i, n, D, ell) for i in range(1, n + 1))

    @classmethod
    def diagonal(cls, lambdas, D, ell):
        n = len(lambdas)
        return cls(NCSeries(n, D, ell, {(i + 1,): lam}) for i, lam in enumerate(lambdas))

    n = property(lambda self: self.components[0].n)
    D = property(lambda self: self.components[0].D)
    ell = property(lambda self: self.components[0].ell)

    def __getitem__(self, i):
        return self.components[i]

    def __iter__(self):
        return iter(self.components)

    def __len__(self):
        return len(self.components)

    def __eq__(self, other):
        if not isinstance(other, EndoTuple):
            return NotImplemented
        return self.components == other.components

    __hash__ = None

    def __add__(self, other):
        return EndoTuple(a + b for a, b in zip(self, other))

    def __sub__(self, other):
        return EndoTuple(a - b for a, b in zip(self, other))

    def norm(self, r):
        norms = [c.norm(r) for c in self]
        worst = min(norms, key=lambda x: x.s)
        return LogNorm(worst.s, self.ell, any(x.upper for x in norms if x.s == worst.s),
                       worst.s != INF and all(x.vanishes for x in norms))

    def linear_part(self):
        """The matrix ``L`` with ``f_i = sum_k L[i, k] x_k + ...``."""
        n = self.n
        L = np.empty((n, n), dtype=object)
        for i, c in enumerate(self):
            for k in range(n):
                L[i, k] = c[(k + 1,)]
        return L

    def linear(self):
        return EndoTuple(c.homogeneous(1) for c in self)

    def hat(self):
        """The part of weight at least two."""
        return EndoTuple(c.ideal_truncate(2) for c in self)

    def is_diagonal(self):
        L = self.linear_part()
        return all(L[i, k] == 0 for i in range(self.n) for k in range(self.n) if i != k)

    def eigenvalues(self):
        if not self.is_diagonal():
            raise NotDiagonal("linear part is not diagonal")
        L = self.linear_part()
        return [L[i, i] for i in range(self.n)]

    def truncate(self, D):
        return EndoTuple(c.truncate(D) for c in self)

    def is_exact(self):
        return all(c.is_exact() for c in self)

    def to_json(self):
        return {"n": self.n, "D": self.D, "ell": self.ell,
                "components": [c.to_json() for c in self]}

    def __repr__(self):
        return "EndoTuple(" + ", ".join(repr(c) for c in self) + ")"


def compose(f, g):
    """``f o g = (f_1(g), ..., f_n(g))``, exact modulo ``I**(D+1)``."""
    if (f.n, f.ell) != (g.n, g.ell):
        raise ShapeMismatch("cannot compose endomorphisms of different shapes")
    return EndoTuple(substitute_many(list(f), list(g)))


def compose_all(*fs):
    out = fs[0]
    for g in fs[1:]:
        out = compose(out, g)
    return out


def invert(psi, r=None, eps=None):
    """Compositional inverse of a tangent-to-identity ``psi``.

    Solves ``g o psi = x`` for ``g = x + ghat`` one weight at a time: the
    weight-``k`` coefficients of ``ghat`` only meet terms of lower weight.
    With ``r`` given, ``||psi - x||_r < r`` is required; with ``eps`` also
    given, ``||psi - x||_r < eps < r``.
    """
    n, D, ell = psi.n, psi.D, psi.ell
    L = psi.linear_part()
    for i in range(n):
        for k in range(n):
            if not _agrees(L[i, k], 1 if i == k else 0):
                raise NotNormalized("linear part of psi is not the identity")
    if r is not None:
        h = psi.hat().norm(r)
        if not h < r:
            raise NormTooLarge(f"||psi - x||_r = {h} is not below r = {r}")
        if eps is not None:
            eps = eps if isinstance(eps, LogNorm) else LogNorm(Fraction(eps), ell)
            if not h < eps or not eps < r:
                raise NormTooLarge("need ||psi - x||_r < eps < r")
    base = n + 1
    pw = _powers(base, D)
    blocks = [c._blocks for c in psi]
    table = {0: [{0: ONE}] + [dict() for _ in range(D)]}

    def power(code):
        got = table.get(code)
        if got is None:
            parent = power(code // base)
            got = [_prune(b) for b in _mul_blocks(parent, blocks[code % base - 1], D, pw)]
            table[code] = got
        return got

    out = []
    for j in range(n):
        # acc holds sum a_I psi^I over the weights already solved
        acc = [dict() for _ in range(D + 1)]
        coeffs = [dict() for _ in range(D + 1)]
        coeffs[1][j + 1] = ONE
        _accumulate(acc, ONE, power(j + 1), D, 2)
        for k in range(2, D + 1):
            found = {code: -a for code, a in acc[k].items() if a != 0}
            coeffs[k] = found
            if k < D:
                for code, a in found.items():
                    _accumulate(acc, a, power(code), D, k + 1)
        out.append(NCSeries._from_blocks(n, D, ell, coeffs))
    return EndoTuple(out)


def _agrees(x, t):
    """Exact equality, or agreement to the tracked precision for capped values."""
    if isinstance(x, CappedScalar):
        return x.congruent(t)
    return x == t


def _accumulate(acc, a, T, D, lo):
    for kk in range(lo, D + 1):
        o = acc[kk]
        for c, x in T[kk].items():
            t = a * x
            prev = o.get(c)
            o[c] = t if prev is None else prev + t


def taylor_gap(f, A, eps, r):
    """``||f(Ax + eps) - f(Ax)||_r`` for diagonal ``A`` with ``|lambda_i| <= 1``."""
    lambdas = _diag_entries(A)
    n, D, ell = f.n, f.D, f.ell
    for lam in lambdas:
        if valuation(lam, ell) < 0:
            raise RadiusViolation("diagonal entries must satisfy |lambda| <= 1")
    if not eps.norm(r) < r:
        raise RadiusViolation("||eps||_r must be below r")
    Ax = EndoTuple.diagonal(lambdas, D, ell)
    return (compose(f, Ax + eps) - compose(f, Ax)).norm(r)


def taylor_bound(f, eps, r):
    """The sharp bound ``||f||_r ||eps||_r / r`` in log scale."""
    a, b = f.norm(r), eps.norm(r)
    if a.is_zero or b.is_zero:
        return LogNorm(INF, f.ell)
    return LogNorm(a.s + b.s - r.s, f.ell, a.upper or b.upper)


def _diag_entries(A):
    if isinstance(A, np.ndarray):
        if A.ndim == 2:
            n = A.shape[0]
            if any(A[i, k] != 0 for i in range(n) for k in range(n) if i != k):
                raise NotDiagonal("A is not diagonal")
            return [A[i, i] for i in range(n)]
        return list(A)
    return list(A)


# jets -------------------------------------------------------------------------


@dataclass
class JetOperator:
    """Matrix of ``P -> P o f`` on ``I / I**(m+1)``.

    Column ``J`` holds the coefficients of ``x^J o f``; rows and columns are
    indexed by ``basis``, the words of weight ``1..m`` in graded-lex order.
    Weight can only go up under substitution, so the matrix is block lower
    triangular in this column convention.
    """

    m: int
    n: int
    basis: list
    matrix: np.ndarray
    index: dict = field(repr=False, default=None)

    def __post_init__(self):
        if self.index is None:
            self.index = {w: i for i, w in enumerate(self.basis)}

    def block_slices(self):
        out, start = [], 0
        for k in range(1, self.m + 1):
            size = self.n**k
            out.append(slice(start, start + size))
            start += size
        return out

    def diagonal_blocks(self):
        return [self.matrix[s, s] for s in self.block_slices()]

    def is_block_triangular(self):
        """True if no column of weight ``k`` reaches a row of weight below ``k``."""
        weights = [len(w) for w in self.basis]
        size = len(self.basis)
        return all(self.matrix[i, j] == 0 for j in range(size) for i in range(size)
                   if weights[i] < weights[j])

    def __matmul__(self, other):
        return JetOperator(self.m, self.n, self.basis, self.matrix.dot(other.matrix), self.index)

    def __eq__(self, other):
        return isinstance(other, JetOperator) and self.basis == other.basis and \
            bool(np.all(self.matrix == other.matrix))

    def to_json(self):
        rows = [[scalar_to_json(x) for x in row] for row in self.matrix]
        return {"m": self.m, "n": self.n, "basis": [list(w) for w in self.basis],
                "convention": "column J holds x^J o f", "matrix": rows}


def jet_matrix(f, m):
    if not 1 <= m <= f.D:
        raise ValueError(f"need 1 <= m <= D={f.D}, got m={m}")
    n = f.n
    ft = f.truncate(m)
    basis = list(words(n, 1, m))
    cols = substitute_many(
        [NCSeries.monomial(w, 1, n, m, f.ell) for w in basis], list(ft), shared_table=True)
    index = {w: i for i, w in enumerate(basis)}
    size = len(basis)
    M = np.empty((size, size), dtype=object)
    M.fill(exact(0))
    for j, col in enumerate(cols):
        for w, c in col.terms():
            if w:
                M[index[w], j] = c
    return JetOperator(m, n, basis, M, index)


def is_semisimple_jet(f, m):
    """Squarefree-minimal-polynomial test for the jet of ``f`` at order ``m``.

    The characteristic polynomial factors over the diagonal weight blocks;
    its squarefree part ``s`` annihilates the jet exactly when the jet is
    diagonalizable.
    """
    if not f.is_exact():
        raise BackendUnsupported("semisimplicity is only certified over exact rationals")
    from sympy import QQ, Poly, symbols
    from sympy.polys.matrices import DomainMatrix

    jet = jet_matrix(f, m)
    t = symbols("t")

    def dm(block):
        return DomainMatrix([[QQ(int(x.numerator), int(x.denominator)) for x in row]
                             for row in block], block.shape, QQ)

    chi = Poly(1, t, domain=QQ)
    for block in jet.diagonal_blocks():
        chi = chi * Poly(dm(block).charpoly(), t, domain=QQ)
    s = chi.quo(chi.gcd(chi.diff(t)))
    M = dm(jet.matrix).to_sparse()
    size = M.shape[0]
    eye = DomainMatrix.eye(size, QQ).to_sparse()
    coeffs = s.all_coeffs()
    R = eye * coeffs[0]
    for c in coeffs[1:]:
        R = R * M + eye * c
    return R.is_zero_matrix


# resonances -------------------------------------------------------------------


class _Powers:
    """Cached ``lambda^e`` over abelianized exponent vectors."""

    def __init__(self, lambdas):
        self.lambdas = list(lambdas)
        self.cache = {}

    def __call__(self, counts):
        out = self.cache.get(counts)
        if out is None:
            out = exact(1)
            for lam, e in zip(self.lambdas, counts):
                if e:
                    out = out * lam**e
            self.cache[counts] = out
        return out


def divisor(powers, word, j, n):
    """``lambda^I - lambda_j`` for the word ``I``."""
    return powers(abelianize(word, n)) - powers.lambdas[j]


def is_resonant(d):
    """Decide ``d == 0``; capped values without a known digit are undecidable."""
    if isinstance(d, CappedScalar):
        if d.is_exact_zero:
            return True
        if d.unit == 0:
            raise Undecidable(f"divisor indistinguishable from zero at O(ell^{d.v})")
        return False
    return d == 0


@dataclass(frozen=True)
class Violation:
    word: tuple
    j: int
    coefficient: object

    def to_json(self):
        return {"word": list(self.word), "j": self.j,
                "coefficient": scalar_to_json(self.coefficient)}


def resonance_check(f):
    """Pairs ``(I, j)`` with ``lambda^I = lambda_j`` but ``x^I`` present in ``f_j``.

    ``j`` is reported 1-based.
    """
    lambdas = f.eigenvalues()
    n = f.n
    powers = _Powers(lambdas)
    out = []
    for j, comp in enumerate(f):
        for word, c in comp.terms():
            if len(word) < 2:
                continue
            if is_resonant(divisor(powers, word, j, n)):
                out.append(Violation(word, j + 1, c))
    return out


def resonant_pairs(lambdas, D):
    """All resonant ``(abelianized exponents, j)`` of weight ``2..D`` (``j`` 0-based)."""
    n = len(lambdas)
    powers = _Powers(lambdas)
    out = []
    for k in range(2, D + 1):
        for counts in _compositions(k, n):
            for j in range(n):
                if is_resonant(powers(counts) - lambdas[j]):
                    out.append((counts, j))
    return out


def _compositions(k, n):
    if n == 1:
        yield (k,)
        return
    for first in range(k, -1, -1):
        for rest in _compositions(k - first, n - 1):
            yield (first,) + rest


__all__ = [
    "EndoTuple", "JetOperator", "Violation", "compose", "compose_all", "invert",
    "is_semisimple_jet", "jet_matrix", "resonance_check", "resonant_pairs",
    "taylor_bound", "taylor_gap",
]
