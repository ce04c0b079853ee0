"""Matrix representations of the truncated algebra and weight bookkeeping.

A representation is given by matrices ``X_i`` (the images of ``x_i``) with
``|X_i| <= C = ell**(-N)``.  A series evaluates to ``sum a_I X^I``.
"""
from dataclasses import dataclass, field
from fractions import Fraction
import math

import numpy as np

from .errors import InconsistentWeights, NormTooLarge, RadiusViolation, ShapeMismatch
from .params import as_fraction
from .scalars import INF, LogNorm, exact, exact_valuation, scalar_to_json
from .series import words


def to_matrix(rows):
    M = np.empty((len(rows), len(rows[0]) if rows else 0), dtype=object)
    for i, row in enumerate(rows):
        for j, x in enumerate(row):
            M[i, j] = exact(x)
    return M


def matrix_valuation(M, ell):
    """Minimal entry valuation; ``inf`` for the zero matrix."""
    return min((exact_valuation(x, ell) for x in M.flat), default=INF)


def _eye(m):
    M = np.empty((m, m), dtype=object)
    M.fill(exact(0))
    for i in range(m):
        M[i, i] = exact(1)
    return M


def _zeros(m):
    M = np.empty((m, m), dtype=object)
    M.fill(exact(0))
    return M


@dataclass
class ReprSpec:
    ell: int
    N: Fraction
    m: int
    images: list

    def __post_init__(self):
        self.N = as_fraction(self.N)
        self.images = [M if isinstance(M, np.ndarray) else to_matrix(M) for M in self.images]
        for i, M in enumerate(self.images):
            if M.shape != (self.m, self.m):
                raise ShapeMismatch(f"image {i + 1} has shape {M.shape}, expected {(self.m, self.m)}")
            if matrix_valuation(M, self.ell) < self.N:
                raise NormTooLarge(f"image {i + 1} is not divisible by {self.ell}^{self.N}")

    @property
    def n(self):
        return len(self.images)

    @property
    def C(self):
        """``C = ell**(-N)`` as a log-scale magnitude."""
        return LogNorm(self.N, self.ell)

    def to_json(self):
        return {"ell": self.ell, "N": str(self.N) if self.N.denominator != 1 else int(self.N),
                "m": self.m,
                "images": [[[scalar_to_json(x) for x in row] for row in M] for M in self.images]}


def _monomial_images(images, codes, n, m):
    base = n + 1
    table = {0: _eye(m)}

    def get(code):
        got = table.get(code)
        if got is None:
            got = get(code // base).dot(images[code % base - 1])
            table[code] = got
        return got

    for code in codes:
        get(code)
    return table


def evaluate(f, images, m):
    """``sum_I a_I X^I`` for the series ``f``."""
    if len(images) != f.n:
        raise ShapeMismatch(f"{len(images)} matrices for a series in {f.n} variables")
    codes = [code for block in f._blocks for code in block]
    table = _monomial_images(images, codes, f.n, m)
    out = _zeros(m)
    for block in f._blocks:
        for code, a in block.items():
            out = out + table[code] * a
    return out


def extend_representation(rho, f, r):
    """``f(X_1, ..., X_n)``; requires the radius ``r`` to exceed ``C``."""
    if r.ell != rho.ell or f.ell != rho.ell:
        raise ShapeMismatch("prime mismatch")
    if not r.s < rho.N:
        raise RadiusViolation(f"radius {r} must exceed C = {rho.ell}^-{rho.N}")
    return evaluate(f, rho.images, rho.m)


def extension_bound(rho, f, r):
    """``max_k ||f_k||_r (C/r)**k`` over homogeneous parts ``f_k``, in log scale.

    This never exceeds ``||f||_r`` because ``C/r < 1``.
    """
    best = INF
    gap = rho.N - r.s
    for k in range(f.D + 1):
        part = f.homogeneous(k).norm(r)
        if not part.is_zero:
            best = min(best, part.s + k * gap)
    return LogNorm(best, rho.ell)


# weights -------------------------------------------------------------------------


@dataclass
class WeightTable:
    eigen_weights: list
    conj_weights: list

    def __post_init__(self):
        self.eigen_weights = [as_fraction(w) for w in self.eigen_weights]
        self.conj_weights = sorted({as_fraction(w) for w in self.conj_weights})

    @property
    def w(self):
        return max(self.conj_weights) if self.conj_weights else Fraction(0)

    def to_json(self):
        return {"eigen_weights": [str(w) for w in self.eigen_weights],
                "conj_weights": [str(w) for w in self.conj_weights]}


def weight_kill_cutoff(table):
    """Least ``d >= 1`` with every degree-``d`` monomial lighter than every conjugation weight.

    A monomial of degree ``d`` in the ``y`` variables has weight at most
    ``d * max(eigen_weights)``, and that bound only decreases with ``d``.
    """
    if not table.eigen_weights:
        raise InconsistentWeights("no eigen weights given")
    top = max(table.eigen_weights)
    if top >= 0:
        raise InconsistentWeights(f"eigen weight {top} is not negative")
    if not table.conj_weights:
        return 1
    floor = min(table.conj_weights)
    d = math.floor(floor / top) + 1
    return max(d, 1)


def monomial_weights(table, d):
    """Set of weights of degree-``d`` monomials."""
    ws = {Fraction(0)}
    for _ in range(d):
        ws = {a + b for a in ws for b in table.eigen_weights}
    return ws


# unipotence -------------------------------------------------------------------------


@dataclass
class UnipotenceVerdict:
    verdict: str
    cutoff: int
    D: int
    monomials_checked: int
    witness: tuple = None
    witness_image: object = None
    semisimple_asserted: bool = False
    notes: list = field(default_factory=list)

    @property
    def unipotent(self):
        return self.verdict in ("unipotent", "trivial")

    def to_json(self):
        out = {
            "kind": "unipotence_check",
            "verdict": self.verdict,
            "cutoff": self.cutoff,
            "D": self.D,
            "monomials_checked": self.monomials_checked,
            "semisimple_asserted": self.semisimple_asserted,
            "equivariance": "declared by caller",
            "notes": list(self.notes),
        }
        if self.witness is not None:
            out["witness"] = {"word": list(self.witness),
                              "image": [[scalar_to_json(x) for x in row]
                                        for row in self.witness_image]}
        return out


def forced_unipotence_check(rho, ys, table, semisimple=False):
    """Evaluate every ``y``-monomial of degree ``cutoff..D`` under ``rho``.

    ``unipotent`` when all images vanish (``trivial`` if semisimplicity is
    asserted as well); otherwise ``counterexample`` with the first
    nonvanishing monomial in graded-lex order.
    """
    ys = list(ys)
    if len(ys) != rho.n:
        raise ShapeMismatch(f"{len(ys)} coordinates for {rho.n} generators")
    cutoff = weight_kill_cutoff(table)
    D = min(y.D for y in ys)
    Y = [evaluate(y, rho.images, rho.m) for y in ys]
    n = len(ys)
    notes = []
    if cutoff > D:
        notes.append(f"cutoff {cutoff} exceeds truncation degree {D}; nothing to check")
        return UnipotenceVerdict("inconclusive", cutoff, D, 0, semisimple_asserted=semisimple,
                                 notes=notes)
    base = n + 1
    table_img = {0: _eye(rho.m)}
    count = 0
    for word in words(n, 1, D):
        code = 0
        for letter in word:
            code = code * base + letter
        img = table_img[code // base].dot(Y[word[-1] - 1])
        table_img[code] = img
        if len(word) < cutoff:
            continue
        count += 1
        if any(x != 0 for x in img.flat):
            return UnipotenceVerdict("counterexample", cutoff, D, count, tuple(word), img,
                                     semisimple, notes)
    verdict = "trivial" if semisimple else "unipotent"
    return UnipotenceVerdict(verdict, cutoff, D, count, semisimple_asserted=semisimple, notes=notes)


def threshold_N(result):
    """``-log(r') / log(ell)`` for a finished linearization."""
    return result.r_prime.s


__all__ = [
    "ReprSpec", "WeightTable", "UnipotenceVerdict", "evaluate", "extend_representation",
    "extension_bound", "forced_unipotence_check", "matrix_valuation", "monomial_weights",
    "threshold_N", "to_matrix", "weight_kill_cutoff",
]
