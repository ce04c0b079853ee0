"""Bounded-range checks and fits of the ell-adic small-divisor condition.

For eigenvalues ``lambda_1..lambda_n`` and every exponent vector ``e`` of
total degree ``2 <= N <= N_max`` and index ``j`` with ``lambda^e != lambda_j``
we test ``|lambda^e - lambda_j| >= c (N/2)**(-mu)``.

Powers are computed modulo ``ell**K``; a residue of zero falls back to
exact arithmetic, so valuations are always exact.
"""
from dataclasses import dataclass, field
from fractions import Fraction
import heapq
import math

import gmpy2

from . import _reals
from .errors import BackendUnsupported, EigenvalueOutsideDisk, EmptyGrid
from .params import SiegelParams, as_fraction
from .scalars import CappedScalar, exact, exact_valuation

DEFAULT_MU_GRID = (0, Fraction(1, 4), Fraction(1, 2), 1, Fraction(3, 2), 2, 3, 4, 5)
DEFAULT_C_FLOOR = Fraction(1, 100)


def _check_exact(lambdas, ell):
    out = []
    for lam in lambdas:
        if isinstance(lam, CappedScalar):
            raise BackendUnsupported("small-divisor checks need exact eigenvalues")
        lam = exact(lam)
        if lam != 0 and exact_valuation(lam, ell) < 0:
            raise EigenvalueOutsideDisk(f"|{lam}|_{ell} > 1")
        out.append(lam)
    return out


def _compositions(N, n):
    if n == 1:
        yield (N,)
        return
    for first in range(N, -1, -1):
        for rest in _compositions(N - first, n - 1):
            yield (first,) + rest


class _DivisorTable:
    """Valuations of ``lambda^e - lambda_j`` with an exact fallback."""

    def __init__(self, lambdas, ell, N_max, digits=64):
        self.lambdas = lambdas
        self.ell = ell
        self.K = digits
        self.M = gmpy2.mpz(ell) ** digits
        self.res = [self._residue(lam) for lam in lambdas]
        self.pows = []
        for r in self.res:
            row = [gmpy2.mpz(1)]
            for _ in range(N_max):
                row.append(row[-1] * r % self.M)
            self.pows.append(row)

    def _residue(self, lam):
        num, den = gmpy2.mpz(lam.numerator), gmpy2.mpz(lam.denominator)
        return num * gmpy2.invert(den, self.M) % self.M

    def power_residue(self, e):
        out = gmpy2.mpz(1)
        for row, k in zip(self.pows, e):
            out = out * row[k] % self.M
        return out

    def valuation(self, e, pw, j):
        """Valuation of ``lambda^e - target`` (``inf`` for an exact resonance)."""
        d = (pw - self.res[j]) % self.M if j is not None else (pw - 1) % self.M
        if d:
            return int(gmpy2.remove(d, self.ell)[1])
        target = self.lambdas[j] if j is not None else exact(1)
        exact_d = exact(1)
        for lam, k in zip(self.lambdas, e):
            if k:
                exact_d *= lam**k
        exact_d -= target
        if exact_d == 0:
            return math.inf
        return exact_valuation(exact_d, self.ell)


@dataclass(frozen=True)
class Witness:
    exponents: tuple
    j: int  # 1-based; 0 marks the unit normalization
    valuation: int
    N: int
    margin: float  # log of |divisor| / bound; negative means violated

    def to_json(self):
        return {"exponents": list(self.exponents), "j": self.j, "valuation": self.valuation,
                "N": self.N, "log_margin": self.margin}


@dataclass
class SiegelCertificate:
    lambdas: list
    ell: int
    params: SiegelParams
    N_max: int
    normalization: str
    witnesses: list
    verdict: str
    failing: Witness = None
    checked: int = 0
    resonances_skipped: int = 0
    scatter: list = field(default_factory=list)

    @property
    def holds(self):
        return self.verdict == "holds"

    def to_json(self):
        return {
            "lambdas": [str(x) for x in self.lambdas],
            "ell": self.ell,
            "params": self.params.to_json(),
            "N_max": self.N_max,
            "normalization": self.normalization,
            "verdict": self.verdict,
            "failing": self.failing.to_json() if self.failing else None,
            "checked": self.checked,
            "resonances_skipped": self.resonances_skipped,
            "witnesses": [w.to_json() for w in self.witnesses],
            "exponent_reading": "c * (N/2)**(-mu)" if self.normalization == "half"
            else "c * N**(-mu)",
        }


def _iter_divisors(table, n, N_max, normalization):
    lo = 2 if normalization == "half" else 1
    js = range(n) if normalization == "half" else (None,)
    for N in range(lo, N_max + 1):
        for e in _compositions(N, n):
            pw = table.power_residue(e)
            for j in js:
                yield e, N, j, table.valuation(e, pw, j)


def _compare(ell, v, N, c, mu, normalization):
    """Decide ``ell**(-v) >= c * scale**(-mu)`` exactly when possible.

    Returns ``(verdict, log_margin)`` with verdict True, False or None.
    """
    scale = Fraction(N, 2) if normalization == "half" else Fraction(N)
    margin = -v * math.log(ell) - math.log(c) + float(mu) * math.log(scale)
    if mu.denominator == 1:
        lhs = Fraction(1, ell**v) if v >= 0 else Fraction(ell ** (-v))
        return lhs * scale ** int(mu) >= c, margin
    lhs = _reals.ell_power(ell, v) * _reals.interval(scale) ** _reals.interval(mu)
    rhs = _reals.interval(c)
    if lhs.a >= rhs.b:
        return True, margin
    if lhs.b < rhs.a:
        return False, margin
    return None, margin


def check_siegel(lambdas, params, N_max, ell, k=5, normalization="half"):
    """Certificate for the small-divisor condition on all degrees up to ``N_max``.

    ``normalization="unit"`` tests ``|lambda^e - 1| >= c N**(-mu)`` for
    ``1 <= N <= N_max`` instead.
    """
    if normalization not in ("half", "unit"):
        raise ValueError(f"unknown normalization {normalization!r}")
    lams = _check_exact(lambdas, ell)
    if N_max < 2:
        raise ValueError("N_max must be at least 2")
    n = len(lams)
    table = _DivisorTable(lams, ell, N_max)
    heap = []
    checked = skipped = 0
    verdict, failing = "holds", None
    scatter = {}
    for counter, (e, N, j, v) in enumerate(_iter_divisors(table, n, N_max, normalization)):
        if v == math.inf:
            skipped += 1
            continue
        checked += 1
        scatter[N] = max(scatter.get(N, -math.inf), v)
        ok, margin = _compare(ell, v, N, params.c, params.mu, normalization)
        w = Witness(tuple(e), 0 if j is None else j + 1, v, N, margin)
        item = (-margin, counter, w)
        if len(heap) < k:
            heapq.heappush(heap, item)
        else:
            heapq.heappushpop(heap, item)
        if ok is False and verdict != "violated":
            verdict, failing = "violated", w
        elif ok is None and verdict == "holds":
            verdict, failing = "undecidable", w
    witnesses = sorted((w for _, _, w in heap), key=lambda w: w.margin)
    return SiegelCertificate(
        lams, ell, params, N_max, normalization, witnesses, verdict, failing,
        checked, skipped, sorted(scatter.items()))


def _c_max(vals, ell, mu):
    """Largest ``c`` (a rational lower bound) with every divisor passing at ``mu``."""
    if not vals:
        return None
    if mu.denominator == 1:
        return min(Fraction(N, 2) ** int(mu) / Fraction(ell) ** v for N, v in vals)
    # float screening, then outward-rounded evaluation of the near-minimal ones
    logs = [(mu * math.log(N / 2) - v * math.log(ell), N, v) for N, v in vals]
    lo = min(t[0] for t in logs)
    near = [(N, v) for t, N, v in logs if t <= lo + 1e-6]
    return min(_reals.lower_dyadic(_reals.ell_power(ell, v) *
                            _reals.interval(Fraction(N, 2)) ** _reals.interval(mu))
               for N, v in near)


def max_valuation_by_degree(lambdas, ell, N_max):
    """``{N: largest divisor valuation at degree N}`` over non-resonant divisors."""
    lams = _check_exact(lambdas, ell)
    table = _DivisorTable(lams, ell, N_max)
    worst = {}
    for e, N, j, v in _iter_divisors(table, len(lams), N_max, "half"):
        if v != math.inf:
            worst[N] = max(worst.get(N, -math.inf), v)
    return worst


@dataclass
class SiegelFit:
    params: SiegelParams
    ell: int
    N_max: int
    grid: list
    floor: Fraction
    scatter: list

    def to_json(self):
        return {"ell": self.ell, "N_max": self.N_max, "params": self.params.to_json(),
                "c_floor": str(self.floor),
                "grid": [{"mu": str(mu), "c_max": None if c is None else str(c)}
                         for mu, c in self.grid],
                "scatter": [{"N": N, "max_valuation": v} for N, v in self.scatter]}


def fit_siegel(lambdas, N_max, ell, mu_grid=DEFAULT_MU_GRID, c_floor=DEFAULT_C_FLOOR):
    """Smallest ``mu`` in the grid whose largest admissible ``c`` reaches ``c_floor``.

    If no grid point reaches the floor, the largest ``mu`` is returned with
    its own ``c``.  An eigenvalue tuple with only resonant divisors fits
    ``c = 1`` at the smallest ``mu``.
    """
    grid = sorted(as_fraction(m) for m in mu_grid)
    if not grid:
        raise EmptyGrid("mu grid is empty")
    floor = as_fraction(c_floor)
    worst = max_valuation_by_degree(lambdas, ell, N_max)
    vals = sorted(worst.items())
    table = []
    chosen = None
    for mu in grid:
        c = _c_max(vals, ell, mu)
        table.append((mu, c))
        if chosen is None and (c is None or c >= floor):
            chosen = (mu, c)
    if chosen is None:
        chosen = table[-1]
    mu, c = chosen
    return SiegelFit(SiegelParams(c if c is not None else 1, mu), ell, N_max, table, floor, vals)


def fit_siegel_batch(lambdas, primes, N_max, **kw):
    """Fits across several primes, for comparing constants as ``ell`` varies."""
    rows = []
    for ell in primes:
        fit = fit_siegel(lambdas, N_max, ell, **kw)
        rows.append({"ell": ell, "c": str(fit.params.c), "mu": str(fit.params.mu)})
    return rows


def lifting_exponent_check(lam, ell, N_max):
    """Confirm ``v(lam**i - 1) = v(lam - 1) + v(i)`` for ``1 <= i <= N_max``.

    Holds for odd ``ell`` when ``v(lam - 1) >= 1``; returns the list of
    ``i`` where it fails (empty when confirmed).
    """
    lam = exact(lam)
    table = _DivisorTable([lam], ell, N_max)
    base = exact_valuation(lam - 1, ell)
    bad = []
    for i in range(1, N_max + 1):
        v = table.valuation((i,), table.pows[0][i], None)
        if v != base + exact_valuation(exact(i), ell):
            bad.append(i)
    return bad
