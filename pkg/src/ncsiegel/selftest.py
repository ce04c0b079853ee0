"""Seeded property suite behind ``ncsiegel selftest``.

Each check draws its samples from its own ``random.Random`` derived from the
master seed, so a failing row can be replayed alone.
"""
from dataclasses import dataclass, field
from fractions import Fraction
import time

from . import fixtures, sampling
from .divisors import check_siegel, fit_siegel, lifting_exponent_check
from .endo import (EndoTuple, compose, invert, jet_matrix, taylor_bound, taylor_gap)
from .params import SiegelParams
from .rep import (ReprSpec, extend_representation, forced_unipotence_check,
                  matrix_valuation)
from .scalars import exact, exact_valuation, to_capped
from .series import Radius
from .siegel import (eigen_coordinates, formal_linearize, linearize,
                     verify_calculus_product, verify_calculus_sup)

ELL = 5


@dataclass
class Row:
    name: str
    samples: int
    failures: int
    seconds: float = 0.0
    first_failure: str = None

    @property
    def ok(self):
        return self.failures == 0

    def to_json(self):
        return {"check": self.name, "samples": self.samples, "failures": self.failures,
                "first_failure": self.first_failure}


@dataclass
class SelftestReport:
    seed: int
    scale: float
    rows: list = field(default_factory=list)

    @property
    def ok(self):
        return all(r.ok for r in self.rows)

    def to_json(self):
        return {"kind": "selftest", "seed": self.seed, "scale": self.scale, "ok": self.ok,
                "rows": [r.to_json() for r in self.rows]}

    def table(self):
        lines = [f"{'check':<28}{'samples':>9}{'fail':>6}{'sec':>8}  status"]
        for r in self.rows:
            lines.append(f"{r.name:<28}{r.samples:>9}{r.failures:>6}{r.seconds:>8.2f}  "
                         f"{'ok' if r.ok else 'FAIL'}")
        lines.append(f"seed {self.seed}: {'all checks passed' if self.ok else 'FAILURES'}")
        return "\n".join(lines)


class _Tally:
    def __init__(self):
        self.samples = self.failures = 0
        self.first = None

    def __call__(self, ok, what=""):
        self.samples += 1
        if not ok:
            self.failures += 1
            if self.first is None:
                self.first = what or f"sample {self.samples}"


def _scalars(rng, t, count):
    for _ in range(count):
        a = sampling.random_scalar(rng, ELL, -3, 6, zero_rate=0.05)
        b = sampling.random_scalar(rng, ELL, -3, 6, zero_rate=0.05)
        va, vb = exact_valuation(a, ELL), exact_valuation(b, ELL)
        t(exact_valuation(a + b, ELL) >= min(va, vb), f"sum {a}, {b}")
        t(exact_valuation(a * b, ELL) == va + vb, f"product {a}, {b}")
        ca, cb = to_capped(a, ELL, 20), to_capped(b, ELL, 20)
        t((ca + cb).congruent(a + b) and (ca * cb).congruent(a * b), f"capped {a}, {b}")


def _series_norms(rng, t, count):
    r = Radius(ELL, Fraction(1, 2))
    for _ in range(count):
        f = sampling.random_series(rng, 2, 6, ELL, 0, 4, 0.4, -2, 4)
        g = sampling.random_series(rng, 2, 6, ELL, 0, 4, 0.4, -2, 4)
        nf, ng = f.norm(r), g.norm(r)
        t((f + g).norm(r) <= max(nf, ng), "sum norm")
        if not (nf.is_zero or ng.is_zero):
            t((f * g).norm(r) <= nf.times(ng), "product norm")


def _associativity(rng, t, count):
    for _ in range(count):
        f, g, h = (sampling.random_endo(rng, 2, 5, ELL, 1, 3, 0.4) for _ in range(3))
        t(compose(compose(f, g), h) == compose(f, compose(g, h)), "composition")


def _inversion(rng, t, count):
    r = Radius(ELL, 1)
    ident = EndoTuple.identity(2, 6, ELL)
    for _ in range(count):
        psi = sampling.random_normalized(rng, 2, 6, ELL, r.s)
        g = invert(psi)
        t(compose(psi, g) == ident and compose(g, psi) == ident, "two-sided inverse")
        nh = psi.hat().norm(r)
        if not nh.is_zero:
            t(g.hat().norm(r) < nh.inflate_ulp(), "inverse norm")


def _taylor(rng, t, count):
    r = Radius(ELL, 1)
    for _ in range(count):
        f = sampling.random_endo(rng, 2, 6, ELL, 1, 4, 0.4, -1, 3)
        eps = sampling.random_normalized(rng, 2, 6, ELL, r.s, 4) - EndoTuple.identity(2, 6, ELL)
        A = [exact(sampling.random_unit(rng, ELL)) for _ in range(2)]
        t(taylor_gap(f, A, eps, r) <= taylor_bound(f, eps, r), "taylor bound")
    f, eps = fixtures.taylor_witness()
    gap, bound = taylor_gap(f, [1, 1], eps, r), taylor_bound(f, eps, r)
    t(gap.s == bound.s, "witness equality")


def _jets(rng, t, count):
    for _ in range(count):
        f = sampling.random_endo(rng, 2, 3, ELL, 1, 3, 0.5)
        g = sampling.random_endo(rng, 2, 3, ELL, 1, 3, 0.5)
        t(jet_matrix(compose(f, g), 3) == jet_matrix(g, 3) @ jet_matrix(f, 3), "jet functor")


def _calculus(rng, t, count):
    for k in range(1, 10):
        for mu in (Fraction(1, 2), 1, 2, 5):
            t(verify_calculus_sup(Fraction(k, 10), mu).holds, f"sup eta={k}/10 mu={mu}")
    for k in range(1, 10):
        for alpha in (Fraction(3, 2), 2, 4):
            t(verify_calculus_product(Fraction(k, 20), alpha).holds, f"product u={k}/20 a={alpha}")


def _divisors(rng, t, count):
    nmax = max(100, count)
    cert = check_siegel([6], SiegelParams(Fraction(1, 10), 1), nmax, ELL)
    t(cert.holds, "lambda=6 certificate")
    t(not lifting_exponent_check(6, ELL, nmax), "valuation identity")
    cert = check_siegel([126], SiegelParams(1, 1), 50, ELL)
    t(not cert.holds, "lambda=126 with c=1 must fail")


def _linearization(rng, t, count):
    for setup in (fixtures.cubic_setup, fixtures.resonant_setup):
        f, r, params = setup(6)
        res = linearize(f, r, params)
        t(res.ok, f"{setup.__name__} run")
        t(res.Psi == formal_linearize(f), f"{setup.__name__} formal agreement")
        ec = eigen_coordinates(f, r, params, result=res)
        t(ec.relation_holds and all(ec.invertible_by_weight), f"{setup.__name__} coordinates")
    for _ in range(count):
        f, lambdas = sampling.random_diagonal(rng, 2, 5, ELL, 4, 0.4)
        params = fit_siegel(lambdas, 5, ELL).params
        res = linearize(f, Radius(ELL, 1), params)
        t(res.ok and res.Psi == formal_linearize(f), f"random eigenvalues {lambdas}")


def _representations(rng, t, count):
    radii = (Radius(ELL, 1), Radius(ELL, Fraction(3, 2)))
    for _ in range(count):
        rho = ReprSpec(ELL, 2, 2, [sampling.random_matrix(rng, 2, ELL, 2) for _ in range(2)])
        f = sampling.random_series(rng, 2, 6, ELL, 0, 6, 0.5, -3, 5)
        for r in radii:
            M = extend_representation(rho, f, r)
            nf = f.norm(r)
            t(nf.is_zero and matrix_valuation(M, ELL) == float("inf")
              or matrix_valuation(M, ELL) >= nf.s, "extension bound")


def _unipotence(rng, t, count):
    f, r, params = fixtures.resonant_setup(4)
    ys = list(linearize(f, r, params).PsiInv)
    table = fixtures.weight_table()
    t(forced_unipotence_check(fixtures.trivial_rep(), ys, table).unipotent, "trivial")
    t(forced_unipotence_check(fixtures.upper_triangular_rep(), ys, table).unipotent, "upper")
    v = forced_unipotence_check(fixtures.non_equivariant_rep(), ys, table)
    t(v.verdict == "counterexample" and v.witness is not None, "non-equivariant witness")


CHECKS = [
    ("scalar valuations", _scalars, 500),
    ("series norms", _series_norms, 200),
    ("composition associativity", _associativity, 20),
    ("inversion", _inversion, 50),
    ("taylor bound", _taylor, 50),
    ("jet functoriality", _jets, 20),
    ("calculus lemmas", _calculus, 1),
    ("small divisors", _divisors, 1000),
    ("linearization", _linearization, 5),
    ("representation extension", _representations, 50),
    ("forced unipotence", _unipotence, 1),
]


def run(seed=0, scale=1.0, only=None):
    """Run the suite; ``scale`` multiplies every sample count."""
    report = SelftestReport(seed, scale)
    for name, fn, count in CHECKS:
        if only and name not in only:
            continue
        rng = sampling.rng_for(f"{seed}:{name}")
        t = _Tally()
        start = time.perf_counter()
        fn(rng, t, max(1, int(count * scale)))
        report.rows.append(Row(name, t.samples, t.failures, time.perf_counter() - start, t.first))
    return report
