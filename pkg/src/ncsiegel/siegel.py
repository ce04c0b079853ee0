"""Siegel linearization of tangent-diagonal endomorphisms.

Constant conventions used throughout:

* ``C_sigma = 1/c`` bounds reciprocal divisors, ``1/|lambda^I - lambda_j| <=
  C_sigma (N/2)**mu``.
* Substitution loses a factor ``1/r`` (``||f(Ax+e) - f(Ax)||_r <=
  ||f||_r ||e||_r / r``), so a step at radius ``r`` runs with the constant
  ``c' = C_sigma / r``.  Every step inequality below is stated with ``c'``.
* ``K = (7 mu)**mu`` with ``mu`` raised to 3/10 when it is at most 2/7.

All real-valued comparisons go through outward-rounded intervals, so every
inequality the driver asserts is certified.
"""
from dataclasses import dataclass, field
from fractions import Fraction
import math

from . import _reals
from .divisors import _compare, check_siegel
from .endo import (
    EndoTuple,
    _Powers,
    divisor,
    compose,
    invert,
    is_resonant,
    is_semisimple_jet,
    jet_matrix,
    resonance_check,
)
from .errors import (
    BackendUnsupported,
    ContractionFailure,
    EigenvalueOutsideDisk,
    NoFeasibleB,
    NotDiagonal,
    NotInIdeal,
    NotSemisimple,
    ResonantObstruction,
    ScheduleDivergence,
    ScheduleViolation,
    SiegelConditionViolated,
)
from .params import MU_FLOOR, SiegelParams, as_fraction
from .scalars import INF, CappedScalar, LogNorm, exact, is_null, scalar_arith, valuation
from .series import NCSeries, Radius, unpack

iv = _reals.interval

__all__ = [
    "MU_FLOOR", "SiegelParams", "calculus_sup_bound", "calculus_product_bound",
    "verify_calculus_sup", "verify_calculus_product", "choose_B", "solve_homological",
    "siegel_step", "linearize", "formal_linearize", "eigen_coordinates", "diagonalize",
    "rescale", "PrecisionLedger", "SiegelSchedule", "StepRecord", "LinearizationResult",
]


# calculus lemmas ----------------------------------------------------------------


def calculus_sup_bound(eta, mu):
    """``(eta / (7 mu))**(-mu)``."""
    eta, mu = iv(eta), iv(mu)
    return _reals.mid_float((7 * mu / eta) ** mu)


@dataclass
class CalculusCheck:
    holds: bool
    value: float
    bound: float
    detail: dict

    def to_json(self):
        return {"holds": self.holds, "value": self.value, "bound": self.bound, **self.detail}


def verify_calculus_sup(eta, mu):
    """Enumerate ``(1-eta)**i * i**mu`` past its turning point.

    The real function increases up to ``x0 = mu / -log(1-eta)`` and
    decreases after it, so the integer supremum is attained at or before
    ``ceil(x0)``.
    """
    eta, mu = as_fraction(eta), as_fraction(mu)
    if not (0 < eta < 1 and mu > 0):
        raise ValueError("need eta in (0,1) and mu > 0")
    x0 = float(mu) / -math.log1p(-float(eta))
    last = max(2, math.ceil(x0) + 1)
    q, m = iv(1 - eta), iv(mu)
    best, arg = iv(0), 0
    for i in range(1, last + 1):
        val = q**i * iv(i) ** m
        if val.b > best.b:
            best, arg = val, i
    bound = (7 * m / iv(eta)) ** m
    return CalculusCheck(best.b <= bound.a, float(best.mid), float(bound.mid),
                         {"argmax": arg, "enumerated_to": last, "turning_point": x0})


def calculus_product_bound(u, alpha):
    """``exp(-alpha / (alpha - 1))``."""
    a = iv(alpha)
    return _reals.mid_float(_reals.ctx.exp(-a / (a - 1)))


def product_enclosure(u, alpha, tol=Fraction(1, 10**6), max_terms=100000):
    """Interval enclosing ``prod_{n>=0} (1 - u / alpha**n)``.

    Partial products are closed off with the tail factor
    ``exp(-2 u alpha**(-N) alpha / (alpha - 1))``, valid because every
    remaining term is below 1/2.
    """
    u, a = iv(u), iv(alpha)
    if not (u.b < 0.5 and a.a > 1):
        raise ValueError("need u < 1/2 and alpha > 1")
    if u.b <= 0:
        return iv(1), 0
    prod = iv(1)
    term = u
    ctx = _reals.ctx
    for N in range(max_terms):
        tail = ctx.exp(-2 * term * a / (a - 1))
        lo = prod.a * tail.a
        if float((prod.b - lo).b) <= float(tol):
            return ctx.mpf([lo, prod.b]), N
        prod = prod * (1 - term)
        term = term / a
    raise ArithmeticError("product did not converge to the requested width")


def verify_calculus_product(u, alpha, tol=Fraction(1, 10**6)):
    enc, terms = product_enclosure(u, alpha, tol)
    a = iv(alpha)
    bound = _reals.ctx.exp(-a / (a - 1))
    return CalculusCheck(enc.a > bound.b, float(enc.mid), float(bound.mid),
                         {"terms": terms, "width": float(enc.delta)})


# B parameter -----------------------------------------------------------------------


def _delta_iv(delta, ell=None):
    if isinstance(delta, LogNorm):
        return delta.interval()
    return iv(delta)


def b_condition(B, r1, delta1, c_prime, params):
    """Test ``1/B < r1 * prod_n (1 - u / alpha**n)``.

    ``u = (c' K B delta1)**(1/(mu+1))`` and ``alpha = (B-1)**(1/(mu+1))``.
    Returns ``(ok, u_ok, info)``; ``u_ok`` is False once ``u >= 1/2``.
    """
    mu = iv(params.mu_eff)
    K = params.seven_mu_power()
    e = 1 / (mu + 1)
    d = _delta_iv(delta1)
    u = (iv(c_prime) * K * B * d) ** e if d.b > 0 else iv(0)
    info = {"B": B, "u": float(u.b)}
    if not u.b < 0.5:
        return False, False, info
    alpha = iv(B - 1) ** e
    prod, _ = product_enclosure(u, alpha)
    rhs = r1.interval() * iv(prod.a)
    info["product_lower"] = float(prod.a)
    return bool(iv(Fraction(1, B)).b < rhs.a), True, info


def choose_B(r1, delta1, params, c_prime=None, B0=4, cap=2**64):
    """Smallest ``B = B0 * 2**k`` meeting the B condition at radius ``r1``.

    ``c_prime`` is a number or a function of ``B``; by default ``C_sigma * B``,
    which dominates ``C_sigma / r_n`` for every radius ``r_n > 1/B`` the
    schedule can visit.
    """
    if c_prime is None:
        c_prime = lambda B: params.C_sigma * B  # noqa: E731
    B = B0
    while B <= cap:
        cp = c_prime(B) if callable(c_prime) else c_prime
        ok, u_ok, _ = b_condition(B, r1, delta1, cp, params)
        if ok:
            return B
        if not u_ok:
            raise NoFeasibleB(f"u >= 1/2 at B={B}: delta1 is too large for radius {r1}")
        B *= 2
    raise NoFeasibleB(f"no B up to {cap} satisfies the B condition")


# homological equation ----------------------------------------------------------------


@dataclass
class PrecisionLedger:
    """Small-divisor and precision bookkeeping for one run."""

    backend: str = "exact"
    worst_divisor_valuation: object = -INF
    worst_divisor: tuple = None
    divisions: int = 0
    by_degree: dict = field(default_factory=dict)
    min_absprec: object = INF
    null_resonant: int = 0
    notes: list = field(default_factory=list)

    def record(self, v, word, j):
        self.divisions += 1
        N = len(word)
        if v > self.by_degree.get(N, -INF):
            self.by_degree[N] = v
        if v > self.worst_divisor_valuation:
            self.worst_divisor_valuation = v
            self.worst_divisor = (tuple(word), j + 1)

    def absorb(self, endo):
        for comp in endo:
            for _, c in comp.terms():
                if isinstance(c, CappedScalar):
                    self.backend = "capped"
                    self.min_absprec = min(self.min_absprec, c.absprec)

    def to_json(self):
        wv = self.worst_divisor_valuation
        return {
            "backend": self.backend,
            "worst_divisor_valuation": None if wv == -INF else wv,
            "worst_divisor": None if self.worst_divisor is None else
            {"word": list(self.worst_divisor[0]), "j": self.worst_divisor[1]},
            "divisions": self.divisions,
            "worst_valuation_by_degree": {str(k): v for k, v in sorted(self.by_degree.items())},
            "min_absolute_precision": None if self.min_absprec == INF else self.min_absprec,
            "null_resonant_coefficients": self.null_resonant,
            "notes": list(self.notes),
        }


def _check_disk(lambdas, ell):
    for lam in lambdas:
        if not is_null(lam) and valuation(lam, ell) < 0:
            raise EigenvalueOutsideDisk(f"|{lam}| > 1")


def solve_homological(fhat, lambdas, ledger=None, verify=True):
    """``psi_hat`` with ``psi_hat(Ax) - A psi_hat(x) = fhat``.

    The coefficient of ``x^I`` in component ``j`` is ``a / (lambda^I - lambda_j)``,
    and zero on resonant words (where ``a`` must vanish).
    """
    n, D, ell = fhat.n, fhat.D, fhat.ell
    for i, comp in enumerate(fhat):
        if not comp.in_ideal_power(2):
            raise NotInIdeal(f"component {i + 1} has a linear term")
    _check_disk(lambdas, ell)
    ledger = ledger if ledger is not None else PrecisionLedger()
    powers = _Powers(lambdas)
    out = []
    for j, comp in enumerate(fhat):
        blocks = [dict() for _ in range(D + 1)]
        for k in range(2, D + 1):
            for code, a in comp._blocks[k].items():
                word = unpack(code, n)
                d = divisor(powers, word, j, n)
                if is_resonant(d):
                    if is_null(a):
                        ledger.null_resonant += 1
                        continue
                    raise ResonantObstruction(
                        f"resonant word {list(word)} in component {j + 1} has coefficient {a}")
                ledger.record(valuation(d, ell), word, j)
                if isinstance(a, CappedScalar) and a.unit == 0:
                    blocks[k][code] = CappedScalar.null(ell, a.v - d.v if isinstance(
                        d, CappedScalar) else a.v - valuation(d, ell))
                else:
                    blocks[k][code] = scalar_arith(a, d, "div", strict=True)
        out.append(NCSeries._from_blocks(n, D, ell, blocks))
    psi_hat = EndoTuple(out)
    ledger.absorb(psi_hat)
    if verify:
        Ax = EndoTuple.diagonal(lambdas, D, ell)
        lhs = compose(psi_hat, Ax)
        for j in range(n):
            diff = lhs[j] - psi_hat[j].scale(lambdas[j]) - fhat[j]
            if not all(is_null(c) for _, c in diff.terms()):
                raise ContractionFailure(f"homological equation fails in component {j + 1}")
    return psi_hat


# one step --------------------------------------------------------------------------


@dataclass
class StepRecord:
    n: int
    r: Radius
    eta: Fraction
    delta: LogNorm
    delta_next: LogNorm
    psi_norm: LogNorm
    r_next: Radius
    c_prime: float
    bound_psi: float
    bound_psi_sharp: float
    bound_delta: float

    def to_json(self):
        return {
            "n": self.n,
            "r": _radius_json(self.r),
            "eta": str(self.eta),
            "eta_float": float(self.eta),
            "delta": self.delta.to_json(),
            "delta_next": self.delta_next.to_json(),
            "psi_norm": self.psi_norm.to_json(),
            "r_next": _radius_json(self.r_next),
            "c_prime": self.c_prime,
            "bound_psi": self.bound_psi,
            "bound_psi_sharp": self.bound_psi_sharp,
            "bound_delta_next": self.bound_delta,
        }


def _radius_json(r):
    return {"log_ell": str(r.s), "value": r.value}


@dataclass
class StepResult:
    psi: EndoTuple
    psi_inv: EndoTuple
    f_next: EndoTuple
    record: StepRecord


def _le(measured, bound):
    """``measured <= bound`` certified; ``measured`` is a LogNorm."""
    if measured.is_zero:
        return True
    return measured.interval().b <= bound.a


def siegel_step(f, r, eta, params, c_prime=None, delta=None, ledger=None,
                check_divisors=True, n=1):
    """Conjugate ``f`` by ``psi = x + psi_hat`` and certify the step bounds.

    Raises ScheduleViolation when ``eta`` or ``delta`` are out of range and
    ContractionFailure when a measured norm exceeds its bound.
    """
    eta = as_fraction(eta)
    if not 0 < eta < 1:
        raise ScheduleViolation(f"eta={eta} is not in (0,1)")
    lambdas = f.eigenvalues()
    _check_disk(lambdas, f.ell)
    fhat = f.hat()
    measured = fhat.norm(r)
    if delta is None:
        delta = measured
    if not (measured <= delta or delta.vanishes):
        raise ScheduleViolation(f"||f_hat||_r = {measured} exceeds delta = {delta}")
    cp = iv(c_prime) if c_prime is not None else iv(params.C_sigma) / r.interval()
    K = params.seven_mu_power()
    mu = iv(params.mu_eff)
    e = iv(eta)
    d = _delta_iv(delta)
    if not (cp * K * e ** (-mu) * d).b < r.interval().a:
        raise ScheduleViolation("step precondition c' (7mu)^mu eta^-mu delta < r fails")
    rho = r.shrink(eta)
    ledger = ledger if ledger is not None else PrecisionLedger()
    identity = EndoTuple.identity(f.n, f.D, f.ell)
    if measured.vanishes:
        zero = LogNorm(INF, f.ell)
        rec = StepRecord(n, r, eta, delta, zero, zero, rho, float(cp.mid), 0.0, 0.0, 0.0)
        return StepResult(identity, identity, f, rec)
    psi_hat = solve_homological(fhat, lambdas, ledger)
    if check_divisors:
        for N, v in ledger.by_degree.items():
            ok, _ = _compare(f.ell, v, N, params.c, params.mu, "half")
            if ok is False:
                raise SiegelConditionViolated(
                    f"divisor of valuation {v} at degree {N} breaks the small-divisor bound")
    psi = identity + psi_hat
    psi_inv = invert(psi)
    f_next = compose(psi_inv, compose(f, psi))
    psi_norm = psi_hat.norm(rho)
    delta_next = f_next.hat().norm(rho)
    one_minus = iv(1 - eta)
    growth = (7 * mu / e) ** mu
    bound_psi = cp * d * one_minus * growth
    sharp = iv(params.C_sigma) * d * one_minus * growth
    denom = e**mu - d * cp * K
    if not denom.a > 0:
        raise ScheduleViolation("eta**mu <= delta c' (7mu)^mu")
    bound_delta = cp * K * d * d / denom
    rec = StepRecord(n, r, eta, delta, delta_next, psi_norm, rho, float(cp.mid),
                     float(bound_psi.b), float(sharp.b), float(bound_delta.b))
    if not _le(psi_norm, bound_psi):
        raise ContractionFailure(f"||psi - x|| = {psi_norm} exceeds its bound {float(bound_psi.b)}")
    if not _le(delta_next, bound_delta):
        raise ContractionFailure(f"delta_next = {delta_next} exceeds its bound {float(bound_delta.b)}")
    return StepResult(psi, psi_inv, f_next, rec)


# driver ------------------------------------------------------------------------------


def rescale(f, k):
    """``x -> ell**(-k) f(ell**k x)``: weight-``d`` coefficients gain ``ell**(k(d-1))``."""
    ell = f.ell
    out = []
    for comp in f:
        blocks = []
        for d, block in enumerate(comp._blocks):
            factor = exact(Fraction(ell) ** (k * (d - 1)))
            blocks.append({code: c * factor for code, c in block.items()})
        out.append(NCSeries._from_blocks(comp.n, comp.D, ell, blocks))
    return EndoTuple(out)


@dataclass
class SiegelSchedule:
    B: int
    r1: Radius
    rescale: int
    delta1: LogNorm
    u: float
    product_lower: float
    steps: list = field(default_factory=list)
    termination: str = ""
    r_final: Radius = None

    def to_json(self):
        return {
            "B": self.B,
            "r1": _radius_json(self.r1),
            "rescale_exponent": self.rescale,
            "delta1": self.delta1.to_json(),
            "u": self.u,
            "product_lower": self.product_lower,
            "steps": [s.to_json() for s in self.steps],
            "termination": self.termination,
            "r_final_rescaled": None if self.r_final is None else _radius_json(self.r_final),
        }


@dataclass
class LinearizationResult:
    Psi: EndoTuple
    PsiInv: EndoTuple
    r_prime: Radius
    schedule: SiegelSchedule
    residual: LogNorm
    lambdas: list
    params: SiegelParams
    ledger: PrecisionLedger
    conjugated: EndoTuple
    semisimple: str
    siegel_certificate: object = None
    checks: dict = field(default_factory=dict)

    @property
    def ok(self):
        return self.residual.vanishes and all(self.checks.values())

    def threshold(self):
        """``-log(r') / log(ell)``, the level a representation must be trivial beyond."""
        return self.r_prime.s

    def report(self):
        cert = self.siegel_certificate
        return {
            "kind": "linearization",
            "n": self.Psi.n,
            "D": self.Psi.D,
            "ell": self.Psi.ell,
            "lambdas": [str(x) for x in self.lambdas],
            "params": self.params.to_json(),
            "constants": {
                "c_stated": str(self.params.c),
                "C_sigma": str(self.params.C_sigma),
                "c_prime_rule": "C_sigma / r_n at step n; C_sigma * B when choosing B",
            },
            "semisimplicity": self.semisimple,
            "siegel_certificate": None if cert is None else cert.to_json(),
            "schedule": self.schedule.to_json(),
            "r_prime": _radius_json(self.r_prime),
            "threshold_N": str(self.threshold()),
            "residual": self.residual.to_json(),
            "precision": self.ledger.to_json(),
            "checks": dict(self.checks),
            "ok": self.ok,
            "Psi": self.Psi.to_json(),
            "PsiInv": self.PsiInv.to_json(),
        }


def diagonalize(f):
    """Conjugate ``f`` by a rational linear map so its linear part is diagonal.

    Returns ``(g, T, T_inv)`` with ``g = T_inv o f o T``.  Only exact linear
    parts with rational eigenvalues are supported.
    """
    if f.is_diagonal():
        ident = EndoTuple.identity(f.n, f.D, f.ell)
        return f, ident, ident
    if not f.is_exact():
        raise BackendUnsupported("diagonalization needs an exact linear part")
    import sympy

    L = f.linear_part()
    M = sympy.Matrix(f.n, f.n, lambda i, k: sympy.Rational(int(L[i, k].numerator),
                                                            int(L[i, k].denominator)))
    try:
        P, _ = M.diagonalize()
    except sympy.MatrixError as exc:
        raise NotSemisimple(f"linear part is not diagonalizable: {exc}") from None
    if any(not x.is_rational for x in P) or any(not x.is_rational for x in M.eigenvals()):
        raise NotDiagonal("linear part has irrational eigenvalues")
    Pinv = P.inv()

    def linear_map(Q):
        return EndoTuple(NCSeries(f.n, f.D, f.ell, {(k + 1,): Fraction(int(Q[i, k].p), int(Q[i, k].q))
                                                     for k in range(f.n)}) for i in range(f.n))

    T, Tinv = linear_map(P), linear_map(Pinv)
    return compose(Tinv, compose(f, T)), T, Tinv


def linearize(f, r, params, semisimple="assume", certify_siegel=True, max_steps=64,
              B_cap=2**64, max_rescale=64, diagonalize_linear=False):
    """Conjugate ``f`` to its linear part on a smaller polydisk.

    Preamble: for ``k = 0, 1, ...`` the rescaled map ``ell**(-k) f(ell**k x)``
    is tried with ``B = 4, 8, ...`` and ``r1 = r / sqrt(B)`` until the B
    condition holds.  The Siegel steps then run until ``delta_n`` vanishes,
    which happens after finitely many steps at truncation degree ``D``.
    """
    if semisimple not in ("assume", "certify"):
        raise ValueError("semisimple must be 'assume' or 'certify'")
    T = Tinv = None
    if not f.is_diagonal():
        if not diagonalize_linear:
            raise NotDiagonal("linear part is not diagonal")
        f, T, Tinv = diagonalize(f)
    lambdas = f.eigenvalues()
    ell, D = f.ell, f.D
    _check_disk(lambdas, ell)
    ledger = PrecisionLedger()
    bad = resonance_check(f)
    if bad:
        v = bad[0]
        raise ResonantObstruction(
            f"resonant word {list(v.word)} in component {v.j} has coefficient {v.coefficient}")
    semis = "asserted by caller"
    if semisimple == "certify":
        if not is_semisimple_jet(f, D):
            raise NotSemisimple(f"jet of order {D} is not semisimple")
        semis = f"certified at jet order {D}"
    cert = None
    if certify_siegel and f.is_exact():
        cert = check_siegel(lambdas, params, max(D, 2), ell)
        if not cert.holds:
            raise SiegelConditionViolated(
                f"small-divisor condition {cert.verdict} at {cert.failing}")
    elif certify_siegel:
        ledger.notes.append("small-divisor certificate skipped for capped eigenvalues")

    chosen = None
    for k in range(max_rescale + 1):
        fk = rescale(f, k) if k else f
        hat = fk.hat()
        B = 4
        while B <= B_cap:
            r1 = r.divided_by_sqrt(B)
            d1 = hat.norm(r1)
            ok, u_ok, info = b_condition(B, r1, d1, params.C_sigma * B, params)
            if ok:
                chosen = (k, fk, B, r1, d1, info)
                break
            if not u_ok:
                break
            B *= 2
        if chosen:
            break
    if chosen is None:
        raise NoFeasibleB("no rescaling and B satisfy the B condition")
    k, fn, B, r1, delta, info = chosen
    if k:
        ledger.notes.append(f"conjugated by x -> {ell}^{k} x before iterating")
    sched = SiegelSchedule(B, r1, k, delta, info["u"], info.get("product_lower", 1.0))
    K = params.seven_mu_power()
    mu = iv(params.mu_eff)
    rn = r1
    Psi = EndoTuple.identity(f.n, D, ell)
    inv_B = iv(Fraction(1, B))
    for step in range(1, max_steps + 1):
        if delta.vanishes:
            sched.termination = "delta vanished at truncation degree"
            break
        cp = iv(params.C_sigma) / rn.interval()
        eta = _reals.upper_dyadic((iv(B) * cp * K * delta.interval()) ** (1 / (mu + 1)))
        if not 0 < eta < 1:
            raise ScheduleViolation(f"eta_{step} = {eta} is not in (0,1)")
        res = siegel_step(fn, rn, eta, params, c_prime=cp, delta=delta, ledger=ledger, n=step)
        sched.steps.append(res.record)
        nxt = res.record.delta_next
        if not nxt.vanishes and not nxt.interval().b <= (delta.interval() / (B - 1)).a:
            raise ScheduleDivergence(f"delta_{step + 1} = {nxt} exceeds delta_{step}/(B-1)")
        rn = res.record.r_next
        if not inv_B.b < rn.interval().a:
            raise ScheduleViolation(f"r_{step + 1} = {rn} is not above 1/B")
        Psi = compose(Psi, res.psi)
        fn = res.f_next
        delta = nxt
    else:
        if not delta.vanishes:
            raise ScheduleDivergence(f"delta still nonzero after {max_steps} steps")
        sched.termination = "delta vanished at truncation degree"
    sched.r_final = rn
    PsiInv = invert(Psi)
    if k:
        Psi, PsiInv, fn = rescale(Psi, -k), rescale(PsiInv, -k), rescale(fn, -k)
    r_prime = rn.scaled(k)
    if T is not None:
        Psi, PsiInv = compose(T, Psi), compose(PsiInv, Tinv)
        f = compose(T, compose(f, Tinv))
    target = EndoTuple.diagonal(lambdas, D, ell)
    residual = (compose(PsiInv, compose(f, Psi)) - target).norm(r_prime)
    ledger.absorb(Psi)
    checks = {
        "residual_vanishes": residual.vanishes,
        "delta_contraction": True,
        "radius_above_inverse_B": True,
        "psi_inverse_two_sided": _is_identity(compose(Psi, PsiInv)),
    }
    result = LinearizationResult(Psi, PsiInv, r_prime, sched, residual, lambdas, params, ledger,
                                 fn, semis, cert, checks)
    if not residual.vanishes:
        raise ContractionFailure(f"residual {residual} does not vanish")
    return result


def _is_identity(g):
    ident = EndoTuple.identity(g.n, g.D, g.ell)
    diff = g - ident
    return all(is_null(c) for comp in diff for _, c in comp.terms())


# formal oracle -------------------------------------------------------------------------


def formal_linearize(f):
    """Tangent-to-identity ``Psi`` with ``f o Psi = Psi o A``, built weight by weight.

    At weight ``k`` the coefficient of ``x^K`` in ``Psi_i`` is
    ``f_hat_i(Psi)[K] / (lambda^K - lambda_i)``; the right side only involves
    weights below ``k``.  Resonant coefficients are set to zero.
    """
    lambdas = f.eigenvalues()
    n, D, ell = f.n, f.D, f.ell
    powers = _Powers(lambdas)
    fhat = f.hat()
    blocks = [[dict() for _ in range(D + 1)] for _ in range(n)]
    for i in range(n):
        blocks[i][1][i + 1] = exact(1)
    for k in range(2, D + 1):
        Psi = EndoTuple(NCSeries._from_blocks(n, D, ell, b) for b in blocks)
        rhs = compose(fhat, Psi)
        for i in range(n):
            for code, a in rhs[i]._blocks[k].items():
                word = unpack(code, n)
                d = divisor(powers, word, i, n)
                if is_resonant(d):
                    if not is_null(a):
                        raise ResonantObstruction(
                            f"resonant word {list(word)} in component {i + 1} cannot be removed")
                    continue
                blocks[i][k][code] = a / d
    return EndoTuple(NCSeries._from_blocks(n, D, ell, b) for b in blocks)


# eigen-coordinates -----------------------------------------------------------------------


@dataclass
class EigenCoordinates:
    ys: list
    lambdas: list
    relation_holds: bool
    certificate: object
    invertible_by_weight: list
    result: LinearizationResult

    def to_json(self):
        return {
            "kind": "eigen_coordinates",
            "lambdas": [str(x) for x in self.lambdas],
            "ys": [y.to_json() for y in self.ys],
            "relation_holds": self.relation_holds,
            "change_of_basis": {
                "convention": "column J expands x^J in y-monomials",
                "block_triangular": self.certificate.is_block_triangular(),
                "invertible_by_weight": self.invertible_by_weight,
            },
            "r_prime": _radius_json(self.result.r_prime),
        }


def eigen_coordinates(f, r, params, result=None, **kw):
    """Coordinates ``y_i`` (components of ``Psi^{-1}``) with ``y_i o f = lambda_i y_i``.

    The certificate is the jet of ``Psi`` at order ``D``: column ``J`` holds
    ``x^J`` written in the ``y`` variables.  It is block triangular by weight
    with identity diagonal blocks, hence invertible in every weight.
    """
    res = result if result is not None else linearize(f, r, params, **kw)
    ys = list(res.PsiInv)
    lambdas = res.lambdas
    ok = True
    for y, lam in zip(ys, lambdas):
        diff = y.substitute(f) - y.scale(lam)
        ok = ok and all(is_null(c) for _, c in diff.terms())
    jet = jet_matrix(res.Psi, f.D)
    per_weight = []
    for block in jet.diagonal_blocks():
        size = block.shape[0]
        per_weight.append(all(block[i, j] == (1 if i == j else 0)
                              for i in range(size) for j in range(size)))
    return EigenCoordinates(ys, lambdas, ok, jet, per_weight, res)
