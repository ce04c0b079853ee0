from fractions import Fraction
import math

import pytest

import oracles as O
from ncsiegel import fixtures, sampling
from ncsiegel.endo import EndoTuple, compose, jet_matrix
from ncsiegel.errors import (NotDiagonal, NotInIdeal, ResonantObstruction, ScheduleViolation,
                             NoFeasibleB)
from ncsiegel.params import SiegelParams
from ncsiegel.scalars import LogNorm, exact
from ncsiegel.series import NCSeries, Radius
from ncsiegel.siegel import (PrecisionLedger, b_condition, calculus_product_bound,
                             calculus_sup_bound, choose_B, diagonalize, eigen_coordinates,
                             formal_linearize, linearize, product_enclosure, rescale,
                             siegel_step, solve_homological, verify_calculus_product,
                             verify_calculus_sup)

ELL = 5


def endo(*comps, D=6):
    return EndoTuple(NCSeries(len(comps), D, ELL, c) for c in comps)


# calculus -------------------------------------------------------------------------


def test_sup_bound_small_case():
    chk = verify_calculus_sup(Fraction(1, 2), 1)
    assert chk.holds and chk.value == pytest.approx(0.5)
    assert calculus_sup_bound(Fraction(1, 2), 1) == pytest.approx(14)
    assert O.sup_enumeration(0.5, 1, 50) == pytest.approx(0.5)


def test_sup_bound_against_enumeration():
    chk = verify_calculus_sup(Fraction(1, 10), 2)
    assert chk.value == pytest.approx(O.sup_enumeration(0.1, 2, 1000))
    assert chk.bound == pytest.approx(19600)


def test_sup_bound_decreases_in_eta():
    vals = [calculus_sup_bound(Fraction(k, 10), 2) for k in range(1, 10)]
    assert vals == sorted(vals, reverse=True)


def test_product_enclosure():
    enc, _ = product_enclosure(Fraction(1, 4), 2)
    oracle = O.partial_product(0.25, 2.0)
    assert float(enc.a) <= oracle <= float(enc.b)
    assert oracle == pytest.approx(0.5775761901732, abs=1e-9)
    assert calculus_product_bound(Fraction(1, 4), 2) == pytest.approx(math.exp(-2))
    assert verify_calculus_product(Fraction(49, 100), Fraction(3, 2)).holds
    assert product_enclosure(0, 2)[0] == 1


# homological equation ---------------------------------------------------------------


def test_homological_one_variable_by_hand():
    fhat = endo({(1, 1): 1})
    ledger = PrecisionLedger()
    psi = solve_homological(fhat, [exact(5)], ledger)
    assert psi == endo({(1, 1): Fraction(1, 20)})
    assert ledger.worst_divisor_valuation == 1


def test_homological_two_variables_by_hand():
    u = 1 + ELL
    fhat = endo({(1, 2): 1}, {})
    ledger = PrecisionLedger()
    psi = solve_homological(fhat, [exact(u), exact(u * u)], ledger)
    coeff = psi[0][(1, 2)]
    assert coeff == Fraction(1, u * u * u - u)
    assert O.val(Fraction(1, u * u * u - u), ELL) == -1
    assert ledger.worst_divisor_valuation == 1


def test_homological_errors():
    with pytest.raises(NotInIdeal):
        solve_homological(endo({(1,): 1}), [exact(6)])
    with pytest.raises(ResonantObstruction):
        solve_homological(endo({}, {(1, 1): 1}), [exact(6), exact(36)])
    assert solve_homological(endo({}), [exact(6)]) == endo({})


# B selection and one step ------------------------------------------------------------


def test_choose_B_matches_float_oracle():
    r1, d1, params = Radius(ELL, 2), LogNorm(Fraction(8), ELL), SiegelParams(1, 1)
    B = choose_B(r1, d1, params, c_prime=1)

    def holds(B):
        u, a = (7 * B * 5.0**-8) ** 0.5, (B - 1) ** 0.5
        return 1 / B < 5.0**-2 * O.partial_product(u, a)

    assert B == 32
    assert holds(B) and not holds(B // 2)
    assert b_condition(B, r1, d1, 1, params)[0]
    assert not b_condition(B // 2, r1, d1, 1, params)[0]


def test_choose_B_infeasible():
    with pytest.raises(NoFeasibleB):
        choose_B(Radius(ELL, 2), LogNorm(Fraction(0), ELL), SiegelParams(1, 1), c_prime=1)


def test_single_step_bounds_and_oracle():
    f = endo({(1,): 6, (1, 1): 125})
    r = Radius(ELL, 2)
    res = siegel_step(f, r, Fraction(3, 4), SiegelParams(Fraction(1, 10), 1))
    assert res.psi == endo({(1,): 1, (1, 1): Fraction(25, 6)})
    rec = res.record
    assert rec.delta.s == 7
    assert rec.delta_next.value() <= rec.bound_delta
    assert rec.psi_norm.value() <= rec.bound_psi_sharp <= rec.bound_psi
    # conjugation rebuilt from the oracle
    psi = [O.from_series(c) for c in res.psi]
    inv = O.fixed_point_inverse(psi, 6)
    fd = [O.from_series(c) for c in f]
    nxt = O.compose(inv, O.compose(fd, psi, 6), 6)
    assert nxt == [O.from_series(c) for c in res.f_next]
    hat = {w: c for w, c in nxt[0].items() if len(w) >= 2}
    assert rec.delta_next.s == O.log_norm(hat, rec.r_next.s)


def test_step_precondition():
    f = endo({(1,): 6, (1, 1): 125})
    with pytest.raises(ScheduleViolation):
        siegel_step(f, Radius(ELL, 2), Fraction(1, 2), SiegelParams(Fraction(1, 10), 1))
    with pytest.raises(ScheduleViolation):
        siegel_step(f, Radius(ELL, 2), 1, SiegelParams(Fraction(1, 10), 1))


# full runs --------------------------------------------------------------------------------


def _check_run(f, r, params):
    res = linearize(f, r, params)
    n, D = f.n, f.D
    assert res.ok
    conj = compose(res.PsiInv, compose(f, res.Psi))
    assert conj == EndoTuple.diagonal(res.lambdas, D, ELL)
    assert res.Psi == formal_linearize(f)
    B = res.schedule.B
    for step in res.schedule.steps:
        if not step.delta_next.vanishes:
            assert step.delta_next.value() <= step.delta.value() / (B - 1)
        assert step.r_next.value > 1 / B
    assert res.schedule.r1.value > 1 / B
    # in the original coordinates the radius carries the rescaling factor
    assert res.r_prime.s == res.schedule.r_final.s + res.schedule.rescale
    return res


def test_cubic_fixture():
    f, r, params = fixtures.cubic_setup()
    res = _check_run(f, r, params)
    lam = exact(6)
    psi = res.Psi[0]
    # weight-3 coefficient from the hand formula a / (lambda**3 - lambda)
    assert psi[(1, 1, 1)] == 1 / (lam**3 - lam)
    assert psi[(1, 1)] == 0


def test_resonant_fixture_keeps_resonant_coefficients_zero():
    f, r, params = fixtures.resonant_setup()
    res = _check_run(f, r, params)
    assert res.Psi[1][(1, 1)] == 0


def test_formal_two_term_formula():
    lam, a = exact(6), exact(3)
    psi = formal_linearize(endo({(1,): lam, (1, 1): a}))
    assert psi[0][(1, 1)] == a / (lam**2 - lam)


def test_resonant_obstruction():
    with pytest.raises(ResonantObstruction):
        linearize(fixtures.resonant_violating(), Radius(ELL, 2), SiegelParams(Fraction(1, 50), 1))
    with pytest.raises(ResonantObstruction):
        formal_linearize(fixtures.resonant_violating())


@pytest.mark.parametrize("seed", range(6))
def test_random_non_resonant_runs(seed):
    from ncsiegel.divisors import fit_siegel

    rng = sampling.rng_for(seed)
    f, lambdas = sampling.random_diagonal(rng, 2, 6, ELL, 5, 0.4)
    _check_run(f, Radius(ELL, 1), fit_siegel(lambdas, 6, ELL).params)


def test_rescale_round_trip():
    f = fixtures.resonant_compliant(5)
    assert rescale(rescale(f, 3), -3) == f
    assert rescale(f, 1)[0][(1, 2)] == ELL


def test_non_diagonal_linear_part():
    f = endo({(1,): 6, (2,): 1}, {(2,): 36, (1, 1): 1}, D=4)
    with pytest.raises(NotDiagonal):
        linearize(f, Radius(ELL, 2), SiegelParams(Fraction(1, 50), 1))
    g, T, Tinv = diagonalize(f)
    assert g.is_diagonal()
    assert compose(T, compose(g, Tinv)) == f


def test_eigen_coordinates():
    for setup in (fixtures.cubic_setup, fixtures.resonant_setup):
        f, r, params = setup()
        ec = eigen_coordinates(f, r, params)
        assert ec.relation_holds and all(ec.invertible_by_weight)
        for y, lam in zip(ec.ys, ec.lambdas):
            assert y.substitute(f) == y.scale(lam)
        assert ec.certificate.is_block_triangular()
    f = endo({(1,): 6, (1, 1): 3}, D=6)
    ec = eigen_coordinates(f, Radius(ELL, 2), SiegelParams(Fraction(1, 10), 1))
    assert ec.ys[0][(1, 1)] == -exact(3) / (36 - 6)


def test_jet_of_conjugator_is_unitriangular():
    f, r, params = fixtures.cubic_setup()
    jet = jet_matrix(linearize(f, r, params).Psi, f.D)
    assert all(jet.matrix[i, i] == 1 for i in range(len(jet.basis)))
