from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

import oracles as O
from strategies import series
from ncsiegel import fixtures, sampling
from ncsiegel.endo import (EndoTuple, compose, invert, is_semisimple_jet, jet_matrix,
                           resonance_check, taylor_bound, taylor_gap)
from ncsiegel.errors import (BackendUnsupported, ConstantTermNonzero, NormTooLarge,
                             NotNormalized, RadiusViolation)
from ncsiegel.scalars import exact, to_capped
from ncsiegel.series import NCSeries, Radius

ELL = 5


def endo(*comps, n=None, D=6):
    n = n or len(comps)
    return EndoTuple(NCSeries(n, D, ELL, c) for c in comps)


def as_dicts(f):
    return [O.from_series(c) for c in f]


def test_compose_one_variable_by_hand():
    f = endo({(1,): 1, (1, 1): 1})
    g = endo({(1,): 1, (1, 1, 1): 1})
    assert compose(f, g) == endo({(1,): 1, (1, 1): 1, (1, 1, 1): 1, (1, 1, 1, 1): 2,
                                  (1, 1, 1, 1, 1, 1): 1})


def test_inverse_is_signed_catalan():
    g = invert(endo({(1,): 1, (1, 1): 1}, D=8))
    catalan = [1, 1, 2, 5, 14, 42, 132, 429]
    expected = {(1,) * k: (-1) ** (k - 1) * catalan[k - 1] for k in range(1, 9)}
    assert g == endo(expected, D=8)
    assert as_dicts(g) == O.fixed_point_inverse(as_dicts(endo({(1,): 1, (1, 1): 1}, D=8)), 8)


def test_inverse_two_variables():
    psi = endo({(1,): 1, (2, 1): 1}, {(2,): 1}, D=5)
    g = invert(psi)
    assert g[1] == NCSeries.var(2, 2, 5, ELL)
    assert g[0] == NCSeries(2, 5, ELL, {(2,) * k + (1,): (-1) ** k for k in range(5)})
    assert as_dicts(g) == O.fixed_point_inverse(as_dicts(psi), 5)


def test_invert_preconditions():
    with pytest.raises(NotNormalized):
        invert(endo({(1,): 2}))
    with pytest.raises(NormTooLarge):
        invert(endo({(1,): 1, (1, 1): Fraction(1, 5)}), Radius(ELL, 1))


def test_constant_terms_rejected():
    with pytest.raises(ConstantTermNonzero):
        endo({(): 1, (1,): 1})


@pytest.mark.parametrize("seed", range(10))
def test_inverse_matches_fixed_point_oracle(seed):
    rng = sampling.rng_for(seed)
    psi = sampling.random_normalized(rng, 2, 5, ELL, Fraction(1))
    assert as_dicts(invert(psi)) == O.fixed_point_inverse(as_dicts(psi), 5)


@given(series(D=4, lo=1), series(D=4, lo=1), series(D=4, lo=1), series(D=4, lo=1),
       series(D=4, lo=1), series(D=4, lo=1))
def test_composition_is_associative(a, b, c, d, e, f):
    F, G, H = EndoTuple([a, b]), EndoTuple([c, d]), EndoTuple([e, f])
    assert compose(compose(F, G), H) == compose(F, compose(G, H))
    assert as_dicts(compose(F, G)) == O.compose(as_dicts(F), as_dicts(G), 4)


def test_taylor_witness_attains_bound():
    f, eps = fixtures.taylor_witness()
    for s in (1, 2, Fraction(1, 2)):
        r = Radius(ELL, s)
        gap = taylor_gap(f, [1, 1], eps, r)
        assert gap.s == 2 * s == taylor_bound(f, eps, r).s
        # without the 1/r factor the bound would read r**3 < r**2
        assert f.norm(r).s + eps.norm(r).s > gap.s


def test_taylor_gap_preconditions():
    f, eps = fixtures.taylor_witness()
    with pytest.raises(RadiusViolation):
        taylor_gap(f, [Fraction(1, 5), 1], eps, Radius(ELL, 1))
    big = endo({(1,): Fraction(1, 25)}, {}, D=4)
    with pytest.raises(RadiusViolation):
        taylor_gap(f, [1, 1], big, Radius(ELL, 1))


def test_filtration_gap_via_taylor():
    rng = sampling.rng_for(7)
    r = Radius(ELL, 1)
    f = sampling.random_endo(rng, 2, 5, ELL, 1, 4, 0.5)
    g = sampling.random_normalized(rng, 2, 5, ELL, r.s)
    lin = EndoTuple.identity(2, 5, ELL)
    gap = (compose(f, g) - compose(f, lin)).norm(r)
    assert gap <= taylor_bound(f, g - lin, r)
    assert gap == taylor_gap(f, [1, 1], g - lin, r)


def test_jet_one_variable_by_hand():
    lam = 6
    jet = jet_matrix(endo({(1,): lam, (1, 1): 1}), 2)
    assert jet.basis == [(1,), (1, 1)]
    assert [[int(x) for x in row] for row in jet.matrix] == [[lam, 0], [1, lam**2]]
    assert jet.is_block_triangular()


@pytest.mark.parametrize("seed", range(5))
def test_jet_matches_oracle_and_is_functorial(seed):
    rng = sampling.rng_for(seed)
    f = sampling.random_endo(rng, 2, 4, ELL, 1, 4, 0.5)
    g = sampling.random_endo(rng, 2, 4, ELL, 1, 4, 0.5)
    basis, M = O.jet(as_dicts(f), 4)
    jf = jet_matrix(f, 4)
    assert jf.basis == basis
    assert [[Fraction(int(x.numerator), int(x.denominator)) for x in row] for row in jf.matrix] == M
    assert jf.is_block_triangular()
    assert jet_matrix(compose(f, g), 4) == jet_matrix(g, 4) @ jf


def test_semisimplicity_examples():
    assert is_semisimple_jet(endo({(1,): 6, (1, 1): 1}), 2)
    assert not is_semisimple_jet(endo({(1,): 1, (1, 1): 1}), 2)
    assert is_semisimple_jet(fixtures.resonant_compliant(4), 3)
    assert not is_semisimple_jet(fixtures.resonant_violating(3), 2)


def test_semisimplicity_needs_exact_input():
    f = EndoTuple([NCSeries(1, 3, ELL, {(1,): to_capped(6, ELL, 10)})])
    with pytest.raises(BackendUnsupported):
        is_semisimple_jet(f, 2)


def test_resonance_check():
    assert resonance_check(endo({(1,): 6, (1, 1): 3, (1, 1, 1): 1}, D=8)) == []
    (v,) = resonance_check(fixtures.resonant_violating())
    assert (v.word, v.j, v.coefficient) == ((1, 1), 2, exact(1))
    assert resonance_check(fixtures.resonant_compliant()) == []
