from fractions import Fraction
from itertools import product

import pytest
from hypothesis import given, strategies as st

import oracles as O
from ncsiegel import fixtures, sampling
from ncsiegel.errors import InconsistentWeights, NormTooLarge, RadiusViolation
from ncsiegel.rep import (ReprSpec, WeightTable, evaluate, extend_representation,
                          extension_bound, forced_unipotence_check, matrix_valuation,
                          monomial_weights, weight_kill_cutoff)
from ncsiegel.series import NCSeries, Radius
from ncsiegel.siegel import linearize

ELL = 5


def frac_matrix(M):
    return [[Fraction(int(x.numerator), int(x.denominator)) for x in row] for row in M]


@pytest.mark.parametrize("seed", range(8))
def test_evaluation_matches_oracle(seed):
    rng = sampling.rng_for(seed)
    mats = [sampling.random_matrix(rng, 2, ELL, 1) for _ in range(2)]
    f = sampling.random_series(rng, 2, 5, ELL, 0, 5, 0.5)
    got = evaluate(f, mats, 2)
    assert frac_matrix(got) == O.eval_rep(O.from_series(f), [frac_matrix(M) for M in mats])


@pytest.mark.parametrize("seed", range(5))
def test_algebra_map(seed):
    rng = sampling.rng_for(seed)
    rho = ReprSpec(ELL, 1, 2, [sampling.random_matrix(rng, 2, ELL, 1) for _ in range(2)])
    f = sampling.random_series(rng, 2, 3, ELL, 0, 3, 0.6)
    g = sampling.random_series(rng, 2, 3, ELL, 0, 3, 0.6)
    # product within the degree budget: widen both to D=6 first
    F, G = (NCSeries(2, 6, ELL, dict(h.terms())) for h in (f, g))
    r = Radius(ELL, Fraction(1, 2))
    lhs = extend_representation(rho, F * G, r)
    rhs = extend_representation(rho, F, r).dot(extend_representation(rho, G, r))
    assert (lhs == rhs).all()
    assert (extend_representation(rho, F + G, r) ==
            extend_representation(rho, F, r) + extend_representation(rho, G, r)).all()


@given(st.integers(0, 10**6))
def test_extension_bound(seed):
    rng = sampling.rng_for(seed)
    rho = ReprSpec(ELL, 2, 2, [sampling.random_matrix(rng, 2, ELL, 2) for _ in range(2)])
    f = sampling.random_series(rng, 2, 6, ELL, 0, 6, 0.5, -3, 5)
    for s in (1, Fraction(3, 2)):
        r = Radius(ELL, s)
        v = matrix_valuation(extend_representation(rho, f, r), ELL)
        assert v >= extension_bound(rho, f, r).s >= f.norm(r).s


def test_radius_must_exceed_C():
    rho = fixtures.trivial_rep()
    with pytest.raises(RadiusViolation):
        extend_representation(rho, NCSeries.var(1, 2, 3, ELL), Radius(ELL, 1))


def test_images_must_be_small():
    with pytest.raises(NormTooLarge):
        ReprSpec(ELL, 2, 1, [[[5]]])


@pytest.mark.parametrize("eig, conj", [([-1, -2], [-1, 0, 1]), ([-1, -2], [-3]),
                                       ([-2], [-1]), ([Fraction(-1, 2), -1], [-2, 0])])
def test_cutoff_by_enumeration(eig, conj):
    table = WeightTable(eig, conj)
    d = weight_kill_cutoff(table)

    def heaviest(k):
        return max(sum(c) for c in product(table.eigen_weights, repeat=k))

    assert heaviest(d) < min(table.conj_weights)
    assert d == 1 or heaviest(d - 1) >= min(table.conj_weights)
    assert max(monomial_weights(table, d)) == heaviest(d)


def test_cutoff_needs_negative_weights():
    with pytest.raises(InconsistentWeights):
        weight_kill_cutoff(WeightTable([0, -1], [0]))


@pytest.fixture(scope="module")
def ys():
    f, r, params = fixtures.resonant_setup(5)
    return list(linearize(f, r, params).PsiInv)


def test_trivial_and_upper_triangular_are_unipotent(ys):
    table = fixtures.weight_table()
    for rho in (fixtures.trivial_rep(), fixtures.upper_triangular_rep()):
        v = forced_unipotence_check(rho, ys, table)
        assert v.verdict == "unipotent" and v.cutoff == 2 and v.monomials_checked > 0
    Y = [evaluate(y, fixtures.upper_triangular_rep().images, 2) for y in ys]
    for a, b in product(Y, repeat=2):
        assert not a.dot(b).any()
    v = forced_unipotence_check(fixtures.trivial_rep(), ys, table, semisimple=True)
    assert v.verdict == "trivial"


def test_non_equivariant_has_witness(ys):
    v = forced_unipotence_check(fixtures.non_equivariant_rep(), ys, fixtures.weight_table())
    assert v.verdict == "counterexample" and len(v.witness) >= 2
    assert any(x != 0 for x in v.witness_image.flat)
    assert v.to_json()["witness"]["word"] == list(v.witness)
