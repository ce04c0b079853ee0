from fractions import Fraction
import math

import pytest
from hypothesis import given, strategies as st

import oracles as O
from strategies import rationals
from ncsiegel.errors import (DivisionByIndistinguishableZero, ParseError,
                             PrecisionExhausted)
from ncsiegel.scalars import (CappedScalar, LogNorm, exact, scalar_arith, scalar_from_json,
                              scalar_to_json, to_capped, valuation)

ELL = 5


def test_inverse_of_six_to_three_digits():
    inv = scalar_arith(to_capped(1, ELL, 3), to_capped(6, ELL, 3), "div")
    assert inv.v == 0 and inv.prec == 3
    assert inv.unit == O.egcd_inverse(6, 125) == 21


@pytest.mark.parametrize("x, v", [(Fraction(1, 20), -1), (6**5 - 1, 2), (125, 3), (7, 0)])
def test_valuations(x, v):
    assert valuation(exact(x), ELL) == v == O.val(x, ELL)


def test_zero_has_infinite_valuation():
    assert valuation(exact(0), ELL) == math.inf
    assert valuation(CappedScalar.zero(ELL)) == math.inf


def test_floats_refused():
    with pytest.raises(TypeError):
        exact(0.5)


def test_division_by_zero():
    with pytest.raises(DivisionByIndistinguishableZero):
        scalar_arith(exact(1), exact(0), "div")


def test_capped_cancellation_leaves_null():
    a = to_capped(1, ELL, 4)
    b = to_capped(1 + ELL**6, ELL, 4)
    d = a - b
    assert d.is_null and not d.is_exact_zero
    assert d.absprec == 4
    with pytest.raises(PrecisionExhausted):
        scalar_arith(a, b, "sub", strict=True)


def test_division_by_null_raises():
    null = to_capped(1, ELL, 3) - to_capped(1, ELL, 3)
    with pytest.raises(DivisionByIndistinguishableZero):
        to_capped(1, ELL, 3) / null


@given(rationals(), rationals())
def test_ultrametric_and_multiplicative(a, b):
    va, vb = O.val(a, ELL), O.val(b, ELL)
    assert valuation(exact(a) + exact(b), ELL) >= min(va, vb)
    assert valuation(exact(a) * exact(b), ELL) == va + vb


@given(rationals(), rationals(), st.sampled_from(["add", "sub", "mul", "div"]))
def test_capped_agrees_with_exact(a, b, op):
    P = 12
    exact_out = scalar_arith(exact(a), exact(b), op)
    capped = scalar_arith(to_capped(a, ELL, P), to_capped(b, ELL, P), op)
    assert capped.congruent(exact_out)


@given(rationals())
def test_scalar_json_round_trip(a):
    for x in (exact(a), to_capped(a, ELL, 9)):
        assert scalar_from_json(scalar_to_json(x)) == x


def test_scalar_json_errors_carry_path():
    with pytest.raises(ParseError) as info:
        scalar_from_json({"mode": "exact", "num": 1, "den": 0}, "$.c")
    assert info.value.path == "$.c"


def test_lognorm_order_is_by_magnitude():
    small, big = LogNorm(Fraction(3), ELL), LogNorm(Fraction(1), ELL)
    assert small < big and big > small
    assert LogNorm(math.inf, ELL).is_zero


def test_inflate_ulp_is_strictly_larger():
    x = LogNorm(Fraction(7, 3), ELL)
    assert x < x.inflate_ulp()
    assert float(x.s) - float(x.inflate_ulp().s) < 1e-14
