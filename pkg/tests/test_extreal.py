import math

import pytest

from core.errors import UndefinedArithmetic
from core.extreal import NEG_INF, POS_INF, ZERO, ExtReal, Kind


def test_of_maps_float_infinities_to_states():
    assert ExtReal.of(math.inf) is POS_INF
    assert ExtReal.of(-math.inf) is NEG_INF
    assert ExtReal.of(2.5).kind is Kind.FINITE


def test_nan_is_rejected():
    with pytest.raises(UndefinedArithmetic):
        ExtReal.of(math.nan)


def test_infinity_times_zero_is_zero():
    assert POS_INF * 0 == ZERO
    assert 0.0 * NEG_INF == ZERO
    assert POS_INF * ExtReal.finite(0.0) == 0.0


def test_signed_products():
    assert POS_INF * -2 == NEG_INF
    assert NEG_INF * NEG_INF == POS_INF
    assert ExtReal.finite(3.0) * 2 == 6.0


def test_addition_and_undefined_difference():
    assert POS_INF + 1.0 == POS_INF
    assert 1.0 + NEG_INF == NEG_INF
    assert POS_INF + POS_INF == POS_INF
    with pytest.raises(UndefinedArithmetic):
        _ = POS_INF - POS_INF
    with pytest.raises(UndefinedArithmetic):
        _ = POS_INF + NEG_INF


def test_ordering():
    assert NEG_INF < ExtReal.finite(-1e300) < ZERO < ExtReal.finite(1e300) < POS_INF
    assert max([ExtReal.finite(1.0), POS_INF, NEG_INF]) is POS_INF
    assert ExtReal.finite(1.0) <= 1.0


def test_immutable():
    x = ExtReal.finite(1.0)
    with pytest.raises(AttributeError):
        x.value = 2.0


def test_str_and_float():
    assert str(POS_INF) == "inf"
    assert str(NEG_INF) == "-inf"
    assert float(ExtReal.finite(0.25)) == 0.25
    assert float(NEG_INF) == -math.inf
