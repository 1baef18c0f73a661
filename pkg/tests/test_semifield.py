from fractions import Fraction

import pytest
from hypothesis import assume, given

from src.algebra.semifield import (
    NEG_INF,
    UNBOUNDED,
    ZERO,
    TropScalar,
    div,
    power,
    root,
    tmin,
    tsum,
)
from src.errors import DivisionByZeroElement, InvalidInput

from .strategies import finite_scalars, rationals, scalars


class TestTextForm:
    @pytest.mark.parametrize(
        "text, expected",
        [("3", Fraction(3)), ("-1/2", Fraction(-1, 2)), (" 4/6 ", Fraction(2, 3)), ("0", Fraction(0))],
    )
    def test_parse_rationals(self, text, expected):
        assert TropScalar.parse(text).value == expected

    def test_parse_neg_inf(self):
        assert TropScalar.parse(" -inf ") == NEG_INF
        assert TropScalar.parse("-inf").is_neg_inf

    @pytest.mark.parametrize("text", ["", "abc", "1.5", "1e3", "1/0", "+inf", "inf"])
    def test_parse_rejects(self, text):
        with pytest.raises(InvalidInput):
            TropScalar.parse(text)

    def test_str_drops_unit_denominator(self):
        assert str(TropScalar(Fraction(6, 2))) == "3"
        assert str(TropScalar(Fraction(-2, 4))) == "-1/2"
        assert str(NEG_INF) == "-inf"

    def test_unbounded_is_not_a_scalar(self):
        assert str(UNBOUNDED) == "+inf"
        assert not isinstance(UNBOUNDED, TropScalar)

    def test_rejects_floats_and_bools(self):
        with pytest.raises(InvalidInput):
            TropScalar(1.5)
        with pytest.raises(InvalidInput):
            TropScalar(True)

    @given(scalars)
    def test_text_round_trip(self, a):
        assert TropScalar.parse(str(a)) == a


class TestOperations:
    def test_examples(self):
        assert TropScalar(2) + TropScalar(3) == TropScalar(3)
        assert TropScalar(2) * TropScalar(3) == TropScalar(5)
        assert div(TropScalar(5), TropScalar(3)) == TropScalar(2)
        assert NEG_INF + TropScalar(-7) == TropScalar(-7)
        assert NEG_INF * TropScalar(4) == NEG_INF
        assert root(TropScalar(3), 2) == TropScalar(Fraction(3, 2))
        assert power(TropScalar(3), -2) == TropScalar(-6)

    def test_division_by_bottom(self):
        with pytest.raises(DivisionByZeroElement):
            div(TropScalar(1), NEG_INF)

    def test_bottom_divided_is_bottom(self):
        assert div(NEG_INF, TropScalar(1)) == NEG_INF

    def test_negative_power_of_bottom(self):
        with pytest.raises(DivisionByZeroElement):
            power(NEG_INF, -1)
        assert power(NEG_INF, 0) == ZERO
        assert power(NEG_INF, 2) == NEG_INF

    @pytest.mark.parametrize("m", [0, -1, True])
    def test_root_order_must_be_positive(self, m):
        with pytest.raises(InvalidInput):
            root(TropScalar(1), m)

    def test_empty_aggregates(self):
        assert tsum([]) == NEG_INF
        assert tmin([]) is None


class TestAxioms:
    @given(scalars, scalars, scalars)
    def test_sum_is_commutative_associative_idempotent(self, a, b, c):
        assert a + b == b + a
        assert (a + b) + c == a + (b + c)
        assert a + a == a

    @given(scalars, scalars, scalars)
    def test_product_distributes(self, a, b, c):
        assert a * (b + c) == a * b + a * c
        assert (a * b) * c == a * (b * c)

    @given(scalars)
    def test_identities(self, a):
        assert a + NEG_INF == a
        assert a * ZERO == a
        assert a * NEG_INF == NEG_INF

    @given(finite_scalars, scalars)
    def test_division_inverts_product(self, b, a):
        assert div(a * b, b) == a
        assert b * b.inverse() == ZERO

    @given(scalars)
    def test_root_inverts_power(self, a):
        for m in (1, 2, 3):
            assert power(root(a, m), m) == a

    @given(scalars, scalars)
    def test_order_is_total_and_sum_is_max(self, a, b):
        assert (a <= b) or (b <= a)
        assert a + b == (b if a <= b else a)
        assert NEG_INF <= a

    @given(scalars, scalars)
    def test_square_of_a_sum(self, a, b):
        assert power(a + b, 2) == power(a, 2) + a * b + power(b, 2)

    @given(rationals, rationals)
    def test_midpoint_separates_strict_bounds(self, a, c):
        assume(a != c)
        low, high = min(a, c), max(a, c)
        b = TropScalar((low + high) / 2)
        assert TropScalar(low) < b < TropScalar(high)
        assert TropScalar(low) < TropScalar(low) * TropScalar(high - low)
