"""Truncated-series ring: exact arithmetic, truncation soundness, extraction."""

import warnings
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brzeta.errors import (
    AlphabetMismatchError,
    CompletenessWarning,
    NonUnitError,
    PseudoConvergenceError,
    SchemaError,
    TruncationBoundError,
)
from brzeta.series import (
    Alphabet,
    AlphabetEntry,
    TruncatedSeries,
    product_eval,
    slice_coefficient,
)

Z = Alphabet([("z", 2, 1)])
Z3 = Alphabet([("z1", 2, 1), ("z2", 3, 1), ("z3", 2, 2)])


def geom(scalar=1, bound=4, al=Z):
    return TruncatedSeries.geometric(al, bound, al.unit(0), scalar)


def poly(coeffs, bound=None, al=Z):
    bound = bound if bound is not None else len(coeffs) - 1
    return TruncatedSeries(al, bound, {(d,): c for d, c in enumerate(coeffs) if c})


class TestAlphabet:
    def test_norms_are_prime_powers_of_entries(self):
        assert Z3.mono_norm((1, 0, 0)) == 2
        assert Z3.mono_norm((0, 1, 0)) == 3
        assert Z3.mono_norm((0, 0, 1)) == 4
        assert Z3.mono_norm((2, 1, 1)) == 48

    def test_duplicate_labels_rejected(self):
        with pytest.raises(SchemaError):
            Alphabet([("z", 2, 1), ("z", 3, 1)])

    def test_small_residue_field_rejected(self):
        with pytest.raises(SchemaError):
            AlphabetEntry("z", 1, 1)
        with pytest.raises(SchemaError):
            AlphabetEntry("z", 2, 0)

    def test_json_roundtrip(self):
        assert Alphabet.from_json(Z3.to_json()) == Z3

    def test_format(self):
        assert Z3.format_monomial((0, 0, 0)) == "1"
        assert Z3.format_monomial((2, 1, 0)) == "z1^2*z2"


class TestArithmetic:
    def test_multiplicative_identity(self):
        f = poly([1, 2, 3])
        assert f * TruncatedSeries.one(Z, 2) == f

    def test_telescoping_truncates_remainder(self):
        one_minus = poly([1, -1], bound=3)
        partial = poly([1, 1, 1, 1])
        assert one_minus * partial == TruncatedSeries.one(Z, 3)

    def test_direct_convolution(self):
        lhs = poly([1, 1], bound=2) * poly([1, 0, 2])
        assert lhs == poly([1, 1, 2])

    def test_negative_bound_rejected(self):
        with pytest.raises(TruncationBoundError):
            TruncatedSeries(Z, -1, {})

    def test_mixed_bounds_rejected(self):
        with pytest.raises(TruncationBoundError):
            poly([1, 1]) * poly([1, 1, 1])

    def test_mixed_alphabets_rejected(self):
        with pytest.raises(AlphabetMismatchError):
            poly([1, 1]) + TruncatedSeries.one(Z3, 1)

    def test_equality_requires_equal_bounds(self):
        assert (poly([1], bound=1) == poly([1], bound=2)) is False
        assert poly([1], bound=1).agrees_with(poly([1], bound=2))

    def test_scalar_ops(self):
        f = poly([1, 1])
        assert f.scaled(Fraction(1, 2)).coefficient((1,)) == Fraction(1, 2)
        assert (f - f).is_zero()
        assert f**0 == TruncatedSeries.one(Z, 1)

    def test_power(self):
        assert poly([1, 1], bound=3) ** 3 == poly([1, 3, 3, 1])


class TestInvert:
    def test_geometric(self):
        assert poly([1, -1], bound=4).invert() == poly([1, 1, 1, 1, 1])

    def test_identity(self):
        one = TruncatedSeries.one(Z, 3)
        assert one.invert() == one

    def test_ratio_two(self):
        assert poly([1, -2], bound=3).invert() == poly([1, 2, 4, 8])

    def test_zero_constant_term_rejected(self):
        with pytest.raises(NonUnitError):
            poly([0, 1]).invert()


class TestSubstitute:
    def test_identity_map(self):
        f = poly([1, 2, 3])
        assert f.substitute(Z, {0: (1, (1,))}, 2) == f

    def test_direct_image(self):
        f = poly([1, 1], bound=2)
        assert f.substitute(Z, {0: (2, (2,))}, 2) == poly([1, 0, 2])

    def test_degree_tripling(self):
        f = poly([1, 1, 1], bound=6)
        image = f.substitute(Z, {0: (4, (3,))}, 6)
        assert image == TruncatedSeries(Z, 6, {(0,): 1, (3,): 4, (6,): 16})

    def test_degree_zero_target_rejected(self):
        with pytest.raises(TruncationBoundError):
            poly([1, 1]).substitute(Z, {0: (1, (0,))}, 1)

    def test_partial_map_rejected(self):
        f = TruncatedSeries.one(Z3, 2)
        with pytest.raises(SchemaError):
            f.substitute(Z3, {0: (1, (1, 0, 0))}, 2)

    def test_unsound_output_bound_rejected(self):
        # source bound 2 with doubling map certifies only degree < 6
        f = poly([1, 1, 1])
        with pytest.raises(TruncationBoundError):
            f.substitute(Z, {0: (1, (2,))}, 6)
        f.substitute(Z, {0: (1, (2,))}, 5)


class TestProductEval:
    def test_empty_is_one(self):
        assert product_eval(Z, 3, iter(())) == TruncatedSeries.one(Z, 3)

    def test_layered_geometric(self):
        # factors (1 - 2^n z^(n+1))^(-1), floor n+1
        def factors():
            for n in range(0, 6):
                yield n + 1, TruncatedSeries.geometric(Z, 3, (n + 1,), 2**n)

        assert product_eval(Z, 3, factors()) == poly([1, 1, 3, 7])

    def test_two_geometric_factors(self):
        factors = [(1, geom(1, 2)), (1, geom(2, 2))]
        assert product_eval(Z, 2, iter(factors)) == poly([1, 3, 7])

    def test_constant_term_must_be_one(self):
        with pytest.raises(PseudoConvergenceError):
            product_eval(Z, 2, iter([(1, poly([2, 1], bound=2))]))

    def test_floor_must_not_decrease(self):
        factors = [(2, geom(1, 2)), (1, geom(1, 2))]
        with pytest.raises(PseudoConvergenceError):
            product_eval(Z, 2, iter(factors))

    def test_declared_floor_must_hold(self):
        # factor with a degree-1 term declared to start at degree 2
        with pytest.raises(PseudoConvergenceError):
            product_eval(Z, 3, iter([(2, poly([1, 1], bound=3))]))


class TestDirichlet:
    def test_single_monomial_norm(self):
        assert poly([0, 0, 1], bound=2).dirichlet_coeffs(4) == {4: 1}

    def test_constant(self):
        assert TruncatedSeries.one(Z, 0).dirichlet_coeffs(1) == {1: 1}

    def test_lustig_style_series(self):
        table = poly([1, 1, 3, 7]).dirichlet_coeffs(8)
        assert table == {1: 1, 2: 1, 4: 3, 8: 7}

    def test_incompleteness_warns(self):
        with pytest.warns(CompletenessWarning):
            poly([1, 1]).dirichlet_coeffs(4)

    def test_complete_bound_does_not_warn(self):
        with warnings.catch_warnings():
            warnings.simplefilter("error")
            poly([1, 1]).dirichlet_coeffs(2)


class TestSliceCoefficient:
    ZW = Alphabet([("z", 2, 1), ("w", 2, 1)])

    def test_trivial_slice(self):
        f = TruncatedSeries(self.ZW, 2, {(0, 0): 1, (1, 0): 5})
        sliced = slice_coefficient(f, (0, 0), 1)
        assert sliced.constant_term == 1
        assert sliced.coefficient((1,)) == 5

    def test_rank_one_dvr_slice(self):
        w_over_1mz = TruncatedSeries(
            self.ZW, 4, {(k, 1): 1 for k in range(4)}
        )
        sliced = slice_coefficient(w_over_1mz, (0, 1), 1)
        assert sliced == TruncatedSeries(Alphabet([("z", 2, 1)]), 3, {(k,): 1 for k in range(4)})

    def test_absent_monomial(self):
        f = TruncatedSeries(self.ZW, 2, {(0, 1): 1, (1, 1): 1})
        assert slice_coefficient(f, (0, 2), 1).is_zero()

    def test_monomial_must_live_in_second_block(self):
        f = TruncatedSeries(self.ZW, 2, {})
        with pytest.raises(SchemaError):
            slice_coefficient(f, (1, 0), 1)


class TestJson:
    def test_roundtrip(self):
        f = TruncatedSeries(Z3, 3, {(1, 1, 0): Fraction(5, 3), (0, 0, 1): -2})
        assert TruncatedSeries.from_json_dict(f.to_json_dict()) == f


small_series = st.builds(
    lambda coeffs: TruncatedSeries(Z3, 3, {m: c for m, c in coeffs.items()}),
    st.dictionaries(
        st.tuples(st.integers(0, 2), st.integers(0, 2), st.integers(0, 1)).filter(lambda m: sum(m) <= 3),
        st.fractions(min_value=-4, max_value=4, max_denominator=6),
        max_size=5,
    ),
)


@settings(max_examples=60, deadline=None)
@given(small_series, small_series, small_series)
def test_ring_axioms(f, g, h):
    assert (f + g) + h == f + (g + h)
    assert f + g == g + f
    assert f * g == g * f
    assert (f * g) * h == f * (g * h)
    assert f * (g + h) == f * g + f * h


@settings(max_examples=40, deadline=None)
@given(small_series)
def test_inverse_roundtrip(f):
    unit = f + TruncatedSeries.one(Z3, 3) - TruncatedSeries(Z3, 3, {(0, 0, 0): f.constant_term})
    assert unit.constant_term == 1
    assert unit * unit.invert() == TruncatedSeries.one(Z3, 3)


@settings(max_examples=40, deadline=None)
@given(small_series, small_series)
def test_substitute_is_multiplicative(f, g):
    mapping = {0: (2, (0, 1, 0)), 1: (1, (1, 0, 1)), 2: (Fraction(1, 3), (0, 0, 2))}
    lhs = (f * g).substitute(Z3, mapping, 3)
    rhs = f.substitute(Z3, mapping, 3) * g.substitute(Z3, mapping, 3)
    assert lhs == rhs


@settings(max_examples=40, deadline=None)
@given(small_series, small_series, st.integers(0, 3))
def test_truncation_commutes_with_product(f, g, k):
    assert (f * g).truncated(k) == f.truncated(k) * g.truncated(k)
