"""Two-variable lattice counts over chain-form orders and their factorization."""

from fractions import Fraction

import pytest

from brzeta import hereditary as her
from brzeta.errors import SchemaError
from brzeta.qcomb import gaussian_binomial
from brzeta.series import TruncatedSeries


ORDER22 = her.HereditaryOrderSpec(2, 2)
MOD12 = her.HereditaryModuleSpec((1, 2))


class TestSpecs:
    def test_column_types_must_fit(self):
        with pytest.raises(SchemaError):
            her._validate_pair(her.HereditaryOrderSpec(2, 2), her.HereditaryModuleSpec((3,)))

    def test_top_vector(self):
        assert MOD12.top_vector(2) == (1, 1)
        assert her.HereditaryModuleSpec((2, 2)).top_vector(2) == (0, 2)

    def test_empty_columns_rejected(self):
        with pytest.raises(SchemaError):
            her.HereditaryModuleSpec(())

    def test_top_class_validation(self):
        with pytest.raises(SchemaError):
            her.TopClass((1, -1))


class TestSubstitutionData:
    def test_single_class(self):
        order = her.HereditaryOrderSpec(2, 1)
        module = her.HereditaryModuleSpec((1,))
        u, v, t = her.substitution_data(order, module)
        assert u == (0, 0) and v == (1, 0) and t == [(0, 1)]

    def test_mixed_columns(self):
        u, v, t = her.substitution_data(ORDER22, MOD12)
        assert u == (0, 1, 0, 0)  # one column of type < 2 shifts by z2
        assert v == (1, 1, 0, 0)
        assert t == [(0, 1, 1, 0), (0, 0, 0, 1)]

    def test_uniform_columns(self):
        u, v, t = her.substitution_data(ORDER22, her.HereditaryModuleSpec((2, 2)))
        assert u == (0, 0, 0, 0)
        assert v == (1, 1, 0, 0)
        assert t == [(0, 1, 1, 0), (0, 0, 0, 1)]


class TestFilteredDims:
    def test_full_space(self):
        from brzeta import gfq

        f = gfq.GF(2)
        full = gfq.full_space(f, 2)
        assert her.filtered_dims(ORDER22, MOD12, full).dims == (2, 1)

    def test_zero_space(self):
        from brzeta import gfq

        f = gfq.GF(2)
        zero = gfq.zero_space(f, 2)
        assert her.filtered_dims(ORDER22, MOD12, zero).dims == (2, 2)

    def test_coordinate_line(self):
        import numpy as np

        from brzeta import gfq

        f = gfq.GF(2)
        line = gfq.row_space(f, np.array([[1, 0]], dtype=np.int64))
        assert her.filtered_dims(ORDER22, MOD12, line).dims == (2, 1)


class TestHermite:
    def test_q_poly_endpoints(self):
        assert her.hermite_Q(0, 3, 2) == [0, 0, 0, 1]  # v^r
        assert her.hermite_Q(2, 2, 2) == [1, -3, 2]  # full Cauchy product
        assert her.hermite_Q(1, 2, 2) == [0, 1, -1]  # v(1-v)

    def test_partition_of_unity(self):
        for q in (2, 3, 4, 5):
            for r in range(0, 7):
                acc = [Fraction(0)] * (r + 1)
                for m in range(r + 1):
                    g = gaussian_binomial(r, m, q)
                    for d, c in enumerate(her.hermite_Q(m, r, q)):
                        acc[d] += g * c
                assert acc[0] == 1 and not any(acc[1:])

    def test_orbit_sum_closed_form(self):
        for q in (2, 3):
            for r in range(0, 5):
                for m in range(r + 1):
                    orbit = her.hermite_orbit_sum(m, r, q, 10)
                    al = orbit.alphabet
                    qpoly = her.poly_in_monomial(al, 10, her.hermite_Q(m, r, q), (1,))
                    assert orbit == qpoly * her.solomon_hey_factor(r, q, 10)

    def test_orbit_sum_values(self):
        full = her.hermite_orbit_sum(2, 2, 2, 3)
        assert full == TruncatedSeries.one(full.alphabet, 3)
        s = her.hermite_orbit_sum(0, 1, 2, 2)
        assert [s.coefficient((k,)) for k in range(3)] == [0, 1, 1]
        s = her.hermite_orbit_sum(1, 2, 2, 3)
        assert [s.coefficient((k,)) for k in range(4)] == [0, 1, 2, 4]


class TestSolomonHeyFactor:
    def test_rank_zero_and_one(self):
        one = her.solomon_hey_factor(0, 2, 2)
        assert one == TruncatedSeries.one(one.alphabet, 2)
        geo = her.solomon_hey_factor(1, 2, 3)
        assert [geo.coefficient((k,)) for k in range(4)] == [1, 1, 1, 1]

    def test_rank_two(self):
        f = her.solomon_hey_factor(2, 2, 2)
        assert [f.coefficient((k,)) for k in range(3)] == [1, 3, 7]


class TestTwoVariable:
    def test_rank_one_dvr_degeneration(self):
        order = her.HereditaryOrderSpec(2, 1)
        module = her.HereditaryModuleSpec((1,))
        joint = her.brz_two_variable(order, module, 3)
        # w/(1-z): every submodule is free of full rank
        for k in range(4):
            assert joint.coefficient((k, 1)) == 1
            assert joint.coefficient((k, 0)) == 0

    def test_rank_two_collapse(self):
        order = her.HereditaryOrderSpec(2, 1)
        module = her.HereditaryModuleSpec((1, 1))
        joint = her.brz_two_variable(order, module, 2)
        assert joint.coefficient((0, 2)) == 1
        assert joint.coefficient((1, 2)) == 3
        assert joint.coefficient((2, 2)) == 7
        assert all(exps[1] == 2 for exps, _ in joint.items())

    def test_mixed_columns_slice(self):
        sliced = her.partial_zeta(ORDER22, MOD12, her.TopClass((1, 1)), 6)
        # (1+2v) * solomon_hey_factor(2,2,v): 1, 5, 13, 29 in v = z1 z2
        expect = {0: 1, 1: 5, 2: 13, 3: 29}
        for k, c in expect.items():
            assert sliced.coefficient((k, k)) == c

    def test_w_support_is_rank(self):
        joint = her.brz_two_variable(ORDER22, MOD12, 3)
        assert all(exps[2] + exps[3] == 2 for exps, _ in joint.items())

    def test_total_is_sum_of_partials(self):
        total = her.total_zeta(ORDER22, MOD12, 3)
        acc = TruncatedSeries.zero(total.alphabet, 3)
        for rho in [(0, 2), (1, 1), (2, 0)]:
            acc = acc + her.partial_zeta(ORDER22, MOD12, her.TopClass(rho), 3)
        assert acc == total


class TestPolynomialFactor:
    def test_rank_one_is_monomial(self):
        order = her.HereditaryOrderSpec(2, 1)
        f = her.brs_F(order, her.HereditaryModuleSpec((1,)), 3)
        assert f == TruncatedSeries.monomial(f.alphabet, 3, (0, 1))

    def test_rank_two_free(self):
        order = her.HereditaryOrderSpec(2, 1)
        f = her.brs_F(order, her.HereditaryModuleSpec((1, 1)), 4)
        assert f == TruncatedSeries.monomial(f.alphabet, 4, (0, 2))

    def test_mixed_columns_value(self):
        f = her.brs_F(ORDER22, MOD12, 7)
        # w1 w2 slice of F must be 1 + 2 z1 z2
        assert f.coefficient((0, 0, 1, 1)) == 1
        assert f.coefficient((1, 1, 1, 1)) == 2

    def test_factorization_identity(self):
        joint = her.brz_two_variable(ORDER22, MOD12, 3)
        f = her.brs_F(ORDER22, MOD12, 10).truncated(joint.bound)
        zfac = her.solomon_hey_factor(2, 2, joint.bound, joint.alphabet, (1, 1, 0, 0))
        assert f * zfac == joint


class TestJson:
    def test_parse(self):
        order, module = her.hereditary_from_json({"q": 2, "n": 2, "columns": [1, 2]})
        assert (order.q, order.n, module.columns) == (2, 2, (1, 2))

    def test_bad_payload(self):
        with pytest.raises(SchemaError):
            her.hereditary_from_json({"q": 2})
        with pytest.raises(SchemaError):
            her.hereditary_from_json([1, 2])
