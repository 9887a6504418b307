"""q-combinatorics: Gaussian binomials, Moebius weights, partition counts."""

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from brzeta.qcomb import (
    cauchy_poly,
    euler_coeffs,
    gaussian_binomial,
    partition_count,
    subspace_moebius,
)


class TestGaussianBinomial:
    def test_lines_in_plane(self):
        assert gaussian_binomial(2, 1, 2) == 3

    def test_trivial_cases(self):
        assert gaussian_binomial(5, 0, 7) == 1
        assert gaussian_binomial(5, 5, 7) == 1
        assert gaussian_binomial(3, 4, 2) == 0

    def test_planes_in_four_space(self):
        assert gaussian_binomial(4, 2, 2) == 35

    def test_symmetry(self):
        for m in range(7):
            for d in range(m + 1):
                assert gaussian_binomial(m, d, 3) == gaussian_binomial(m, m - d, 3)

    @pytest.mark.parametrize("q", [2, 3, 5])
    def test_pascal_recursion(self, q):
        for m in range(1, 9):
            for d in range(1, m):
                lhs = gaussian_binomial(m, d, q)
                rhs = gaussian_binomial(m - 1, d - 1, q) + q**d * gaussian_binomial(m - 1, d, q)
                assert lhs == rhs


class TestSubspaceMoebius:
    def test_small_values(self):
        assert subspace_moebius(0, 2) == 1
        assert subspace_moebius(1, 2) == -1
        assert subspace_moebius(2, 2) == 2
        assert subspace_moebius(3, 2) == -8

    @pytest.mark.parametrize("q", [2, 3, 4])
    def test_inversion_identity(self, q):
        # sum over subspaces of the Moebius weight is zero unless V = 0
        for m in range(0, 6):
            total = sum(gaussian_binomial(m, d, q) * subspace_moebius(d, q) for d in range(m + 1))
            assert total == (1 if m == 0 else 0)


class TestCauchyPoly:
    def test_empty_product(self):
        assert cauchy_poly(0, 2) == [1]

    def test_single_factor(self):
        assert cauchy_poly(1, 5) == [1, -1]

    def test_two_factors(self):
        assert cauchy_poly(2, 2) == [1, -3, 2]

    @pytest.mark.parametrize("q", [2, 3, 4, 5])
    def test_matches_moebius_sum_form(self, q):
        for m in range(0, 7):
            coeffs = cauchy_poly(m, q)
            assert len(coeffs) == m + 1
            for d, c in enumerate(coeffs):
                assert c == gaussian_binomial(m, d, q) * subspace_moebius(d, q)


class TestPartitionCount:
    def test_base_cases(self):
        assert partition_count(1, 1) == 1
        assert partition_count(4, 2) == 2
        assert partition_count(6, 3) == 3

    def test_out_of_range(self):
        assert partition_count(2, 3) == 0

    def test_row_sums_are_partition_numbers(self):
        # p(6) = 11
        assert sum(partition_count(6, j) for j in range(1, 7)) == 11

    @given(st.integers(1, 20))
    @settings(max_examples=25, deadline=None)
    def test_conjugate_symmetry(self, i):
        # greatest part j  <->  exactly j parts, via direct recursive enumeration
        def exactly_parts(n, j, cap=None):
            cap = n if cap is None else cap
            if j == 0:
                return 1 if n == 0 else 0
            return sum(exactly_parts(n - first, j - 1, first) for first in range(1, min(n, cap) + 1))

        for j in range(1, i + 1):
            assert partition_count(i, j) == exactly_parts(i, j)


class TestEulerCoeffs:
    def test_constant(self):
        table = euler_coeffs(4)
        assert table[(0, 0)] == 1

    def test_small_entries(self):
        table = euler_coeffs(6)
        assert table[(3, 2)] == 1
        assert table[(4, 2)] == 2

    def test_matches_partition_count_everywhere(self):
        table = euler_coeffs(12)
        for i in range(1, 13):
            for j in range(1, i + 1):
                assert table.get((i, j), 0) == partition_count(i, j)
