"""Finite-field linear algebra: fields, echelon forms, subspace enumeration."""

import os
import subprocess
import sys

import numpy as np
import pytest

from brzeta import _kernels, gfq
from brzeta.errors import ResourceBudgetError, SchemaError
from brzeta.qcomb import gaussian_binomial


class TestFieldConstruction:
    @pytest.mark.parametrize("q", [2, 3, 4, 5, 8, 9])
    def test_prime_power_fields_validate(self, q):
        gfq.validate_field(gfq.GF(q))

    @pytest.mark.parametrize("q", [1, 6, 10, 12])
    def test_non_prime_powers_rejected(self, q):
        with pytest.raises(SchemaError):
            gfq.GF(q)

    def test_tables_shapes(self):
        t = gfq.tables(gfq.GF(4))
        assert t.add.shape == (4, 4) and t.mul.shape == (4, 4)
        assert t.inv[1] == 1


class TestRref:
    def test_idempotent(self):
        f = gfq.GF(3)
        mat = np.array([[1, 2, 0], [2, 1, 1], [0, 0, 2]], dtype=np.int64)
        r1, rank1, _ = gfq.rref(f, mat)
        r2, rank2, _ = gfq.rref(f, r1)
        assert rank1 == rank2
        assert np.array_equal(r1[:rank1], r2[:rank2])

    def test_rank_nullity(self):
        f = gfq.GF(2)
        rng = np.random.default_rng(7)
        for _ in range(20):
            mat = rng.integers(0, 2, size=(4, 6)).astype(np.int64)
            _, rank, _ = gfq.rref(f, mat)
            ker = gfq.left_kernel(f, mat.T)  # vectors v with v @ mat.T = 0
            assert ker.dim == 6 - rank

    def test_left_kernel_annihilates(self):
        f = gfq.GF(4)
        rng = np.random.default_rng(11)
        mat = rng.integers(0, 4, size=(5, 3)).astype(np.int64)
        ker = gfq.left_kernel(f, mat)
        prod = gfq.mat_mul(f, ker.rows, mat)
        assert not prod.any()


class TestSubspaces:
    @pytest.mark.parametrize("m,expected", [(1, 2), (2, 5), (3, 16)])
    def test_total_counts_f2(self, m, expected):
        subs = list(gfq.enumerate_subspaces(gfq.GF(2), m))
        assert len(subs) == expected

    @pytest.mark.parametrize("q", [2, 3])
    def test_dimension_counts_match_gaussian(self, q):
        for m in range(0, 5):
            subs = list(gfq.enumerate_subspaces(gfq.GF(q), m))
            for d in range(m + 1):
                got = sum(1 for s in subs if s.dim == d)
                assert got == gaussian_binomial(m, d, q)

    def test_enumeration_deduplicates(self):
        subs = list(gfq.enumerate_subspaces(gfq.GF(2), 3))
        keys = {s.rows.tobytes() for s in subs}
        assert len(keys) == len(subs)

    def test_budget_enforced(self):
        with pytest.raises(ResourceBudgetError):
            list(gfq.enumerate_subspaces(gfq.GF(3), 9, budget=10))

    def test_lattice_ops_modular_law(self):
        f = gfq.GF(2)
        a = gfq.row_space(f, np.array([[1, 0, 0]], dtype=np.int64))
        b = gfq.row_space(f, np.array([[1, 0, 0], [0, 1, 0]], dtype=np.int64))
        pair = gfq.lattice_ops(a, b)
        assert pair.meet.dim == 1 and pair.join.dim == 2

    def test_dimension_formula(self):
        f = gfq.GF(2)
        rng = np.random.default_rng(3)
        for _ in range(15):
            a = gfq.row_space(f, rng.integers(0, 2, size=(2, 4)).astype(np.int64))
            b = gfq.row_space(f, rng.integers(0, 2, size=(2, 4)).astype(np.int64))
            pair = gfq.lattice_ops(a, b)
            assert a.dim + b.dim == pair.meet.dim + pair.join.dim


class TestQuotientSpace:
    def test_project_lift_roundtrip(self):
        f = gfq.GF(2)
        lower = gfq.row_space(f, np.array([[0, 0, 1, 0]], dtype=np.int64))
        quo = gfq.QuotientSpace(f, lower)
        assert quo.dim == 3
        vec = np.array([[1, 1, 0, 0]], dtype=np.int64)
        down = quo.project(vec)
        back = quo.project(gfq.mat_mul(f, down, quo.lift_rows))
        assert np.array_equal(down, back)

    def test_membership_projection(self):
        f = gfq.GF(2)
        lower = gfq.row_space(f, np.array([[1, 1, 0]], dtype=np.int64))
        quo = gfq.QuotientSpace(f, lower)
        assert not quo.project(np.array([[1, 1, 0]], dtype=np.int64)).any()


class TestChains:
    def test_single_layer_has_one_chain(self):
        v = gfq.FilteredSpace((3,))
        chains = list(gfq.enumerate_chains(gfq.GF(2), v))
        assert len(chains) == 1
        assert gfq.chain_degree_vector(v, chains[0]) == (3,)

    def test_two_layer_full(self):
        v = gfq.FilteredSpace((2, 2))
        chains = list(gfq.enumerate_chains(gfq.GF(2), v))
        degs = sorted(gfq.chain_degree_vector(v, c) for c in chains)
        assert degs == [(0, 2), (1, 1), (1, 1), (1, 1), (2, 0)]

    def test_two_layer_restricted(self):
        v = gfq.FilteredSpace((2, 1))
        chains = list(gfq.enumerate_chains(gfq.GF(2), v))
        degs = sorted(gfq.chain_degree_vector(v, c) for c in chains)
        assert degs == [(1, 1), (2, 0)]

    @pytest.mark.parametrize("q", [2, 3])
    def test_count_matches_closed_form(self, q):
        for dims in [(2, 2), (3, 1), (3, 2), (2, 2, 1)]:
            v = gfq.FilteredSpace(dims)
            got = len(list(gfq.enumerate_chains(gfq.GF(q), v)))
            assert got == gfq.count_chains(q, v)


class TestBackends:
    def test_backend_reports_a_name(self):
        assert _kernels.BACKEND in ("numba", "numpy")

    def test_numpy_and_numba_kernels_agree_in_process(self):
        if not _kernels.HAS_NUMBA:
            pytest.skip("numba not importable")
        f = gfq.GF(4)
        t = gfq.tables(f)
        rng = np.random.default_rng(5)
        for _ in range(10):
            mat = rng.integers(0, 4, size=(5, 7)).astype(np.int64)
            a1, a2 = mat.copy(), mat.copy()
            p1 = np.zeros(7, dtype=np.int64)
            p2 = np.zeros(7, dtype=np.int64)
            rank1 = _kernels.numba_rref(a1, t.add, t.mul, t.neg, t.inv, p1)
            rank2 = _kernels.numpy_rref(a2, t.add, t.mul, t.neg, t.inv, p2)
            assert rank1 == rank2
            assert np.array_equal(a1, a2)
            assert np.array_equal(p1[:rank1], p2[:rank2])
            b = rng.integers(0, 4, size=(7, 4)).astype(np.int64)
            assert np.array_equal(
                _kernels.numba_matmul(mat, b, t.add, t.mul),
                _kernels.numpy_matmul(mat, b, t.add, t.mul),
            )

    @pytest.mark.parametrize("backend", ["numpy", "numba"])
    def test_backend_selection_subprocess(self, backend):
        env = dict(os.environ, BRZETA_BACKEND=backend)
        code = (
            "from brzeta import _kernels, gfq, hey\n"
            "assert _kernels.BACKEND == %r, _kernels.BACKEND\n"
            "d = hey.SemisimpleData.from_specs([(2, 2)])\n"
            "print(hey.hey_product(d, 3))\n" % backend
        )
        proc = subprocess.run(
            [sys.executable, "-c", code], capture_output=True, text=True, env=env
        )
        if backend == "numba" and proc.returncode and "ImportError" in proc.stderr:
            pytest.skip("numba not importable")
        assert proc.returncode == 0, proc.stderr
        assert proc.stdout.strip() == "1 + 3*z + 7*z^2 + 15*z^3"
