"""Brute-force enumeration models: construction, counting, Hall numbers, fibers."""

import numpy as np
import pytest

import brzeta.hereditary as her
import brzeta.oracle as orc
import brzeta.prolif as pr
from brzeta.errors import ResourceBudgetError, SchemaError


class TestModelConstruction:
    def test_validate_returns_nilpotency_index(self):
        assert orc.validate_model(orc.chain_module(2, 3, rank=2)) == 3
        assert orc.validate_model(orc.local2d_module(3, 2)) == 2
        assert orc.validate_model(orc.triangular_module(2, 2, 2, (1, 2))) == 4
        assert orc.validate_model(orc.skew_module(2, 2, 2, 3)) == 6

    def test_chain_rejects_empty(self):
        with pytest.raises(SchemaError):
            orc.chain_module(2, 0)

    def test_local2d_rejects_zero_rank(self):
        with pytest.raises(SchemaError):
            orc.local2d_module(2, 2, rank=0)

    def test_triangular_rejects_column_beyond_size(self):
        with pytest.raises(SchemaError):
            orc.triangular_module(2, 2, 2, (1, 3))

    def test_triangular_rejects_no_columns(self):
        with pytest.raises(SchemaError):
            orc.triangular_module(2, 2, 2, ())

    def test_skew_rejects_zero_digit_length(self):
        with pytest.raises(SchemaError):
            orc.skew_module(2, 2, 2, 0)

    def test_rejects_non_prime_power_field(self):
        with pytest.raises(SchemaError):
            orc.chain_module(6, 2)


class TestModelFromJson:
    def test_chain_payload(self):
        m = orc.model_from_json({"kind": "chain", "q": 2, "c": 3, "rank": 2})
        assert m.kind == "chain"
        assert m.params["rank"] == 2
        assert m.dim == 6

    def test_local2d_rank_defaults_to_one(self):
        m = orc.model_from_json({"kind": "local2d", "q": 3, "c": 2})
        assert m.params["rank"] == 1

    def test_triangular_payload_matches_constructor(self):
        m = orc.model_from_json(
            {"kind": "triangular", "q": 2, "n": 2, "c": 2, "columns": [2, 1]}
        )
        direct = orc.triangular_module(2, 2, 2, (1, 2))
        assert m.params == direct.params
        assert orc.empirical_zeta(m, 2) == orc.empirical_zeta(direct, 2)

    def test_unknown_kind(self):
        with pytest.raises(SchemaError):
            orc.model_from_json({"kind": "nope"})

    def test_non_object_payload(self):
        with pytest.raises(SchemaError):
            orc.model_from_json([1, 2])

    def test_missing_parameter(self):
        with pytest.raises(SchemaError):
            orc.model_from_json({"kind": "chain", "c": 2})


class TestMaximalSubmodules:
    def test_free_rank_two_has_line_count_of_plane(self):
        m = orc.chain_module(2, 3, rank=2)
        out = orc.maximal_submodules(m, m.full())
        assert len(out) == 3
        assert {bi for _, bi in out} == {0}

    def test_two_class_top_gives_one_per_class(self):
        m = orc.triangular_module(2, 2, 2, (1, 2))
        out = orc.maximal_submodules(m, m.full())
        assert len(out) == 2
        assert {bi for _, bi in out} == {0, 1}


class TestSubmoduleCounts:
    def test_free_rank_two_over_dvr(self):
        z = orc.empirical_zeta(orc.chain_module(2, 3, rank=2), 2)
        assert [z.coefficient((k,)) for k in range(3)] == [1, 3, 7]

    def test_local_dimension_two_rank_one(self):
        z = orc.empirical_zeta(orc.local2d_module(2, 4), 3)
        assert [z.coefficient((k,)) for k in range(4)] == [1, 1, 3, 7]

    def test_local_dimension_two_rank_two(self):
        z = orc.empirical_zeta(orc.local2d_module(2, 3, rank=2), 2)
        assert [z.coefficient((k,)) for k in range(3)] == [1, 3, 19]

    def test_semisimple_plane(self):
        # F_2 x F_2 with the radical acting as zero: subspace counts.
        z = orc.empirical_zeta(orc.chain_module(2, 1, rank=2, exact=True), 2)
        assert [z.coefficient((k,)) for k in range(3)] == [1, 3, 1]

    def test_nodes_are_deduplicated(self):
        nodes = orc.submodule_bfs(orc.chain_module(2, 3, rank=2), 2)
        assert len(nodes) == 11
        assert len({n.rep for n in nodes}) == 11

    def test_truncation_depth_guard(self):
        with pytest.raises(SchemaError, match="cannot certify colength"):
            orc.submodule_bfs(orc.chain_module(2, 2), 5)

    def test_exact_model_skips_depth_guard(self):
        nodes = orc.submodule_bfs(orc.chain_module(2, 2, exact=True), 5)
        assert max(n.colength for n in nodes) == 2

    def test_node_budget(self):
        with pytest.raises(ResourceBudgetError):
            orc.submodule_bfs(orc.chain_module(2, 4, rank=2), 3, budget=5)


class TestJordanAndHall:
    def test_jordan_type_of_free_modules(self):
        m = orc.chain_module(2, 2, rank=2, exact=True)
        assert orc.jordan_type(m, m.full()) == (2, 2)
        m3 = orc.chain_module(2, 3)
        assert orc.jordan_type(m3, m3.full()) == (3,)

    def test_jordan_type_of_radical_and_quotient(self):
        m3 = orc.chain_module(2, 3)
        rad = orc.radical_subspace(m3, m3.full())
        assert orc.jordan_type(m3, rad) == (2,)
        assert orc.jordan_type(m3, m3.full(), lower=rad) == (1,)

    def test_jordan_needs_t_action(self):
        m = orc.triangular_module(2, 2, 1, (1,))
        with pytest.raises(SchemaError):
            orc.jordan_type(m, m.full())

    def test_hall_numbers_in_square_type(self):
        m = orc.chain_module(2, 2, rank=2, exact=True)
        full = m.full()
        assert orc.hall_number(m, full, (1,), (2, 1)) == 3
        assert orc.hall_number(m, full, (2,), (1, 1)) == 0
        assert orc.hall_number(m, full, (1, 1), (1, 1)) == 1
        assert orc.hall_number(m, full, (1, 1), (2,)) == 0
        assert orc.hall_number(m, full, (2,), (2,)) == 6

    def test_hall_length_mismatch_is_zero(self):
        m = orc.chain_module(2, 2, rank=2, exact=True)
        assert orc.hall_number(m, m.full(), (1,), (1,)) == 0

    def test_chain_count_equals_stepwise_product(self):
        m = orc.chain_module(2, 2, rank=2, exact=True)
        full = m.full()
        steps = [((2, 1), (1,)), ((1, 1), (1,))]
        assert orc.chain_type_count(m, full, steps) == 3
        first = [
            n
            for n in orc.submodule_bfs(m, 1)
            if n.colength == 1 and orc.jordan_type(m, n.rep) == (2, 1)
        ]
        assert len(first) == orc.hall_number(m, full, (1,), (2, 1))
        per = {orc.hall_number(m, n.rep, (1,), (1, 1)) for n in first}
        assert per == {1}

    def test_empty_chain_spec_counts_one(self):
        m = orc.chain_module(2, 2, rank=2, exact=True)
        assert orc.chain_type_count(m, m.full(), []) == 1


class TestTwoVariableAgreement:
    def test_joint_matches_closed_form_n2(self):
        model = orc.triangular_module(2, 2, 2, (1, 2))
        got = orc.empirical_zeta(model, 3, joint=True)
        want = her.brz_two_variable(
            her.HereditaryOrderSpec(2, 2), her.HereditaryModuleSpec((1, 2)), 3
        )
        assert got == want
        assert got.bound == 5  # colength bound + generic length

    def test_joint_matches_closed_form_n3(self):
        model = orc.triangular_module(2, 3, 1, (1, 2, 3))
        got = orc.empirical_zeta(model, 2, joint=True)
        want = her.brz_two_variable(
            her.HereditaryOrderSpec(2, 3), her.HereditaryModuleSpec((1, 2, 3)), 2
        )
        assert got == want

    def test_partial_matches_closed_form(self):
        model = orc.triangular_module(2, 2, 2, (1, 2))
        got = orc.empirical_zeta(model, 3, partial=(1, 1))
        want = her.partial_zeta(
            her.HereditaryOrderSpec(2, 2), her.HereditaryModuleSpec((1, 2)), (1, 1), 3
        )
        assert got == want
        assert got.coefficient((1, 1)) == 5

    def test_partial_top_width_must_match(self):
        model = orc.triangular_module(2, 2, 2, (1, 2))
        with pytest.raises(SchemaError):
            orc.empirical_zeta(model, 2, partial=(1,))


def test_skew_model_matches_proliferation():
    model = orc.skew_module(2, 2, 2, 4)
    got = orc.empirical_zeta(model, 3)
    base = pr.SliceBase.hereditary(
        her.HereditaryOrderSpec(2, 2), her.HereditaryModuleSpec((1, 2))
    )
    assert got == pr.proliferation_sum(base, 3)
    mons = [
        (0, 0), (1, 0), (0, 1),
        (2, 0), (1, 1), (0, 2),
        (3, 0), (2, 1), (1, 2), (0, 3),
    ]
    assert [got.coefficient(e) for e in mons] == [1, 1, 1, 1, 5, 1, 1, 9, 9, 1]


class TestFiberCharts:
    def test_charts_need_designated_generator(self):
        with pytest.raises(SchemaError):
            orc.FiberContext(orc.chain_module(2, 3))

    def test_partition_covers_lattice_and_matches_closed_form(self):
        model = orc.local2d_module(2, 4)
        base = pr.SliceBase.dvr(2, 1)
        parts = orc.fiber_partition(model, 3)
        assert len(parts) == 7
        assert sum(len(v) for v in parts.values()) == len(orc.submodule_bfs(model, 3)) == 12
        for chain, nodes in parts.items():
            got = orc.fiber_sum(model, nodes, 3)
            assert got == pr.fundamental_fiber_product(base, chain, 3), chain

    def test_two_generator_fibers(self):
        model = orc.local2d_module(2, 4)
        e0 = np.zeros((1, model.dim), dtype=np.int64)
        e0[0, 0] = 1
        assert orc.module_closure(model, e0) == model.full()
        u, t = model.gens["u"], model.gens["t"]
        ut = orc.module_closure(model, np.vstack([e0 @ u, e0 @ t]) % 2)
        ut2 = orc.module_closure(model, np.vstack([e0 @ u, e0 @ t @ t]) % 2)
        assert orc.composition_class(model, model.full(), ut) == (1,)
        assert orc.composition_class(model, model.full(), ut2) == (2,)
        ctx = orc.FiberContext(model)
        ch1, ch2 = ctx.chart(ut, 3), ctx.chart(ut2, 3)
        assert ch1.y_tops == ch2.y_tops == ((1,), (1,))
        assert (ch1.quotients, ch2.quotients) == (((1,),), ((2,),))
        f1 = orc.fiber_enumerate(model, ch1, 3)
        f2 = orc.fiber_enumerate(model, ch2, 3)
        assert [n.cls for n in f1] == [(1,)]
        assert [n.cls for n in f2] == [(2,)]
        assert f1[0].rep == ut and f2[0].rep == ut2
