import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pdnet.network import (
    DimensionMismatchError,
    FlowPlan,
    NetworkInstance,
    evaluate_constraints,
    evaluate_cost,
    is_feasible,
    validate_instance,
)

from conftest import random_instance, random_plan, single_chain


def chain_plan(r=10.0, p=10.0, t=10.0):
    return FlowPlan([[r]], [[p]], [[t]])


class TestValidate:
    def test_well_formed_chain_is_clean(self):
        assert validate_instance(single_chain()).ok

    def test_negative_demand_names_field(self):
        inst = single_chain(d=-5.0)
        report = validate_instance(inst)
        assert not report.ok
        assert any("demand" in issue for issue in report.issues)

    def test_dimension_breach_reported(self):
        inst = NetworkInstance(
            num_suppliers=1,
            num_plants=2,
            num_dcs=4,
            num_retailers=1,
            supplier_capacity=[10],
            plant_capacity=[10, 10],
            dc_capacity=[10, 10, 10, 10],
            demand=[5],
            raw_unit_cost=[1],
            holding_unit_cost=[1, 1, 1, 1],
            plant_dc_unit_cost=[[1, 1, 1], [1, 1, 1]],  # 2x3, should be 2x4
            dc_retailer_unit_cost=[[1], [1], [1], [1]],
            utilization=1.0,
        )
        report = validate_instance(inst)
        assert any("plant_dc_unit_cost" in issue and "shape" in issue for issue in report.issues)

    def test_zero_utilization_flagged(self):
        report = validate_instance(single_chain(u=0.0))
        assert any("utilization" in issue for issue in report.issues)

    def test_never_raises_on_garbage(self):
        inst = single_chain(d=-1, c_s=-2)
        validate_instance(inst)  # report-style, must not abort


class TestCost:
    def test_zero_plan(self):
        b = evaluate_cost(single_chain(), chain_plan(0, 0, 0))
        assert b.total == 0.0
        assert (b.raw_cost, b.plant_to_dc_cost, b.holding_cost, b.dc_to_retailer_cost) == (0, 0, 0, 0)

    def test_worked_chain(self):
        # c_s=2, c_kj=3, h=1, r_ji=4, flows all 10 -> 20+30+10+40
        b = evaluate_cost(single_chain(), chain_plan())
        assert b.raw_cost == 20
        assert b.plant_to_dc_cost == 30
        assert b.holding_cost == 10
        assert b.dc_to_retailer_cost == 40
        assert b.total == 100

    def test_two_supplier_chain(self):
        inst = NetworkInstance(
            num_suppliers=2,
            num_plants=1,
            num_dcs=1,
            num_retailers=1,
            supplier_capacity=[20, 20],
            plant_capacity=[20],
            dc_capacity=[20],
            demand=[10],
            raw_unit_cost=[1, 2],
            holding_unit_cost=[1],
            plant_dc_unit_cost=[[2]],
            dc_retailer_unit_cost=[[3]],
            utilization=1.0,
        )
        plan = FlowPlan([[5], [5]], [[10]], [[10]])
        b = evaluate_cost(inst, plan)
        assert (b.raw_cost, b.plant_to_dc_cost, b.holding_cost, b.dc_to_retailer_cost) == (15, 20, 10, 30)
        assert b.total == 75

    def test_dimension_mismatch_names_matrix(self):
        inst = single_chain()
        with pytest.raises(DimensionMismatchError, match="plant_dc_flow"):
            evaluate_cost(inst, FlowPlan([[1.0]], [[1.0, 2.0]], [[1.0]]))


class TestConstraints:
    def test_storage_shortfall(self):
        inst = NetworkInstance(
            num_suppliers=1,
            num_plants=1,
            num_dcs=1,
            num_retailers=1,
            supplier_capacity=[20],
            plant_capacity=[20],
            dc_capacity=[10],
            demand=[12],
            raw_unit_cost=[2],
            holding_unit_cost=[1],
            plant_dc_unit_cost=[[3]],
            dc_retailer_unit_cost=[[4]],
            utilization=1.0,
        )
        rep = evaluate_constraints(inst, chain_plan(12, 12, 12))
        assert rep.residual_dc_storage == -2
        assert rep.total_violation >= 2

    def test_feasible_chain(self):
        rep = evaluate_constraints(single_chain(), chain_plan())
        assert rep.residual_dc_storage == 10
        assert rep.residual_production_vs_shipment == 0
        assert rep.demand_mismatch == pytest.approx([0])
        assert rep.total_violation == 0
        assert is_feasible(rep)

    def test_raw_shortfall_with_utilization(self):
        # u=2, production 10 needs 20 raw; only 15 supplied -> violation 5
        inst = single_chain(d=10, u=2.0, cap=40.0)
        rep = evaluate_constraints(inst, chain_plan(r=15, p=10, t=10))
        assert rep.residual_raw_per_plant == pytest.approx([-5])
        assert rep.total_violation == pytest.approx(5)
        assert not is_feasible(rep)

    def test_mismatch_within_tolerance_is_feasible(self):
        inst = single_chain()
        rep = evaluate_constraints(inst, chain_plan(10, 10, 10 + 1e-12), tolerance=1e-9)
        assert abs(rep.demand_mismatch[0]) > 0
        assert rep.total_violation == 0
        assert is_feasible(rep)

    def test_strict_per_dc_mode(self):
        inst = NetworkInstance(
            num_suppliers=1,
            num_plants=1,
            num_dcs=2,
            num_retailers=1,
            supplier_capacity=[100],
            plant_capacity=[100],
            dc_capacity=[10, 10],
            demand=[12],
            raw_unit_cost=[1],
            holding_unit_cost=[1, 1],
            plant_dc_unit_cost=[[1, 1]],
            dc_retailer_unit_cost=[[1], [1]],
            utilization=1.0,
            strict_per_dc=True,
        )
        # all 12 cases pile into DC 1: fine in aggregate, breach per-DC
        plan = FlowPlan([[12]], [[12, 0]], [[12], [0]])
        rep = evaluate_constraints(inst, plan)
        assert rep.residual_dc_capacity is not None
        assert rep.residual_dc_capacity[0] == -2
        assert rep.total_violation > 0
        loose = NetworkInstance(
            **{
                **{f: getattr(inst, f) for f in (
                    "num_suppliers", "num_plants", "num_dcs", "num_retailers",
                    "supplier_capacity", "plant_capacity", "dc_capacity", "demand",
                    "raw_unit_cost", "holding_unit_cost", "plant_dc_unit_cost",
                    "dc_retailer_unit_cost", "utilization",
                )},
                "strict_per_dc": False,
            }
        )
        rep2 = evaluate_constraints(loose, plan)
        assert rep2.residual_dc_capacity is None
        assert rep2.total_violation == 0


class TestProperties:
    @given(st.integers(0, 10**9), st.floats(0.0, 7.5))
    @settings(max_examples=60, deadline=None)
    def test_cost_linearity(self, seed, alpha):
        rng = np.random.default_rng(seed)
        inst = random_instance(rng)
        plan = random_plan(rng, inst)
        base = evaluate_cost(inst, plan).total
        scaled = evaluate_cost(inst, plan.scaled(alpha)).total
        assert scaled == pytest.approx(alpha * base, rel=1e-12, abs=1e-9)

    @given(st.integers(0, 10**9))
    @settings(max_examples=60, deadline=None)
    def test_cost_additivity(self, seed):
        rng = np.random.default_rng(seed)
        inst = random_instance(rng)
        a, b = random_plan(rng, inst), random_plan(rng, inst)
        total = evaluate_cost(inst, a + b).total
        assert total == pytest.approx(
            evaluate_cost(inst, a).total + evaluate_cost(inst, b).total, rel=1e-12
        )

    @given(st.integers(0, 10**9), st.floats(0.01, 10.0))
    @settings(max_examples=60, deadline=None)
    def test_cost_monotone_in_unit_costs(self, seed, bump):
        rng = np.random.default_rng(seed)
        inst = random_instance(rng)
        plan = random_plan(rng, inst)
        base = evaluate_cost(inst, plan).total
        for name in ("raw_unit_cost", "holding_unit_cost", "plant_dc_unit_cost", "dc_retailer_unit_cost"):
            arr = np.array(getattr(inst, name), copy=True)
            idx = tuple(rng.integers(0, dim) for dim in arr.shape)
            arr[idx] += bump
            fields = {
                f: getattr(inst, f)
                for f in (
                    "num_suppliers", "num_plants", "num_dcs", "num_retailers",
                    "supplier_capacity", "plant_capacity", "dc_capacity", "demand",
                    "raw_unit_cost", "holding_unit_cost", "plant_dc_unit_cost",
                    "dc_retailer_unit_cost", "utilization",
                )
            }
            fields[name] = arr
            assert evaluate_cost(NetworkInstance(**fields), plan).total >= base - 1e-12

    @given(st.integers(0, 10**9))
    @settings(max_examples=60, deadline=None)
    def test_residuals_affine_in_plan(self, seed):
        rng = np.random.default_rng(seed)
        inst = random_instance(rng)
        plan = random_plan(rng, inst)
        r1 = evaluate_constraints(inst, plan)
        r2 = evaluate_constraints(inst, plan.scaled(2.0))
        zero = evaluate_constraints(inst, plan.scaled(0.0))
        # residual(2x) - residual(0) == 2 * (residual(x) - residual(0))
        for name in (
            "residual_production_vs_shipment",
            "demand_mismatch",
            "residual_raw_per_plant",
            "residual_plant_capacity",
            "residual_supplier_capacity",
        ):
            a = np.asarray(getattr(r1, name)) - np.asarray(getattr(zero, name))
            b = np.asarray(getattr(r2, name)) - np.asarray(getattr(zero, name))
            assert np.allclose(b, 2.0 * a, rtol=1e-9, atol=1e-9)

    @given(st.integers(0, 10**9))
    @settings(max_examples=40, deadline=None)
    def test_evaluation_is_pure(self, seed):
        rng = np.random.default_rng(seed)
        inst = random_instance(rng)
        plan = random_plan(rng, inst)
        c1, c2 = evaluate_cost(inst, plan), evaluate_cost(inst, plan)
        assert c1 == c2
        v1 = evaluate_constraints(inst, plan)
        v2 = evaluate_constraints(inst, plan)
        assert v1.total_violation == v2.total_violation
        assert np.array_equal(v1.demand_mismatch, v2.demand_mismatch)

    @given(st.integers(0, 10**9))
    @settings(max_examples=40, deadline=None)
    def test_total_is_exact_sum_of_terms(self, seed):
        rng = np.random.default_rng(seed)
        inst = random_instance(rng)
        plan = random_plan(rng, inst)
        b = evaluate_cost(inst, plan)
        assert b.total == b.raw_cost + b.plant_to_dc_cost + b.holding_cost + b.dc_to_retailer_cost
