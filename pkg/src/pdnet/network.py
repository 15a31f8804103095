"""Four-echelon production-distribution network: data model and evaluation.

Echelons are suppliers -> plants -> distribution centers (DCs) -> retailers.
A :class:`NetworkInstance` holds capacities, demands and unit costs; a
:class:`FlowPlan` holds the three flow matrices (raw material, plant-to-DC,
DC-to-retailer).  Evaluation is pure: total cost decomposes into four linear
terms and constraint checks produce signed residuals (positive = slack,
negative = breach).
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

DEFAULT_TOLERANCE = 1e-9


class DimensionMismatchError(ValueError):
    """A flow matrix or cost matrix does not match the instance counts."""


def _as_array(x, ndim):
    a = np.asarray(x, dtype=np.float64)
    if a.ndim != ndim:
        # keep as-is; validate_instance reports the breach instead of raising
        pass
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class NetworkInstance:
    """One problem: counts, capacities, demands, unit costs, utilization.

    ``utilization`` is the raw-material quantity consumed per case produced.
    ``strict_per_dc`` switches the DC storage/throughput checks from
    network-aggregate inequalities to per-DC ones.
    """

    num_suppliers: int
    num_plants: int
    num_dcs: int
    num_retailers: int
    supplier_capacity: np.ndarray
    plant_capacity: np.ndarray
    dc_capacity: np.ndarray
    demand: np.ndarray
    raw_unit_cost: np.ndarray
    holding_unit_cost: np.ndarray
    plant_dc_unit_cost: np.ndarray
    dc_retailer_unit_cost: np.ndarray
    utilization: float
    strict_per_dc: bool = False

    def __post_init__(self):
        for name, nd in [
            ("supplier_capacity", 1),
            ("plant_capacity", 1),
            ("dc_capacity", 1),
            ("demand", 1),
            ("raw_unit_cost", 1),
            ("holding_unit_cost", 1),
            ("plant_dc_unit_cost", 2),
            ("dc_retailer_unit_cost", 2),
        ]:
            object.__setattr__(self, name, _as_array(getattr(self, name), nd))
        object.__setattr__(self, "utilization", float(self.utilization))

    def __eq__(self, other):
        if not isinstance(other, NetworkInstance):
            return NotImplemented
        if (
            (self.num_suppliers, self.num_plants, self.num_dcs, self.num_retailers)
            != (other.num_suppliers, other.num_plants, other.num_dcs, other.num_retailers)
            or self.utilization != other.utilization
            or self.strict_per_dc != other.strict_per_dc
        ):
            return False
        return all(
            np.array_equal(getattr(self, n), getattr(other, n))
            for n in (
                "supplier_capacity",
                "plant_capacity",
                "dc_capacity",
                "demand",
                "raw_unit_cost",
                "holding_unit_cost",
                "plant_dc_unit_cost",
                "dc_retailer_unit_cost",
            )
        )

    @property
    def counts(self):
        return (self.num_suppliers, self.num_plants, self.num_dcs, self.num_retailers)

    @property
    def num_genes(self):
        s, k, j, i = self.counts
        return s * k + k * j + j * i


@dataclass(frozen=True)
class FlowPlan:
    """Decision variables: raw S x K, plant-DC K x J, DC-retailer J x I."""

    raw_flow: np.ndarray
    plant_dc_flow: np.ndarray
    dc_retailer_flow: np.ndarray

    def __post_init__(self):
        for name in ("raw_flow", "plant_dc_flow", "dc_retailer_flow"):
            object.__setattr__(self, name, _as_array(getattr(self, name), 2))

    def __eq__(self, other):
        if not isinstance(other, FlowPlan):
            return NotImplemented
        return (
            np.array_equal(self.raw_flow, other.raw_flow)
            and np.array_equal(self.plant_dc_flow, other.plant_dc_flow)
            and np.array_equal(self.dc_retailer_flow, other.dc_retailer_flow)
        )

    def scaled(self, alpha: float) -> "FlowPlan":
        return FlowPlan(
            alpha * self.raw_flow, alpha * self.plant_dc_flow, alpha * self.dc_retailer_flow
        )

    def __add__(self, other: "FlowPlan") -> "FlowPlan":
        return FlowPlan(
            self.raw_flow + other.raw_flow,
            self.plant_dc_flow + other.plant_dc_flow,
            self.dc_retailer_flow + other.dc_retailer_flow,
        )


@dataclass(frozen=True)
class CostBreakdown:
    raw_cost: float
    plant_to_dc_cost: float
    holding_cost: float
    dc_to_retailer_cost: float
    total: float


@dataclass(frozen=True)
class ConstraintReport:
    """Signed slacks for every constraint plus the aggregated violation.

    Positive residual = slack, negative = breach.  ``demand_mismatch`` is an
    equality residual (shipments minus demand per retailer).  The per-DC
    residual fields are populated only when the instance runs in
    ``strict_per_dc`` mode.
    """

    residual_dc_storage: float
    residual_production_vs_shipment: float
    demand_mismatch: np.ndarray
    residual_raw_per_plant: np.ndarray
    residual_plant_capacity: np.ndarray
    residual_supplier_capacity: np.ndarray
    total_violation: float
    residual_dc_capacity: Optional[np.ndarray] = None
    residual_dc_throughput: Optional[np.ndarray] = None


@dataclass
class ValidationReport:
    issues: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.issues


def validate_instance(instance: NetworkInstance) -> ValidationReport:
    """Report every invariant breach; an empty report means the instance is usable."""
    rep = ValidationReport()
    s, k, j, i = instance.counts
    for name, n in [("num_suppliers", s), ("num_plants", k), ("num_dcs", j), ("num_retailers", i)]:
        if not isinstance(n, (int, np.integer)) or n < 1:
            rep.issues.append(f"{name} must be an integer >= 1, got {n!r}")
    expected = {
        "supplier_capacity": (s,),
        "plant_capacity": (k,),
        "dc_capacity": (j,),
        "demand": (i,),
        "raw_unit_cost": (s,),
        "holding_unit_cost": (j,),
        "plant_dc_unit_cost": (k, j),
        "dc_retailer_unit_cost": (j, i),
    }
    for name, shape in expected.items():
        arr = getattr(instance, name)
        if arr.shape != shape:
            rep.issues.append(f"{name} has shape {arr.shape}, expected {shape}")
            continue
        if arr.size and np.min(arr) < 0:
            rep.issues.append(f"{name} contains negative entries")
        if arr.size and not np.all(np.isfinite(arr)):
            rep.issues.append(f"{name} contains non-finite entries")
    if not instance.utilization > 0:
        rep.issues.append(f"utilization must be > 0, got {instance.utilization}")
    elif not np.isfinite(instance.utilization):
        rep.issues.append("utilization must be finite")
    return rep


def _check_plan_shapes(instance: NetworkInstance, plan: FlowPlan):
    s, k, j, i = instance.counts
    for name, arr, shape in [
        ("raw_flow", plan.raw_flow, (s, k)),
        ("plant_dc_flow", plan.plant_dc_flow, (k, j)),
        ("dc_retailer_flow", plan.dc_retailer_flow, (j, i)),
    ]:
        if arr.shape != shape:
            raise DimensionMismatchError(
                f"{name} has shape {arr.shape}, expected {shape} for this instance"
            )


# ---------------------------------------------------------------------------
# Batched evaluation cores.  The scalar API wraps these with a leading axis of
# one so single-plan and population evaluation share one code path exactly.
# ---------------------------------------------------------------------------

def batch_cost_terms(instance: NetworkInstance, r, p, t):
    """Cost terms for stacked flows r:(n,S,K), p:(n,K,J), t:(n,J,I)."""
    raw = np.einsum("s,nsk->n", instance.raw_unit_cost, r)
    plant_dc = np.einsum("kj,nkj->n", instance.plant_dc_unit_cost, p)
    holding = np.einsum("j,nj->n", instance.holding_unit_cost, p.sum(axis=1))
    dc_retailer = np.einsum("ji,nji->n", instance.dc_retailer_unit_cost, t)
    total = raw + plant_dc + holding + dc_retailer
    return raw, plant_dc, holding, dc_retailer, total


def batch_residuals(instance: NetworkInstance, r, p, t):
    """All signed constraint residuals for stacked flows (dict of arrays)."""
    u = instance.utilization
    prod_per_plant = p.sum(axis=2)  # (n, K)
    res = {
        "dc_storage": np.broadcast_to(
            np.float64(instance.dc_capacity.sum() - instance.demand.sum()), (r.shape[0],)
        ),
        "production_vs_shipment": p.sum(axis=(1, 2)) - t.sum(axis=(1, 2)),
        "demand_mismatch": t.sum(axis=1) - instance.demand[None, :],
        "raw_per_plant": r.sum(axis=1) - u * prod_per_plant,
        "plant_capacity": instance.plant_capacity[None, :] - u * prod_per_plant,
        "supplier_capacity": instance.supplier_capacity[None, :] - r.sum(axis=2),
        "_shipped_total": t.sum(axis=(1, 2)),
    }
    if instance.strict_per_dc:
        arrivals = p.sum(axis=1)  # (n, J)
        res["dc_capacity"] = instance.dc_capacity[None, :] - arrivals
        res["dc_throughput"] = arrivals - t.sum(axis=2)
    return res


def _neg_beyond(residual, scale, tolerance):
    """Magnitude of the breach where residual < -tolerance * max(1, scale)."""
    thr = tolerance * np.maximum(1.0, np.abs(scale))
    return np.where(residual < -thr, -residual, 0.0)


def batch_total_violation(instance: NetworkInstance, res, tolerance):
    """Aggregate residuals into one nonnegative violation per sample."""
    demand_scale = instance.demand[None, :]
    prod_scale = instance.plant_capacity[None, :] - res["plant_capacity"]  # = u * production
    total = _neg_beyond(res["dc_storage"], instance.demand.sum(), tolerance)
    total = total + _neg_beyond(res["production_vs_shipment"], res["_shipped_total"], tolerance)
    mism = res["demand_mismatch"]
    thr = tolerance * np.maximum(1.0, np.abs(demand_scale))
    total = total + np.where(np.abs(mism) > thr, np.abs(mism), 0.0).sum(axis=1)
    total = total + _neg_beyond(res["raw_per_plant"], prod_scale, tolerance).sum(axis=1)
    total = total + _neg_beyond(
        res["plant_capacity"], instance.plant_capacity[None, :], tolerance
    ).sum(axis=1)
    total = total + _neg_beyond(
        res["supplier_capacity"], instance.supplier_capacity[None, :], tolerance
    ).sum(axis=1)
    if instance.strict_per_dc:
        arrivals = instance.dc_capacity[None, :] - res["dc_capacity"]
        total = total + _neg_beyond(res["dc_capacity"], instance.dc_capacity[None, :], tolerance).sum(axis=1)
        total = total + _neg_beyond(res["dc_throughput"], arrivals, tolerance).sum(axis=1)
    return total


def batch_evaluate(instance: NetworkInstance, r, p, t, tolerance=DEFAULT_TOLERANCE):
    """(cost totals, total violations) for stacked flows; the GA hot path."""
    *_, total_cost = batch_cost_terms(instance, r, p, t)
    violation = batch_total_violation(instance, batch_residuals(instance, r, p, t), tolerance)
    return total_cost, violation


# ---------------------------------------------------------------------------
# Scalar API
# ---------------------------------------------------------------------------

def evaluate_cost(instance: NetworkInstance, plan: FlowPlan) -> CostBreakdown:
    """Total cost: raw purchase+transport, plant->DC transport, DC holding, DC->retailer transport."""
    _check_plan_shapes(instance, plan)
    raw, plant_dc, holding, dc_retailer, total = batch_cost_terms(
        instance,
        plan.raw_flow[None],
        plan.plant_dc_flow[None],
        plan.dc_retailer_flow[None],
    )
    return CostBreakdown(
        raw_cost=float(raw[0]),
        plant_to_dc_cost=float(plant_dc[0]),
        holding_cost=float(holding[0]),
        dc_to_retailer_cost=float(dc_retailer[0]),
        total=float(total[0]),
    )


def evaluate_constraints(
    instance: NetworkInstance, plan: FlowPlan, tolerance: float = DEFAULT_TOLERANCE
) -> ConstraintReport:
    """Signed residuals for every constraint and the aggregated violation."""
    _check_plan_shapes(instance, plan)
    if tolerance < 0:
        raise ValueError("tolerance must be >= 0")
    r = plan.raw_flow[None]
    p = plan.plant_dc_flow[None]
    t = plan.dc_retailer_flow[None]
    res = batch_residuals(instance, r, p, t)
    total = batch_total_violation(instance, res, tolerance)
    return ConstraintReport(
        residual_dc_storage=float(res["dc_storage"][0]),
        residual_production_vs_shipment=float(res["production_vs_shipment"][0]),
        demand_mismatch=res["demand_mismatch"][0].copy(),
        residual_raw_per_plant=res["raw_per_plant"][0].copy(),
        residual_plant_capacity=res["plant_capacity"][0].copy(),
        residual_supplier_capacity=res["supplier_capacity"][0].copy(),
        total_violation=float(total[0]),
        residual_dc_capacity=res["dc_capacity"][0].copy() if instance.strict_per_dc else None,
        residual_dc_throughput=res["dc_throughput"][0].copy() if instance.strict_per_dc else None,
    )


def is_feasible(report: ConstraintReport) -> bool:
    return report.total_violation == 0.0
