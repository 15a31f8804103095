"""Instance/result file formats: JSON instances, JSON results, CSV traces.

Instances round-trip exactly (full-precision floats).  Results are written in
a canonical form -- fixed key order, floats at 12 significant digits -- so a
loaded result re-serializes byte-identically.  All writes are whole-file
atomic (temp file + rename).
"""

from __future__ import annotations

import json
import os
import tempfile
from importlib import resources
from typing import Union

import numpy as np

from .network import NetworkInstance, validate_instance
from .nsga2 import SolveResult


class InstanceLoadError(ValueError):
    def __init__(self, errors):
        self.errors = list(errors)
        super().__init__("; ".join(self.errors))


def data_path(name: str):
    """Path to a bundled fixture file (table1.csv, baseline.instance.json, ...)."""
    return resources.files("pdnet").joinpath("data", name)


def _atomic_write(path, text: str):
    path = os.fspath(path)
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".pdnet-tmp-")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


# ---------------------------------------------------------------------------
# Canonical JSON (results): fixed key order by construction, %.12g floats
# ---------------------------------------------------------------------------

def _fmt(value):
    if value is None:
        return "null"
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return "%.12g" % float(value)
    if isinstance(value, str):
        return json.dumps(value)
    if isinstance(value, dict):
        return "{" + ",".join(f"{json.dumps(k)}:{_fmt(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (list, tuple)):
        return "[" + ",".join(_fmt(v) for v in value) + "]"
    if isinstance(value, np.ndarray):
        return _fmt(value.tolist())
    raise TypeError(f"cannot serialize {type(value)}")


def dumps_canonical(obj) -> str:
    return _fmt(obj) + "\n"


# ---------------------------------------------------------------------------
# Instances
# ---------------------------------------------------------------------------

_VECTOR_KEYS = ("supplier_capacity", "plant_capacity", "dc_capacity", "demand", "raw_unit_cost", "holding_unit_cost")
_MATRIX_KEYS = ("plant_dc_unit_cost", "dc_retailer_unit_cost")


def dumps_instance(instance: NetworkInstance) -> str:
    doc = {
        "counts": {
            "suppliers": instance.num_suppliers,
            "plants": instance.num_plants,
            "dcs": instance.num_dcs,
            "retailers": instance.num_retailers,
        },
        **{k: getattr(instance, k).tolist() for k in _VECTOR_KEYS},
        **{k: getattr(instance, k).tolist() for k in _MATRIX_KEYS},
        "utilization": instance.utilization,
        "strict_per_dc": instance.strict_per_dc,
    }
    return json.dumps(doc, indent=2) + "\n"


def save_instance(instance: NetworkInstance, path):
    _atomic_write(path, dumps_instance(instance))


def load_instance(text: str) -> NetworkInstance:
    """Parse and fully validate an instance document; raises InstanceLoadError."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise InstanceLoadError([f"malformed JSON at line {exc.lineno}, column {exc.colno}: {exc.msg}"])
    errors = []
    if not isinstance(doc, dict):
        raise InstanceLoadError(["top level must be a JSON object"])
    counts = doc.get("counts")
    if not isinstance(counts, dict):
        errors.append("missing or malformed 'counts' object")
        counts = {}
    count_vals = {}
    for key in ("suppliers", "plants", "dcs", "retailers"):
        v = counts.get(key)
        if not isinstance(v, int) or v < 1:
            errors.append(f"counts.{key} must be an integer >= 1")
            v = 1
        count_vals[key] = v
    fields = {}
    for key in _VECTOR_KEYS:
        v = doc.get(key)
        if not isinstance(v, list) or not all(isinstance(x, (int, float)) for x in v):
            errors.append(f"'{key}' must be a numeric array")
            v = [0.0]
        fields[key] = v
    for key in _MATRIX_KEYS:
        v = doc.get(key)
        ok = isinstance(v, list) and v and all(
            isinstance(row, list) and all(isinstance(x, (int, float)) for x in row) for row in v
        )
        rect = ok and len({len(row) for row in v}) == 1
        if not rect:
            errors.append(f"'{key}' must be a rectangular numeric matrix")
            v = [[0.0]]
        fields[key] = v
    utilization = doc.get("utilization")
    if not isinstance(utilization, (int, float)):
        errors.append("'utilization' must be a number")
        utilization = 1.0
    strict = doc.get("strict_per_dc", False)
    if not isinstance(strict, bool):
        errors.append("'strict_per_dc' must be a boolean")
        strict = False
    if errors:
        raise InstanceLoadError(errors)

    instance = NetworkInstance(
        num_suppliers=count_vals["suppliers"],
        num_plants=count_vals["plants"],
        num_dcs=count_vals["dcs"],
        num_retailers=count_vals["retailers"],
        utilization=float(utilization),
        strict_per_dc=strict,
        **fields,
    )
    report = validate_instance(instance)
    if not report.ok:
        raise InstanceLoadError(report.issues)
    return instance


def load_instance_file(path) -> NetworkInstance:
    with open(path, encoding="utf-8") as fh:
        return load_instance(fh.read())


# ---------------------------------------------------------------------------
# Results and traces
# ---------------------------------------------------------------------------

def result_document(result: SolveResult) -> dict:
    best = None
    if result.best_feasible is not None:
        plan, breakdown = result.best_feasible
        best = {
            "cost_breakdown": {
                "raw_cost": breakdown.raw_cost,
                "plant_to_dc_cost": breakdown.plant_to_dc_cost,
                "holding_cost": breakdown.holding_cost,
                "dc_to_retailer_cost": breakdown.dc_to_retailer_cost,
                "total": breakdown.total,
            },
            "raw_flow": plan.raw_flow,
            "plant_dc_flow": plan.plant_dc_flow,
            "dc_retailer_flow": plan.dc_retailer_flow,
        }
    return {
        "best_feasible": best,
        "final_front": [
            {"cost": ind.cost, "violation": ind.violation} for ind in result.final_front
        ],
        "generations_run": result.generations_run,
        "terminated_by": result.terminated_by,
    }


def save_result(result: SolveResult, path):
    _atomic_write(path, dumps_canonical(result_document(result)))


def trace_csv(result: SolveResult) -> str:
    lines = ["generation,best_feasible_cost,mean_cost,min_violation,feasible_count"]
    for rec in result.trace:
        best = "" if rec.best_feasible_cost is None else "%.12g" % rec.best_feasible_cost
        lines.append(
            f"{rec.generation},{best},{'%.12g' % rec.mean_cost},"
            f"{'%.12g' % rec.min_violation},{rec.feasible_count}"
        )
    return "\n".join(lines) + "\n"


def emit_trace(result: SolveResult, path):
    _atomic_write(path, trace_csv(result))
