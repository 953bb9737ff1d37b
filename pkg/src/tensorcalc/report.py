"""Check records and machine-readable verification reports."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Dict, List, Optional, Sequence, Union

import numpy as np

SCHEMA_VERSION = 1

Number = Union[float, List]


def _jsonable(value) -> Number:
    arr = np.asarray(value)
    if arr.ndim == 0:
        return float(arr)
    return arr.tolist()


@dataclass
class CheckRecord:
    """One verified identity: what was compared, how close, and the verdict.

    ``measure`` says which residual the tolerance applies to ("rel" uses
    max(1, max(|lhs|, |rhs|)) as the scale).
    """

    id: str
    identity: str
    lhs: Number
    rhs: Number
    abs_residual: float
    rel_residual: float
    tolerance: float
    measure: str
    passed: bool
    details: Dict[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict:
        out = {
            "id": self.id,
            "identity": self.identity,
            "lhs": self.lhs,
            "rhs": self.rhs,
            "abs_residual": self.abs_residual,
            "rel_residual": self.rel_residual,
            "tolerance": self.tolerance,
            "measure": self.measure,
            "pass": self.passed,
        }
        if self.details:
            out["details"] = self.details
        return out


def make_check(
    check_id: str,
    identity: str,
    lhs,
    rhs,
    tolerance: float,
    measure: str = "rel",
    details: Optional[Dict[str, float]] = None,
) -> CheckRecord:
    """Build a record from two values; the residual is the Frobenius distance."""
    la = np.asarray(lhs, dtype=float)
    ra = np.asarray(rhs, dtype=float)
    abs_res = float(np.linalg.norm(np.ravel(la - ra)))
    scale = max(1.0, float(np.linalg.norm(np.ravel(la))), float(np.linalg.norm(np.ravel(ra))))
    rel_res = abs_res / scale
    value = rel_res if measure == "rel" else abs_res
    return CheckRecord(
        id=check_id,
        identity=identity,
        lhs=_jsonable(lhs),
        rhs=_jsonable(rhs),
        abs_residual=abs_res,
        rel_residual=rel_res,
        tolerance=float(tolerance),
        measure=measure,
        passed=bool(value <= tolerance),
        details=dict(details or {}),
    )


def make_bound_check(
    check_id: str,
    identity: str,
    value: float,
    tolerance: float,
    details: Optional[Dict[str, float]] = None,
) -> CheckRecord:
    """Record for a quantity that must stay below an absolute bound."""
    v = float(value)
    return CheckRecord(
        id=check_id,
        identity=identity,
        lhs=v,
        rhs=0.0,
        abs_residual=v,
        rel_residual=v,
        tolerance=float(tolerance),
        measure="abs",
        passed=bool(v <= tolerance),
        details=dict(details or {}),
    )


def make_floor_check(
    check_id: str,
    identity: str,
    value: float,
    floor: float,
    details: Optional[Dict[str, float]] = None,
) -> CheckRecord:
    """Record for a quantity that must stay ABOVE a floor (non-vanishing)."""
    v = float(value)
    return CheckRecord(
        id=check_id,
        identity=identity,
        lhs=v,
        rhs=floor,
        abs_residual=v,
        rel_residual=v,
        tolerance=float(floor),
        measure="floor",
        passed=bool(v >= floor),
        details=dict(details or {}),
    )


@dataclass
class VerificationReport:
    suite: str
    config: Dict[str, object]
    checks: List[CheckRecord]
    wall_time_s: float = 0.0

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "schema": SCHEMA_VERSION,
            "suite": self.suite,
            "config": self.config,
            "checks": [c.to_dict() for c in self.checks],
            "overall_pass": self.passed,
            "wall_time_s": self.wall_time_s,
        }

    def to_json(self, indent: int = 2) -> str:
        return json.dumps(self.to_dict(), indent=indent, sort_keys=False)

    def summary_lines(self) -> List[str]:
        lines = []
        for c in self.checks:
            verdict = "pass" if c.passed else "FAIL"
            lines.append(
                f"[{verdict}] {c.id}: {c.measure} residual {c.abs_residual:.3e}"
                f" (rel {c.rel_residual:.3e}, tol {c.tolerance:.1e})"
            )
        status = "PASS" if self.passed else "FAIL"
        lines.append(f"{status}: {sum(c.passed for c in self.checks)}/{len(self.checks)} checks")
        return lines


def convergence_csv(rows: Sequence[dict]) -> str:
    """Render convergence rows as CSV with a monotone-decay flag per row.

    Each row needs: quantity, parameter, value, residual.  The decreasing
    flag compares against the previous row of the same quantity.
    """
    out = ["quantity,parameter,value,residual,decreasing"]
    last: Dict[str, float] = {}
    for r in rows:
        q = r["quantity"]
        res = float(r["residual"])
        prev = last.get(q)
        dec = "" if prev is None else str(res < prev).lower()
        last[q] = res
        out.append(f"{q},{r['parameter']},{r['value']:.6g},{res:.12e},{dec}")
    return "\n".join(out) + "\n"
