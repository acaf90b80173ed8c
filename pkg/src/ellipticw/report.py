"""Result containers for identity checks."""
from __future__ import annotations

import math
from dataclasses import dataclass, field


@dataclass
class CheckResult:
    name: str
    tolerance: float
    residuals: list = field(default_factory=list)
    skipped: int = 0
    conditions: list = field(default_factory=list)
    notes: list = field(default_factory=list)
    params: dict = field(default_factory=dict)

    def add(self, residual: float, cond: float | None = None):
        self.residuals.append(float(residual))
        if cond is not None:
            self.conditions.append(float(cond))

    def skip(self, why: str | None = None):
        self.skipped += 1
        if why and why not in self.notes:
            self.notes.append(why)

    @property
    def samples(self) -> int:
        return len(self.residuals)

    @property
    def max_residual(self) -> float:
        return max(self.residuals) if self.residuals else math.nan

    @property
    def mean_residual(self) -> float:
        return math.fsum(self.residuals) / len(self.residuals) if self.residuals else math.nan

    @property
    def passed(self) -> bool:
        # NaN residuals fail; an empty check fails as well
        return bool(self.residuals) and all(r < self.tolerance for r in self.residuals)

    def to_dict(self) -> dict:
        out = {
            "name": self.name,
            "samples": self.samples,
            "skipped_degenerate": self.skipped,
            "max_residual": self.max_residual,
            "mean_residual": self.mean_residual,
            "tolerance": self.tolerance,
            "passed": self.passed,
        }
        if self.conditions:
            out["max_condition_number"] = max(self.conditions)
        if self.notes:
            out["notes"] = list(self.notes)
        if self.params:
            out["params"] = dict(self.params)
        return out

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status} {self.name}: max={self.max_residual:.3e} tol={self.tolerance:.1e} "
                f"n={self.samples} skipped={self.skipped}")


@dataclass
class VerificationReport:
    checks: list = field(default_factory=list)

    def extend(self, results):
        self.checks.extend(results)
        return self

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def to_dict(self) -> dict:
        return {
            "schema": 1,
            "passed": self.passed,
            "checks": [c.to_dict() for c in self.checks],
        }
