"""Check results and the aggregate report emitted by the verification
driver.  Wall times are informational and excluded from determinism
comparisons; everything else in a report is a pure function of the
configuration."""

from __future__ import annotations

from dataclasses import dataclass

from .formats import fmt_float


@dataclass(frozen=True)
class CheckResult:
    name: str
    max_deviation: float
    tolerance: float
    passed: bool
    samples: int
    seconds: float

    def line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return (f"{status}  {self.name:<40s} max_dev={self.max_deviation:<12.3e} "
                f"tol={self.tolerance:<9.1e} samples={self.samples:<5d} "
                f"({self.seconds:.2f}s)")


@dataclass(frozen=True)
class Report:
    config: dict
    checks: tuple

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def lines(self):
        out = [c.line() for c in self.checks]
        status = "PASS" if self.passed else "FAIL"
        out.append(f"{status}  {len(self.checks)} checks "
                   f"({sum(not c.passed for c in self.checks)} failing)")
        return out

    def to_json_obj(self, include_timing: bool = True) -> dict:
        checks = []
        for c in self.checks:
            entry = {
                "name": c.name,
                "max_deviation": c.max_deviation,
                "tolerance": c.tolerance,
                "passed": c.passed,
                "samples": c.samples,
            }
            if include_timing:
                entry["seconds"] = c.seconds
            checks.append(entry)
        return {"config": self.config, "checks": checks, "passed": self.passed}

    def to_csv(self, include_timing: bool = True) -> str:
        header = ["name", "max_deviation", "tolerance", "passed", "samples"]
        if include_timing:
            header.append("seconds")
        rows = [",".join(header)]
        for c in self.checks:
            row = [c.name, fmt_float(c.max_deviation), fmt_float(c.tolerance),
                   "true" if c.passed else "false", str(c.samples)]
            if include_timing:
                row.append(fmt_float(c.seconds))
            rows.append(",".join(row))
        return "\n".join(rows) + "\n"
