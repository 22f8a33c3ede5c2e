"""Named pass/fail/skipped checks collected into one report."""
from __future__ import annotations

from dataclasses import dataclass, field

__all__ = ["Check", "VerificationReport", "PASS", "FAIL", "SKIPPED"]

PASS, FAIL, SKIPPED = "pass", "fail", "skipped"


@dataclass
class Check:
    name: str
    status: str
    detail: str = ""


@dataclass
class VerificationReport:
    section: str
    checks: list = field(default_factory=list)

    def add(self, name: str, ok: bool, detail: str = "") -> bool:
        self.checks.append(Check(name, PASS if ok else FAIL, detail))
        return ok

    def skip(self, name: str, reason: str):
        if not reason:
            raise ValueError("a skipped check needs a reason")
        self.checks.append(Check(name, SKIPPED, reason))

    def run(self, name: str, fn):
        """Record fn() -> (ok, detail); an exception counts as a failure."""
        try:
            ok, detail = fn()
        except Exception as exc:  # noqa: BLE001 - reported, not swallowed
            ok, detail = False, f"{type(exc).__name__}: {exc}"
        return self.add(name, ok, detail)

    @property
    def overall(self) -> str:
        return FAIL if any(c.status == FAIL for c in self.checks) else PASS

    @property
    def passed(self) -> bool:
        return self.overall == PASS

    def counted(self):
        return [c for c in self.checks if c.status != SKIPPED]

    def render(self) -> str:
        lines = [f"== {self.section} =="]
        for i, c in enumerate(self.checks, start=1):
            tail = f"  -- {c.detail}" if c.detail else ""
            lines.append(f"[{c.status.upper():7}] {i:2d}. {c.name}{tail}")
        n_pass = sum(c.status == PASS for c in self.checks)
        lines.append(f"overall: {self.overall} ({n_pass}/{len(self.counted())} checks passed)")
        return "\n".join(lines)

    def records(self) -> str:
        """One tab-separated record per check: section, index, status, name, detail."""
        return "\n".join(f"{self.section}\t{i}\t{c.status}\t{c.name}\t{c.detail}"
                         for i, c in enumerate(self.checks, start=1))
