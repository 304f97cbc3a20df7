"""Pass/fail reports returned by every verification routine."""

from __future__ import annotations

from typing import Any


class Report:
    """Outcome of one check, possibly made of sub-checks.

    A report passes when its own identities hold and every child passes;
    the first failing identity is kept as the witness.
    """

    def __init__(self, check: str, passed: bool = True, message: str = "",
                 witness: dict[str, Any] | None = None):
        self.check = check
        self.ok = passed
        self.checked = 0
        self.witness = witness
        self.message = message
        self.children: list[Report] = []

    @property
    def passed(self) -> bool:
        return self.ok and all(c.passed for c in self.children)

    @passed.setter
    def passed(self, value: bool) -> None:
        self.ok = value

    def record(self, ok: bool, witness: dict[str, Any] | None = None, message: str = "") -> bool:
        """Count one identity; the first failure is kept as the witness."""
        self.checked += 1
        if not ok and self.ok:
            self.ok = False
            self.witness = witness
            self.message = message
        return ok

    def fail(self, message: str, witness: dict[str, Any] | None = None) -> None:
        if self.ok:
            self.ok = False
            self.message = message
            self.witness = witness

    def add(self, child: "Report") -> "Report":
        self.children.append(child)
        return child

    @property
    def total(self) -> int:
        """Identities counted here and in all children."""
        return self.checked + sum(c.total for c in self.children)

    def __bool__(self):
        return self.passed

    def first_failure(self) -> "Report | None":
        if self.passed:
            return None
        if not self.ok:
            return self
        for c in self.children:
            if not c.passed:
                return c.first_failure()
        return self

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"check": self.check, "passed": self.passed, "checked": self.total}
        if self.message:
            out["message"] = self.message
        if self.witness is not None:
            out["witness"] = {k: str(v) for k, v in self.witness.items()}
        if self.children:
            out["children"] = [c.to_dict() for c in self.children]
        return out

    def lines(self, indent: int = 0) -> list[str]:
        pad = "  " * indent
        head = f"{pad}[{'PASS' if self.passed else 'FAIL'}] {self.check}"
        if self.total:
            head += f" ({self.total} identities)"
        out = [head]
        if not self.ok:
            if self.message:
                out.append(f"{pad}    {self.message}")
            for k, v in (self.witness or {}).items():
                out.append(f"{pad}    {k}: {v}")
        for c in self.children:
            out.extend(c.lines(indent + 1))
        return out

    def __str__(self):
        return "\n".join(self.lines())

    def __repr__(self):
        return f"Report({self.check!r}, passed={self.passed})"
