"""Structured pass/fail reports shared by every validator in the package.

A report is a flat list of findings.  Rendering is deterministic: findings
are sorted by node id, then by condition code, then by message, so the same
input always produces byte-identical output.
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class Finding:
    code: str
    node: object = None
    message: str = ""

    def line(self) -> str:
        if self.node is None:
            return f"{self.code} {self.message}".rstrip()
        return f"{self.code} node={self.node} {self.message}".rstrip()


@dataclass
class Report:
    findings: list[Finding] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.findings

    def add(self, code: str, node=None, message: str = "") -> None:
        self.findings.append(Finding(code, node, message))

    def merge(self, other: "Report", context: str = "") -> None:
        """Fold another report's findings in, optionally tagging each message."""
        for f in other.findings:
            message = f"{context}: {f.message}".strip(": ") if context else f.message
            self.findings.append(Finding(f.code, f.node, message))

    def sorted_findings(self) -> list[Finding]:
        return sorted(
            self.findings,
            key=lambda f: ("" if f.node is None else str(f.node), f.code, f.message),
        )

    def render(self) -> str:
        if self.ok:
            return "OK"
        return "\n".join(f.line() for f in self.sorted_findings())
