"""
osmoflow - Validation report
Shared diagnostics container for store and workflow validation
"""

from dataclasses import dataclass, field
from typing import List


@dataclass(frozen=True, order=True)
class Violation:
    code: str
    subject: str
    message: str
    line: int = 0

    def format(self, path: str = "") -> str:
        where = ""
        if path:
            where = f"{path}:{self.line}: " if self.line else f"{path}: "
        return f"{where}[{self.code}] {self.subject}: {self.message}"


@dataclass
class ValidationReport:
    violations: List[Violation] = field(default_factory=list)
    warnings: List[Violation] = field(default_factory=list)

    def add(self, code: str, subject: str, message: str, line: int = 0):
        self.violations.append(Violation(code, subject, message, line))

    def warn(self, code: str, subject: str, message: str, line: int = 0):
        self.warnings.append(Violation(code, subject, message, line))

    def finalize(self) -> 'ValidationReport':
        """Sort and deduplicate so equal inputs give equal reports"""
        self.violations = sorted(set(self.violations))
        self.warnings = sorted(set(self.warnings))
        return self

    def merge(self, other: 'ValidationReport') -> 'ValidationReport':
        merged = ValidationReport(self.violations + other.violations, self.warnings + other.warnings)
        return merged.finalize()

    def codes(self) -> List[str]:
        return [v.code for v in self.violations]

    @property
    def ok(self) -> bool:
        return not self.violations

    @property
    def is_empty(self) -> bool:
        return not self.violations and not self.warnings

    def __len__(self) -> int:
        return len(self.violations)
