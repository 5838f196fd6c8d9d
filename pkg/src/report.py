"""
Verification records shared by every module that checks an identity.
"""

import math
from typing import Iterable, List

from pydantic import BaseModel, ConfigDict, Field, model_validator


class VerificationRecord(BaseModel):
    """One checked identity: its largest residual against a tolerance."""

    model_config = ConfigDict(frozen=True, populate_by_name=True)

    identity: str
    residual: float
    tolerance: float = Field(ge=0.0)
    passed: bool = Field(serialization_alias="pass", validation_alias="pass")

    @model_validator(mode="after")
    def _passed_matches_residual(self):
        expected = math.isfinite(self.residual) and self.residual <= self.tolerance
        if self.passed != expected:
            raise ValueError(f"pass flag {self.passed} contradicts residual {self.residual} "
                             f"and tolerance {self.tolerance} for {self.identity}")
        return self

    @classmethod
    def evaluate(cls, identity: str, residual: float, tolerance: float) -> "VerificationRecord":
        residual = float(residual)
        passed = math.isfinite(residual) and residual <= tolerance
        return cls(identity=identity, residual=residual, tolerance=float(tolerance), passed=passed)

    def to_json(self) -> dict:
        return self.model_dump(by_alias=True)


class VerificationReport(BaseModel):
    """Ordered collection of verification records."""

    records: List[VerificationRecord] = Field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(record.passed for record in self.records)

    @property
    def max_residual(self) -> float:
        return max((record.residual for record in self.records), default=0.0)

    def failures(self) -> List[VerificationRecord]:
        return [record for record in self.records if not record.passed]

    def get(self, identity: str) -> VerificationRecord:
        for record in self.records:
            if record.identity == identity:
                return record
        raise KeyError(identity)

    def add(self, identity: str, residual: float, tolerance: float) -> VerificationRecord:
        record = VerificationRecord.evaluate(identity, residual, tolerance)
        self.records.append(record)
        return record

    def extend(self, records: Iterable[VerificationRecord]) -> "VerificationReport":
        self.records.extend(records)
        return self

    def sorted(self) -> "VerificationReport":
        return VerificationReport(records=sorted(self.records, key=lambda r: r.identity))

    def to_json(self) -> list:
        return [record.to_json() for record in self.records]
