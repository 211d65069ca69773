"""Machine-readable verification verdicts."""
from __future__ import annotations

import json
import time
from contextlib import contextmanager
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Any

PASS, FAIL, ERROR = "PASS", "FAIL", "ERROR"


class ParameterError(ValueError):
    """A precondition on the inputs does not hold."""


class VerificationError(AssertionError):
    """An asserted identity failed; ``witness`` locates the failure."""

    def __init__(self, message: str, witness: Any = None):
        super().__init__(message)
        self.witness = witness


@dataclass
class Report:
    task: str
    params: dict
    verdict: str = PASS
    dims: dict = field(default_factory=dict)
    witnesses: list = field(default_factory=list)
    elapsed_ms: int = 0

    @property
    def ok(self) -> bool:
        return self.verdict == PASS

    def fail(self, message: str, witness: Any = None) -> "Report":
        self.verdict = FAIL
        self.witnesses.append({"message": message, "witness": _jsonable(witness)})
        return self

    def to_dict(self) -> dict:
        return {
            "task": self.task,
            "params": _jsonable(self.params),
            "verdict": self.verdict,
            "dims": _jsonable(self.dims),
            "witnesses": _jsonable(self.witnesses),
            "elapsed_ms": self.elapsed_ms,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, separators=(",", ":"))


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


@contextmanager
def timed(report: Report):
    t0 = time.perf_counter()
    try:
        yield report
    finally:
        report.elapsed_ms = int((time.perf_counter() - t0) * 1000)


def serialize_element(elem: dict) -> list[dict]:
    """Section elements as ``[{indices: [...], coeff: "num/den"}]``, sorted."""
    out = []
    for lab in sorted(elem, key=repr):
        idx = lab if isinstance(lab, tuple) else (lab,)
        c = Fraction(elem[lab])
        out.append({"indices": _jsonable(list(idx)), "coeff": f"{c.numerator}/{c.denominator}"})
    return out
