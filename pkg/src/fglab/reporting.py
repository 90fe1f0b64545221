"""Campaign reports: deterministic JSON, flat CSV, serialization helpers.

A report is byte-reproducible: same configuration (including the seed)
gives the same JSON text.  Wall time therefore never enters the serialized
body; it is kept on the object for console display only.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from .gf import FieldSpec
from .linalg import MatrixVec, SubspaceBasis


@dataclass
class Report:
    theorem: str
    parameters: dict
    checked_count: int = 0
    counts: dict = field(default_factory=dict)
    failures: list = field(default_factory=list)
    witnesses: dict = field(default_factory=dict)
    seed: int = 0
    elapsed: float | None = None

    @property
    def passed(self) -> bool:
        return not self.failures

    def fail(self, kind: str, **details) -> None:
        self.failures.append({"kind": kind, **details})

    def body(self) -> dict:
        return {
            "theorem": self.theorem,
            "parameters": self.parameters,
            "checked_count": self.checked_count,
            "counts": self.counts,
            "failures": self.failures,
            "witnesses": self.witnesses,
            "seed": self.seed,
            "passed": self.passed,
        }

    def to_json(self) -> str:
        return json.dumps(self.body(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        """Counts only; failures stay in the JSON format."""
        cols = {
            "theorem": self.theorem,
            "seed": self.seed,
            "checked_count": self.checked_count,
            "passed": int(self.passed),
            "failure_count": len(self.failures),
        }
        for key in sorted(self.counts):
            cols[f"count.{key}"] = self.counts[key]
        header = ",".join(cols)
        row = ",".join(str(v) for v in cols.values())
        return f"{header}\n{row}\n"

    def summary(self) -> str:
        state = "PASS" if self.passed else f"FAIL ({len(self.failures)} failures)"
        t = f" [{self.elapsed:.2f}s]" if self.elapsed is not None else ""
        return f"{self.theorem}: {state} checked={self.checked_count}{t}"


def element_to_coeffs(field_spec: FieldSpec, code: int) -> list[int]:
    return list(field_spec.coeff_tuples[code])


def matrix_to_lists(m: MatrixVec) -> list[list[list[int]]]:
    return [[element_to_coeffs(m.field, c) for c in row] for row in m.entries]


def flat_to_lists(field_spec: FieldSpec, size: int, flat: tuple[int, ...]) -> list[list[list[int]]]:
    return matrix_to_lists(MatrixVec.from_flat(field_spec, size, flat))


def basis_to_lists(basis: SubspaceBasis) -> list[list[list[int]]]:
    return [[element_to_coeffs(basis.field, c) for c in row] for row in basis.rows]
